{
    Item item = lookup(id);
    item.visit(state);
    count++;
    return item;
}
