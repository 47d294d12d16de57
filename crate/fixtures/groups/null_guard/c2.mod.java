{
    Item item = lookup(id);
    if (item != null) {
        item.visit(state);
    }
    count++;
    return item;
}
