{
    Node n = find(key);
    prepare();
    n.visit(ctx);
    return n;
}
