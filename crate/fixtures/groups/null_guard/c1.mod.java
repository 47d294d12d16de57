{
    Node n = find(key);
    prepare();
    if (n != null) {
        n.visit(ctx);
    }
    return n;
}
