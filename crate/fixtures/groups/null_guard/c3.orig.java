{
    Entry e = get(k);
    e.visit(env);
    return e;
}
