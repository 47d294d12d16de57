{
    Entry e = get(k);
    if (e != null) {
        e.visit(env);
    }
    return e;
}
