{
    check(y);
    boolean ok = valid(y);
    return ok;
}
