{
    check(y);
    boolean ok = valid(y);
    trace("exit");
    return ok;
}
