{
    int r = compute(x);
    r = r * 2;
    trace("exit");
    return r;
}
