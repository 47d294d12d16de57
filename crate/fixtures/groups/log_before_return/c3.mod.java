{
    int q = 7;
    trace("exit");
    return q;
}
