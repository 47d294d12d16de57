{
    int r = compute(x);
    r = r * 2;
    return r;
}
