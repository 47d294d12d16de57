{
    int q = 7;
    return q;
}
