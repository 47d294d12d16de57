{
    int n = 3;
    copy(dst, src, n);
}
