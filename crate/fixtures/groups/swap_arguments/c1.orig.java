{
    int n = 3;
    copy(src, dst, n);
}
