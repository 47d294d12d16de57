{
    prepare();
    int t = compute(a);
    use(t);
}
