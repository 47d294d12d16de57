{
    int t = compute(b + 1);
    use(t);
    finish();
}
