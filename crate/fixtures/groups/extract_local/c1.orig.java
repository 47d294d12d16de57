{
    prepare();
    use(compute(a));
}
