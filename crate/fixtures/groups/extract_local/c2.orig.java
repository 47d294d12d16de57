{
    use(compute(b + 1));
    finish();
}
