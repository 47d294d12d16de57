{
    setup();
    risky(path);
    report();
}
