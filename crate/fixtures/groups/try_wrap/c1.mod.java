{
    setup();
    try {
        risky(path);
    } catch (Exception e) {
        handle(e);
    }
    report();
}
