{
    init();
    legacy(cfg);
    run(cfg);
}
