{
    init();
    run(cfg);
}
