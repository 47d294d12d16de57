{
    load(opts);
    legacy(opts);
    run(opts);
    stop();
}
