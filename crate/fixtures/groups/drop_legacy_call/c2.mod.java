{
    load(opts);
    run(opts);
    stop();
}
