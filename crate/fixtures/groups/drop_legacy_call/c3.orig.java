{
    prepare();
    legacy(data);
    run(data);
}
