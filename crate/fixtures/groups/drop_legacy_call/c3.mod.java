{
    prepare();
    run(data);
}
