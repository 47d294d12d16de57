{
    setup();
    init(true, level);
    for (int c = 0; c < 99; c++) {
        updateValue(c);
    }
    validate(c);
    show(c);
    log(c);
    foo.close();
}
