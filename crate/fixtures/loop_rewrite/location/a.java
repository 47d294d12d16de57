{
    setup();
    init(true, level);
    int c = 0;
    while (c < 99) {
        updateValue(c);
        c++;
        validate(c);
    }
    show(c);
    foo.close();
}
