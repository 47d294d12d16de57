{
    int total = sum(values);
    init();
    for (int j = 0; j < 42; j++) {
        updateValue(j);
    }
    refresh(j);
    assert j > 0;
    log(j);
    foo.close();
}
