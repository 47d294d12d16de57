{
    int total = sum(values);
    init();
    int j = 0;
    while (j < 42) {
        updateValue(j);
        j++;
        refresh(j);
    }
    assert j > 0;
    foo.close();
}
