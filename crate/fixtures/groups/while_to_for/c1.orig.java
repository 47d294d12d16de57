{
    int i = 0;
    while (i < n) {
        step(i);
        i++;
    }
    done();
}
