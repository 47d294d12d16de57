{
    for (int i = 0; i < n; i++) {
        step(i);
    }
    done();
}
