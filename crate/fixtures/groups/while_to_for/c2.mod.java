{
    begin();
    for (int p = 0; p < limit; p++) {
        step(p);
    }
}
