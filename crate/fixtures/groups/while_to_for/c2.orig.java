{
    begin();
    int p = 0;
    while (p < limit) {
        step(p);
        p++;
    }
}
