{
    int j = next();
    if (j > 0) {
        take(j);
    }
}
