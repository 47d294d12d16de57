{
    if (idx > 0) {
        take(idx);
    }
    return idx;
}
