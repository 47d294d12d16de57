{
    clear();
    int v = box.getWidth();
    fill(v);
}
