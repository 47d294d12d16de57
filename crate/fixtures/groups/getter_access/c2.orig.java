{
    clear();
    int v = box.width;
    fill(v);
}
