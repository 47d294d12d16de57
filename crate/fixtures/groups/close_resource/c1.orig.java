{
    Reader r = open(path);
    read(r);
    return;
}
