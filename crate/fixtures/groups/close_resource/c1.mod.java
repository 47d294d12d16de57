{
    Reader r = open(path);
    read(r);
    r.close();
    return;
}
