{
    Reader in = open(name);
    skip(in);
    read(in);
    return;
}
