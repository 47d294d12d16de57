{
    Reader in = open(name);
    skip(in);
    read(in);
    in.close();
    return;
}
