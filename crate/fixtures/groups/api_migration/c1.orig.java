{
    int a = size();
    send(a);
    flush();
}
