{
    int a = size();
    sendAll(a, TIMEOUT);
    flush();
}
