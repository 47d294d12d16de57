{
    start();
    String s = name();
    sendAll(s, TIMEOUT);
}
