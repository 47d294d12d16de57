{
    start();
    String s = name();
    send(s);
}
