{
    open();
    copy(left, right, 10);
    close();
}
