{
    open();
    copy(right, left, 10);
    close();
}
