{
    String f = file();
    risky(f);
}
