{
    String f = file();
    try {
        risky(f);
    } catch (Exception e) {
        handle(e);
    }
}
