{
    try {
        String name = getName();
        init(verbose);
        int k = 0;
        while (k < 42) {
            updateValue(k);
            k++;
            updateValue(k);
        }
        printValue(k);
        foo.close();
    } catch (Exception e) {
        log(e);
    }
}
