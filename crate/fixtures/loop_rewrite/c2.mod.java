{
    try {
        String name = getName();
        init(verbose);
        for (int k = 0; k < 42; k++) {
            updateValue(k);
        }
        updateValue(k);
        printValue(k);
        print(k);
        foo.close();
    } catch (Exception e) {
        report(e);
    }
}
