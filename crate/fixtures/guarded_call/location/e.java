{
    Foo foo = getFoo();
    if (foo != null) {
        someMethod(foo);
        foo.run();
    }
    return foo;
}
