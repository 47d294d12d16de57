{
    Foo foo = getFoo();
    if (foo != null) {
        someMethod(foo);
        foo.print();
    }
    return foo;
}
