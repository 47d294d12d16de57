{
    Foo foo = getFoo();
    if (foo != null) {
        someMethod(foo);
        print(foo);
    }
    return foo;
}
