{
    Foo foo = getFoo();
    someMethod(foo);
    print(foo);
    return foo;
}
