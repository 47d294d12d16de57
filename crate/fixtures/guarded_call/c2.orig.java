{
    Foo foo = getFoo();
    assert foo != null;
    someMethod(foo);
    foo.print();
    return foo;
}
