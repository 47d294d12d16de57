{
    Foo foo = getFoo();
    assert foo != null;
    someMethod(foo);
    foo.run();
    return foo;
}
