{
    done();
}
