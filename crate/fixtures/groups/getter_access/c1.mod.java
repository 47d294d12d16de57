{
    int w = shape.getWidth();
    draw(w);
}
