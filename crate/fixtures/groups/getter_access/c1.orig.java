{
    int w = shape.width;
    draw(w);
}
