{
    slota(xa0);
    slotb(xb0);
    slotc(xc0);
    slotd(xd0);
    slote(xe0);
    slotf(xf0);
}
