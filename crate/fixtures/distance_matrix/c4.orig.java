{
    slota(xa0);
    slotb(xb1);
    slotc(xc1);
    slotd(xd0);
    slote(xe0);
    slotf(xf0);
}
