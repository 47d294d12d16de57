{
    slota(xa1);
    slotb(xb1);
    slotc(xc0);
    slotd(xd0);
    slote(xe0);
    slotf(xf0);
}
