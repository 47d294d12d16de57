{
    slota(xa2);
    slotb(xb0);
    slotc(xc0);
    slotd(xd1);
    slote(xe1);
    slotf(xf1);
}
