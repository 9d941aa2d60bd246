class Straight {
    int straight(int a) {
        int b = a + 1;
        int c = b * 2;
        a = c - b;
        return a;
    }
}
