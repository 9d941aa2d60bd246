class Wide {
    int wide(int a, int b, int c) {
        int d = a + b;
        int e = b + c;
        int f = c + a;
        if (d > e) {
            d = e;
        }
        if (e > f) {
            e = f;
        }
        if (f > d) {
            f = d;
        }
        int g = d * e;
        int h = e * f;
        int k = f * d;
        return g + h + k;
    }
}
