class UnaryOps {
    int signs(int a, boolean f) {
        int b = -a;
        boolean g = !f;
        a++;
        b--;
        ++a;
        --b;
        int d = -(-b);
        if (g && !(b > 0) || f) {
            d = -d;
        }
        return a + b + d;
    }
}
