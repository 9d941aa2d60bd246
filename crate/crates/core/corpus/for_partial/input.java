class ForPartial {
    void parts(int n) {
        int i = 0;
        for (; i < n; i++) {
            n--;
        }
        for (int j = n; ; j--) {
            if (j < 0) {
                break;
            }
        }
        int k;
        for (k = 0; k < 3; ) {
            k += 2;
        }
    }
}
