class NestedDeep {
    int deep(int a, int b) {
        int r = 0;
        while (a > 0) {
            for (int i = 0; i < b; i++) {
                if (i % 2 == 0) {
                    while (r < i) {
                        if (r == 7) {
                            r = r + 2;
                        } else {
                            r++;
                        }
                    }
                } else {
                    for (; r > i; ) {
                        r--;
                    }
                }
            }
            a--;
        }
        return r;
    }
}
