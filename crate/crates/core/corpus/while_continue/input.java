class WhileContinue {
    int sumOdd(int n) {
        int i = 0;
        int s = 0;
        while (i < n) {
            i++;
            if (i % 2 == 0) {
                continue;
            }
            s += i;
        }
        return s;
    }
}
