class ForContinue {
    int skip(int n) {
        int s = 0;
        for (int i = 0; i < n; i += 1) {
            if (i == 3) {
                continue;
            }
            s = s + i * 2;
        }
        return s;
    }
}
