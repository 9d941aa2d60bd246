class WhileBreak {
    int find(int n) {
        int k = 1;
        while (true) {
            if (k * k > n) {
                break;
            }
            k = k + 1;
        }
        return k;
    }
}
