class LabeledContinue {
    int count(int n) {
        int total = 0;
        rows:
        while (n > 0) {
            n--;
            for (int j = 0; j < 4; j++) {
                if (j == n) {
                    continue rows;
                }
                total += j;
            }
        }
        return total;
    }
}
