class LabeledBreak {
    int search(int n) {
        int hit = -1;
        outer:
        for (int r = 0; r < n; r++) {
            for (int c = 0; c < n; c++) {
                if (r * c == n) {
                    hit = r;
                    break outer;
                }
            }
        }
        return hit;
    }
}
