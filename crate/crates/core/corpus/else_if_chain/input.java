class ElseIf {
    int grade(int s) {
        int g;
        if (s >= 90) {
            g = 4;
        } else if (s >= 75) {
            g = 3;
        } else if (s >= 50) {
            g = 2;
        } else {
            g = 0;
        }
        return g;
    }
}
