class LabelHeavy {
    int maze(int n) {
        int steps = 0;
        a:
        while (steps < n) {
            b:
            for (int x = 0; x < 3; x++) {
                c:
                while (true) {
                    if (x == steps) {
                        continue a;
                    }
                    if (x > steps) {
                        break b;
                    }
                    if (steps > 100) {
                        break a;
                    }
                    if (x == 2) {
                        continue b;
                    }
                    break c;
                }
                steps += x;
            }
            steps++;
        }
        return steps;
    }
}
