class ForBare {
    void spin(int a) {
        for (;;) {
            a++;
            if (a > 9) {
                return;
            }
        }
    }
}
