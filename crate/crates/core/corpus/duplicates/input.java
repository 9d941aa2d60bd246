class Duplicates {
    void dup(int a) {
        a = 1;
        if (a > 0) {
            a = 1;
        }
        int b = a / 2;
        return;
    }
}
