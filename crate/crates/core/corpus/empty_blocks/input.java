class EmptyBlocks {
    void nothing(int a) {
        {
        }
        if (a > 0) {
        } else {
        }
        while (a < 0) {
        }
        ;
        if (a == 5) {
        }
        a = 1;
    }
}
