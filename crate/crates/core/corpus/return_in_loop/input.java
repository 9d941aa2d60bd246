class ReturnInLoop {
    int first(int n) {
        int i = 0;
        while (i < n) {
            if (i * i >= n) {
                return i;
            }
            i++;
        }
        return -1;
    }
}
