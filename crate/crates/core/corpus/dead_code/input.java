class DeadCode {
    int dead(int x) {
        while (x > 0) {
            break;
            x--;
        }
        if (x == 0) {
            return 1;
        } else {
            return 2;
        }
        x = 3;
        return x;
    }
}
