class CallsCompound {
    int mix(int a, int b) {
        int acc = 1;
        acc += a;
        acc -= b;
        acc *= 3;
        acc /= 2;
        acc %= 7;
        print(acc, a <= b, a >= b, a != b);
        boolean done = false;
        if (done || check(acc)) {
            acc = max(a, b) + abs(-1);
        }
        return acc;
    }
}
