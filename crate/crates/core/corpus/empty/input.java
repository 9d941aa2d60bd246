class Empty {
    void empty() {
    }
}
