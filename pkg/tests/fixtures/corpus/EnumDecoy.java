public enum Runtime {
    INSTANCE;

    public void start() {
    }
}
