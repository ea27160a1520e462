public class Loader {
    private static Loader instance;

    private Loader() {
    }

    public static void init() {
        instance = new Loader();
    }
}
