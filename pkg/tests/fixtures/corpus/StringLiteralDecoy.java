public class Docs {
    public Docs() {
    }

    public String example() {
        return "private Docs() {} private static Docs instance; public static Docs getInstance() { return instance; }";
    }
}
