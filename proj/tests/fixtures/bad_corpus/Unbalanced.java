package bad;

public class Unbalanced {
    public void broken() {
        if (true) {
            broken();
    }
}
