package bad;

public class Good {
    public void ok() {
        TestBegin("Still parsed");
        ok();
        TestEnd();
    }
}
