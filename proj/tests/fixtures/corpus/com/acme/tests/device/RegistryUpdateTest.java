package com.acme.tests.device;

import com.acme.common.ComponentTest;
import com.acme.common.Result;
import com.acme.radio.*;
import com.acme.helpers.HelperClass;
import com.acme.helpers.Waits;
import java.util.Collections;
import java.util.List;
import java.util.Map;
import org.junit.Test;
import static com.acme.common.Assert.*;

public class RegistryUpdateTest extends ComponentTest {

    private final String unitId = "RU-9";
    private final String lineId = "L9";
    private final String cellId = "C9";
    private final PowerController power = new PowerController();
    private final LineManager line = new LineManager();

    private void verifyUnit(String id) {
        assertTrue(id != null);
    }

    private int helperOffset() {
        return 0;
    }

    private List<String> readLines(String name) {
        return Collections.singletonList(name);
    }

    @Test
    public void runsCleanly() {
        TestBegin("Check that we fail on an unknown result code, wait for the unit and enable power on the unit");
        Result r0 = power.enablePower(unitId);
        if (r0.getCode() != 0) {
            fail("unexpected code " + r0.getMessage());
        }
        boolean ready1 = Waits.waitFor("unit " + unitId + " ready()", 500);
        // Waits.pause(100); kept for slow rigs
        assertTrue(ready1);
        Result r2 = power.enablePower(unitId);
        assertTrue("Power is not enabled", r2.isSuccessful());
        TestEnd();

        TestBegin("Check that we configure the cell");
        CellConfig cfg0 = new CellConfig(cellId).withBandwidth(20).withPower(30);
        cfg0.apply();
        Map<String, Integer> snap0 = cfg0.snapshot();
        assertEquals("bandwidth", 20, snap0.get("bandwidth"));
        TestEnd();
    }

    @Test
    public void handlesRepeat() {
        TestBegin("Check that we verify all lines and pause between steps");
        for (String l0 : line.listLines()) {
            assertNotNull(l0);
        }
        sleepMillis(100); /* line.disableLine(lineId); */
        assertTrue(line.isLineEnabled(lineId));
        TestEnd();
    }

    @Test
    public void coversEdge() {
        TestBegin("Check that we verify all lines, refresh the helper and enable the line");
        for (String l0 : line.listLines()) {
            assertNotNull(l0);
        }
        HelperClass.getInstance().update();
        char open1 = '(';
        log("open paren " + open1);
        if (!line.isLineEnabled(lineId)) {
            line.enableLine(lineId);
        } else {
            log("line " + lineId + " already enabled");
        }
        TestEnd();
    }
}
