package com.acme.tests.trace;

import com.acme.common.ComponentTest;
import com.acme.radio.*;
import java.util.Collections;
import java.util.List;
import java.util.Map;
import org.junit.Test;
import static com.acme.common.Assert.*;

public class TraceParseTest extends ComponentTest {

    private final String unitId = "RU-13";
    private final String lineId = "L13";
    private final String cellId = "C13";
    private final PowerController power = new PowerController();
    private final LineManager line = new LineManager();
    private Device device = new Device("RU-0");

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
        TestBegin("Check that we disable power on the unit");
        power.disablePower(unitId);
        assertTrue(!power.isPowerEnabled(unitId));
        TestEnd();
    }

    @Test
    public void handlesRepeat() {
        TestBegin("Check that we pause between steps, configure the cell and enable the line");
        sleepMillis(100); /* line.disableLine(lineId); */
        assertTrue(line.isLineEnabled(lineId));
        CellConfig cfg1 = new CellConfig(cellId).withBandwidth(20).withPower(30);
        cfg1.apply();
        Map<String, Integer> snap1 = cfg1.snapshot();
        assertEquals("bandwidth", 20, snap1.get("bandwidth"));
        if (!line.isLineEnabled(lineId)) {
            line.enableLine(lineId);
        } else {
            log("line " + lineId + " already enabled");
        }
        TestEnd();
    }

    @Test
    public void coversEdge() {
        TestBegin("Check that we run a background reset and verify all lines");
        Runnable task0 = new Runnable() {
            @Override
            public void run() {
                device.reset();
            }
        };
        task0.run();
        for (String l1 : line.listLines()) {
            assertNotNull(l1);
        }
        TestEnd();

        TestBegin("Check that we configure the cell");
        CellConfig cfg0 = new CellConfig(cellId).withBandwidth(20).withPower(30);
        cfg0.apply();
        Map<String, Integer> snap0 = cfg0.snapshot();
        assertEquals("bandwidth", 20, snap0.get("bandwidth"));
        TestEnd();
    }
}
