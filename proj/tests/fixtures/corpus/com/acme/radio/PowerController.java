package com.acme.radio;

import com.acme.common.Result;

/** Switches power on radio units. */
public class PowerController {

    private int level = 30;

    public Result enablePower(String unitId) {
        calibrate();
        return new Result(true, "enabled " + unitId, 0);
    }

    public Result disablePower(String unitId) {
        return new Result(true, "disabled " + unitId, 0);
    }

    public boolean isPowerEnabled(String unitId) {
        return unitId != null;
    }

    public int readPowerLevel(String unitId) {
        return level;
    }

    public void setPowerLevel(String unitId, int level) {
        this.level = level;
    }

    private void calibrate() {
        level = Math.max(level, 0);
    }
}
