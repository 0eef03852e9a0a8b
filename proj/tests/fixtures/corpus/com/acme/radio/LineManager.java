package com.acme.radio;

import com.acme.common.Result;
import java.util.ArrayList;
import java.util.List;
import java.util.Set;
import java.util.TreeSet;

public class LineManager {

    private final Set<String> enabled = new TreeSet<>();

    public Result enableLine(String lineId) {
        enabled.add(lineId);
        return new Result(true, lineId, 0);
    }

    public Result disableLine(String lineId) {
        enabled.remove(lineId);
        return new Result(true, lineId, 0);
    }

    public List<String> listLines() {
        return new ArrayList<>(enabled);
    }

    public boolean isLineEnabled(String lineId) {
        return enabled.contains(lineId);
    }
}
