package com.acme.trace;

public record TracePoint(String name, long at) {
    public TracePoint {
        if (at < 0) {
            throw new IllegalArgumentException("negative");
        }
    }

    public boolean after(TracePoint other) {
        return at > other.at();
    }
}
