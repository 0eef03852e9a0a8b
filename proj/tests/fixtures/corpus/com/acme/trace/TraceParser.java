package com.acme.trace;

import java.util.List;

/** Turns raw trace lines into events. */
public interface TraceParser {

    TraceEvent parse(String line);

    List<TraceEvent> parseAll(List<String> lines);

    default boolean accepts(String line) {
        return line != null && !line.isEmpty();
    }

    static TraceParser defaultParser() {
        return new SimpleTraceParser();
    }
}
