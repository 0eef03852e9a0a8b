package com.acme.common;

public class Assert {

    public static void assertTrue(String message, boolean condition) {
        if (!condition) {
            fail(message);
        }
    }

    public static void assertTrue(boolean condition) {
        assertTrue("assertion failed", condition);
    }

    public static void assertEquals(String message, Object expected, Object actual) {
        if (expected == null ? actual != null : !expected.equals(actual)) {
            fail(message);
        }
    }

    public static void assertNotNull(Object value) {
        assertTrue("null value", value != null);
    }

    public static void fail(String message) {
        throw new AssertionError(message);
    }
}
