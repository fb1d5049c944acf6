package com.fix.lib;

public class Util {
    public static long now() {
        return 0L;
    }
}
