package com.fix.lib;

public class Socket {
    public Socket() {}
}
