package com.acme.radio;

/** Frequency bands. */
public enum Band {
    N41(2500), N78(3500) {
        @Override
        public String label() {
            return "mid";
        }
    };

    private final int mhz;

    Band(int mhz) {
        this.mhz = mhz;
    }

    public int mhz() {
        return mhz;
    }

    public String label() {
        return name().toLowerCase();
    }
}
