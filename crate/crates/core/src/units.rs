//! Decibel and power unit conversions.
//!
//! Every dB/linear and dBm/mW conversion in the crate goes through these
//! helpers so the 10·log10 convention lives in exactly one place.

/// Convert a dB ratio to a linear power ratio.
#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a linear power ratio to dB.
#[inline]
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Convert a power in mW to dBm.
#[inline]
pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * mw.log10()
}

/// Convert a power in dBm to mW.
#[inline]
pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

/// Convert a power in W to dBm.
#[inline]
pub fn w_to_dbm(w: f64) -> f64 {
    mw_to_dbm(w * 1000.0)
}

/// Convert a power in dBm to W.
#[inline]
pub fn dbm_to_w(dbm: f64) -> f64 {
    dbm_to_mw(dbm) / 1000.0
}
