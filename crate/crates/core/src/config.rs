//! Static frame parameters shared by every stage of the chain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default pulse half-length in samples.
pub const DEFAULT_Q: usize = 8;

/// How the single prefix column (`ṅ = -1`) of each multicarrier symbol is filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrefixMode {
    /// Reduced cyclic prefix: `x[m,-1] = x[m,N-1]`.
    Rcp,
    /// Zero padding: the prefix column is zero and guard delay bins carry no data.
    Zp,
}

/// Frame and pulse parameters of an ODDM system with `M` delay bins and
/// `N` Doppler bins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameConfig {
    m: usize,
    n: usize,
    sample_rate: f64,
    carrier: f64,
    q: usize,
    roll_off: f64,
    prefix: PrefixMode,
}

impl FrameConfig {
    pub fn new(
        m: usize,
        n: usize,
        sample_rate: f64,
        carrier: f64,
        q: usize,
        roll_off: f64,
        prefix: PrefixMode,
    ) -> Result<Self> {
        let cfg = Self { m, n, sample_rate, carrier, q, roll_off, prefix };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.m < 2 || self.n < 2 {
            return bad(format!("M = {} and N = {} must both be at least 2", self.m, self.n));
        }
        if self.q < 1 {
            return bad("pulse half-length Q must be at least 1".into());
        }
        // 2Q << M, enforced as 2Q < M/4
        if 8 * self.q >= self.m {
            return bad(format!("2Q = {} must be below M/4 = {}", 2 * self.q, self.m as f64 / 4.0));
        }
        if !(self.sample_rate.is_finite() && self.sample_rate > 0.0) {
            return bad(format!("sample rate {} must be positive", self.sample_rate));
        }
        if !(self.carrier.is_finite() && self.carrier > 0.0) {
            return bad(format!("carrier frequency {} must be positive", self.carrier));
        }
        if !(0.0..=1.0).contains(&self.roll_off) {
            return bad(format!("roll-off {} must lie in [0, 1]", self.roll_off));
        }
        Ok(())
    }

    pub fn with_prefix(mut self, prefix: PrefixMode) -> Self {
        self.prefix = prefix;
        self
    }

    pub fn with_q(self, q: usize) -> Result<Self> {
        Self::new(self.m, self.n, self.sample_rate, self.carrier, q, self.roll_off, self.prefix)
    }

    /// Number of delay bins (multicarrier symbols).
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of Doppler bins (subcarriers).
    pub fn n(&self) -> usize {
        self.n
    }

    /// `N·M`, the number of data samples in a frame.
    pub fn nm(&self) -> usize {
        self.n * self.m
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    /// Delay resolution `T_s = 1/f_s`.
    pub fn sample_period(&self) -> f64 {
        1.0 / self.sample_rate
    }

    /// Spacing between samples of one multicarrier symbol, `T = M·T_s`.
    pub fn symbol_spacing(&self) -> f64 {
        self.m as f64 / self.sample_rate
    }

    pub fn carrier(&self) -> f64 {
        self.carrier
    }

    /// Pulse half-length in samples.
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn roll_off(&self) -> f64 {
        self.roll_off
    }

    pub fn prefix(&self) -> PrefixMode {
        self.prefix
    }

    /// Doppler resolution `1/(N·M·T_s)` in Hz.
    pub fn doppler_resolution(&self) -> f64 {
        self.sample_rate / self.nm() as f64
    }

    /// Frame duration `N·M·T_s` in seconds.
    pub fn frame_duration(&self) -> f64 {
        self.nm() as f64 / self.sample_rate
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(m: usize, n: usize, q: usize) -> Result<FrameConfig> {
        FrameConfig::new(m, n, 5e3, 12.5e3, q, 0.65, PrefixMode::Rcp)
    }

    #[test]
    fn derived_quantities() {
        let c = cfg(128, 32, 8).unwrap();
        assert!((c.sample_period() - 2e-4).abs() < 1e-18);
        assert!((c.symbol_spacing() - 128.0 * 2e-4).abs() < 1e-15);
        assert!((c.frame_duration() - 0.8192).abs() < 1e-12);
        assert!((c.doppler_resolution() - 1.0 / 0.8192).abs() < 1e-12);
    }

    #[test]
    fn rejects_long_pulse() {
        assert!(cfg(64, 8, 8).is_err());
        assert!(cfg(64, 8, 7).is_ok());
        assert!(cfg(16, 8, 1).is_ok());
        assert!(cfg(16, 8, 2).is_err());
    }

    #[test]
    fn rejects_degenerate() {
        assert!(cfg(1, 8, 1).is_err());
        assert!(cfg(128, 1, 8).is_err());
        assert!(cfg(128, 8, 0).is_err());
        assert!(FrameConfig::new(128, 8, 0.0, 1.0, 8, 0.1, PrefixMode::Zp).is_err());
        assert!(FrameConfig::new(128, 8, 1.0, -1.0, 8, 0.1, PrefixMode::Zp).is_err());
        assert!(FrameConfig::new(128, 8, 1.0, 1.0, 8, 1.5, PrefixMode::Zp).is_err());
    }
}
