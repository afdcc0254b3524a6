//! Wideband multipath channel with per-path Doppler scaling.
//!
//! Each path `i` carries a baseband gain `h_i`, a delay `τ_i` and a closing
//! speed `v_i` (positive while the path length shrinks). The received
//! baseband signal is
//!
//! ```text
//! r(t) = Σ_i h_i · e^{j2πν_i t} · s((1 + b_i)·t − τ_i),   b_i = v_i / c,  ν_i = b_i f_c
//! ```
//!
//! so the delay drifts as `τ_i − b_i t` over the frame.

mod record;
mod tdl;
mod uwa;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::config::FrameConfig;
use crate::error::{Error, Result};

pub use record::{ChannelRecord, PathRecord};
pub use tdl::{gen_tdlc, TDL_C};
pub use uwa::{gen_uwa, UwaProfile};

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 3e8;
/// Nominal speed of sound in sea water, m/s.
pub const SPEED_OF_SOUND_WATER: f64 = 1500.0;
/// One knot in m/s.
pub const KNOT: f64 = 1852.0 / 3600.0;
/// One km/h in m/s.
pub const KMH: f64 = 1.0 / 3.6;

/// One propagation path with its derived normalized quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Path {
    /// Baseband gain, carrier phase `e^{-j2πf_cτ}` included.
    pub gain: Complex64,
    /// Propagation delay in seconds.
    pub delay: f64,
    /// Closing speed in m/s.
    pub speed: f64,
    /// Doppler scaling factor `b = v/c`.
    pub scaling: f64,
    /// Doppler shift at the carrier, Hz.
    pub doppler: f64,
    /// Delay in samples, `τ/T_s` (generally fractional).
    pub delay_taps: f64,
    /// Doppler in bins, `ν·N·M·T_s` (generally fractional).
    pub doppler_bins: f64,
}

impl Path {
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN speeds must be rejected
    pub fn derive(gain: Complex64, delay: f64, speed: f64, wave_speed: f64, cfg: &FrameConfig) -> Result<Self> {
        if !(wave_speed.is_finite() && wave_speed > 0.0) {
            return Err(Error::InvalidChannel(format!("wave speed {wave_speed} must be positive")));
        }
        if !(speed.abs() < wave_speed) {
            return Err(Error::Superluminal { v: speed, c: wave_speed });
        }
        if !delay.is_finite() {
            return Err(Error::InvalidChannel(format!("delay {delay} is not finite")));
        }
        let scaling = speed / wave_speed;
        let doppler = scaling * cfg.carrier();
        Ok(Self {
            gain,
            delay,
            speed,
            scaling,
            doppler,
            delay_taps: delay * cfg.sample_rate(),
            doppler_bins: doppler * cfg.frame_duration(),
        })
    }
}

/// A path described relative to the synchronization reference `l_min·T_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSpec {
    pub gain: Complex64,
    /// Delay beyond the synchronization reference, in samples.
    pub excess_taps: f64,
    pub speed: f64,
}

/// Synchronization reference `l_min = Q + ⌊b_max(NM − 1)⌋`.
pub fn sync_offset(b_max: f64, cfg: &FrameConfig) -> i64 {
    cfg.q() as i64 + (b_max * (cfg.nm() - 1) as f64).floor() as i64
}

/// A channel draw: paths plus the integer delay bounds used to frame it.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    paths: Vec<Path>,
    wave_speed: f64,
    v_max: f64,
    l_min: i64,
    l_max: i64,
    seed: Option<u64>,
    redraws: u32,
}

impl ChannelRealization {
    /// Builds a realization from absolute path delays.
    ///
    /// `l_min` is the synchronization reference for `v_max`; every path must
    /// arrive no earlier than it. `l_max = ⌈max l_i⌉`. Realizations whose
    /// equivalent tap range reaches `M` are rejected.
    pub fn new(paths: Vec<Path>, wave_speed: f64, v_max: f64, cfg: &FrameConfig) -> Result<Self> {
        if paths.is_empty() {
            return Err(Error::InvalidChannel("no paths".into()));
        }
        if !(v_max >= 0.0 && v_max < wave_speed) {
            return Err(Error::Superluminal { v: v_max, c: wave_speed });
        }
        let b_max = v_max / wave_speed;
        let l_min = sync_offset(b_max, cfg);
        let mut l_max = l_min;
        for (i, p) in paths.iter().enumerate() {
            if p.speed.abs() > v_max * (1.0 + 1e-12) {
                return Err(Error::InvalidChannel(format!(
                    "path {i} speed {} exceeds v_max {v_max}",
                    p.speed
                )));
            }
            if p.delay_taps < l_min as f64 - 1e-9 {
                return Err(Error::InvalidChannel(format!(
                    "path {i} delay {} taps precedes the synchronization reference {l_min}",
                    p.delay_taps
                )));
            }
            l_max = l_max.max(p.delay_taps.ceil() as i64);
        }
        let r = Self { paths, wave_speed, v_max, l_min, l_max, seed: None, redraws: 0 };
        r.tap_range(cfg)?;
        Ok(r)
    }

    /// Builds a realization from delays measured from the synchronization reference.
    pub fn from_excess(specs: &[PathSpec], wave_speed: f64, v_max: f64, cfg: &FrameConfig) -> Result<Self> {
        if !(v_max >= 0.0 && v_max < wave_speed) {
            return Err(Error::Superluminal { v: v_max, c: wave_speed });
        }
        let reference = sync_offset(v_max / wave_speed, cfg) as f64;
        let paths = specs
            .iter()
            .map(|s| {
                let taps = reference + s.excess_taps;
                let mut p = Path::derive(s.gain, taps * cfg.sample_period(), s.speed, wave_speed, cfg)?;
                p.delay_taps = taps;
                Ok(p)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(paths, wave_speed, v_max, cfg)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub(crate) fn with_redraws(mut self, redraws: u32) -> Self {
        self.redraws = redraws;
        self
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn wave_speed(&self) -> f64 {
        self.wave_speed
    }

    pub fn v_max(&self) -> f64 {
        self.v_max
    }

    /// `b_max = v_max / c`.
    pub fn b_max(&self) -> f64 {
        self.v_max / self.wave_speed
    }

    pub fn l_min(&self) -> i64 {
        self.l_min
    }

    pub fn l_max(&self) -> i64 {
        self.l_max
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Draws rejected by the generator before this one was accepted.
    pub fn redraws(&self) -> u32 {
        self.redraws
    }

    #[cfg(test)]
    pub(crate) fn paths_mut(&mut self) -> &mut Vec<Path> {
        &mut self.paths
    }

    pub fn total_power(&self) -> f64 {
        self.paths.iter().map(|p| p.gain.norm_sqr()).sum()
    }

    /// Equivalent sampled-channel tap range `(l'_min, l'_max)`.
    pub fn tap_range(&self, cfg: &FrameConfig) -> Result<(i64, i64)> {
        let spread = self.b_max() * (cfg.nm() - 1) as f64;
        let q = cfg.q() as f64;
        let lo = (self.l_min as f64 - q - spread).ceil() as i64;
        let hi = (self.l_max as f64 + q + spread).floor() as i64;
        if hi >= cfg.m() as i64 {
            return Err(Error::TapRange { l_max_prime: hi, m: cfg.m() });
        }
        Ok((lo, hi))
    }

    /// Time-variant frequency response `H(t,f)`.
    pub fn freq_response(&self, t: f64, f: f64) -> Complex64 {
        self.paths
            .iter()
            .map(|p| {
                let phase = -f * p.delay + p.doppler * t + p.scaling * f * t;
                p.gain * Complex64::cis(2.0 * PI * phase)
            })
            .sum()
    }

    /// Rescales the gains so that `Σ|h_i|² = 1`.
    pub(crate) fn normalize_power(&mut self) {
        let s = self.total_power().sqrt();
        if s > 0.0 {
            for p in &mut self.paths {
                p.gain /= s;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::PrefixMode;
    use crate::pulse::RaisedCosine;

    fn type2(n: usize, m: usize) -> FrameConfig {
        FrameConfig::new(m, n, 5e3, 12.5e3, 8, 0.65, PrefixMode::Rcp).unwrap()
    }

    fn type1(n: usize, m: usize) -> FrameConfig {
        FrameConfig::new(m, n, 15.36e6, 5e9, 8, 0.1, PrefixMode::Rcp).unwrap()
    }

    #[test]
    fn wideband_ratio_at_1000_kmh() {
        let cfg = type1(64, 512);
        let p = Path::derive(Complex64::new(1.0, 0.0), 0.0, 1000.0 * KMH, SPEED_OF_LIGHT, &cfg).unwrap();
        let ratio = p.scaling * cfg.nm() as f64;
        assert!(ratio > 0.030 && ratio < 0.031, "{ratio}");
    }

    #[test]
    fn static_path() {
        let cfg = type2(32, 128);
        let p = Path::derive(Complex64::new(1.0, 0.0), 1e-3, 0.0, 1500.0, &cfg).unwrap();
        assert_eq!((p.scaling, p.doppler, p.doppler_bins), (0.0, 0.0, 0.0));
        assert!((p.delay_taps - 5.0).abs() < 1e-12);
    }

    #[test]
    fn one_knot_underwater() {
        // b = 0.514444/1500, ν = b·12.5 kHz, k = ν·32·128·0.2 ms
        let cfg = type2(32, 128);
        let p = Path::derive(Complex64::new(1.0, 0.0), 0.0, KNOT, 1500.0, &cfg).unwrap();
        assert!((p.scaling - 3.4296e-4).abs() < 1e-8);
        assert!((p.doppler - 4.287).abs() < 1e-3);
        assert!((p.doppler_bins - 3.512).abs() < 1e-3);
    }

    #[test]
    fn rejects_supersonic() {
        let cfg = type2(32, 128);
        assert!(matches!(
            Path::derive(Complex64::new(1.0, 0.0), 0.0, 1500.0, 1500.0, &cfg),
            Err(Error::Superluminal { .. })
        ));
    }

    fn spec(excess_taps: f64, speed: f64) -> PathSpec {
        PathSpec { gain: Complex64::new(1.0, 0.0), excess_taps, speed }
    }

    #[test]
    fn narrowband_tap_range() {
        let cfg = type2(32, 128);
        let r = ChannelRealization::from_excess(&[spec(0.0, 0.0), spec(9.0, 0.0)], 1500.0, 0.0, &cfg)
            .unwrap();
        assert_eq!(r.l_min(), 8);
        assert_eq!(r.l_max(), 17);
        assert_eq!(r.tap_range(&cfg).unwrap(), (0, 25));
    }

    #[test]
    fn underwater_tap_range_one_knot() {
        let cfg = type2(32, 128);
        let r = ChannelRealization::from_excess(
            &[spec(0.0, KNOT), spec(8.0, -KNOT)],
            1500.0,
            KNOT,
            &cfg,
        )
        .unwrap();
        assert_eq!((r.l_min(), r.l_max()), (9, 17));
        assert_eq!(r.tap_range(&cfg).unwrap(), (0, 26));
    }

    /// Observed extent of nonzero per-path taps `a((l − l_i + b_i q)T_s)` over
    /// the whole frame, scanning every tap in a generous window.
    fn scan_support(r: &ChannelRealization, cfg: &FrameConfig) -> (i64, i64) {
        let pulse = RaisedCosine::from_config(cfg);
        let (mut lo, mut hi) = (i64::MAX, i64::MIN);
        for p in r.paths() {
            for q in 0..cfg.nm() {
                for l in r.l_min() - 3 * cfg.q() as i64..=r.l_max() + 3 * cfg.q() as i64 {
                    let x = l as f64 - p.delay_taps + p.scaling * q as f64;
                    if pulse.eval(x) != 0.0 {
                        lo = lo.min(l);
                        hi = hi.max(l);
                    }
                }
            }
        }
        (lo, hi)
    }

    #[test]
    fn tap_range_matches_brute_force_type2() {
        let cfg = type2(32, 128);
        let r = ChannelRealization::from_excess(
            &[spec(0.0, KNOT), spec(8.0, -KNOT)],
            1500.0,
            KNOT,
            &cfg,
        )
        .unwrap();
        assert_eq!(scan_support(&r, &cfg), r.tap_range(&cfg).unwrap());
    }

    #[test]
    fn tap_range_type1_750kmh() {
        let cfg = type1(64, 1024);
        let v = 750.0 * KMH;
        let spread = v / SPEED_OF_LIGHT * (cfg.nm() - 1) as f64;
        assert!((spread - 0.0455).abs() < 1e-4);
        let r = ChannelRealization::from_excess(
            &[spec(0.0, v), spec(12.0, -v)],
            SPEED_OF_LIGHT,
            v,
            &cfg,
        )
        .unwrap();
        // the extra spread is below one tap, so the bounds match the Q-only ones
        assert_eq!((r.l_min(), r.l_max()), (8, 20));
        assert_eq!(r.tap_range(&cfg).unwrap(), (0, 28));
        assert_eq!(scan_support(&r, &cfg), (0, 28));
    }

    #[test]
    fn rejects_overlong_channel() {
        let cfg = type2(32, 128);
        let err = ChannelRealization::from_excess(&[spec(115.0, 0.0)], 1500.0, 0.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::TapRange { .. }));
    }

    #[test]
    fn rejects_early_path() {
        let cfg = type2(32, 128);
        let p = Path::derive(Complex64::new(1.0, 0.0), 0.0, 0.0, 1500.0, &cfg).unwrap();
        assert!(ChannelRealization::new(vec![p], 1500.0, 0.0, &cfg).is_err());
    }

    #[test]
    fn freq_response_single_path() {
        let cfg = type2(32, 128);
        let h = Complex64::new(0.3, -0.4);
        let mk = |v: f64| {
            ChannelRealization::from_excess(
                &[PathSpec { gain: h, excess_taps: 6.5, speed: v }],
                1500.0,
                KNOT,
                &cfg,
            )
            .unwrap()
        };
        let r = mk(0.0);
        let tau = r.paths()[0].delay;
        for f in [-1000.0, 0.0, 250.0, 2400.0] {
            let want = h * Complex64::cis(-2.0 * PI * f * tau);
            assert!((r.freq_response(0.0, f) - want).norm() < 1e-12);
        }

        let r = mk(0.8 * KNOT);
        let p = r.paths()[0];
        for t in [0.0, 0.1, 0.7] {
            let want = h * Complex64::cis(2.0 * PI * p.doppler * t);
            assert!((r.freq_response(t, 0.0) - want).norm() < 1e-12);
        }
        // residual phase after removing delay and Doppler is 2π·b·f·t
        for (t, f) in [(0.01, 100.0), (0.2, -700.0), (0.5, 2000.0)] {
            let resid = r.freq_response(t, f) / h
                * Complex64::cis(2.0 * PI * f * p.delay)
                * Complex64::cis(-2.0 * PI * p.doppler * t);
            let want = Complex64::cis(2.0 * PI * p.scaling * f * t);
            assert!((resid - want).norm() < 1e-9);
        }
    }

    #[test]
    fn narrowband_response_has_no_cross_term() {
        let cfg = type2(32, 128);
        let specs = [PathSpec { gain: Complex64::new(0.7, 0.2), excess_taps: 10.5, speed: 0.0 }];
        let mut r = ChannelRealization::from_excess(&specs, 1500.0, KNOT, &cfg).unwrap();
        // narrowband surrogate: keep the carrier Doppler, drop the scaling
        r.paths_mut()[0].doppler = 3.0;
        for (t, f) in [(0.1, 100.0), (0.4, -900.0)] {
            let c = r.freq_response(t, f)
                * r.freq_response(0.0, f).conj()
                * r.freq_response(t, 0.0).conj()
                * r.freq_response(0.0, 0.0);
            assert!(c.arg().abs() < 1e-12);
        }
    }
}
