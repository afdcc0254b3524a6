//! Truncated raised-cosine Nyquist pulse.
//!
//! The pulse is the end-to-end response of transmit shaping and receive
//! filtering. It is evaluated in units of the sample period:
//!
//! ```text
//! a(x) = sinc(x) · cos(πβx) / (1 − (2βx)²),   |x| < Q
//! a(x) = 0,                                    |x| ≥ Q
//! ```
//!
//! with `a(0) = 1` and zeros at every nonzero integer `x`. The factor
//! `cos(πβx) / (1 − (2βx)²)` has a removable singularity at `|x| = 1/(2β)`.
//! It is computed through the identity
//! `cos(πu/2) / (1 − u²) = (π/2) · sinc((1 − |u|)/2) / (1 + |u|)` with `u = 2βx`.
//! That form is smooth through the singular point and yields the analytic limit
//! `π/4` there without dividing by zero.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::config::FrameConfig;

/// Normalized sinc, `sin(πy)/(πy)`, exactly zero at nonzero integers.
pub fn sinc(y: f64) -> f64 {
    if y == 0.0 {
        return 1.0;
    }
    if y.fract() == 0.0 {
        return 0.0;
    }
    // reduce to [-1, 1] so sin(πy) keeps full relative accuracy near integers
    (PI * reduce2(y)).sin() / (PI * y)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaisedCosine {
    roll_off: f64,
    half_len: f64,
}

impl RaisedCosine {
    pub fn new(roll_off: f64, half_len: usize) -> Self {
        Self { roll_off, half_len: half_len as f64 }
    }

    pub fn from_config(cfg: &FrameConfig) -> Self {
        Self::new(cfg.roll_off(), cfg.q())
    }

    pub fn roll_off(&self) -> f64 {
        self.roll_off
    }

    /// Half-length `Q` in samples.
    pub fn half_len(&self) -> f64 {
        self.half_len
    }

    /// True when `x` (in samples) lies strictly inside the truncation window.
    #[inline]
    pub fn in_support(&self, x: f64) -> bool {
        x.abs() < self.half_len
    }

    /// Pulse value at `x` sample periods from the peak.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        if !self.in_support(x) {
            return 0.0;
        }
        sinc(x) * self.taper(x)
    }

    /// Writes `a(x0 + step·i)` into `out[i]`.
    ///
    /// `sin(πx)` and `cos(πβx)` advance by phasor rotation instead of fresh
    /// trig calls, reseeded every few steps to bound drift. Points near `x = 0`
    /// or the taper singularity fall back to [`RaisedCosine::eval`]. The
    /// result agrees with `eval` to about `1e-14` but Nyquist zeros are not
    /// exact.
    pub fn eval_progression(&self, x0: f64, step: f64, out: &mut [f64]) {
        const RESEED: usize = 16;
        let rot = self.phasors(step);
        for (c, chunk) in out.chunks_mut(RESEED).enumerate() {
            let start = x0 + step * (c * RESEED) as f64;
            self.eval_progression_from(start, step, self.phasors(start), rot, chunk);
        }
    }

    /// `(e^{jπx}, e^{jπβx})`, the phasors carried by progression evaluation.
    pub fn phasors(&self, x: f64) -> [Complex64; 2] {
        [Complex64::cis(PI * reduce2(x)), Complex64::cis(PI * self.roll_off * x)]
    }

    /// [`RaisedCosine::eval_progression`] with caller-supplied phasors:
    /// `start = phasors(x0)` and `rot = phasors(step)`, possibly assembled from
    /// products of cached values. No reseeding happens, so drift grows
    /// linearly with `out.len()`.
    #[inline]
    pub fn eval_progression_from(&self, x0: f64, step: f64, start: [Complex64; 2], rot: [Complex64; 2], out: &mut [f64]) {
        let two_beta = 2.0 * self.roll_off;
        let [mut zs, mut zc] = start;
        for (i, o) in out.iter_mut().enumerate() {
            let x = x0 + step * i as f64;
            let d = 1.0 - (two_beta * x) * (two_beta * x);
            *o = if !self.in_support(x) {
                0.0
            } else if x.abs() < 1e-3 || d.abs() < 1e-3 {
                self.eval(x)
            } else {
                zs.im * zc.re / (PI * x * d)
            };
            zs *= rot[0];
            zc *= rot[1];
        }
    }

    /// `cos(πβx) / (1 − (2βx)²)`.
    #[inline]
    fn taper(&self, x: f64) -> f64 {
        let u = 2.0 * self.roll_off * x.abs();
        let e = 1.0 - u;
        if e == 0.0 {
            return FRAC_PI_4;
        }
        FRAC_PI_2 * sinc(0.5 * e) / (1.0 + u)
    }
}

/// `y` reduced modulo 2 into `[-1, 1]`.
#[inline]
fn reduce2(y: f64) -> f64 {
    y - 2.0 * (0.5 * y).round()
}

/// `a(t)` for a time offset `t` in seconds.
pub fn pulse_eval(t: f64, cfg: &FrameConfig) -> f64 {
    RaisedCosine::from_config(cfg).eval(t * cfg.sample_rate())
}
