//! ODDM transmitter and receiver.
//!
//! The transmitter applies a normalized `N`-point IDFT along the Doppler axis
//! of each delay bin (an inverse discrete Zak transform), adds one prefix
//! column and pulse-shapes the staggered samples:
//!
//! ```text
//! x[m,ṅ] = 1/√N Σ_n X[m,n] e^{j2πnṅ/N}
//! s(t)   = Σ_m Σ_{ṅ=-1}^{N-1} x[m,ṅ] a(t − mT_s − ṅT)
//! ```
//!
//! The receiver samples at `mT_s + ṅT` and applies the normalized `N`-point DFT.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::config::{FrameConfig, PrefixMode};
use crate::grid::{DdFrame, TimeSamples};
use crate::error::Result;
use crate::pulse::RaisedCosine;

fn row_transform(len: usize, inverse: bool) -> std::sync::Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    if inverse {
        planner.plan_fft_inverse(len)
    } else {
        planner.plan_fft_forward(len)
    }
}

/// Transmitter transform. The prefix column follows `cfg.prefix()`.
pub fn dd_to_time(frame: &DdFrame, cfg: &FrameConfig) -> Result<TimeSamples> {
    frame.check_dims(cfg)?;
    let (m_len, n_len) = (cfg.m(), cfg.n());
    let fft = row_transform(n_len, true);
    let scale = 1.0 / (n_len as f64).sqrt();
    let mut out = TimeSamples::zeros(m_len, n_len);
    let mut row = vec![Complex64::default(); n_len];
    for m in 0..m_len {
        row.copy_from_slice(frame.row(m));
        fft.process(&mut row);
        for (n_dot, v) in row.iter().enumerate() {
            out.set(m, n_dot as isize, v * scale);
        }
    }
    match cfg.prefix() {
        PrefixMode::Rcp => out.fill_cyclic_prefix(),
        PrefixMode::Zp => out.clear_prefix(),
    }
    Ok(out)
}

/// Receiver transform over the `ṅ ∈ [0,N)` block; the prefix column is ignored.
pub fn time_to_dd(samples: &TimeSamples, cfg: &FrameConfig) -> Result<DdFrame> {
    samples.check_dims(cfg)?;
    let (m_len, n_len) = (cfg.m(), cfg.n());
    let fft = row_transform(n_len, false);
    let scale = 1.0 / (n_len as f64).sqrt();
    let mut out = DdFrame::zeros(m_len, n_len);
    let mut row = vec![Complex64::default(); n_len];
    for m in 0..m_len {
        for (n_dot, v) in row.iter_mut().enumerate() {
            *v = samples.get(m, n_dot as isize);
        }
        fft.process(&mut row);
        for (dst, v) in out.row_mut(m).iter_mut().zip(&row) {
            *dst = v * scale;
        }
    }
    Ok(out)
}

/// Continuous transmit waveform `s(t)` at an arbitrary instant `t` (seconds).
///
/// Only the pulses whose support covers `t` are summed, so the cost is `O(Q)`.
pub fn synthesize(t: f64, samples: &TimeSamples, cfg: &FrameConfig) -> Complex64 {
    synthesize_normalized(t * cfg.sample_rate(), samples, &RaisedCosine::from_config(cfg))
}

/// `s(u·T_s)` with `u` in sample periods.
pub(crate) fn synthesize_normalized(u: f64, samples: &TimeSamples, pulse: &RaisedCosine) -> Complex64 {
    let first = -(samples.m() as isize);
    let last = (samples.n() * samples.m()) as isize - 1;
    let q = pulse.half_len();
    let lo = ((u - q).floor() as isize).max(first);
    let hi = ((u + q).ceil() as isize).min(last);
    (lo..=hi)
        .map(|p| samples.at_position(p) * pulse.eval(u - p as f64))
        .sum()
}
