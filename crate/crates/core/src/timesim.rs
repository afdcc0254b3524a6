//! Time-domain propagation through the wideband channel.
//!
//! Two routes produce the received samples `y[m,ṅ]`:
//!
//! * [`propagate_exact`] evaluates the continuous channel directly on the
//!   synthesized waveform, `y(t) = Σ_i h_i e^{j2πν_i t} s((1 + b_i)t − τ_i)` at
//!   `t = (m + ṅM)T_s`. It never touches the tap decomposition and serves as
//!   the reference for everything else.
//! * [`propagate_taps`] applies the equivalent time-variant taps
//!   `g_l(m,ṅ) = Σ_i h_i e^{j2πk_i(m+ṅM)/(NM)} a((l − l_i + b_i(m+ṅM))T_s)`
//!   for `l ∈ [0, l'_max]`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::channel::ChannelRealization;
use crate::config::FrameConfig;
use crate::error::{Error, Result};
use crate::grid::TimeSamples;
use crate::modem::synthesize;
use crate::pulse::RaisedCosine;
use crate::rng::rng_from_seed;

/// Received samples from direct evaluation of the continuous channel.
///
/// The prefix column of the output is left at zero.
pub fn propagate_exact(samples: &TimeSamples, channel: &ChannelRealization, cfg: &FrameConfig) -> Result<TimeSamples> {
    samples.check_dims(cfg)?;
    let ts = cfg.sample_period();
    let mut out = TimeSamples::zeros(cfg.m(), cfg.n());
    out.body_mut().par_iter_mut().enumerate().for_each(|(pos, y)| {
        let t = pos as f64 * ts;
        *y = channel
            .paths()
            .iter()
            .map(|p| {
                let arrival = (1.0 + p.scaling) * t - p.delay;
                p.gain * Complex64::cis(2.0 * PI * p.doppler * t) * synthesize(arrival, samples, cfg)
            })
            .sum();
    });
    Ok(out)
}

/// Time-variant equivalent channel taps `g_l(m,ṅ)` for `l ∈ [0, l'_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TapResponse {
    m: usize,
    n: usize,
    taps: usize,
    /// `taps × NM`, tap-major, positions `m + ṅM` along each row.
    g: Vec<Complex64>,
}

impl TapResponse {
    /// Number of taps, `l'_max + 1`.
    pub fn len(&self) -> usize {
        self.taps
    }

    pub fn is_empty(&self) -> bool {
        self.taps == 0
    }

    pub fn l_max(&self) -> usize {
        self.taps - 1
    }

    /// `g_l(m,ṅ)`.
    pub fn get(&self, l: usize, m: usize, n_dot: usize) -> Complex64 {
        self.g[l * self.m * self.n + m + n_dot * self.m]
    }

    /// Tap `l` across the frame, indexed by position `m + ṅM`.
    pub fn tap(&self, l: usize) -> &[Complex64] {
        let nm = self.m * self.n;
        &self.g[l * nm..(l + 1) * nm]
    }

    /// Taps that are nonzero at position `m + ṅM`.
    pub fn support_at(&self, pos: usize) -> Vec<usize> {
        (0..self.taps).filter(|&l| self.tap(l)[pos] != Complex64::default()).collect()
    }

    #[cfg(test)]
    pub(crate) fn tap_mut(&mut self, l: usize) -> &mut [Complex64] {
        let nm = self.m * self.n;
        &mut self.g[l * nm..(l + 1) * nm]
    }
}

/// Builds the equivalent tap response for `channel`.
pub fn tap_response(channel: &ChannelRealization, cfg: &FrameConfig) -> Result<TapResponse> {
    let (_, l_hi) = channel.tap_range(cfg)?;
    let taps = l_hi as usize + 1;
    let nm = cfg.nm();
    let pulse = RaisedCosine::from_config(cfg);
    let mut resp = TapResponse { m: cfg.m(), n: cfg.n(), taps, g: vec![Complex64::default(); taps * nm] };
    resp.g.par_chunks_mut(nm).enumerate().for_each(|(l, row)| {
        for p in channel.paths() {
            for (pos, g) in row.iter_mut().enumerate() {
                let x = l as f64 - p.delay_taps + p.scaling * pos as f64;
                let a = pulse.eval(x);
                if a != 0.0 {
                    let phase = p.doppler_bins * pos as f64 / nm as f64;
                    *g += p.gain * Complex64::cis(2.0 * PI * phase) * a;
                }
            }
        }
    });
    Ok(resp)
}

/// Received samples through the tap response:
/// `y[m,ṅ] = Σ_l x[(m−l)_M, ṅ'] g_l(m,ṅ)` with `ṅ' = ṅ` for `m ≥ l` and
/// `ṅ' = ṅ − 1` otherwise.
///
/// `ṅ' = −1` reads the prefix column, so RCP frames wrap to `x[·, N−1]` and
/// ZP frames see zeros.
pub fn propagate_taps(samples: &TimeSamples, taps: &TapResponse, cfg: &FrameConfig) -> Result<TimeSamples> {
    samples.check_dims(cfg)?;
    if taps.m != cfg.m() || taps.n != cfg.n() {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{} taps", cfg.m(), cfg.n()),
            found: format!("{}x{}", taps.m, taps.n),
        });
    }
    if taps.taps > cfg.m() {
        return Err(Error::TapRange { l_max_prime: taps.taps as i64 - 1, m: cfg.m() });
    }
    let mut out = TimeSamples::zeros(cfg.m(), cfg.n());
    out.body_mut().par_iter_mut().enumerate().for_each(|(pos, y)| {
        *y = (0..taps.taps)
            .map(|l| samples.at_position(pos as isize - l as isize) * taps.tap(l)[pos])
            .sum();
    });
    Ok(out)
}

/// Adds circularly-symmetric complex Gaussian noise at `snr_db` relative to the
/// mean power of the `ṅ ∈ [0,N)` block. `f64::INFINITY` returns the input unchanged.
pub fn add_noise(samples: &TimeSamples, snr_db: f64, seed: u64) -> Result<TimeSamples> {
    if snr_db == f64::INFINITY {
        return Ok(samples.clone());
    }
    if !snr_db.is_finite() {
        return Err(Error::InvalidConfig(format!("SNR {snr_db} dB is not finite")));
    }
    let body = samples.body();
    let power = body.iter().map(|v| v.norm_sqr()).sum::<f64>() / body.len() as f64;
    if power == 0.0 {
        return Err(Error::ZeroPower);
    }
    let sigma = (power / 10f64.powf(snr_db / 10.0) / 2.0).sqrt();
    let mut rng = rng_from_seed(seed);
    let mut out = samples.clone();
    for v in out.body_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *v += Complex64::new(sigma * re, sigma * im);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{PathSpec, KNOT};
    use crate::config::PrefixMode;
    use crate::grid::DdFrame;
    use crate::metrics::rel_max_err;
    use crate::modem::dd_to_time;

    fn small(prefix: PrefixMode) -> FrameConfig {
        FrameConfig::new(32, 8, 5e3, 12.5e3, 3, 0.65, prefix).unwrap()
    }

    fn one_path(excess: f64, speed: f64, v_max: f64, cfg: &FrameConfig) -> ChannelRealization {
        let spec = PathSpec { gain: Complex64::new(1.0, 0.0), excess_taps: excess, speed };
        ChannelRealization::from_excess(&[spec], 1500.0, v_max, cfg).unwrap()
    }

    /// Three off-grid paths with wide Doppler scaling (b_max·NM ≈ 1.5).
    fn three_paths(cfg: &FrameConfig) -> ChannelRealization {
        let v_max = 1.5 * 1500.0 / cfg.nm() as f64;
        let specs = [
            PathSpec { gain: Complex64::new(0.8, 0.1), excess_taps: 0.3, speed: v_max },
            PathSpec { gain: Complex64::new(-0.3, 0.4), excess_taps: 2.71, speed: -0.6 * v_max },
            PathSpec { gain: Complex64::new(0.1, -0.25), excess_taps: 5.5, speed: 0.2 * v_max },
        ];
        ChannelRealization::from_excess(&specs, 1500.0, v_max, cfg).unwrap()
    }

    #[test]
    fn pure_doppler_rotation() {
        // zero delay, no scaling: only the carrier phase e^{j2πνt} remains
        let cfg = small(PrefixMode::Rcp);
        let mut r = one_path(0.0, 0.0, 0.0, &cfg);
        let p = &mut r.paths_mut()[0];
        p.delay = 0.0;
        p.delay_taps = 0.0;
        p.doppler = 1.7;
        let x = dd_to_time(&DdFrame::random(32, 8, 1), &cfg).unwrap();
        let y = propagate_exact(&x, &r, &cfg).unwrap();
        for pos in 0..cfg.nm() {
            let t = pos as f64 * cfg.sample_period();
            let want = x.body()[pos] * Complex64::cis(2.0 * PI * 1.7 * t);
            assert!((y.body()[pos] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn pure_delay() {
        let cfg = small(PrefixMode::Rcp);
        let r = one_path(4.0, 0.0, 0.0, &cfg);
        let l = r.paths()[0].delay_taps as isize;
        assert_eq!(l, 7);
        let x = dd_to_time(&DdFrame::random(32, 8, 2), &cfg).unwrap();
        let y = propagate_exact(&x, &r, &cfg).unwrap();
        for pos in 0..cfg.nm() as isize {
            let want = x.at_position(pos - l);
            assert!((y.body()[pos as usize] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn on_grid_taps_are_deltas() {
        let cfg = small(PrefixMode::Rcp);
        let r = one_path(4.0, 0.0, 0.0, &cfg);
        let g = tap_response(&r, &cfg).unwrap();
        for l in 0..g.len() {
            for &v in g.tap(l) {
                let want = if l == 7 { 1.0 } else { 0.0 };
                assert_eq!(v, Complex64::new(want, 0.0));
            }
        }
    }

    #[test]
    fn narrowband_taps_are_separable() {
        let cfg = small(PrefixMode::Rcp);
        let mut r = one_path(2.4, 0.0, 0.0, &cfg);
        r.paths_mut()[0].doppler_bins = 1.3;
        let g = tap_response(&r, &cfg).unwrap();
        let step = Complex64::cis(2.0 * PI * 1.3 / cfg.nm() as f64);
        for l in 0..g.len() {
            let row = g.tap(l);
            for pos in 1..cfg.nm() {
                assert!((row[pos].norm() - row[0].norm()).abs() < 1e-14);
                assert!((row[pos] - row[pos - 1] * step).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn identity_channel() {
        let cfg = small(PrefixMode::Rcp);
        let spec = PathSpec { gain: Complex64::new(1.0, 0.0), excess_taps: 0.0, speed: 0.0 };
        let mut r = ChannelRealization::from_excess(&[spec], 1500.0, 0.0, &cfg).unwrap();
        r.paths_mut()[0].delay_taps = 0.0;
        let g = tap_response(&r, &cfg).unwrap();
        let x = dd_to_time(&DdFrame::random(32, 8, 3), &cfg).unwrap();
        let y = propagate_taps(&x, &g, &cfg).unwrap();
        assert_eq!(y.body(), x.body());
    }

    #[test]
    fn single_tap_is_multiplicative() {
        let cfg = small(PrefixMode::Rcp);
        let mut g = TapResponse { m: 32, n: 8, taps: 1, g: vec![Complex64::default(); 256] };
        for (pos, v) in g.tap_mut(0).iter_mut().enumerate() {
            *v = Complex64::cis(0.01 * pos as f64) * (1.0 + pos as f64 / 100.0);
        }
        let x = dd_to_time(&DdFrame::random(32, 8, 4), &cfg).unwrap();
        let y = propagate_taps(&x, &g, &cfg).unwrap();
        for pos in 0..256 {
            assert_eq!(y.body()[pos], x.body()[pos] * g.tap(0)[pos]);
        }
    }

    #[test]
    fn taps_match_exact_propagation() {
        for prefix in [PrefixMode::Rcp, PrefixMode::Zp] {
            let cfg = small(prefix);
            let r = three_paths(&cfg);
            let g = tap_response(&r, &cfg).unwrap();
            let x = dd_to_time(&DdFrame::random(32, 8, 5), &cfg).unwrap();
            let exact = propagate_exact(&x, &r, &cfg).unwrap();
            let tapped = propagate_taps(&x, &g, &cfg).unwrap();
            let err = rel_max_err(tapped.body(), exact.body());
            assert!(err < 1e-9, "{prefix:?}: {err:e}");
        }
    }

    #[test]
    fn taps_stay_inside_the_range() {
        let cfg = small(PrefixMode::Rcp);
        let r = three_paths(&cfg);
        let (_, hi) = r.tap_range(&cfg).unwrap();
        let g = tap_response(&r, &cfg).unwrap();
        assert_eq!(g.len() as i64, hi + 1);
        let used: Vec<usize> = (0..g.len()).filter(|&l| g.tap(l).iter().any(|v| v.norm() > 0.0)).collect();
        assert_eq!(used.first(), Some(&0));
        assert!(*used.last().unwrap() as i64 >= r.l_max());
    }

    #[test]
    fn exact_propagation_is_linear() {
        let cfg = small(PrefixMode::Rcp);
        let r = three_paths(&cfg);
        let x1 = dd_to_time(&DdFrame::random(32, 8, 6), &cfg).unwrap();
        let x2 = dd_to_time(&DdFrame::random(32, 8, 7), &cfg).unwrap();
        let alpha = Complex64::new(0.3, -1.2);
        let mut mix = x1.clone();
        for (d, s) in mix.as_mut_slice().iter_mut().zip(x2.as_slice()) {
            *d = *d * alpha + s;
        }
        let y1 = propagate_exact(&x1, &r, &cfg).unwrap();
        let y2 = propagate_exact(&x2, &r, &cfg).unwrap();
        let ym = propagate_exact(&mix, &r, &cfg).unwrap();
        let want: Vec<Complex64> = y1.body().iter().zip(y2.body()).map(|(a, b)| a * alpha + b).collect();
        assert!(rel_max_err(ym.body(), &want) < 1e-13);
    }

    #[test]
    fn tap_support_varies_over_the_frame() {
        let cfg = small(PrefixMode::Rcp);
        let r = three_paths(&cfg);
        assert!(r.b_max() * (cfg.nm() - 1) as f64 >= 1.0);
        let g = tap_response(&r, &cfg).unwrap();
        let first = g.support_at(0);
        assert!((1..cfg.nm()).any(|pos| g.support_at(pos) != first));
    }

    #[test]
    fn peak_tap_drifts_once_per_inverse_scaling() {
        let cfg = FrameConfig::new(128, 32, 5e3, 12.5e3, 8, 0.65, PrefixMode::Rcp).unwrap();
        let r = one_path(7.5, KNOT, KNOT, &cfg);
        let p = r.paths()[0];
        assert_eq!(p.delay_taps, 16.5);
        let g = tap_response(&r, &cfg).unwrap();
        let argmax = |pos: usize| {
            (0..g.len()).max_by(|&a, &b| g.tap(a)[pos].norm().total_cmp(&g.tap(b)[pos].norm())).unwrap()
        };
        let peaks: Vec<usize> = (1..cfg.nm()).map(argmax).collect();
        let switch = peaks.iter().position(|&l| l != peaks[0]).unwrap() + 1;
        assert_eq!(peaks[0], 16);
        assert_eq!(peaks[switch - 1], 15);
        let expected = 1.0 / p.scaling;
        assert!((switch as f64 - expected).abs() <= 1.0, "{switch} vs {expected}");
        assert!(peaks[switch - 1..].iter().all(|&l| l == 15));
    }

    #[test]
    fn noise_statistics() {
        let cfg = FrameConfig::new(1024, 1024, 5e3, 12.5e3, 8, 0.65, PrefixMode::Rcp).unwrap();
        let x = dd_to_time(&DdFrame::random(1024, 1024, 8), &cfg).unwrap();
        assert_eq!(add_noise(&x, f64::INFINITY, 1).unwrap(), x);
        let a = add_noise(&x, 10.0, 5).unwrap();
        assert_eq!(a, add_noise(&x, 10.0, 5).unwrap());
        let sig: f64 = x.body().iter().map(|v| v.norm_sqr()).sum();
        let noise: f64 = a.body().iter().zip(x.body()).map(|(y, s)| (y - s).norm_sqr()).sum();
        let snr = 10.0 * (sig / noise).log10();
        assert!((snr - 10.0).abs() < 0.1, "{snr}");
        assert!(add_noise(&TimeSamples::zeros(32, 8), 10.0, 1).is_err());
        assert!(add_noise(&x, f64::NAN, 1).is_err());
    }
}
