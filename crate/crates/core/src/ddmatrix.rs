//! Delay-Doppler channel matrix.
//!
//! The `NM × NM` matrix `H_DD` is never stored densely. It is represented by
//! the kernel
//!
//! ```text
//! G_l(m,k) = Σ_i h_i e^{j2πk_i m/(NM)} · 1/N Σ_ṅ e^{-j2πṅ(k−k_i)/N} a((l − l_i + b_i(m + ṅM))T_s)
//! ```
//!
//! for `l ∈ [0, l'_max]`. Row `mN + n` has entry `G_l(m,k)` in column
//! `N(m−l)_M + (n−k)_N`, multiplied by the prefix phase `φ[m−l, n−k]` when the
//! tap wraps into the previous multicarrier symbol (`m < l`).
//!
//! Each kernel value fills exactly `N` entries of unit-modulus weight, so
//! `‖H‖_F² = N Σ |G|²`. Setting `b_i = 0` inside the pulse yields the
//! DSE-ignorant kernel `Ĝ`, which shares the tap range and the `φ` pattern.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelRealization;
use crate::config::{FrameConfig, PrefixMode};
use crate::error::{Error, Result};
use crate::grid::DdFrame;
use crate::metrics::power_db;
use crate::pulse::RaisedCosine;

/// Largest `NM` for which [`DdChannelMatrix::to_dense`] will materialize `H_DD`.
pub const DENSE_LIMIT: usize = 1 << 12;

/// Synchronization used by the DSE-ignorant kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaselineSync {
    /// Same `l_min` offset as the wideband model.
    #[default]
    Keep,
    /// Narrowband synchronization: path delays move `⌊b_max(NM−1)⌋` taps earlier.
    Drop,
}

/// Which channel physics the kernel encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelModel {
    /// Full Doppler-squint model.
    Wideband,
    /// Doppler scaling dropped from the pulse argument; Doppler phase kept.
    Narrowband(BaselineSync),
}

impl KernelModel {
    pub fn from_dse(dse: bool) -> Self {
        if dse {
            KernelModel::Wideband
        } else {
            KernelModel::Narrowband(BaselineSync::Keep)
        }
    }
}

/// Prefix phase `φ[m', n']`: 1 for `0 ≤ m' < M`, `e^{-j2πn'/N}` for `-M < m' < 0`.
pub fn phase_phi(m_prime: i64, n_prime: i64, cfg: &FrameConfig) -> Result<Complex64> {
    let m = cfg.m() as i64;
    if m_prime <= -m || m_prime >= m {
        return Err(Error::PhaseIndex(m_prime));
    }
    if m_prime >= 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let n = cfg.n() as i64;
    Ok(wrap_phase(n_prime.rem_euclid(n) as usize, cfg.n()))
}

#[inline]
fn wrap_phase(n_prime: usize, n: usize) -> Complex64 {
    if n_prime == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::cis(-2.0 * PI * n_prime as f64 / n as f64)
    }
}

/// Zero-padding range `(m_min, m_max)` that removes inter-sample interference.
pub fn zp_range(channel: &ChannelRealization, cfg: &FrameConfig) -> Result<(usize, usize)> {
    let (m, n, q) = (cfg.m() as f64, cfg.n() as f64, cfg.q() as f64);
    let b = channel.b_max();
    let lo = (q - channel.l_min() as f64 - 1.0 + b * ((n - 1.0) * m - 1.0)).ceil() as i64;
    let lo = lo.max(0);
    let hi = (m - q - channel.l_max() as f64 - b * (n - 1.0) * m).floor() as i64;
    if hi < lo {
        return Err(Error::ZpRange { m_min: lo, m_max: hi });
    }
    Ok((lo as usize, hi as usize))
}

/// Banded delay-Doppler channel matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DdChannelMatrix {
    m: usize,
    n: usize,
    taps: usize,
    mode: PrefixMode,
    zp: Option<(usize, usize)>,
    /// `G_l(m,k)` at `(l·M + m)·N + k`.
    kernel: Vec<Complex64>,
    /// Whether any path has pulse support on row `(l, m)`.
    active: Vec<bool>,
}

impl DdChannelMatrix {
    /// Builds `H_DD` (`dse = true`) or the DSE-ignorant `Ĥ_DD` (`dse = false`).
    pub fn build(channel: &ChannelRealization, cfg: &FrameConfig, dse: bool) -> Result<Self> {
        Self::build_with(channel, cfg, KernelModel::from_dse(dse))
    }

    pub fn build_with(channel: &ChannelRealization, cfg: &FrameConfig, model: KernelModel) -> Result<Self> {
        let (_, l_hi) = channel.tap_range(cfg)?;
        let (m_len, n_len) = (cfg.m(), cfg.n());
        let taps = l_hi as usize + 1;
        let zp = match cfg.prefix() {
            PrefixMode::Zp => Some(zp_range(channel, cfg)?),
            PrefixMode::Rcp => None,
        };
        let pulse = RaisedCosine::from_config(cfg);
        let nm = cfg.nm() as f64;

        let (wideband, shift) = match model {
            KernelModel::Wideband => (true, 0.0),
            KernelModel::Narrowband(BaselineSync::Keep) => (false, 0.0),
            KernelModel::Narrowband(BaselineSync::Drop) => {
                (false, (channel.b_max() * (cfg.nm() - 1) as f64).floor())
            }
        };

        struct PathTerm {
            delay: f64,
            scaling: f64,
            /// `h_i e^{j2πk_i m/(NM)}` per delay bin `m`
            gain_m: Vec<Complex64>,
            /// pulse phasors at `b_i m − l_i` per `m`
            seed_m: Vec<[Complex64; 2]>,
            /// pulse phasors for one multicarrier-symbol step `b_i M`
            rot: [Complex64; 2],
            /// `e^{j2πṅk_i/N}`
            modulation: Vec<Complex64>,
        }
        let terms: Vec<PathTerm> = channel
            .paths()
            .iter()
            .map(|p| {
                let delay = p.delay_taps - shift;
                let scaling = if wideband { p.scaling } else { 0.0 };
                PathTerm {
                    delay,
                    scaling,
                    gain_m: (0..m_len)
                        .map(|m| p.gain * Complex64::cis(2.0 * PI * p.doppler_bins * m as f64 / nm))
                        .collect(),
                    seed_m: (0..m_len).map(|m| pulse.phasors(scaling * m as f64 - delay)).collect(),
                    rot: pulse.phasors(scaling * m_len as f64),
                    modulation: (0..n_len)
                        .map(|nd| Complex64::cis(2.0 * PI * nd as f64 * p.doppler_bins / n_len as f64))
                        .collect(),
                }
            })
            .collect();

        let fft = FftPlanner::new().plan_fft_forward(n_len);
        let mut kernel = vec![Complex64::default(); taps * m_len * n_len];
        let mut active = vec![false; taps * m_len];
        let inv_n = 1.0 / n_len as f64;
        let q = pulse.half_len();

        kernel
            .par_chunks_mut(m_len * n_len)
            .zip(active.par_chunks_mut(m_len))
            .enumerate()
            .for_each(|(l, (block, flags))| {
                let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
                let mut pulse_buf = vec![0.0; n_len];
                let l_phase = pulse.phasors(l as f64);
                for (m, (row, flag)) in block.chunks_mut(n_len).zip(flags.iter_mut()).enumerate() {
                    for t in &terms {
                        let x0 = l as f64 - t.delay + t.scaling * m as f64;
                        let step = t.scaling * m_len as f64;
                        let x1 = x0 + step * (n_len - 1) as f64;
                        if x0.min(x1) >= q || x0.max(x1) <= -q {
                            continue;
                        }
                        let c = t.gain_m[m];
                        if step == 0.0 {
                            let a = pulse.eval(x0);
                            if a != 0.0 {
                                *flag = true;
                                let ca = c * a;
                                for (w, md) in row.iter_mut().zip(&t.modulation) {
                                    *w += ca * md;
                                }
                            }
                        } else {
                            let seed = t.seed_m[m];
                            let start = [seed[0] * l_phase[0], seed[1] * l_phase[1]];
                            pulse.eval_progression_from(x0, step, start, t.rot, &mut pulse_buf);
                            for ((w, md), a) in row.iter_mut().zip(&t.modulation).zip(&pulse_buf) {
                                if *a != 0.0 {
                                    *flag = true;
                                    *w += c * md * a;
                                }
                            }
                        }
                    }
                    if *flag {
                        fft.process_with_scratch(row, &mut scratch);
                        row.iter_mut().for_each(|v| *v *= inv_n);
                    }
                }
            });

        Ok(Self { m: m_len, n: n_len, taps, mode: cfg.prefix(), zp, kernel, active })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of delay taps, `l'_max + 1`.
    pub fn taps(&self) -> usize {
        self.taps
    }

    pub fn mode(&self) -> PrefixMode {
        self.mode
    }

    /// Zero-padding support `(m_min, m_max)` for ZP-mode matrices.
    pub fn zp_support(&self) -> Option<(usize, usize)> {
        self.zp
    }

    /// `G_l(m,k)`.
    pub fn kernel(&self, l: usize, m: usize, k: usize) -> Complex64 {
        self.kernel[(l * self.m + m) * self.n + k]
    }

    /// `G_l(m, ·)` when any path has pulse support on row `(l, m)`.
    pub fn kernel_row(&self, l: usize, m: usize) -> Option<&[Complex64]> {
        let r = l * self.m + m;
        self.active[r].then(|| &self.kernel[r * self.n..(r + 1) * self.n])
    }

    pub fn is_active(&self, l: usize, m: usize) -> bool {
        self.active[l * self.m + m]
    }

    /// Raw kernel storage, `(l·M + m)·N + k`. Mutable access exists for
    /// fault-injection tests of the oracle checks.
    pub fn kernel_mut(&mut self) -> &mut [Complex64] {
        &mut self.kernel
    }

    pub fn kernel_values(&self) -> &[Complex64] {
        &self.kernel
    }

    /// Kernel values with `|G| > rel · max|G|`.
    pub fn count_significant(&self, rel: f64) -> usize {
        let peak = self.kernel.iter().map(|v| v.norm()).fold(0.0, f64::max);
        self.kernel.iter().filter(|v| v.norm() > rel * peak).count()
    }

    /// `‖H_DD‖_F²`.
    pub fn frobenius_sq(&self) -> f64 {
        self.n as f64 * self.kernel.iter().map(|v| v.norm_sqr()).sum::<f64>()
    }

    fn check_frame(&self, x: &DdFrame) -> Result<()> {
        if x.m() != self.m || x.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{} frame", self.m, self.n),
                found: format!("{}x{}", x.m(), x.n()),
            });
        }
        Ok(())
    }

    /// `Y = H_DD x` with the cyclic-prefix phase on wrapped taps.
    pub fn apply_rcp(&self, x: &DdFrame) -> Result<DdFrame> {
        self.check_frame(x)?;
        let (m_len, n_len) = (self.m, self.n);
        let phases: Vec<Complex64> = (0..n_len).map(|j| wrap_phase(j, n_len)).collect();
        let mut y = DdFrame::zeros(m_len, n_len);
        y.as_mut_slice().par_chunks_mut(n_len).enumerate().for_each(|(m, out)| {
            let mut src = vec![Complex64::default(); n_len];
            for l in 0..self.taps {
                let Some(g) = self.kernel_row(l, m) else { continue };
                let wrapped = m < l;
                let row = x.row((m + m_len - l) % m_len);
                if wrapped {
                    for ((s, v), ph) in src.iter_mut().zip(row).zip(&phases) {
                        *s = v * ph;
                    }
                } else {
                    src.copy_from_slice(row);
                }
                circular_accumulate(out, &src, g);
            }
        });
        Ok(y)
    }

    /// `Y = H_DD x` for zero-padded frames: linear in delay, no prefix phase.
    pub fn apply_zp(&self, x: &DdFrame) -> Result<DdFrame> {
        self.check_frame(x)?;
        let (m_min, m_max) = match (self.mode, self.zp) {
            (PrefixMode::Zp, Some(r)) => r,
            _ => return Err(Error::ModeMismatch("apply_zp needs a ZP-mode matrix".into())),
        };
        if let Some(m) = (0..self.m).find(|&m| (m < m_min || m > m_max) && x.row(m).iter().any(|v| v.norm() > 0.0)) {
            return Err(Error::ZpSupport { m, m_min, m_max });
        }
        let n_len = self.n;
        let mut y = DdFrame::zeros(self.m, n_len);
        y.as_mut_slice().par_chunks_mut(n_len).enumerate().for_each(|(m, out)| {
            for l in 0..self.taps.min(m + 1) {
                if let Some(g) = self.kernel_row(l, m) {
                    circular_accumulate(out, x.row(m - l), g);
                }
            }
        });
        Ok(y)
    }

    /// Matrix-vector product on the vectorized frame `x_DD`.
    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let frame = DdFrame::devectorize(self.m, self.n, x.to_vec())?;
        let y = match self.mode {
            PrefixMode::Rcp => self.apply_rcp(&frame)?,
            PrefixMode::Zp => self.apply_zp(&frame)?,
        };
        Ok(y.vectorize())
    }

    /// Dense `H_DD`, row-major `NM × NM`. Refuses frames with `NM` above
    /// [`DENSE_LIMIT`].
    pub fn to_dense(&self) -> Result<Vec<Complex64>> {
        let (m_len, n_len) = (self.m, self.n);
        let size = m_len * n_len;
        if size > DENSE_LIMIT {
            return Err(Error::InvalidConfig(format!("NM = {size} is too large for a dense matrix")));
        }
        let mut h = vec![Complex64::default(); size * size];
        for m in 0..m_len {
            for l in 0..self.taps {
                let Some(g) = self.kernel_row(l, m) else { continue };
                let col_m = (m + m_len - l) % m_len;
                for n in 0..n_len {
                    for (k, gv) in g.iter().enumerate() {
                        let col_n = (n + n_len - k) % n_len;
                        let phase = if m < l { wrap_phase(col_n, n_len) } else { Complex64::new(1.0, 0.0) };
                        h[(m * n_len + n) * size + col_m * n_len + col_n] += phase * gv;
                    }
                }
            }
        }
        Ok(h)
    }

    /// Writes the kernel as CSV with columns `l,m,k,re,im,mag_db`. Rows with
    /// no pulse support are skipped.
    pub fn write_kernel_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["l", "m", "k", "re", "im", "mag_db"])?;
        for l in 0..self.taps {
            for m in 0..self.m {
                let Some(g) = self.kernel_row(l, m) else { continue };
                for (k, v) in g.iter().enumerate() {
                    w.serialize((l, m, k, v.re, v.im, power_db(v.norm_sqr())))?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// `out[n] += Σ_k src[(n−k)_N] · g[k]`.
#[inline]
fn circular_accumulate(out: &mut [Complex64], src: &[Complex64], g: &[Complex64]) {
    let n_len = out.len();
    for (k, gv) in g.iter().enumerate() {
        if *gv == Complex64::default() {
            continue;
        }
        for (n, o) in out.iter_mut().enumerate() {
            *o += src[(n + n_len - k) % n_len] * gv;
        }
    }
}

/// `‖H − Ĥ‖_F² / ‖H‖_F²`, computed on the kernels.
pub fn nmse(h: &DdChannelMatrix, h_hat: &DdChannelMatrix) -> Result<f64> {
    if h.m != h_hat.m || h.n != h_hat.n || h.taps != h_hat.taps {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{} kernel with {} taps", h.m, h.n, h.taps),
            found: format!("{}x{} with {} taps", h_hat.m, h_hat.n, h_hat.taps),
        });
    }
    if h.mode != h_hat.mode {
        return Err(Error::ModeMismatch(format!("{:?} vs {:?}", h.mode, h_hat.mode)));
    }
    let (num, den) = h
        .kernel
        .iter()
        .zip(&h_hat.kernel)
        .fold((0.0, 0.0), |(num, den), (g, gh)| (num + (g - gh).norm_sqr(), den + g.norm_sqr()));
    if den == 0.0 {
        return Err(Error::ZeroPower);
    }
    Ok(num / den)
}
