//! Delay-Doppler and time-domain sample containers.
//!
//! [`DdFrame`] stores `X[m,n]` row-major in delay, so its backing vector *is*
//! the vectorized frame `x_DD(mN + n) = X[m,n]`.
//!
//! [`TimeSamples`] stores `x[m,ṅ]` for `ṅ ∈ [-1, N)` in transmission order:
//! sample `(m, ṅ)` goes out at `(m + ṅM)·T_s`, and the prefix column comes first.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::config::FrameConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DdFrame {
    m: usize,
    n: usize,
    data: Vec<Complex64>,
}

impl DdFrame {
    pub fn zeros(m: usize, n: usize) -> Self {
        Self { m, n, data: vec![Complex64::default(); m * n] }
    }

    pub fn for_config(cfg: &FrameConfig) -> Self {
        Self::zeros(cfg.m(), cfg.n())
    }

    /// Frame with a single unit symbol at `(m0, n0)`.
    pub fn impulse(m: usize, n: usize, m0: usize, n0: usize) -> Self {
        let mut f = Self::zeros(m, n);
        f[(m0, n0)] = Complex64::new(1.0, 0.0);
        f
    }

    pub fn from_fn(m: usize, n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let data = (0..m * n).map(|i| f(i / n, i % n)).collect();
        Self { m, n, data }
    }

    /// Frame of i.i.d. unit-power complex Gaussian symbols.
    pub fn random(m: usize, n: usize, seed: u64) -> Self {
        let mut rng = crate::rng::rng_from_seed(seed);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_fn(m, n, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(s * re, s * im)
        })
    }

    /// Inverse of [`DdFrame::vectorize`].
    pub fn devectorize(m: usize, n: usize, vec: Vec<Complex64>) -> Result<Self> {
        if vec.len() != m * n {
            return Err(Error::DimensionMismatch {
                expected: format!("vector of length {}", m * n),
                found: format!("length {}", vec.len()),
            });
        }
        Ok(Self { m, n, data: vec })
    }

    /// `x_DD` with `x_DD(mN + n) = X[m,n]`.
    pub fn vectorize(&self) -> Vec<Complex64> {
        self.data.clone()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Doppler row for delay bin `m`.
    pub fn row(&self, m: usize) -> &[Complex64] {
        &self.data[m * self.n..(m + 1) * self.n]
    }

    pub fn row_mut(&mut self, m: usize) -> &mut [Complex64] {
        &mut self.data[m * self.n..(m + 1) * self.n]
    }

    pub fn energy(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn check_dims(&self, cfg: &FrameConfig) -> Result<()> {
        if self.m != cfg.m() || self.n != cfg.n() {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{} frame", cfg.m(), cfg.n()),
                found: format!("{}x{}", self.m, self.n),
            });
        }
        Ok(())
    }

    /// Zeroes every delay bin outside `[m_min, m_max]`.
    pub fn apply_guard(&mut self, m_min: usize, m_max: usize) {
        for m in (0..self.m).filter(|&m| m < m_min || m > m_max) {
            self.row_mut(m).fill(Complex64::default());
        }
    }
}

impl std::ops::Index<(usize, usize)> for DdFrame {
    type Output = Complex64;

    fn index(&self, (m, n): (usize, usize)) -> &Complex64 {
        debug_assert!(m < self.m && n < self.n);
        &self.data[m * self.n + n]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DdFrame {
    fn index_mut(&mut self, (m, n): (usize, usize)) -> &mut Complex64 {
        debug_assert!(m < self.m && n < self.n);
        &mut self.data[m * self.n + n]
    }
}

/// Time-domain samples `x[m,ṅ]`, `m ∈ [0,M)`, `ṅ ∈ [-1,N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSamples {
    m: usize,
    n: usize,
    /// `(N+1)·M` samples in transmission order, starting with the prefix column.
    data: Vec<Complex64>,
}

impl TimeSamples {
    pub fn zeros(m: usize, n: usize) -> Self {
        Self { m, n, data: vec![Complex64::default(); (n + 1) * m] }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn offset(&self, m: usize, n_dot: isize) -> usize {
        debug_assert!(m < self.m && n_dot >= -1 && n_dot < self.n as isize);
        ((n_dot + 1) as usize) * self.m + m
    }

    /// `x[m,ṅ]`; `ṅ = -1` addresses the prefix column.
    #[inline]
    pub fn get(&self, m: usize, n_dot: isize) -> Complex64 {
        self.data[self.offset(m, n_dot)]
    }

    #[inline]
    pub fn set(&mut self, m: usize, n_dot: isize, v: Complex64) {
        let i = self.offset(m, n_dot);
        self.data[i] = v;
    }

    /// Sample at linear position `p = m + ṅM`, `p ∈ [-M, NM)`.
    #[inline]
    pub fn at_position(&self, p: isize) -> Complex64 {
        self.data[(p + self.m as isize) as usize]
    }

    /// Every sample in transmission order, prefix column first.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// The `ṅ ∈ [0,N)` block in transmission order (position `m + ṅM`).
    pub fn body(&self) -> &[Complex64] {
        &self.data[self.m..]
    }

    pub fn body_mut(&mut self) -> &mut [Complex64] {
        let m = self.m;
        &mut self.data[m..]
    }

    pub fn prefix(&self) -> &[Complex64] {
        &self.data[..self.m]
    }

    /// Time of sample `(m, ṅ)` in seconds.
    pub fn sample_instant(m: usize, n_dot: isize, cfg: &FrameConfig) -> f64 {
        (m as f64 + n_dot as f64 * cfg.m() as f64) * cfg.sample_period()
    }

    /// Copies the last column into the prefix (`x[m,-1] = x[m,N-1]`).
    pub fn fill_cyclic_prefix(&mut self) {
        let (m, n) = (self.m, self.n);
        self.data.copy_within(n * m..(n + 1) * m, 0);
    }

    pub fn clear_prefix(&mut self) {
        let m = self.m;
        self.data[..m].fill(Complex64::default());
    }

    pub fn check_dims(&self, cfg: &FrameConfig) -> Result<()> {
        if self.m != cfg.m() || self.n != cfg.n() {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{} samples", cfg.m(), cfg.n()),
                found: format!("{}x{}", self.m, self.n),
            });
        }
        Ok(())
    }
}
