use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::ScenarioConfig;
use crate::channel::{ChannelRealization, PathSpec};
use crate::config::{FrameConfig, PrefixMode};
use crate::ddmatrix::{nmse, DdChannelMatrix};
use crate::error::Result;
use crate::grid::DdFrame;
use crate::metrics::rel_max_err;
use crate::modem::{dd_to_time, time_to_dd};
use crate::rng::{derive_seed, rng_from_seed};
use crate::timesim::{propagate_exact, propagate_taps, tap_response};

/// Channel with `paths` off-grid arrivals: CN(0,1) gains, excess delays
/// uniform in `[0, max_excess)` samples and speeds uniform in `[-v_max, v_max]`.
/// The first path moves at exactly `v_max` so the spread bound is attained.
pub fn random_channel(
    paths: usize,
    max_excess: f64,
    v_max: f64,
    wave_speed: f64,
    seed: u64,
    cfg: &FrameConfig,
) -> Result<ChannelRealization> {
    let mut rng = rng_from_seed(seed);
    let specs: Vec<PathSpec> = (0..paths)
        .map(|i| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let excess = rng.gen::<f64>() * max_excess;
            let speed = if i == 0 { v_max } else { v_max * rng.gen_range(-1.0..=1.0) };
            PathSpec { gain: Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2, excess_taps: excess, speed }
        })
        .collect();
    Ok(ChannelRealization::from_excess(&specs, wave_speed, v_max, cfg)?.with_seed(seed))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleOptions {
    pub m: usize,
    pub n: usize,
    pub q: usize,
    pub paths: usize,
    /// Target `b_max·NM`.
    pub spread: f64,
    pub trials: usize,
    pub seed: u64,
    /// Perturbs one kernel value before checking, to prove the checks bite.
    pub corrupt_kernel: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { m: 32, n: 8, q: 3, paths: 3, spread: 1.5, trials: 3, seed: 1, corrupt_kernel: false }
    }
}

impl OracleOptions {
    /// Small-frame options drawn from a scenario: its first `(N, M)` when
    /// they are small enough, otherwise `(8, 32)`.
    pub fn from_scenario(config: &ScenarioConfig) -> Self {
        let m = config.m.first().copied().filter(|&m| m <= 64).unwrap_or(32);
        let n = config.n.first().copied().filter(|&n| n <= 16).unwrap_or(8);
        let q = config.q.min((m - 1) / 8).max(1);
        Self { m, n, q, seed: config.seed, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub max_rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub options: OracleOptions,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

/// Cross-checks the independent propagation paths on small frames:
/// continuous-time propagation, the tap response, both matrix products, and
/// the kernel NMSE against dense matrices.
pub fn run_oracle_check(config: &ScenarioConfig, opts: &OracleOptions) -> Result<OracleReport> {
    let cfg = FrameConfig::new(opts.m, opts.n, config.sample_rate, config.carrier, opts.q, config.roll_off, PrefixMode::Rcp)?;
    let cfg_zp = cfg.with_prefix(PrefixMode::Zp);
    let v_max = opts.spread * config.wave_speed / cfg.nm() as f64;
    let max_excess = ((cfg.m() / 4) as f64).min(cfg.m() as f64 - 2.0 * cfg.q() as f64 - 2.0 * opts.spread.ceil() - 2.0);

    let names = ["taps_vs_exact", "rcp_vs_exact", "zp_vs_exact", "zp_vs_rcp", "nmse_dense_vs_banded"];
    let tolerances = [1e-9, 1e-9, 1e-9, 1e-12, 1e-12];
    let mut worst = [0.0f64; 5];

    for trial in 0..opts.trials as u64 {
        let seed = derive_seed(opts.seed, &[trial]);
        let channel = random_channel(opts.paths, max_excess, v_max, config.wave_speed, seed, &cfg)?;
        let x = DdFrame::random(cfg.m(), cfg.n(), derive_seed(seed, &[1]));

        let mut h = DdChannelMatrix::build(&channel, &cfg, true)?;
        if opts.corrupt_kernel {
            let k = h.kernel_mut();
            let (i, _) = k.iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).expect("kernel is nonempty");
            k[i] *= 1.0 + 1e-6;
        }

        let s = dd_to_time(&x, &cfg)?;
        let exact = propagate_exact(&s, &channel, &cfg)?;
        let tapped = propagate_taps(&s, &tap_response(&channel, &cfg)?, &cfg)?;
        worst[0] = worst[0].max(rel_max_err(tapped.body(), exact.body()));
        let y_exact = time_to_dd(&exact, &cfg)?;
        worst[1] = worst[1].max(rel_max_err(h.apply_rcp(&x)?.as_slice(), y_exact.as_slice()));

        let h_zp = DdChannelMatrix::build(&channel, &cfg_zp, true)?;
        let (lo, hi) = h_zp.zp_support().expect("ZP-mode matrix carries its support");
        let mut xz = x.clone();
        xz.apply_guard(lo, hi);
        let y_zp_exact = time_to_dd(&propagate_exact(&dd_to_time(&xz, &cfg_zp)?, &channel, &cfg_zp)?, &cfg_zp)?;
        let y_zp = h_zp.apply_zp(&xz)?;
        worst[2] = worst[2].max(rel_max_err(y_zp.as_slice(), y_zp_exact.as_slice()));
        worst[3] = worst[3].max(rel_max_err(y_zp.as_slice(), h.apply_rcp(&xz)?.as_slice()));

        let h_hat = DdChannelMatrix::build(&channel, &cfg, false)?;
        let banded = nmse(&h, &h_hat)?;
        let (a, b) = (h.to_dense()?, h_hat.to_dense()?);
        let num: f64 = a.iter().zip(&b).map(|(p, q)| (p - q).norm_sqr()).sum();
        let den: f64 = a.iter().map(|p| p.norm_sqr()).sum();
        let dense = num / den;
        worst[4] = worst[4].max((banded - dense).abs() / dense.abs().max(f64::MIN_POSITIVE));
    }

    let checks: Vec<CheckResult> = names
        .iter()
        .zip(tolerances)
        .zip(worst)
        .map(|((name, tolerance), err)| CheckResult {
            name: name.to_string(),
            max_rel_err: err,
            tolerance,
            pass: err <= tolerance,
        })
        .collect();
    let pass = checks.iter().all(|c| c.pass);
    Ok(OracleReport { options: opts.clone(), checks, pass })
}
