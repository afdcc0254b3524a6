use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ScenarioConfig;
use crate::config::FrameConfig;
use crate::ddmatrix::{nmse, DdChannelMatrix, KernelModel};
use crate::error::Result;
use crate::rng::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub scenario: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub v_max_si: f64,
    pub nmse_mean: f64,
    pub nmse_stderr: f64,
    pub n_real: usize,
    pub seed: u64,
}

/// NMSE of the DSE-ignorant kernel for each of `realizations` channels drawn
/// at grid point `point`. Realization `r` uses seed
/// `derive_seed(master, [point, r])`, so results do not depend on scheduling.
pub fn nmse_point(config: &ScenarioConfig, cfg: &FrameConfig, v_max_si: f64, point: u64) -> Result<Vec<f64>> {
    (0..config.realizations as u64)
        .into_par_iter()
        .map(|r| {
            let channel = config.realize(v_max_si, derive_seed(config.seed, &[point, r]), cfg)?;
            let h = DdChannelMatrix::build_with(&channel, cfg, KernelModel::Wideband)?;
            let h_hat = DdChannelMatrix::build_with(&channel, cfg, KernelModel::Narrowband(config.baseline_sync))?;
            nmse(&h, &h_hat)
        })
        .collect()
}

/// Sweeps every `(N, M)` pair and speed. Grid points are numbered with `N`
/// outermost and speed innermost.
pub fn run_nmse_sweep(config: &ScenarioConfig) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    let mut point = 0u64;
    for &n in &config.n {
        for &m in &config.m {
            let cfg = config.frame(n, m)?;
            for &v in &config.v_max {
                let v_si = config.speed_si(v);
                let values = nmse_point(config, &cfg, v_si, point)?;
                let (mean, stderr) = mean_stderr(&values);
                rows.push(SweepRow {
                    scenario: config.scenario.name().to_string(),
                    n,
                    m,
                    v_max_si: v_si,
                    nmse_mean: mean,
                    nmse_stderr: stderr,
                    n_real: values.len(),
                    seed: config.seed,
                });
                point += 1;
            }
        }
    }
    Ok(rows)
}

/// Sample mean and standard error of the mean.
pub(crate) fn mean_stderr(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::Scenario;

    fn tiny() -> ScenarioConfig {
        let mut c = ScenarioConfig::defaults(Scenario::TypeII);
        c.n = vec![16];
        c.m = vec![128];
        c.v_max = vec![0.0, 2.0];
        c.realizations = 4;
        c
    }

    #[test]
    fn static_channels_have_zero_nmse() {
        let rows = run_nmse_sweep(&tiny()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].nmse_mean, 0.0);
        assert!(rows[1].nmse_mean > 0.0);
        assert_eq!(rows[1].n_real, 4);
    }

    #[test]
    fn csv_is_deterministic() {
        let render = || {
            let mut buf = Vec::new();
            write_sweep_csv(&run_nmse_sweep(&tiny()).unwrap(), &mut buf).unwrap();
            buf
        };
        let a = render();
        assert_eq!(a, render());
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("scenario,N,M,v_max_si,nmse_mean,nmse_stderr,n_real,seed\n"));
    }

    #[test]
    fn stderr_formula() {
        let (m, s) = mean_stderr(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_stderr(&[7.0]), (7.0, 0.0));
    }
}
