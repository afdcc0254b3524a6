//! Tapped-delay-line channel with the TDL-C delay/power profile.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{ChannelRealization, PathSpec};
use crate::config::FrameConfig;
use crate::error::Result;
use crate::rng::rng_from_seed;

/// TDL-C profile: (normalized delay, power in dB) per tap.
#[allow(clippy::approx_constant)]
pub const TDL_C: [(f64, f64); 24] = [
    (0.0000, -4.4),
    (0.2099, -1.2),
    (0.2219, -3.5),
    (0.2329, -5.2),
    (0.2176, -2.5),
    (0.6366, 0.0),
    (0.6448, -2.2),
    (0.6560, -3.9),
    (0.6584, -7.4),
    (0.7935, -7.1),
    (0.8213, -10.7),
    (0.9336, -11.1),
    (1.2285, -5.1),
    (1.3083, -6.8),
    (2.1704, -8.7),
    (2.7105, -13.2),
    (4.2589, -13.9),
    (4.6003, -13.9),
    (5.4902, -15.8),
    (5.6077, -17.1),
    (6.3065, -16.0),
    (6.6374, -15.7),
    (7.0427, -21.6),
    (8.6523, -22.8),
];

/// Draws a complex Gaussian gain with mean power `power`.
pub(super) fn complex_gaussian<R: Rng>(rng: &mut R, power: f64) -> Complex64 {
    let s = (0.5 * power).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// `v_max · cos θ`, `θ ~ U[-π, π]`.
pub(super) fn path_speed<R: Rng>(rng: &mut R, v_max: f64) -> f64 {
    v_max * rng.gen_range(-PI..PI).cos()
}

/// TDL-C realization: taps at their (fractional) scaled delays after the
/// synchronization reference, Rayleigh gains normalized to unit total power,
/// and independent path speeds.
pub fn gen_tdlc(
    delay_spread: f64,
    v_max: f64,
    wave_speed: f64,
    seed: u64,
    cfg: &FrameConfig,
) -> Result<ChannelRealization> {
    let mut rng = rng_from_seed(seed);
    let specs: Vec<PathSpec> = TDL_C
        .iter()
        .map(|&(delay, power_db)| {
            let gain = complex_gaussian(&mut rng, 10f64.powf(power_db / 10.0));
            let speed = path_speed(&mut rng, v_max);
            PathSpec { gain, excess_taps: delay * delay_spread * cfg.sample_rate(), speed }
        })
        .collect();
    let mut r = ChannelRealization::from_excess(&specs, wave_speed, v_max, cfg)?;
    r.normalize_power();
    Ok(r.with_seed(seed))
}
