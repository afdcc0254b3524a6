//! Sparse underwater acoustic channel with exponential power-delay decay.

use rand::Rng;
use rand_distr::Exp;
use serde::{Deserialize, Serialize};

use super::tdl::{complex_gaussian, path_speed};
use super::{ChannelRealization, PathSpec};
use crate::config::FrameConfig;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

const MAX_REDRAWS: u32 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UwaProfile {
    pub paths: usize,
    /// Mean of the exponential inter-arrival time, seconds.
    pub mean_interarrival: f64,
    /// Average power decay versus excess delay, dB per second.
    pub decay_db_per_s: f64,
}

impl Default for UwaProfile {
    /// Ten paths, 1 ms mean inter-arrival, 20 dB decay over 10 ms.
    fn default() -> Self {
        Self { paths: 10, mean_interarrival: 1e-3, decay_db_per_s: 20.0 / 10e-3 }
    }
}

impl UwaProfile {
    /// Mean power of a path arriving `excess` seconds after the reference.
    pub fn mean_power(&self, excess: f64) -> f64 {
        10f64.powf(-self.decay_db_per_s * excess / 10.0)
    }

    fn draw<R: Rng>(&self, rng: &mut R, v_max: f64, cfg: &FrameConfig) -> Vec<PathSpec> {
        let gaps = Exp::new(1.0 / self.mean_interarrival).expect("positive rate");
        let mut excess = 0.0;
        (0..self.paths)
            .map(|_| {
                excess += rng.sample(gaps);
                let gain = complex_gaussian(rng, self.mean_power(excess));
                let speed = path_speed(rng, v_max);
                PathSpec { gain, excess_taps: excess * cfg.sample_rate(), speed }
            })
            .collect()
    }
}

/// Underwater realization. Arrival `i` lands after `i` exponential
/// inter-arrival gaps past the synchronization reference, so the expected
/// delay spread is `paths · mean_interarrival`. Draws whose equivalent tap
/// range reaches `M` are rejected and redrawn; the count is kept on the
/// realization.
pub fn gen_uwa(
    profile: &UwaProfile,
    v_max: f64,
    wave_speed: f64,
    seed: u64,
    cfg: &FrameConfig,
) -> Result<ChannelRealization> {
    if profile.paths == 0 {
        return Err(Error::InvalidChannel("UWA profile needs at least one path".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut redraws = 0;
    loop {
        let specs = profile.draw(&mut rng, v_max, cfg);
        match ChannelRealization::from_excess(&specs, wave_speed, v_max, cfg) {
            Ok(mut r) => {
                r.normalize_power();
                return Ok(r.with_seed(seed).with_redraws(redraws));
            }
            Err(e @ Error::TapRange { .. }) => {
                redraws += 1;
                if redraws >= MAX_REDRAWS {
                    return Err(e);
                }
            }
            Err(e) => return Err(e),
        }
    }
}
