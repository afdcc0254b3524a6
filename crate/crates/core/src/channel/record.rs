//! JSON form of a channel realization, used to replay draws across runs.

use std::path::Path as FsPath;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ChannelRealization, Path};
use crate::config::FrameConfig;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub h_re: f64,
    pub h_im: f64,
    pub tau_s: f64,
    pub v_mps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelRecord {
    /// Wave speed, m/s.
    pub c: f64,
    /// Maximum mobility, m/s.
    pub v_max: f64,
    #[serde(default)]
    pub seed: Option<u64>,
    pub paths: Vec<PathRecord>,
}

impl ChannelRecord {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn save(&self, path: impl AsRef<FsPath>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<FsPath>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Re-derives the realization for `cfg`.
    pub fn realize(&self, cfg: &FrameConfig) -> Result<ChannelRealization> {
        let paths = self
            .paths
            .iter()
            .map(|p| Path::derive(Complex64::new(p.h_re, p.h_im), p.tau_s, p.v_mps, self.c, cfg))
            .collect::<Result<Vec<_>>>()?;
        let r = ChannelRealization::new(paths, self.c, self.v_max, cfg)?;
        Ok(match self.seed {
            Some(s) => r.with_seed(s),
            None => r,
        })
    }
}

impl ChannelRealization {
    pub fn to_record(&self) -> ChannelRecord {
        ChannelRecord {
            c: self.wave_speed,
            v_max: self.v_max,
            seed: self.seed,
            paths: self
                .paths
                .iter()
                .map(|p| PathRecord { h_re: p.gain.re, h_im: p.gain.im, tau_s: p.delay, v_mps: p.speed })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{PathSpec, KNOT};
    use crate::config::PrefixMode;

    #[test]
    fn json_round_trip() {
        let cfg = FrameConfig::new(128, 32, 5e3, 12.5e3, 8, 0.65, PrefixMode::Rcp).unwrap();
        let specs = [
            PathSpec { gain: Complex64::new(0.6, 0.1), excess_taps: 0.0, speed: 0.5 * KNOT },
            PathSpec { gain: Complex64::new(-0.2, 0.7), excess_taps: 13.25, speed: -KNOT },
        ];
        let r = ChannelRealization::from_excess(&specs, 1500.0, KNOT, &cfg).unwrap().with_seed(99);
        let json = r.to_record().to_json().unwrap();
        for key in ["\"h_re\"", "\"h_im\"", "\"tau_s\"", "\"v_mps\"", "\"c\"", "\"v_max\"", "\"seed\""] {
            assert!(json.contains(key), "{key} missing");
        }
        let back = ChannelRecord::from_json(&json).unwrap().realize(&cfg).unwrap();
        assert_eq!(back.seed(), Some(99));
        assert_eq!(back.l_min(), r.l_min());
        assert_eq!(back.l_max(), r.l_max());
        for (a, b) in back.paths().iter().zip(r.paths()) {
            assert_eq!(a.gain, b.gain);
            assert_eq!(a.speed, b.speed);
            assert!((a.delay_taps - b.delay_taps).abs() < 1e-9);
        }
    }
}
