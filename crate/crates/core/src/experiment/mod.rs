//! Scenario presets and the numerical experiments: impulse maps, NMSE sweeps
//! and the oracle self-check.

mod impulse;
mod oracle;
mod sweep;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::channel::{gen_tdlc, gen_uwa, ChannelRealization, UwaProfile, KMH, KNOT, SPEED_OF_LIGHT, SPEED_OF_SOUND_WATER};
use crate::config::{FrameConfig, PrefixMode, DEFAULT_Q};
use crate::ddmatrix::BaselineSync;
use crate::error::{Error, Result};

pub use impulse::{run_impulse, write_impulse_csv, DbMap, ImpulseMaps};
pub use oracle::{random_channel, run_oracle_check, CheckResult, OracleOptions, OracleReport};
pub use sweep::{nmse_point, run_nmse_sweep, write_sweep_csv, SweepRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    /// Terrestrial radio: TDL-C, 5 GHz carrier.
    #[serde(rename = "type1", alias = "TypeI")]
    TypeI,
    /// Underwater acoustic: sparse exponential-decay channel, 12.5 kHz carrier.
    #[serde(rename = "type2", alias = "TypeII")]
    TypeII,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::TypeI => "type1",
            Scenario::TypeII => "type2",
        }
    }

    /// Metres per second per user-facing speed unit (km/h or knots).
    pub fn speed_unit(&self) -> f64 {
        match self {
            Scenario::TypeI => KMH,
            Scenario::TypeII => KNOT,
        }
    }

    pub fn speed_unit_name(&self) -> &'static str {
        match self {
            Scenario::TypeI => "km/h",
            Scenario::TypeII => "kn",
        }
    }
}

impl std::str::FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "type1" | "typei" | "1" => Ok(Scenario::TypeI),
            "type2" | "typeii" | "2" => Ok(Scenario::TypeII),
            _ => Err(Error::InvalidConfig(format!("unknown scenario '{s}'"))),
        }
    }
}

/// Which kernels an impulse run renders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DseSelect {
    On,
    Off,
    #[default]
    Both,
}

impl DseSelect {
    pub fn includes(&self, dse: bool) -> bool {
        matches!((self, dse), (DseSelect::Both, _) | (DseSelect::On, true) | (DseSelect::Off, false))
    }
}

/// Single off-grid path probed by the impulse experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpulseSpec {
    pub n: usize,
    pub m: usize,
    /// Delay past the synchronization reference, seconds.
    pub excess_delay: f64,
    /// Path speed in the scenario's unit; positive approaches.
    pub speed: f64,
}

/// Everything an experiment needs. Speeds are in the scenario's unit
/// (km/h for type1, knots for type2); output tables hold SI values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub wave_speed: f64,
    pub carrier: f64,
    pub sample_rate: f64,
    pub roll_off: f64,
    pub q: usize,
    pub prefix: PrefixMode,
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    pub v_max: Vec<f64>,
    pub realizations: usize,
    pub seed: u64,
    /// TDL-C RMS delay spread, nanoseconds. Ignored by type2.
    pub delay_spread_ns: f64,
    pub uwa: UwaProfile,
    pub baseline_sync: BaselineSync,
    pub dse: DseSelect,
    pub impulse: ImpulseSpec,
    pub out: Option<PathBuf>,
}

/// Eight octave-spaced points ending at `top`.
fn octave_grid(top: f64) -> Vec<f64> {
    (0..8).map(|i| top / f64::from(1u32 << (7 - i))).collect()
}

impl ScenarioConfig {
    pub fn defaults(scenario: Scenario) -> Self {
        let common = |wave_speed, carrier, sample_rate, roll_off, n, v_top, impulse| Self {
            scenario,
            wave_speed,
            carrier,
            sample_rate,
            roll_off,
            q: DEFAULT_Q,
            prefix: PrefixMode::Rcp,
            n,
            m: vec![128, 256, 512, 1024],
            v_max: octave_grid(v_top),
            realizations: 100,
            seed: 1,
            delay_spread_ns: 300.0,
            uwa: UwaProfile::default(),
            baseline_sync: BaselineSync::Keep,
            dse: DseSelect::Both,
            impulse,
            out: None,
        };
        match scenario {
            Scenario::TypeI => common(
                SPEED_OF_LIGHT,
                5e9,
                15.36e6,
                0.1,
                vec![32, 64],
                1000.0,
                ImpulseSpec { n: 64, m: 512, excess_delay: 7.5 / 15.36e6, speed: 1000.0 },
            ),
            Scenario::TypeII => common(
                SPEED_OF_SOUND_WATER,
                12.5e3,
                5e3,
                0.65,
                vec![16, 32],
                5.0,
                ImpulseSpec { n: 32, m: 128, excess_delay: 1.5e-3, speed: 1.0 },
            ),
        }
    }

    /// Parses a JSON manifest. Missing fields take the defaults of the
    /// manifest's `scenario` (type1 when absent).
    pub fn from_json(text: &str) -> Result<Self> {
        let user: Value = serde_json::from_str(text)?;
        let Value::Object(fields) = user else {
            return Err(Error::InvalidConfig("config must be a JSON object".into()));
        };
        let scenario = match fields.get("scenario") {
            Some(v) => serde_json::from_value(v.clone())?,
            None => Scenario::TypeI,
        };
        let mut base = serde_json::to_value(Self::defaults(scenario))?;
        let obj = base.as_object_mut().expect("struct serializes to an object");
        for (k, v) in fields {
            if !obj.contains_key(&k) {
                return Err(Error::InvalidConfig(format!("unknown config field '{k}'")));
            }
            obj.insert(k, v);
        }
        Ok(serde_json::from_value(base)?)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Frame for one `(N, M)` grid point.
    pub fn frame(&self, n: usize, m: usize) -> Result<FrameConfig> {
        FrameConfig::new(m, n, self.sample_rate, self.carrier, self.q, self.roll_off, self.prefix)
    }

    /// Converts a speed in the scenario's unit to m/s.
    pub fn speed_si(&self, v: f64) -> f64 {
        v * self.speed_unit()
    }

    pub fn speed_unit(&self) -> f64 {
        self.scenario.speed_unit()
    }

    /// Draws a channel from the scenario's generator.
    pub fn realize(&self, v_max_si: f64, seed: u64, cfg: &FrameConfig) -> Result<ChannelRealization> {
        match self.scenario {
            Scenario::TypeI => gen_tdlc(self.delay_spread_ns * 1e-9, v_max_si, self.wave_speed, seed, cfg),
            Scenario::TypeII => gen_uwa(&self.uwa, v_max_si, self.wave_speed, seed, cfg),
        }
    }
}
