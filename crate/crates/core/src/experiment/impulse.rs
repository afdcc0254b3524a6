use std::io::Write;

use num_complex::Complex64;

use super::ScenarioConfig;
use crate::channel::{ChannelRealization, PathSpec};
use crate::ddmatrix::{DdChannelMatrix, KernelModel};
use crate::error::Result;
use crate::grid::DdFrame;
use crate::metrics::power_db;

/// Received DD magnitudes for a unit symbol at `(0, 0)`, delay rows
/// `0..=l'_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct DbMap {
    pub dse: bool,
    /// `|Y[l, k]|`
    pub magnitude: Vec<Vec<f64>>,
    /// `20 log10(|Y| / max|Y|)`, floored at -400 dB for exact zeros.
    pub db: Vec<Vec<f64>>,
}

impl DbMap {
    fn new(dse: bool, y: &DdFrame, rows: usize) -> Self {
        let magnitude: Vec<Vec<f64>> = (0..rows).map(|l| y.row(l).iter().map(|v| v.norm()).collect()).collect();
        let peak = magnitude.iter().flatten().copied().fold(0.0, f64::max);
        let db = magnitude
            .iter()
            .map(|r| r.iter().map(|&a| if peak > 0.0 { power_db((a / peak).powi(2)) } else { power_db(0.0) }).collect())
            .collect();
        Self { dse, magnitude, db }
    }

    /// Delay rows holding a cell above `floor_db`.
    pub fn support(&self, floor_db: f64) -> Vec<usize> {
        (0..self.db.len()).filter(|&l| self.db[l].iter().any(|&d| d > floor_db)).collect()
    }

    /// Delay rows with any nonzero cell.
    pub fn nonzero_support(&self) -> Vec<usize> {
        (0..self.magnitude.len()).filter(|&l| self.magnitude[l].iter().any(|&a| a > 0.0)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct ImpulseMaps {
    pub channel: ChannelRealization,
    pub l_max_prime: usize,
    pub maps: Vec<DbMap>,
}

impl ImpulseMaps {
    pub fn get(&self, dse: bool) -> Option<&DbMap> {
        self.maps.iter().find(|m| m.dse == dse)
    }
}

/// Sends a DD impulse through the single path described by
/// `config.impulse` and returns the selected maps.
pub fn run_impulse(config: &ScenarioConfig) -> Result<ImpulseMaps> {
    let spec = config.impulse;
    let cfg = config.frame(spec.n, spec.m)?;
    let speed = config.speed_si(spec.speed);
    let path = PathSpec { gain: Complex64::new(1.0, 0.0), excess_taps: spec.excess_delay * cfg.sample_rate(), speed };
    let channel = ChannelRealization::from_excess(&[path], config.wave_speed, speed.abs(), &cfg)?;
    let (_, hi) = channel.tap_range(&cfg)?;
    let rows = hi as usize + 1;
    let x = DdFrame::impulse(cfg.m(), cfg.n(), 0, 0);
    let mut maps = Vec::new();
    for dse in [true, false] {
        if !config.dse.includes(dse) {
            continue;
        }
        let model = if dse { KernelModel::Wideband } else { KernelModel::Narrowband(config.baseline_sync) };
        let h = DdChannelMatrix::build_with(&channel, &cfg, model)?;
        maps.push(DbMap::new(dse, &h.apply_rcp(&x)?, rows));
    }
    Ok(ImpulseMaps { channel, l_max_prime: hi as usize, maps })
}

/// One CSV holding every map: columns `map, l, k0 .. k{N-1}` in dB.
pub fn write_impulse_csv<W: Write>(maps: &ImpulseMaps, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let n = maps.maps.first().map_or(0, |m| m.db.first().map_or(0, Vec::len));
    let mut header = vec!["map".to_string(), "l".to_string()];
    header.extend((0..n).map(|k| format!("k{k}")));
    w.write_record(&header)?;
    for map in &maps.maps {
        let name = if map.dse { "dse_on" } else { "dse_off" };
        for (l, row) in map.db.iter().enumerate() {
            let mut rec = vec![name.to_string(), l.to_string()];
            rec.extend(row.iter().map(|d| format!("{d:.6}")));
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{DseSelect, Scenario};

    #[test]
    fn peaks_are_zero_db() {
        let maps = run_impulse(&ScenarioConfig::defaults(Scenario::TypeII)).unwrap();
        assert_eq!(maps.maps.len(), 2);
        for m in &maps.maps {
            let top = m.db.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(top, 0.0);
            assert_eq!(m.db.len(), maps.l_max_prime + 1);
        }
    }

    #[test]
    fn dse_selection_and_csv() {
        let mut c = ScenarioConfig::defaults(Scenario::TypeII);
        c.dse = DseSelect::Off;
        let maps = run_impulse(&c).unwrap();
        assert_eq!(maps.maps.len(), 1);
        assert!(!maps.maps[0].dse);
        let mut buf = Vec::new();
        write_impulse_csv(&maps, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("map,l,k0,k1,"));
        assert_eq!(text.lines().count(), 1 + maps.l_max_prime + 1);
    }
}
