// Banded DD channel matrix with cyclic prefix, checked against the
// continuous-time chain, and the cost of ignoring Doppler squint.

use oddm_dse::experiment::random_channel;
use oddm_dse::modem::{dd_to_time, time_to_dd};
use oddm_dse::timesim::propagate_exact;
use oddm_dse::{nmse, DdChannelMatrix, DdFrame, FrameConfig, PrefixMode};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = FrameConfig::new(64, 16, 5e3, 12.5e3, 4, 0.65, PrefixMode::Rcp)?;
    let v_max = 1.5 * 1500.0 / cfg.nm() as f64;
    let r = random_channel(4, 12.0, v_max, 1500.0, 3, &cfg)?;
    let h = DdChannelMatrix::build(&r, &cfg, true)?;
    println!("taps {}, active rows {}", h.taps(), (0..h.taps()).flat_map(|l| (0..64).map(move |m| (l, m))).filter(|&(l, m)| h.is_active(l, m)).count());

    let x = DdFrame::random(cfg.m(), cfg.n(), 5);
    let y = h.apply_rcp(&x)?;
    let reference = time_to_dd(&propagate_exact(&dd_to_time(&x, &cfg)?, &r, &cfg)?, &cfg)?;
    println!("H x vs continuous-time chain: {:.1e}", oddm_dse::metrics::rel_max_err(y.as_slice(), reference.as_slice()));

    let h_hat = DdChannelMatrix::build(&r, &cfg, false)?;
    println!("NMSE of the DSE-ignorant matrix: {:.3}", nmse(&h, &h_hat)?);

    let mut csv = Vec::new();
    h.write_kernel_csv(&mut csv)?;
    println!("kernel dump: {} CSV rows", csv.iter().filter(|&&b| b == b'\n').count() - 1);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
