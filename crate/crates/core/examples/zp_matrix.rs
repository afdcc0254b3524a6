// Zero-padded frames: the ISI-free delay range and the linear product.

use oddm_dse::ddmatrix::zp_range;
use oddm_dse::experiment::random_channel;
use oddm_dse::{DdChannelMatrix, DdFrame, Error, FrameConfig, PrefixMode};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = FrameConfig::new(64, 8, 5e3, 12.5e3, 4, 0.65, PrefixMode::Zp)?;
    let v_max = 1.0 * 1500.0 / cfg.nm() as f64;
    let r = random_channel(3, 10.0, v_max, 1500.0, 8, &cfg)?;
    let (lo, hi) = zp_range(&r, &cfg)?;
    println!("l_min {}, l_max {}, data rows {lo}..={hi} of {}", r.l_min(), r.l_max(), cfg.m());

    let h = DdChannelMatrix::build(&r, &cfg, true)?;
    let mut x = DdFrame::random(cfg.m(), cfg.n(), 2);
    x.apply_guard(lo, hi);
    let zp = h.apply_zp(&x)?;
    let rcp = h.apply_rcp(&x)?;
    println!("ZP vs cyclic product on a guarded frame: {:.1e}", oddm_dse::metrics::rel_max_err(zp.as_slice(), rcp.as_slice()));

    let leak = DdFrame::impulse(cfg.m(), cfg.n(), hi + 1, 0);
    match h.apply_zp(&leak) {
        Err(e @ Error::ZpSupport { .. }) => println!("rejected: {e}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
