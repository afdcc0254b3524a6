// Time-variant taps g_l(q) of a wideband path and the drift of its peak.

use oddm_dse::channel::{PathSpec, KNOT};
use oddm_dse::modem::dd_to_time;
use oddm_dse::timesim::{propagate_exact, propagate_taps, tap_response};
use oddm_dse::{ChannelRealization, Complex64, DdFrame, FrameConfig, PrefixMode};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = FrameConfig::new(128, 32, 5e3, 12.5e3, 8, 0.65, PrefixMode::Rcp)?;
    let path = PathSpec { gain: Complex64::new(1.0, 0.0), excess_taps: 7.5, speed: KNOT };
    let r = ChannelRealization::from_excess(&[path], 1500.0, KNOT, &cfg)?;
    let g = tap_response(&r, &cfg)?;

    // the strongest tap walks one sample every 1/b positions
    for pos in (0..cfg.nm()).step_by(512) {
        let (l, v) = (0..g.len())
            .map(|l| (l, g.tap(l)[pos].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        println!("q = {pos:4}: peak tap {l:2} (|g| {v:.3}), support {:?}", g.support_at(pos).len());
    }

    let s = dd_to_time(&DdFrame::random(cfg.m(), cfg.n(), 1), &cfg)?;
    let exact = propagate_exact(&s, &r, &cfg)?;
    let tapped = propagate_taps(&s, &g, &cfg)?;
    let err = oddm_dse::metrics::rel_max_err(tapped.body(), exact.body());
    println!("tapped-delay-line vs continuous-time propagation: {err:.1e}");
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
