// DD frame through the transmitter, the continuous waveform, and back.

use oddm_dse::modem::{dd_to_time, synthesize, time_to_dd};
use oddm_dse::{DdFrame, FrameConfig, PrefixMode, TimeSamples};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = FrameConfig::new(64, 16, 5e3, 12.5e3, 4, 0.65, PrefixMode::Rcp)?;
    let x = DdFrame::random(cfg.m(), cfg.n(), 7);
    let s = dd_to_time(&x, &cfg)?;

    let body: f64 = s.body().iter().map(|v| v.norm_sqr()).sum();
    println!("frame energy {:.6}, time-domain energy {:.6}", x.energy(), body);

    // the waveform passes through every sample, prefix included
    let t = TimeSamples::sample_instant(5, -1, &cfg);
    println!("s(t) at the prefix copy of (5, N-1): {:.6}", synthesize(t, &s, &cfg));
    println!("stored sample x[5, N-1]:              {:.6}", s.get(5, cfg.n() as isize - 1));

    let back = time_to_dd(&s, &cfg)?;
    let err = oddm_dse::metrics::rel_max_err(back.as_slice(), x.as_slice());
    println!("round-trip relative error {err:.1e}");
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
