// TDL-C and underwater channel draws, with the delay and Doppler in
// normalized units and a JSON round trip.

use oddm_dse::channel::{gen_tdlc, gen_uwa, ChannelRecord, UwaProfile, KMH, KNOT, SPEED_OF_LIGHT, SPEED_OF_SOUND_WATER};
use oddm_dse::{FrameConfig, PrefixMode};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let radio = FrameConfig::new(1024, 64, 15.36e6, 5e9, 8, 0.1, PrefixMode::Rcp)?;
    let r = gen_tdlc(300e-9, 750.0 * KMH, SPEED_OF_LIGHT, 11, &radio)?;
    let (_, hi) = r.tap_range(&radio)?;
    println!("TDL-C: {} paths, l_min {}, l_max {}, taps 0..={hi}", r.paths().len(), r.l_min(), r.l_max());
    for p in r.paths().iter().take(4) {
        println!("  |h| {:.3}  l {:8.3}  k {:+.4}  b {:+.3e}", p.gain.norm(), p.delay_taps, p.doppler_bins, p.scaling);
    }

    let sea = FrameConfig::new(128, 16, 5e3, 12.5e3, 8, 0.65, PrefixMode::Rcp)?;
    let u = gen_uwa(&UwaProfile::default(), 5.0 * KNOT, SPEED_OF_SOUND_WATER, 11, &sea)?;
    println!(
        "UWA: {} paths, b_max*NM {:.2}, taps up to {}, rejected draws {}",
        u.paths().len(),
        u.b_max() * sea.nm() as f64,
        u.tap_range(&sea)?.1,
        u.redraws()
    );

    let json = u.to_record().to_json()?;
    let again = ChannelRecord::from_json(&json)?.realize(&sea)?;
    let drift = again
        .paths()
        .iter()
        .zip(u.paths())
        .map(|(a, b)| (a.delay_taps - b.delay_taps).abs())
        .fold(0.0, f64::max);
    println!("JSON round trip: same bounds {}, max delay drift {drift:.1e} taps", again.l_max() == u.l_max());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
