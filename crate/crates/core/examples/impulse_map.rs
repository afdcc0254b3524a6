// DD response to a single symbol through one underwater path at 1 kn, with
// and without the squint model.

use oddm_dse::experiment::{run_impulse, write_impulse_csv, Scenario, ScenarioConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let config = ScenarioConfig::defaults(Scenario::TypeII);
    let maps = run_impulse(&config)?;
    let p = maps.channel.paths()[0];
    println!("path at {:.1} taps, k = {:.3}, rows 0..={}", p.delay_taps, p.doppler_bins, maps.l_max_prime);

    for map in &maps.maps {
        let name = if map.dse { "with DSE" } else { "without" };
        println!("{name:>8}: taps above -15 dB {:?}, above -40 dB {:?}", map.support(-15.0), map.support(-40.0));
    }

    // strongest cell of each delay row, for the map without DSE
    let off = maps.get(false).unwrap();
    for (l, row) in off.db.iter().enumerate().skip(12).take(10) {
        let top = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        println!("  l = {l:2}: {top:7.2} dB {}", "#".repeat(((top + 60.0).max(0.0) / 3.0) as usize));
    }

    let mut csv = Vec::new();
    write_impulse_csv(&maps, &mut csv)?;
    println!("CSV: {} bytes", csv.len());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
