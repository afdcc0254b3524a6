// Seeded NMSE-versus-speed sweep on a short underwater frame.

use oddm_dse::experiment::{run_nmse_sweep, write_sweep_csv, Scenario, ScenarioConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = ScenarioConfig::defaults(Scenario::TypeII);
    config.n = vec![16];
    config.m = vec![128];
    config.v_max = vec![0.5, 1.0, 2.0, 5.0];
    config.realizations = 20;
    config.seed = 42;

    let rows = run_nmse_sweep(&config)?;
    write_sweep_csv(&rows, std::io::stdout().lock())?;
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
