// Self-check of the propagation oracles, clean and with a perturbed kernel.

use oddm_dse::experiment::{run_oracle_check, OracleOptions, Scenario, ScenarioConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let config = ScenarioConfig::defaults(Scenario::TypeII);
    for corrupt_kernel in [false, true] {
        let opts = OracleOptions { corrupt_kernel, ..OracleOptions::default() };
        let report = run_oracle_check(&config, &opts)?;
        println!("corrupted kernel: {corrupt_kernel}, overall pass: {}", report.pass);
        for c in &report.checks {
            println!("  {:22} {:.2e} (tol {:.0e}) {}", c.name, c.max_rel_err, c.tolerance, if c.pass { "ok" } else { "FAIL" });
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
