use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use oddm_dse::channel::ChannelRecord;
use oddm_dse::experiment::{
    run_impulse, run_nmse_sweep, run_oracle_check, write_impulse_csv, write_sweep_csv, DseSelect, OracleOptions, Scenario,
    ScenarioConfig,
};
use oddm_dse::{BaselineSync, Error};

#[derive(Parser)]
#[command(name = "oddm-dse", version, about = "Wideband ODDM channel experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// DD response to a unit symbol through one off-grid path (CSV)
    Impulse(Common),
    /// NMSE of the DSE-ignorant channel matrix versus v_max (CSV)
    NmseSweep(Common),
    /// Cross-check the propagation oracles on a small frame (JSON)
    OracleCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, hide = true)]
        corrupt_kernel: bool,
    },
    /// Draw one channel realization and dump it (JSON)
    GenChannel(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    Type1,
    Type2,
}

#[derive(Clone, Copy, ValueEnum)]
enum DseArg {
    On,
    Off,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum SyncArg {
    Keep,
    Drop,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum)]
    scenario: Option<ScenarioArg>,
    /// JSON manifest; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Delay bins (comma-separated)
    #[arg(short = 'M', value_delimiter = ',')]
    m: Vec<usize>,
    /// Doppler bins (comma-separated)
    #[arg(short = 'N', value_delimiter = ',')]
    n: Vec<usize>,
    /// Maximum speeds, km/h for type1 and knots for type2 (comma-separated)
    #[arg(long, value_delimiter = ',')]
    vmax: Vec<f64>,
    #[arg(long)]
    realizations: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    delay_spread_ns: Option<f64>,
    /// Pulse half-length in samples
    #[arg(long)]
    q: Option<usize>,
    #[arg(long, value_enum)]
    dse: Option<DseArg>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    baseline_sync: Option<SyncArg>,
}

impl Common {
    fn resolve(&self) -> Result<ScenarioConfig, Error> {
        let scenario = self.scenario.map(|s| match s {
            ScenarioArg::Type1 => Scenario::TypeI,
            ScenarioArg::Type2 => Scenario::TypeII,
        });
        let mut c = match (&self.config, scenario) {
            (Some(path), forced) => {
                let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
                if let (Some(s), Some(obj)) = (forced, v.as_object_mut()) {
                    obj.insert("scenario".into(), serde_json::to_value(s)?);
                }
                ScenarioConfig::from_json(&v.to_string())?
            }
            (None, s) => ScenarioConfig::defaults(s.unwrap_or(Scenario::TypeI)),
        };
        if !self.m.is_empty() {
            c.m = self.m.clone();
        }
        if !self.n.is_empty() {
            c.n = self.n.clone();
        }
        if !self.vmax.is_empty() {
            c.v_max = self.vmax.clone();
        }
        if let Some(r) = self.realizations {
            c.realizations = r;
        }
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(d) = self.delay_spread_ns {
            c.delay_spread_ns = d;
        }
        if let Some(q) = self.q {
            c.q = q;
        }
        if let Some(d) = self.dse {
            c.dse = match d {
                DseArg::On => DseSelect::On,
                DseArg::Off => DseSelect::Off,
                DseArg::Both => DseSelect::Both,
            };
        }
        if let Some(b) = self.baseline_sync {
            c.baseline_sync = match b {
                SyncArg::Keep => BaselineSync::Keep,
                SyncArg::Drop => BaselineSync::Drop,
            };
        }
        if self.out.is_some() {
            c.out = self.out.clone();
        }
        Ok(c)
    }
}

fn output(c: &ScenarioConfig) -> Result<Box<dyn Write>, Error> {
    Ok(match &c.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Impulse(common) => {
            let mut c = common.resolve()?;
            if let Some(&m) = common.m.first() {
                c.impulse.m = m;
            }
            if let Some(&n) = common.n.first() {
                c.impulse.n = n;
            }
            if let Some(&v) = common.vmax.first() {
                c.impulse.speed = v;
            }
            write_impulse_csv(&run_impulse(&c)?, output(&c)?)?;
        }
        Command::NmseSweep(common) => {
            let c = common.resolve()?;
            write_sweep_csv(&run_nmse_sweep(&c)?, output(&c)?)?;
        }
        Command::OracleCheck { common, corrupt_kernel } => {
            let c = common.resolve()?;
            let opts = OracleOptions { corrupt_kernel, ..OracleOptions::from_scenario(&c) };
            let report = run_oracle_check(&c, &opts)?;
            let mut out = output(&c)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            out.flush()?;
            if !report.pass {
                return Ok(ExitCode::from(3));
            }
        }
        Command::GenChannel(common) => {
            let c = common.resolve()?;
            let (Some(&n), Some(&m)) = (c.n.first(), c.m.first()) else {
                return Err(Error::InvalidConfig("empty N or M list".into()));
            };
            let v = c.speed_si(*c.v_max.last().unwrap_or(&0.0));
            let cfg = c.frame(n, m)?;
            let record: ChannelRecord = c.realize(v, c.seed, &cfg)?.to_record();
            let mut out = output(&c)?;
            writeln!(out, "{}", record.to_json()?)?;
            out.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_infeasible() { 2 } else { 1 })
        }
    }
}
