//! Experiment harness around the `neurofuzzy` core: configure runs, write
//! reports and figure data, compare results.

pub mod compare;
pub mod config;
pub mod error;
pub mod run;
pub mod summary;
pub mod surface;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use neurofuzzy::TargetMode;

pub use compare::{compare, load_report_set, Comparison, ReportSet};
pub use config::RunConfig;
pub use error::CliError;
pub use run::{train, RunOutput, TrainCommand};
pub use summary::{MeanStd, Method, MethodAggregate, RunSummary};
pub use surface::surface_csv;

#[derive(Debug, Parser)]
#[command(name = "neurofuzzy", version, about = "ANFIS and ANFIS-PSO experiments on the BUPA liver data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plain ANFIS hybrid training per seed.
    TrainAnfis(RunArgs),
    /// Swarm-tuned ANFIS per seed, with the plain baseline on the same split.
    TrainAnfisPso(RunArgs),
    /// Output surface of a saved model over two inputs, as CSV.
    Surface(SurfaceArgs),
    /// Tabulate two or more reports.
    Compare(CompareArgs),
}

#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// TOML file with flat config keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, value_parser = ["selector", "drinks"])]
    pub target: Option<String>,
    /// Single seed.
    #[arg(long, conflicts_with = "seeds")]
    pub seed: Option<u64>,
    /// Comma list (`1,4,9`) or inclusive range (`1..10`).
    #[arg(long)]
    pub seeds: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub swarm: Option<usize>,
}

impl RunArgs {
    /// File keys, then flags on top.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(v) = &self.data {
            cfg.data = v.clone();
        }
        if let Some(v) = &self.target {
            cfg.target = v.parse::<TargetMode>()?;
        }
        if let Some(v) = self.seed {
            cfg.seeds = vec![v];
        }
        if let Some(v) = &self.seeds {
            cfg.seeds = parse_seeds(v)?;
        }
        if let Some(v) = &self.out {
            cfg.out = v.clone();
        }
        if let Some(v) = self.radius {
            cfg.radius = v;
        }
        if let Some(v) = self.epochs {
            cfg.epochs = v;
        }
        if let Some(v) = self.iterations {
            cfg.iterations = v;
        }
        if let Some(v) = self.swarm {
            cfg.swarm = v;
        }
        Ok(cfg)
    }
}

pub fn parse_seeds(s: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::Config(format!("seeds {s:?} (expected `1,2,3` or `1..10`)"));
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// Model JSON written by a train command.
    #[arg(long)]
    pub model: PathBuf,
    /// Zero-based input pair, e.g. `0,3`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub inputs: Vec<usize>,
    #[arg(long, default_value_t = 21)]
    pub resolution: usize,
    /// One value for all other inputs, or one per input.
    #[arg(long, value_delimiter = ',')]
    pub fixed: Vec<f64>,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Summary files or per-seed `report.json` files; the first is the reference.
    #[arg(required = true)]
    pub reports: Vec<PathBuf>,
}

pub fn run(cli: Cli, stdout: &mut impl Write) -> Result<(), CliError> {
    let out = |e: std::io::Error| CliError::Output {
        path: PathBuf::from("<stdout>"),
        source: e,
    };
    match cli.command {
        Command::TrainAnfis(args) => report_run(&train(TrainCommand::Anfis, &args.resolve()?)?, stdout).map_err(out),
        Command::TrainAnfisPso(args) => {
            report_run(&train(TrainCommand::AnfisPso, &args.resolve()?)?, stdout).map_err(out)
        }
        Command::Surface(args) => {
            let [i, j] = args.inputs[..] else {
                return Err(CliError::Usage(format!("--inputs takes two indices, got {:?}", args.inputs)));
            };
            let fis = surface::load_model(&args.model)?;
            let csv = surface_csv(&fis, i, j, args.resolution, &args.fixed)?;
            match &args.out {
                Some(p) => run::write(p, &csv),
                None => stdout.write_all(csv.as_bytes()).map_err(out),
            }
        }
        Command::Compare(args) => {
            let sets = args.reports.iter().map(|p| load_report_set(p)).collect::<Result<Vec<_>, _>>()?;
            writeln!(stdout, "{}", compare(sets)?).map_err(out)
        }
    }
}

fn report_run(r: &RunOutput, w: &mut impl Write) -> std::io::Result<()> {
    let s = &r.summary;
    writeln!(w, "{} {} ({} seeds)", s.command, s.config_digest, s.runs.len())?;
    for m in Method::ALL {
        let Some(a) = s.method(m) else { continue };
        write!(
            w,
            "{m:<9}  train_rmse {:.4} +- {:.4}  test_rmse {:.4} +- {:.4}",
            a.train_rmse.mean, a.train_rmse.std, a.test_rmse.mean, a.test_rmse.std
        )?;
        if let Some(acc) = a.accuracy {
            write!(w, "  accuracy {:.4} +- {:.4}", acc.mean, acc.std)?;
        }
        writeln!(w)?;
    }
    if let Some(d) = s.accuracy_delta {
        writeln!(w, "accuracy delta (anfis-pso - anfis): {:+.4}", d.mean)?;
    }
    writeln!(w, "summary: {}", r.summary_path.display())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_lists() {
        assert_eq!(parse_seeds("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_seeds("7").unwrap(), vec![7]);
        assert_eq!(parse_seeds("3, 1,9").unwrap(), vec![3, 1, 9]);
        assert!(parse_seeds("4..1").is_err());
        assert!(parse_seeds("a").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(&p, "radius = 0.3\nepochs = 5\n").unwrap();
        let args = RunArgs {
            config: Some(p),
            epochs: Some(9),
            seed: Some(4),
            target: Some("drinks".into()),
            ..Default::default()
        };
        let c = args.resolve().unwrap();
        assert_eq!((c.radius, c.epochs, c.seeds.clone(), c.target), (0.3, 9, vec![4], TargetMode::Drinks));
    }

    #[test]
    fn cli_parses() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let cli = Cli::try_parse_from(["neurofuzzy", "surface", "--model", "m.json", "--inputs", "0,3"]).unwrap();
        let Command::Surface(a) = cli.command else { panic!() };
        assert_eq!(a.inputs, vec![0, 3]);
        assert!(Cli::try_parse_from(["neurofuzzy", "train-anfis", "--seed", "1", "--seeds", "1..3"]).is_err());
    }
}
