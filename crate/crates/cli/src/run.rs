//! `train-anfis` and `train-anfis-pso`.

use std::fs;
use std::path::{Path, PathBuf};

use neurofuzzy::{
    load_bupa, run_anfis, run_anfis_pso, DatasetF64, ExperimentF64, ExperimentReport, MethodHistory, PipelineOptions,
    RunMeta,
};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::summary::RunSummary;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrainCommand {
    Anfis,
    AnfisPso,
}

impl TrainCommand {
    pub fn name(self) -> &'static str {
        match self {
            TrainCommand::Anfis => "train-anfis",
            TrainCommand::AnfisPso => "train-anfis-pso",
        }
    }
}

/// Where a finished invocation left its files.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub summary: RunSummary,
    pub summary_path: PathBuf,
    pub run_dirs: Vec<PathBuf>,
}

pub fn run_dir(out: &Path, digest: &str, seed: u64) -> PathBuf {
    out.join(format!("{digest}-seed{seed}"))
}

/// Runs every configured seed and writes per-seed artifacts plus a summary.
pub fn train(cmd: TrainCommand, cfg: &RunConfig) -> Result<RunOutput, CliError> {
    cfg.validate()?;
    let digest = cfg.digest(cmd.name())?;
    let data = load_bupa::<f64>(&cfg.data, cfg.target)?.normalize_minmax()?;

    let runs = cfg
        .seeds
        .par_iter()
        .map(|&seed| {
            let (report, exp) = run_seed(cmd, cfg, &data, seed, &digest)?;
            let dir = run_dir(&cfg.out, &digest, seed);
            let report = write_run(&dir, report, &exp)?;
            Ok((report, dir))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let (reports, run_dirs): (Vec<_>, Vec<_>) = runs.into_iter().unzip();

    let summary = RunSummary::new(cmd.name(), digest.clone(), cfg.clone(), reports);
    let summary_path = cfg.out.join(format!("{}-{digest}.json", cmd.name()));
    write(&summary_path, &to_json(&summary)?)?;
    Ok(RunOutput {
        summary,
        summary_path,
        run_dirs,
    })
}

/// One seed, in memory.
pub fn run_seed(
    cmd: TrainCommand,
    cfg: &RunConfig,
    data: &DatasetF64,
    seed: u64,
    digest: &str,
) -> Result<(ExperimentReport, ExperimentF64), CliError> {
    let (train, test) = data.split_holdout(&cfg.split(seed))?;
    let gen = cfg.gen_config();
    let anfis_cfg = cfg.train_config();
    let exp = match cmd {
        TrainCommand::Anfis => {
            run_anfis(&train, &test, &gen, &anfis_cfg, &PipelineOptions::for_target(cfg.target, true))?
        }
        TrainCommand::AnfisPso => run_anfis_pso(
            &train,
            &test,
            &gen,
            &cfg.pso_config(seed),
            &anfis_cfg,
            &PipelineOptions::for_target(cfg.target, cfg.baseline),
        )?,
    };
    let meta = RunMeta {
        seed,
        config_digest: digest.to_string(),
        target_mode: cfg.target,
        dataset_rows: data.len(),
        train_rows: train.len(),
        test_rows: test.len(),
    };
    Ok((ExperimentReport::new(meta, &exp), exp))
}

fn write_run(dir: &Path, mut report: ExperimentReport, exp: &ExperimentF64) -> Result<ExperimentReport, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::output(dir, e))?;
    write(&dir.join("initial_model.json"), &exp.initial.to_json()?)?;

    if let (Some(m), Some(r)) = (&exp.anfis, report.anfis.as_mut()) {
        write(&dir.join("anfis_model.json"), &m.model.to_json()?)?;
        r.model_file = Some("anfis_model.json".into());
        if let MethodHistory::Training(h) = &m.history {
            write(&dir.join("anfis_history.csv"), &h.to_csv())?;
            r.history_file = Some("anfis_history.csv".into());
        }
    }
    if let (Some(m), Some(r)) = (&exp.anfis_pso, report.anfis_pso.as_mut()) {
        write(&dir.join("anfis_pso_model.json"), &m.model.to_json()?)?;
        r.model_file = Some("anfis_pso_model.json".into());
        if let MethodHistory::Convergence(h) = &m.history {
            if !h.is_empty() {
                write(&dir.join("pso_convergence.csv"), &neurofuzzy::convergence_csv(h))?;
                r.history_file = Some("pso_convergence.csv".into());
            }
        }
    }
    write(&dir.join("report.json"), &report.to_json()?)?;
    Ok(report)
}

pub(crate) fn to_json<S: serde::Serialize>(value: &S) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.into()))
}

pub(crate) fn write(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::output(parent, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::output(path, e))
}
