use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use neurofuzzy::{ExperimentReport, FisF64};
use neurofuzzy_cli::{compare, load_report_set, RunSummary};

fn data() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/bupa.data")
}

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_neurofuzzy")).args(args).output().unwrap()
}

fn train(cmd: &str, out: &Path, extra: &[&str]) -> Output {
    let data = data();
    let mut args = vec![cmd, "--data", data.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend(extra);
    let o = bin(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    o
}

fn only(dir: &Path, prefix: &str) -> PathBuf {
    let mut hits: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap().to_str().unwrap().starts_with(prefix))
        .collect();
    assert_eq!(hits.len(), 1, "{prefix} in {}", dir.display());
    hits.pop().unwrap()
}

#[test]
fn reports_are_byte_identical_across_reruns() {
    let out = tempfile::tempdir().unwrap();
    let args = ["--seed", "7", "--iterations", "20", "--swarm", "8", "--radius", "0.3"];
    let snapshot = || {
        train("train-anfis-pso", out.path(), &args);
        let summary = only(out.path(), "train-anfis-pso-");
        let run = only(out.path(), &summary.file_stem().unwrap().to_str().unwrap()["train-anfis-pso-".len()..]);
        let files = ["report.json", "anfis_pso_model.json", "pso_convergence.csv", "anfis_history.csv"];
        let mut bytes = vec![fs::read(&summary).unwrap()];
        bytes.extend(files.iter().map(|f| fs::read(run.join(f)).unwrap()));
        bytes
    };
    let first = snapshot();
    fs::remove_dir_all(out.path()).unwrap();
    assert_eq!(first, snapshot());
}

#[test]
fn per_seed_artifacts() {
    let out = tempfile::tempdir().unwrap();
    train("train-anfis-pso", out.path(), &["--seeds", "1,2", "--iterations", "15", "--swarm", "6"]);
    let summary_path = only(out.path(), "train-anfis-pso-");
    let summary: RunSummary = serde_json::from_str(&fs::read_to_string(&summary_path).unwrap()).unwrap();
    assert_eq!(summary.runs.len(), 2);
    for r in &summary.runs {
        let dir = out.path().join(format!("{}-seed{}", summary.config_digest, r.seed));
        let report = ExperimentReport::from_json(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
        assert_eq!(&report, r);

        let conv = fs::read_to_string(dir.join("pso_convergence.csv")).unwrap();
        let mut lines = conv.lines();
        assert_eq!(lines.next(), Some("iteration,gbest_value"));
        let values: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
        assert_eq!(values.len(), 16);
        assert!(values.windows(2).all(|w| w[1] <= w[0]));

        let hist = fs::read_to_string(dir.join("anfis_history.csv")).unwrap();
        assert_eq!(hist.lines().next(), Some("epoch,train_rmse,test_rmse"));
        assert_eq!(hist.lines().count(), 101);

        let pso = r.anfis_pso.as_ref().unwrap();
        let model = FisF64::from_json(&fs::read_to_string(dir.join(pso.model_file.as_ref().unwrap())).unwrap()).unwrap();
        assert_eq!(model.n_rules(), pso.n_rules);
        assert!(pso.train_rmse <= r.initial_train_rmse);
    }
}

#[test]
fn zero_iterations_has_no_convergence_curve() {
    let out = tempfile::tempdir().unwrap();
    train("train-anfis-pso", out.path(), &["--seed", "3", "--iterations", "0"]);
    let summary: RunSummary = serde_json::from_str(&fs::read_to_string(only(out.path(), "train-anfis-pso-")).unwrap()).unwrap();
    let r = &summary.runs[0];
    let pso = r.anfis_pso.as_ref().unwrap();
    assert!(pso.history_file.is_none());
    assert!(pso.train_rmse <= r.initial_train_rmse);
}

#[test]
fn missing_data_is_a_data_error_naming_the_path() {
    let out = tempfile::tempdir().unwrap();
    let o = bin(&["train-anfis", "--data", "/no/such/bupa.data", "--out", out.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/no/such/bupa.data"));
}

#[test]
fn bad_config_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "epochs = 0\n").unwrap();
    assert_eq!(bin(&["train-anfis", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    fs::write(&cfg, "no_such_key = 1\n").unwrap();
    assert_eq!(bin(&["train-anfis", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(bin(&["train-anfis", "--radius", "1.5"]).status.code(), Some(2));
}

#[test]
fn surface_of_trained_model() {
    let out = tempfile::tempdir().unwrap();
    train("train-anfis", out.path(), &["--seed", "1", "--radius", "0.3"]);
    let summary: RunSummary = serde_json::from_str(&fs::read_to_string(only(out.path(), "train-anfis-")).unwrap()).unwrap();
    let model = out.path().join(format!("{}-seed1/anfis_model.json", summary.config_digest));
    let fis = FisF64::from_json(&fs::read_to_string(&model).unwrap()).unwrap();

    let o = bin(&["surface", "--model", model.to_str().unwrap(), "--inputs", "2,4", "--resolution", "3"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(text.lines().next(), Some("x_2,x_4,output"));
    assert_eq!(rows.len(), 9);
    for r in &rows {
        let mut x = vec![0.5; fis.n_inputs()];
        x[2] = r[0];
        x[4] = r[1];
        assert!(r[2].is_finite());
        assert_eq!(r[2], fis.predict(&x).unwrap());
        // each output is a convex combination of rule outputs
        let f = fis.rule_outputs(&x).unwrap();
        let lo = f.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert!(r[2] >= lo - 1e-12 && r[2] <= hi + 1e-12);
    }

    let same = bin(&["surface", "--model", model.to_str().unwrap(), "--inputs", "2,2"]);
    assert_eq!(same.status.code(), Some(2));
    let missing = bin(&["surface", "--model", "/no/model.json", "--inputs", "0,1"]);
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn compare_reports() {
    let out = tempfile::tempdir().unwrap();
    train("train-anfis", out.path(), &["--seeds", "1..2"]);
    train("train-anfis-pso", out.path(), &["--seeds", "1..2", "--iterations", "10", "--swarm", "5", "--radius", "0.3"]);
    let summaries: Vec<PathBuf> = fs::read_dir(out.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    assert_eq!(summaries.len(), 2);
    let anfis = summaries.iter().find(|p| !p.to_str().unwrap().contains("anfis-pso")).unwrap();
    let pso = summaries.iter().find(|p| p.to_str().unwrap().contains("anfis-pso")).unwrap();

    let o = bin(&["compare", anfis.to_str().unwrap(), pso.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("accuracy improvement (anfis-pso vs anfis)"));
    assert!(text.contains("mean") && text.contains("std"));

    // self-comparison: every delta is zero
    let c = compare(vec![load_report_set(pso).unwrap(), load_report_set(pso).unwrap()]).unwrap();
    assert!(!c.deltas.is_empty());
    for d in &c.deltas {
        assert_eq!((d.train_rmse, d.test_rmse, d.test_mse), (0.0, 0.0, 0.0));
        assert_eq!((d.accuracy, d.sensitivity, d.specificity), (Some(0.0), Some(0.0), Some(0.0)));
    }

    // a per-seed report mixes with summaries
    let digest = pso.file_stem().unwrap().to_str().unwrap().rsplit('-').next().unwrap().to_string();
    let seed_report = out.path().join(format!("{digest}-seed1/report.json"));
    assert!(bin(&["compare", seed_report.to_str().unwrap(), anfis.to_str().unwrap()]).status.success());

    assert_eq!(bin(&["compare", anfis.to_str().unwrap()]).status.code(), Some(2));

    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(anfis).unwrap()).unwrap();
    v["schema_version"] = 99.into();
    let bad = out.path().join("future.json");
    fs::write(&bad, v.to_string()).unwrap();
    let o = bin(&["compare", anfis.to_str().unwrap(), bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("schema version"));
}
