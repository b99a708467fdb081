//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use neurofuzzy::{
    decode_fis, encode_fis, lse_consequents, normalize_weights, premise_gradients, pso_optimize, BoundsF64, DatasetF64,
    FisF64, MembershipFunctionF64, PsoConfig, RuleConsequent,
};
use neurofuzzy_cli::{surface_csv, train, MeanStd, Method, RunConfig, RunSummary, TrainCommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Self {
            pass,
            summary: summary.into(),
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.pass &= ok;
        self.details.push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }
}

fn data() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/bupa.data")
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_mf(r: &mut impl Rng) -> MembershipFunctionF64 {
    let c = r.random_range(0.0..1.0);
    if r.random_bool(0.5) {
        MembershipFunctionF64::bell(r.random_range(0.15..0.6), r.random_range(1.0..3.0), c).unwrap()
    } else {
        MembershipFunctionF64::gaussian(r.random_range(0.2..0.6), c).unwrap()
    }
}

/// At most 3 inputs and 4 distinct rules.
fn random_fis(r: &mut impl Rng) -> FisF64 {
    let n = r.random_range(1..=3);
    let mfs: Vec<Vec<MembershipFunctionF64>> = (0..n)
        .map(|_| (0..r.random_range(1..=3)).map(|_| random_mf(r)).collect())
        .collect();
    let combos: usize = mfs.iter().map(Vec::len).product();
    let want = r.random_range(1..=4).min(combos);
    let mut rules: Vec<Vec<usize>> = Vec::new();
    while rules.len() < want {
        let rule: Vec<usize> = mfs.iter().map(|m| r.random_range(0..m.len())).collect();
        if !rules.contains(&rule) {
            rules.push(rule);
        }
    }
    let consequents = rules
        .iter()
        .map(|_| RuleConsequent {
            coefficients: (0..n).map(|_| r.random_range(-2.0..2.0)).collect(),
            constant: r.random_range(-1.0..1.0),
        })
        .collect();
    FisF64::new(mfs, rules, consequents).unwrap()
}

fn random_dataset(r: &mut impl Rng, n: usize, rows: usize) -> DatasetF64 {
    let x = (0..rows).map(|_| (0..n).map(|_| r.random_range(0.0..1.0)).collect()).collect();
    let y = (0..rows).map(|_| r.random_range(0.0..1.0)).collect();
    DatasetF64::from_unnamed(x, y).unwrap()
}

fn mean_of(s: &RunSummary, m: Method, f: fn(&neurofuzzy_cli::MethodAggregate) -> Option<MeanStd>) -> f64 {
    s.method(m).and_then(f).map_or(f64::NAN, |v| v.mean)
}

fn default_experiment() -> (RunSummary, Duration) {
    let out = tempfile::tempdir().unwrap();
    let cfg = RunConfig {
        data: data(),
        out: out.path().to_path_buf(),
        ..Default::default()
    };
    let t0 = Instant::now();
    let run = train(TrainCommand::AnfisPso, &cfg).expect("default experiment runs");
    (run.summary, t0.elapsed())
}

fn rmse_band(s: &RunSummary, elapsed: Duration) -> Outcome {
    let anfis = mean_of(s, Method::Anfis, |a| Some(a.test_rmse));
    let pso = mean_of(s, Method::AnfisPso, |a| Some(a.test_rmse));
    let wins = s.test_rmse_wins.unwrap_or(0);
    let mut o = Outcome::new(true, format!("10 seeds, defaults: anfis {anfis:.4}, anfis-pso {pso:.4}"));
    o.check(s.runs.len() == 10, format!("seed count {}", s.runs.len()));
    o.check(
        (0.30..=0.46).contains(&anfis),
        format!("mean ANFIS test RMSE {anfis:.4} in [0.30, 0.46]"),
    );
    o.check(
        (0.28..=0.42).contains(&pso),
        format!("mean ANFIS-PSO test RMSE {pso:.4} in [0.28, 0.42]"),
    );
    o.check(pso < anfis, format!("ANFIS-PSO mean {pso:.4} strictly below ANFIS mean {anfis:.4}"));
    o.check(wins >= 7, format!("ANFIS-PSO lower test RMSE on {wins}/10 seeds (need >= 7)"));
    o.check(
        elapsed < Duration::from_secs(300),
        format!("runtime {:.1}s < 300s", elapsed.as_secs_f64()),
    );
    for r in &s.runs {
        let (a, p) = (r.anfis.as_ref().unwrap(), r.anfis_pso.as_ref().unwrap());
        o.details.push(format!(
            "     seed {:>2}: rules {} anfis {:.4} anfis-pso {:.4} ({:?})",
            r.seed, r.initial_rules, a.test_rmse, p.test_rmse, p.selected
        ));
    }
    o
}

fn accuracy_direction(s: &RunSummary) -> Outcome {
    let a = mean_of(s, Method::Anfis, |m| m.accuracy);
    let p = mean_of(s, Method::AnfisPso, |m| m.accuracy);
    let rel = if a > 0.0 { 100.0 * (p - a) / a } else { f64::NAN };
    Outcome::new(
        p >= a,
        format!(
            "mean test accuracy anfis-pso {p:.4} >= anfis {a:.4}; observed delta {:+.4} ({rel:+.2}% relative)",
            p - a
        ),
    )
}

fn gradient_oracle() -> Outcome {
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for seed in 0..50 {
        let mut r = rng(31_000 + seed);
        let fis = random_fis(&mut r);
        let d = random_dataset(&mut r, fis.n_inputs(), 25);
        let g = premise_gradients(&fis, &d).unwrap();
        let base = encode_fis(&fis).values;
        let mse = |v: &[f64]| decode_fis(&fis, v).unwrap().fis.mse(&d).unwrap();
        // roundoff bound of a central difference at step h
        let noise = 8.0 * f64::EPSILON * fis.mse(&d).unwrap() / h;
        for (k, a) in g.iter().enumerate() {
            let (mut p, mut m) = (base.clone(), base.clone());
            p[k] += h;
            m[k] -= h;
            let fd = (mse(&p) - mse(&m)) / (2.0 * h);
            let scale = a.abs().max(fd.abs());
            let err = (a - fd).abs();
            if err > 1e-4 * scale + noise {
                failures += 1;
            }
            if scale > noise * 1e4 {
                worst = worst.max(err / scale);
            }
        }
    }
    Outcome::new(
        failures == 0,
        format!("50 random systems, central differences h=1e-6: {failures} mismatches, max relative error {worst:.2e} (< 1e-4)"),
    )
}

fn lse_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut not_min = 0;
    for seed in 0..20 {
        let mut r = rng(41_000 + seed);
        let fis = random_fis(&mut r);
        let d = random_dataset(&mut r, fis.n_inputs(), 80);
        let n = fis.n_inputs();
        let mut a = DMatrix::zeros(d.len(), fis.n_rules() * (n + 1));
        for (i, x) in d.rows().enumerate() {
            let w = fis.firing_strengths(x).unwrap();
            let s: f64 = w.iter().sum();
            for (rule, wr) in w.iter().enumerate() {
                for (k, xk) in x.iter().enumerate() {
                    a[(i, rule * (n + 1) + k)] = wr / s * xk;
                }
                a[(i, rule * (n + 1) + n)] = wr / s;
            }
        }
        let y = DVector::from_column_slice(d.targets());
        let theta = (a.transpose() * &a).lu().solve(&(a.transpose() * y)).unwrap();
        let fitted = lse_consequents(&fis, &d, 0.0).unwrap();
        for (g, t) in fitted.consequent_params().iter().zip(theta.iter()) {
            worst = worst.max((g - t).abs() / t.abs().max(1.0));
        }

        let sse = fitted.sse(&d).unwrap();
        let base = encode_fis(&fitted).values;
        for k in fitted.premise_len()..base.len() {
            for delta in [1e-3, -1e-3] {
                let mut v = base.clone();
                v[k] += delta;
                if decode_fis(&fitted, &v).unwrap().fis.sse(&d).unwrap() < sse {
                    not_min += 1;
                }
            }
        }
    }
    Outcome::new(
        worst <= 1e-8 && not_min == 0,
        format!("20 instances: max deviation from normal equations {worst:.2e} (<= 1e-8), {not_min} improving perturbations"),
    )
}

fn bell(x: f64, a: f64, b: f64, c: f64) -> f64 {
    1.0 / (1.0 + ((x - c) / a).abs().powf(2.0 * b))
}

fn forward_oracle() -> Outcome {
    let fis = FisF64::new(
        vec![
            vec![
                MembershipFunctionF64::bell(0.3, 2.0, 0.2).unwrap(),
                MembershipFunctionF64::bell(0.4, 1.5, 0.9).unwrap(),
            ],
            vec![
                MembershipFunctionF64::bell(0.25, 3.0, 0.1).unwrap(),
                MembershipFunctionF64::bell(0.5, 2.5, 0.7).unwrap(),
            ],
        ],
        vec![vec![0, 0], vec![1, 1]],
        vec![
            RuleConsequent {
                coefficients: vec![0.5, 0.25],
                constant: 0.1,
            },
            RuleConsequent {
                coefficients: vec![-1.0, 2.0],
                constant: -0.3,
            },
        ],
    )
    .unwrap();
    let gauss = FisF64::new(
        vec![vec![
            MembershipFunctionF64::gaussian(0.2, 0.2).unwrap(),
            MembershipFunctionF64::gaussian(0.3, 0.8).unwrap(),
        ]],
        vec![vec![0], vec![1]],
        vec![RuleConsequent::constant(1, 1.0), RuleConsequent::constant(1, 3.0)],
    )
    .unwrap();

    let mut worst: f64 = 0.0;
    for x in [[0.3, 0.8], [0.0, 0.0], [0.55, 0.4], [1.0, 1.0]] {
        let w1 = bell(x[0], 0.3, 2.0, 0.2) * bell(x[1], 0.25, 3.0, 0.1);
        let w2 = bell(x[0], 0.4, 1.5, 0.9) * bell(x[1], 0.5, 2.5, 0.7);
        let f1 = 0.5 * x[0] + 0.25 * x[1] + 0.1;
        let f2 = -x[0] + 2.0 * x[1] - 0.3;
        let y = (w1 * f1 + w2 * f2) / (w1 + w2);
        worst = worst.max((fis.predict(&x).unwrap() - y).abs());
    }
    let (w1, w2) = ((-1.125f64).exp(), (-0.5f64).exp());
    worst = worst.max((gauss.predict(&[0.5]).unwrap() - (w1 + 3.0 * w2) / (w1 + w2)).abs());

    let mut r = rng(51_000);
    let mut worst_sum: f64 = 0.0;
    for i in 0..1000 {
        let w: Vec<f64> = if i % 2 == 0 {
            (0..r.random_range(1..10)).map(|_| r.random_range(1e-6..5.0)).collect()
        } else {
            let f = random_fis(&mut r);
            let x: Vec<f64> = (0..f.n_inputs()).map(|_| r.random_range(0.0..1.0)).collect();
            f.firing_strengths(&x).unwrap()
        };
        let n = normalize_weights(&w).unwrap();
        worst_sum = worst_sum.max((n.iter().sum::<f64>() - 1.0).abs());
    }
    Outcome::new(
        worst <= 1e-12 && worst_sum <= 1e-12,
        format!("fixtures max |error| {worst:.1e} (<= 1e-12); normalized weights max |sum - 1| {worst_sum:.1e} over 1000 inputs"),
    )
}

fn pso_benchmark() -> Outcome {
    let bounds = BoundsF64::uniform(5, -5.0, 5.0).unwrap();
    let sphere = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
    let t0 = Instant::now();
    let mut hits = 0;
    let mut monotone = true;
    let mut worst: f64 = 0.0;
    for seed in 1..=10 {
        let cfg = PsoConfig {
            swarm_size: 30,
            iterations: 200,
            seed,
            ..Default::default()
        };
        let out = pso_optimize(&sphere, &bounds, &cfg).unwrap();
        monotone &= out.history.windows(2).all(|w| w[1] <= w[0]);
        worst = worst.max(out.best_value);
        if out.best_value < 1e-4 {
            hits += 1;
        }
    }
    let t = t0.elapsed();
    Outcome::new(
        hits >= 9 && monotone && t < Duration::from_secs(5),
        format!(
            "sphere 5-d: {hits}/10 seeds < 1e-4 (worst {worst:.2e}), histories non-increasing: {monotone}, {:.2}s",
            t.as_secs_f64()
        ),
    )
}

fn encode_round_trip() -> Outcome {
    let mut bad = 0;
    for seed in 0..100 {
        let fis = random_fis(&mut rng(61_000 + seed));
        let d = decode_fis(&fis, &encode_fis(&fis).values).unwrap();
        if d.fis != fis || d.clipped != 0 {
            bad += 1;
        }
    }
    Outcome::new(bad == 0, format!("100 random systems, {bad} not reproduced field-for-field"))
}

fn determinism() -> Outcome {
    let mut o = Outcome::new(true, "re-runs with the same config and seed");
    for cmd in [TrainCommand::Anfis, TrainCommand::AnfisPso] {
        let runs: Vec<RunSummary> = (0..2)
            .map(|_| {
                let out = tempfile::tempdir().unwrap();
                let cfg = RunConfig {
                    data: data(),
                    out: out.path().to_path_buf(),
                    seeds: vec![7],
                    radius: 0.3,
                    parallel: false,
                    ..Default::default()
                };
                train(cmd, &cfg).unwrap().summary
            })
            .collect();
        let bits = |s: &RunSummary| {
            s.runs
                .iter()
                .flat_map(|r| [r.anfis.as_ref(), r.anfis_pso.as_ref()])
                .flatten()
                .flat_map(|m| [m.train_rmse.to_bits(), m.test_rmse.to_bits()])
                .collect::<Vec<u64>>()
        };
        o.check(
            bits(&runs[0]) == bits(&runs[1]) && runs[0].runs == runs[1].runs,
            format!("{}: RMSE bit-identical, reports equal", cmd.name()),
        );
    }
    let mut r = rng(71_000);
    let fis = random_fis(&mut r);
    if fis.n_inputs() >= 2 {
        let a = surface_csv(&fis, 0, 1, 9, &[]).unwrap();
        o.check(a == surface_csv(&fis, 0, 1, 9, &[]).unwrap(), "surface: identical CSV".into());
    }
    o
}

fn main() -> ExitCode {
    let (summary, elapsed) = default_experiment();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("test RMSE band", Box::new(|| rmse_band(&summary, elapsed))),
        ("directional accuracy", Box::new(|| accuracy_direction(&summary))),
        ("gradient oracle", Box::new(gradient_oracle)),
        ("LSE oracle", Box::new(lse_oracle)),
        ("forward-pass oracle", Box::new(forward_oracle)),
        ("PSO benchmark", Box::new(pso_benchmark)),
        ("encode/decode round trip", Box::new(encode_round_trip)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("[{}] {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.summary);
        for d in &o.details {
            println!("      {d}");
        }
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
