#![allow(dead_code)]

use neurofuzzy::{DatasetF64, FisF64, MembershipFunctionF64, RuleConsequent};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_mf(rng: &mut impl Rng) -> MembershipFunctionF64 {
    let c = rng.random_range(0.0..1.0);
    if rng.random_bool(0.5) {
        MembershipFunctionF64::bell(rng.random_range(0.15..0.6), rng.random_range(1.0..3.0), c).unwrap()
    } else {
        MembershipFunctionF64::gaussian(rng.random_range(0.2..0.6), c).unwrap()
    }
}

/// Up to `max_inputs` inputs with 1..=3 MFs each and up to `max_rules`
/// distinct rules.
pub fn random_fis(rng: &mut impl Rng, max_inputs: usize, max_rules: usize) -> FisF64 {
    let n = rng.random_range(1..=max_inputs);
    let input_mfs: Vec<Vec<MembershipFunctionF64>> = (0..n)
        .map(|_| (0..rng.random_range(1..=3)).map(|_| random_mf(rng)).collect())
        .collect();
    let combos: usize = input_mfs.iter().map(Vec::len).product();
    let target = rng.random_range(1..=max_rules).min(combos);
    let mut rules: Vec<Vec<usize>> = Vec::new();
    while rules.len() < target {
        let r: Vec<usize> = input_mfs.iter().map(|m| rng.random_range(0..m.len())).collect();
        if !rules.contains(&r) {
            rules.push(r);
        }
    }
    let consequents = rules
        .iter()
        .map(|_| RuleConsequent {
            coefficients: (0..n).map(|_| rng.random_range(-2.0..2.0)).collect(),
            constant: rng.random_range(-1.0..1.0),
        })
        .collect();
    FisF64::new(input_mfs, rules, consequents).unwrap()
}

pub fn random_dataset(rng: &mut impl Rng, n_features: usize, rows: usize) -> DatasetF64 {
    let x = (0..rows)
        .map(|_| (0..n_features).map(|_| rng.random_range(0.0..1.0)).collect())
        .collect();
    let y = (0..rows).map(|_| rng.random_range(0.0..1.0)).collect();
    DatasetF64::from_unnamed(x, y).unwrap()
}

/// Two inputs, two bell rules:
/// `x1 is A1 and x2 is B1 -> 0.5 x1 + 0.25 x2 + 0.1`,
/// `x1 is A2 and x2 is B2 -> -x1 + 2 x2 - 0.3`.
pub fn two_rule_bell() -> FisF64 {
    FisF64::new(
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
    .unwrap()
}

/// One input, gaussian MFs at 0.2 and 0.8, constant consequents 1 and 3.
pub fn two_rule_gaussian() -> FisF64 {
    FisF64::new(
        vec![vec![
            MembershipFunctionF64::gaussian(0.2, 0.2).unwrap(),
            MembershipFunctionF64::gaussian(0.3, 0.8).unwrap(),
        ]],
        vec![vec![0], vec![1]],
        vec![RuleConsequent::constant(1, 1.0), RuleConsequent::constant(1, 3.0)],
    )
    .unwrap()
}
