//! Output surface of a saved model over two inputs.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use neurofuzzy::FisF64;

use crate::error::CliError;

pub const DEFAULT_FIXED: f64 = 0.5;

pub fn load_model(path: &Path) -> Result<FisF64, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read model {}: {e}", path.display())))?;
    FisF64::from_json(&text).map_err(|e| CliError::Input(format!("cannot load model {}: {e}", path.display())))
}

/// `x_i,x_j,output` rows over a `resolution x resolution` grid on `[0, 1]^2`,
/// `x_i` varying slowest. `fixed` holds either one value for every other
/// input or one value per input (entries `i` and `j` are ignored).
pub fn surface_csv(fis: &FisF64, i: usize, j: usize, resolution: usize, fixed: &[f64]) -> Result<String, CliError> {
    let n = fis.n_inputs();
    if i >= n || j >= n {
        return Err(CliError::Usage(format!("input pair ({i}, {j}) out of range for {n} inputs")));
    }
    if i == j {
        return Err(CliError::Usage(format!("input pair ({i}, {j}) must name two different inputs")));
    }
    if resolution < 2 {
        return Err(CliError::Usage(format!("resolution {resolution} (need >= 2)")));
    }
    let mut x = match fixed.len() {
        0 => vec![DEFAULT_FIXED; n],
        1 => vec![fixed[0]; n],
        len if len == n => fixed.to_vec(),
        len => {
            return Err(CliError::Usage(format!(
                "{len} fixed values given; pass one value or one per input ({n})"
            )))
        }
    };
    if let Some(bad) = x.iter().find(|v| !v.is_finite()) {
        return Err(CliError::Usage(format!("fixed value {bad} is not finite")));
    }

    let step = 1.0 / (resolution - 1) as f64;
    let mut out = format!("x_{i},x_{j},output\n");
    for a in 0..resolution {
        x[i] = a as f64 * step;
        for b in 0..resolution {
            x[j] = b as f64 * step;
            let y = fis.predict(&x).map_err(CliError::Runtime)?;
            writeln!(out, "{},{},{}", x[i], x[j], y).expect("writing to a String cannot fail");
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use neurofuzzy::{MembershipFunction, RuleConsequent};

    fn constant(c: f64) -> FisF64 {
        FisF64::new(
            vec![vec![MembershipFunction::bell(0.5, 2.0, 0.5).unwrap()]; 3],
            vec![vec![0, 0, 0]],
            vec![RuleConsequent::constant(3, c)],
        )
        .unwrap()
    }

    #[test]
    fn constant_model_gives_flat_surface() {
        let csv = surface_csv(&constant(0.7), 0, 2, 3, &[]).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x_0,x_2,output");
        assert_eq!(lines.len(), 10);
        for l in &lines[1..] {
            assert_eq!(l.rsplit(',').next().unwrap().parse::<f64>().unwrap(), 0.7);
        }
        assert_eq!(lines[1], "0,0,0.7");
        assert_eq!(lines[9], "1,1,0.7");
    }

    #[test]
    fn rejects_bad_arguments() {
        let f = constant(0.0);
        assert!(surface_csv(&f, 1, 1, 3, &[]).is_err());
        assert!(surface_csv(&f, 0, 3, 3, &[]).is_err());
        assert!(surface_csv(&f, 0, 1, 1, &[]).is_err());
        assert!(surface_csv(&f, 0, 1, 3, &[0.1, 0.2]).is_err());
        assert!(surface_csv(&f, 0, 1, 3, &[f64::NAN]).is_err());
        assert!(surface_csv(&f, 0, 1, 3, &[0.1, 0.2, 0.3]).is_ok());
    }
}
