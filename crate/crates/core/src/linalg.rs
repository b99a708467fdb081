use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Solves `min |A x - b|^2 + lambda |x|^2` by Householder QR on the
/// system augmented with `sqrt(lambda) I`.
///
/// `a` is row-major `m x n`. With `lambda == 0` a rank-deficient `A`
/// yields [`Error::Singular`].
pub(crate) fn ridge_least_squares<T: Scalar>(a: &[T], m: usize, n: usize, b: &[T], lambda: T) -> Result<Vec<T>> {
    debug_assert_eq!(a.len(), m * n);
    debug_assert_eq!(b.len(), m);
    if n == 0 {
        return Ok(Vec::new());
    }
    let regularized = lambda > T::zero();
    let rows = if regularized { m + n } else { m };
    if rows < n {
        return Err(Error::Singular(format!("{m} equations for {n} unknowns")));
    }

    // column-major working copy
    let mut cols: Vec<Vec<T>> = (0..n)
        .map(|j| {
            let mut col = Vec::with_capacity(rows);
            col.extend((0..m).map(|i| a[i * n + j]));
            if regularized {
                col.extend((0..n).map(|k| if k == j { lambda.sqrt() } else { T::zero() }));
            }
            col
        })
        .collect();
    let mut rhs: Vec<T> = b.to_vec();
    rhs.resize(rows, T::zero());

    let mut diag = vec![T::zero(); n];
    let mut v = vec![T::zero(); rows];
    for k in 0..n {
        let norm = cols[k][k..].iter().map(|&x| x * x).sum::<T>().sqrt();
        if norm == T::zero() {
            diag[k] = T::zero();
            continue;
        }
        let x0 = cols[k][k];
        let alpha = if x0 > T::zero() { -norm } else { norm };
        v[k..].copy_from_slice(&cols[k][k..]);
        v[k] -= alpha;
        let vnorm2: T = v[k..].iter().map(|&x| x * x).sum();
        diag[k] = alpha;
        if vnorm2 == T::zero() {
            continue;
        }
        let two = T::lit(2.0);
        for col in cols.iter_mut().skip(k + 1) {
            let dot: T = v[k..].iter().zip(&col[k..]).map(|(&p, &q)| p * q).sum();
            let s = two * dot / vnorm2;
            for (c, &vi) in col[k..].iter_mut().zip(&v[k..]) {
                *c -= s * vi;
            }
        }
        let dot: T = v[k..].iter().zip(&rhs[k..]).map(|(&p, &q)| p * q).sum();
        let s = two * dot / vnorm2;
        for (c, &vi) in rhs[k..].iter_mut().zip(&v[k..]) {
            *c -= s * vi;
        }
    }

    let scale = diag.iter().fold(T::zero(), |acc, d| acc.max(d.abs()));
    if !regularized {
        let tol = scale * T::epsilon() * T::from_usize(rows.max(n)).unwrap();
        if let Some(k) = diag.iter().position(|d| d.abs() <= tol) {
            return Err(Error::Singular(format!("pivot {k} of {n} vanishes")));
        }
    } else if diag.iter().any(|d| *d == T::zero()) {
        return Err(Error::Singular("zero pivot despite ridge term".into()));
    }

    let mut x = vec![T::zero(); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k];
        for j in k + 1..n {
            acc -= cols[j][k] * x[j];
        }
        x[k] = acc / diag[k];
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular("non-finite solution".into()));
    }
    Ok(x)
}
