//! Sign-change scanning and bisection.

use crate::error::{Error, Result};

/// A bracketed root with the final bracket width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub t: f64,
    pub bracket: (f64, f64),
    pub evals: usize,
}

/// Bisects `f` on `[a, b]` until the bracket is narrower than `tol`.
/// `f(a)` and `f(b)` must have opposite signs.
pub fn bisect<F>(f: F, a: f64, b: f64, tol: f64) -> Result<Root>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    let mut evals = 2;
    if flo == 0.0 {
        return Ok(Root { t: lo, bracket: (lo, lo), evals });
    }
    if fhi == 0.0 {
        return Ok(Root { t: hi, bracket: (hi, hi), evals });
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::domain("bisect", format!("no sign change on [{lo}, {hi}]")));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        evals += 1;
        if fm == 0.0 {
            return Ok(Root { t: mid, bracket: (mid, mid), evals });
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(Root {
        t: 0.5 * (lo + hi),
        bracket: (lo, hi),
        evals,
    })
}

/// Indices `i` with `values[i]` and `values[i + 1]` of strictly opposite sign.
pub fn sign_changes(values: &[f64]) -> Vec<usize> {
    values
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] * w[1] < 0.0)
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_pi() {
        let r = bisect(|x| Ok(x.sin()), 3.0, 3.5, 1e-12).unwrap();
        assert!((r.t - std::f64::consts::PI).abs() < 1e-12);
        assert!(r.bracket.1 - r.bracket.0 <= 1e-12);
    }

    #[test]
    fn rejects_unbracketed() {
        assert!(bisect(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-9).is_err());
    }

    #[test]
    fn sign_change_indices() {
        assert_eq!(sign_changes(&[1.0, 0.5, -0.1, -2.0, 3.0]), vec![1, 3]);
        assert!(sign_changes(&[1.0, 0.0, -1.0]).is_empty());
    }
}
