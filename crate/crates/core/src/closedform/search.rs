use crate::{Error, Result};

/// Maximizes a scalar function on `[lo, hi]` by golden-section search down to
/// a bracket of width `tol`, then compares with both endpoints.
///
/// Returns `(argmax, max)`. Among equal values the smallest argument wins.
pub fn golden_section_max<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::input(format!(
            "bad search bracket [{lo}, {hi}] with tolerance {tol}"
        )));
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2)?;
        }
    }
    let inner = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    let mut best = (lo, f(lo)?);
    for candidate in [inner, (hi, f(hi)?)] {
        if candidate.1 > best.1 {
            best = candidate;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_maximum() {
        let (x, fx) =
            golden_section_max(|x| Ok(-(x - 0.3).powi(2) + 2.0), 0.0, 1.0, 1e-10).unwrap();
        assert!((x - 0.3).abs() < 1e-5);
        assert!((fx - 2.0).abs() < 1e-12);
    }

    #[test]
    fn endpoint_and_plateau_ties() {
        let (x, _) = golden_section_max(Ok, 0.0, 1.0, 1e-8).unwrap();
        assert_eq!(x, 1.0);
        let (x, fx) = golden_section_max(|_| Ok(1.0), 0.0, 1.0, 1e-8).unwrap();
        assert_eq!((x, fx), (0.0, 1.0));
    }

    #[test]
    fn rejects_bad_bracket_and_propagates_errors() {
        assert!(golden_section_max(Ok, 1.0, 0.0, 1e-8).is_err());
        let failing = golden_section_max(|_| Err(Error::domain("boom")), 0.0, 1.0, 1e-8);
        assert_eq!(failing, Err(Error::domain("boom")));
    }
}
