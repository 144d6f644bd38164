//! Sweeps over the wavenumber and the truncation level.

use rayon::prelude::*;

use super::{GalerkinSolver, ProblemParams};
use crate::error::{Result, StabilityError};

/// Default search interval for the critical squared wavenumber.
pub const DEFAULT_A2_BRACKET: (f64, f64) = (4.0, 20.0);

/// Relative bracket width at which the golden-section search stops.
const GOLDEN_REL_WIDTH: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NeutralCurvePoint {
    pub a2: f64,
    pub ra: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalPoint {
    pub a2: f64,
    pub ra: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub ra: f64,
    /// `Ra(n) - Ra(previous n)`.
    pub change: Option<f64>,
}

/// `Ra(a^2)` at every grid value, in grid order. Failed points keep their
/// error so the rest of the curve survives.
pub fn neutral_curve(
    heating: f64,
    a2_grid: &[f64],
    n: usize,
) -> Result<Vec<Result<NeutralCurvePoint>>> {
    if a2_grid.is_empty() {
        return Ok(Vec::new());
    }
    let solver = GalerkinSolver::new(n)?;
    Ok(a2_grid
        .par_iter()
        .map(|&a2| {
            let params = ProblemParams::new(heating, a2, n)?;
            Ok(NeutralCurvePoint {
                a2,
                ra: solver.solve(&params)?.ra,
            })
        })
        .collect())
}

/// Golden-section search for an interior minimum of `f` on `bracket`.
///
/// Stops at relative bracket width `1e-6`. Fails with
/// [`StabilityError::NoInteriorMinimum`] when the best point found is not
/// strictly below both end values.
pub fn golden_section_minimum<F>(f: F, bracket: (f64, f64)) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let (lo0, hi0) = bracket;
    if !(lo0 < hi0) || !lo0.is_finite() || !hi0.is_finite() {
        return Err(StabilityError::InvalidParameter {
            name: "bracket",
            reason: format!("need lo < hi, got [{lo0}, {hi0}]"),
        });
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (lo0, hi0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > GOLDEN_REL_WIDTH * 0.5 * (lo.abs() + hi.abs()) {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let (x, fx) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if fx < f(lo0)? && fx < f(hi0)? {
        Ok((x, fx))
    } else {
        Err(StabilityError::NoInteriorMinimum { lo: lo0, hi: hi0 })
    }
}

/// Minimum of the neutral curve on `a2_bracket`.
pub fn critical_rayleigh(heating: f64, n: usize, a2_bracket: (f64, f64)) -> Result<CriticalPoint> {
    if !(a2_bracket.0 > 0.0) {
        return Err(StabilityError::InvalidParameter {
            name: "bracket",
            reason: format!("a^2 must stay positive, got lower end {}", a2_bracket.0),
        });
    }
    let solver = GalerkinSolver::new(n)?;
    let (a2, ra) = golden_section_minimum(
        |a2| Ok(solver.solve(&ProblemParams::new(heating, a2, n)?)?.ra),
        a2_bracket,
    )?;
    Ok(CriticalPoint { a2, ra })
}

/// `Ra` at each truncation in `n_list` (nonempty, strictly ascending).
pub fn convergence_study(heating: f64, a2: f64, n_list: &[usize]) -> Result<Vec<ConvergenceRow>> {
    let ascending = n_list.windows(2).all(|w| w[0] < w[1]);
    let Some(&n_max) = n_list.last().filter(|_| ascending) else {
        return Err(StabilityError::InvalidParameter {
            name: "n_list",
            reason: "need a nonempty, strictly ascending list".into(),
        });
    };
    let solver = GalerkinSolver::new(n_max)?;
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let ra = solver.solve(&ProblemParams::new(heating, a2, n)?)?.ra;
        let change = rows.last().map(|prev| ra - prev.ra);
        rows.push(ConvergenceRow { n, ra, change });
    }
    Ok(rows)
}

/// Smallest truncation `n <= n_max` whose `Ra` lies within `abs_tol` of
/// `target`, or `None`.
pub fn smallest_reproducing_truncation(
    heating: f64,
    a2: f64,
    target: f64,
    abs_tol: f64,
    n_max: usize,
) -> Result<Option<usize>> {
    let solver = GalerkinSolver::new(n_max)?;
    for n in 1..=n_max {
        let ra = solver.solve(&ProblemParams::new(heating, a2, n)?)?.ra;
        if (ra - target).abs() <= abs_tol {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_on_parabola() {
        let (x, fx) = golden_section_minimum(|x| Ok((x - 3.0).powi(2) + 1.0), (0.0, 10.0)).unwrap();
        assert!((x - 3.0).abs() < 1e-5);
        assert!((fx - 1.0).abs() < 1e-10);
    }

    #[test]
    fn golden_section_rejects_monotone_and_degenerate() {
        assert!(matches!(
            golden_section_minimum(Ok, (1.0, 2.0)),
            Err(StabilityError::NoInteriorMinimum { .. })
        ));
        assert!(matches!(
            golden_section_minimum(|x| Ok(-x), (1.0, 2.0)),
            Err(StabilityError::NoInteriorMinimum { .. })
        ));
        assert!(golden_section_minimum(|x| Ok(x * x), (2.0, 2.0)).is_err());
        assert!(critical_rayleigh(0.0, 1, (5.0, 5.0)).is_err());
    }

    #[test]
    fn empty_grid() {
        assert!(neutral_curve(0.0, &[], 4).unwrap().is_empty());
    }

    #[test]
    fn failed_points_are_kept_in_place() {
        let curve = neutral_curve(0.0, &[9.0, -1.0, 10.0], 2).unwrap();
        assert_eq!(curve.len(), 3);
        assert!(curve[0].is_ok() && curve[2].is_ok());
        assert!(curve[1].is_err());
    }

    #[test]
    fn convergence_list_validation() {
        assert!(convergence_study(0.0, 9.711, &[]).is_err());
        assert!(convergence_study(0.0, 9.711, &[3, 2]).is_err());
        let single = convergence_study(0.0, 9.711, &[1]).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].change, None);
    }
}
