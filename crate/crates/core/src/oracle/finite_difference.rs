//! Second-order central differences for
//!
//! ```text
//! (D^2 - a^2)^2 W = a^2 Ra Theta,    (D^2 - a^2) Theta + (N1 - N x) W = 0,
//! W = DW = Theta = 0 at x = 0, 1,
//! ```
//!
//! on `m` interior nodes. `DW = 0` enters through reflected ghost nodes
//! (`W_{-1} = W_1`), which adds one to the first and last diagonal entries
//! of the five-point biharmonic stencil.

use nalgebra::{Cholesky, DMatrix, Schur};

use crate::error::{Result, StabilityError};
use crate::galerkin::golden_section_minimum;

/// Coarsest grid of the default three-level ladder `m, 2m, 4m`.
pub const DEFAULT_BASE_GRID: usize = 64;

const MIN_INTERIOR_POINTS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    m: usize,
}

impl GridSpec {
    pub fn new(interior_points: usize) -> Result<Self> {
        if interior_points < MIN_INTERIOR_POINTS {
            return Err(StabilityError::InvalidParameter {
                name: "m",
                reason: format!(
                    "need at least {MIN_INTERIOR_POINTS} interior points, got {interior_points}"
                ),
            });
        }
        Ok(GridSpec { m: interior_points })
    }

    pub fn interior_points(&self) -> usize {
        self.m
    }

    pub fn spacing(&self) -> f64 {
        1.0 / (self.m as f64 + 1.0)
    }
}

/// Coordinate in which the layer is discretised.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    /// `x` in `[0, 1]`, coupling `N1 - N x` with `N1 = 1 + N/2`.
    Shifted,
    /// `z` in `[-1/2, 1/2]`, coupling `1 - N z`.
    Centered,
}

fn coupling(heating: f64, frame: Frame, node: usize, h: f64) -> f64 {
    let x = (node as f64 + 1.0) * h;
    match frame {
        Frame::Shifted => (1.0 + 0.5 * heating) - heating * x,
        Frame::Centered => 1.0 - heating * (x - 0.5),
    }
}

/// Smallest real positive `Ra` of the finite-difference pencil, in `[0, 1]`.
pub fn fd_rayleigh(heating: f64, a2: f64, grid: GridSpec) -> Result<f64> {
    fd_rayleigh_in_frame(heating, a2, grid, Frame::Shifted)
}

pub fn fd_rayleigh_in_frame(heating: f64, a2: f64, grid: GridSpec, frame: Frame) -> Result<f64> {
    if !(a2 > 0.0) || !a2.is_finite() || !heating.is_finite() {
        return Err(StabilityError::InvalidParameter {
            name: "a2/N",
            reason: format!("need finite N and a^2 > 0 (got N = {heating}, a^2 = {a2})"),
        });
    }
    let m = grid.m;
    let h = grid.spacing();
    let h2 = h * h;
    let h4 = h2 * h2;
    let fail = || StabilityError::EigenSolveFailed { m };

    // (D^2 - a^2)^2 with ghost reflection, and -(D^2 - a^2) with Dirichlet rows.
    let biharmonic = DMatrix::from_fn(m, m, |r, c| {
        let d = r.abs_diff(c);
        let d4 = match d {
            0 if r == 0 || r == m - 1 => 7.0,
            0 => 6.0,
            1 => -4.0,
            2 => 1.0,
            _ => 0.0,
        } / h4;
        let d2 = match d {
            0 => -2.0,
            1 => 1.0,
            _ => 0.0,
        } / h2;
        let id = if d == 0 { 1.0 } else { 0.0 };
        d4 - 2.0 * a2 * d2 + a2 * a2 * id
    });
    let neg_helmholtz = DMatrix::from_fn(m, m, |r, c| match r.abs_diff(c) {
        0 => 2.0 / h2 + a2,
        1 => -1.0 / h2,
        _ => 0.0,
    });
    let coupling_diag = DMatrix::from_fn(m, m, |r, c| {
        if r == c {
            coupling(heating, frame, r, h)
        } else {
            0.0
        }
    });

    // Theta = -(D^2 - a^2)^{-1} F W, so W = Ra a^2 A^{-1} (-(D^2 - a^2))^{-1} F W.
    let theta_map = Cholesky::new(neg_helmholtz)
        .ok_or_else(fail)?
        .solve(&coupling_diag);
    let reduced = Cholesky::new(biharmonic)
        .ok_or_else(fail)?
        .solve(&theta_map)
        * a2;

    let schur = Schur::try_new(reduced, f64::EPSILON, 10_000).ok_or_else(fail)?;
    let largest = schur
        .complex_eigenvalues()
        .iter()
        .filter(|mu| mu.re > 0.0 && mu.im.abs() <= 1e-10 * mu.re)
        .map(|mu| mu.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if largest.is_finite() {
        Ok(1.0 / largest)
    } else {
        Err(StabilityError::NoPositiveEigenvalue {
            heating,
            a2,
            n_modes: m,
        })
    }
}

/// Extrapolation of three values on grids with spacing ratio 2, assuming
/// an `h^2` leading error term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RichardsonEstimate {
    pub value: f64,
    /// `|v_fine - v_mid| / 3`, the size of the applied correction.
    pub error_indicator: f64,
    /// `log2(|v_coarse - v_mid| / |v_mid - v_fine|)`; `None` when a
    /// difference vanishes.
    pub observed_order: Option<f64>,
    /// False when successive differences change sign or fail to shrink.
    pub monotone: bool,
}

impl RichardsonEstimate {
    pub fn relative_indicator(&self) -> f64 {
        self.error_indicator / self.value.abs()
    }
}

/// `values` ordered coarse to fine.
pub fn richardson(values: [f64; 3]) -> RichardsonEstimate {
    let [coarse, mid, fine] = values;
    let d1 = mid - coarse;
    let d2 = fine - mid;
    let observed_order = (d1 != 0.0 && d2 != 0.0).then(|| (d1.abs() / d2.abs()).log2());
    let monotone = (d1 == 0.0 && d2 == 0.0) || (d1 * d2 > 0.0 && d2.abs() < d1.abs());
    RichardsonEstimate {
        value: fine + d2 / 3.0,
        error_indicator: d2.abs() / 3.0,
        observed_order,
        monotone,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleEstimate {
    pub grids: [usize; 3],
    pub values: [f64; 3],
    pub extrapolated: RichardsonEstimate,
}

impl OracleEstimate {
    pub fn value(&self) -> f64 {
        self.extrapolated.value
    }
}

/// Finite-difference values on `m, 2m, 4m` and their extrapolation.
pub fn oracle_rayleigh(heating: f64, a2: f64, base_m: usize) -> Result<OracleEstimate> {
    let grids = [base_m, 2 * base_m, 4 * base_m];
    let specs = [
        GridSpec::new(grids[0])?,
        GridSpec::new(grids[1])?,
        GridSpec::new(grids[2])?,
    ];
    let (fine, (coarse, mid)) = rayon::join(
        || fd_rayleigh(heating, a2, specs[2]),
        || {
            rayon::join(
                || fd_rayleigh(heating, a2, specs[0]),
                || fd_rayleigh(heating, a2, specs[1]),
            )
        },
    );
    let values = [coarse?, mid?, fine?];
    Ok(OracleEstimate {
        grids,
        values,
        extrapolated: richardson(values),
    })
}

/// Minimiser of the extrapolated oracle `Ra(a^2)` on `[lo, hi]`.
pub fn oracle_critical(heating: f64, bracket: (f64, f64), base_m: usize) -> Result<(f64, f64)> {
    golden_section_minimum(
        |a2| Ok(oracle_rayleigh(heating, a2, base_m)?.value()),
        bracket,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec_validation() {
        assert!(GridSpec::new(15).is_err());
        let g = GridSpec::new(63).unwrap();
        assert_eq!(g.spacing(), 1.0 / 64.0);
    }

    #[test]
    fn richardson_synthetic() {
        let (limit, c) = (1700.0, 64.0);
        let est = richardson([limit + c, limit + c / 4.0, limit + c / 16.0]);
        assert_eq!(est.value, limit);
        assert_eq!(est.observed_order, Some(2.0));
        assert!(est.monotone);

        let flat = richardson([3.5, 3.5, 3.5]);
        assert_eq!(flat.value, 3.5);
        assert_eq!(flat.error_indicator, 0.0);
        assert_eq!(flat.observed_order, None);
        assert!(flat.monotone);

        assert!(!richardson([1.0, 2.0, 1.5]).monotone);
        assert!(!richardson([1.0, 1.1, 1.3]).monotone);
    }

    #[test]
    fn rejects_bad_wavenumber() {
        let g = GridSpec::new(32).unwrap();
        assert!(fd_rayleigh(0.0, 0.0, g).is_err());
        assert!(fd_rayleigh(f64::NAN, 9.0, g).is_err());
    }

    #[test]
    fn coarse_grid_near_classical_value() {
        // Rigid-rigid Rayleigh-Benard onset at a^2 = 9.711 is Ra ~ 1707.76;
        // second-order error on 65 intervals is a few units.
        let ra = fd_rayleigh(0.0, 9.711, GridSpec::new(64).unwrap()).unwrap();
        assert!((ra - 1707.76).abs() < 5.0, "{ra}");
        assert!(ra < 1707.76);
    }
}
