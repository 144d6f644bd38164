//! Even and odd clamped-clamped beam functions on `[-1/2, 1/2]`:
//!
//! ```text
//! C_n(z) = cosh(l z)/cosh(l/2) - cos(l z)/cos(l/2),   tanh(l/2) + tan(l/2) = 0
//! S_n(z) = sinh(m z)/sinh(m/2) - sin(m z)/sin(m/2),   coth(m/2) - cot(m/2) = 0
//! ```
//!
//! Each family is orthonormal. Because every `C_n C_m` (and `S_n S_m`) is
//! even, the `z`-weighted projections vanish identically, which removes the
//! heating parameter from any single-parity Galerkin projection.

use std::f64::consts::PI;

use crate::error::{Result, StabilityError};
use crate::oracle::adaptive_quadrature;

/// Half-width of the search window around each asymptotic root.
const BRACKET_HALF_WIDTH: f64 = 0.1;
/// Target accuracy of the projection integrals.
pub const PROJECTION_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    /// `C_n`, roots `lambda_n`.
    Even,
    /// `S_n`, roots `mu_n`.
    Odd,
}

impl Parity {
    fn name(self) -> &'static str {
        match self {
            Parity::Even => "tanh + tan",
            Parity::Odd => "coth - cot",
        }
    }

    /// Characteristic function and its derivative.
    fn characteristic(self, t: f64) -> (f64, f64) {
        let half = 0.5 * t;
        match self {
            Parity::Even => {
                let (th, tn) = (half.tanh(), half.tan());
                (th + tn, 0.5 * (1.0 - th * th) + 0.5 * (1.0 + tn * tn))
            }
            Parity::Odd => {
                let (sh, s) = (half.sinh(), half.sin());
                let value = 1.0 / half.tanh() - 1.0 / half.tan();
                (value, -0.5 / (sh * sh) + 0.5 / (s * s))
            }
        }
    }

    /// `(4n - 1) pi / 2` for even, `(4n + 1) pi / 2` for odd, `n >= 1`.
    pub fn asymptotic_root(self, n: usize) -> f64 {
        let base = 4.0 * n as f64;
        match self {
            Parity::Even => (base - 1.0) * PI / 2.0,
            Parity::Odd => (base + 1.0) * PI / 2.0,
        }
    }
}

/// Residual of the characteristic equation at `t`.
pub fn characteristic_residual(parity: Parity, t: f64) -> f64 {
    parity.characteristic(t).0
}

/// Newton steps safeguarded by bisection inside a sign-changing bracket.
fn refine_root(parity: Parity, n: usize) -> Result<f64> {
    let centre = parity.asymptotic_root(n);
    let (mut lo, mut hi) = (centre - BRACKET_HALF_WIDTH, centre + BRACKET_HALF_WIDTH);
    let f_lo = parity.characteristic(lo).0;
    let f_hi = parity.characteristic(hi).0;
    if !(f_lo * f_hi < 0.0) {
        return Err(StabilityError::BracketFailure {
            family: parity.name(),
            index: n,
        });
    }
    let rising = f_hi > 0.0;
    let mut t = centre;
    for _ in 0..200 {
        let (f, df) = parity.characteristic(t);
        if f == 0.0 {
            return Ok(t);
        }
        if (f > 0.0) == rising {
            hi = t;
        } else {
            lo = t;
        }
        let newton = t - f / df;
        let next = if newton > lo && newton < hi && df.is_finite() {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - t).abs() <= 4.0 * f64::EPSILON * t || hi - lo <= 4.0 * f64::EPSILON * t {
            return Ok(next);
        }
        t = next;
    }
    Ok(t)
}

/// The first `count` positive roots of both characteristic equations.
#[derive(Clone, Debug, PartialEq)]
pub struct ChandrasekharRoots {
    lambda: Vec<f64>,
    mu: Vec<f64>,
}

impl ChandrasekharRoots {
    pub fn solve(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(StabilityError::InvalidParameter {
                name: "count",
                reason: "need at least one root".into(),
            });
        }
        let lambda = (1..=count)
            .map(|n| refine_root(Parity::Even, n))
            .collect::<Result<Vec<_>>>()?;
        let mu = (1..=count)
            .map(|n| refine_root(Parity::Odd, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(ChandrasekharRoots { lambda, mu })
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn count(&self) -> usize {
        self.lambda.len()
    }

    /// Root `n` (1-based) of the given family.
    pub fn root(&self, parity: Parity, n: usize) -> Result<f64> {
        let roots = match parity {
            Parity::Even => &self.lambda,
            Parity::Odd => &self.mu,
        };
        n.checked_sub(1)
            .and_then(|j| roots.get(j))
            .copied()
            .ok_or(StabilityError::InvalidIndex {
                what: "Chandrasekhar function (roots not solved)",
                index: n,
            })
    }

    pub fn eval_c(&self, n: usize, z: f64) -> Result<f64> {
        self.eval(Parity::Even, n, z, 0)
    }

    pub fn eval_s(&self, n: usize, z: f64) -> Result<f64> {
        self.eval(Parity::Odd, n, z, 0)
    }

    /// `D^order` of `C_n` (even) or `S_n` (odd) at `z`, `order` in `0..=1`.
    pub fn eval(&self, parity: Parity, n: usize, z: f64, order: usize) -> Result<f64> {
        if !(z.abs() <= 0.5) {
            return Err(StabilityError::OutOfDomain {
                value: z,
                lo: -0.5,
                hi: 0.5,
            });
        }
        if order > 1 {
            return Err(StabilityError::InvalidParameter {
                name: "order",
                reason: format!("derivative order {order} not available (0..=1)"),
            });
        }
        let t = self.root(parity, n)?;
        Ok(beam_function(parity, t, z, order))
    }

    /// `int_{-1/2}^{1/2} w(z) F_n F_m dz` with `F = C` or `S`.
    pub fn weighted_projection(
        &self,
        parity: Parity,
        n: usize,
        m: usize,
        weight: ProjectionWeight,
    ) -> Result<f64> {
        let tn = self.root(parity, n)?;
        let tm = self.root(parity, m)?;
        let integrand = |z: f64| {
            let w = match weight {
                ProjectionWeight::One => 1.0,
                ProjectionWeight::Z => z,
            };
            w * beam_function(parity, tn, z, 0) * beam_function(parity, tm, z, 0)
        };
        adaptive_quadrature(integrand, -0.5, 0.5, PROJECTION_TOL)
    }

    /// Worst-case orthonormality defects and weighted projections over all
    /// pairs `n, m <= count` of both families.
    pub fn degeneracy_report(&self) -> Result<DegeneracyReport> {
        let mut report = DegeneracyReport::default();
        for parity in [Parity::Even, Parity::Odd] {
            for n in 1..=self.count() {
                for m in 1..=self.count() {
                    let delta = if n == m { 1.0 } else { 0.0 };
                    let gram = self.weighted_projection(parity, n, m, ProjectionWeight::One)?;
                    let weighted = self.weighted_projection(parity, n, m, ProjectionWeight::Z)?;
                    let (ortho, zproj) = match parity {
                        Parity::Even => (
                            &mut report.even_orthonormality,
                            &mut report.even_z_projection,
                        ),
                        Parity::Odd => {
                            (&mut report.odd_orthonormality, &mut report.odd_z_projection)
                        }
                    };
                    *ortho = ortho.max((gram - delta).abs());
                    *zproj = zproj.max(weighted.abs());
                }
            }
        }
        report.max_root_residual = self
            .lambda
            .iter()
            .map(|&l| characteristic_residual(Parity::Even, l).abs())
            .chain(
                self.mu
                    .iter()
                    .map(|&m| characteristic_residual(Parity::Odd, m).abs()),
            )
            .fold(0.0, f64::max);
        Ok(report)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectionWeight {
    One,
    Z,
}

/// Maxima over all checked index pairs.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DegeneracyReport {
    pub even_orthonormality: f64,
    pub odd_orthonormality: f64,
    pub even_z_projection: f64,
    pub odd_z_projection: f64,
    pub max_root_residual: f64,
}

/// Hyperbolic ratios in exponential form so large `t |z|` cannot overflow:
/// `cosh(t z)/cosh(t/2) = e^{t(|z| - 1/2)} (1 + e^{-2t|z|}) / (1 + e^{-t})`.
fn beam_function(parity: Parity, t: f64, z: f64, order: usize) -> f64 {
    let az = z.abs();
    let sign = if z < 0.0 { -1.0 } else { 1.0 };
    let decay = (t * (az - 0.5)).exp();
    let inner = (-2.0 * t * az).exp();
    let tail = (-t).exp();
    let half = 0.5 * t;
    match (parity, order) {
        (Parity::Even, 0) => decay * (1.0 + inner) / (1.0 + tail) - (t * z).cos() / half.cos(),
        (Parity::Even, _) => {
            t * (sign * decay * (1.0 - inner) / (1.0 + tail) + (t * z).sin() / half.cos())
        }
        (Parity::Odd, 0) => {
            sign * decay * (1.0 - inner) / (1.0 - tail) - (t * z).sin() / half.sin()
        }
        (Parity::Odd, _) => t * (decay * (1.0 + inner) / (1.0 - tail) - (t * z).cos() / half.sin()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain bisection, independent of the Newton hybrid.
    fn bisect(parity: Parity, lo: f64, hi: f64) -> f64 {
        let (mut lo, mut hi) = (lo, hi);
        let f_lo = characteristic_residual(parity, lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (characteristic_residual(parity, mid) > 0.0) == (f_lo > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn first_roots() {
        let roots = ChandrasekharRoots::solve(2).unwrap();
        let l1 = bisect(Parity::Even, 1.5 * PI - 0.1, 1.5 * PI + 0.1);
        let m1 = bisect(Parity::Odd, 2.5 * PI - 0.1, 2.5 * PI + 0.1);
        assert!((l1 - 4.730_040_8).abs() < 1e-6);
        assert!((m1 - 7.853_204_6).abs() < 1e-6);
        assert!((roots.lambda()[0] - l1).abs() < 1e-12);
        assert!((roots.mu()[0] - m1).abs() < 1e-12);
        assert!((roots.lambda()[1] - 10.9956).abs() < 1e-3);
    }

    #[test]
    fn root_window_contract() {
        let roots = ChandrasekharRoots::solve(25).unwrap();
        for n in 1..=25 {
            let l = roots.lambda()[n - 1];
            let m = roots.mu()[n - 1];
            assert!((l - Parity::Even.asymptotic_root(n)).abs() < BRACKET_HALF_WIDTH);
            assert!((m - Parity::Odd.asymptotic_root(n)).abs() < BRACKET_HALF_WIDTH);
            assert!(characteristic_residual(Parity::Even, l).abs() < 1e-10);
            assert!(characteristic_residual(Parity::Odd, m).abs() < 1e-10);
            if n >= 2 {
                assert!((l - Parity::Even.asymptotic_root(n)).abs() < 0.05);
                assert!((m - Parity::Odd.asymptotic_root(n)).abs() < 0.05);
                assert!(l > roots.lambda()[n - 2] && m > roots.mu()[n - 2]);
            }
        }
        assert!(ChandrasekharRoots::solve(0).is_err());
    }

    #[test]
    fn boundary_and_parity() {
        let roots = ChandrasekharRoots::solve(3).unwrap();
        for n in 1..=3 {
            for z in [-0.5, 0.5] {
                assert!(roots.eval_c(n, z).unwrap().abs() < 1e-9);
                assert!(roots.eval(Parity::Even, n, z, 1).unwrap().abs() < 1e-9);
                assert!(roots.eval_s(n, z).unwrap().abs() < 1e-9);
                assert!(roots.eval(Parity::Odd, n, z, 1).unwrap().abs() < 1e-9);
            }
        }
        for z in [0.05, 0.2, 0.33, 0.49] {
            assert_eq!(roots.eval_c(1, z).unwrap(), roots.eval_c(1, -z).unwrap());
            assert_eq!(roots.eval_s(2, z).unwrap(), -roots.eval_s(2, -z).unwrap());
        }
        assert_eq!(roots.eval_s(1, 0.0).unwrap(), 0.0);
        assert!(roots.eval_c(1, 0.51).is_err());
        assert!(roots.eval_c(4, 0.0).is_err());
    }

    #[test]
    fn stable_for_large_roots() {
        let roots = ChandrasekharRoots::solve(40).unwrap();
        for z in [-0.5, -0.3, 0.0, 0.4999, 0.5] {
            let c = roots.eval_c(40, z).unwrap();
            let s = roots.eval_s(40, z).unwrap();
            assert!(c.is_finite() && s.is_finite());
            assert!(c.abs() < 3.0 && s.abs() < 3.0);
        }
        // derivative check by central differences
        let (z, h) = (0.17, 1e-6);
        let fd = (roots.eval_c(3, z + h).unwrap() - roots.eval_c(3, z - h).unwrap()) / (2.0 * h);
        let exact = roots.eval(Parity::Even, 3, z, 1).unwrap();
        assert!((fd - exact).abs() < 1e-5 * exact.abs().max(1.0));
    }

    #[test]
    fn projection_examples() {
        let roots = ChandrasekharRoots::solve(2).unwrap();
        let p = |n, m, w| roots.weighted_projection(Parity::Even, n, m, w).unwrap();
        assert!((p(1, 1, ProjectionWeight::One) - 1.0).abs() < 1e-9);
        assert!(p(1, 2, ProjectionWeight::One).abs() < 1e-9);
        assert!(p(1, 1, ProjectionWeight::Z).abs() < 1e-10);
    }
}
