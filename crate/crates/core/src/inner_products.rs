//! The seven bilinear forms entering the projected system.
//!
//! Two independent routes are provided:
//!
//! * [`closed_form`] transcribes the printed case tables, including their
//!   index offsets, without corrections;
//! * [`exact_integral`] integrates the literal polynomial products term by
//!   term in exact arithmetic.
//!
//! The integration route is authoritative. [`validate_table`] reports every
//! entry on which the two disagree, and [`ProjectionTable`] (what the solver
//! consumes) carries its own discrepancy list alongside the exact values.
//!
//! One misprint is known: the `i = k + 3` case of `(x beta_i, phi_k)` carries
//! the numerator `i + 1` where the integral gives `i - 1`. See
//! [`corrected_x_beta_phi_offset3`].

use std::fmt;
use std::io;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Result, StabilityError};
use crate::poly::{ExactPoly, ScaledIntegerPoly};
use crate::rational::Rational;
use crate::slp_basis::BasisFunctionId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InnerProductKind {
    /// `(D^4 beta_i, beta_k) = (beta''_i, beta''_k)`
    D4BetaBeta,
    /// `(D^2 beta_i, beta_k) = -(beta'_i, beta'_k)`
    D2BetaBeta,
    /// `(phi_i, phi_k)`
    PhiPhi,
    /// `(beta_i, beta_k)`
    BetaBeta,
    /// `(phi_i, beta_k)`
    PhiBeta,
    /// `(D^2 phi_i, phi_k) = -(Q_i, Q_k)`
    D2PhiPhi,
    /// `(x beta_i, phi_k)`; the only kind whose roles cannot be swapped.
    XBetaPhi,
}

impl InnerProductKind {
    pub const ALL: [InnerProductKind; 7] = [
        InnerProductKind::D4BetaBeta,
        InnerProductKind::D2BetaBeta,
        InnerProductKind::PhiPhi,
        InnerProductKind::BetaBeta,
        InnerProductKind::PhiBeta,
        InnerProductKind::D2PhiPhi,
        InnerProductKind::XBetaPhi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InnerProductKind::D4BetaBeta => "D4_beta_beta",
            InnerProductKind::D2BetaBeta => "D2_beta_beta",
            InnerProductKind::PhiPhi => "phi_phi",
            InnerProductKind::BetaBeta => "beta_beta",
            InnerProductKind::PhiBeta => "phi_beta",
            InnerProductKind::D2PhiPhi => "D2_phi_phi",
            InnerProductKind::XBetaPhi => "x_beta_phi",
        }
    }

    /// Whether `(f_i, g_k) = (f_k, g_i)` holds by definition.
    pub fn is_symmetric(self) -> bool {
        !matches!(self, InnerProductKind::PhiBeta | InnerProductKind::XBetaPhi)
    }

    /// Range of `k - i` outside which the form vanishes.
    pub fn band(self) -> (i64, i64) {
        match self {
            InnerProductKind::D4BetaBeta | InnerProductKind::D2PhiPhi => (0, 0),
            InnerProductKind::D2BetaBeta | InnerProductKind::PhiPhi => (-2, 2),
            InnerProductKind::BetaBeta | InnerProductKind::PhiBeta => (-4, 4),
            InnerProductKind::XBetaPhi => (-3, 5),
        }
    }

    /// The two integrands and the weight whose integral defines the form.
    fn integrands(self, i: usize, k: usize) -> Result<(Integrand, Integrand, Weight)> {
        use InnerProductKind::*;
        let beta = |j| BasisFunctionId::beta(j);
        let phi = |j| BasisFunctionId::phi(j);
        Ok(match self {
            D4BetaBeta => (
                Integrand::new(beta(i)?, 4),
                Integrand::new(beta(k)?, 0),
                Weight::One,
            ),
            D2BetaBeta => (
                Integrand::new(beta(i)?, 2),
                Integrand::new(beta(k)?, 0),
                Weight::One,
            ),
            PhiPhi => (
                Integrand::new(phi(i)?, 0),
                Integrand::new(phi(k)?, 0),
                Weight::One,
            ),
            BetaBeta => (
                Integrand::new(beta(i)?, 0),
                Integrand::new(beta(k)?, 0),
                Weight::One,
            ),
            PhiBeta => (
                Integrand::new(phi(i)?, 0),
                Integrand::new(beta(k)?, 0),
                Weight::One,
            ),
            D2PhiPhi => (
                Integrand::new(phi(i)?, 2),
                Integrand::new(phi(k)?, 0),
                Weight::One,
            ),
            XBetaPhi => (
                Integrand::new(beta(i)?, 0),
                Integrand::new(phi(k)?, 0),
                Weight::X,
            ),
        })
    }
}

impl fmt::Display for InnerProductKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InnerProductKind {
    type Err = StabilityError;

    fn from_str(s: &str) -> Result<Self> {
        InnerProductKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| StabilityError::InvalidParameter {
                name: "kind",
                reason: format!("unknown inner product `{s}`"),
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    One,
    X,
}

/// `D^derivative f` for a basis function `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Integrand {
    pub basis: BasisFunctionId,
    pub derivative: usize,
}

impl Integrand {
    pub fn new(basis: BasisFunctionId, derivative: usize) -> Self {
        Integrand { basis, derivative }
    }

    pub fn poly(&self) -> ExactPoly {
        self.basis.poly().nth_derivative(self.derivative)
    }
}

/// `int_0^1 w(x) f(x) g(x) dx` by exact monomial integration.
pub fn exact_integral(f: Integrand, g: Integrand, weight: Weight) -> Rational {
    let shift = match weight {
        Weight::One => 0,
        Weight::X => 1,
    };
    ScaledIntegerPoly::from(&f.poly()).integrate_product(&ScaledIntegerPoly::from(&g.poly()), shift)
}

/// The authoritative value of `kind` at `(i, k)`.
pub fn exact_value(kind: InnerProductKind, i: usize, k: usize) -> Result<Rational> {
    let (f, g, w) = kind.integrands(i, k)?;
    Ok(exact_integral(f, g, w))
}

/// `num / (scale * prod (2i + o))`.
fn odd_product(num: i64, scale: i64, i: usize, offsets: &[i64]) -> Rational {
    let i = i as i64;
    let den = offsets
        .iter()
        .fold(BigInt::from(scale), |acc, o| acc * BigInt::from(2 * i + o));
    Rational::new(num, den)
}

/// The printed case tables, transcribed verbatim.
///
/// Symmetric kinds whose table lists only one off-diagonal side are
/// completed through `(f_i, g_k) = (f_k, g_i)`.
pub fn closed_form(kind: InnerProductKind, i: usize, k: usize) -> Result<Rational> {
    use InnerProductKind::*;
    if i == 0 || k == 0 {
        return Err(StabilityError::InvalidIndex {
            what: "inner product (indices start at 1)",
            index: 0,
        });
    }
    let zero = Rational::zero();
    let d = k as i64 - i as i64;
    Ok(match kind {
        D4BetaBeta => match d {
            0 => Rational::new(1, 2 * i as i64 + 3),
            _ => zero,
        },
        D2BetaBeta => match d {
            0 => odd_product(-1, 2, i, &[1, 3, 5]),
            -2 => odd_product(1, 4, i, &[-1, 1, 3]),
            2 => closed_form(kind, k, i)?,
            _ => zero,
        },
        PhiPhi => match d {
            0 => odd_product(1, 2, i, &[-1, 1, 3]),
            2 => odd_product(-1, 4, i, &[1, 3, 5]),
            -2 => closed_form(kind, k, i)?,
            _ => zero,
        },
        BetaBeta => match d {
            0 => odd_product(3, 8, i, &[-1, 1, 3, 5, 7]),
            2 => odd_product(-1, 4, i, &[1, 3, 5, 7, 9]),
            4 => odd_product(1, 16, i, &[3, 5, 7, 9, 11]),
            -2 | -4 => closed_form(kind, k, i)?,
            _ => zero,
        },
        PhiBeta => match d {
            0 => odd_product(-3, 8, i, &[-1, 1, 3, 5]),
            -2 => odd_product(3, 8, i, &[-3, -1, 1, 3]),
            2 => odd_product(1, 8, i, &[1, 3, 5, 7]),
            -4 => odd_product(-1, 8, i, &[-5, -3, -1, 1]),
            _ => zero,
        },
        D2PhiPhi => match d {
            0 => Rational::new(-1, 2 * i as i64 + 1),
            _ => zero,
        },
        XBetaPhi => {
            let ii = i as i64;
            match d {
                5 => odd_product(-(ii + 4), 16, i, &[3, 5, 7, 9, 11]),
                4 => odd_product(-1, 16, i, &[3, 5, 7, 9]),
                3 => odd_product(1, 16, i, &[1, 3, 5, 9]),
                2 => odd_product(3, 16, i, &[1, 3, 5, 7]),
                1 => odd_product(-3, 16, i, &[-1, 1, 3, 5, 7]),
                0 => odd_product(-3, 16, i, &[-1, 1, 3, 5]),
                -1 => odd_product(-1, 16, i, &[-3, 1, 3, 5]),
                -2 => odd_product(1, 16, i, &[-3, -1, 1, 3]),
                -3 => odd_product(ii + 1, 16, i, &[-5, -3, -1, 1, 3]),
                _ => zero,
            }
        }
    })
}

/// `(x beta_i, phi_{i-3})` as given by exact integration:
/// `(i - 1) / (16 (2i-5)(2i-3)(2i-1)(2i+1)(2i+3))`, `i >= 4`.
pub fn corrected_x_beta_phi_offset3(i: usize) -> Result<Rational> {
    if i < 4 {
        return Err(StabilityError::InvalidIndex {
            what: "(x beta_i, phi_{i-3}) needs i >= 4",
            index: i,
        });
    }
    Ok(odd_product(i as i64 - 1, 16, i, &[-5, -3, -1, 1, 3]))
}

/// One entry on which the printed closed form and exact integration differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub kind: InnerProductKind,
    pub i: usize,
    pub k: usize,
    pub closed_form: Rational,
    pub exact: Rational,
}

impl Discrepancy {
    /// True when this is the documented `i = k + 3` misprint of
    /// `(x beta_i, phi_k)` and the exact value equals the corrected formula.
    pub fn is_known_misprint(&self) -> bool {
        self.kind == InnerProductKind::XBetaPhi
            && self.i == self.k + 3
            && corrected_x_beta_phi_offset3(self.i).is_ok_and(|c| c == self.exact)
    }
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({}, {}): closed form {} but exact integral {}",
            self.kind, self.i, self.k, self.closed_form, self.exact
        )
    }
}

/// Integer-form polynomials for every integrand used by the seven kinds.
struct IntegrandCache {
    beta: Vec<ScaledIntegerPoly>,
    d2_beta: Vec<ScaledIntegerPoly>,
    d4_beta: Vec<ScaledIntegerPoly>,
    phi: Vec<ScaledIntegerPoly>,
    d2_phi: Vec<ScaledIntegerPoly>,
}

impl IntegrandCache {
    /// Entries `0..n`, holding index `j + 1`.
    fn new(n: usize) -> Self {
        let build = |f: &(dyn Fn(usize) -> ExactPoly + Sync)| -> Vec<ScaledIntegerPoly> {
            (1..=n)
                .into_par_iter()
                .map(|j| ScaledIntegerPoly::from(&f(j)))
                .collect()
        };
        let beta = |j| BasisFunctionId::beta(j).expect("j >= 1").poly();
        let phi = |j| BasisFunctionId::phi(j).expect("j >= 1").poly();
        IntegrandCache {
            beta: build(&beta),
            d2_beta: build(&|j| beta(j).nth_derivative(2)),
            d4_beta: build(&|j| beta(j).nth_derivative(4)),
            phi: build(&phi),
            d2_phi: build(&|j| phi(j).nth_derivative(2)),
        }
    }

    fn value(&self, kind: InnerProductKind, i: usize, k: usize) -> Rational {
        use InnerProductKind::*;
        let (a, b) = (i - 1, k - 1);
        match kind {
            D4BetaBeta => self.d4_beta[a].integrate_product(&self.beta[b], 0),
            D2BetaBeta => self.d2_beta[a].integrate_product(&self.beta[b], 0),
            PhiPhi => self.phi[a].integrate_product(&self.phi[b], 0),
            BetaBeta => self.beta[a].integrate_product(&self.beta[b], 0),
            PhiBeta => self.phi[a].integrate_product(&self.beta[b], 0),
            D2PhiPhi => self.d2_phi[a].integrate_product(&self.phi[b], 0),
            XBetaPhi => self.beta[a].integrate_product(&self.phi[b], 1),
        }
    }
}

/// Exact values and closed forms for every kind on `1..=n` squared.
fn compare_all(n: usize) -> Vec<(InnerProductKind, usize, usize, Rational, Rational)> {
    let cache = IntegrandCache::new(n);
    let cells: Vec<_> = InnerProductKind::ALL
        .into_iter()
        .flat_map(|kind| (1..=n).flat_map(move |i| (1..=n).map(move |k| (kind, i, k))))
        .collect();
    cells
        .into_par_iter()
        .map(|(kind, i, k)| {
            let exact = cache.value(kind, i, k);
            let printed = closed_form(kind, i, k).expect("indices start at 1");
            (kind, i, k, printed, exact)
        })
        .collect()
}

/// Compares every closed form against exact integration on `1..=i_max`.
///
/// An empty result means every printed formula holds exactly. Nothing is
/// corrected here; each disagreement is returned with both values.
pub fn validate_table(i_max: usize) -> Result<Vec<Discrepancy>> {
    if i_max == 0 {
        return Err(StabilityError::InvalidParameter {
            name: "i_max",
            reason: "must be at least 1".into(),
        });
    }
    Ok(compare_all(i_max)
        .into_iter()
        .filter(|(_, _, _, printed, exact)| printed != exact)
        .map(|(kind, i, k, closed_form, exact)| Discrepancy {
            kind,
            i,
            k,
            closed_form,
            exact,
        })
        .collect())
}

/// Floating-point matrices of all seven forms for truncation `n`, indexed
/// `[(k - 1, i - 1)]` (row = test function, column = trial function).
///
/// Values come from exact integration and are rounded once at the end.
#[derive(Clone, Debug)]
pub struct ProjectionTable {
    n: usize,
    exact: Vec<Vec<Rational>>,
    matrices: Vec<DMatrix<f64>>,
    centered_coupling: DMatrix<f64>,
    discrepancies: Vec<Discrepancy>,
}

impl ProjectionTable {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(StabilityError::InvalidParameter {
                name: "n_modes",
                reason: "truncation must be at least 1".into(),
            });
        }
        let mut exact = vec![Vec::with_capacity(n * n); InnerProductKind::ALL.len()];
        let mut discrepancies = Vec::new();
        for (kind, i, k, printed, value) in compare_all(n) {
            if printed != value {
                discrepancies.push(Discrepancy {
                    kind,
                    i,
                    k,
                    closed_form: printed,
                    exact: value.clone(),
                });
            }
            exact[kind as usize].push(value);
        }
        // compare_all enumerates (kind, i, k) with k fastest.
        let matrices = exact
            .iter()
            .map(|vals| DMatrix::from_fn(n, n, |row, col| vals[col * n + row].to_f64()))
            .collect();
        let half = Rational::new(1, 2);
        let phi_beta = &exact[InnerProductKind::PhiBeta as usize];
        let x_beta_phi = &exact[InnerProductKind::XBetaPhi as usize];
        let centered_coupling = DMatrix::from_fn(n, n, |row, col| {
            // ((x - 1/2) beta_i, phi_k) with i = col + 1, k = row + 1
            let shifted = &x_beta_phi[col * n + row] - &(&phi_beta[row * n + col] * &half);
            shifted.to_f64()
        });
        Ok(ProjectionTable {
            n,
            exact,
            matrices,
            centered_coupling,
            discrepancies,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `[(k - 1, i - 1)] = (f_i, g_k)` for the given kind.
    pub fn matrix(&self, kind: InnerProductKind) -> &DMatrix<f64> {
        &self.matrices[kind as usize]
    }

    /// `[(k - 1, i - 1)] = ((x - 1/2) beta_i, phi_k)`, formed exactly before
    /// rounding. This is the only place the heating rate enters the blocks.
    pub fn centered_coupling(&self) -> &DMatrix<f64> {
        &self.centered_coupling
    }

    pub fn exact(&self, kind: InnerProductKind, i: usize, k: usize) -> Option<&Rational> {
        if i == 0 || k == 0 || i > self.n || k > self.n {
            return None;
        }
        self.exact[kind as usize].get((i - 1) * self.n + (k - 1))
    }

    /// Disagreements between the printed formulas and the values in use.
    pub fn discrepancies(&self) -> &[Discrepancy] {
        &self.discrepancies
    }

    /// CSV rows `kind,i,k,numerator,denominator` of the exact values.
    pub fn write_csv<W: io::Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "kind,i,k,numerator,denominator")?;
        for kind in InnerProductKind::ALL {
            for i in 1..=self.n {
                for k in 1..=self.n {
                    let v = self.exact(kind, i, k).expect("in range");
                    writeln!(out, "{kind},{i},{k},{},{}", v.numerator(), v.denominator())?;
                }
            }
        }
        Ok(())
    }
}
