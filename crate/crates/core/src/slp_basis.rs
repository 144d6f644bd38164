//! Shifted Legendre polynomials on `(0, 1)` and the integrated bases built
//! from them.
//!
//! * `Q_k(x) = L_k(2x - 1)`, orthogonal on `(0, 1)` with `(Q_i, Q_i) = 1/(2i+1)`.
//! * `phi_i = int_0^x Q_i`, vanishing at both ends (`i >= 1`).
//! * `beta_i = int_0^x int_0^s Q_{i+1}`, vanishing with its first derivative
//!   at both ends (`i >= 1`).
//!
//! Every function is available as an [`ExactPoly`] for exact inner products
//! and through a three-term recurrence for floating-point grids.

use num_bigint::BigInt;

use crate::error::{Result, StabilityError};
use crate::poly::ExactPoly;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// Shifted Legendre polynomial `Q_k`, index from 0.
    Q,
    /// `phi_i` in `H^1_0(0,1)`, index from 1.
    Phi,
    /// `beta_i` in `H^2_0(0,1)`, index from 1.
    Beta,
}

impl BasisKind {
    fn min_index(self) -> usize {
        match self {
            BasisKind::Q => 0,
            BasisKind::Phi | BasisKind::Beta => 1,
        }
    }

    fn name(self) -> &'static str {
        match self {
            BasisKind::Q => "Q",
            BasisKind::Phi => "phi",
            BasisKind::Beta => "beta",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisFunctionId {
    kind: BasisKind,
    index: usize,
}

impl BasisFunctionId {
    pub fn new(kind: BasisKind, index: usize) -> Result<Self> {
        if index < kind.min_index() {
            return Err(StabilityError::InvalidIndex {
                what: kind.name(),
                index,
            });
        }
        Ok(BasisFunctionId { kind, index })
    }

    pub fn q(index: usize) -> Self {
        BasisFunctionId {
            kind: BasisKind::Q,
            index,
        }
    }

    pub fn phi(index: usize) -> Result<Self> {
        Self::new(BasisKind::Phi, index)
    }

    pub fn beta(index: usize) -> Result<Self> {
        Self::new(BasisKind::Beta, index)
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn degree(&self) -> usize {
        match self.kind {
            BasisKind::Q => self.index,
            BasisKind::Phi => self.index + 1,
            BasisKind::Beta => self.index + 3,
        }
    }

    /// Exact monomial coefficients.
    pub fn poly(&self) -> ExactPoly {
        match self.kind {
            BasisKind::Q => q_poly(self.index),
            BasisKind::Phi => phi_from_q(self.index),
            BasisKind::Beta => beta_from_q(self.index),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self.kind {
            BasisKind::Q => eval_q(self.index, x),
            BasisKind::Phi => eval_phi(self.index, x),
            BasisKind::Beta => eval_beta(self.index, x),
        }
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, j| acc * (n - j) / (j + 1))
}

/// Exact `Q_k(x) = sum_j (-1)^(k+j) C(k,j) C(k+j,j) x^j`.
pub fn q_poly(k: usize) -> ExactPoly {
    ExactPoly::new(
        (0..=k)
            .map(|j| {
                let c = binomial(k, j) * binomial(k + j, j);
                Rational::from_integer(if (k + j).is_multiple_of(2) { c } else { -c })
            })
            .collect(),
    )
}

fn phi_from_q(i: usize) -> ExactPoly {
    let diff = &q_poly(i + 1) - &q_poly(i - 1);
    diff.scale(&Rational::new(1, 2 * (2 * i as i64 + 1)))
}

fn beta_from_q(i: usize) -> ExactPoly {
    let i = i as i64;
    let upper = (&q_poly(i as usize + 3) - &q_poly(i as usize + 1))
        .scale(&Rational::new(1, (2 * i + 3) * (2 * i + 5)));
    let lower = (&q_poly(i as usize + 1) - &q_poly(i as usize - 1))
        .scale(&Rational::new(1, (2 * i + 1) * (2 * i + 3)));
    (&upper - &lower).scale(&Rational::new(1, 4))
}

/// Exact `phi_i` as `(Q_{i+1} - Q_{i-1}) / (2(2i+1))`.
pub fn phi_poly(i: usize) -> Result<ExactPoly> {
    Ok(BasisFunctionId::phi(i)?.poly())
}

/// Exact `beta_i` as the four-term combination of `Q_{i-1}, Q_{i+1}, Q_{i+3}`.
pub fn beta_poly(i: usize) -> Result<ExactPoly> {
    Ok(BasisFunctionId::beta(i)?.poly())
}

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(StabilityError::OutOfDomain {
            value: x,
            lo: 0.0,
            hi: 1.0,
        })
    }
}

/// `[Q_0(x), ..., Q_k(x)]` by the Bonnet recurrence in `u = 2x - 1`.
pub fn q_values(k: usize, x: f64) -> Vec<f64> {
    let u = 2.0 * x - 1.0;
    let mut out = Vec::with_capacity(k + 1);
    out.push(1.0);
    if k >= 1 {
        out.push(u);
    }
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0) * u * out[j] - jf * out[j - 1]) / (jf + 1.0);
        out.push(next);
    }
    out
}

/// `[Q'_0(x), ..., Q'_k(x)]` (derivative in `x`).
pub fn q_derivative_values(k: usize, x: f64) -> Vec<f64> {
    let q = q_values(k, x);
    // L'_{j+1} = L'_{j-1} + (2j+1) L_j, and d/dx = 2 d/du
    let mut dl = vec![0.0; k + 1];
    if k >= 1 {
        dl[1] = 1.0;
    }
    for j in 1..k {
        dl[j + 1] = dl[j - 1] + (2.0 * j as f64 + 1.0) * q[j];
    }
    dl.into_iter().map(|d| 2.0 * d).collect()
}

pub fn eval_q(i: usize, x: f64) -> Result<f64> {
    check_unit(x)?;
    Ok(q_values(i, x)[i])
}

pub fn eval_q_derivative(i: usize, x: f64) -> Result<f64> {
    check_unit(x)?;
    Ok(q_derivative_values(i, x)[i])
}

pub fn eval_phi(i: usize, x: f64) -> Result<f64> {
    BasisFunctionId::phi(i)?;
    check_unit(x)?;
    let q = q_values(i + 1, x);
    Ok((q[i + 1] - q[i - 1]) / (2.0 * (2.0 * i as f64 + 1.0)))
}

pub fn eval_beta(i: usize, x: f64) -> Result<f64> {
    eval_beta_derivative(i, 0, x)
}

/// `D^order beta_i(x)` for `order` in `0..=2`; `D beta_i = phi_{i+1}` and
/// `D^2 beta_i = Q_{i+1}`.
pub fn eval_beta_derivative(i: usize, order: usize, x: f64) -> Result<f64> {
    BasisFunctionId::beta(i)?;
    check_unit(x)?;
    match order {
        0 => {
            let q = q_values(i + 3, x);
            let fi = i as f64;
            let upper = (q[i + 3] - q[i + 1]) / ((2.0 * fi + 3.0) * (2.0 * fi + 5.0));
            let lower = (q[i + 1] - q[i - 1]) / ((2.0 * fi + 1.0) * (2.0 * fi + 3.0));
            Ok(0.25 * (upper - lower))
        }
        1 => eval_phi(i + 1, x),
        2 => eval_q(i + 1, x),
        _ => Err(StabilityError::InvalidParameter {
            name: "order",
            reason: format!("derivative order {order} not available (0..=2)"),
        }),
    }
}

/// Coefficients of `x Q_i` in the `Q` basis, highest index first:
/// `x Q_i = (i+1)/(2(2i+1)) Q_{i+1} + Q_i / 2 + i/(2(2i+1)) Q_{i-1}`.
pub fn multiply_by_x(i: usize) -> Vec<(usize, Rational)> {
    let denom = 2 * (2 * i as i64 + 1);
    let mut terms = vec![
        (i + 1, Rational::new(i as i64 + 1, denom)),
        (i, Rational::new(1, 2)),
    ];
    if i > 0 {
        terms.push((i - 1, Rational::new(i as i64, denom)));
    }
    terms
}

/// `|2(2i+1) Q_i(x) - Q'_{i+1}(x) + Q'_{i-1}(x)|`.
pub fn derivative_relation_residual(i: usize, x: f64) -> Result<f64> {
    if i == 0 {
        return Err(StabilityError::InvalidIndex {
            what: "derivative relation (needs Q_{i-1})",
            index: i,
        });
    }
    check_unit(x)?;
    let q = q_values(i, x);
    let dq = q_derivative_values(i + 1, x);
    Ok((2.0 * (2.0 * i as f64 + 1.0) * q[i] - dq[i + 1] + dq[i - 1]).abs())
}
