//! Dense polynomials with exact rational coefficients in the monomial basis.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Rational;

/// `sum_j coeffs[j] x^j`, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPoly {
    coeffs: Vec<Rational>,
}

impl ExactPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        ExactPoly { coeffs }
    }

    pub fn zero() -> Self {
        ExactPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        ExactPoly::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        ExactPoly::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        ExactPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul_x(&self) -> Self {
        if self.is_zero() {
            return ExactPoly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        ExactPoly { coeffs }
    }

    pub fn derivative(&self) -> Self {
        ExactPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c * &Rational::from(j as i64))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, order: usize) -> Self {
        (0..order).fold(self.clone(), |p, _| p.derivative())
    }

    /// Antiderivative vanishing at `x = 0`.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / &Rational::from(j as i64 + 1));
        }
        ExactPoly::new(coeffs)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| &(&acc * x) + c)
    }

    /// Horner evaluation in floating point. Loses accuracy for high degree
    /// because monomial coefficients of Legendre-type polynomials alternate
    /// and grow combinatorially; use the recurrence evaluators for grids.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    /// Exact `int_0^1 p(x) dx`.
    pub fn integral_unit(&self) -> Rational {
        self.coeffs
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (j, c)| {
                acc + c / &Rational::from(j as i64 + 1)
            })
    }
}

impl Add<&ExactPoly> for &ExactPoly {
    type Output = ExactPoly;
    fn add(self, rhs: &ExactPoly) -> ExactPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        ExactPoly::new(
            (0..len)
                .map(|j| self.coeffs.get(j).unwrap_or(&zero) + rhs.coeffs.get(j).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Sub<&ExactPoly> for &ExactPoly {
    type Output = ExactPoly;
    fn sub(self, rhs: &ExactPoly) -> ExactPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        ExactPoly::new(
            (0..len)
                .map(|j| self.coeffs.get(j).unwrap_or(&zero) - rhs.coeffs.get(j).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Mul<&ExactPoly> for &ExactPoly {
    type Output = ExactPoly;
    fn mul(self, rhs: &ExactPoly) -> ExactPoly {
        if self.is_zero() || rhs.is_zero() {
            return ExactPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (a, ca) in self.coeffs.iter().enumerate() {
            for (b, cb) in rhs.coeffs.iter().enumerate() {
                out[a + b] += &(ca * cb);
            }
        }
        ExactPoly::new(out)
    }
}

/// Integer numerators over one common denominator.
///
/// Integrating products in this form costs one big-integer convolution and
/// a single final reduction instead of a rational reduction per term.
#[derive(Clone, Debug)]
pub struct ScaledIntegerPoly {
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

impl From<&ExactPoly> for ScaledIntegerPoly {
    fn from(p: &ExactPoly) -> Self {
        let denominator = p
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denominator()));
        let numerators = p
            .coeffs
            .iter()
            .map(|c| c.numerator() * (&denominator / c.denominator()))
            .collect();
        ScaledIntegerPoly {
            numerators,
            denominator,
        }
    }
}

impl ScaledIntegerPoly {
    /// Exact `int_0^1 x^shift f(x) g(x) dx`.
    pub fn integrate_product(&self, other: &ScaledIntegerPoly, shift: usize) -> Rational {
        if self.numerators.is_empty() || other.numerators.is_empty() {
            return Rational::zero();
        }
        let len = self.numerators.len() + other.numerators.len() - 1;
        let mut conv = vec![BigInt::zero(); len];
        for (a, ca) in self.numerators.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in other.numerators.iter().enumerate() {
                conv[a + b] += ca * cb;
            }
        }
        // sum_j conv[j] / (j + shift + 1), brought over lcm(1..=len + shift)
        let common = (1..=(len + shift) as u64).fold(BigInt::one(), |l, d| l.lcm(&BigInt::from(d)));
        let mut total = BigInt::zero();
        for (j, c) in conv.iter().enumerate() {
            if !c.is_zero() {
                total += c * (&common / BigInt::from((j + shift + 1) as u64));
            }
        }
        Rational::new(total, common * &self.denominator * &other.denominator)
    }
}

/// Exact `int_0^1 x^shift f g dx` without precomputed integer forms.
pub fn integrate_product(f: &ExactPoly, g: &ExactPoly, shift: usize) -> Rational {
    ScaledIntegerPoly::from(f).integrate_product(&ScaledIntegerPoly::from(g), shift)
}
