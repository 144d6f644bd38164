//! Projection of the marginal-stability system onto `W = sum W_i beta_i`,
//! `Theta = sum Theta_i phi_i`, and the resulting generalised eigenproblem.
//!
//! With row index `k` (test function) and column index `i` (trial function)
//! the projected system reads
//!
//! ```text
//! K W - a^2 Ra M Theta = 0,     P W + L Theta = 0,
//! K = (beta''_i, beta''_k) + 2a^2 (beta'_i, beta'_k) + a^4 (beta_i, beta_k)
//! M = (phi_i, beta_k)
//! L = -(Q_i, Q_k) - a^2 (phi_i, phi_k)
//! P = N1 (beta_i, phi_k) - N (x beta_i, phi_k),    N1 = 1 + N/2.
//! ```
//!
//! `Theta` is eliminated (`L` is negative definite), leaving
//! `K W = Ra (-a^2 M L^{-1} P) W`.

mod curve;
mod profile;

pub use curve::{
    convergence_study, critical_rayleigh, golden_section_minimum, neutral_curve,
    smallest_reproducing_truncation, ConvergenceRow, CriticalPoint, NeutralCurvePoint,
    DEFAULT_A2_BRACKET,
};
pub use profile::{basic_state_profile, BasicStateParams};

use nalgebra::{Cholesky, Complex, DMatrix, DVector, Schur, LU, SVD};

use crate::error::{Result, StabilityError};
use crate::inner_products::{InnerProductKind, ProjectionTable};

/// Relative imaginary part below which an eigenvalue counts as real.
const REAL_EIGENVALUE_TOL: f64 = 1e-9;

/// Heating rate `N`, squared wavenumber `a^2` and truncation `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProblemParams {
    heating: f64,
    a2: f64,
    n_modes: usize,
}

impl ProblemParams {
    pub fn new(heating: f64, a2: f64, n_modes: usize) -> Result<Self> {
        if !heating.is_finite() {
            return Err(StabilityError::InvalidParameter {
                name: "N",
                reason: format!("heating rate must be finite, got {heating}"),
            });
        }
        if !(a2 > 0.0) || !a2.is_finite() {
            return Err(StabilityError::InvalidParameter {
                name: "a2",
                reason: format!("squared wavenumber must be positive and finite, got {a2}"),
            });
        }
        if n_modes == 0 {
            return Err(StabilityError::InvalidParameter {
                name: "n",
                reason: "truncation must be at least 1".into(),
            });
        }
        Ok(ProblemParams {
            heating,
            a2,
            n_modes,
        })
    }

    pub fn heating(&self) -> f64 {
        self.heating
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// `N1 = 1 + N/2`, the coupling at the lower wall after the shift to `[0, 1]`.
    pub fn n1(&self) -> f64 {
        1.0 + 0.5 * self.heating
    }

    pub fn with_a2(&self, a2: f64) -> Result<Self> {
        Self::new(self.heating, a2, self.n_modes)
    }
}

/// The four `n x n` blocks of the projected system.
#[derive(Clone, Debug, PartialEq)]
pub struct GalerkinBlocks {
    pub k: DMatrix<f64>,
    pub m: DMatrix<f64>,
    pub l: DMatrix<f64>,
    pub p: DMatrix<f64>,
}

/// Smallest admissible eigenvalue with its eigenvector and diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct RayleighSolution {
    pub ra: f64,
    /// Coefficients of `W` on `beta_1..beta_n`, largest entry scaled to +1.
    pub w_coeffs: Vec<f64>,
    /// Coefficients of `Theta` on `phi_1..phi_n`, same scaling as `w_coeffs`.
    pub theta_coeffs: Vec<f64>,
    /// Row-normalised secular determinant at `ra`.
    pub det_residual: f64,
    /// `|K W - Ra B W| / (|K| |W|)` for the reduced pencil.
    pub eigen_residual: f64,
    /// All eigenvalues `Ra` of the reduced pencil (reciprocals of the
    /// nonzero eigenvalues of `K^{-1} B`).
    pub spectrum: Vec<Complex<f64>>,
    /// Number of eigenvalues excluded for having a nonzero imaginary part.
    pub complex_count: usize,
}

/// Builds blocks for any truncation up to the size of its projection table.
#[derive(Clone, Debug)]
pub struct GalerkinSolver {
    table: ProjectionTable,
}

impl GalerkinSolver {
    pub fn new(max_modes: usize) -> Result<Self> {
        Ok(GalerkinSolver {
            table: ProjectionTable::new(max_modes)?,
        })
    }

    pub fn max_modes(&self) -> usize {
        self.table.n()
    }

    pub fn table(&self) -> &ProjectionTable {
        &self.table
    }

    pub fn assemble(&self, params: &ProblemParams) -> Result<GalerkinBlocks> {
        let n = params.n_modes;
        if n > self.table.n() {
            return Err(StabilityError::InvalidParameter {
                name: "n",
                reason: format!(
                    "truncation {n} exceeds the prepared table ({})",
                    self.table.n()
                ),
            });
        }
        let block = |kind| self.table.matrix(kind).view((0, 0), (n, n)).into_owned();
        let a2 = params.a2;
        let k = block(InnerProductKind::D4BetaBeta)
            - block(InnerProductKind::D2BetaBeta) * (2.0 * a2)
            + block(InnerProductKind::BetaBeta) * (a2 * a2);
        let m = block(InnerProductKind::PhiBeta);
        let l = block(InnerProductKind::D2PhiPhi) - block(InnerProductKind::PhiPhi) * a2;
        // N1 (beta_i, phi_k) - N (x beta_i, phi_k) = M^T - N ((x - 1/2) beta_i, phi_k),
        // since (beta_i, phi_k) = (phi_k, beta_i) is the transpose of M.
        let coupling = self
            .table
            .centered_coupling()
            .view((0, 0), (n, n))
            .into_owned();
        let p = m.transpose() - coupling * params.heating;
        Ok(GalerkinBlocks { k, m, l, p })
    }

    pub fn solve(&self, params: &ProblemParams) -> Result<RayleighSolution> {
        solve_rayleigh(&self.assemble(params)?, params)
    }
}

/// Blocks for a single parameter set.
pub fn assemble(params: &ProblemParams) -> Result<GalerkinBlocks> {
    GalerkinSolver::new(params.n_modes)?.assemble(params)
}

/// `L^{-1} P` and the reduced right-hand matrix `B = -a^2 M L^{-1} P`.
fn reduce(blocks: &GalerkinBlocks, a2: f64) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let neg_l = -&blocks.l;
    let chol = Cholesky::new(neg_l)
        .ok_or_else(|| StabilityError::SingularReduction("-L is not positive definite".into()))?;
    let l_inv_p = -chol.solve(&blocks.p);
    let b = &blocks.m * &l_inv_p * (-a2);
    Ok((l_inv_p, b))
}

pub fn solve_rayleigh(blocks: &GalerkinBlocks, params: &ProblemParams) -> Result<RayleighSolution> {
    let a2 = params.a2;
    let (l_inv_p, b) = reduce(blocks, a2)?;
    let k_chol = Cholesky::new(blocks.k.clone())
        .ok_or_else(|| StabilityError::SingularReduction("K is not positive definite".into()))?;
    let c = k_chol.solve(&b);
    let schur = Schur::try_new(c, f64::EPSILON, 10_000).ok_or_else(|| {
        StabilityError::SingularReduction("Schur iteration did not converge".into())
    })?;
    let mus = schur.complex_eigenvalues();

    let mut spectrum = Vec::with_capacity(mus.len());
    let mut complex_count = 0;
    let mut best: Option<f64> = None;
    for mu in mus.iter() {
        if mu.norm() == 0.0 {
            continue;
        }
        let ra = Complex::new(1.0, 0.0) / mu;
        spectrum.push(ra);
        if mu.im.abs() > REAL_EIGENVALUE_TOL * mu.norm() {
            complex_count += 1;
        } else if mu.re > 0.0 {
            best = Some(best.map_or(ra.re, |r: f64| r.min(ra.re)));
        }
    }
    spectrum.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    let ra = best.ok_or(StabilityError::NoPositiveEigenvalue {
        heating: params.heating,
        a2,
        n_modes: params.n_modes,
    })?;

    // Null vector of K - Ra B from the smallest singular value.
    let pencil = &blocks.k - &b * ra;
    let svd = SVD::new(pencil, false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| StabilityError::SingularReduction("SVD did not return V".into()))?;
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("n >= 1");
    let mut w: DVector<f64> = v_t.row(idx).transpose();
    let pivot = w
        .iter()
        .copied()
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
        .unwrap_or(1.0);
    w /= pivot;
    let theta = -(&l_inv_p * &w);

    let residual = (&blocks.k * &w - &b * &w * ra).norm() / (blocks.k.norm() * w.norm());
    Ok(RayleighSolution {
        ra,
        w_coeffs: w.iter().copied().collect(),
        theta_coeffs: theta.iter().copied().collect(),
        det_residual: scaled_secular_determinant(blocks, a2, ra),
        eigen_residual: residual,
        spectrum,
        complex_count,
    })
}

fn secular_matrix(blocks: &GalerkinBlocks, a2: f64, ra: f64) -> DMatrix<f64> {
    let n = blocks.k.nrows();
    let mut full = DMatrix::zeros(2 * n, 2 * n);
    full.view_mut((0, 0), (n, n)).copy_from(&blocks.k);
    full.view_mut((0, n), (n, n))
        .copy_from(&(&blocks.m * (-a2 * ra)));
    full.view_mut((n, 0), (n, n)).copy_from(&blocks.p);
    full.view_mut((n, n), (n, n)).copy_from(&blocks.l);
    full
}

/// `det [[K, -a^2 Ra M], [P, L]]`.
pub fn secular_determinant(blocks: &GalerkinBlocks, params: &ProblemParams, ra: f64) -> f64 {
    LU::new(secular_matrix(blocks, params.a2, ra)).determinant()
}

/// The secular determinant after scaling every row to unit Euclidean norm.
///
/// Same sign as [`secular_determinant`], bounded by 1 in magnitude, and free
/// of the underflow the raw determinant suffers at larger truncations.
pub fn scaled_secular_determinant(blocks: &GalerkinBlocks, a2: f64, ra: f64) -> f64 {
    let mut full = secular_matrix(blocks, a2, ra);
    for mut row in full.row_iter_mut() {
        let norm = row.norm();
        if norm > 0.0 {
            row /= norm;
        }
    }
    LU::new(full).determinant()
}
