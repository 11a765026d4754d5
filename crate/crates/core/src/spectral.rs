//! Numerical kernel: symmetric eigendecomposition, SPD solves, and
//! Moore–Penrose pseudoinverse application.
//!
//! Everything here is deterministic: no randomized starts, no thread-order
//! dependent reductions. Dense eigensolves are delegated to `nalgebra`'s
//! symmetric QR iteration; linear solves use a dense Cholesky factorization
//! for small systems and Jacobi-preconditioned conjugate gradients above
//! [`DENSE_THRESHOLD`].

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};
use thiserror::Error;

use crate::linalg::{axpy, dot, norm};
use crate::operator::Operator;

/// Default relative residual tolerance for [`spd_solve`].
pub const DEFAULT_REL_TOL: f64 = 1e-10;
/// Eigenvalues at or below `rank_tol · λ_max` count as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;
/// Systems up to this dimension are solved by dense factorization.
pub const DENSE_THRESHOLD: usize = 512;

const EIG_MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("operator is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("operator is not symmetric (max asymmetry {max_asymmetry:e})")]
    NotSymmetric { max_asymmetry: f64 },
    #[error(
        "solver did not converge after {iterations} iterations (relative residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("conjugate gradient breakdown at iteration {iteration}: non-positive curvature {curvature:e}")]
    Breakdown { iteration: usize, curvature: f64 },
    #[error("operator is not positive definite")]
    NotPositiveDefinite,
    #[error("right-hand side has length {actual}, operator has {expected} rows")]
    RhsLength { expected: usize, actual: usize },
}

impl SpectralError {
    pub fn code(&self) -> &'static str {
        match self {
            SpectralError::NotSquare { .. } => "not_square",
            SpectralError::NotSymmetric { .. } => "not_symmetric",
            SpectralError::NoConvergence { .. } => "no_convergence",
            SpectralError::Breakdown { .. } => "solver_breakdown",
            SpectralError::NotPositiveDefinite => "not_positive_definite",
            SpectralError::RhsLength { .. } => "rhs_length",
        }
    }
}

/// Eigenpairs of a symmetric matrix, eigenvalues ascending. Column `i` of
/// `eigenvectors` belongs to `eigenvalues[i]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl EigenDecomposition {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.eigenvectors.column(i).iter().copied().collect()
    }

    /// Largest eigenvalue magnitude, 0 for an empty decomposition.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Threshold below which an eigenvalue is treated as zero.
    pub fn zero_threshold(&self, rank_tol: f64) -> f64 {
        rank_tol * self.spectral_radius()
    }

    pub fn is_zero_eigenvalue(&self, i: usize, rank_tol: f64) -> bool {
        self.eigenvalues[i].abs() <= self.zero_threshold(rank_tol)
    }

    /// Number of eigenvalues that count as zero.
    pub fn kernel_dimension(&self, rank_tol: f64) -> usize {
        (0..self.len())
            .filter(|&i| self.is_zero_eigenvalue(i, rank_tol))
            .count()
    }

    /// `V Λ Vᵀ`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let lambda = DMatrix::from_diagonal(&DVector::from_column_slice(&self.eigenvalues));
        &self.eigenvectors * lambda * self.eigenvectors.transpose()
    }

    /// `Vᵀ x`: coordinates of `x` in the eigenbasis.
    pub fn analyze(&self, x: &[f64]) -> Vec<f64> {
        let xv = DVector::from_column_slice(x);
        (self.eigenvectors.transpose() * xv)
            .iter()
            .copied()
            .collect()
    }

    /// `V c`: signal with eigenbasis coordinates `c`.
    pub fn synthesize(&self, coeffs: &[f64]) -> Vec<f64> {
        let cv = DVector::from_column_slice(coeffs);
        (&self.eigenvectors * cv).iter().copied().collect()
    }

    /// `V diag(h(λ)) Vᵀ x`.
    pub fn apply_spectral(&self, x: &[f64], h: impl Fn(f64) -> f64) -> Vec<f64> {
        let mut c = self.analyze(x);
        for (ci, &l) in c.iter_mut().zip(&self.eigenvalues) {
            *ci *= h(l);
        }
        self.synthesize(&c)
    }
}

fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Symmetric eigendecomposition of a sparse operator.
pub fn eig_sym(m: &Operator<f64>) -> Result<EigenDecomposition, SpectralError> {
    if !m.is_square() {
        return Err(SpectralError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    eig_sym_dense(&m.to_dense())
}

/// Symmetric eigendecomposition of a dense matrix.
///
/// Symmetry is checked to a relative tolerance of `1e-12 · max|mᵢⱼ|`.
pub fn eig_sym_dense(m: &DMatrix<f64>) -> Result<EigenDecomposition, SpectralError> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(SpectralError::NotSquare { rows, cols });
    }
    let scale = m.amax();
    let asym = max_asymmetry(m);
    if asym > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(SpectralError::NotSymmetric {
            max_asymmetry: asym,
        });
    }
    if rows == 0 {
        return Ok(EigenDecomposition {
            eigenvalues: Vec::new(),
            eigenvectors: DMatrix::zeros(0, 0),
        });
    }
    let sym = SymmetricEigen::<f64, Dyn>::try_new(m.clone(), f64::EPSILON, EIG_MAX_ITERATIONS)
        .ok_or(SpectralError::NoConvergence {
            iterations: EIG_MAX_ITERATIONS,
            residual: f64::NAN,
        })?;

    let mut order: Vec<usize> = (0..rows).collect();
    order.sort_by(|&a, &b| sym.eigenvalues[a].total_cmp(&sym.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| sym.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::zeros(rows, rows);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &sym.eigenvectors.column(src));
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Options for [`spd_solve_with`].
#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub rel_tol: f64,
    pub dense_threshold: usize,
    /// Iteration cap for conjugate gradients; defaults to `10·n + 100`.
    pub max_iterations: Option<usize>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            rel_tol: DEFAULT_REL_TOL,
            dense_threshold: DENSE_THRESHOLD,
            max_iterations: None,
        }
    }
}

/// Solves `M x = rhs` for symmetric positive definite `M`, returning `x` with
/// `‖M x − rhs‖₂ ≤ rel_tol · ‖rhs‖₂`.
///
/// On the dense path, a badly conditioned `M` can leave a residual floor of
/// about `ε·‖M‖·‖x‖` above that target; the solution is then accepted when
/// the normwise backward error `‖r‖ / (‖M‖∞‖x‖ + ‖rhs‖)` is below `rel_tol`.
pub fn spd_solve(m: &Operator<f64>, rhs: &[f64], rel_tol: f64) -> Result<Vec<f64>, SpectralError> {
    spd_solve_with(
        m,
        rhs,
        &SolverOptions {
            rel_tol,
            ..SolverOptions::default()
        },
    )
}

pub fn spd_solve_with(
    m: &Operator<f64>,
    rhs: &[f64],
    opts: &SolverOptions,
) -> Result<Vec<f64>, SpectralError> {
    SpdSolver::new(m, opts)?.solve(rhs)
}

/// A factored SPD system, reusable across right-hand sides.
pub struct SpdSolver<'a> {
    op: &'a Operator<f64>,
    opts: SolverOptions,
    factor: Option<Cholesky<f64, Dyn>>,
}

impl<'a> SpdSolver<'a> {
    pub fn new(op: &'a Operator<f64>, opts: &SolverOptions) -> Result<Self, SpectralError> {
        if !op.is_square() {
            return Err(SpectralError::NotSquare {
                rows: op.rows(),
                cols: op.cols(),
            });
        }
        let factor = if op.rows() <= opts.dense_threshold {
            Some(Cholesky::new(op.to_dense()).ok_or(SpectralError::NotPositiveDefinite)?)
        } else {
            None
        };
        Ok(SpdSolver {
            op,
            opts: *opts,
            factor,
        })
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>, SpectralError> {
        let n = self.op.rows();
        if rhs.len() != n {
            return Err(SpectralError::RhsLength {
                expected: n,
                actual: rhs.len(),
            });
        }
        let rhs_norm = norm(rhs);
        if rhs_norm == 0.0 {
            return Ok(vec![0.0; n]);
        }
        match &self.factor {
            Some(chol) => {
                let target = self.opts.rel_tol * rhs_norm;
                let mut x: Vec<f64> = chol
                    .solve(&DVector::from_column_slice(rhs))
                    .iter()
                    .copied()
                    .collect();
                // iterative refinement against the sparse operator
                for _ in 0..3 {
                    let r: Vec<f64> = rhs
                        .iter()
                        .zip(self.op.mul_vec(&x))
                        .map(|(b, ax)| b - ax)
                        .collect();
                    if norm(&r) <= target {
                        return Ok(x);
                    }
                    let dx = chol.solve(&DVector::from_vec(r));
                    for (xi, d) in x.iter_mut().zip(dx.iter()) {
                        *xi += d;
                    }
                }
                let r = rhs
                    .iter()
                    .zip(self.op.mul_vec(&x))
                    .map(|(b, ax)| b - ax)
                    .collect::<Vec<_>>();
                let residual = norm(&r) / rhs_norm;
                let op_norm = self.op.norm_inf();
                let backward = norm(&r) / (op_norm * norm(&x) + rhs_norm);
                if residual <= self.opts.rel_tol || backward <= self.opts.rel_tol {
                    Ok(x)
                } else {
                    Err(SpectralError::NoConvergence {
                        iterations: 3,
                        residual,
                    })
                }
            }
            None => conjugate_gradient(
                self.op,
                rhs,
                self.opts.rel_tol,
                self.opts.max_iterations.unwrap_or(10 * n + 100),
            ),
        }
    }
}

/// Jacobi-preconditioned conjugate gradients from a zero initial guess.
///
/// Also valid for consistent positive *semi*definite systems (e.g. a graph
/// Laplacian with a right-hand side orthogonal to its kernel): iterates stay
/// in the Krylov space and the residual still converges.
pub fn conjugate_gradient(
    m: &Operator<f64>,
    rhs: &[f64],
    rel_tol: f64,
    max_iterations: usize,
) -> Result<Vec<f64>, SpectralError> {
    let n = m.rows();
    let rhs_norm = norm(rhs);
    let mut x = vec![0.0; n];
    if rhs_norm == 0.0 {
        return Ok(x);
    }
    let inv_diag: Vec<f64> = m
        .diag()
        .into_iter()
        .map(|d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let mut r = rhs.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(a, b)| a * b).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    let target = rel_tol * rhs_norm;

    for it in 0..max_iterations {
        m.mul_vec_into(&p, &mut ap);
        let curvature = dot(&p, &ap);
        if curvature <= 0.0 || !curvature.is_finite() {
            return Err(SpectralError::Breakdown {
                iteration: it,
                curvature,
            });
        }
        let step = rz / curvature;
        axpy(step, &p, &mut x);
        axpy(-step, &ap, &mut r);
        if norm(&r) <= target {
            // confirm against the true residual; the recurrence drifts
            let true_r: Vec<f64> = rhs
                .iter()
                .zip(m.mul_vec(&x))
                .map(|(b, ax)| b - ax)
                .collect();
            if norm(&true_r) <= target {
                return Ok(x);
            }
            r = true_r;
        }
        for ((zi, ri), di) in z.iter_mut().zip(&r).zip(&inv_diag) {
            *zi = ri * di;
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for (pi, zi) in p.iter_mut().zip(&z) {
            *pi = zi + beta * *pi;
        }
    }
    let true_r: Vec<f64> = rhs
        .iter()
        .zip(m.mul_vec(&x))
        .map(|(b, ax)| b - ax)
        .collect();
    Err(SpectralError::NoConvergence {
        iterations: max_iterations,
        residual: norm(&true_r) / rhs_norm,
    })
}

/// Cached spectral pseudoinverse of a symmetric operator.
#[derive(Debug, Clone)]
pub struct PseudoInverse {
    eig: EigenDecomposition,
    threshold: f64,
}

impl PseudoInverse {
    pub fn new(m: &Operator<f64>, rank_tol: f64) -> Result<Self, SpectralError> {
        Ok(Self::from_eigen(eig_sym(m)?, rank_tol))
    }

    pub fn from_eigen(eig: EigenDecomposition, rank_tol: f64) -> Self {
        let threshold = eig.zero_threshold(rank_tol);
        PseudoInverse { eig, threshold }
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eig
    }

    fn invert(&self, l: f64) -> f64 {
        if l.abs() > self.threshold {
            1.0 / l
        } else {
            0.0
        }
    }

    /// `M† v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.eig.apply_spectral(v, |l| self.invert(l))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.eig.len();
        let inv = DVector::from_iterator(n, self.eig.eigenvalues.iter().map(|&l| self.invert(l)));
        &self.eig.eigenvectors * DMatrix::from_diagonal(&inv) * self.eig.eigenvectors.transpose()
    }
}

/// `M† v` for symmetric `M`, zeroing eigenvalues with `|λ| ≤ rank_tol · λ_max`.
pub fn pinv_apply(m: &Operator<f64>, v: &[f64], rank_tol: f64) -> Result<Vec<f64>, SpectralError> {
    if v.len() != m.rows() {
        return Err(SpectralError::RhsLength {
            expected: m.rows(),
            actual: v.len(),
        });
    }
    Ok(PseudoInverse::new(m, rank_tol)?.apply(v))
}

/// Largest eigenvalue of a symmetric positive semidefinite operator by power
/// iteration, stopping when the Rayleigh quotient changes by less than
/// `tol` relative.
pub fn largest_eigenvalue(m: &Operator<f64>, tol: f64, max_iterations: usize) -> f64 {
    let n = m.rows();
    if n == 0 || m.nnz() == 0 {
        return 0.0;
    }
    // Deterministic, non-constant start so Laplacian kernels do not trap it.
    let mut v: Vec<f64> = (0..n)
        .map(|i| 1.0 + ((i as u64).wrapping_mul(2_654_435_761) % 1000) as f64 / 1000.0)
        .collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut lambda = 0.0;
    let mut w = vec![0.0; n];
    for _ in 0..max_iterations {
        m.mul_vec_into(&v, &mut w);
        let next = dot(&v, &w);
        let nw = norm(&w);
        if nw == 0.0 {
            return 0.0;
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / nw;
        }
        if (next - lambda).abs() <= tol * next.abs() {
            return next;
        }
        lambda = next;
    }
    lambda
}
