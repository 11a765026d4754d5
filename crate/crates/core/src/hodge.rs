//! Cycle/gradient decomposition of edge flows.
//!
//! Edge space splits orthogonally into the cycle space `ker B = ker L₁`
//! (flows conserved at every node) and the gradient space `im Bᵀ = im L₁`
//! (flows induced by node potentials). The projection onto the cycle space is
//! the flow closest to `f` that satisfies `B f̂ = 0`, and is computed as
//!
//! ```text
//! f̂ = f − Bᵀ L† B f
//! ```
//!
//! using the node-space pseudoinverse (N×N), which is cheaper than working
//! with the E×E Edge-Laplacian whenever `N < E`. The spectral route through
//! `L₁`'s eigenbasis is kept as [`ideal_lowpass`] and serves as a cross-check.
//!
//! With no filled triangles there is no curl component: the split is two-way.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Result};
use crate::graph::Graph;
use crate::linalg::norm;
use crate::operator::Operator;
use crate::signal::{EdgeSignal, NodeSignal};
use crate::spectral::{
    self, conjugate_gradient, eig_sym, PseudoInverse, DEFAULT_RANK_TOL, DENSE_THRESHOLD,
};

/// A flow split into its cyclic (harmonic) and gradient parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HodgeDecomposition {
    pub cyclic: EdgeSignal,
    pub gradient: EdgeSignal,
    /// Node potential `φ` with `gradient = Bᵀ φ`.
    pub potential: NodeSignal,
    /// `‖B · cyclic‖₂`, zero up to rounding.
    pub residual_norm: f64,
}

impl HodgeDecomposition {
    pub fn cyclic_energy(&self) -> f64 {
        self.cyclic.dot(&self.cyclic)
    }

    pub fn gradient_energy(&self) -> f64 {
        self.gradient.dot(&self.gradient)
    }
}

enum NodeSolver {
    Dense(PseudoInverse),
    Iterative(Operator<f64>),
}

/// Projector onto the cycle and gradient spaces of one graph. Caches the
/// factorization of `L`, so repeated projections on the same graph are cheap.
pub struct HodgeProjector {
    incidence: Operator<f64>,
    solver: NodeSolver,
}

const ITERATIVE_REL_TOL: f64 = 1e-13;

impl HodgeProjector {
    pub fn new(g: &Graph) -> Result<Self> {
        Self::with_rank_tol(g, DEFAULT_RANK_TOL)
    }

    pub fn with_rank_tol(g: &Graph, rank_tol: f64) -> Result<Self> {
        let incidence = g.incidence_matrix().to_real();
        let laplacian = g.laplacian().to_real();
        let solver = if g.num_nodes() <= DENSE_THRESHOLD {
            NodeSolver::Dense(PseudoInverse::new(&laplacian, rank_tol)?)
        } else {
            NodeSolver::Iterative(laplacian)
        };
        Ok(HodgeProjector { incidence, solver })
    }

    pub fn num_edges(&self) -> usize {
        self.incidence.cols()
    }

    /// A potential `φ = L† B f` whose gradient `Bᵀ φ` is the gradient part of `f`.
    pub fn potential(&self, f: &[f64]) -> Result<NodeSignal> {
        check_len("edge signal", self.num_edges(), f.len())?;
        let div = self.incidence.mul_vec(f);
        let phi = match &self.solver {
            NodeSolver::Dense(pinv) => pinv.apply(&div),
            NodeSolver::Iterative(l) => {
                conjugate_gradient(l, &div, ITERATIVE_REL_TOL, 20 * l.rows() + 100)?
            }
        };
        Ok(NodeSignal::new(phi))
    }

    pub fn decompose(&self, f: &[f64]) -> Result<HodgeDecomposition> {
        let potential = self.potential(f)?;
        let gradient = EdgeSignal::new(self.incidence.mul_transpose_vec(&potential));
        let cyclic: EdgeSignal = f.iter().zip(gradient.iter()).map(|(a, b)| a - b).collect();
        let residual_norm = norm(&self.incidence.mul_vec(&cyclic));
        Ok(HodgeDecomposition {
            cyclic,
            gradient,
            potential,
            residual_norm,
        })
    }

    pub fn project_cyclic(&self, f: &[f64]) -> Result<EdgeSignal> {
        Ok(self.decompose(f)?.cyclic)
    }

    pub fn project_gradient(&self, f: &[f64]) -> Result<EdgeSignal> {
        Ok(self.decompose(f)?.gradient)
    }
}

/// Dimension of the cycle space, `E − N + C` with `C` connected components.
pub fn cycle_space_dimension(g: &Graph) -> usize {
    g.num_edges() + g.num_components() - g.num_nodes()
}

/// Dimension of `ker L₁` counted from its spectrum.
pub fn spectral_kernel_dimension(g: &Graph, rank_tol: f64) -> Result<usize> {
    Ok(eig_sym(&g.edge_laplacian().to_real())?.kernel_dimension(rank_tol))
}

/// Orthogonal projection of `f` onto the cycle space.
pub fn project_cyclic(g: &Graph, f: &EdgeSignal) -> Result<EdgeSignal> {
    HodgeProjector::new(g)?.project_cyclic(f)
}

/// Orthogonal projection of `f` onto the gradient space.
pub fn project_gradient(g: &Graph, f: &EdgeSignal) -> Result<EdgeSignal> {
    HodgeProjector::new(g)?.project_gradient(f)
}

pub fn hodge_decompose(g: &Graph, f: &EdgeSignal) -> Result<HodgeDecomposition> {
    HodgeProjector::new(g)?.decompose(f)
}

/// Ideal low-pass filter on `L₁`: keeps the components of `f` along
/// eigenvectors with zero eigenvalue and removes the rest.
pub fn ideal_lowpass(g: &Graph, f: &EdgeSignal) -> Result<EdgeSignal> {
    ideal_lowpass_with(g, f, DEFAULT_RANK_TOL)
}

pub fn ideal_lowpass_with(g: &Graph, f: &EdgeSignal, rank_tol: f64) -> Result<EdgeSignal> {
    check_len("edge signal", g.num_edges(), f.len())?;
    let eig = eig_sym(&g.edge_laplacian().to_real())?;
    let threshold = eig.zero_threshold(rank_tol);
    Ok(EdgeSignal::new(eig.apply_spectral(f, |l| {
        if l.abs() <= threshold {
            1.0
        } else {
            0.0
        }
    })))
}

/// Orthonormal basis of the cycle space from `L₁`'s zero-eigenvalue
/// eigenvectors. For diagnostics: the basis is not canonical.
pub fn cycle_basis(g: &Graph) -> Result<Vec<EdgeSignal>> {
    let eig = eig_sym(&g.edge_laplacian().to_real())?;
    Ok((0..eig.len())
        .filter(|&i| eig.is_zero_eigenvalue(i, spectral::DEFAULT_RANK_TOL))
        .map(|i| EdgeSignal::new(eig.vector(i)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn cyclic_triangle() -> Graph {
        Graph::with_orientation(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn path() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    /// Two triangles sharing node 2 plus a pendant edge: two independent cycles.
    fn two_cycles() -> Graph {
        Graph::new(6, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4), (4, 5)]).unwrap()
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(cycle_space_dimension(&triangle()), 1);
        assert_eq!(cycle_space_dimension(&path()), 0);
        assert_eq!(cycle_space_dimension(&two_cycles()), 2);
        assert_eq!(
            spectral_kernel_dimension(&two_cycles(), DEFAULT_RANK_TOL).unwrap(),
            2
        );
        // disconnected: two triangles side by side
        let g = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(cycle_space_dimension(&g), 2);
        assert_eq!(spectral_kernel_dimension(&g, DEFAULT_RANK_TOL).unwrap(), 2);
    }

    #[test]
    fn cyclic_flow_is_preserved() {
        let g = cyclic_triangle();
        let f = EdgeSignal::new(vec![1.0, 1.0, 1.0]);
        assert_eq!(g.incidence_matrix().to_real().mul_vec(&f), vec![0.0; 3]);
        assert_close(&project_cyclic(&g, &f).unwrap(), &f, 1e-14);
        assert_close(&project_gradient(&g, &f).unwrap(), &[0.0; 3], 1e-14);
        assert_close(&ideal_lowpass(&g, &f).unwrap(), &f, 1e-12);
    }

    #[test]
    fn tree_has_no_cyclic_part() {
        let f = EdgeSignal::new(vec![2.0, -7.5]);
        assert_close(&project_cyclic(&path(), &f).unwrap(), &[0.0, 0.0], 1e-14);
        assert_close(&project_gradient(&path(), &f).unwrap(), &f, 1e-14);
        assert_close(&ideal_lowpass(&path(), &f).unwrap(), &[0.0, 0.0], 1e-14);
    }

    #[test]
    fn gradient_flow_is_removed() {
        let g = triangle();
        let f = EdgeSignal::new(
            g.incidence_matrix()
                .to_real()
                .mul_transpose_vec(&[1.0, 0.0, 0.0]),
        );
        assert_close(&project_cyclic(&g, &f).unwrap(), &[0.0; 3], 1e-14);
    }

    #[test]
    fn single_edge_potential() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let d = hodge_decompose(&g, &EdgeSignal::new(vec![5.0])).unwrap();
        assert_close(&d.gradient, &[5.0], 1e-14);
        assert_close(&d.potential, &[-2.5, 2.5], 1e-14);
    }

    #[test]
    fn ideal_lowpass_single_component() {
        // kernel of the default-oriented triangle is span{(1, 1, −1)}/√3
        let g = triangle();
        let f = EdgeSignal::new(vec![1.0, 0.0, 0.0]);
        let expected = [1.0 / 3.0, 1.0 / 3.0, -1.0 / 3.0];
        assert_close(&ideal_lowpass(&g, &f).unwrap(), &expected, 1e-12);
        assert_close(&project_cyclic(&g, &f).unwrap(), &expected, 1e-12);
    }

    #[test]
    fn zero_signal() {
        let d = hodge_decompose(&two_cycles(), &EdgeSignal::zeros(7)).unwrap();
        assert_eq!(d.cyclic_energy(), 0.0);
        assert_eq!(d.gradient_energy(), 0.0);
    }

    #[test]
    fn cycle_basis_spans_kernel() {
        let g = two_cycles();
        let basis = cycle_basis(&g).unwrap();
        assert_eq!(basis.len(), 2);
        let b = g.incidence_matrix().to_real();
        for v in &basis {
            assert!(norm(&b.mul_vec(v)) < 1e-12);
        }
    }

    #[test]
    fn length_mismatch_is_reported() {
        let err = project_cyclic(&triangle(), &EdgeSignal::zeros(2)).unwrap_err();
        assert_eq!(err.code(), "dimension_mismatch");
    }

    #[test]
    fn iterative_node_solver_matches_dense() {
        // ring with chords, large enough to take the CG path
        let n = DENSE_THRESHOLD + 40;
        let mut pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        pairs.extend((0..n).step_by(7).map(|i| (i, (i + n / 3) % n)));
        let g = Graph::new(n, &pairs).unwrap();
        let f: Vec<f64> = (0..g.num_edges())
            .map(|i| ((i * 31) % 17) as f64 - 8.0)
            .collect();
        let p = HodgeProjector::new(&g).unwrap();
        let d = p.decompose(&f).unwrap();
        assert!(d.residual_norm <= 1e-8 * norm(&f));
        let dense = PseudoInverse::new(&g.laplacian().to_real(), DEFAULT_RANK_TOL).unwrap();
        let b = g.incidence_matrix().to_real();
        let grad = b.mul_transpose_vec(&dense.apply(&b.mul_vec(&f)));
        assert_close(&d.gradient, &grad, 1e-8);
    }
}
