//! Laplacian filters on node and edge signals.
//!
//! Two families, each available on any of the three Laplacians:
//!
//! ```text
//! denoise   (I + α M)⁻¹ x        minimizer of ‖x̂ − x‖² + α x̂ᵀ M x̂
//! smooth    (I − μ M)ᵏ x         k explicit diffusion steps
//! ```
//!
//! with `M = L` for node signals, `M = L₁` for flows, and `M = L_LG` for edge
//! signals treated as node data on the line graph. Flow denoising with known
//! sources/sinks solves `(I + α L₁) f̂ = f + α Bᵀ φ`, and the mixed edge filter
//! solves `(I + α L₁ + β L_LG) f̂ = f`.
//!
//! Inverses are never formed; every rational filter is a single SPD solve.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{check_len, Result};
use crate::graph::Graph;
use crate::operator::Operator;
use crate::signal::{EdgeSignal, NodeSignal};
use crate::spectral::{eig_sym, largest_eigenvalue, spd_solve, DEFAULT_REL_TOL};

/// Relative tolerance for the power iteration behind the step-size guard.
pub const POWER_ITERATION_TOL: f64 = 1e-6;
const POWER_ITERATION_MAX: usize = 100_000;
/// Tie tolerance for [`is_lowpass`].
pub const LOWPASS_TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FilterError {
    #[error("parameter {name} must be non-negative, got {value}")]
    NegativeParameter { name: &'static str, value: f64 },
    #[error("step size mu must be positive and finite, got {0}")]
    NonPositiveStep(f64),
    #[error("filter {kind} requires parameter {name}")]
    MissingParameter {
        kind: FilterKind,
        name: &'static str,
    },
    #[error("unknown filter kind {0:?}")]
    UnknownKind(String),
    #[error("unknown operator {0:?} (expected L, L1 or LLG)")]
    UnknownBasis(String),
    #[error(
        "the mixed filter has no frequency response: L1 and L_LG do not commute, \
         so no single eigenbasis diagonalizes it"
    )]
    MixedResponse,
    #[error("filter {kind} is a function of {expected}, not {requested}")]
    BasisMismatch {
        kind: FilterKind,
        expected: Basis,
        requested: Basis,
    },
    #[error("invalid value {value:?} for key {key}")]
    InvalidValue { key: String, value: String },
    #[error("unknown key {0:?} in filter record")]
    UnknownKey(String),
}

impl FilterError {
    pub fn code(&self) -> &'static str {
        match self {
            FilterError::NegativeParameter { .. } => "negative_parameter",
            FilterError::NonPositiveStep(_) => "non_positive_step",
            FilterError::MissingParameter { .. } => "missing_parameter",
            FilterError::UnknownKind(_) => "unknown_filter_kind",
            FilterError::UnknownBasis(_) => "unknown_operator",
            FilterError::MixedResponse => "mixed_filter_response",
            FilterError::BasisMismatch { .. } => "basis_mismatch",
            FilterError::InvalidValue { .. } => "invalid_filter_value",
            FilterError::UnknownKey(_) => "unknown_filter_key",
        }
    }
}

/// Which Laplacian a filter or spectrum refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    /// Graph Laplacian `L` on node signals.
    #[serde(rename = "L")]
    Node,
    /// Edge-Laplacian `L₁` on edge signals.
    #[serde(rename = "L1")]
    Edge,
    /// Line-graph Laplacian `L_LG` on edge signals.
    #[serde(rename = "LLG")]
    LineGraph,
}

impl Basis {
    pub fn operator(self, g: &Graph) -> Operator<f64> {
        match self {
            Basis::Node => g.laplacian().to_real(),
            Basis::Edge => g.edge_laplacian().to_real(),
            Basis::LineGraph => g.line_graph_laplacian().to_real(),
        }
    }

    pub fn dimension(self, g: &Graph) -> usize {
        match self {
            Basis::Node => g.num_nodes(),
            Basis::Edge | Basis::LineGraph => g.num_edges(),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Node => "L",
            Basis::Edge => "L1",
            Basis::LineGraph => "LLG",
        })
    }
}

impl FromStr for Basis {
    type Err = FilterError;
    fn from_str(s: &str) -> Result<Self, FilterError> {
        match s {
            "L" | "l" | "node" => Ok(Basis::Node),
            "L1" | "l1" | "edge" => Ok(Basis::Edge),
            "LLG" | "llg" | "L_LG" | "linegraph" => Ok(Basis::LineGraph),
            other => Err(FilterError::UnknownBasis(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterKind {
    NodeDenoise,
    NodeSmooth,
    FlowDenoise,
    FlowSmooth,
    FlowDenoiseSources,
    Mixed,
    LinegraphDenoise,
    LinegraphSmooth,
}

impl FilterKind {
    pub const ALL: [FilterKind; 8] = [
        FilterKind::NodeDenoise,
        FilterKind::NodeSmooth,
        FilterKind::FlowDenoise,
        FilterKind::FlowSmooth,
        FilterKind::FlowDenoiseSources,
        FilterKind::Mixed,
        FilterKind::LinegraphDenoise,
        FilterKind::LinegraphSmooth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FilterKind::NodeDenoise => "node_denoise",
            FilterKind::NodeSmooth => "node_smooth",
            FilterKind::FlowDenoise => "flow_denoise",
            FilterKind::FlowSmooth => "flow_smooth",
            FilterKind::FlowDenoiseSources => "flow_denoise_sources",
            FilterKind::Mixed => "mixed",
            FilterKind::LinegraphDenoise => "linegraph_denoise",
            FilterKind::LinegraphSmooth => "linegraph_smooth",
        }
    }

    /// Whether the filter acts on node signals (otherwise edge signals).
    pub fn is_node_filter(self) -> bool {
        matches!(self, FilterKind::NodeDenoise | FilterKind::NodeSmooth)
    }

    pub fn is_smoother(self) -> bool {
        matches!(
            self,
            FilterKind::NodeSmooth | FilterKind::FlowSmooth | FilterKind::LinegraphSmooth
        )
    }

    /// The operator whose eigenbasis diagonalizes this filter, if one exists.
    pub fn basis(self) -> Option<Basis> {
        match self {
            FilterKind::NodeDenoise | FilterKind::NodeSmooth => Some(Basis::Node),
            FilterKind::FlowDenoise | FilterKind::FlowSmooth | FilterKind::FlowDenoiseSources => {
                Some(Basis::Edge)
            }
            FilterKind::LinegraphDenoise | FilterKind::LinegraphSmooth => Some(Basis::LineGraph),
            FilterKind::Mixed => None,
        }
    }

    fn uses(self, param: &str) -> bool {
        match param {
            "alpha" => !self.is_smoother(),
            "beta" => self == FilterKind::Mixed,
            "mu" | "k" => self.is_smoother(),
            "phi" => self == FilterKind::FlowDenoiseSources,
            _ => false,
        }
    }
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FilterKind {
    type Err = FilterError;
    fn from_str(s: &str) -> Result<Self, FilterError> {
        FilterKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| FilterError::UnknownKind(s.to_string()))
    }
}

/// Validation note for parameters that were supplied but play no role.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FilterWarning {
    /// `μ ≥ 2/λ_max`: the smoothing iteration is not contractive.
    UnstableStep {
        mu: f64,
        lambda_max: f64,
    },
    IgnoredParameter {
        kind: FilterKind,
        name: String,
    },
}

impl fmt::Display for FilterWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterWarning::UnstableStep { mu, lambda_max } => write!(
                f,
                "unstable_step: mu = {mu} >= 2/lambda_max = {} (lambda_max ~ {lambda_max})",
                2.0 / lambda_max
            ),
            FilterWarning::IgnoredParameter { kind, name } => {
                write!(f, "ignored_parameter: {name} has no effect on {kind}")
            }
        }
    }
}

/// A filter together with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    pub kind: FilterKind,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub mu: Option<f64>,
    pub k: Option<u32>,
    pub potential: Option<NodeSignal>,
}

impl FilterSpec {
    pub fn new(kind: FilterKind) -> Self {
        FilterSpec {
            kind,
            alpha: None,
            beta: None,
            mu: None,
            k: None,
            potential: None,
        }
    }

    pub fn denoise(kind: FilterKind, alpha: f64) -> Self {
        FilterSpec {
            alpha: Some(alpha),
            ..Self::new(kind)
        }
    }

    pub fn smooth(kind: FilterKind, mu: f64, k: u32) -> Self {
        FilterSpec {
            mu: Some(mu),
            k: Some(k),
            ..Self::new(kind)
        }
    }

    pub fn mixed(alpha: f64, beta: f64) -> Self {
        FilterSpec {
            alpha: Some(alpha),
            beta: Some(beta),
            ..Self::new(FilterKind::Mixed)
        }
    }

    pub fn flow_denoise_sources(alpha: f64, potential: NodeSignal) -> Self {
        FilterSpec {
            alpha: Some(alpha),
            potential: Some(potential),
            ..Self::new(FilterKind::FlowDenoiseSources)
        }
    }

    fn require(&self, name: &'static str, v: Option<f64>) -> Result<f64, FilterError> {
        v.ok_or(FilterError::MissingParameter {
            kind: self.kind,
            name,
        })
    }

    pub fn alpha(&self) -> Result<f64, FilterError> {
        let a = self.require("alpha", self.alpha)?;
        non_negative("alpha", a)
    }

    /// β defaults to 0 for the mixed filter.
    pub fn beta(&self) -> Result<f64, FilterError> {
        non_negative("beta", self.beta.unwrap_or(0.0))
    }

    pub fn mu(&self) -> Result<f64, FilterError> {
        let mu = self.require("mu", self.mu)?;
        positive_step(mu)
    }

    pub fn steps(&self) -> Result<u32, FilterError> {
        self.k.ok_or(FilterError::MissingParameter {
            kind: self.kind,
            name: "k",
        })
    }

    /// Checks the parameters relevant to `kind`; returns notes for supplied
    /// parameters the kind ignores.
    pub fn validate(&self) -> Result<Vec<FilterWarning>, FilterError> {
        if self.kind.uses("alpha") {
            self.alpha()?;
        }
        if self.kind.uses("beta") {
            self.beta()?;
        }
        if self.kind.uses("mu") {
            self.mu()?;
            self.steps()?;
        }
        if self.kind.uses("phi") && self.potential.is_none() {
            return Err(FilterError::MissingParameter {
                kind: self.kind,
                name: "phi",
            });
        }
        let supplied = [
            ("alpha", self.alpha.is_some()),
            ("beta", self.beta.is_some()),
            ("mu", self.mu.is_some()),
            ("k", self.k.is_some()),
            ("phi", self.potential.is_some()),
        ];
        Ok(supplied
            .into_iter()
            .filter(|&(name, present)| present && !self.kind.uses(name))
            .map(|(name, _)| FilterWarning::IgnoredParameter {
                kind: self.kind,
                name: name.to_string(),
            })
            .collect())
    }

    /// Reads a flat `key = value` record. The `phi` key names a file and is
    /// returned separately for the caller to load.
    pub fn from_record(
        record: &BTreeMap<String, String>,
    ) -> Result<(Self, Option<String>), FilterError> {
        let kind_str = record.get("kind").ok_or(FilterError::MissingParameter {
            kind: FilterKind::FlowDenoise,
            name: "kind",
        })?;
        let mut spec = FilterSpec::new(kind_str.parse()?);
        let mut phi_path = None;
        for (key, value) in record {
            let bad = || FilterError::InvalidValue {
                key: key.clone(),
                value: value.clone(),
            };
            match key.as_str() {
                "kind" => {}
                "alpha" => spec.alpha = Some(value.parse().map_err(|_| bad())?),
                "beta" => spec.beta = Some(value.parse().map_err(|_| bad())?),
                "mu" => spec.mu = Some(value.parse().map_err(|_| bad())?),
                "k" => spec.k = Some(value.parse().map_err(|_| bad())?),
                "phi" => phi_path = Some(value.clone()),
                other => return Err(FilterError::UnknownKey(other.to_string())),
            }
        }
        Ok((spec, phi_path))
    }

    /// Flat `key = value` record; the potential is not included.
    pub fn to_record(&self) -> String {
        let mut s = format!("kind = {}\n", self.kind);
        if let Some(a) = self.alpha {
            s.push_str(&format!("alpha = {a}\n"));
        }
        if let Some(b) = self.beta {
            s.push_str(&format!("beta = {b}\n"));
        }
        if let Some(mu) = self.mu {
            s.push_str(&format!("mu = {mu}\n"));
        }
        if let Some(k) = self.k {
            s.push_str(&format!("k = {k}\n"));
        }
        s
    }
}

impl fmt::Display for FilterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("mu", self.mu)] {
            if let Some(v) = v {
                write!(f, " {name}={v}")?;
            }
        }
        if let Some(k) = self.k {
            write!(f, " k={k}")?;
        }
        Ok(())
    }
}

fn non_negative(name: &'static str, v: f64) -> Result<f64, FilterError> {
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(FilterError::NegativeParameter { name, value: v })
    }
}

fn positive_step(mu: f64) -> Result<f64, FilterError> {
    if mu > 0.0 && mu.is_finite() {
        Ok(mu)
    } else {
        Err(FilterError::NonPositiveStep(mu))
    }
}

/// A filtered signal plus any step-size warning.
#[derive(Debug, Clone, PartialEq)]
pub struct Smoothed<S> {
    pub signal: S,
    pub warning: Option<FilterWarning>,
}

/// `(I + Σ cᵢ Mᵢ)⁻¹ x`. Returns `x` unchanged when every coefficient is zero.
pub fn regularized_solve(x: &[f64], terms: &[(f64, &Operator<f64>)]) -> Result<Vec<f64>> {
    if terms.iter().all(|&(c, _)| c == 0.0) {
        return Ok(x.to_vec());
    }
    let m = Operator::identity_plus(x.len(), terms);
    Ok(spd_solve(&m, x, DEFAULT_REL_TOL)?)
}

/// `(I − μ M)ᵏ x` by `k` sparse products, with a warning attached when
/// `μ ≥ 2/λ_max(M)`.
pub fn polynomial_smooth(
    op: &Operator<f64>,
    x: &[f64],
    mu: f64,
    k: u32,
) -> Result<Smoothed<Vec<f64>>> {
    let mu = positive_step(mu)?;
    let mut cur = x.to_vec();
    if k == 0 {
        return Ok(Smoothed {
            signal: cur,
            warning: None,
        });
    }
    let lambda_max = largest_eigenvalue(op, POWER_ITERATION_TOL, POWER_ITERATION_MAX);
    let warning = (lambda_max > 0.0 && mu >= 2.0 / lambda_max)
        .then_some(FilterWarning::UnstableStep { mu, lambda_max });
    let mut next = vec![0.0; cur.len()];
    for _ in 0..k {
        op.mul_vec_into(&cur, &mut next);
        for (c, n) in cur.iter_mut().zip(&next) {
            *c -= mu * n;
        }
    }
    Ok(Smoothed {
        signal: cur,
        warning,
    })
}

/// Node denoising `(I + α L)⁻¹ y`.
pub fn node_denoise(g: &Graph, y: &NodeSignal, alpha: f64) -> Result<NodeSignal> {
    check_len("node signal", g.num_nodes(), y.len())?;
    let alpha = non_negative("alpha", alpha)?;
    let l = g.laplacian().to_real();
    Ok(NodeSignal::new(regularized_solve(y, &[(alpha, &l)])?))
}

/// Node smoothing `(I − μ L)ᵏ y`.
pub fn node_smooth(g: &Graph, y: &NodeSignal, mu: f64, k: u32) -> Result<Smoothed<NodeSignal>> {
    check_len("node signal", g.num_nodes(), y.len())?;
    let out = polynomial_smooth(&g.laplacian().to_real(), y, mu, k)?;
    Ok(Smoothed {
        signal: NodeSignal::new(out.signal),
        warning: out.warning,
    })
}

/// Flow denoising `(I + α L₁)⁻¹ f`.
pub fn flow_denoise(g: &Graph, f: &EdgeSignal, alpha: f64) -> Result<EdgeSignal> {
    check_len("edge signal", g.num_edges(), f.len())?;
    let alpha = non_negative("alpha", alpha)?;
    let l1 = g.edge_laplacian().to_real();
    Ok(EdgeSignal::new(regularized_solve(f, &[(alpha, &l1)])?))
}

/// Flow smoothing `(I − μ L₁)ᵏ f`.
pub fn flow_smooth(g: &Graph, f: &EdgeSignal, mu: f64, k: u32) -> Result<Smoothed<EdgeSignal>> {
    check_len("edge signal", g.num_edges(), f.len())?;
    let out = polynomial_smooth(&g.edge_laplacian().to_real(), f, mu, k)?;
    Ok(Smoothed {
        signal: EdgeSignal::new(out.signal),
        warning: out.warning,
    })
}

/// Flow denoising with known divergence `φ`: `(I + α L₁)⁻¹ (f + α Bᵀ φ)`,
/// the minimizer of `‖f̂ − f‖² + α ‖B f̂ − φ‖²`.
pub fn flow_denoise_sources(
    g: &Graph,
    f: &EdgeSignal,
    alpha: f64,
    phi: &NodeSignal,
) -> Result<EdgeSignal> {
    check_len("edge signal", g.num_edges(), f.len())?;
    check_len("potential", g.num_nodes(), phi.len())?;
    let alpha = non_negative("alpha", alpha)?;
    let b = g.incidence_matrix().to_real();
    let bt_phi = b.mul_transpose_vec(phi);
    let rhs: Vec<f64> = f
        .iter()
        .zip(&bt_phi)
        .map(|(fi, si)| fi + alpha * si)
        .collect();
    let l1 = g.edge_laplacian().to_real();
    Ok(EdgeSignal::new(regularized_solve(&rhs, &[(alpha, &l1)])?))
}

/// Mixed edge filter `(I + α L₁ + β L_LG)⁻¹ f`.
pub fn mixed_filter(g: &Graph, f: &EdgeSignal, alpha: f64, beta: f64) -> Result<EdgeSignal> {
    check_len("edge signal", g.num_edges(), f.len())?;
    let alpha = non_negative("alpha", alpha)?;
    let beta = non_negative("beta", beta)?;
    let l1 = g.edge_laplacian().to_real();
    let llg = g.line_graph_laplacian().to_real();
    Ok(EdgeSignal::new(regularized_solve(
        f,
        &[(alpha, &l1), (beta, &llg)],
    )?))
}

/// Line-graph denoising `(I + α L_LG)⁻¹ f`: node denoising on the line graph.
pub fn linegraph_denoise(g: &Graph, f: &EdgeSignal, alpha: f64) -> Result<EdgeSignal> {
    check_len("edge signal", g.num_edges(), f.len())?;
    let alpha = non_negative("alpha", alpha)?;
    let llg = g.line_graph_laplacian().to_real();
    Ok(EdgeSignal::new(regularized_solve(f, &[(alpha, &llg)])?))
}

/// Line-graph smoothing `(I − μ L_LG)ᵏ f`.
pub fn linegraph_smooth(
    g: &Graph,
    f: &EdgeSignal,
    mu: f64,
    k: u32,
) -> Result<Smoothed<EdgeSignal>> {
    check_len("edge signal", g.num_edges(), f.len())?;
    let out = polynomial_smooth(&g.line_graph_laplacian().to_real(), f, mu, k)?;
    Ok(Smoothed {
        signal: EdgeSignal::new(out.signal),
        warning: out.warning,
    })
}

/// Output of [`apply_filter`].
#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutput {
    pub values: Vec<f64>,
    pub warnings: Vec<FilterWarning>,
}

/// Applies any filter described by `spec`. `input` is a node signal for the
/// node filters and an edge signal otherwise.
pub fn apply_filter(g: &Graph, spec: &FilterSpec, input: &[f64]) -> Result<FilterOutput> {
    let mut warnings = spec.validate()?;
    let values = match spec.kind {
        FilterKind::NodeDenoise => {
            node_denoise(g, &NodeSignal::from(input.to_vec()), spec.alpha()?)?.into_inner()
        }
        FilterKind::FlowDenoise => {
            flow_denoise(g, &EdgeSignal::from(input.to_vec()), spec.alpha()?)?.into_inner()
        }
        FilterKind::LinegraphDenoise => {
            linegraph_denoise(g, &EdgeSignal::from(input.to_vec()), spec.alpha()?)?.into_inner()
        }
        FilterKind::Mixed => mixed_filter(
            g,
            &EdgeSignal::from(input.to_vec()),
            spec.alpha()?,
            spec.beta()?,
        )?
        .into_inner(),
        FilterKind::FlowDenoiseSources => {
            let phi = spec
                .potential
                .as_ref()
                .ok_or(FilterError::MissingParameter {
                    kind: spec.kind,
                    name: "phi",
                })?;
            flow_denoise_sources(g, &EdgeSignal::from(input.to_vec()), spec.alpha()?, phi)?
                .into_inner()
        }
        FilterKind::NodeSmooth | FilterKind::FlowSmooth | FilterKind::LinegraphSmooth => {
            let basis = spec.kind.basis().expect("smoothers have a basis");
            check_len(
                if basis == Basis::Node {
                    "node signal"
                } else {
                    "edge signal"
                },
                basis.dimension(g),
                input.len(),
            )?;
            let out = polynomial_smooth(&basis.operator(g), input, spec.mu()?, spec.steps()?)?;
            warnings.extend(out.warning);
            out.signal
        }
    };
    Ok(FilterOutput { values, warnings })
}

/// Filter response sampled at the ascending eigenvalues of one operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyResponse {
    pub basis: Basis,
    pub eigenvalues: Vec<f64>,
    pub values: Vec<f64>,
}

/// Scalar response `h(λ)` of a filter: `1/(1 + αλ)` for denoisers and
/// `(1 − μλ)ᵏ` for smoothers.
pub fn response_function(spec: &FilterSpec) -> Result<impl Fn(f64) -> f64, FilterError> {
    enum Shape {
        Rational(f64),
        Power(f64, i32),
    }
    let shape = match spec.kind {
        FilterKind::Mixed => return Err(FilterError::MixedResponse),
        k if k.is_smoother() => Shape::Power(spec.mu()?, spec.steps()? as i32),
        _ => Shape::Rational(spec.alpha()?),
    };
    Ok(move |l: f64| match shape {
        Shape::Rational(a) => 1.0 / (1.0 + a * l),
        Shape::Power(mu, k) => (1.0 - mu * l).powi(k),
    })
}

/// `h̃ = diag(Vᵀ H V)` over the eigenbasis of `basis`.
///
/// For the source-aware denoiser this is the response of its linear part.
pub fn frequency_response(g: &Graph, spec: &FilterSpec, basis: Basis) -> Result<FrequencyResponse> {
    let h = response_function(spec)?;
    let expected = spec.kind.basis().ok_or(FilterError::MixedResponse)?;
    if expected != basis {
        return Err(FilterError::BasisMismatch {
            kind: spec.kind,
            expected,
            requested: basis,
        }
        .into());
    }
    let eig = eig_sym(&basis.operator(g))?;
    let values = eig.eigenvalues.iter().map(|&l| h(l)).collect();
    Ok(FrequencyResponse {
        basis,
        eigenvalues: eig.eigenvalues,
        values,
    })
}

/// True when the response values are non-increasing, with ties allowed up
/// to [`LOWPASS_TIE_TOL`].
pub fn is_lowpass(h: &FrequencyResponse) -> bool {
    is_non_increasing(&h.values)
}

pub fn is_non_increasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] + LOWPASS_TIE_TOL)
}
