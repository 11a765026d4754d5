//! Synthetic flows: harmonic, gradient, and line-graph-smooth components,
//! their mixtures, and additive white Gaussian noise.
//!
//! Randomness comes from ChaCha8 keyed by the 64-bit seed (`seed_from_u64`),
//! with one ChaCha stream per component so sub-seeds never collide. Normal
//! variates use the ziggurat sampler of `rand_distr::StandardNormal`. Both are
//! specified independently of platform and word size, so outputs are
//! reproducible bit-for-bit.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Result;
use crate::graph::Graph;
use crate::hodge::{cycle_space_dimension, HodgeProjector};
use crate::linalg::normalized;
use crate::signal::EdgeSignal;
use crate::spectral::{eig_sym, EigenDecomposition};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowgenError {
    #[error("graph has a trivial cycle space; no harmonic flow exists")]
    TrivialCycleSpace,
    #[error("graph has no edges")]
    NoEdges,
    #[error("cutoff {cutoff} must be between 1 and the number of edges {num_edges}")]
    InvalidCutoff { cutoff: usize, num_edges: usize },
    #[error("invalid recipe: {0}")]
    InvalidRecipe(String),
    #[error("generated component is numerically zero")]
    DegenerateComponent,
}

impl FlowgenError {
    pub fn code(&self) -> &'static str {
        match self {
            FlowgenError::TrivialCycleSpace => "trivial_cycle_space",
            FlowgenError::NoEdges => "no_edges",
            FlowgenError::InvalidCutoff { .. } => "invalid_cutoff",
            FlowgenError::InvalidRecipe(_) => "invalid_recipe",
            FlowgenError::DegenerateComponent => "degenerate_component",
        }
    }
}

/// Stream ids for the ChaCha sub-generators.
mod stream {
    pub const HARMONIC: u64 = 1;
    pub const GRADIENT: u64 = 2;
    pub const LINEGRAPH: u64 = 3;
    pub const NOISE: u64 = 4;
}

/// Seeded generator on a given stream.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn standard_normal(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

/// Parameters for [`synthesize`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowRecipe {
    pub harmonic_weight: f64,
    pub gradient_weight: f64,
    pub linegraph_weight: f64,
    pub noise_sigma: f64,
    pub seed: u64,
    /// `‖f0‖₂`; the weighted mixture is normalized to unit norm first.
    pub amplitude: f64,
    /// Number of low line-graph eigenvectors mixed into the smooth component;
    /// `None` means `⌈E/10⌉`.
    pub cutoff: Option<usize>,
}

impl Default for FlowRecipe {
    fn default() -> Self {
        FlowRecipe {
            harmonic_weight: 1.0,
            gradient_weight: 0.0,
            linegraph_weight: 0.0,
            noise_sigma: 0.0,
            seed: 0,
            amplitude: 1.0,
            cutoff: None,
        }
    }
}

impl FlowRecipe {
    pub fn validate(&self) -> Result<(), FlowgenError> {
        let weights = [
            self.harmonic_weight,
            self.gradient_weight,
            self.linegraph_weight,
        ];
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(FlowgenError::InvalidRecipe(
                "weights must be finite and non-negative".into(),
            ));
        }
        if weights.iter().all(|&w| w == 0.0) {
            return Err(FlowgenError::InvalidRecipe(
                "at least one weight must be positive".into(),
            ));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(FlowgenError::InvalidRecipe(
                "noise_sigma must be non-negative".into(),
            ));
        }
        if !(self.amplitude.is_finite() && self.amplitude > 0.0) {
            return Err(FlowgenError::InvalidRecipe(
                "amplitude must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        FlowRecipe {
            seed,
            ..self.clone()
        }
    }

    pub fn default_cutoff(num_edges: usize) -> usize {
        num_edges.div_ceil(10).max(1)
    }

    pub fn to_record(&self) -> String {
        let mut s = format!(
            "harmonic_weight = {}\ngradient_weight = {}\nlinegraph_weight = {}\nnoise_sigma = {}\nseed = {}\namplitude = {}\n",
            self.harmonic_weight, self.gradient_weight, self.linegraph_weight, self.noise_sigma, self.seed, self.amplitude
        );
        if let Some(c) = self.cutoff {
            s.push_str(&format!("cutoff = {c}\n"));
        }
        s
    }

    /// Reads a flat `key = value` record; missing keys keep their defaults.
    pub fn from_record(record: &BTreeMap<String, String>) -> Result<Self, FlowgenError> {
        let mut r = FlowRecipe::default();
        for (key, value) in record {
            let bad = || FlowgenError::InvalidRecipe(format!("invalid value {value:?} for {key}"));
            match key.as_str() {
                "harmonic_weight" => r.harmonic_weight = value.parse().map_err(|_| bad())?,
                "gradient_weight" => r.gradient_weight = value.parse().map_err(|_| bad())?,
                "linegraph_weight" => r.linegraph_weight = value.parse().map_err(|_| bad())?,
                "noise_sigma" => r.noise_sigma = value.parse().map_err(|_| bad())?,
                "seed" => r.seed = value.parse().map_err(|_| bad())?,
                "amplitude" => r.amplitude = value.parse().map_err(|_| bad())?,
                "cutoff" => r.cutoff = Some(value.parse().map_err(|_| bad())?),
                other => {
                    return Err(FlowgenError::InvalidRecipe(format!(
                        "unknown key {other:?}"
                    )))
                }
            }
        }
        Ok(r)
    }
}

/// Per-graph state shared by repeated generation: the cycle projector and
/// the line-graph eigenbasis, each computed on first use.
pub struct FlowGenerator<'g> {
    graph: &'g Graph,
    projector: Option<HodgeProjector>,
    linegraph_eigen: Option<EigenDecomposition>,
}

impl<'g> FlowGenerator<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        FlowGenerator {
            graph,
            projector: None,
            linegraph_eigen: None,
        }
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    fn projector(&mut self) -> Result<&HodgeProjector> {
        if self.projector.is_none() {
            self.projector = Some(HodgeProjector::new(self.graph)?);
        }
        Ok(self.projector.as_ref().expect("initialized above"))
    }

    fn linegraph_eigen(&mut self) -> Result<&EigenDecomposition> {
        if self.linegraph_eigen.is_none() {
            self.linegraph_eigen = Some(eig_sym(&self.graph.line_graph_laplacian().to_real())?);
        }
        Ok(self.linegraph_eigen.as_ref().expect("initialized above"))
    }

    /// Unit-norm projection of a standard-normal edge vector onto the cycle space.
    pub fn harmonic(&mut self, seed: u64) -> Result<EdgeSignal> {
        if cycle_space_dimension(self.graph) == 0 {
            return Err(FlowgenError::TrivialCycleSpace.into());
        }
        let raw = standard_normal(&mut rng(seed, stream::HARMONIC), self.graph.num_edges());
        let cyc = self.projector()?.project_cyclic(&raw)?;
        Ok(EdgeSignal::new(
            normalized(&cyc).ok_or(FlowgenError::DegenerateComponent)?,
        ))
    }

    /// Unit-norm `Bᵀ φ` for a standard-normal potential `φ`.
    pub fn gradient(&mut self, seed: u64) -> Result<EdgeSignal> {
        if self.graph.num_edges() == 0 {
            return Err(FlowgenError::NoEdges.into());
        }
        let phi = standard_normal(&mut rng(seed, stream::GRADIENT), self.graph.num_nodes());
        let f = self
            .graph
            .incidence_matrix()
            .to_real()
            .mul_transpose_vec(&phi);
        Ok(EdgeSignal::new(
            normalized(&f).ok_or(FlowgenError::DegenerateComponent)?,
        ))
    }

    /// Unit-norm random combination of the `cutoff` lowest-frequency
    /// eigenvectors of `L_LG`.
    pub fn linegraph_smooth(&mut self, seed: u64, cutoff: usize) -> Result<EdgeSignal> {
        let e = self.graph.num_edges();
        if cutoff == 0 || cutoff > e {
            return Err(FlowgenError::InvalidCutoff {
                cutoff,
                num_edges: e,
            }
            .into());
        }
        let coeffs = standard_normal(&mut rng(seed, stream::LINEGRAPH), cutoff);
        let eig = self.linegraph_eigen()?;
        let mut full = vec![0.0; e];
        full[..cutoff].copy_from_slice(&coeffs);
        let f = eig.synthesize(&full);
        Ok(EdgeSignal::new(
            normalized(&f).ok_or(FlowgenError::DegenerateComponent)?,
        ))
    }

    /// `(f0, f)` for a recipe: `f0` is the weighted mixture of unit
    /// components, rescaled to norm `amplitude`; `f = f0 + ε`.
    pub fn synthesize(&mut self, recipe: &FlowRecipe) -> Result<(EdgeSignal, EdgeSignal)> {
        recipe.validate()?;
        let e = self.graph.num_edges();
        let mut mix = vec![0.0; e];
        if recipe.harmonic_weight > 0.0 {
            let h = self.harmonic(recipe.seed)?;
            crate::linalg::axpy(recipe.harmonic_weight, &h, &mut mix);
        }
        if recipe.gradient_weight > 0.0 {
            let g = self.gradient(recipe.seed)?;
            crate::linalg::axpy(recipe.gradient_weight, &g, &mut mix);
        }
        if recipe.linegraph_weight > 0.0 {
            let cutoff = recipe
                .cutoff
                .unwrap_or_else(|| FlowRecipe::default_cutoff(e));
            let l = self.linegraph_smooth(recipe.seed, cutoff)?;
            crate::linalg::axpy(recipe.linegraph_weight, &l, &mut mix);
        }
        let unit = normalized(&mix).ok_or(FlowgenError::DegenerateComponent)?;
        let f0 = EdgeSignal::new(unit.into_iter().map(|v| v * recipe.amplitude).collect());
        let f = add_gaussian_noise(&f0, recipe.noise_sigma, recipe.seed);
        Ok((f0, f))
    }
}

pub fn random_harmonic_flow(g: &Graph, seed: u64) -> Result<EdgeSignal> {
    FlowGenerator::new(g).harmonic(seed)
}

pub fn random_gradient_flow(g: &Graph, seed: u64) -> Result<EdgeSignal> {
    FlowGenerator::new(g).gradient(seed)
}

pub fn random_linegraph_smooth_flow(g: &Graph, seed: u64, cutoff: usize) -> Result<EdgeSignal> {
    FlowGenerator::new(g).linegraph_smooth(seed, cutoff)
}

/// i.i.d. white noise samples `N(0, σ²)`.
pub fn gaussian_noise(len: usize, sigma: f64, seed: u64) -> Vec<f64> {
    let mut r = rng(seed, stream::NOISE);
    (0..len)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut r);
            sigma * z
        })
        .collect()
}

/// `f + ε` with `ε ~ N(0, σ² I)`. With `σ = 0` returns `f` exactly.
pub fn add_gaussian_noise(f: &EdgeSignal, sigma: f64, seed: u64) -> EdgeSignal {
    if sigma == 0.0 {
        return f.clone();
    }
    let eps = gaussian_noise(f.len(), sigma, seed);
    f.iter().zip(eps).map(|(a, b)| a + b).collect()
}

pub fn synthesize(g: &Graph, recipe: &FlowRecipe) -> Result<(EdgeSignal, EdgeSignal)> {
    FlowGenerator::new(g).synthesize(recipe)
}
