//! Finite-dimensional replays of the nested-projection proofs.

mod chain;
mod replay;

pub use replay::{replay, replay_group, replay_with, FactorSpectra, ReplayInput, ReplayOptions, REPLAY_CONSTANT};

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{inner, GridFunction, GridSpec};
use crate::freq::Freq;
use crate::linalg::{svd_basis, RANK_TOL};

/// Relative tolerance for identities and residuals in a trace.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Relative tolerance for coefficients that must vanish by hypothesis.
pub const HYPOTHESIS_TOL: f64 = 1e-10;

/// f = g·h̄ with |g| = |h| pointwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Factorization {
    pub g: GridFunction,
    pub h: GridFunction,
}

/// h = √|f|, g = f/√|f| (both zero where f vanishes).
pub fn factorize(f: &GridFunction) -> Factorization {
    let mut g = f.clone();
    let mut h = f.clone();
    for ((gv, hv), fv) in g.samples.iter_mut().zip(h.samples.iter_mut()).zip(&f.samples) {
        let r = fv.norm();
        if r == 0.0 {
            *gv = Complex64::new(0.0, 0.0);
            *hv = Complex64::new(0.0, 0.0);
        } else {
            let s = libm::sqrt(r);
            *hv = Complex64::new(s, 0.0);
            *gv = fv / s;
        }
    }
    Factorization { g, h }
}

impl Factorization {
    /// Validates |g| = |h| and g·h̄ = f to 1e−12 relative to max |f|.
    pub fn new(f: &GridFunction, g: GridFunction, h: GridFunction) -> Result<Self> {
        if g.spec != f.spec || h.spec != f.spec {
            return Err(Error::SpecMismatch);
        }
        let scale = f.max_abs().max(f64::MIN_POSITIVE);
        for i in 0..f.samples.len() {
            let (a, b) = (g.samples[i], h.samples[i]);
            if (a.norm() - b.norm()).abs() > 1e-12 * libm::sqrt(scale)
                || (a * b.conj() - f.samples[i]).norm() > 1e-12 * scale
            {
                return Err(Error::Invalid(alloc::format!("factorization fails at grid point {i}")));
            }
        }
        Ok(Factorization { g, h })
    }

    pub fn max_residuals(&self, f: &GridFunction) -> (f64, f64) {
        let mut modulus = 0.0f64;
        let mut product = 0.0f64;
        for i in 0..f.samples.len() {
            let (a, b) = (self.g.samples[i], self.h.samples[i]);
            modulus = modulus.max((a.norm() - b.norm()).abs());
            product = product.max((a * b.conj() - f.samples[i]).norm());
        }
        (modulus, product)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Carrier {
    Unit,
    Function,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubspaceSource {
    pub freqs: Vec<Freq>,
    pub carrier: Carrier,
}

/// An orthonormal basis of V(D) with its defining data.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    pub spec: GridSpec,
    pub basis: Vec<GridFunction>,
    pub source: SubspaceSource,
}

impl Subspace {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// Orthonormal basis of span{z^n·carrier : n ∈ D} by SVD with relative threshold 1e−10.
pub fn span_subspace(d: &[Freq], carrier: Option<&GridFunction>, spec: &GridSpec) -> Result<Subspace> {
    for n in d {
        spec.check(n)?;
    }
    if let Some(c) = carrier {
        if &c.spec != spec {
            return Err(Error::SpecMismatch);
        }
    }
    let gens: Vec<Vec<Complex64>> = d
        .iter()
        .map(|n| {
            let chi = spec.character(n);
            match carrier {
                Some(c) => chi.iter().zip(&c.samples).map(|(a, b)| a * b).collect(),
                None => chi,
            }
        })
        .collect();
    let basis = svd_basis(spec.total(), &gens, RANK_TOL)
        .into_iter()
        .map(|samples| GridFunction { spec: spec.clone(), samples })
        .collect();
    Ok(Subspace {
        spec: spec.clone(),
        basis,
        source: SubspaceSource {
            freqs: d.to_vec(),
            carrier: if carrier.is_some() { Carrier::Function } else { Carrier::Unit },
        },
    })
}

/// Orthogonal projection of `v` onto `s`.
pub fn project(v: &GridFunction, s: &Subspace) -> Result<GridFunction> {
    if v.spec != s.spec {
        return Err(Error::SpecMismatch);
    }
    let mut out = GridFunction::zeros(&v.spec);
    for q in &s.basis {
        let c = inner(&v.samples, &q.samples);
        for (o, x) in out.samples.iter_mut().zip(&q.samples) {
            *o += c * x;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReplayMode {
    /// Decreasing nest L_j of spans of z^n·h.
    New,
    /// Spans of bare characters with an analytic factorization.
    Classic,
    /// Increasing nest M_j = span{z^n·h : −k_j ≤ n < 0}.
    Complementary,
}

/// Explicit or computed D_j family for new mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DFamily {
    /// D_j from the Schur construction, truncated to the window.
    Schur,
    /// D_1, …, D_J as given.
    Explicit(Vec<Vec<i64>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub j: usize,
    pub k: Freq,
    pub a: Complex64,
    pub b: Complex64,
    pub target: Complex64,
    pub residual: f64,
    pub b_two_projection: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralChecks {
    /// k_j − k_{j+1} ∈ D_j.
    pub membership: bool,
    /// D_{j+1} ⊆ D_j.
    pub antinesting: bool,
    /// D_{j−1} + k_j ⊆ D_j + k_{j+1}, checked where the image stays in the truncation.
    pub image_nesting: bool,
}

impl StructuralChecks {
    pub fn all(&self) -> bool {
        self.membership && self.antinesting && self.image_nesting
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub membership: Vec<f64>,
    pub intertwining: Vec<f64>,
    pub orthogonality: Vec<f64>,
    pub nesting_p: Vec<f64>,
    pub nesting_q: Vec<f64>,
    pub structural: Option<StructuralChecks>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

/// Everything a replay computed, with the pass/fail verdict of each check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub mode: ReplayMode,
    pub steps: Vec<StepRecord>,
    pub sum_a_sq: f64,
    pub sum_b_sq: f64,
    pub g_norm_sq: f64,
    pub h_norm_sq: f64,
    pub f_norm_l2: f64,
    pub norm_l1: f64,
    pub coeff_norm: f64,
    pub certified_constant: f64,
    pub final_ratio: f64,
    pub ranks: Vec<usize>,
    pub diagnostics: Diagnostics,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl ProofTrace {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}
