//! Measures, Riesz convolution, the measure inequality chain and the product-group lift.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SVD};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    is_extremely_lacunary, is_strongly_lacunary, is_strongly_lacunary_ordered, riesz_support, s_set,
    satisfies_schur_conditions, schur_bounded, schur_set_via_gaps, ConeOrder, ExtremeLacunarity,
};
use crate::error::{Error, Result};
use crate::fourier::{riesz_expansion, GridFunction, GridSpec, Spectrum};
use crate::freq::{Enumeration, Freq, Lattice, Window};
use crate::inequality::{stream_rng, KSource, CEILING_TOL};
use crate::proofkit::{replay, replay_group, DFamily, ReplayMode};

/// Slack on every link of the chain.
pub const LINK_TOL: f64 = 1e-9;
/// Largest vanishing-constraint residual accepted for atomic instances, relative to ‖μ‖.
pub const ATOMIC_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    /// Location in (−π, π]^d.
    pub at: Vec<f64>,
    pub mass: Complex64,
}

/// A finite atomic measure or a density on a grid (dμ = f·uniform).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Measure {
    Atomic { atoms: Vec<Atom> },
    Density { grid: GridSpec, spectrum: Spectrum },
}

impl Measure {
    pub fn dim(&self) -> usize {
        match self {
            Measure::Atomic { atoms } => atoms.first().map_or(1, |a| a.at.len()),
            Measure::Density { grid, .. } => grid.dim(),
        }
    }

    pub fn density(&self) -> Result<Option<GridFunction>> {
        match self {
            Measure::Atomic { .. } => Ok(None),
            Measure::Density { grid, spectrum } => spectrum.synth(grid).map(Some),
        }
    }

    /// ‖μ‖: Σ|mass| or norm_l1 of the density.
    pub fn total_variation(&self) -> Result<f64> {
        match self {
            Measure::Atomic { atoms } => Ok(atoms.iter().map(|a| a.mass.norm()).sum()),
            Measure::Density { grid, spectrum } => Ok(spectrum.synth(grid)?.norm_l1()),
        }
    }
}

/// μ̂(n) = ∫ e^{−in·x} dμ(x).
pub fn measure_hat(mu: &Measure, n: &Freq) -> Result<Complex64> {
    match mu {
        Measure::Atomic { atoms } => {
            let mut s = Complex64::new(0.0, 0.0);
            for a in atoms {
                if a.at.len() != n.dim() {
                    return Err(Error::DimensionMismatch { expected: a.at.len(), found: n.dim() });
                }
                let phase: f64 = a.at.iter().zip(n.coords()).map(|(x, &k)| x * k as f64).sum();
                s += a.mass * Complex64::from_polar(1.0, -phase);
            }
            Ok(s)
        }
        Measure::Density { grid, spectrum } => {
            grid.check(n)?;
            Ok(spectrum.get(n))
        }
    }
}

/// Spectrum of f_K = μ * R_K: n ↦ μ̂(n)·c(n) on Riesz(K).
pub fn riesz_convolve(mu: &Measure, k: &[Freq], spec: &GridSpec) -> Result<Spectrum> {
    let c = riesz_expansion(k)?;
    let mut s = Spectrum::new(spec.dim());
    for (n, d) in &c.terms {
        spec.check(n)?;
        s.insert(n.clone(), measure_hat(mu, n)? * d.to_f64());
    }
    Ok(s)
}

/// Coefficient bound |ε_i| for Schur sets of unordered enumerations, where no finite bound is exact.
pub const SCHUR_PROXY_BOUND: i64 = 3;

/// Hypothesis on μ̂ for the measure chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureHypothesis {
    /// Vanishing on Schur((γ_j)) ∩ Riesz(K), K increasing and strongly lacunary.
    SchurRiesz,
    /// Vanishing on Schur((γ_j)).
    Schur,
    /// Vanishing on S((γ_j)), any enumeration; certified through the lift.
    S,
    /// Vanishing on the strictly negative cone of a total order.
    NegativeCone,
}

/// The set the hypothesis constrains, restricted to Riesz(K) (the only frequencies the chain sees).
pub fn hypothesis_set(h: &MeasureHypothesis, k: &[Freq], order: Option<&ConeOrder>) -> Result<Vec<Freq>> {
    let riesz = riesz_support(k)?.members;
    match h {
        MeasureHypothesis::SchurRiesz | MeasureHypothesis::Schur => {
            let e = scalars(k)?;
            if !e.is_increasing() {
                let inside: BTreeSet<Freq> = riesz.into_iter().collect();
                return Ok(schur_bounded(k, SCHUR_PROXY_BOUND, |n| inside.contains(n)).into_iter().collect());
            }
            let lo = riesz.first().map_or(0, |n| n.0[0]);
            let hi = riesz.last().map_or(0, |n| n.0[0]);
            let schur = schur_set_via_gaps(&e, Window::new(lo.min(0), hi.max(0))?)?;
            Ok(riesz.into_iter().filter(|n| schur.contains(&n.0[0])).collect())
        }
        MeasureHypothesis::S => {
            let s: BTreeSet<Freq> = s_set(&Enumeration::new(k.to_vec())?)?.members.into_iter().collect();
            Ok(riesz.into_iter().filter(|n| s.contains(n)).collect())
        }
        MeasureHypothesis::NegativeCone => {
            let cone = order.cloned().unwrap_or(ConeOrder::LexLast).prepare()?;
            Ok(riesz.into_iter().filter(|n| cone.strictly_positive(&n.times(-1))).collect())
        }
    }
}

fn scalars(k: &[Freq]) -> Result<Enumeration<i64>> {
    let v = k
        .iter()
        .map(|x| x.as_scalar().ok_or(Error::DimensionMismatch { expected: 1, found: x.dim() }))
        .collect::<Result<Vec<_>>>()?;
    Enumeration::new(v)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub name: String,
    pub left: f64,
    pub right: f64,
    pub holds: bool,
}

fn link(name: &str, left: f64, right: f64) -> Link {
    Link { name: name.into(), left, right, holds: left <= right + LINK_TOL * right.max(1.0) }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplaySummary {
    pub passed: bool,
    pub failed_checks: Vec<String>,
    pub final_ratio: f64,
    pub certified_constant: f64,
}

/// ‖μ̂|K‖₂ ≤ 2‖f̂_K|K‖₂ ≤ 2C‖f_K‖₁ ≤ 2C‖μ‖, link by link.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub hypothesis: MeasureHypothesis,
    pub lifted: bool,
    /// C of the middle step (2 for every path here).
    pub constant: f64,
    pub links: Vec<Link>,
    pub holds: bool,
    /// ‖μ̂|K‖₂ / ‖μ‖.
    pub ratio: f64,
    /// max |μ̂| on the hypothesis set, relative to ‖μ‖.
    pub hypothesis_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replay: Option<ReplaySummary>,
}

fn k_norm(values: impl Iterator<Item = Complex64>) -> f64 {
    libm::sqrt(values.map(|c| c.norm_sqr()).sum())
}

fn check_hypothesis(mu: &Measure, set: &[Freq], tv: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in set {
        let v = measure_hat(mu, n)?.norm();
        if v > ATOMIC_TOL * tv.max(f64::MIN_POSITIVE) {
            return Err(Error::Hypothesis { freq: n.to_string(), magnitude: v });
        }
        worst = worst.max(v);
    }
    Ok(worst / tv.max(f64::MIN_POSITIVE))
}

fn riesz_grid(k: &[Freq]) -> Result<GridSpec> {
    let dim = k.first().map_or(1, |x| x.dim());
    let half: Vec<i64> = (0..dim).map(|a| k.iter().map(|x| x.0[a].abs()).sum::<i64>().max(1)).collect();
    let dims = half.iter().map(|&m| ((2 * m + 2) as usize).next_power_of_two()).collect();
    GridSpec::new(dims, half)
}

/// The measure chain; `S` goes through the lift, the others run the replay on f_K.
pub fn check_measure_bound(mu: &Measure, k: &[Freq], hypothesis: &MeasureHypothesis) -> Result<ChainReport> {
    check_measure_bound_ordered(mu, k, hypothesis, None)
}

pub fn check_measure_bound_ordered(
    mu: &Measure,
    k: &[Freq],
    hypothesis: &MeasureHypothesis,
    order: Option<&ConeOrder>,
) -> Result<ChainReport> {
    let chain_fits = || -> Result<bool> {
        let e = scalars(k)?;
        Ok(e.is_increasing() && is_strongly_lacunary(&e))
    };
    let lifted = match hypothesis {
        MeasureHypothesis::S => true,
        MeasureHypothesis::Schur | MeasureHypothesis::SchurRiesz => !chain_fits()?,
        MeasureHypothesis::NegativeCone => false,
    };
    if lifted {
        return check_measure_bound_lifted(mu, &Enumeration::new(k.to_vec())?, hypothesis);
    }
    let tv = mu.total_variation()?;
    if tv == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let set = hypothesis_set(hypothesis, k, order)?;
    let residual = check_hypothesis(mu, &set, tv)?;
    let spec = riesz_grid(k)?;
    let fk_spec = riesz_convolve(mu, k, &spec)?;
    let fk = fk_spec.synth(&spec)?;
    let trace = match hypothesis {
        MeasureHypothesis::NegativeCone => {
            let order = order.cloned().unwrap_or(ConeOrder::LexLast);
            if !is_strongly_lacunary_ordered(k, &order)? {
                return Err(Error::Invalid("K is not strongly lacunary for the order".into()));
            }
            replay_group(&fk, &Enumeration::new(k.to_vec())?, &order, ReplayMode::New)?
        }
        _ => {
            replay(&fk, &scalars(k)?, ReplayMode::New, Some(&DFamily::Schur))?
        }
    };
    let mu_k = k_norm(k.iter().map(|x| measure_hat(mu, x).unwrap_or_default()));
    let fk_k = k_norm(k.iter().map(|x| fk_spec.get(x)));
    let c = trace.certified_constant;
    let links = vec![
        link("riesz_coefficients", mu_k, 2.0 * fk_k),
        link("paley", 2.0 * fk_k, 2.0 * c * fk.norm_l1()),
        link("convolution", 2.0 * c * fk.norm_l1(), 2.0 * c * tv),
    ];
    Ok(ChainReport {
        hypothesis: hypothesis.clone(),
        lifted: false,
        constant: c,
        holds: links.iter().all(|l| l.holds),
        links,
        ratio: mu_k / tv,
        hypothesis_residual: residual,
        replay: Some(ReplaySummary {
            passed: trace.passed,
            failed_checks: trace.failed_checks().into_iter().map(String::from).collect(),
            final_ratio: trace.final_ratio,
            certified_constant: c,
        }),
    })
}

/// Pairs (γ_j, e_j) ordered by the last nonzero coordinate of the ℤ^J part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftedEnumeration {
    pub pairs: Vec<Freq>,
    pub order: ConeOrder,
    pub extreme: ExtremeLacunarity,
}

/// m range used for the exact extreme-lacunarity flag of a lift.
const LIFT_M_MAX: u64 = 1 << 20;

pub fn lift_enumeration(e: &Enumeration<Freq>) -> Result<LiftedEnumeration> {
    let jn = e.len();
    if jn == 0 {
        return Err(Error::Invalid("empty enumeration".into()));
    }
    let pairs: Vec<Freq> = e.entries().iter().enumerate().map(|(j, g)| g.concat(&Freq::unit(jn, j))).collect();
    let units: Vec<Freq> = (0..jn).map(|j| Freq::unit(jn, j)).collect();
    let extreme = is_extremely_lacunary(&units, &ConeOrder::LexLast, LIFT_M_MAX)?;
    Ok(LiftedEnumeration { pairs, order: ConeOrder::LexLast, extreme })
}

/// Compares two lifted elements: (γ′, n⃗′) < (γ, n⃗) when n⃗′ < n⃗ in the lex-last order.
pub fn lifted_less(a: &Freq, b: &Freq, jn: usize) -> bool {
    let d = a.dim() - jn;
    let (x, y) = (&a.0[d..], &b.0[d..]);
    match x.iter().zip(y).rev().find(|(p, q)| p != q) {
        Some((p, q)) => q > p,
        None => false,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimpleSReport {
    pub holds: bool,
    /// Lifted elements on which the two sides differ, or whose projection leaves S((γ_j)).
    pub witnesses: Vec<Freq>,
    pub projection_holds: bool,
    pub size: usize,
}

/// S(lifted) = Schur(lifted) ∩ Riesz(lifted), and projection of S(lifted) into S((γ_j)).
pub fn check_simple_s(e: &Enumeration<Freq>) -> Result<SimpleSReport> {
    let lifted = lift_enumeration(e)?;
    let d = e.entries()[0].dim();
    let s_lift: BTreeSet<Freq> = s_set(&Enumeration::new(lifted.pairs.clone())?)?.members.into_iter().collect();
    // in the lift the ℤ^J coordinates are ε itself
    let sr: BTreeSet<Freq> = riesz_support(&lifted.pairs)?
        .members
        .into_iter()
        .filter(|v| satisfies_schur_conditions(&v.0[d..]))
        .collect();
    let mut witnesses: Vec<Freq> = s_lift.symmetric_difference(&sr).cloned().collect();
    let s_base: BTreeSet<Freq> = s_set(e)?.members.into_iter().collect();
    let mut projection_holds = true;
    for v in &s_lift {
        let g = Freq(v.0[..d].to_vec());
        if !s_base.contains(&g) {
            projection_holds = false;
            witnesses.push(v.clone());
        }
    }
    Ok(SimpleSReport { holds: witnesses.is_empty(), witnesses, projection_holds, size: s_lift.len() })
}

/// Measure chain through the lift to Γ × ℤ^J, evaluated on the product grid ℤ_N^d × ℤ_3^J.
pub fn check_measure_bound_lifted(mu: &Measure, e: &Enumeration<Freq>, hypothesis: &MeasureHypothesis) -> Result<ChainReport> {
    let k = e.entries();
    let jn = k.len();
    let d = mu.dim();
    let tv = mu.total_variation()?;
    if tv == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let set = match hypothesis {
        MeasureHypothesis::S => hypothesis_set(hypothesis, k, None)?,
        MeasureHypothesis::Schur | MeasureHypothesis::SchurRiesz => {
            // Schur ⊇ S, so the lifted hypothesis follows from vanishing on S ∩ Riesz ⊆ Schur ∩ Riesz
            let s = hypothesis_set(&MeasureHypothesis::S, k, None)?;
            let schur = hypothesis_set(hypothesis, k, None)?;
            s.into_iter().chain(schur).collect::<BTreeSet<_>>().into_iter().collect()
        }
        MeasureHypothesis::NegativeCone => return Err(Error::Invalid("the lift takes S or Schur hypotheses".into())),
    };
    let residual = check_hypothesis(mu, &set, tv)?;
    let simple = check_simple_s(e)?;
    if !simple.holds {
        return Err(Error::Invalid(format!("lifted S ≠ Schur ∩ Riesz at {} points", simple.witnesses.len())));
    }
    let lifted = lift_enumeration(e)?;
    let mut half: Vec<i64> = (0..d).map(|a| k.iter().map(|x| x.0[a].abs()).sum::<i64>().max(1)).collect();
    half.extend(core::iter::repeat_n(1, jn));
    let dims = half.iter().enumerate().map(|(a, &m)| if a < d { ((2 * m + 2) as usize).next_power_of_two() } else { 3 }).collect();
    let spec = GridSpec::new(dims, half)?;
    // μ̃ = μ ⊗ δ₀ has μ̃^(γ, n⃗) = μ̂(γ)
    let base_hat = |v: &Freq| measure_hat(mu, &Freq(v.0[..d].to_vec()));
    let c = riesz_expansion(&lifted.pairs)?;
    let mut fk = Spectrum::new(d + jn);
    for (n, w) in &c.terms {
        fk.insert(n.clone(), base_hat(n)? * w.to_f64());
    }
    let f = fk.synth(&spec)?;
    for v in s_set(&Enumeration::new(lifted.pairs.clone())?)?.members {
        let val = fk.get(&v).norm();
        if val > ATOMIC_TOL * tv.max(f64::MIN_POSITIVE) {
            return Err(Error::Hypothesis { freq: v.to_string(), magnitude: val });
        }
    }
    let mu_k = k_norm(k.iter().map(|x| measure_hat(mu, x).unwrap_or_default()));
    let fk_k = k_norm(lifted.pairs.iter().map(|x| fk.get(x)));
    let constant = 2.0;
    let links = vec![
        link("riesz_coefficients", mu_k, 2.0 * fk_k),
        link("paley", 2.0 * fk_k, 2.0 * constant * f.norm_l1()),
        link("convolution", 2.0 * constant * f.norm_l1(), 2.0 * constant * tv),
    ];
    Ok(ChainReport {
        hypothesis: hypothesis.clone(),
        lifted: true,
        constant,
        holds: links.iter().all(|l| l.holds),
        links,
        ratio: mu_k / tv,
        hypothesis_residual: residual,
        replay: None,
    })
}

/// Kind of a generated measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    Density,
    Atomic,
}

/// A seeded measure instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureInstance {
    pub k: Vec<Freq>,
    pub hypothesis: MeasureHypothesis,
    pub kind: MeasureKind,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<ConeOrder>,
    /// Extra atoms beyond the number of constraints.
    #[serde(default = "default_extra_atoms")]
    pub extra_atoms: usize,
}

fn default_extra_atoms() -> usize {
    8
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Masses in the null space of the vanishing constraints, by least squares: c = c₀ − A⁺Ac₀.
fn constrained_masses(at: &[Vec<f64>], set: &[Freq], rng: &mut ChaCha8Rng) -> Result<Vec<Complex64>> {
    let c0 = DVector::from_iterator(at.len(), (0..at.len()).map(|_| gaussian(rng)));
    if set.is_empty() {
        return Ok(c0.iter().copied().collect());
    }
    let a = DMatrix::from_fn(set.len(), at.len(), |r, i| {
        let phase: f64 = at[i].iter().zip(set[r].coords()).map(|(x, &k)| x * k as f64).sum();
        Complex64::from_polar(1.0, -phase)
    });
    let rhs = &a * &c0;
    let svd = SVD::new(a.clone(), true, true);
    let y = svd.solve(&rhs, 1e-12).map_err(|e| Error::Invalid(e.into()))?;
    let c = c0 - y;
    let tv: f64 = c.iter().map(|z| z.norm()).sum();
    let res = (&a * &c).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if res > ATOMIC_TOL * tv {
        return Err(Error::Invalid(format!("vanishing constraints solved only to {res:e}")));
    }
    Ok(c.iter().copied().collect())
}

impl MeasureInstance {
    pub fn build(&self) -> Result<Measure> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let d = self.k.first().map_or(1, |x| x.dim());
        let set = hypothesis_set(&self.hypothesis, &self.k, self.order.as_ref())?;
        match self.kind {
            MeasureKind::Density => {
                let grid = riesz_grid(&self.k)?;
                let forbidden: BTreeSet<Freq> = match self.hypothesis {
                    MeasureHypothesis::NegativeCone => {
                        let cone = self.order.clone().unwrap_or(ConeOrder::LexLast).prepare()?;
                        grid.window().points().into_iter().filter(|n| cone.strictly_positive(&n.times(-1))).collect()
                    }
                    _ => set.into_iter().collect(),
                };
                let mut spectrum = Spectrum::new(d);
                for n in grid.window().points() {
                    if !forbidden.contains(&n) {
                        spectrum.insert(n, gaussian(&mut rng));
                    }
                }
                if spectrum.coeffs.is_empty() {
                    return Err(Error::ZeroNorm);
                }
                Ok(Measure::Density { grid, spectrum })
            }
            MeasureKind::Atomic => {
                let count = set.len() + self.extra_atoms.max(1);
                let at: Vec<Vec<f64>> = (0..count)
                    .map(|_| {
                        (0..d)
                            .map(|_| {
                                let u: f64 = rng.random();
                                core::f64::consts::PI * (1.0 - 2.0 * u)
                            })
                            .collect()
                    })
                    .collect();
                let masses = constrained_masses(&at, &set, &mut rng)?;
                Ok(Measure::Atomic { atoms: at.into_iter().zip(masses).map(|(at, mass)| Atom { at, mass }).collect() })
            }
        }
    }

    pub fn check(&self) -> Result<ChainReport> {
        check_measure_bound_ordered(&self.build()?, &self.k, &self.hypothesis, self.order.as_ref())
    }
}

/// Template for measure campaigns; enumerations drawn as in the inequality templates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureTemplate {
    #[serde(default)]
    pub name: String,
    pub k: KSource,
    pub hypothesis: MeasureHypothesis,
    pub kind: MeasureKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<ConeOrder>,
    #[serde(default = "default_extra_atoms")]
    pub extra_atoms: usize,
}

impl MeasureTemplate {
    pub fn instance(&self, master: u64, index: u64) -> Result<MeasureInstance> {
        let mut rng = stream_rng(master, index);
        let k = self.k.draw(&mut rng)?;
        Ok(MeasureInstance {
            k,
            hypothesis: self.hypothesis.clone(),
            kind: self.kind,
            seed: rng.random(),
            order: self.order.clone(),
            extra_atoms: self.extra_atoms,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureFailure {
    pub index: u64,
    pub reason: String,
    pub instance: MeasureInstance,
}

/// Aggregate of a measure campaign; `merge` is associative.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub instances: u64,
    pub passed: u64,
    pub failed: u64,
    /// Largest ‖μ̂|K‖₂ / ‖μ‖.
    pub max_ratio: f64,
    /// Largest left/right over every link.
    pub max_link_ratio: f64,
    /// Instances whose replay of the middle step flagged a check.
    pub replay_flagged: u64,
    pub failures: Vec<MeasureFailure>,
}

/// 2√2: known ceiling for ‖μ̂|K‖₂ / ‖μ‖.
pub const MEASURE_CEILING: f64 = 2.0 * core::f64::consts::SQRT_2;

impl MeasureReport {
    pub fn from_result(index: u64, instance: MeasureInstance, r: Result<ChainReport>) -> Self {
        let mut out = MeasureReport { instances: 1, ..Default::default() };
        let reason = match r {
            Ok(c) => {
                out.max_ratio = c.ratio;
                out.max_link_ratio = c.links.iter().map(|l| l.left / l.right.max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
                if c.replay.as_ref().is_some_and(|s| !s.passed) {
                    out.replay_flagged = 1;
                }
                if !c.holds {
                    let bad: Vec<&str> = c.links.iter().filter(|l| !l.holds).map(|l| l.name.as_str()).collect();
                    Some(format!("links fail: {}", bad.join(", ")))
                } else if c.ratio > MEASURE_CEILING + CEILING_TOL {
                    Some(format!("ratio {} exceeds 2√2", c.ratio))
                } else {
                    None
                }
            }
            Err(e) => Some(e.to_string()),
        };
        match reason {
            None => out.passed = 1,
            Some(reason) => {
                out.failed = 1;
                out.failures.push(MeasureFailure { index, reason, instance });
            }
        }
        out
    }

    pub fn merge(mut self, o: MeasureReport) -> Self {
        self.instances += o.instances;
        self.passed += o.passed;
        self.failed += o.failed;
        self.max_ratio = self.max_ratio.max(o.max_ratio);
        self.max_link_ratio = self.max_link_ratio.max(o.max_link_ratio);
        self.replay_flagged += o.replay_flagged;
        self.failures.extend(o.failures);
        self.failures.sort_by_key(|f| f.index);
        self
    }
}

pub fn measure_instances(templates: &[MeasureTemplate], trials: u64, master: u64) -> Result<Vec<(u64, MeasureInstance)>> {
    let mut out = Vec::new();
    for (p, t) in templates.iter().enumerate() {
        for trial in 0..trials {
            let index = p as u64 * trials + trial;
            out.push((index, t.instance(master, index)?));
        }
    }
    Ok(out)
}

pub fn run_measure_campaign(templates: &[MeasureTemplate], trials: u64, master: u64) -> Result<MeasureReport> {
    Ok(measure_instances(templates, trials, master)?
        .into_iter()
        .map(|(i, m)| {
            let r = m.check();
            MeasureReport::from_result(i, m, r)
        })
        .fold(MeasureReport::default(), MeasureReport::merge))
}
