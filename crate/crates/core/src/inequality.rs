//! Instance generation, ratio checks, campaign bookkeeping and best-constant search.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{alt_sum_set, s_set, schur_exact_bound, schur_set, ConeOrder};
use crate::error::{Error, Result};
use crate::fourier::{fft, GridFunction, GridSpec, Spectrum};
use crate::freq::{Enumeration, Freq, Lattice, Window};
use crate::proofkit::{replay_group, replay_with, DFamily, FactorSpectra, Factorization, ReplayMode, ReplayOptions};

/// Slack on theorem constants.
pub const CONSTANT_TOL: f64 = 1e-9;
/// Slack on the sharp-constant ceilings.
pub const CEILING_TOL: f64 = 1e-6;

/// Where f̂ is required to vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Forbidden {
    Schur,
    S,
    Alternating,
    NegativeHalfline,
    OutsideKPositive,
    Custom(Vec<Freq>),
}

/// Theorem in force for a selector, with its proved constant and known ceiling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem {
    pub label: String,
    pub constant: f64,
    pub ceiling: Option<f64>,
}

impl Forbidden {
    pub fn theorem(&self, dim: usize) -> Option<Theorem> {
        let sqrt2 = core::f64::consts::SQRT_2;
        let (label, constant, ceiling) = match self {
            Forbidden::NegativeHalfline if dim == 1 => ("theorem-1", 2.0, Some(sqrt2)),
            Forbidden::NegativeHalfline => ("theorem-4", 2.0, Some(sqrt2)),
            Forbidden::OutsideKPositive => ("theorem-2", 2.0, Some(libm::sqrt(core::f64::consts::E))),
            Forbidden::Schur => ("theorem-5", 2.0, Some(sqrt2)),
            Forbidden::Alternating => ("alternating", 2.0, None),
            Forbidden::S => ("s-set", 4.0, None),
            Forbidden::Custom(_) => return None,
        };
        Some(Theorem { label: label.into(), constant, ceiling })
    }
}

fn default_order(dim: usize, order: Option<&ConeOrder>) -> ConeOrder {
    match order {
        Some(o) => o.clone(),
        None if dim == 1 => ConeOrder::HalfLine,
        None => ConeOrder::LexLast,
    }
}

fn scalars(k: &[Freq]) -> Result<Enumeration<i64>> {
    let v = k
        .iter()
        .map(|x| x.as_scalar().ok_or(Error::DimensionMismatch { expected: 1, found: x.dim() }))
        .collect::<Result<Vec<_>>>()?;
    Enumeration::new(v)
}

/// Forbidden set within the grid window; rejects overlaps with K and inexact sets.
pub fn forbidden_set(sel: &Forbidden, k: &[Freq], spec: &GridSpec, order: Option<&ConeOrder>) -> Result<Vec<Freq>> {
    let dim = spec.dim();
    for x in k {
        spec.check(x)?;
    }
    let set: BTreeSet<Freq> = match sel {
        Forbidden::Schur => {
            let e = scalars(k)?;
            let m = spec.half[0];
            let w = Window::new(-m, m)?;
            let bound = schur_exact_bound(&e, w).ok_or(Error::InexactForbidden)?;
            let r = schur_set(&e, w, bound)?;
            if !r.exact {
                return Err(Error::InexactForbidden);
            }
            r.members.into_iter().map(Freq::scalar).collect()
        }
        Forbidden::S => {
            let r = s_set(&Enumeration::new(k.to_vec())?)?;
            r.members.into_iter().filter(|n| spec.contains(n)).collect()
        }
        Forbidden::Alternating => {
            let r = alt_sum_set(&Enumeration::new(k.to_vec())?)?;
            r.members.into_iter().filter(|n| spec.contains(n)).collect()
        }
        Forbidden::NegativeHalfline => {
            let cone = default_order(dim, order).prepare()?;
            spec.window().points().into_iter().filter(|n| cone.strictly_positive(&n.times(-1))).collect()
        }
        Forbidden::OutsideKPositive => {
            let cone = default_order(dim, order).prepare()?;
            let ks: BTreeSet<&Freq> = k.iter().collect();
            spec.window().points().into_iter().filter(|n| cone.strictly_positive(n) && !ks.contains(n)).collect()
        }
        Forbidden::Custom(list) => {
            for n in list {
                if n.dim() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: n.dim() });
                }
            }
            list.iter().filter(|n| spec.contains(n)).cloned().collect()
        }
    };
    if let Some(bad) = k.iter().find(|x| set.contains(*x)) {
        return Err(Error::ForbiddenMeetsK(bad.to_string()));
    }
    Ok(set.into_iter().collect())
}

/// One seeded instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub grid: GridSpec,
    pub k: Vec<Freq>,
    pub forbidden: Forbidden,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ReplayMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<ConeOrder>,
}

/// Spectrum of a generated instance, with the factor spectra when the mode needs them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceData {
    pub spectrum: Spectrum,
    pub factors: Option<FactorSpectra>,
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

fn force_nonzero(c: Complex64) -> Complex64 {
    if c.norm() < 1e-3 {
        Complex64::new(1.0, 0.0)
    } else {
        c
    }
}

impl Instance {
    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn theorem(&self) -> Option<Theorem> {
        self.forbidden.theorem(self.dim())
    }

    pub fn forbidden_set(&self) -> Result<Vec<Freq>> {
        forbidden_set(&self.forbidden, &self.k, &self.grid, self.order.as_ref())
    }

    /// Seeded spectrum on window ∖ forbidden; classic mode builds f = p² with g = p, h = p̄.
    pub fn data(&self) -> Result<InstanceData> {
        let forbidden: BTreeSet<Freq> = self.forbidden_set()?.into_iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let ks: BTreeSet<&Freq> = self.k.iter().collect();
        if self.mode == Some(ReplayMode::Classic) {
            if self.forbidden != Forbidden::NegativeHalfline || self.dim() != 1 {
                return Err(Error::Invalid("classic instances use the negative half-line on one axis".into()));
            }
            let half = self.grid.half[0] / 2;
            let mut p = Spectrum::new(1);
            for n in 0..=half {
                p.insert(Freq::scalar(n), gaussian(&mut rng));
            }
            let pf = p.synth(&self.grid)?;
            let f = pf.mul(&pf)?;
            let mut spectrum = Spectrum::new(1);
            for (n, c) in f.spectrum().coeffs {
                if (0..=2 * half).contains(&n.0[0]) {
                    spectrum.insert(n, c);
                }
            }
            let mut h = Spectrum::new(1);
            for (n, c) in &p.coeffs {
                h.insert(n.times(-1), c.conj());
            }
            return Ok(InstanceData { spectrum, factors: Some(FactorSpectra { g: p, h }) });
        }
        let mut spectrum = Spectrum::new(self.dim());
        for n in self.grid.window().points() {
            if forbidden.contains(&n) {
                continue;
            }
            let c = gaussian(&mut rng);
            let c = if ks.contains(&n) { force_nonzero(c) } else { c };
            spectrum.insert(n, c);
        }
        Ok(InstanceData { spectrum, factors: None })
    }
}

/// Samples of the instance.
pub fn make_instance(i: &Instance) -> Result<GridFunction> {
    i.data()?.spectrum.synth(&i.grid)
}

/// ‖f̂|K‖₂ / norm_l1(f).
pub fn check_ratio(f: &GridFunction, k: &[Freq]) -> Result<f64> {
    let l1 = f.norm_l1();
    if l1 == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let mut s = 0.0;
    for x in k {
        s += f.coeff(x)?.norm_sqr();
    }
    Ok(libm::sqrt(s) / l1)
}

/// Rule for drawing the enumeration of a template.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KSource {
    Fixed(Vec<Freq>),
    /// J uniform in `j`, k₁ from `k1`, k_{j+1} = 2k_j + 1 + U{0, …, ⌊k_j/2⌋}, redrawn while k_J > `max_k`.
    Lacunary { j: [usize; 2], k1: Vec<i64>, max_k: i64 },
    /// J uniform in `j`, distinct nonzero integers in [−max_abs, max_abs] in draw order.
    Random { j: [usize; 2], max_abs: i64 },
}

fn default_m_cap() -> i64 {
    512
}

/// A family of instances indexed by trial number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Template {
    #[serde(default)]
    pub name: String,
    pub k: KSource,
    pub forbidden: Forbidden,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ReplayMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<ConeOrder>,
    /// Fixed grid; otherwise one axis with M = clamp(2k_J, 16, `m_cap`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default = "default_m_cap")]
    pub m_cap: i64,
}

/// Independent stream for (master seed, index).
pub fn stream_rng(master: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

fn draw_lacunary(rng: &mut ChaCha8Rng, j: [usize; 2], k1: &[i64], max_k: i64) -> Result<Vec<i64>> {
    if j[0] == 0 || j[0] > j[1] || k1.is_empty() || k1.iter().any(|&x| x <= 0 || x > max_k) {
        return Err(Error::Invalid("lacunary template needs 1 ≤ j₀ ≤ j₁ and 0 < k₁ ≤ max_k".into()));
    }
    let jn = rng.random_range(j[0]..=j[1]);
    loop {
        let mut k = vec![k1[rng.random_range(0..k1.len())]];
        while k.len() < jn {
            let last = *k.last().unwrap();
            k.push(2 * last + 1 + rng.random_range(0..=last / 2));
        }
        if *k.last().unwrap() <= max_k {
            return Ok(k);
        }
    }
}

impl KSource {
    pub fn draw(&self, rng: &mut ChaCha8Rng) -> Result<Vec<Freq>> {
        match self {
            KSource::Fixed(k) => Ok(k.clone()),
            KSource::Lacunary { j, k1, max_k } => Ok(draw_lacunary(rng, *j, k1, *max_k)?.into_iter().map(Freq::scalar).collect()),
            KSource::Random { j, max_abs } => {
                if j[0] == 0 || j[0] > j[1] || (j[1] as i64) > 2 * max_abs {
                    return Err(Error::Invalid("random template needs 1 ≤ j₀ ≤ j₁ ≤ 2·max_abs".into()));
                }
                let jn = rng.random_range(j[0]..=j[1]);
                let mut k: Vec<i64> = Vec::with_capacity(jn);
                while k.len() < jn {
                    let g = rng.random_range(-max_abs..=*max_abs);
                    if g != 0 && !k.contains(&g) {
                        k.push(g);
                    }
                }
                Ok(k.into_iter().map(Freq::scalar).collect())
            }
        }
    }
}

impl Template {
    /// The instance for trial `index`; deterministic in (master, index).
    pub fn instance(&self, master: u64, index: u64) -> Result<Instance> {
        let mut rng = stream_rng(master, index);
        let k = self.k.draw(&mut rng)?;
        let grid = match &self.grid {
            Some(g) => g.clone(),
            None => {
                let top = k.iter().map(|x| x.0.iter().map(|c| c.abs()).max().unwrap_or(0)).max().unwrap_or(0);
                let m = (2 * top).clamp(16, self.m_cap.max(top));
                GridSpec::for_max_freq(m)
            }
        };
        Ok(Instance { grid, k, forbidden: self.forbidden.clone(), seed: rng.random(), mode: self.mode, order: self.order.clone() })
    }
}

/// Names of the trace checks that measure residuals (as opposed to inequalities).
pub const RESIDUAL_CHECKS: [&str; 7] =
    ["identity", "membership", "intertwining", "orthogonality", "nesting_p", "nesting_q", "b_two_projection"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub index: u64,
    pub theorem: Option<String>,
    pub ratio: f64,
    pub passed: bool,
    pub reasons: Vec<String>,
    /// Check name → computed value, for replayed instances.
    pub checks: BTreeMap<String, f64>,
    pub instance: Instance,
}

fn replay_instance(i: &Instance, data: &InstanceData, f: &GridFunction) -> Result<crate::proofkit::ProofTrace> {
    let mode = i.mode.ok_or_else(|| Error::Invalid("no replay mode".into()))?;
    if i.dim() > 1 {
        if i.forbidden != Forbidden::NegativeHalfline {
            return Err(Error::Invalid("group replays need the negative-halfline hypothesis".into()));
        }
        let order = default_order(i.dim(), i.order.as_ref());
        return replay_group(f, &Enumeration::new(i.k.clone())?, &order, mode);
    }
    let dsets = match (&i.forbidden, mode) {
        (Forbidden::Schur, ReplayMode::New | ReplayMode::Classic) => Some(DFamily::Schur),
        (Forbidden::NegativeHalfline, ReplayMode::New | ReplayMode::Classic) => None,
        (Forbidden::OutsideKPositive, ReplayMode::Complementary) => None,
        (sel, mode) => return Err(Error::Invalid(format!("no {mode:?} replay for selector {sel:?}"))),
    };
    let factorization = match &data.factors {
        Some(fs) => Some(Factorization::new(f, fs.g.synth(&i.grid)?, fs.h.synth(&i.grid)?)?),
        None => None,
    };
    replay_with(f, &scalars(&i.k)?, mode, &ReplayOptions { dsets, factorization })
}

/// Builds, measures and (when a mode is set) replays one instance.
pub fn evaluate(index: u64, i: Instance) -> Outcome {
    let theorem = i.theorem();
    let mut out = Outcome {
        index,
        theorem: theorem.as_ref().map(|t| t.label.clone()),
        ratio: 0.0,
        passed: false,
        reasons: Vec::new(),
        checks: BTreeMap::new(),
        instance: i,
    };
    let i = &out.instance;
    let data = match i.data() {
        Ok(d) => d,
        Err(e) => {
            out.reasons.push(e.to_string());
            return out;
        }
    };
    let f = match data.spectrum.synth(&i.grid) {
        Ok(f) => f,
        Err(e) => {
            out.reasons.push(e.to_string());
            return out;
        }
    };
    match check_ratio(&f, &i.k) {
        Ok(r) => out.ratio = r,
        Err(e) => out.reasons.push(e.to_string()),
    }
    if let Some(t) = &theorem {
        if out.ratio > t.constant + CONSTANT_TOL {
            out.reasons.push(format!("ratio {} exceeds the constant {}", out.ratio, t.constant));
        }
        if let Some(c) = t.ceiling {
            if out.ratio > c + CEILING_TOL {
                out.reasons.push(format!("ratio {} exceeds the ceiling {c}", out.ratio));
            }
        }
    }
    if i.mode.is_some() {
        match replay_instance(i, &data, &f) {
            Ok(trace) => {
                for c in &trace.checks {
                    out.checks.insert(c.name.clone(), c.value);
                    if !c.passed {
                        out.reasons.push(format!("check {} = {:e} exceeds {:e}", c.name, c.value, c.limit));
                    }
                }
            }
            Err(e) => out.reasons.push(e.to_string()),
        }
    }
    out.passed = out.reasons.is_empty();
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub index: u64,
    pub reasons: Vec<String>,
    /// Seeded instance; a valid `replay` input.
    pub instance: Instance,
}

/// Aggregate of a campaign. `merge` is associative; reports do not depend on evaluation order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub instances: u64,
    pub passed: u64,
    pub failed: u64,
    pub max_ratio: f64,
    /// Theorem label → largest observed ratio.
    pub max_ratio_by_theorem: BTreeMap<String, f64>,
    /// Largest residual-type check value.
    pub worst_residual: f64,
    /// Check name → largest observed value.
    pub check_max: BTreeMap<String, f64>,
    /// Check name → instances failing it.
    pub check_failures: BTreeMap<String, u64>,
    pub failures: Vec<Failure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

fn max_into(map: &mut BTreeMap<String, f64>, key: &str, v: f64) {
    let e = map.entry(key.to_string()).or_insert(v);
    if v > *e {
        *e = v;
    }
}

impl CampaignReport {
    pub fn from_outcome(o: Outcome) -> Self {
        let mut r = CampaignReport { instances: 1, max_ratio: o.ratio, ..Default::default() };
        if let Some(t) = &o.theorem {
            r.max_ratio_by_theorem.insert(t.clone(), o.ratio);
        }
        for (name, &v) in &o.checks {
            r.check_max.insert(name.clone(), v);
            if RESIDUAL_CHECKS.contains(&name.as_str()) {
                r.worst_residual = r.worst_residual.max(v);
            }
        }
        for reason in &o.reasons {
            if let Some(name) = reason.strip_prefix("check ").and_then(|s| s.split(' ').next()) {
                *r.check_failures.entry(name.to_string()).or_insert(0) += 1;
            }
        }
        if o.passed {
            r.passed = 1;
        } else {
            r.failed = 1;
            r.failures.push(Failure { index: o.index, reasons: o.reasons, instance: o.instance });
        }
        r
    }

    pub fn merge(mut self, other: CampaignReport) -> Self {
        self.instances += other.instances;
        self.passed += other.passed;
        self.failed += other.failed;
        self.max_ratio = self.max_ratio.max(other.max_ratio);
        for (k, v) in other.max_ratio_by_theorem {
            max_into(&mut self.max_ratio_by_theorem, &k, v);
        }
        self.worst_residual = self.worst_residual.max(other.worst_residual);
        for (k, v) in other.check_max {
            max_into(&mut self.check_max, &k, v);
        }
        for (k, v) in other.check_failures {
            *self.check_failures.entry(k).or_insert(0) += v;
        }
        self.failures.extend(other.failures);
        self.failures.sort_by_key(|f| f.index);
        self.wall_time_ms = match (self.wall_time_ms, other.wall_time_ms) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        self
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Instances of a list of templates, numbered consecutively: trial t of template p has index p·trials + t.
pub fn campaign_instances(templates: &[Template], trials: u64, master: u64) -> Result<Vec<(u64, Instance)>> {
    let mut out = Vec::new();
    for (p, t) in templates.iter().enumerate() {
        for trial in 0..trials {
            let index = p as u64 * trials + trial;
            out.push((index, t.instance(master, index)?));
        }
    }
    Ok(out)
}

/// Sequential campaign; the std front end runs the same reduction in parallel.
pub fn run_campaign(templates: &[Template], trials: u64, master: u64) -> Result<CampaignReport> {
    Ok(campaign_instances(templates, trials, master)?
        .into_iter()
        .map(|(i, inst)| CampaignReport::from_outcome(evaluate(i, inst)))
        .fold(CampaignReport::default(), CampaignReport::merge))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub restarts: u32,
    pub iterations: u32,
    /// Smoothing ε relative to max |f|.
    pub epsilon: f64,
    /// Initial step, relative to ‖spectrum‖₂.
    pub step: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig { restarts: 4, iterations: 200, epsilon: 1e-6, step: 0.1, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogRow {
    pub restart: u32,
    pub iteration: u32,
    /// Best unsmoothed ratio so far in this restart.
    pub ratio: f64,
    pub step: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartResult {
    pub restart: u32,
    pub ratio: f64,
    /// Best iterate, rescaled to norm_l1 = 1.
    pub spectrum: Spectrum,
    pub log: Vec<LogRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizeResult {
    pub ratio: f64,
    pub spectrum: Spectrum,
    pub restarts: Vec<f64>,
    pub log: Vec<LogRow>,
}

/// Support, K positions and grid of an optimization problem.
pub struct Problem {
    spec: GridSpec,
    support: Vec<usize>,
    kidx: Vec<usize>,
}

impl Problem {
    pub fn new(spec: &GridSpec, k: &[Freq], forbidden: &[Freq]) -> Result<Self> {
        let fset: BTreeSet<&Freq> = forbidden.iter().collect();
        if let Some(bad) = k.iter().find(|x| fset.contains(x)) {
            return Err(Error::ForbiddenMeetsK(bad.to_string()));
        }
        for x in k {
            spec.check(x)?;
        }
        let support =
            spec.window().points().iter().filter(|n| !fset.contains(n)).map(|n| spec.residue_index(n)).collect();
        let kidx = k.iter().map(|x| spec.residue_index(x)).collect();
        Ok(Problem { spec: spec.clone(), support, kidx })
    }

    fn samples(&self, c: &[Complex64]) -> Vec<Complex64> {
        let mut f = c.to_vec();
        fft::dft_nd(&mut f, &self.spec.dims, true);
        f
    }

    fn ratio(&self, c: &[Complex64]) -> (f64, f64, Vec<Complex64>) {
        let f = self.samples(c);
        let l1 = f.iter().map(|z| z.norm()).sum::<f64>() / f.len() as f64;
        let num = libm::sqrt(self.kidx.iter().map(|&i| c[i].norm_sqr()).sum());
        (if l1 > 0.0 { num / l1 } else { 0.0 }, l1, f)
    }

    fn to_spectrum(&self, c: &[Complex64]) -> Spectrum {
        let mut s = Spectrum::new(self.spec.dim());
        for &i in &self.support {
            if c[i] != Complex64::new(0.0, 0.0) {
                s.insert(self.spec.representative(i), c[i]);
            }
        }
        s
    }

    fn from_spectrum(&self, s: &Spectrum) -> Result<Vec<Complex64>> {
        let allowed: BTreeSet<usize> = self.support.iter().copied().collect();
        let mut c = vec![Complex64::new(0.0, 0.0); self.spec.total()];
        for (n, v) in &s.coeffs {
            self.spec.check(n)?;
            let i = self.spec.residue_index(n);
            if !allowed.contains(&i) && v.norm() > 0.0 {
                return Err(Error::Hypothesis { freq: n.to_string(), magnitude: v.norm() });
            }
            c[i] = *v;
        }
        Ok(c)
    }

    /// One restart of projected ascent on the smoothed ratio; accepts only improving steps.
    pub fn restart(&self, cfg: &OptimizerConfig, r: u32, start: Option<&Spectrum>) -> Result<RestartResult> {
        let n = self.spec.total();
        let mut c = match start {
            Some(s) => self.from_spectrum(s)?,
            None if r == 0 => {
                let mut c = vec![Complex64::new(0.0, 0.0); n];
                for &i in &self.kidx {
                    c[i] = Complex64::new(1.0, 0.0);
                }
                c
            }
            None => {
                let mut rng = stream_rng(cfg.seed, r as u64);
                let mut c = vec![Complex64::new(0.0, 0.0); n];
                for &i in &self.support {
                    c[i] = gaussian(&mut rng);
                }
                c
            }
        };
        let (mut best, l1, _) = self.ratio(&c);
        if l1 == 0.0 {
            return Err(Error::ZeroNorm);
        }
        for v in &mut c {
            *v /= l1;
        }
        let mut step = cfg.step;
        let mut log = Vec::with_capacity(cfg.iterations as usize);
        let scale = 1.0 / n as f64;
        for it in 0..cfg.iterations {
            let f = self.samples(&c);
            let eps = cfg.epsilon * f.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let mut b = 0.0;
            let mut u: Vec<Complex64> = f
                .iter()
                .map(|z| {
                    let m = libm::sqrt(z.norm_sqr() + eps * eps);
                    b += m;
                    if m > 0.0 { z / m } else { Complex64::new(0.0, 0.0) }
                })
                .collect();
            b *= scale;
            fft::dft_nd(&mut u, &self.spec.dims, false);
            let a = libm::sqrt(self.kidx.iter().map(|&i| c[i].norm_sqr()).sum());
            let mut grad = vec![Complex64::new(0.0, 0.0); n];
            for &i in &self.support {
                grad[i] = -u[i] * scale * (a / (b * b));
            }
            if a > 0.0 {
                for &i in &self.kidx {
                    grad[i] += c[i] / (a * b);
                }
            }
            let gn = libm::sqrt(grad.iter().map(|z| z.norm_sqr()).sum());
            let cn = libm::sqrt(c.iter().map(|z| z.norm_sqr()).sum());
            if gn == 0.0 || step < 1e-14 {
                log.push(LogRow { restart: r, iteration: it, ratio: best, step });
                continue;
            }
            let trial: Vec<Complex64> = c.iter().zip(&grad).map(|(x, g)| x + g * (step * cn / gn)).collect();
            let (ratio, l1, _) = self.ratio(&trial);
            if ratio > best && l1 > 0.0 {
                best = ratio;
                c = trial.into_iter().map(|x| x / l1).collect();
                step *= 1.5;
            } else {
                step *= 0.5;
            }
            log.push(LogRow { restart: r, iteration: it, ratio: best, step });
        }
        Ok(RestartResult { restart: r, ratio: best, spectrum: self.to_spectrum(&c), log })
    }
}

/// Combines restarts in restart order; ties keep the earlier restart.
pub fn combine_restarts(results: Vec<RestartResult>) -> Result<OptimizeResult> {
    let mut best: Option<&RestartResult> = None;
    for r in &results {
        if best.is_none_or(|b| r.ratio > b.ratio) {
            best = Some(r);
        }
    }
    let b = best.ok_or_else(|| Error::Invalid("no restarts".into()))?;
    Ok(OptimizeResult {
        ratio: b.ratio,
        spectrum: b.spectrum.clone(),
        restarts: results.iter().map(|r| r.ratio).collect(),
        log: results.iter().flat_map(|r| r.log.iter().cloned()).collect(),
    })
}

/// Maximizes ‖f̂|K‖₂ / norm_l1(f) over spectra on window ∖ forbidden.
pub fn optimize_ratio(spec: &GridSpec, k: &[Freq], forbidden: &[Freq], cfg: &OptimizerConfig) -> Result<OptimizeResult> {
    optimize_ratio_from(spec, k, forbidden, cfg, None)
}

/// As [`optimize_ratio`], with restart 0 started from `start`.
pub fn optimize_ratio_from(
    spec: &GridSpec,
    k: &[Freq],
    forbidden: &[Freq],
    cfg: &OptimizerConfig,
    start: Option<&Spectrum>,
) -> Result<OptimizeResult> {
    let p = Problem::new(spec, k, forbidden)?;
    let results = (0..cfg.restarts.max(1))
        .map(|r| p.restart(cfg, r, if r == 0 { start } else { None }))
        .collect::<Result<Vec<_>>>()?;
    combine_restarts(results)
}
