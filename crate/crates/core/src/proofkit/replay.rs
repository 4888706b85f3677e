//! Replay drivers for the three proof organizations.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::chain::Chain;
use super::{
    factorize, Check, DFamily, Diagnostics, Factorization, ProofTrace, ReplayMode, StepRecord, StructuralChecks,
    HYPOTHESIS_TOL, RESIDUAL_TOL,
};
use crate::combinatorics::{d_set, is_strongly_lacunary, schur_set_via_gaps, ConeOrder};
use crate::error::{Error, Result};
use crate::fourier::{inner, norm2, GridFunction, GridSpec, Spectrum};
use crate::freq::{Enumeration, Freq, Lattice, Window};

/// Proof constant certified by every replay.
pub const REPLAY_CONSTANT: f64 = 2.0;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReplayOptions {
    pub dsets: Option<DFamily>,
    /// Required in classic mode; defaults to the canonical factorization otherwise.
    pub factorization: Option<Factorization>,
}

/// Replay of one instance; `dsets` selects the generalized D_j family in new mode.
pub fn replay(f: &GridFunction, e: &Enumeration<i64>, mode: ReplayMode, dsets: Option<&DFamily>) -> Result<ProofTrace> {
    replay_with(f, e, mode, &ReplayOptions { dsets: dsets.cloned(), factorization: None })
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn times(a: &[Complex64], chi: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(chi).map(|(x, y)| x * y).collect()
}

fn check_support(spec: &GridSpec, coeffs: &[Complex64], scale: f64) -> Result<()> {
    for (idx, c) in coeffs.iter().enumerate() {
        if c.norm() > HYPOTHESIS_TOL * scale {
            let n = spec.representative(idx);
            if !spec.contains(&n) {
                return Err(Error::OutsideWindow(n.to_string()));
            }
        }
    }
    Ok(())
}

fn check_vanishing<'a>(
    spec: &GridSpec,
    coeffs: &[Complex64],
    set: impl IntoIterator<Item = &'a Freq>,
    scale: f64,
) -> Result<()> {
    for n in set {
        let c = coeffs[spec.residue_index(n)];
        if c.norm() > HYPOTHESIS_TOL * scale {
            return Err(Error::Hypothesis { freq: n.to_string(), magnitude: c.norm() });
        }
    }
    Ok(())
}

/// The three structural conditions on a truncated D family; `inside` is the truncation.
pub(crate) fn structural_checks(ks: &[Freq], dsets: &[Vec<Freq>], inside: impl Fn(&Freq) -> bool) -> StructuralChecks {
    let sets: Vec<BTreeSet<&Freq>> = dsets.iter().map(|d| d.iter().collect()).collect();
    let jn = ks.len();
    let membership = (1..jn).all(|j| {
        let x = ks[j - 1].minus(&ks[j]);
        !inside(&x) || sets[j - 1].contains(&x)
    });
    let antinesting = (1..jn).all(|j| sets[j].iter().all(|n| sets[j - 1].contains(n)));
    let image_nesting = (2..jn).all(|j| {
        let shift = ks[j - 1].minus(&ks[j]);
        sets[j - 2].iter().all(|n| {
            let m = n.plus(&shift);
            !inside(&m) || sets[j - 1].contains(&m)
        })
    });
    StructuralChecks { membership, antinesting, image_nesting }
}

pub fn replay_with(f: &GridFunction, e: &Enumeration<i64>, mode: ReplayMode, opts: &ReplayOptions) -> Result<ProofTrace> {
    let spec = &f.spec;
    if spec.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: spec.dim() });
    }
    let m = spec.half[0];
    let nn = spec.dims[0] as i64;
    let ks: Vec<Freq> = e.entries().iter().map(|&k| Freq::scalar(k)).collect();
    for k in &ks {
        spec.check(k)?;
    }
    if f.norm_l1() == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let coeffs = f.all_coefficients();
    let scale = f.norm_l2();
    check_support(spec, &coeffs, scale)?;
    let jn = ks.len();
    let negatives: Vec<Freq> = (-m..0).map(Freq::scalar).collect();

    let family = |lo: i64| -> Result<(Vec<Vec<Freq>>, Vec<Freq>)> {
        match &opts.dsets {
            None => {
                if !e.is_increasing() || !is_strongly_lacunary(e) || e.entries().first().is_some_and(|&k| k < 0) {
                    return Err(Error::Invalid("the half-line family needs an increasing strongly lacunary enumeration".into()));
                }
                let d = e.entries().iter().map(|&k| (lo..-k).map(Freq::scalar).collect()).collect();
                Ok((d, negatives.clone()))
            }
            Some(DFamily::Schur) => {
                let w = Window::new(lo, -1)?;
                let mut d = Vec::with_capacity(jn);
                for j in 1..=jn {
                    d.push(d_set(j, e, w)?.members.into_iter().map(Freq::scalar).collect());
                }
                let forbidden = schur_set_via_gaps(e, Window::new(-m, m)?)?.members.into_iter().map(Freq::scalar).collect();
                Ok((d, forbidden))
            }
            Some(DFamily::Explicit(sets)) => {
                if sets.len() != jn {
                    return Err(Error::Invalid(format!("{} D-sets given for {jn} frequencies", sets.len())));
                }
                let mut forbidden = BTreeSet::new();
                for (j, set) in sets.iter().enumerate() {
                    for &n in set {
                        if n < lo || n > -1 {
                            return Err(Error::OutsideWindow(format!("{n}")));
                        }
                        let t = n + e.entries()[j];
                        if t.abs() <= m {
                            forbidden.insert(Freq::scalar(t));
                        }
                    }
                }
                let d = sets.iter().map(|s| s.iter().map(|&n| Freq::scalar(n)).collect()).collect();
                Ok((d, forbidden.into_iter().collect()))
            }
        }
    };

    match mode {
        ReplayMode::New => {
            let (dsets, forbidden) = family(-m)?;
            check_vanishing(spec, &coeffs, &forbidden, scale)?;
            let fac = match &opts.factorization {
                Some(fc) => Factorization::new(f, fc.g.clone(), fc.h.clone())?,
                None => factorize(f),
            };
            let structural = structural_checks(&ks, &dsets, |x| x.0[0] >= -m);
            Ok(run_new(f, &coeffs, &fac, &ks, &dsets, false, mode, Some(structural)))
        }
        ReplayMode::Classic => {
            let Some(fc) = &opts.factorization else {
                return Err(Error::NotAnalytic("no factorization supplied".into()));
            };
            let fac = Factorization::new(f, fc.g.clone(), fc.h.clone())?;
            let gc = fac.g.all_coefficients();
            let hc = fac.h.all_coefficients();
            let gs = fac.g.norm_l2().max(f64::MIN_POSITIVE);
            let mut top_g = 0i64;
            for idx in 0..gc.len() {
                let n = spec.representative(idx).0[0];
                if n < 0 && gc[idx].norm() > HYPOTHESIS_TOL * gs {
                    return Err(Error::NotAnalytic(format!("ĝ({n}) ≠ 0")));
                }
                if n > 0 && hc[idx].norm() > HYPOTHESIS_TOL * gs {
                    return Err(Error::NotAnalytic(format!("ĥ({n}) ≠ 0")));
                }
                if gc[idx].norm() > HYPOTHESIS_TOL * gs {
                    top_g = top_g.max(n);
                }
            }
            // deepest truncation whose shifted characters do not wrap onto the spectrum of g
            let k1 = e.entries().first().copied().unwrap_or(0);
            let lo = (top_g + 1 - nn - k1).min(-1);
            let (dsets, forbidden) = family(lo)?;
            check_vanishing(spec, &coeffs, &forbidden, scale)?;
            let structural = structural_checks(&ks, &dsets, |x| x.0[0] >= lo);
            Ok(run_new(f, &coeffs, &fac, &ks, &dsets, true, mode, Some(structural)))
        }
        ReplayMode::Complementary => {
            if !e.is_increasing() || !is_strongly_lacunary(e) || e.entries().first().is_some_and(|&k| k <= 0) {
                return Err(Error::Invalid("complementary mode needs a positive increasing strongly lacunary enumeration".into()));
            }
            let kset: BTreeSet<i64> = e.entries().iter().copied().collect();
            let forbidden: Vec<Freq> = (1..=m).filter(|n| !kset.contains(n)).map(Freq::scalar).collect();
            check_vanishing(spec, &coeffs, &forbidden, scale)?;
            let fac = match &opts.factorization {
                Some(fc) => Factorization::new(f, fc.g.clone(), fc.h.clone())?,
                None => factorize(f),
            };
            Ok(run_complementary(f, &coeffs, &fac, &ks))
        }
    }
}

/// Replay on a multi-axis grid with the subspaces defined by a cone order (new mode only).
pub fn replay_group(f: &GridFunction, e: &Enumeration<Freq>, order: &ConeOrder, mode: ReplayMode) -> Result<ProofTrace> {
    if mode != ReplayMode::New {
        return Err(Error::Invalid("group replays use the new organization".into()));
    }
    let spec = &f.spec;
    let cone = order.prepare()?;
    for k in e.entries() {
        spec.check(k)?;
        cone.check_dim(k)?;
    }
    if f.norm_l1() == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let mut ks: Vec<Freq> = e.entries().to_vec();
    for i in 1..ks.len() {
        let mut p = i;
        while p > 0 && cone.less(&ks[p], &ks[p - 1]) {
            ks.swap(p, p - 1);
            p -= 1;
        }
    }
    if ks.windows(2).any(|w| !cone.less(&w[0], &w[1])) {
        return Err(Error::NotTotal);
    }
    let coeffs = f.all_coefficients();
    let scale = f.norm_l2();
    check_support(spec, &coeffs, scale)?;
    let window = spec.window().points();
    let negative: Vec<Freq> = window.iter().filter(|n| cone.strictly_positive(&n.times(-1))).cloned().collect();
    check_vanishing(spec, &coeffs, &negative, scale)?;
    let trunc: Vec<Freq> = window.iter().filter(|n| ks.iter().all(|k| spec.contains(&n.plus(k)))).cloned().collect();
    let tset: BTreeSet<&Freq> = trunc.iter().collect();
    let dsets: Vec<Vec<Freq>> = ks
        .iter()
        .map(|k| trunc.iter().filter(|n| cone.strictly_positive(&k.times(-1).minus(n))).cloned().collect())
        .collect();
    let structural = structural_checks(&ks, &dsets, |x| tset.contains(x));
    let fac = factorize(f);
    Ok(run_new(f, &coeffs, &fac, &ks, &dsets, false, mode, Some(structural)))
}

struct Collected {
    steps: Vec<StepRecord>,
    diag: Diagnostics,
    ranks: Vec<usize>,
}

#[allow(clippy::too_many_arguments)]
fn run_new(
    f: &GridFunction,
    coeffs: &[Complex64],
    fac: &Factorization,
    ks: &[Freq],
    dsets: &[Vec<Freq>],
    unit_carrier: bool,
    mode: ReplayMode,
    structural: Option<StructuralChecks>,
) -> ProofTrace {
    let spec = &f.spec;
    let (g, h) = (&fac.g.samples[..], &fac.h.samples[..]);
    let chain = Chain::build(spec, if unit_carrier { None } else { Some(h) }, dsets);
    let chars = chain.characters();
    let jn = ks.len();
    let gn = norm2(g).max(f64::MIN_POSITIVE);
    let hn = norm2(h).max(f64::MIN_POSITIVE);
    let zeros = vec![zero(); g.len()];

    // P_j h for j = 1..J, stored at j − 1
    let ph: Vec<Vec<Complex64>> = (0..jn).map(|l| chain.project(l, None, h)).collect();
    let q = |j: usize, v: &[Complex64]| -> Vec<Complex64> {
        if j == 0 {
            zeros.clone()
        } else if j == jn {
            v.to_vec()
        } else {
            chain.project(j - 1, Some(&ks[j]), v)
        }
    };
    let qg: Vec<Vec<Complex64>> = (0..=jn).map(|j| q(j, g)).collect();

    let mut out = Collected { steps: Vec::new(), diag: Diagnostics { structural, ..Default::default() }, ranks: Vec::new() };
    for j in 1..=jn {
        out.ranks.push(chain.rank(j - 1));
        let chi = chars.eval(&ks[j - 1]);
        let ah = times(h, &chi);
        let a = inner(&sub(&qg[j], &qg[j - 1]), &ah);
        let b = inner(&qg[j - 1], &ah);
        let b2 = if j == 1 { zero() } else { inner(g, &times(&sub(&ph[j - 2], &ph[j - 1]), &chi)) };
        let target = coeffs[spec.residue_index(&ks[j - 1])];
        out.steps.push(StepRecord { j, k: ks[j - 1].clone(), a, b, target, residual: (a + b - target).norm(), b_two_projection: b2 });
        if j < jn {
            out.diag.membership.push(norm2(&sub(&ah, &q(j, &ah))) / hn);
        }
        if j >= 2 {
            out.diag.intertwining.push(norm2(&sub(&times(&ph[j - 2], &chi), &q(j - 1, &ah))) / hn);
        }
        if chain.rank(j - 1) > 0 {
            let overlap = chain.max_overlap(j - 1, Some(&ks[j - 1]), g);
            // with bare characters the overlap is a coefficient of g, scaled like the carrier case
            out.diag.orthogonality.push(overlap / gn);
        }
    }
    for j in 1..jn {
        let r1 = norm2(&sub(&chain.project(j - 1, None, &ph[j]), &ph[j])) / hn;
        let r2 = norm2(&sub(&chain.project(j, None, &ph[j - 1]), &ph[j])) / hn;
        out.diag.nesting_p.push(r1.max(r2));
    }
    for j in 2..jn {
        let r1 = norm2(&sub(&q(j, &qg[j - 1]), &qg[j - 1])) / gn;
        let r2 = norm2(&sub(&q(j - 1, &qg[j]), &qg[j - 1])) / gn;
        out.diag.nesting_q.push(r1.max(r2));
    }
    finish(f, fac, mode, out)
}

fn run_complementary(f: &GridFunction, coeffs: &[Complex64], fac: &Factorization, ks: &[Freq]) -> ProofTrace {
    let spec = &f.spec;
    let (g, h) = (&fac.g.samples[..], &fac.h.samples[..]);
    let jn = ks.len();
    // A_j M_j = span{z^m h : 0 ≤ m < k_j}: one nested family, prefix per j
    let levels: Vec<Vec<Freq>> = ks.iter().map(|k| (0..k.0[0]).map(Freq::scalar).collect()).collect();
    let chain = Chain::build(spec, Some(h), &levels);
    let chars = chain.characters();
    let gn = norm2(g).max(f64::MIN_POSITIVE);
    let hn = norm2(h).max(f64::MIN_POSITIVE);
    let zeros = vec![zero(); g.len()];
    let neg: Vec<Freq> = ks.iter().map(|k| k.times(-1)).collect();

    // Q_j for j = 1..=J+1 (Q_{J+1} = I); P_j = A_j^{-1} Q_j A_j for j = 0..=J (P_0 = 0)
    let q = |j: usize, v: &[Complex64]| -> Vec<Complex64> {
        if j == jn + 1 {
            v.to_vec()
        } else {
            chain.project(j - 1, None, v)
        }
    };
    let p = |j: usize, v: &[Complex64]| -> Vec<Complex64> {
        if j == 0 {
            zeros.clone()
        } else {
            chain.project(j - 1, Some(&neg[j - 1]), v)
        }
    };
    let qg: Vec<Vec<Complex64>> = (0..=jn + 1).map(|j| if j == 0 { zeros.clone() } else { q(j, g) }).collect();
    let ph: Vec<Vec<Complex64>> = (0..=jn).map(|j| p(j, h)).collect();

    let mut out = Collected { steps: Vec::new(), diag: Diagnostics::default(), ranks: Vec::new() };
    for j in 1..=jn {
        out.ranks.push(chain.rank(j - 1));
        let chi = chars.eval(&ks[j - 1]);
        let ah = times(h, &chi);
        let a = inner(&sub(&qg[j + 1], &qg[j]), &ah);
        let b = inner(g, &times(&sub(&ph[j], &ph[j - 1]), &chi));
        let b2 = inner(&qg[j], &ah);
        let target = coeffs[spec.residue_index(&ks[j - 1])];
        out.steps.push(StepRecord { j, k: ks[j - 1].clone(), a, b, target, residual: (a + b - target).norm(), b_two_projection: b2 });
        if j < jn {
            out.diag.membership.push(norm2(&sub(&ah, &q(j + 1, &ah))) / hn);
            // g ⊥ A_{j+1} M_j = z^{k_{j+1} − k_j} · (A_j M_j)
            let shift = ks[j].minus(&ks[j - 1]);
            if chain.rank(j - 1) > 0 {
                out.diag.orthogonality.push(chain.max_overlap(j - 1, Some(&shift), g) / gn);
            }
        }
        out.diag.intertwining.push(norm2(&sub(&times(&ph[j], &chi), &q(j, &ah))) / hn);
    }
    for j in 1..jn {
        let r1 = norm2(&sub(&p(j + 1, &ph[j]), &ph[j])) / hn;
        let r2 = norm2(&sub(&p(j, &ph[j + 1]), &ph[j])) / hn;
        out.diag.nesting_p.push(r1.max(r2));
        let s1 = norm2(&sub(&q(j + 1, &qg[j]), &qg[j])) / gn;
        let s2 = norm2(&sub(&q(j, &qg[j + 1]), &qg[j])) / gn;
        out.diag.nesting_q.push(s1.max(s2));
    }
    finish(f, fac, ReplayMode::Complementary, out)
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().cloned().fold(0.0, f64::max)
}

fn finish(f: &GridFunction, fac: &Factorization, mode: ReplayMode, c: Collected) -> ProofTrace {
    let fl2 = f.norm_l2();
    let norm_l1 = f.norm_l1();
    let g_norm_sq = { let x = fac.g.norm_l2(); x * x };
    let h_norm_sq = { let x = fac.h.norm_l2(); x * x };
    let sum_a_sq: f64 = c.steps.iter().map(|s| s.a.norm_sqr()).sum();
    let sum_b_sq: f64 = c.steps.iter().map(|s| s.b.norm_sqr()).sum();
    let coeff_norm = libm::sqrt(c.steps.iter().map(|s| s.target.norm_sqr()).sum());
    let final_ratio = coeff_norm / norm_l1;
    let gh = (g_norm_sq * h_norm_sq).max(f64::MIN_POSITIVE);
    let identity = c.steps.iter().map(|s| s.residual).fold(0.0, f64::max) / fl2;
    let two_proj = c.steps.iter().map(|s| (s.b - s.b_two_projection).norm()).fold(0.0, f64::max) / fl2;
    let triangle = (coeff_norm - libm::sqrt(sum_a_sq) - libm::sqrt(sum_b_sq)) / fl2;

    let mut checks = Vec::new();
    let mut push = |name: &str, value: f64, limit: f64| {
        checks.push(Check { name: name.into(), value, limit, passed: value <= limit });
    };
    push("identity", identity, RESIDUAL_TOL);
    push("a_energy", sum_a_sq / gh, 1.0 + RESIDUAL_TOL);
    push("b_energy", sum_b_sq / gh, 1.0 + RESIDUAL_TOL);
    push("membership", max_of(&c.diag.membership), RESIDUAL_TOL);
    push("intertwining", max_of(&c.diag.intertwining), RESIDUAL_TOL);
    push("orthogonality", max_of(&c.diag.orthogonality), RESIDUAL_TOL);
    push("nesting_p", max_of(&c.diag.nesting_p), RESIDUAL_TOL);
    push("nesting_q", max_of(&c.diag.nesting_q), RESIDUAL_TOL);
    push("b_two_projection", two_proj, RESIDUAL_TOL);
    push("triangle", triangle, RESIDUAL_TOL);
    push("certified", final_ratio, REPLAY_CONSTANT + RESIDUAL_TOL);
    if let Some(s) = c.diag.structural {
        push("structural", if s.all() { 0.0 } else { 1.0 }, 0.0);
    }
    let passed = checks.iter().all(|c| c.passed);
    ProofTrace {
        mode,
        steps: c.steps,
        sum_a_sq,
        sum_b_sq,
        g_norm_sq,
        h_norm_sq,
        f_norm_l2: fl2,
        norm_l1,
        coeff_norm,
        certified_constant: REPLAY_CONSTANT,
        final_ratio,
        ranks: c.ranks,
        diagnostics: c.diag,
        checks,
        passed,
    }
}

/// Spectra of a user-supplied factorization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorSpectra {
    pub g: Spectrum,
    pub h: Spectrum,
}

/// Self-contained replay request (also the format of failure dumps).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayInput {
    pub grid: GridSpec,
    pub k: Vec<Freq>,
    pub mode: ReplayMode,
    pub spectrum: Spectrum,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dsets: Option<DFamily>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factorization: Option<FactorSpectra>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<ConeOrder>,
}

impl ReplayInput {
    pub fn function(&self) -> Result<GridFunction> {
        self.spectrum.synth(&self.grid)
    }

    pub fn run(&self) -> Result<ProofTrace> {
        let f = self.function()?;
        if self.order.is_some() || self.grid.dim() > 1 {
            let order = self.order.clone().unwrap_or(ConeOrder::LexLast);
            return replay_group(&f, &Enumeration::new(self.k.clone())?, &order, self.mode);
        }
        let ks: Vec<i64> = self
            .k
            .iter()
            .map(|k| k.as_scalar().ok_or(Error::DimensionMismatch { expected: 1, found: k.dim() }))
            .collect::<Result<_>>()?;
        let factorization = match &self.factorization {
            Some(fs) => {
                let g = fs.g.synth(&self.grid)?;
                let h = fs.h.synth(&self.grid)?;
                Some(Factorization { g, h })
            }
            None => None,
        };
        replay_with(&f, &Enumeration::new(ks)?, self.mode, &ReplayOptions { dsets: self.dsets.clone(), factorization })
    }
}
