//! Cone orders on ℤ^d: the half-line, the lex-last total order, and finitely generated cones.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freq::{Freq, Lattice};

pub const DEFAULT_SEARCH_BOUND: usize = 64;

fn default_bound() -> usize {
    DEFAULT_SEARCH_BOUND
}

/// Description of the nonnegative cone P (and strict cone P′ = P∖{0}).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConeOrder {
    /// Usual order on ℤ.
    HalfLine,
    /// x > 0 iff the last nonzero coordinate of x is positive.
    LexLast,
    /// P′ = sums of one or more generators, searched up to `bound` summands.
    Generators {
        generators: Vec<Freq>,
        #[serde(default = "default_bound")]
        bound: usize,
    },
}

/// A cone order with its generator search precomputed.
#[derive(Clone, Debug)]
pub struct Cone {
    order: ConeOrder,
    dim: Option<usize>,
    reach: Option<BTreeSet<Freq>>,
}

/// Outcome of the axiom check P ∩ (−P) = {0}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub holds: bool,
    /// `Some(B)` when the verdict was obtained by bounded search up to B summands.
    pub bounded: Option<usize>,
    pub witness: Option<Vec<Freq>>,
}

impl ConeOrder {
    pub fn is_total(&self) -> bool {
        !matches!(self, ConeOrder::Generators { .. })
    }

    /// Validates the axioms and precomputes generator sums.
    pub fn prepare(&self) -> Result<Cone> {
        let report = self.check_axiom();
        if !report.holds {
            let w = report.witness.unwrap_or_default();
            return Err(Error::ConeAxiom(format!("{w:?}")));
        }
        let (dim, reach) = match self {
            ConeOrder::HalfLine => (Some(1), None),
            ConeOrder::LexLast => (None, None),
            ConeOrder::Generators { generators, bound } => {
                let d = generators.first().map(|g| g.dim());
                (d, Some(generator_sums(generators, *bound).0))
            }
        };
        Ok(Cone { order: self.clone(), dim, reach })
    }

    pub fn check_axiom(&self) -> AxiomReport {
        match self {
            ConeOrder::HalfLine | ConeOrder::LexLast => {
                AxiomReport { holds: true, bounded: None, witness: None }
            }
            ConeOrder::Generators { generators, bound } => {
                if let Some(d) = generators.first().map(|g| g.dim()) {
                    if let Some(bad) = generators.iter().find(|g| g.dim() != d) {
                        return AxiomReport { holds: false, bounded: None, witness: Some(alloc::vec![bad.clone()]) };
                    }
                }
                if let Some(z) = generators.iter().find(|g| g.is_zero()) {
                    return AxiomReport { holds: false, bounded: None, witness: Some(alloc::vec![z.clone()]) };
                }
                let (_, zero_path) = generator_sums(generators, *bound);
                AxiomReport { holds: zero_path.is_none(), bounded: Some(*bound), witness: zero_path }
            }
        }
    }
}

/// All sums of 1..=bound generators; also a generator word summing to zero if one exists.
fn generator_sums(gens: &[Freq], bound: usize) -> (BTreeSet<Freq>, Option<Vec<Freq>>) {
    let mut all: BTreeSet<Freq> = BTreeSet::new();
    // frontier keeps one word per reached point, for witnesses
    let mut frontier: Vec<(Freq, Vec<usize>)> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if all.insert(g.clone()) {
            frontier.push((g.clone(), alloc::vec![i]));
        }
    }
    for _ in 1..bound {
        let mut next = Vec::new();
        for (p, word) in &frontier {
            for (i, g) in gens.iter().enumerate() {
                let q = p.plus(g);
                if q.is_zero() {
                    let mut w = word.clone();
                    w.push(i);
                    return (all, Some(w.into_iter().map(|i| gens[i].clone()).collect()));
                }
                if all.insert(q.clone()) {
                    let mut w = word.clone();
                    w.push(i);
                    next.push((q, w));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    (all, None)
}

impl Cone {
    pub fn order(&self) -> &ConeOrder {
        &self.order
    }

    pub fn is_total(&self) -> bool {
        self.order.is_total()
    }

    /// Search bound for generator cones; `None` when membership is decided exactly.
    pub fn bounded(&self) -> Option<usize> {
        match &self.order {
            ConeOrder::Generators { bound, .. } => Some(*bound),
            _ => None,
        }
    }

    pub fn check_dim(&self, x: &Freq) -> Result<()> {
        match self.dim {
            Some(d) if d != x.dim() => Err(Error::DimensionMismatch { expected: d, found: x.dim() }),
            _ => Ok(()),
        }
    }

    /// x ∈ P′.
    pub fn strictly_positive(&self, x: &Freq) -> bool {
        match &self.order {
            ConeOrder::HalfLine => x.0.first().is_some_and(|&n| n > 0),
            ConeOrder::LexLast => x.0.iter().rev().find(|&&c| c != 0).is_some_and(|&c| c > 0),
            ConeOrder::Generators { .. } => self.reach.as_ref().is_some_and(|r| r.contains(x)),
        }
    }

    /// x ∈ P.
    pub fn nonnegative(&self, x: &Freq) -> bool {
        x.is_zero() || self.strictly_positive(x)
    }

    /// a < b, i.e. b − a ∈ P′.
    pub fn less(&self, a: &Freq, b: &Freq) -> bool {
        self.strictly_positive(&b.minus(a))
    }
}

/// For every distinct pair, γ − 2γ′ or γ′ − 2γ lies in P′.
pub fn is_strongly_lacunary_ordered(k: &[Freq], order: &ConeOrder) -> Result<bool> {
    let cone = order.prepare()?;
    for x in k {
        cone.check_dim(x)?;
    }
    for (i, a) in k.iter().enumerate() {
        for b in &k[i + 1..] {
            if a == b {
                continue;
            }
            let ok = cone.strictly_positive(&a.minus(&b.times(2)))
                || cone.strictly_positive(&b.minus(&a.times(2)));
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Verdict for k_{j+1} > m·k_j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremeLacunarity {
    /// Holds for every 1 ≤ m ≤ m_max.
    pub holds: bool,
    /// The verdict is known to hold for every positive m, not only up to m_max.
    pub exact: bool,
}

/// Checks k_{j+1} − m·k_j ∈ P′ for 1 ≤ m ≤ m_max and, where the order allows, for all m.
pub fn is_extremely_lacunary(e: &[Freq], order: &ConeOrder, m_max: u64) -> Result<ExtremeLacunarity> {
    if !order.is_total() {
        return Err(Error::NotTotal);
    }
    let cone = order.prepare()?;
    for x in e {
        cone.check_dim(x)?;
    }
    let mut holds = true;
    let mut all_m = Some(true);
    for w in e.windows(2) {
        let (b, a) = (&w[0], &w[1]);
        for m in 1..=m_max as i64 {
            if !cone.strictly_positive(&a.minus(&b.times(m))) {
                holds = false;
                break;
            }
        }
        all_m = match (all_m, for_all_m(order, a, b)) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        };
    }
    // a failure below m_max is a witness for all m as well
    let exact = !holds || all_m == Some(true);
    Ok(ExtremeLacunarity { holds, exact })
}

/// Decides "a − m·b > 0 for all m ≥ 1" when the order structure makes it decidable.
fn for_all_m(order: &ConeOrder, a: &Freq, b: &Freq) -> Option<bool> {
    match order {
        ConeOrder::HalfLine => {
            let (a, b) = (a.0[0], b.0[0]);
            Some(b <= 0 && a - b > 0)
        }
        ConeOrder::LexLast => {
            let p = b.0.iter().rposition(|&c| c != 0);
            let Some(p) = p else {
                return Some(a.0.iter().rev().find(|&&c| c != 0).is_some_and(|&c| c > 0));
            };
            if let Some(&c) = a.0[p + 1..].iter().rev().find(|&&c| c != 0) {
                return Some(c > 0);
            }
            // coordinate p reads a_p − m·b_p
            if b.0[p] > 0 {
                Some(false)
            } else if a.0[p] - b.0[p] > 0 {
                // increasing in m and positive at m = 1
                Some(true)
            } else {
                None
            }
        }
        ConeOrder::Generators { .. } => None,
    }
}
