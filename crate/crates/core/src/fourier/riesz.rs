//! Riesz products R_K = Π_{γ∈K′} (1 + (γ + γ̄)/2) with exact dyadic coefficients.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GridFunction, GridSpec};
use crate::combinatorics::DEFAULT_CAP;
use crate::error::{Error, Result};
use crate::freq::{Freq, Lattice};

/// num / 2^exp in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Dyadic {
    pub num: u64,
    pub exp: u32,
}

impl Dyadic {
    pub fn new(mut num: u64, mut exp: u32) -> Self {
        while exp > 0 && num % 2 == 0 {
            num /= 2;
            exp -= 1;
        }
        if num == 0 {
            exp = 0;
        }
        Dyadic { num, exp }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / libm::ldexp(1.0, self.exp as i32)
    }

    /// self ≥ num'/2^exp' compared exactly.
    pub fn at_least(self, num: u64, exp: u32) -> bool {
        let e = self.exp.max(exp);
        (self.num as u128) << (e - self.exp) >= (num as u128) << (e - exp)
    }
}

/// Exact coefficients c(γ) of a Riesz product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RieszExpansion<T> {
    pub terms: BTreeMap<T, Dyadic>,
}

impl<T: Ord> RieszExpansion<T> {
    pub fn get(&self, g: &T) -> Dyadic {
        self.terms.get(g).copied().unwrap_or(Dyadic { num: 0, exp: 0 })
    }
}

impl<T: Serialize + Clone> Serialize for RieszExpansion<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        let rows: Vec<(T, u64, u32)> = self.terms.iter().map(|(g, d)| (g.clone(), d.num, d.exp)).collect();
        rows.serialize(s)
    }
}

impl<'de, T: Deserialize<'de> + Ord> Deserialize<'de> for RieszExpansion<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let rows = Vec::<(T, u64, u32)>::deserialize(d)?;
        Ok(RieszExpansion { terms: rows.into_iter().map(|(g, n, e)| (g, Dyadic::new(n, e))).collect() })
    }
}

/// Expands Π (2 + γ + γ̄)/2 by convolution over integer numerators with a common 2^|K′|.
pub fn riesz_expansion<T: Lattice>(k: &[T]) -> Result<RieszExpansion<T>> {
    let kp: BTreeSet<T> = k.iter().filter(|g| !g.is_zero()).cloned().collect();
    if kp.len() > DEFAULT_CAP {
        return Err(Error::CapExceeded { len: kp.len(), cap: DEFAULT_CAP });
    }
    let Some(first) = k.first() else {
        return Ok(RieszExpansion { terms: BTreeMap::new() });
    };
    let mut acc: BTreeMap<T, u64> = BTreeMap::new();
    acc.insert(first.zero_like(), 1);
    for g in &kp {
        let mut next: BTreeMap<T, u64> = BTreeMap::new();
        for (x, &c) in &acc {
            *next.entry(x.clone()).or_default() += 2 * c;
            *next.entry(x.plus(g)).or_default() += c;
            *next.entry(x.minus(g)).or_default() += c;
        }
        acc = next;
    }
    let exp = kp.len() as u32;
    Ok(RieszExpansion { terms: acc.into_iter().filter(|(_, c)| *c > 0).map(|(g, c)| (g, Dyadic::new(c, exp))).collect() })
}

/// Samples of R_K and its exact expansion; Riesz(K) must fit the window.
pub fn riesz_polynomial(k: &[Freq], spec: &GridSpec) -> Result<(GridFunction, RieszExpansion<Freq>)> {
    for g in k {
        if g.dim() != spec.dim() {
            return Err(Error::DimensionMismatch { expected: spec.dim(), found: g.dim() });
        }
    }
    let expansion = riesz_expansion(k)?;
    if let Some(bad) = expansion.terms.keys().find(|g| !spec.contains(g)) {
        return Err(Error::OutsideWindow(format!("{bad}")));
    }
    let kp: BTreeSet<&Freq> = k.iter().filter(|g| !g.is_zero()).collect();
    let mut f = GridFunction::constant(spec, Complex64::new(1.0, 0.0));
    for g in kp {
        let chi = spec.character(g);
        for (v, c) in f.samples.iter_mut().zip(&chi) {
            *v *= 1.0 + c.re;
        }
    }
    Ok((f, expansion))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_one_three() {
        let r = riesz_expansion(&[1i64, 3]).unwrap();
        let want = [(0, 1, 0), (1, 1, 1), (-1, 1, 1), (3, 1, 1), (-3, 1, 1), (2, 1, 2), (-2, 1, 2), (4, 1, 2), (-4, 1, 2)];
        assert_eq!(r.terms.len(), want.len());
        for (g, n, e) in want {
            assert_eq!(r.get(&g), Dyadic { num: n, exp: e }, "γ={g}");
        }
    }

    #[test]
    fn expansion_small_cases() {
        let r = riesz_expansion(&[5i64]).unwrap();
        assert_eq!(r.get(&0), Dyadic { num: 1, exp: 0 });
        assert_eq!(r.get(&5), Dyadic { num: 1, exp: 1 });
        let r = riesz_expansion(&[1i64, 2, 3]).unwrap();
        assert_eq!(r.get(&0), Dyadic { num: 5, exp: 2 });
    }

    #[test]
    fn dyadic_compare() {
        assert!(Dyadic::new(3, 2).at_least(1, 1));
        assert!(!Dyadic::new(1, 2).at_least(1, 1));
        assert_eq!(Dyadic::new(4, 3), Dyadic { num: 1, exp: 1 });
    }
}
