//! Sets built from bounded signed sums: S((k_j)), Riesz(K) and alternating sums.

use alloc::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::freq::{Enumeration, Lattice, SetReport};

use super::schur::schur_bounded;

pub const DEFAULT_CAP: usize = 16;
pub const ALT_CAP: usize = 22;

fn cap(len: usize, cap: usize) -> Result<()> {
    if len > cap {
        return Err(Error::CapExceeded { len, cap });
    }
    Ok(())
}

/// S((k_j)): sums Σε_j k_j with ε ∈ {−1,0,1}^J meeting the four Schur conditions.
pub fn s_set<T: Lattice>(e: &Enumeration<T>) -> Result<SetReport<T>> {
    s_set_with_cap(e, DEFAULT_CAP)
}

pub fn s_set_with_cap<T: Lattice>(e: &Enumeration<T>, max_len: usize) -> Result<SetReport<T>> {
    cap(e.len(), max_len)?;
    Ok(SetReport::from_set(schur_bounded(e.entries(), 1, |_| true), true))
}

/// Riesz(K): all sums Σ ε_γ γ over K′ = K∖{0}, ε ∈ {−1,0,1}.
pub fn riesz_support<T: Lattice>(k: &[T]) -> Result<SetReport<T>> {
    riesz_support_with_cap(k, DEFAULT_CAP)
}

pub fn riesz_support_with_cap<T: Lattice>(k: &[T], max_len: usize) -> Result<SetReport<T>> {
    let kp: BTreeSet<T> = k.iter().filter(|g| !g.is_zero()).cloned().collect();
    cap(kp.len(), max_len)?;
    let mut acc: BTreeSet<T> = BTreeSet::new();
    match k.first() {
        Some(g) => {
            acc.insert(g.zero_like());
        }
        None => return Ok(SetReport::empty()),
    }
    for g in &kp {
        let mut next = acc.clone();
        for v in &acc {
            next.insert(v.plus(g));
            next.insert(v.minus(g));
        }
        acc = next;
    }
    Ok(SetReport::from_set(acc, true))
}

/// k_{j_1} − k_{j_2} + k_{j_3} − ⋯ over increasing index sequences of odd length ≥ 3.
pub fn alt_sum_set<T: Lattice>(e: &Enumeration<T>) -> Result<SetReport<T>> {
    cap(e.len(), ALT_CAP)?;
    let k = e.entries();
    let mut out = BTreeSet::new();
    let n = k.len();
    for mask in 0u32..(1u32 << n) {
        let c = mask.count_ones();
        if c < 3 || c % 2 == 0 {
            continue;
        }
        let mut acc = k[0].zero_like();
        let mut sign = 1;
        for (i, ki) in k.iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc = acc.plus(&ki.times(sign));
                sign = -sign;
            }
        }
        out.insert(acc);
    }
    Ok(SetReport::from_set(out, true))
}

/// Signed sums for a concrete sign vector.
pub fn signed_sum<T: Lattice>(k: &[T], eps: &[i64]) -> Option<T> {
    let first = k.first()?;
    Some(k.iter().zip(eps).fold(first.zero_like(), |acc, (g, &e)| acc.plus(&g.times(e))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    fn en(v: &[i64]) -> Enumeration<i64> {
        Enumeration::new(v.to_vec()).unwrap()
    }

    #[test]
    fn s_examples() {
        assert_eq!(s_set(&en(&[1, 3, 7])).unwrap().members, vec![-3]);
        assert!(s_set(&en(&[1, 3])).unwrap().members.is_empty());
        assert_eq!(s_set(&en(&[3, 1, 7])).unwrap().members, vec![-3]);
        let big: Vec<i64> = (1..=17).collect();
        assert!(matches!(s_set(&en(&big)), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn riesz_examples() {
        assert_eq!(riesz_support(&[1i64, 3]).unwrap().members, (-4..=4).collect::<Vec<_>>());
        assert_eq!(riesz_support(&[5i64]).unwrap().members, vec![-5, 0, 5]);
        assert_eq!(riesz_support(&[0i64, 5]).unwrap().members, vec![-5, 0, 5]);
    }

    #[test]
    fn alt_examples() {
        assert_eq!(alt_sum_set(&en(&[1, 3, 7])).unwrap().members, vec![5]);
        assert_eq!(alt_sum_set(&en(&[1, 3, 7, 15])).unwrap().members, vec![5, 9, 11, 13]);
        assert!(alt_sum_set(&en(&[1, 3])).unwrap().members.is_empty());
    }
}
