//! Schur sets and the G_j / D_j families for increasing enumerations.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::freq::{Enumeration, Lattice, SetReport, Window};

/// Largest offset range a windowed semigroup computation may allocate.
pub const MAX_SPAN: i64 = 1 << 28;

/// Whether ε (with partial sums s_i) satisfies the four Schur conditions.
pub fn satisfies_schur_conditions(eps: &[i64]) -> bool {
    let mut s = 0i64;
    let mut seen_positive = false;
    let mut big = false;
    for &e in eps {
        s += e;
        if s < 0 || (seen_positive && s <= 0) {
            return false;
        }
        seen_positive |= s > 0;
        big |= s > 1;
    }
    !eps.is_empty() && s == 1 && big
}

/// All ε with |ε_i| ≤ bound satisfying the four conditions, in lexicographic order.
pub fn admissible_sign_vectors(len: usize, bound: i64) -> Vec<Vec<i64>> {
    fn rec(len: usize, bound: i64, cur: &mut Vec<i64>, s: i64, pos: bool, big: bool, out: &mut Vec<Vec<i64>>) {
        let i = cur.len();
        if i == len {
            if s == 1 && big {
                out.push(cur.clone());
            }
            return;
        }
        // the remaining steps must bring s back to 1
        let remaining = (len - i) as i64;
        for e in -bound..=bound {
            let t = s + e;
            if t < 0 || (pos && t == 0) || (t - 1).abs() > (remaining - 1) * bound {
                continue;
            }
            cur.push(e);
            rec(len, bound, cur, t, pos || t > 0, big || t > 1, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if len > 0 {
        rec(len, bound, &mut Vec::new(), 0, false, false, &mut out);
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Phase {
    Zero,
    Pos,
}

/// Values Σε_j k_j over ε with |ε_j| ≤ bound meeting the four conditions, filtered by `keep`.
///
/// Forward dynamic programme over (partial sum, phase, "some partial sum > 1").
pub fn schur_bounded<T: Lattice>(k: &[T], bound: i64, keep: impl Fn(&T) -> bool) -> BTreeSet<T> {
    let j_len = k.len();
    let mut out = BTreeSet::new();
    if j_len == 0 {
        return out;
    }
    let zero = k[0].zero_like();
    let mut states: BTreeMap<(i64, Phase, bool), BTreeSet<T>> = BTreeMap::new();
    states.insert((0, Phase::Zero, false), BTreeSet::from([zero]));
    for (i, ki) in k.iter().enumerate() {
        let remaining = (j_len - i - 1) as i64;
        let mut next: BTreeMap<(i64, Phase, bool), BTreeSet<T>> = BTreeMap::new();
        for ((s, phase, big), vals) in &states {
            for e in -bound..=bound {
                let t = s + e;
                if t < 0 || (*phase == Phase::Pos && t == 0) || (t - 1).abs() > remaining * bound {
                    continue;
                }
                let ph = if t > 0 { Phase::Pos } else { *phase };
                let key = (t, ph, *big || t > 1);
                let add = ki.times(e);
                let slot = next.entry(key).or_default();
                for v in vals {
                    slot.insert(v.plus(&add));
                }
            }
        }
        states = next;
    }
    for ((s, _, big), vals) in states {
        if s == 1 && big {
            out.extend(vals.into_iter().filter(|v| keep(v)));
        }
    }
    out
}

/// Smallest coefficient bound that makes the ε-search complete on `w`, for increasing `e`.
///
/// Every member has m = k_J − Σ_{i<J} s_iΔk_i with s_i ≥ 0, so s_i ≤ (k_J − lo)/min Δk
/// and |ε_i| = |s_i − s_{i−1}| is bounded by the same quantity (and by 1 for ε_J's share).
pub fn schur_exact_bound(e: &Enumeration<i64>, w: Window) -> Option<u64> {
    if !e.is_increasing() || e.len() < 2 {
        return if e.len() < 2 { Some(1) } else { None };
    }
    let min_gap = *e.gaps().iter().min()?;
    let top = *e.k(e.len());
    let span = (top - w.lo).max(0);
    Some(((span / min_gap) as u64).max(1))
}

fn check_span(span: i64) -> Result<()> {
    if span > MAX_SPAN {
        return Err(Error::InvalidWindow(alloc::format!("offset range {span} exceeds {MAX_SPAN}")));
    }
    Ok(())
}

/// Schur((k_j)) ∩ w from the ε-characterization.
pub fn schur_set(e: &Enumeration<i64>, w: Window, coeff_bound: u64) -> Result<SetReport<i64>> {
    if e.len() < 2 {
        return Ok(SetReport::empty());
    }
    match schur_exact_bound(e, w) {
        Some(need) if coeff_bound >= need => schur_increasing(e, w),
        _ => {
            let found = schur_bounded(e.entries(), coeff_bound as i64, |m| w.contains(*m));
            Ok(SetReport::from_set(found, false))
        }
    }
}

/// Exact ε-search for increasing enumerations via partial-sum states.
///
/// m = k_J − T with T = Σ_{i<J} s_iΔk_i. Tracked states: all partial sums zero so far,
/// positive with every s_i = 1, positive with some s_i ≥ 2. Offsets T live in a bitset.
fn schur_increasing(e: &Enumeration<i64>, w: Window) -> Result<SetReport<i64>> {
    let top = *e.k(e.len());
    let span = top - w.lo;
    if span < 0 {
        return Ok(SetReport::empty());
    }
    check_span(span)?;
    let len = span as usize + 1;
    let mut one = Bits::new(len);
    let mut many = Bits::new(len);
    let zero = true;
    for g in e.gaps() {
        let g = g as usize;
        let mut m2 = one.shifted(2 * g);
        m2.or_shifted(&many, g);
        if zero && 2 * g < len {
            m2.set(2 * g);
        }
        m2.close_under(g);
        let mut o2 = one.shifted(g);
        if zero {
            o2.set(g);
        }
        one = o2;
        many = m2;
    }
    let members: BTreeSet<i64> =
        many.ones().map(|t| top - t as i64).filter(|m| w.contains(*m)).collect();
    Ok(SetReport::from_set(members, true))
}

fn require_increasing(e: &Enumeration<i64>) -> Result<()> {
    if e.is_increasing() {
        Ok(())
    } else {
        Err(Error::NotIncreasing)
    }
}

/// Numerical semigroups of suffix gaps: `out[p]` holds offsets y ∈ [0, len) in the
/// semigroup generated by Δk_p, …, Δk_{J−1} (0-based p; `out[J−1]` = {0}).
fn suffix_semigroups(gaps: &[i64], len: usize) -> Vec<Bits> {
    let mut cur = Bits::new(len);
    cur.set(0);
    let mut out = vec![cur.clone(); gaps.len() + 1];
    for p in (0..gaps.len()).rev() {
        cur.close_under(gaps[p] as usize);
        out[p] = cur.clone();
    }
    out
}

/// Schur((k_j)) ∩ w from the gap representation k_i − Σ_{j'≥i} n_{j'}Δk_{j'}.
pub fn schur_set_via_gaps(e: &Enumeration<i64>, w: Window) -> Result<SetReport<i64>> {
    require_increasing(e)?;
    let j_len = e.len();
    if j_len < 2 {
        return Ok(SetReport::empty());
    }
    let span = e.k(j_len - 1) - w.lo;
    if span < 0 {
        return Ok(SetReport::empty());
    }
    check_span(span)?;
    let sg = suffix_semigroups(&e.gaps(), span as usize + 1);
    let mut members = BTreeSet::new();
    for i in 1..j_len {
        let ki = *e.k(i);
        for y in sg[i - 1].ones().filter(|&y| y > 0) {
            let m = ki - y as i64;
            if w.contains(m) {
                members.insert(m);
            }
        }
    }
    Ok(SetReport::from_set(members, true))
}

fn check_j(j: usize, lo: usize, hi: usize) -> Result<()> {
    if j < lo || j > hi {
        return Err(Error::IndexOutOfRange { index: j, min: lo, max: hi });
    }
    Ok(())
}

/// G_{j+1} ∩ w in the uniform (elected) definition.
pub fn g_set(j: usize, e: &Enumeration<i64>, w: Window) -> Result<SetReport<i64>> {
    require_increasing(e)?;
    let j_len = e.len();
    check_j(j, 1, j_len.saturating_sub(1))?;
    let span = (e.k(j_len) - w.lo).max(0);
    check_span(span)?;
    let sg = suffix_semigroups(&e.gaps(), span as usize + 1);
    let mut members = BTreeSet::new();
    for i in 1..=(j + 1).min(j_len - 1) {
        let ki = *e.k(i);
        for y in sg[i - 1].ones() {
            if i == j + 1 && y == 0 {
                continue;
            }
            let m = ki - y as i64;
            if w.contains(m) {
                members.insert(m);
            }
        }
    }
    Ok(SetReport::from_set(members, true))
}

/// G_{j+1} ∩ w in the pre-election description (extra constraints when i = 1).
pub fn g_set_pre_election(j: usize, e: &Enumeration<i64>, w: Window) -> Result<SetReport<i64>> {
    require_increasing(e)?;
    let j_len = e.len();
    check_j(j, 1, j_len.saturating_sub(1))?;
    let span = (e.k(j_len) - w.lo).max(0);
    check_span(span)?;
    let len = span as usize + 1;
    let gaps = e.gaps();
    let sg = suffix_semigroups(&gaps, len);
    let mut members = BTreeSet::new();
    for i in 2..=(j + 1).min(j_len - 1) {
        let ki = *e.k(i);
        for y in sg[i - 1].ones() {
            if i == j + 1 && y == 0 {
                continue;
            }
            let m = ki - y as i64;
            if w.contains(m) {
                members.insert(m);
            }
        }
    }
    // i = 1: n_1 = 0, indices 2..=j free, indices ≥ j+1 a gap-free block starting at j+1
    let mut low = Bits::new(len);
    low.set(0);
    for g in gaps.iter().take(j).skip(1) {
        low.close_under(*g as usize);
    }
    let mut high = Bits::new(len);
    high.set(0);
    let mut block = Bits::new(len);
    for (b, g) in gaps.iter().enumerate().skip(j) {
        // block sums over j+1..=b+1 (1-based) with all coefficients ≥ 1
        let mut nb = if b == j {
            let mut s = Bits::new(len);
            s.set(0);
            s.shifted(*g as usize)
        } else {
            block.shifted(*g as usize)
        };
        nb.close_under(*g as usize);
        block = nb;
        high.or_assign(&block);
    }
    let mut sum = Bits::new(len);
    for h in high.ones() {
        sum.or_shifted(&low, h);
    }
    let k1 = *e.k(1);
    for y in sum.ones() {
        let m = k1 - y as i64;
        if w.contains(m) {
            members.insert(m);
        }
    }
    Ok(SetReport::from_set(members, true))
}

/// D_j ∩ w: −Σ n_{j'}Δk_{j'} with n ≥ 0 not all zero, where the nonzero indices j' ≤ j
/// form a gap-free block containing j (or are absent). D_J = ∅.
///
/// This equals G_{j+1} − k_{j+1}, which is what the proof uses.
pub fn d_set(j: usize, e: &Enumeration<i64>, w: Window) -> Result<SetReport<i64>> {
    require_increasing(e)?;
    let j_len = e.len();
    check_j(j, 1, j_len)?;
    if j == j_len || w.lo >= 0 {
        return Ok(SetReport::empty());
    }
    let span = -w.lo;
    check_span(span)?;
    let len = span as usize + 1;
    let gaps = e.gaps();
    // low block: sums over a..=j (1-based) with coefficients ≥ 1, for any a ≤ j, plus 0
    let mut low = Bits::new(len);
    low.set(0);
    let mut block = Bits::new(len);
    block.set(0);
    for a in (0..j).rev() {
        let g = gaps[a] as usize;
        block = block.shifted(g);
        block.close_under(g);
        low.or_assign(&block);
    }
    for g in &gaps[j..] {
        low.close_under(*g as usize);
    }
    let members: BTreeSet<i64> = low
        .ones()
        .filter(|&y| y > 0)
        .map(|y| -(y as i64))
        .filter(|m| w.contains(*m))
        .collect();
    Ok(SetReport::from_set(members, true))
}

/// m <_j* n, i.e. m − n ∈ D_j; the difference must lie in `w`.
pub fn preorder_less(j: usize, m: i64, n: i64, e: &Enumeration<i64>, w: Window) -> Result<bool> {
    let x = m - n;
    if !w.contains(x) {
        return Err(Error::Undecidable);
    }
    Ok(!d_set(j, e, Window { lo: x, hi: x })?.members.is_empty())
}
