//! Frequencies, enumerations and windows.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of ℤ^d. JSON form: an integer when d = 1, an array otherwise.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Freq(pub Vec<i64>);

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FreqRepr {
    Scalar(i64),
    Vector(Vec<i64>),
}

impl Serialize for Freq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        match self.as_scalar() {
            Some(n) => FreqRepr::Scalar(n).serialize(s),
            None => FreqRepr::Vector(self.0.clone()).serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Freq {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        match FreqRepr::deserialize(d)? {
            FreqRepr::Scalar(n) => Ok(Freq::scalar(n)),
            FreqRepr::Vector(v) if !v.is_empty() => Ok(Freq(v)),
            FreqRepr::Vector(_) => Err(serde::de::Error::custom("empty frequency")),
        }
    }
}

impl Freq {
    pub fn scalar(n: i64) -> Self {
        Freq(vec![n])
    }

    pub fn zero(dim: usize) -> Self {
        Freq(vec![0; dim])
    }

    /// The `j`-th standard basis vector of ℤ^dim (0-based).
    pub fn unit(dim: usize, j: usize) -> Self {
        let mut v = vec![0; dim];
        v[j] = 1;
        Freq(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// The integer of a one-dimensional frequency.
    pub fn as_scalar(&self) -> Option<i64> {
        match self.0.as_slice() {
            [n] => Some(*n),
            _ => None,
        }
    }

    /// Concatenation (used for lifted frequencies).
    pub fn concat(&self, other: &Freq) -> Freq {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Freq(v)
    }
}

impl fmt::Display for Freq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_scalar() {
            return write!(f, "{n}");
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Additive group operations shared by ℤ and ℤ^d.
pub trait Lattice: Clone + Ord + fmt::Debug + fmt::Display {
    fn zero_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, m: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn dim(&self) -> usize;
}

impl Lattice for i64 {
    fn zero_like(&self) -> Self {
        0
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, m: i64) -> Self {
        self * m
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn dim(&self) -> usize {
        1
    }
}

impl Lattice for Freq {
    fn zero_like(&self) -> Self {
        Freq::zero(self.0.len())
    }
    fn plus(&self, other: &Self) -> Self {
        Freq(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
    fn minus(&self, other: &Self) -> Self {
        Freq(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
    fn times(&self, m: i64) -> Self {
        Freq(self.0.iter().map(|a| a * m).collect())
    }
    fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
    fn dim(&self) -> usize {
        self.0.len()
    }
}

/// A finite sequence of distinct frequencies, in the given order.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(transparent)]
pub struct Enumeration<T> {
    entries: Vec<T>,
}

impl<T: Lattice> Enumeration<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        if let Some(first) = entries.first() {
            let d = first.dim();
            for e in &entries {
                if e.dim() != d {
                    return Err(Error::DimensionMismatch { expected: d, found: e.dim() });
                }
            }
        }
        for e in &entries {
            if !seen.insert(e.clone()) {
                return Err(Error::DuplicateEntry(format!("{e}")));
            }
        }
        Ok(Enumeration { entries })
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry `j` with 1-based indexing, matching k_1, …, k_J.
    pub fn k(&self, j: usize) -> &T {
        &self.entries[j - 1]
    }
}

impl Enumeration<i64> {
    pub fn is_increasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] < w[1])
    }

    /// Gaps Δk_j = k_{j+1} − k_j for j = 1..J−1 (stored 0-based).
    pub fn gaps(&self) -> Vec<i64> {
        self.entries.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn to_freqs(&self) -> Enumeration<Freq> {
        Enumeration { entries: self.entries.iter().map(|&n| Freq::scalar(n)).collect() }
    }
}

impl<'de, T: Lattice + Deserialize<'de>> Deserialize<'de> for Enumeration<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let v = Vec::<T>::deserialize(d)?;
        Enumeration::new(v).map_err(serde::de::Error::custom)
    }
}

/// A closed integer interval [lo, hi].
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "[i64; 2]", into = "[i64; 2]")]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidWindow(format!("{lo} > {hi}")));
        }
        Ok(Window { lo, hi })
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    pub fn width(&self) -> u64 {
        (self.hi - self.lo) as u64 + 1
    }
}

impl TryFrom<[i64; 2]> for Window {
    type Error = Error;
    fn try_from(v: [i64; 2]) -> Result<Self> {
        Window::new(v[0], v[1])
    }
}

impl From<Window> for [i64; 2] {
    fn from(w: Window) -> Self {
        [w.lo, w.hi]
    }
}

/// A componentwise closed box in ℤ^d.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BoxWindow {
    pub lo: Freq,
    pub hi: Freq,
}

impl BoxWindow {
    pub fn new(lo: Freq, hi: Freq) -> Result<Self> {
        if lo.dim() != hi.dim() {
            return Err(Error::DimensionMismatch { expected: lo.dim(), found: hi.dim() });
        }
        if lo.0.iter().zip(&hi.0).any(|(a, b)| a > b) {
            return Err(Error::InvalidWindow(format!("{lo} > {hi}")));
        }
        Ok(BoxWindow { lo, hi })
    }

    /// The symmetric box [−M, M] per axis.
    pub fn symmetric(half: &[i64]) -> Self {
        BoxWindow {
            lo: Freq(half.iter().map(|m| -m).collect()),
            hi: Freq(half.to_vec()),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn contains(&self, n: &Freq) -> bool {
        n.dim() == self.dim()
            && n.0.iter().zip(self.lo.0.iter().zip(&self.hi.0)).all(|(x, (a, b))| a <= x && x <= b)
    }

    /// All points of the box in lexicographic order.
    pub fn points(&self) -> Vec<Freq> {
        let mut out = Vec::new();
        let mut cur = self.lo.0.clone();
        if cur.is_empty() {
            return out;
        }
        loop {
            out.push(Freq(cur.clone()));
            let mut a = cur.len();
            loop {
                if a == 0 {
                    return out;
                }
                a -= 1;
                if cur[a] < self.hi.0[a] {
                    cur[a] += 1;
                    break;
                }
                cur[a] = self.lo.0[a];
            }
        }
    }
}

/// Members of a windowed set plus a completeness flag.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SetReport<T> {
    pub members: Vec<T>,
    pub exact: bool,
}

impl<T: Ord> SetReport<T> {
    pub fn from_set(set: BTreeSet<T>, exact: bool) -> Self {
        SetReport { members: set.into_iter().collect(), exact }
    }

    pub fn empty() -> Self {
        SetReport { members: Vec::new(), exact: true }
    }

    pub fn contains(&self, x: &T) -> bool {
        self.members.binary_search(x).is_ok()
    }
}
