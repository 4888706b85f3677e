//! Fixed-length bitsets over offsets 0..len, used for windowed semigroup sums.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn get(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        if i < self.len {
            self.words[i / 64] |= 1 << (i % 64);
        }
    }

    pub fn clear(&mut self, i: usize) {
        if i < self.len {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn or_assign(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// `self |= src << shift`, truncated to `len`.
    pub fn or_shifted(&mut self, src: &Bits, shift: usize) {
        if shift >= self.len {
            return;
        }
        let ws = shift / 64;
        let bs = shift % 64;
        let n = self.words.len();
        for i in (ws..n).rev() {
            let j = i - ws;
            let mut w = src.words.get(j).copied().unwrap_or(0) << bs;
            if bs > 0 && j > 0 {
                w |= src.words.get(j - 1).copied().unwrap_or(0) >> (64 - bs);
            }
            self.words[i] |= w;
        }
        self.trim();
    }

    /// Shifted copy `src << shift`.
    pub fn shifted(&self, shift: usize) -> Bits {
        let mut out = Bits::new(self.len);
        out.or_shifted(self, shift);
        out
    }

    /// Closure under adding multiples of `g` (g > 0): S ↦ S + gℕ.
    pub fn close_under(&mut self, g: usize) {
        assert!(g > 0);
        let mut step = g;
        while step < self.len {
            let snapshot = self.clone();
            self.or_shifted(&snapshot, step);
            step = step.saturating_mul(2);
        }
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    fn trim(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }
}
