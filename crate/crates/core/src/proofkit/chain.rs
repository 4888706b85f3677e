//! Projection families P onto V(D) = span{z^n·carrier : n ∈ D}, shared across nested D's.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::fourier::{fft, CharacterTable, GridSpec};
use crate::freq::{Freq, Lattice};
use crate::linalg::{OrthoBasis, RANK_TOL};

enum Backend {
    /// Generators z^n·h; levels index (basis, prefix rank).
    Carrier { bases: Vec<OrthoBasis>, levels: Vec<(usize, usize)> },
    /// Bare characters: projection is spectral masking.
    Characters { levels: Vec<Vec<Freq>> },
}

pub(crate) struct Chain {
    spec: GridSpec,
    table: CharacterTable,
    backend: Backend,
}

fn is_chain(levels: &[Vec<Freq>]) -> Option<Vec<usize>> {
    let mut order: Vec<usize> = (0..levels.len()).collect();
    order.sort_by_key(|&i| levels[i].len());
    for w in order.windows(2) {
        let big: BTreeSet<&Freq> = levels[w[1]].iter().collect();
        if !levels[w[0]].iter().all(|n| big.contains(n)) {
            return None;
        }
    }
    Some(order)
}

impl Chain {
    /// `carrier = None` selects bare characters.
    pub fn build(spec: &GridSpec, carrier: Option<&[Complex64]>, levels: &[Vec<Freq>]) -> Chain {
        let table = CharacterTable::new(spec);
        let backend = match carrier {
            None => Backend::Characters { levels: levels.to_vec() },
            Some(h) => {
                let n = spec.total();
                let generator = |m: &Freq| -> Vec<Complex64> {
                    table.eval(m).iter().zip(h).map(|(c, x)| c * x).collect()
                };
                match is_chain(levels) {
                    Some(order) => {
                        let mut basis = OrthoBasis::new(n);
                        let mut done: BTreeSet<Freq> = BTreeSet::new();
                        let mut lv = vec![(0, 0); levels.len()];
                        for &i in &order {
                            for m in &levels[i] {
                                if done.insert(m.clone()) {
                                    basis.push(&generator(m), RANK_TOL);
                                }
                            }
                            lv[i] = (0, basis.len());
                        }
                        Backend::Carrier { bases: vec![basis], levels: lv }
                    }
                    None => {
                        let mut bases = Vec::new();
                        let mut lv = Vec::new();
                        for (i, set) in levels.iter().enumerate() {
                            let mut b = OrthoBasis::new(n);
                            for m in set {
                                b.push(&generator(m), RANK_TOL);
                            }
                            lv.push((i, b.len()));
                            bases.push(b);
                        }
                        Backend::Carrier { bases, levels: lv }
                    }
                }
            }
        };
        Chain { spec: spec.clone(), table, backend }
    }

    pub fn rank(&self, level: usize) -> usize {
        match &self.backend {
            Backend::Carrier { levels, .. } => levels[level].1,
            Backend::Characters { levels } => levels[level].len(),
        }
    }

    fn demodulate(&self, v: &[Complex64], shift: Option<&Freq>) -> Vec<Complex64> {
        match shift {
            Some(s) => v.iter().zip(self.table.eval(s)).map(|(x, c)| x * c.conj()).collect(),
            None => v.to_vec(),
        }
    }

    fn modulate(&self, v: Vec<Complex64>, shift: Option<&Freq>) -> Vec<Complex64> {
        match shift {
            Some(s) => v.iter().zip(self.table.eval(s)).map(|(x, c)| x * c).collect(),
            None => v,
        }
    }

    /// z^s P_level z^{−s} v.
    pub fn project(&self, level: usize, shift: Option<&Freq>, v: &[Complex64]) -> Vec<Complex64> {
        match &self.backend {
            Backend::Carrier { bases, levels } => {
                let (b, r) = levels[level];
                if r == 0 {
                    return vec![Complex64::new(0.0, 0.0); v.len()];
                }
                let w = self.demodulate(v, shift);
                self.modulate(bases[b].project(&w, r), shift)
            }
            Backend::Characters { levels } => {
                let mut data = v.to_vec();
                fft::dft_nd(&mut data, &self.spec.dims, false);
                let scale = 1.0 / self.spec.total() as f64;
                let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
                for n in &levels[level] {
                    let m = match shift {
                        Some(s) => n.plus(s),
                        None => n.clone(),
                    };
                    let idx = self.spec.residue_index(&m);
                    out[idx] = data[idx] * scale;
                }
                fft::dft_nd(&mut out, &self.spec.dims, true);
                out
            }
        }
    }

    /// max |(v, z^s q)| over an orthonormal basis q of V(level).
    pub fn max_overlap(&self, level: usize, shift: Option<&Freq>, v: &[Complex64]) -> f64 {
        match &self.backend {
            Backend::Carrier { bases, levels } => {
                let (b, r) = levels[level];
                let w = self.demodulate(v, shift);
                bases[b].coeffs(&w, r).iter().map(|c| c.norm()).fold(0.0, f64::max)
            }
            Backend::Characters { levels } => {
                let w = self.demodulate(v, shift);
                let mut data = w;
                fft::dft_nd(&mut data, &self.spec.dims, false);
                let scale = 1.0 / self.spec.total() as f64;
                levels[level].iter().map(|n| (data[self.spec.residue_index(n)] * scale).norm()).fold(0.0, f64::max)
            }
        }
    }

    pub fn characters(&self) -> &CharacterTable {
        &self.table
    }
}
