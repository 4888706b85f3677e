//! Uniform grids on the circle and on finite products of circles, with exact discrete
//! Fourier coefficients for windowed trigonometric polynomials.

pub mod fft;
mod riesz;

pub use riesz::{riesz_expansion, riesz_polynomial, Dyadic, RieszExpansion};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freq::{BoxWindow, Freq};

/// Axis sizes N_a and window half-widths M_a, with N_a ≥ 2M_a + 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridSpec {
    pub dims: Vec<usize>,
    pub half: Vec<i64>,
}

impl GridSpec {
    pub fn new(dims: Vec<usize>, half: Vec<i64>) -> Result<Self> {
        if dims.is_empty() || dims.len() != half.len() {
            return Err(Error::InvalidGrid(format!("{} axes but {} window widths", dims.len(), half.len())));
        }
        for (&n, &m) in dims.iter().zip(&half) {
            if n == 0 || m < 0 || (2 * m + 1) as usize > n {
                return Err(Error::InvalidGrid(format!("axis of size {n} cannot hold window half-width {m}")));
            }
        }
        Ok(GridSpec { dims, half })
    }

    pub fn line(n: usize, m: i64) -> Result<Self> {
        GridSpec::new(vec![n], vec![m])
    }

    /// One axis with window [−M, M] and N the next power of two ≥ 2M + 2.
    pub fn for_max_freq(m: i64) -> Self {
        let n = ((2 * m + 2) as usize).next_power_of_two();
        GridSpec { dims: vec![n], half: vec![m] }
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn window(&self) -> BoxWindow {
        BoxWindow::symmetric(&self.half)
    }

    pub fn contains(&self, n: &Freq) -> bool {
        n.dim() == self.dim() && n.0.iter().zip(&self.half).all(|(x, m)| x.abs() <= *m)
    }

    pub fn check(&self, n: &Freq) -> Result<()> {
        if n.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: n.dim() });
        }
        if !self.contains(n) {
            return Err(Error::OutsideWindow(format!("{n}")));
        }
        Ok(())
    }

    /// Flat index of the residue class of `n` (row-major, axis 0 slowest).
    pub fn residue_index(&self, n: &Freq) -> usize {
        let mut idx = 0usize;
        for (&x, &len) in n.0.iter().zip(&self.dims) {
            idx = idx * len + x.rem_euclid(len as i64) as usize;
        }
        idx
    }

    /// Representative of a residue index with each coordinate in [−⌊(N−1)/2⌋, ⌊N/2⌋].
    pub fn representative(&self, mut idx: usize) -> Freq {
        let mut out = vec![0i64; self.dim()];
        for a in (0..self.dim()).rev() {
            let len = self.dims[a];
            let r = (idx % len) as i64;
            idx /= len;
            out[a] = if r > len as i64 / 2 { r - len as i64 } else { r };
        }
        Freq(out)
    }

    /// Samples of the character e^{i n·t} on the grid.
    pub fn character(&self, n: &Freq) -> Vec<Complex64> {
        CharacterTable::new(self).eval(n)
    }
}

/// Per-axis tables of e^{2πi r/N_a}, for evaluating characters by lookup.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    dims: Vec<usize>,
    tables: Vec<Vec<Complex64>>,
}

impl CharacterTable {
    pub fn new(spec: &GridSpec) -> Self {
        let tables = spec.dims.iter().map(|&len| fft::twiddles(len).into_iter().map(|w| w.conj()).collect()).collect();
        CharacterTable { dims: spec.dims.clone(), tables }
    }

    /// Samples of e^{i n·t}.
    pub fn eval(&self, n: &Freq) -> Vec<Complex64> {
        let rows: Vec<Vec<Complex64>> = self
            .dims
            .iter()
            .zip(&self.tables)
            .zip(&n.0)
            .map(|((&len, table), &k)| {
                let k = k.rem_euclid(len as i64) as usize;
                (0..len).map(|i| table[(k * i) % len]).collect()
            })
            .collect();
        outer_product(&rows)
    }
}

fn outer_product(tables: &[Vec<Complex64>]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(1.0, 0.0)];
    for t in tables {
        let mut next = Vec::with_capacity(out.len() * t.len());
        for a in &out {
            for b in t {
                next.push(a * b);
            }
        }
        out = next;
    }
    out
}

/// Complex samples on a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub spec: GridSpec,
    pub samples: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(spec: GridSpec, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != spec.total() {
            return Err(Error::InvalidGrid(format!("{} samples for {} grid points", samples.len(), spec.total())));
        }
        Ok(GridFunction { spec, samples })
    }

    pub fn zeros(spec: &GridSpec) -> Self {
        GridFunction { spec: spec.clone(), samples: vec![Complex64::new(0.0, 0.0); spec.total()] }
    }

    pub fn constant(spec: &GridSpec, c: Complex64) -> Self {
        GridFunction { spec: spec.clone(), samples: vec![c; spec.total()] }
    }

    pub fn character(spec: &GridSpec, n: &Freq) -> Self {
        GridFunction { spec: spec.clone(), samples: spec.character(n) }
    }

    /// Samples `f` at the grid points t_a = 2π i_a / N_a.
    pub fn from_fn(spec: &GridSpec, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let mut t = vec![0.0; spec.dim()];
        let samples = (0..spec.total())
            .map(|mut idx| {
                for a in (0..spec.dim()).rev() {
                    let len = spec.dims[a];
                    t[a] = 2.0 * PI * (idx % len) as f64 / len as f64;
                    idx /= len;
                }
                f(&t)
            })
            .collect();
        GridFunction { spec: spec.clone(), samples }
    }

    fn same(&self, other: &GridFunction) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch);
        }
        Ok(())
    }

    /// (1/N) Σ f(t_i) e^{−i n·t_i}.
    pub fn coeff(&self, n: &Freq) -> Result<Complex64> {
        self.spec.check(n)?;
        Ok(self.coeff_unchecked(n))
    }

    /// Coefficient of the residue class of `n`, without the window check.
    pub fn coeff_unchecked(&self, n: &Freq) -> Complex64 {
        let chi = self.spec.character(n);
        let s: Complex64 = self.samples.iter().zip(&chi).map(|(f, c)| f * c.conj()).sum();
        s / self.spec.total() as f64
    }

    /// Coefficients of every residue class, indexed by [`GridSpec::residue_index`].
    pub fn all_coefficients(&self) -> Vec<Complex64> {
        let mut data = self.samples.clone();
        fft::dft_nd(&mut data, &self.spec.dims, false);
        let scale = 1.0 / self.spec.total() as f64;
        for v in &mut data {
            *v *= scale;
        }
        data
    }

    /// Windowed spectrum (every frequency of the window, zeros included).
    pub fn spectrum(&self) -> Spectrum {
        let all = self.all_coefficients();
        let mut coeffs = BTreeMap::new();
        for n in self.spec.window().points() {
            coeffs.insert(n.clone(), all[self.spec.residue_index(&n)]);
        }
        Spectrum { dim: self.spec.dim(), coeffs }
    }

    pub fn norm_l1(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).sum::<f64>() / self.samples.len() as f64
    }

    pub fn norm_l2(&self) -> f64 {
        libm::sqrt(self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.samples.len() as f64)
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// (1/N) Σ f ḡ.
    pub fn inner(&self, other: &GridFunction) -> Result<Complex64> {
        self.same(other)?;
        Ok(inner(&self.samples, &other.samples))
    }

    pub fn modulate(&self, k: &Freq) -> Result<GridFunction> {
        if k.dim() != self.spec.dim() {
            return Err(Error::DimensionMismatch { expected: self.spec.dim(), found: k.dim() });
        }
        let chi = self.spec.character(k);
        Ok(GridFunction { spec: self.spec.clone(), samples: self.samples.iter().zip(&chi).map(|(a, b)| a * b).collect() })
    }

    pub fn conj(&self) -> GridFunction {
        GridFunction { spec: self.spec.clone(), samples: self.samples.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, c: Complex64) -> GridFunction {
        GridFunction { spec: self.spec.clone(), samples: self.samples.iter().map(|z| z * c).collect() }
    }

    pub fn mul(&self, other: &GridFunction) -> Result<GridFunction> {
        self.same(other)?;
        Ok(GridFunction { spec: self.spec.clone(), samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).collect() })
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        self.same(other)?;
        Ok(GridFunction { spec: self.spec.clone(), samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.same(other)?;
        Ok(GridFunction { spec: self.spec.clone(), samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a - b).collect() })
    }
}

/// (1/N) Σ a b̄ on raw sample vectors.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let s: Complex64 = a.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
    s / a.len() as f64
}

/// Normalized L² norm of a raw sample vector.
pub fn norm2(a: &[Complex64]) -> f64 {
    libm::sqrt(a.iter().map(|z| z.norm_sqr()).sum::<f64>() / a.len() as f64)
}

/// A finitely supported map frequency → coefficient.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Spectrum {
    pub dim: usize,
    pub coeffs: BTreeMap<Freq, Complex64>,
}

impl Spectrum {
    pub fn new(dim: usize) -> Self {
        Spectrum { dim, coeffs: BTreeMap::new() }
    }

    pub fn single(n: Freq, c: Complex64) -> Self {
        let dim = n.dim();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(n, c);
        Spectrum { dim, coeffs }
    }

    pub fn insert(&mut self, n: Freq, c: Complex64) {
        self.coeffs.insert(n, c);
    }

    pub fn get(&self, n: &Freq) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// Samples Σ s(n) e^{i n·t}; the support must lie in the window.
    pub fn synth(&self, spec: &GridSpec) -> Result<GridFunction> {
        let mut data = vec![Complex64::new(0.0, 0.0); spec.total()];
        for (n, c) in &self.coeffs {
            spec.check(n)?;
            data[spec.residue_index(n)] += c;
        }
        fft::dft_nd(&mut data, &spec.dims, true);
        GridFunction::new(spec.clone(), data)
    }

    /// ℓ² norm of the coefficients on `k`.
    pub fn restricted_norm(&self, k: &[Freq]) -> f64 {
        libm::sqrt(k.iter().map(|n| self.get(n).norm_sqr()).sum())
    }
}

impl Serialize for Spectrum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        let rows: Vec<(&Freq, f64, f64)> = self.coeffs.iter().map(|(n, c)| (n, c.re, c.im)).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Spectrum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let rows = Vec::<(Freq, f64, f64)>::deserialize(d)?;
        let mut out = Spectrum::default();
        for (n, re, im) in rows {
            if out.coeffs.is_empty() {
                out.dim = n.dim();
            } else if n.dim() != out.dim {
                return Err(serde::de::Error::custom("mixed frequency dimensions"));
            }
            *out.coeffs.entry(n).or_default() += Complex64::new(re, im);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn eight_point_coefficient() {
        let spec = GridSpec::line(8, 3).unwrap();
        let f = GridFunction::from_fn(&spec, |t| c(1.0) + Complex64::new(0.0, 2.0 * t[0]).exp());
        assert!((f.coeff(&Freq::scalar(2)).unwrap() - c(1.0)).norm() < 1e-15);
        assert!(f.coeff(&Freq::scalar(1)).unwrap().norm() < 1e-15);
        assert!(f.coeff(&Freq::scalar(4)).is_err());
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::line(8, 4).is_err());
        assert!(GridSpec::line(9, 4).is_ok());
        assert_eq!(GridSpec::for_max_freq(7).dims, vec![16]);
    }

    #[test]
    fn representatives() {
        let spec = GridSpec::new(vec![8, 3], vec![3, 1]).unwrap();
        for n in spec.window().points() {
            assert_eq!(spec.representative(spec.residue_index(&n)), n);
        }
    }

    #[test]
    fn empty_spectrum_is_zero() {
        let spec = GridSpec::line(16, 5).unwrap();
        let f = Spectrum::new(1).synth(&spec).unwrap();
        assert_eq!(f.max_abs(), 0.0);
    }

    #[test]
    fn spectrum_json_rows() {
        let s = Spectrum::single(Freq::scalar(3), Complex64::new(1.0, -2.0));
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, "[[3,1.0,-2.0]]");
        let back: Spectrum = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }
}
