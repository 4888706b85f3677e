//! Orthonormal bases of grid vectors: incremental Gram–Schmidt with reorthogonalization,
//! and an SVD route for one-shot spans.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SVD};
use num_complex::Complex64;

/// Relative threshold below which a generator is treated as dependent.
pub const RANK_TOL: f64 = 1e-10;

/// Σ a·conj(b) over split real/imaginary arrays.
#[inline]
fn dot(ar: &[f64], ai: &[f64], br: &[f64], bi: &[f64]) -> (f64, f64) {
    const L: usize = 8;
    let mut re = [0.0f64; L];
    let mut im = [0.0f64; L];
    let n = ar.len() / L * L;
    for c in (0..n).step_by(L) {
        for l in 0..L {
            let (xr, xi, yr, yi) = (ar[c + l], ai[c + l], br[c + l], bi[c + l]);
            re[l] += xr * yr + xi * yi;
            im[l] += xi * yr - xr * yi;
        }
    }
    let mut sr: f64 = re.iter().sum();
    let mut si: f64 = im.iter().sum();
    for i in n..ar.len() {
        sr += ar[i] * br[i] + ai[i] * bi[i];
        si += ai[i] * br[i] - ar[i] * bi[i];
    }
    (sr, si)
}

/// a −= c·b.
#[inline]
fn axpy_sub(ar: &mut [f64], ai: &mut [f64], cr: f64, ci: f64, br: &[f64], bi: &[f64]) {
    for i in 0..ar.len() {
        ar[i] -= cr * br[i] - ci * bi[i];
        ai[i] -= cr * bi[i] + ci * br[i];
    }
}

/// Vectors q_1, q_2, … orthonormal for (u, v) = (1/N) Σ u v̄, stored split.
#[derive(Clone, Debug)]
pub struct OrthoBasis {
    n: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl OrthoBasis {
    pub fn new(n: usize) -> Self {
        OrthoBasis { n, re: Vec::new(), im: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        self.re[i].iter().zip(&self.im[i]).map(|(&a, &b)| Complex64::new(a, b)).collect()
    }

    /// Orthogonalizes `v` against the basis twice; appends it unless its remainder is
    /// below `tol` times its original norm. Returns whether it was appended.
    pub fn push(&mut self, v: &[Complex64], tol: f64) -> bool {
        let (mut wr, mut wi) = split(v);
        let orig = norm_split(&wr, &wi);
        if orig == 0.0 {
            return false;
        }
        for _ in 0..2 {
            for q in 0..self.len() {
                let (cr, ci) = dot(&wr, &wi, &self.re[q], &self.im[q]);
                let s = 1.0 / self.n as f64;
                axpy_sub(&mut wr, &mut wi, cr * s, ci * s, &self.re[q], &self.im[q]);
            }
        }
        let rest = norm_split(&wr, &wi);
        if rest <= tol * orig {
            return false;
        }
        let scale = libm::sqrt(self.n as f64) / rest;
        wr.iter_mut().for_each(|x| *x *= scale);
        wi.iter_mut().for_each(|x| *x *= scale);
        self.re.push(wr);
        self.im.push(wi);
        true
    }

    /// Inner products (v, q_i) for i < upto.
    pub fn coeffs(&self, v: &[Complex64], upto: usize) -> Vec<Complex64> {
        let (vr, vi) = split(v);
        let s = 1.0 / self.n as f64;
        (0..upto)
            .map(|q| {
                let (a, b) = dot(&vr, &vi, &self.re[q], &self.im[q]);
                Complex64::new(a * s, b * s)
            })
            .collect()
    }

    /// Σ c_i q_i.
    pub fn combine(&self, c: &[Complex64]) -> Vec<Complex64> {
        let mut or = vec![0.0; self.n];
        let mut oi = vec![0.0; self.n];
        for (q, z) in c.iter().enumerate() {
            axpy_sub(&mut or, &mut oi, -z.re, -z.im, &self.re[q], &self.im[q]);
        }
        or.into_iter().zip(oi).map(|(a, b)| Complex64::new(a, b)).collect()
    }

    /// Orthogonal projection onto the span of the first `upto` vectors.
    pub fn project(&self, v: &[Complex64], upto: usize) -> Vec<Complex64> {
        self.combine(&self.coeffs(v, upto))
    }
}

fn split(v: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
    (v.iter().map(|z| z.re).collect(), v.iter().map(|z| z.im).collect())
}

fn norm_split(r: &[f64], i: &[f64]) -> f64 {
    let (a, _) = dot(r, i, r, i);
    libm::sqrt(a)
}

/// Orthonormal basis (normalized inner product) of the column span of `generators`,
/// keeping left singular vectors with σ > tol·σ_max.
pub fn svd_basis(n: usize, generators: &[Vec<Complex64>], tol: f64) -> Vec<Vec<Complex64>> {
    if generators.is_empty() {
        return Vec::new();
    }
    let m = DMatrix::from_fn(n, generators.len(), |i, j| generators[j][i]);
    let svd = SVD::new(m, true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return Vec::new();
    }
    let root = libm::sqrt(n as f64);
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > tol * smax)
        .map(|(k, _)| (0..n).map(|i| u[(i, k)] * root).collect())
        .collect()
}
