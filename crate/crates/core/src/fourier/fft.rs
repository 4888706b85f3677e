//! Discrete Fourier transforms along one axis: radix-2 for powers of two, direct otherwise.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

/// e^{−2πi r/n} for r = 0..n, computed per entry (no accumulated rotation error).
pub fn twiddles(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|r| {
            let a = -2.0 * PI * (r as f64) / (n as f64);
            Complex64::new(libm::cos(a), libm::sin(a))
        })
        .collect()
}

/// Unnormalized transform X_r = Σ_i x_i e^{∓2πi r i/n}; `inverse` selects the + sign.
pub fn dft(buf: &mut [Complex64], inverse: bool) {
    let n = buf.len();
    if n <= 1 {
        return;
    }
    dft_with(buf, &twiddles(n), inverse);
}

/// As [`dft`], with a precomputed twiddle table of matching length.
pub fn dft_with(buf: &mut [Complex64], tw: &[Complex64], inverse: bool) {
    let n = buf.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        radix2(buf, tw, inverse);
    } else {
        direct(buf, tw, inverse);
    }
}

fn direct(buf: &mut [Complex64], tw: &[Complex64], inverse: bool) {
    let n = buf.len();
    let src = buf.to_vec();
    for (r, out) in buf.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, x) in src.iter().enumerate() {
            let w = tw[(r * i) % n];
            acc += x * if inverse { w.conj() } else { w };
        }
        *out = acc;
    }
}

fn radix2(buf: &mut [Complex64], tw: &[Complex64], inverse: bool) {
    let n = buf.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let step = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let w = tw[k * step];
                let w = if inverse { w.conj() } else { w };
                let a = buf[start + k];
                let b = buf[start + k + len / 2] * w;
                buf[start + k] = a + b;
                buf[start + k + len / 2] = a - b;
            }
        }
        len <<= 1;
    }
}

/// Applies `dft` along every axis of a row-major array with the given axis sizes.
pub fn dft_nd(data: &mut [Complex64], dims: &[usize], inverse: bool) {
    let total: usize = dims.iter().product();
    debug_assert_eq!(total, data.len());
    let mut line = Vec::new();
    for (a, &n) in dims.iter().enumerate() {
        if n <= 1 {
            continue;
        }
        let stride: usize = dims[a + 1..].iter().product();
        let outer = total / (n * stride);
        let tw = twiddles(n);
        for o in 0..outer {
            for s in 0..stride {
                let base = o * n * stride + s;
                line.clear();
                line.extend((0..n).map(|i| data[base + i * stride]));
                dft_with(&mut line, &tw, inverse);
                for (i, v) in line.iter().enumerate() {
                    data[base + i * stride] = *v;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|r| {
                x.iter()
                    .enumerate()
                    .map(|(i, v)| {
                        let a = -2.0 * PI * ((r * i) % n) as f64 / n as f64;
                        v * Complex64::new(libm::cos(a), libm::sin(a))
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn radix2_matches_naive() {
        let x: Vec<Complex64> = (0..64).map(|i| Complex64::new((i * 7 % 11) as f64, (i % 5) as f64 - 2.0)).collect();
        let mut y = x.clone();
        dft(&mut y, false);
        for (a, b) in y.iter().zip(naive(&x)) {
            assert!((a - b).norm() < 1e-10);
        }
        dft(&mut y, true);
        for (a, b) in y.iter().zip(&x) {
            assert!((a / 64.0 - b).norm() < 1e-12);
        }
    }

    #[test]
    fn direct_roundtrip() {
        let x: Vec<Complex64> = (0..12).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let mut y = x.clone();
        dft(&mut y, false);
        dft(&mut y, true);
        for (a, b) in y.iter().zip(&x) {
            assert!((a / 12.0 - b).norm() < 1e-12);
        }
    }
}
