use num_complex::Complex64;
use paley_core::fourier::{riesz_expansion, riesz_polynomial, Dyadic};
use paley_core::{Freq, GridFunction, GridSpec, Spectrum};
use proptest::prelude::*;

fn spectrum_strategy(m: i64) -> impl Strategy<Value = Spectrum> {
    prop::collection::btree_map(-m..=m, (-1.0f64..1.0, -1.0f64..1.0), 0..40).prop_map(|mp| {
        let mut s = Spectrum::new(1);
        for (n, (re, im)) in mp {
            s.insert(Freq::scalar(n), Complex64::new(re, im));
        }
        s
    })
}

#[test]
fn character_coefficients_are_exact() {
    let spec = GridSpec::line(64, 20).unwrap();
    for k in -20..=20 {
        let f = GridFunction::character(&spec, &Freq::scalar(k));
        for n in -20..=20 {
            let c = f.coeff(&Freq::scalar(n)).unwrap();
            let want = if n == k { 1.0 } else { 0.0 };
            assert!((c - want).norm() < 1e-14);
        }
    }
}

#[test]
fn l1_of_one_plus_z_squared() {
    let spec = GridSpec::line(1024, 2).unwrap();
    let f = GridFunction::from_fn(&spec, |t| Complex64::new(1.0, 0.0) + Complex64::new(0.0, 2.0 * t[0]).exp());
    assert!((f.norm_l1() - 4.0 / std::f64::consts::PI).abs() < 1e-4);
    assert_eq!(GridFunction::zeros(&spec).norm_l1(), 0.0);
    assert!((GridFunction::character(&spec, &Freq::scalar(2)).norm_l1() - 1.0).abs() < 1e-15);
}

#[test]
fn inner_is_coefficient_of_product() {
    let spec = GridSpec::line(32, 6).unwrap();
    let g = GridFunction::from_fn(&spec, |t| Complex64::new(t[0].cos(), (2.0 * t[0]).sin()));
    let h = GridFunction::from_fn(&spec, |t| Complex64::new(1.0 + t[0].sin(), 0.5));
    for n in -6..=6 {
        let lhs = g.inner(&h.modulate(&Freq::scalar(n)).unwrap()).unwrap();
        let rhs = g.mul(&h.conj()).unwrap().coeff_unchecked(&Freq::scalar(n));
        assert!((lhs - rhs).norm() < 1e-14);
    }
}

#[test]
fn multi_axis_roundtrip() {
    let spec = GridSpec::new(vec![16, 3, 3], vec![7, 1, 1]).unwrap();
    let mut s = Spectrum::new(3);
    s.insert(Freq(vec![3, 1, -1]), Complex64::new(0.5, 0.25));
    s.insert(Freq(vec![-7, 0, 1]), Complex64::new(-1.0, 0.0));
    let f = s.synth(&spec).unwrap();
    let back = f.spectrum();
    for (n, c) in back.coeffs {
        assert!((c - s.get(&n)).norm() < 1e-13, "{n}");
    }
}

proptest! {
    #[test]
    fn synth_coeff_roundtrip(s in spectrum_strategy(64)) {
        let spec = GridSpec::line(129, 64).unwrap();
        let f = s.synth(&spec).unwrap();
        for n in -64..=64 {
            let c = f.coeff(&Freq::scalar(n)).unwrap();
            prop_assert!((c - s.get(&Freq::scalar(n))).norm() <= 1e-12);
        }
        let fast = f.spectrum();
        for (n, c) in fast.coeffs {
            prop_assert!((c - s.get(&n)).norm() <= 1e-12);
        }
    }

    #[test]
    fn parseval(s in spectrum_strategy(30)) {
        let spec = GridSpec::line(64, 30).unwrap();
        let f = s.synth(&spec).unwrap();
        let lhs = f.norm_l2().powi(2);
        let rhs: f64 = f.all_coefficients().iter().map(|c| c.norm_sqr()).sum();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1e-300));
    }

    #[test]
    fn modulation_shift_and_unitarity(s in spectrum_strategy(10), k in -10i64..=10) {
        let spec = GridSpec::line(64, 30).unwrap();
        let f = s.synth(&spec).unwrap();
        let g = f.modulate(&Freq::scalar(k)).unwrap();
        prop_assert!((g.norm_l2() - f.norm_l2()).abs() <= 1e-12 * f.norm_l2().max(1.0));
        for n in -20..=20 {
            let a = g.coeff(&Freq::scalar(n)).unwrap();
            let b = f.coeff(&Freq::scalar(n - k)).unwrap();
            prop_assert!((a - b).norm() <= 1e-12);
        }
        let back = g.modulate(&Freq::scalar(-k)).unwrap();
        for (x, y) in back.samples.iter().zip(&f.samples) {
            prop_assert!((x - y).norm() <= 1e-12);
        }
    }

    #[test]
    fn riesz_facts_for_lacunary_sets(k1 in 1i64..4, extra in prop::collection::vec(0i64..3, 0..6)) {
        let mut k = vec![k1];
        for x in extra {
            let last = *k.last().unwrap();
            k.push(2 * last + 1 + x);
        }
        let exp = riesz_expansion(&k).unwrap();
        prop_assert_eq!(exp.get(&0), Dyadic { num: 1, exp: 0 });
        for g in &k {
            prop_assert!(exp.get(g).at_least(1, 1));
        }
        let m: i64 = k.iter().sum();
        let spec = GridSpec::for_max_freq(m);
        let freqs: Vec<Freq> = k.iter().map(|&n| Freq::scalar(n)).collect();
        let (r, e2) = riesz_polynomial(&freqs, &spec).unwrap();
        prop_assert!(r.samples.iter().all(|z| z.re >= -1e-12 && z.im.abs() <= 1e-12));
        prop_assert!((r.norm_l1() - 1.0).abs() <= 1e-10);
        let mut s = Spectrum::new(1);
        for (g, d) in &e2.terms {
            s.insert(g.clone(), Complex64::new(d.to_f64(), 0.0));
        }
        let synth = s.synth(&spec).unwrap();
        for (a, b) in synth.samples.iter().zip(&r.samples) {
            prop_assert!((a - b).norm() <= 1e-12);
        }
    }
}

#[test]
fn riesz_support_must_fit() {
    let spec = GridSpec::line(16, 3).unwrap();
    assert!(riesz_polynomial(&[Freq::scalar(1), Freq::scalar(3)], &spec).is_err());
}
