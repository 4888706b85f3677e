use std::collections::BTreeSet;

use paley_core::combinatorics::*;
use paley_core::{Enumeration, Window};
use proptest::prelude::*;

fn en(v: &[i64]) -> Enumeration<i64> {
    Enumeration::new(v.to_vec()).unwrap()
}

// Independent oracle: every ε in [−b, b]^J, conditions checked by direct partial sums.
fn brute_schur(k: &[i64], b: i64, w: Window) -> BTreeSet<i64> {
    let j = k.len();
    let mut out = BTreeSet::new();
    let mut eps = vec![-b; j];
    loop {
        let mut partial = Vec::new();
        let mut s = 0;
        for e in &eps {
            s += e;
            partial.push(s);
        }
        let first_pos = partial.iter().position(|&x| x > 0);
        let ok = s == 1
            && partial.iter().all(|&x| x >= 0)
            && first_pos.is_some_and(|p| partial[p + 1..].iter().all(|&x| x > 0))
            && partial.iter().any(|&x| x > 1);
        if ok {
            let m: i64 = eps.iter().zip(k).map(|(e, k)| e * k).sum();
            if w.contains(m) {
                out.insert(m);
            }
        }
        let mut i = 0;
        loop {
            if i == j {
                return out;
            }
            if eps[i] < b {
                eps[i] += 1;
                break;
            }
            eps[i] = -b;
            i += 1;
        }
    }
}

// Independent oracle for G_{j+1}: exhaustive (i, n) with n bounded by the window.
fn brute_g(j: usize, k: &[i64], w: Window) -> BTreeSet<i64> {
    let jj = k.len();
    let gaps: Vec<i64> = k.windows(2).map(|p| p[1] - p[0]).collect();
    let mut out = BTreeSet::new();
    for i in 1..=(j + 1).min(jj - 1) {
        let idx: Vec<usize> = (i - 1..jj - 1).collect();
        let caps: Vec<i64> = idx.iter().map(|&a| (k[i - 1] - w.lo) / gaps[a]).collect();
        let mut n = vec![0i64; idx.len()];
        loop {
            let y: i64 = n.iter().zip(&idx).map(|(c, &a)| c * gaps[a]).sum();
            let nonzero = n.iter().any(|&c| c > 0);
            if (i != j + 1 || nonzero) && w.contains(k[i - 1] - y) {
                out.insert(k[i - 1] - y);
            }
            let mut p = 0;
            loop {
                if p == n.len() {
                    break;
                }
                if n[p] < caps[p] {
                    n[p] += 1;
                    break;
                }
                n[p] = 0;
                p += 1;
            }
            if p == n.len() {
                break;
            }
        }
    }
    out
}

#[test]
fn schur_matches_brute_force_on_small_cases() {
    for k in [vec![1, 3], vec![1, 3, 7], vec![2, 5, 11], vec![1, 4, 9, 19], vec![3, 4, 6]] {
        let e = en(&k);
        let w = Window::new(-25, 5).unwrap();
        let b = schur_exact_bound(&e, w).unwrap();
        let r = schur_set(&e, w, b).unwrap();
        assert!(r.exact);
        let got: BTreeSet<i64> = r.members.into_iter().collect();
        assert_eq!(got, brute_schur(&k, b as i64, w), "{k:?}");
        let g: BTreeSet<i64> = schur_set_via_gaps(&e, w).unwrap().members.into_iter().collect();
        assert_eq!(got, g);
    }
}

#[test]
fn non_increasing_uses_bounded_search() {
    let e = en(&[3, 1, 7]);
    let w = Window::new(-20, 20).unwrap();
    let r = schur_set(&e, w, 2).unwrap();
    assert!(!r.exact);
    let got: BTreeSet<i64> = r.members.into_iter().collect();
    assert_eq!(got, brute_schur(&[3, 1, 7], 2, w));
}

#[test]
fn g_matches_brute_force() {
    let k = [1, 3, 7, 16];
    let e = en(&k);
    let w = Window::new(-40, 20).unwrap();
    for j in 1..k.len() {
        let got: BTreeSet<i64> = g_set(j, &e, w).unwrap().members.into_iter().collect();
        assert_eq!(got, brute_g(j, &k, w), "j={j}");
    }
}

#[test]
fn pre_election_is_contained_in_elected() {
    for k in [vec![1, 3, 7], vec![1, 3, 7, 16], vec![2, 5, 11, 23, 50]] {
        let e = en(&k);
        let w = Window::new(-60, 60).unwrap();
        for j in 1..k.len() {
            let pre = g_set_pre_election(j, &e, w).unwrap();
            let elected = g_set(j, &e, w).unwrap();
            assert!(pre.members.iter().all(|m| elected.contains(m)), "{k:?} j={j}");
        }
    }
}

/// The alternative reading "indices j' < j, block containing j − 1" breaks the union identity.
#[test]
fn literal_d_index_reading_would_admit_k1() {
    // For (1,3,7), j = 2 that reading allows −n_1Δk_1 alone, so k_2 + D_2 would contain 3 − 2 = 1.
    let e = en(&[1, 3, 7]);
    let w = Window::new(-20, 20).unwrap();
    let d2 = d_set(2, &e, Window::new(-20, -1).unwrap()).unwrap();
    assert!(!d2.contains(&-2));
    let schur = schur_set_via_gaps(&e, w).unwrap();
    assert!(!schur.contains(&1));
}

fn lacunary() -> impl Strategy<Value = Vec<i64>> {
    (1usize..=8, 1i64..=5, prop::collection::vec(0i64..=3, 8)).prop_map(|(j, k1, extra)| {
        let mut v = vec![k1];
        for x in extra.iter().take(j - 1) {
            let last = *v.last().unwrap();
            v.push(2 * last + 1 + x * last / 2);
        }
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schur_routes_agree(k in lacunary(), lo in -3000i64..-1) {
        let e = en(&k);
        let w = Window::new(lo, *k.last().unwrap()).unwrap();
        let b = schur_exact_bound(&e, w).unwrap();
        let a = schur_set(&e, w, b).unwrap();
        let g = schur_set_via_gaps(&e, w).unwrap();
        prop_assert_eq!(&a, &g);
        prop_assert!(a.members.iter().all(|&m| m < 0));
    }

    #[test]
    fn schur_is_union_of_translates(k in lacunary(), lo in -2000i64..-1) {
        prop_assume!(k.len() >= 2);
        let e = en(&k);
        let w = Window::new(lo, 0).unwrap();
        let schur: BTreeSet<i64> = schur_set_via_gaps(&e, w).unwrap().members.into_iter().collect();
        let mut via_d = BTreeSet::new();
        let mut via_g = BTreeSet::new();
        let dw = Window::new(lo - k.last().unwrap(), -1).unwrap();
        let gw = Window::new(lo - k.last().unwrap(), *k.last().unwrap()).unwrap();
        for j in 1..=k.len() {
            for m in d_set(j, &e, dw).unwrap().members {
                if w.contains(k[j - 1] + m) {
                    via_d.insert(k[j - 1] + m);
                }
            }
            if j < k.len() {
                let dk = k[j] - k[j - 1];
                for m in g_set(j, &e, gw).unwrap().members {
                    if w.contains(m - dk) {
                        via_g.insert(m - dk);
                    }
                }
            }
        }
        prop_assert_eq!(&schur, &via_d);
        prop_assert_eq!(&schur, &via_g);
    }

    #[test]
    fn g_and_d_structure(k in lacunary(), lo in -1500i64..-1) {
        prop_assume!(k.len() >= 2);
        let e = en(&k);
        let jj = k.len();
        let top = *k.last().unwrap();
        let w = Window::new(lo, top).unwrap();
        let dw = Window::new(lo, -1).unwrap();
        for j in 1..jj {
            let g = g_set(j, &e, w).unwrap();
            prop_assert!(g.contains(&k[j - 1]));
            // D_j = G_{j+1} − k_{j+1}
            let gw = Window::new(lo + k[j], k[j] - 1).unwrap();
            let shifted: Vec<i64> = g_set(j, &e, gw).unwrap().members.iter().map(|m| m - k[j]).collect();
            let d: BTreeSet<i64> = d_set(j, &e, dw).unwrap().members.into_iter().collect();
            prop_assert_eq!(shifted, d.iter().copied().collect::<Vec<_>>());
            if j + 1 < jj {
                let g2 = g_set(j + 1, &e, w).unwrap();
                prop_assert!(g.members.iter().all(|m| g2.contains(m)));
                let d2 = d_set(j + 1, &e, dw).unwrap();
                prop_assert!(d2.members.iter().all(|m| d.contains(m)));
            }
            for (i, &a) in d.iter().enumerate().take(40) {
                for &b in d.iter().skip(i).take(40) {
                    if dw.contains(a + b) {
                        prop_assert!(d.contains(&(a + b)));
                    }
                }
            }
        }
    }

    #[test]
    fn preorder_antinesting(k in lacunary(), x in -500i64..500, y in -500i64..500) {
        prop_assume!(k.len() >= 2);
        let e = en(&k);
        let w = Window::new(-1000, 1000).unwrap();
        for j in 1..k.len() {
            if preorder_less(j + 1, x, y, &e, w).unwrap() {
                prop_assert!(preorder_less(j, x, y, &e, w).unwrap());
            }
            if w.contains(k[j - 1] - k[j]) {
                prop_assert!(preorder_less(j, k[j - 1], k[j], &e, w).unwrap());
            }
        }
    }

    #[test]
    fn s_in_schur_and_riesz(k in lacunary()) {
        prop_assume!(k.len() <= 7);
        let e = en(&k);
        let top = *k.last().unwrap();
        let r = check_inclusion_s_in_schur_riesz(&e, Window::new(-2 * top, 2 * top).unwrap()).unwrap();
        prop_assert!(r.holds);
    }

    #[test]
    fn s_inclusion_for_arbitrary_orders(k in prop::collection::btree_set(-30i64..30, 1..6), seed in any::<u64>()) {
        let mut v: Vec<i64> = k.into_iter().collect();
        let n = v.len();
        for i in 0..n {
            v.swap(i, (seed as usize >> (i % 16)) % n);
        }
        let e = en(&v);
        let r = check_inclusion_s_in_schur_riesz(&e, Window::new(-200, 200).unwrap()).unwrap();
        prop_assert!(r.holds);
    }

    #[test]
    fn riesz_within_two_half_cones(k in lacunary()) {
        let r = riesz_support(&k).unwrap();
        // on ℤ every element is comparable with 0; the ordered check is the generic one
        let freqs: Vec<paley_core::Freq> = k.iter().map(|&n| paley_core::Freq::scalar(n)).collect();
        prop_assert!(is_strongly_lacunary_ordered(&freqs, &ConeOrder::HalfLine).unwrap());
        prop_assert!(r.members.contains(&0));
    }

    #[test]
    fn sets_ignore_input_permutation(k in prop::collection::btree_set(1i64..40, 1..7)) {
        let v: Vec<i64> = k.iter().copied().collect();
        let mut rev = v.clone();
        rev.reverse();
        prop_assert_eq!(riesz_support(&v).unwrap(), riesz_support(&rev).unwrap());
    }
}

#[test]
fn riesz_in_cone_union_lex_last() {
    use paley_core::{Freq, Lattice};
    let k = vec![Freq(vec![5, 1]), Freq(vec![0, 3]), Freq(vec![-7, 8])];
    assert!(is_strongly_lacunary_ordered(&k, &ConeOrder::LexLast).unwrap());
    let cone = ConeOrder::LexLast.prepare().unwrap();
    for g in riesz_support(&k).unwrap().members {
        assert!(cone.nonnegative(&g) || cone.nonnegative(&g.times(-1)));
    }
}
