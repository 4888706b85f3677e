//! Acceptance criteria 1–9: one PASS/FAIL line each; exit status 1 if any line fails.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{E, PI, SQRT_2};
use std::time::Instant;

use paley_core::combinatorics::*;
use paley_core::fourier::{riesz_expansion, riesz_polynomial, Dyadic};
use paley_core::inequality::{
    check_ratio, forbidden_set, stream_rng, CampaignReport, Forbidden, KSource, OptimizerConfig, Template,
};
use paley_core::measures::{check_simple_s, MeasureHypothesis, MeasureKind, MeasureReport, MeasureTemplate, MEASURE_CEILING};
use paley_core::proofkit::ReplayMode;
use paley_core::{Enumeration, Freq, GridFunction, GridSpec, Window};
use paley_lab::runner;
use rand::Rng;

const CEILING_TOL: f64 = 1e-6;
const RESIDUAL_TOL: f64 = 1e-9;

struct Verdict {
    ok: bool,
    detail: String,
}

impl Verdict {
    fn new() -> Self {
        Verdict { ok: true, detail: String::new() }
    }

    fn require(&mut self, ok: bool, what: impl AsRef<str>) {
        if !ok {
            self.ok = false;
            if !self.detail.is_empty() {
                self.detail.push_str("; ");
            }
            self.detail.push_str(what.as_ref());
        }
    }

    fn note(mut self, s: impl AsRef<str>) -> Self {
        if self.ok {
            self.detail = s.as_ref().to_string();
        }
        self
    }
}

fn ks(v: &[i64]) -> Vec<Freq> {
    v.iter().map(|&k| Freq::scalar(k)).collect()
}

fn en(v: &[i64]) -> Enumeration<i64> {
    Enumeration::new(v.to_vec()).unwrap()
}

// Oracle: Π(1 + (z^k + z^−k)/2) by enumerating ε ∈ {−1,0,1}^J with weight 2^{−#nonzero}.
fn brute_riesz(k: &[i64]) -> BTreeMap<i64, (u64, u32)> {
    let j = k.len() as u32;
    let mut num: BTreeMap<i64, u64> = BTreeMap::new();
    for code in 0..3u64.pow(j) {
        let (mut c, mut n, mut zeros) = (code, 0i64, 0u32);
        for &kk in k {
            match c % 3 {
                0 => zeros += 1,
                1 => n += kk,
                _ => n -= kk,
            }
            c /= 3;
        }
        *num.entry(n).or_default() += 1u64 << zeros;
    }
    num.into_iter()
        .map(|(n, a)| {
            let d = Dyadic::new(a, j);
            (n, (d.num, d.exp))
        })
        .collect()
}

fn criterion_1() -> Verdict {
    let mut v = Verdict::new();
    v.require(s_set(&en(&[1, 3, 7])).unwrap().members == vec![-3], "S((1,3,7)) ≠ {−3}");
    v.require(s_set(&en(&[1, 3])).unwrap().members.is_empty(), "S((1,3)) ≠ ∅");
    let w = Window::new(-10, 0).unwrap();
    let want = vec![-9, -7, -5, -3, -1];
    let gaps = schur_set_via_gaps(&en(&[1, 3]), w).unwrap();
    let eps = schur_set(&en(&[1, 3]), w, schur_exact_bound(&en(&[1, 3]), w).unwrap()).unwrap();
    v.require(gaps.members == want && gaps.exact, "Schur((1,3)) ∩ [−10,0] by gaps");
    v.require(eps.members == want && eps.exact, "Schur((1,3)) ∩ [−10,0] by ε");
    v.require(alt_sum_set(&en(&[1, 3, 7, 15])).unwrap().members == vec![5, 9, 11, 13], "alt_sum_set((1,3,7,15))");
    let r = riesz_expansion(&[1i64, 3]).unwrap();
    let lit: BTreeMap<i64, (u64, u32)> =
        [(0, (1, 0)), (1, (1, 1)), (-1, (1, 1)), (3, (1, 1)), (-3, (1, 1)), (2, (1, 2)), (-2, (1, 2)), (4, (1, 2)), (-4, (1, 2))]
            .into_iter()
            .collect();
    let got: BTreeMap<i64, (u64, u32)> = r.terms.iter().map(|(n, d)| (*n, (d.num, d.exp))).collect();
    v.require(got == lit && got == brute_riesz(&[1, 3]), "Riesz coefficients for {1,3}");
    let r = riesz_expansion(&[1i64, 2, 3]).unwrap();
    v.require(r.get(&0) == Dyadic { num: 5, exp: 2 }, "c(0) for {1,2,3} ≠ 5/4");
    let got: BTreeMap<i64, (u64, u32)> = r.terms.iter().map(|(n, d)| (*n, (d.num, d.exp))).collect();
    v.require(got == brute_riesz(&[1, 2, 3]), "Riesz expansion of {1,2,3} differs from the ε oracle");
    v.note("6 ground truths exact")
}

fn lacunary(rng: &mut impl Rng, jmax: usize) -> Vec<i64> {
    let j = rng.random_range(1..=jmax);
    let mut k = vec![rng.random_range(1..=5i64)];
    while k.len() < j {
        let last = *k.last().unwrap();
        k.push(2 * last + 1 + rng.random_range(0..=last));
    }
    k
}

fn criterion_2() -> Verdict {
    let mut v = Verdict::new();
    let mut rng = stream_rng(2, 0);
    let mut widest = 0i64;
    let count = 200;
    for t in 0..count {
        let k = lacunary(&mut rng, 8);
        let e = en(&k);
        let top = *k.last().unwrap();
        let lo = -(10f64.powf(rng.random_range(1.0..=6.0)).round() as i64);
        widest = widest.max(-lo);
        let tag = format!("#{t} {k:?} lo={lo}");
        let w = Window::new(lo, top).unwrap();
        let gaps = schur_set_via_gaps(&e, w).unwrap();
        v.require(gaps.members.iter().all(|&m| m < 0), format!("{tag}: Schur meets n ≥ 0"));
        if let Some(b) = schur_exact_bound(&e, w) {
            let eps = schur_set(&e, w, b).unwrap();
            v.require(eps == gaps, format!("{tag}: ε-characterization ≠ gap representation"));
        } else {
            v.require(k.len() < 2, format!("{tag}: no exact bound"));
        }
        if k.len() < 2 {
            continue;
        }
        let schur: BTreeSet<i64> = gaps.members.iter().copied().collect();
        let gw = Window::new(lo - top, top).unwrap();
        let mut via_g = BTreeSet::new();
        let mut prev_g: Option<BTreeSet<i64>> = None;
        for j in 1..k.len() {
            let g: BTreeSet<i64> = g_set(j, &e, gw).unwrap().members.into_iter().collect();
            let dk = k[j] - k[j - 1];
            via_g.extend(g.iter().map(|m| m - dk).filter(|&m| w.contains(m)));
            if let Some(p) = &prev_g {
                v.require(p.is_subset(&g), format!("{tag}: G_{j} ⊄ G_{}", j + 1));
            }
            prev_g = Some(g);
        }
        v.require(via_g == schur, format!("{tag}: Schur ≠ ∪(G_(j+1) − Δk_j)"));
        let dw = Window::new(lo, -1).unwrap();
        let mut prev_d: Option<BTreeSet<i64>> = None;
        for j in 1..=k.len() {
            let d: BTreeSet<i64> = d_set(j, &e, dw).unwrap().members.into_iter().collect();
            if let Some(p) = &prev_d {
                v.require(d.is_subset(p), format!("{tag}: D_{} ⊄ D_{}", j, j - 1));
            }
            // closure: exhaustive near 0, sampled over the whole window
            let near: Vec<i64> = d.iter().rev().take_while(|&&m| m >= -2000).copied().collect();
            for (i, &a) in near.iter().enumerate() {
                for &b in &near[i..] {
                    if dw.contains(a + b) && !d.contains(&(a + b)) {
                        v.require(false, format!("{tag}: D_{j} not closed at {a}+{b}"));
                    }
                }
            }
            if !d.is_empty() {
                let all: Vec<i64> = d.iter().copied().collect();
                for _ in 0..512 {
                    let a = all[rng.random_range(0..all.len())];
                    let b = all[rng.random_range(0..all.len())];
                    if dw.contains(a + b) && !d.contains(&(a + b)) {
                        v.require(false, format!("{tag}: D_{j} not closed at {a}+{b}"));
                    }
                }
            }
            prev_d = Some(d);
        }
        let r = check_inclusion_s_in_schur_riesz(&e, Window::new(-2 * top, 2 * top).unwrap()).unwrap();
        v.require(r.holds, format!("{tag}: S ⊄ Schur ∩ Riesz"));
    }
    v.note(format!("{count} enumerations, J ≤ 8, widest window [−{widest}, 0], zero violations"))
}

fn theorem_5_templates() -> Vec<Template> {
    vec![Template {
        name: "theorem-5".into(),
        k: KSource::Lacunary { j: [1, 8], k1: vec![1, 2, 3], max_k: 256 },
        forbidden: Forbidden::Schur,
        mode: Some(ReplayMode::New),
        order: None,
        grid: None,
        m_cap: 512,
    }]
}

fn criterion_3(r: &CampaignReport) -> Verdict {
    let mut v = Verdict::new();
    v.require(r.instances == 1000, format!("{} instances", r.instances));
    let limits: [(&str, f64); 10] = [
        ("identity", RESIDUAL_TOL),
        ("a_energy", 1.0 + RESIDUAL_TOL),
        ("b_energy", 1.0 + RESIDUAL_TOL),
        ("membership", RESIDUAL_TOL),
        ("intertwining", RESIDUAL_TOL),
        ("orthogonality", RESIDUAL_TOL),
        ("nesting_p", RESIDUAL_TOL),
        ("nesting_q", RESIDUAL_TOL),
        ("certified", 2.0 + RESIDUAL_TOL),
        ("b_two_projection", RESIDUAL_TOL),
    ];
    for (name, limit) in limits {
        let max = r.check_max.get(name).copied().unwrap_or(f64::NAN);
        let bad = r.check_failures.get(name).copied().unwrap_or(0);
        v.require(max <= limit && bad == 0, format!("{name} max {max:.3e} > {limit:e} on {bad}/{} instances", r.instances));
    }
    v.require(r.max_ratio <= 2.0 + RESIDUAL_TOL, format!("ratio {} > 2", r.max_ratio));
    v.note(format!("{} instances, worst residual {:.2e}, max ratio {:.4}", r.instances, r.worst_residual, r.max_ratio))
}

fn t(name: &str, k: KSource, forbidden: Forbidden, mode: Option<ReplayMode>) -> Template {
    Template { name: name.into(), k, forbidden, mode, order: None, grid: None, m_cap: 512 }
}

fn lacunary_source(jmax: usize) -> KSource {
    KSource::Lacunary { j: [1, jmax], k1: vec![1, 2, 3], max_k: 256 }
}

fn ceiling_templates() -> Vec<Template> {
    let fixed_2d = |v: &[[i64; 2]]| KSource::Fixed(v.iter().map(|p| Freq(p.to_vec())).collect());
    let mut two_d = t("theorem-4", fixed_2d(&[[0, 1], [3, 3]]), Forbidden::NegativeHalfline, Some(ReplayMode::New));
    two_d.grid = Some(GridSpec::new(vec![16, 16], vec![6, 6]).unwrap());
    let mut two_d_b = t("theorem-4", fixed_2d(&[[2, 0], [-1, 1], [5, 3]]), Forbidden::NegativeHalfline, None);
    two_d_b.grid = Some(GridSpec::new(vec![32, 32], vec![12, 12]).unwrap());
    vec![
        t("theorem-1/new", lacunary_source(6), Forbidden::NegativeHalfline, Some(ReplayMode::New)),
        t("theorem-1/classic", lacunary_source(6), Forbidden::NegativeHalfline, Some(ReplayMode::Classic)),
        t("theorem-2", lacunary_source(6), Forbidden::OutsideKPositive, Some(ReplayMode::Complementary)),
        two_d,
        two_d_b,
    ]
}

fn measure_templates() -> Vec<MeasureTemplate> {
    let m = |name: &str, k: KSource, hypothesis, kind| MeasureTemplate {
        name: name.into(),
        k,
        hypothesis,
        kind,
        order: None,
        extra_atoms: 8,
    };
    let lac = KSource::Lacunary { j: [1, 6], k1: vec![1, 2, 3], max_k: 256 };
    let rnd = KSource::Random { j: [1, 6], max_abs: 12 };
    // Schur of a dense unordered K can swallow the whole support; draw sparser values there
    let sparse = KSource::Random { j: [1, 6], max_abs: 60 };
    vec![
        m("density/schur-riesz", lac.clone(), MeasureHypothesis::SchurRiesz, MeasureKind::Density),
        m("density/negative-cone", lac.clone(), MeasureHypothesis::NegativeCone, MeasureKind::Density),
        m("density/s-lift", rnd.clone(), MeasureHypothesis::S, MeasureKind::Density),
        m("density/schur-lift", sparse, MeasureHypothesis::Schur, MeasureKind::Density),
        m("atomic/schur-riesz", lac, MeasureHypothesis::SchurRiesz, MeasureKind::Atomic),
        m("atomic/s-lift", rnd, MeasureHypothesis::S, MeasureKind::Atomic),
    ]
}

/// 200 density instances (4 × 50) and 50 atomic (2 × 25).
fn measure_campaign(seed: u64, workers: usize, scale: u64) -> MeasureReport {
    let all = measure_templates();
    let density = runner::run_measure_campaign(&all[..4], 50 / scale, seed, workers).unwrap();
    let atomic = runner::run_measure_campaign(&all[4..], 25 / scale, seed ^ 0xa7, workers).unwrap();
    density.merge(atomic)
}

struct OptimizerRun {
    label: String,
    ratio: f64,
    ceiling: f64,
}

fn optimizer_runs(workers: usize) -> Vec<OptimizerRun> {
    let cfg = OptimizerConfig { restarts: 3, iterations: 150, seed: 4, ..Default::default() };
    let cases: Vec<(Vec<Freq>, GridSpec, Forbidden)> = vec![
        (ks(&[1, 3, 7]), GridSpec::for_max_freq(24), Forbidden::Schur),
        (ks(&[2, 5, 11, 23]), GridSpec::for_max_freq(48), Forbidden::Schur),
        (ks(&[1, 3, 7]), GridSpec::for_max_freq(24), Forbidden::NegativeHalfline),
        (ks(&[1, 4]), GridSpec::for_max_freq(12), Forbidden::NegativeHalfline),
        (
            vec![Freq(vec![0, 1]), Freq(vec![3, 3])],
            GridSpec::new(vec![16, 16], vec![6, 6]).unwrap(),
            Forbidden::NegativeHalfline,
        ),
    ];
    cases
        .into_iter()
        .map(|(k, spec, sel)| {
            let order = (spec.dim() > 1).then_some(ConeOrder::LexLast);
            let f = forbidden_set(&sel, &k, &spec, order.as_ref()).unwrap();
            let r = runner::optimize(&spec, &k, &f, &cfg, None, workers).unwrap();
            let th = sel.theorem(spec.dim()).unwrap();
            OptimizerRun { label: format!("{} {:?}", th.label, k), ratio: r.ratio, ceiling: th.ceiling.unwrap() }
        })
        .collect()
}

fn criterion_4(t5: &CampaignReport, others: &CampaignReport, measures: &MeasureReport, opt: &[OptimizerRun]) -> Verdict {
    let mut v = Verdict::new();
    let ceilings: BTreeMap<&str, f64> =
        [("theorem-1", SQRT_2), ("theorem-4", SQRT_2), ("theorem-5", SQRT_2), ("theorem-2", E.sqrt())].into_iter().collect();
    let mut seen = BTreeMap::new();
    for r in [t5, others] {
        for (label, &ratio) in &r.max_ratio_by_theorem {
            if let Some(&c) = ceilings.get(label.as_str()) {
                v.require(ratio <= c + CEILING_TOL, format!("{label} campaign ratio {ratio} > {c}"));
                let e = seen.entry(label.clone()).or_insert(0.0f64);
                *e = e.max(ratio);
            }
        }
    }
    for label in ceilings.keys() {
        v.require(seen.contains_key(*label), format!("no {label} campaign"));
    }
    for o in opt {
        v.require(o.ratio <= o.ceiling + CEILING_TOL, format!("optimizer {} ratio {} > {}", o.label, o.ratio, o.ceiling));
    }
    v.require(
        measures.max_ratio <= MEASURE_CEILING + CEILING_TOL,
        format!("measure ratio {} > 2√2", measures.max_ratio),
    );
    let best_opt = opt.iter().map(|o| o.ratio).fold(0.0, f64::max);
    let summary: Vec<String> = seen.iter().map(|(k, v)| format!("{k} {v:.4}")).collect();
    v.note(format!(
        "campaign maxima {}; optimizer max {best_opt:.4}; measures max {:.4}",
        summary.join(", "),
        measures.max_ratio
    ))
}

fn criterion_5() -> Verdict {
    let mut v = Verdict::new();
    let target = PI * SQRT_2 / 4.0;
    let mut errs = Vec::new();
    for n in [256usize, 1024, 4096] {
        let spec = GridSpec::line(n, 3).unwrap();
        let f = GridFunction::character(&spec, &Freq::scalar(1)).add(&GridFunction::character(&spec, &Freq::scalar(3))).unwrap();
        errs.push((n, (check_ratio(&f, &ks(&[1, 3])).unwrap() - target).abs()));
    }
    let at_4096 = errs[2].1;
    v.require(at_4096 <= 5e-4, format!("|ratio − π√2/4| = {at_4096:e} at N = 4096"));
    v.require(errs.windows(2).all(|w| w[1].1 <= w[0].1), format!("error does not decrease with N: {errs:?}"));
    v.note(format!("|ratio − π√2/4| = {at_4096:.2e} at N = 4096"))
}

fn criterion_6() -> Verdict {
    let mut v = Verdict::new();
    let mut rng = stream_rng(6, 0);
    let mut sets: Vec<Vec<i64>> = (1..=12).map(|j| {
        let mut k = vec![rng.random_range(1..=3i64)];
        while k.len() < j {
            let last = *k.last().unwrap();
            k.push(2 * last + 1 + rng.random_range(0..=last / 2));
        }
        k
    }).collect();
    sets.push(vec![1, 3, 7, 15, 31, 63, 127, 255, 511, 1023, 2047, 4095]);
    let mut worst_l1 = 0.0f64;
    let mut lowest = f64::INFINITY;
    let mut slowest = 0.0f64;
    for k in &sets {
        let start = Instant::now();
        let e = en(k);
        v.require(is_strongly_lacunary(&e), format!("{k:?} not strongly lacunary"));
        let freqs = ks(k);
        let half: i64 = k.iter().sum();
        let n = ((2 * half + 2) as usize).next_power_of_two();
        let spec = GridSpec::line(n, half).unwrap();
        let (rk, c) = riesz_polynomial(&freqs, &spec).unwrap();
        v.require(c.get(&Freq::scalar(0)) == Dyadic { num: 1, exp: 0 }, format!("{k:?}: c(0) ≠ 1"));
        for x in &freqs {
            v.require(c.get(x).at_least(1, 1), format!("{k:?}: c({x}) < 1/2"));
        }
        let min = rk.samples.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        lowest = lowest.min(min);
        v.require(min >= -1e-12, format!("{k:?}: R_K dips to {min:e}"));
        let l1 = (rk.norm_l1() - 1.0).abs();
        worst_l1 = worst_l1.max(l1);
        v.require(l1 <= 1e-10, format!("{k:?}: |‖R_K‖₁ − 1| = {l1:e}"));
        let secs = start.elapsed().as_secs_f64();
        slowest = slowest.max(secs);
        v.require(secs < 1.0, format!("{k:?}: {secs:.2} s"));
    }
    v.note(format!(
        "{} sets up to 12 elements; |‖R_K‖₁ − 1| ≤ {worst_l1:.1e}, min R_K = {lowest:.1e}, slowest {slowest:.2} s",
        sets.len()
    ))
}

fn criterion_7(r: &MeasureReport, secs: f64) -> Verdict {
    let mut v = Verdict::new();
    v.require(r.instances == 250, format!("{} instances", r.instances));
    v.require(r.failed == 0, format!("{} failures, first: {:?}", r.failed, r.failures.first().map(|f| &f.reason)));
    v.require(r.max_link_ratio <= 1.0 + RESIDUAL_TOL, format!("largest link ratio {}", r.max_link_ratio));
    v.require(secs < 120.0, format!("{secs:.1} s"));
    v.note(format!(
        "200 density + 50 atomic, largest link left/right {:.6}, {:.1} s ({} replays flag the Q-nest check)",
        r.max_link_ratio, secs, r.replay_flagged
    ))
}

fn criterion_8() -> Verdict {
    let mut v = Verdict::new();
    let mut rng = stream_rng(8, 0);
    let (mut monotone, mut lacunary_count, mut lifted) = (0, 0, 0usize);
    for i in 0..100 {
        let k = if i % 10 == 0 {
            KSource::Lacunary { j: [1, 6], k1: vec![1, 2, 3], max_k: 1 << 12 }.draw(&mut rng).unwrap()
        } else {
            KSource::Random { j: [1, 6], max_abs: 15 }.draw(&mut rng).unwrap()
        };
        let ints: Vec<i64> = k.iter().map(|x| x.0[0]).collect();
        let e = Enumeration::new(ints.clone()).unwrap();
        if e.is_increasing() {
            monotone += 1;
        }
        if is_strongly_lacunary(&e) {
            lacunary_count += 1;
        }
        let r = check_simple_s(&Enumeration::new(k).unwrap()).unwrap();
        lifted += r.size;
        v.require(r.holds, format!("{ints:?}: lifted S ≠ Schur ∩ Riesz at {:?}", r.witnesses));
        v.require(r.projection_holds, format!("{ints:?}: projection leaves S"));
    }
    v.require(monotone < 100 && lacunary_count < 100, "sample lacks non-monotone or non-lacunary enumerations");
    v.note(format!(
        "100 enumerations ({} non-monotone, {} non-lacunary), {lifted} lifted S-elements projected",
        100 - monotone,
        100 - lacunary_count
    ))
}

fn strip_timing(mut v: serde_json::Value) -> serde_json::Value {
    if let Some(m) = v.as_object_mut() {
        m.remove("wall_time_ms");
    }
    v
}

fn suite(workers: usize) -> String {
    let mut templates = theorem_5_templates();
    templates.extend(ceiling_templates());
    let inequality = runner::run_campaign(&templates, 20, 99, workers).unwrap();
    let measures = measure_campaign(99, workers, 5);
    let opt: Vec<(String, f64)> = optimizer_runs(workers).into_iter().map(|o| (o.label, o.ratio)).collect();
    let doc = serde_json::json!({
        "inequality": strip_timing(serde_json::to_value(&inequality).unwrap()),
        "measures": strip_timing(serde_json::to_value(&measures).unwrap()),
        "optimizer": opt,
    });
    serde_json::to_string(&doc).unwrap()
}

fn criterion_9() -> Verdict {
    let mut v = Verdict::new();
    let one = suite(1);
    let four = suite(4);
    v.require(one == four, "reports differ between 1 and 4 workers");
    v.note(format!("identical {}-byte reports with 1 and 4 workers", one.len()))
}

fn main() {
    let workers = runner::default_workers();
    // `cargo test --test acceptance -- 2 7` runs a subset
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let wanted = |n: u32| only.is_empty() || only.contains(&n);
    let mut lines: Vec<(u32, Verdict, f64)> = Vec::new();
    let mut timed = |n: u32, f: &mut dyn FnMut() -> Verdict| {
        if !wanted(n) {
            return;
        }
        let start = Instant::now();
        let v = f();
        let secs = start.elapsed().as_secs_f64();
        println!("criterion {n}: {} ({:.1} s) {}", if v.ok { "PASS" } else { "FAIL" }, secs, v.detail);
        lines.push((n, v, secs));
    };
    timed(1, &mut criterion_1);
    timed(2, &mut criterion_2);
    let mut t5 = CampaignReport::default();
    timed(3, &mut || {
        let start = Instant::now();
        t5 = runner::run_campaign(&theorem_5_templates(), 1000, 7, workers).unwrap();
        let secs = start.elapsed().as_secs_f64();
        let mut v = criterion_3(&t5);
        v.require(secs < 300.0, format!("{secs:.1} s"));
        v
    });
    if !wanted(3) && wanted(4) {
        t5 = runner::run_campaign(&theorem_5_templates(), 1000, 7, workers).unwrap();
    }
    let start = Instant::now();
    let measures = measure_campaign(7, workers, 1);
    let measure_secs = start.elapsed().as_secs_f64();
    timed(4, &mut || {
        let others = runner::run_campaign(&ceiling_templates(), 100, 11, workers).unwrap();
        criterion_4(&t5, &others, &measures, &optimizer_runs(workers))
    });
    timed(5, &mut criterion_5);
    timed(6, &mut criterion_6);
    timed(7, &mut || criterion_7(&measures, measure_secs));
    timed(8, &mut criterion_8);
    timed(9, &mut criterion_9);
    let failed: Vec<u32> = lines.iter().filter(|(_, v, _)| !v.ok).map(|(n, _, _)| *n).collect();
    println!(
        "acceptance: {}/{} criteria pass{}",
        lines.len() - failed.len(),
        lines.len(),
        if failed.is_empty() { String::new() } else { format!("; failing: {failed:?}") }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
