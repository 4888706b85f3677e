//! `paley-lab` subcommands. Exit codes: 0 success, 1 a verification found a violation,
//! 2 invalid input (with a one-line diagnostic on stderr).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use paley_core::combinatorics::{
    alt_sum_set, d_set, g_set, riesz_support, s_set, schur_exact_bound, schur_set, ConeOrder,
};
use paley_core::fourier::riesz_expansion;
use paley_core::inequality::{evaluate, Forbidden, Instance, OptimizerConfig, CEILING_TOL, CONSTANT_TOL};
use paley_core::measures::{
    check_measure_bound_ordered, check_simple_s, lift_enumeration, MeasureHypothesis, MeasureInstance, MeasureKind,
    SCHUR_PROXY_BOUND,
};
use paley_core::proofkit::ReplayMode;
use paley_core::{Enumeration, Freq, GridSpec, SetReport, Window};
use serde::Serialize;
use serde_json::{json, Value};

use crate::formats::{
    parse_freqs, parse_window, read_json, InequalityCampaign, MeasureDocument, ReplayDocument,
};
use crate::runner;

#[derive(Parser, Debug)]
#[command(name = "paley-lab", version, about = "Lacunary coefficient inequalities at desk scale")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Schur, S, Riesz, alternating, D_j and G_j sets.
    Sets(SetsArgs),
    /// Exact Riesz product coefficients as [n, numerator, exponent] rows.
    Riesz(RieszArgs),
    /// Replay one instance, replay input or failure dump.
    Replay(ReplayArgs),
    /// Seeded campaign over instance templates.
    Verify(VerifyArgs),
    /// Search for large ‖f̂|K‖₂ / ‖f‖₁ under a vanishing constraint.
    Optimize(OptimizeArgs),
    /// Lift an enumeration to Γ × ℤ^J and check S = Schur ∩ Riesz there.
    Lift(LiftArgs),
    /// Measure chains: a campaign, one seeded instance, or an explicit measure.
    Measures(MeasuresArgs),
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SetKind {
    Schur,
    S,
    Riesz,
    Alt,
    Dj,
    Gj,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Mode {
    New,
    Classic,
    Complementary,
}

impl From<Mode> for ReplayMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::New => ReplayMode::New,
            Mode::Classic => ReplayMode::Classic,
            Mode::Complementary => ReplayMode::Complementary,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Selector {
    Schur,
    S,
    Alternating,
    NegativeHalfline,
    OutsideKPositive,
    None,
}

impl Selector {
    fn forbidden(self) -> Option<Forbidden> {
        Some(match self {
            Selector::Schur => Forbidden::Schur,
            Selector::S => Forbidden::S,
            Selector::Alternating => Forbidden::Alternating,
            Selector::NegativeHalfline => Forbidden::NegativeHalfline,
            Selector::OutsideKPositive => Forbidden::OutsideKPositive,
            Selector::None => return None,
        })
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Hypothesis {
    SchurRiesz,
    Schur,
    S,
    NegativeCone,
}

impl From<Hypothesis> for MeasureHypothesis {
    fn from(h: Hypothesis) -> Self {
        match h {
            Hypothesis::SchurRiesz => MeasureHypothesis::SchurRiesz,
            Hypothesis::Schur => MeasureHypothesis::Schur,
            Hypothesis::S => MeasureHypothesis::S,
            Hypothesis::NegativeCone => MeasureHypothesis::NegativeCone,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Density,
    Atomic,
}

/// A whole `--k` value; a bare `Vec` would make clap expect repeated flags.
#[derive(Clone, Debug)]
struct FreqList(Vec<Freq>);

fn freqs(s: &str) -> Result<FreqList, String> {
    parse_freqs(s).map(FreqList)
}

fn window(s: &str) -> Result<Window, String> {
    parse_window(s)
}

#[derive(Args, Debug)]
struct SetsArgs {
    /// Enumeration, e.g. `1,3,7` or `5,1;0,3`.
    #[arg(long, value_parser = freqs, allow_hyphen_values = true)]
    k: FreqList,
    #[arg(long, value_enum)]
    set: SetKind,
    /// `lo:hi`; defaults to ±Σ|k_j|.
    #[arg(long, value_parser = window, allow_hyphen_values = true)]
    window: Option<Window>,
    /// Index j for `dj` and `gj` (1-based).
    #[arg(long)]
    j: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct RieszArgs {
    #[arg(long, value_parser = freqs, allow_hyphen_values = true)]
    k: FreqList,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct ReplayArgs {
    /// Replay input, instance, or failure dump (JSON).
    #[arg(long)]
    instances: Option<PathBuf>,
    #[arg(long, value_parser = freqs, allow_hyphen_values = true)]
    k: Option<FreqList>,
    #[arg(long, value_enum, default_value_t = Mode::New)]
    mode: Mode,
    /// Vanishing constraint; defaults to the one the mode proves.
    #[arg(long, value_enum)]
    forbidden: Option<Selector>,
    /// Grid window `-M:M`; defaults to M = clamp(2·max|k|, 16, 512).
    #[arg(long, value_parser = window, allow_hyphen_values = true)]
    window: Option<Window>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct Campaign {
    /// Template file: a template, a list, or {"templates": [...], "trials": n, "seed": s}.
    #[arg(long)]
    instances: Option<PathBuf>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, env = runner::WORKERS_ENV)]
    workers: Option<usize>,
    /// Add wall-clock time to the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    campaign: Campaign,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    #[arg(long, value_parser = freqs, allow_hyphen_values = true)]
    k: FreqList,
    #[arg(long, value_enum, default_value_t = Selector::None)]
    forbidden: Selector,
    /// Grid window `-M:M`; defaults to M = clamp(2·max|k|, 16, 512).
    #[arg(long, value_parser = window, allow_hyphen_values = true)]
    window: Option<Window>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of restarts.
    #[arg(long, alias = "restarts", default_value_t = 4)]
    trials: u32,
    #[arg(long, default_value_t = 200)]
    iterations: u32,
    #[arg(long, env = runner::WORKERS_ENV)]
    workers: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct LiftArgs {
    #[arg(long, value_parser = freqs, allow_hyphen_values = true)]
    k: FreqList,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct MeasuresArgs {
    #[command(flatten)]
    campaign: Campaign,
    #[arg(long, value_parser = freqs, allow_hyphen_values = true)]
    k: Option<FreqList>,
    #[arg(long, value_enum, default_value_t = Hypothesis::SchurRiesz)]
    hypothesis: Hypothesis,
    #[arg(long, value_enum, default_value_t = Kind::Density)]
    kind: Kind,
    #[command(flatten)]
    output: Output,
}

/// Error carrying the exit code: 1 for violations, 2 for invalid input.
struct Exit(i32, String);

fn invalid(e: impl ToString) -> Exit {
    Exit(2, e.to_string())
}

type Run = Result<bool, Exit>;

/// Runs the command line and returns the exit code; output goes to `out` unless `--out` is given.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let text = e.to_string();
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            let _ = writeln!(err, "{line}");
            return 2;
        }
    };
    let result = match cli.command {
        Command::Sets(a) => sets(a, out),
        Command::Riesz(a) => riesz(a, out),
        Command::Replay(a) => replay(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Optimize(a) => optimize(a, out),
        Command::Lift(a) => lift(a, out),
        Command::Measures(a) => measures(a, out),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Exit(code, msg)) => {
            let _ = writeln!(err, "error: {}", msg.lines().next().unwrap_or(""));
            code
        }
    }
}

fn emit(output: &Output, out: &mut dyn Write, text: &str) -> Result<(), Exit> {
    match &output.out {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| invalid(format!("{}: {e}", p.display()))),
        None => writeln!(out, "{text}").map_err(invalid),
    }
}

fn emit_json<T: Serialize>(output: &Output, out: &mut dyn Write, v: &T, pretty: bool) -> Result<(), Exit> {
    if output.format != Format::Json {
        return Err(invalid("csv output is only available for optimize logs"));
    }
    let text = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) }.map_err(invalid)?;
    emit(output, out, &text)
}

fn scalars(k: &[Freq]) -> Result<Enumeration<i64>, Exit> {
    let v = k.iter().map(|x| x.as_scalar().ok_or_else(|| invalid("this set needs scalar frequencies"))).collect::<Result<_, _>>()?;
    Enumeration::new(v).map_err(invalid)
}

fn sets(a: SetsArgs, out: &mut dyn Write) -> Run {
    let half: i64 = a.k.0.iter().map(|x| x.0.iter().map(|c| c.abs()).sum::<i64>()).sum::<i64>().max(1);
    let w = a.window.unwrap_or(Window::new(-half, half).map_err(invalid)?);
    let j = || a.j.ok_or_else(|| invalid("--j is required for dj and gj"));
    let in_window = |r: SetReport<Freq>| -> SetReport<Freq> {
        match a.window {
            Some(w) => SetReport {
                members: r.members.into_iter().filter(|m| m.as_scalar().is_none_or(|n| w.contains(n))).collect(),
                exact: r.exact,
            },
            None => r,
        }
    };
    let report: SetReport<Freq> = match a.set {
        SetKind::S => in_window(s_set(&Enumeration::new(a.k.0.clone()).map_err(invalid)?).map_err(invalid)?),
        SetKind::Riesz => in_window(riesz_support(&a.k.0).map_err(invalid)?),
        SetKind::Alt => in_window(alt_sum_set(&Enumeration::new(a.k.0.clone()).map_err(invalid)?).map_err(invalid)?),
        SetKind::Schur | SetKind::Dj | SetKind::Gj => {
            let e = scalars(&a.k.0)?;
            let r = match a.set {
                SetKind::Schur => {
                    let bound = schur_exact_bound(&e, w).unwrap_or(SCHUR_PROXY_BOUND as u64);
                    schur_set(&e, w, bound)
                }
                SetKind::Dj => d_set(j()?, &e, w),
                _ => g_set(j()?, &e, w),
            }
            .map_err(invalid)?;
            SetReport { members: r.members.into_iter().map(Freq::scalar).collect(), exact: r.exact }
        }
    };
    emit_json(&a.output, out, &report, false)?;
    Ok(true)
}

fn riesz(a: RieszArgs, out: &mut dyn Write) -> Run {
    let r = riesz_expansion(&a.k.0).map_err(invalid)?;
    emit_json(&a.output, out, &r, false)?;
    Ok(true)
}

fn grid_for(k: &[Freq], w: Option<Window>) -> Result<GridSpec, Exit> {
    let m = match w {
        Some(w) => w.lo.abs().max(w.hi.abs()),
        None => {
            let top = k.iter().flat_map(|x| x.0.iter().map(|c| c.abs())).max().unwrap_or(0);
            (2 * top).clamp(16, 512.max(top))
        }
    };
    if m > 1 << 20 {
        return Err(invalid(format!("window half-width {m} exceeds 2^20")));
    }
    let d = k.first().map_or(1, |x| x.dim());
    if d == 1 {
        Ok(GridSpec::for_max_freq(m))
    } else {
        let n = ((2 * m + 2) as usize).next_power_of_two();
        GridSpec::new(vec![n; d], vec![m; d]).map_err(invalid)
    }
}

fn default_selector(mode: ReplayMode) -> Forbidden {
    match mode {
        ReplayMode::New => Forbidden::Schur,
        ReplayMode::Classic => Forbidden::NegativeHalfline,
        ReplayMode::Complementary => Forbidden::OutsideKPositive,
    }
}

fn run_document(doc: ReplayDocument, output: &Output, out: &mut dyn Write) -> Run {
    match doc {
        ReplayDocument::Input(input) => {
            let trace = input.run().map_err(invalid)?;
            emit_json(output, out, &trace, true)?;
            Ok(trace.passed)
        }
        ReplayDocument::Instance { index, instance } => {
            instance.data().map_err(invalid)?;
            let o = evaluate(index, instance);
            emit_json(output, out, &o, true)?;
            Ok(o.passed)
        }
        ReplayDocument::Measure(m) => {
            let r = m.check().map_err(invalid)?;
            emit_json(output, out, &r, true)?;
            Ok(r.holds)
        }
        ReplayDocument::MeasureCheck(c) => {
            let r = check_measure_bound_ordered(&c.measure, &c.k, &c.hypothesis, c.order.as_ref()).map_err(invalid)?;
            emit_json(output, out, &r, true)?;
            Ok(r.holds)
        }
    }
}

fn replay(a: ReplayArgs, out: &mut dyn Write) -> Run {
    let doc = match (&a.instances, &a.k) {
        (Some(p), None) => ReplayDocument::from_value(read_json(p).map_err(invalid)?).map_err(invalid)?,
        (None, Some(FreqList(k))) => {
            let mode = ReplayMode::from(a.mode);
            let forbidden = match a.forbidden {
                Some(s) => s.forbidden().ok_or_else(|| invalid("replay needs a vanishing constraint"))?,
                None => default_selector(mode),
            };
            let order = (k[0].dim() > 1).then_some(ConeOrder::LexLast);
            let grid = grid_for(k, a.window)?;
            ReplayDocument::Instance {
                index: 0,
                instance: Instance { grid, k: k.clone(), forbidden, seed: a.seed, mode: Some(mode), order },
            }
        }
        _ => return Err(invalid("replay takes exactly one of --instances or --k")),
    };
    run_document(doc, &a.output, out)
}

fn workers(c: &Campaign) -> usize {
    c.workers.filter(|&n| n > 0).unwrap_or_else(runner::default_workers)
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> Run {
    let path = a.campaign.instances.as_ref().ok_or_else(|| invalid("verify needs --instances"))?;
    let doc = InequalityCampaign::from_value(read_json(path).map_err(invalid)?).map_err(invalid)?;
    let trials = a.campaign.trials.or(doc.trials).unwrap_or(1);
    let seed = a.campaign.seed.or(doc.seed).unwrap_or(0);
    let start = Instant::now();
    let mut report = runner::run_campaign(&doc.templates, trials, seed, workers(&a.campaign)).map_err(invalid)?;
    if a.campaign.timing {
        report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    emit_json(&a.output, out, &report, true)?;
    Ok(report.all_passed())
}

fn optimize(a: OptimizeArgs, out: &mut dyn Write) -> Run {
    let spec = grid_for(&a.k.0, a.window)?;
    let selector = a.forbidden.forbidden();
    let order = (a.k.0[0].dim() > 1).then_some(ConeOrder::LexLast);
    let forbidden = match &selector {
        Some(s) => paley_core::inequality::forbidden_set(s, &a.k.0, &spec, order.as_ref()).map_err(invalid)?,
        None => Vec::new(),
    };
    let cfg = OptimizerConfig { restarts: a.trials, iterations: a.iterations, seed: a.seed, ..Default::default() };
    let n = a.workers.filter(|&n| n > 0).unwrap_or_else(runner::default_workers);
    let r = runner::optimize(&spec, &a.k.0, &forbidden, &cfg, None, n).map_err(invalid)?;
    let theorem = selector.as_ref().and_then(|s| s.theorem(a.k.0[0].dim()));
    let within = theorem.as_ref().is_none_or(|t| {
        r.ratio <= t.constant + CONSTANT_TOL && t.ceiling.is_none_or(|c| r.ratio <= c + CEILING_TOL)
    });
    match a.output.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &r.log {
                w.serialize(row).map_err(invalid)?;
            }
            let bytes = w.into_inner().map_err(invalid)?;
            let text = String::from_utf8(bytes).map_err(invalid)?;
            emit(&a.output, out, text.trim_end())?;
        }
        Format::Json => {
            let v = json!({
                "ratio": r.ratio,
                "theorem": theorem,
                "within_bounds": within,
                "restarts": r.restarts,
                "spectrum": r.spectrum,
            });
            emit_json(&a.output, out, &v, true)?;
        }
    }
    Ok(within)
}

fn lift(a: LiftArgs, out: &mut dyn Write) -> Run {
    let e = Enumeration::new(a.k.0).map_err(invalid)?;
    let lifted = lift_enumeration(&e).map_err(invalid)?;
    let simple = check_simple_s(&e).map_err(invalid)?;
    let ok = simple.holds && simple.projection_holds;
    let v: Value = json!({ "pairs": lifted.pairs, "extreme": lifted.extreme, "simple_s": simple });
    emit_json(&a.output, out, &v, false)?;
    Ok(ok)
}

fn measures(a: MeasuresArgs, out: &mut dyn Write) -> Run {
    match (&a.campaign.instances, &a.k) {
        (Some(p), None) => match MeasureDocument::from_value(read_json(p).map_err(invalid)?).map_err(invalid)? {
            MeasureDocument::Single(doc) => run_document(doc, &a.output, out),
            MeasureDocument::Campaign(doc) => {
                let trials = a.campaign.trials.or(doc.trials).unwrap_or(1);
                let seed = a.campaign.seed.or(doc.seed).unwrap_or(0);
                let start = Instant::now();
                let report = runner::run_measure_campaign(&doc.templates, trials, seed, workers(&a.campaign))
                    .map_err(invalid)?;
                let mut v = serde_json::to_value(&report).map_err(invalid)?;
                if a.campaign.timing {
                    v["wall_time_ms"] = json!(start.elapsed().as_millis() as u64);
                }
                emit_json(&a.output, out, &v, true)?;
                Ok(report.failed == 0)
            }
        },
        (None, Some(FreqList(k))) => {
            let order = (k[0].dim() > 1).then_some(ConeOrder::LexLast);
            let m = MeasureInstance {
                k: k.clone(),
                hypothesis: a.hypothesis.into(),
                kind: match a.kind {
                    Kind::Density => MeasureKind::Density,
                    Kind::Atomic => MeasureKind::Atomic,
                },
                seed: a.campaign.seed.unwrap_or(0),
                order,
                extra_atoms: 8,
            };
            run_document(ReplayDocument::Measure(m), &a.output, out)
        }
        _ => Err(invalid("measures takes exactly one of --instances or --k")),
    }
}
