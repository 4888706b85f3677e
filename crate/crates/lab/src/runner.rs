//! Parallel campaigns. Work is mapped on a pool of `workers` threads and collected in
//! index order before the sequential fold, so reports do not depend on the pool size.

use paley_core::inequality::{
    campaign_instances, combine_restarts, evaluate, CampaignReport, OptimizeResult, OptimizerConfig, Problem, Template,
};
use paley_core::measures::{measure_instances, MeasureReport, MeasureTemplate};
use paley_core::{Error, Freq, GridSpec, Result, Spectrum};
use rayon::prelude::*;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "PALEY_LAB_WORKERS";

/// `PALEY_LAB_WORKERS`, else the available parallelism.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Invalid(e.to_string()))
}

pub fn run_campaign(templates: &[Template], trials: u64, master: u64, workers: usize) -> Result<CampaignReport> {
    let items = campaign_instances(templates, trials, master)?;
    let parts: Vec<CampaignReport> = pool(workers)?.install(|| {
        items.into_par_iter().map(|(i, inst)| CampaignReport::from_outcome(evaluate(i, inst))).collect()
    });
    Ok(parts.into_iter().fold(CampaignReport::default(), CampaignReport::merge))
}

pub fn run_measure_campaign(
    templates: &[MeasureTemplate],
    trials: u64,
    master: u64,
    workers: usize,
) -> Result<MeasureReport> {
    let items = measure_instances(templates, trials, master)?;
    let parts: Vec<MeasureReport> = pool(workers)?.install(|| {
        items
            .into_par_iter()
            .map(|(i, m)| {
                let r = m.check();
                MeasureReport::from_result(i, m, r)
            })
            .collect()
    });
    Ok(parts.into_iter().fold(MeasureReport::default(), MeasureReport::merge))
}

/// Restarts run in parallel and are combined in restart order.
pub fn optimize(
    spec: &GridSpec,
    k: &[Freq],
    forbidden: &[Freq],
    cfg: &OptimizerConfig,
    start: Option<&Spectrum>,
    workers: usize,
) -> Result<OptimizeResult> {
    let problem = Problem::new(spec, k, forbidden)?;
    let results = pool(workers)?.install(|| {
        (0..cfg.restarts.max(1))
            .into_par_iter()
            .map(|r| problem.restart(cfg, r, if r == 0 { start } else { None }))
            .collect::<Result<Vec<_>>>()
    })?;
    combine_restarts(results)
}
