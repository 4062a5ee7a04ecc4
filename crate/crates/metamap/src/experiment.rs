//! Batch experiment harness: runs the full pipeline (generate, initialize,
//! simulate, measure) over a grid of instance sizes and parameter variants
//! and reports one CSV row per run.
//!
//! Rows appear in grid order (sizes outermost, then repetitions, then
//! variants) regardless of parallelism. The worker count follows the
//! `METAMAP_WORKERS` environment variable when set, otherwise the number
//! of available cores. The same graph (same seed) is reused across all
//! variants of a repetition so variants stay comparable.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;

use crate::gen::{generate_benchmark_graph, GenParams};
use crate::init::init_with_holes;
use crate::sim::{run, SimParams};
use crate::{Error, Result};

pub const CSV_HEADER: &str = "n,graph_index,seed,variant,iterations,avg_error,max_error,\
avg_complexity,max_complexity,wall_time_seconds,status";

/// One named simulation configuration.
#[derive(Clone, Debug)]
pub struct Variant {
    pub label: String,
    pub params: SimParams,
}

/// The stock comparison set: stiffness ceilings 1, 2, 4 and 8, plus the
/// uniform-pressure baseline.
pub fn default_variants() -> Vec<Variant> {
    let mut out = Vec::new();
    for s_high in [1.0, 2.0, 4.0, 8.0] {
        out.push(Variant {
            label: format!("s{}", s_high as u32),
            params: SimParams {
                s_high,
                ..SimParams::default()
            },
        });
    }
    out.push(Variant {
        label: "ms".into(),
        params: SimParams {
            ms_mode: true,
            ..SimParams::default()
        },
    });
    out
}

/// Looks up stock variants by label ("s1", "s2", "s4", "s8", "ms").
pub fn variants_by_label(labels: &[String]) -> Result<Vec<Variant>> {
    let stock = default_variants();
    labels
        .iter()
        .map(|l| {
            stock
                .iter()
                .find(|v| &v.label == l)
                .cloned()
                .ok_or_else(|| {
                    Error::Validation(format!(
                        "unknown variant {l:?} (expected one of s1, s2, s4, s8, ms)"
                    ))
                })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub sizes: Vec<usize>,
    pub graphs_per_size: usize,
    pub nest: f64,
    pub rem: f64,
    pub weight_ratio: f64,
    pub base_seed: u64,
    /// Iteration override applied to every variant.
    pub iterations: Option<usize>,
    pub variants: Vec<Variant>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            sizes: vec![10, 20],
            graphs_per_size: 5,
            nest: 0.0,
            rem: 0.0,
            weight_ratio: 4.0,
            base_seed: 0,
            iterations: None,
            variants: default_variants(),
        }
    }
}

struct Task {
    n: usize,
    graph_index: usize,
    seed: u64,
    variant: Variant,
}

/// Worker count: parsed override when valid, otherwise `None` (let the
/// thread pool pick).
fn worker_count(env_value: Option<&str>) -> Option<usize> {
    env_value.and_then(|s| s.parse::<usize>().ok()).filter(|&k| k > 0)
}

/// Runs the whole grid and returns the CSV text (header plus one row per
/// size x repetition x variant combination, in grid order).
pub fn run_experiment(config: &ExperimentConfig) -> Result<String> {
    if config.sizes.is_empty() || config.graphs_per_size == 0 || config.variants.is_empty() {
        return Err(Error::Validation(
            "experiment needs at least one size, repetition and variant".into(),
        ));
    }
    let mut tasks = Vec::new();
    for (si, &n) in config.sizes.iter().enumerate() {
        for rep in 0..config.graphs_per_size {
            let graph_index = si * config.graphs_per_size + rep;
            for variant in &config.variants {
                let mut v = variant.clone();
                if config.iterations.is_some() {
                    v.params.iterations = config.iterations;
                }
                tasks.push(Task {
                    n,
                    graph_index,
                    seed: config.base_seed + graph_index as u64,
                    variant: v,
                });
            }
        }
    }

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = worker_count(std::env::var("METAMAP_WORKERS").ok().as_deref()) {
        builder = builder.num_threads(k);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Validation(format!("worker pool: {e}")))?;
    let gen = |t: &Task| GenParams {
        n: t.n,
        nest: config.nest,
        rem: config.rem,
        weight_ratio: config.weight_ratio,
        seed: t.seed,
    };
    let rows: Vec<String> = pool.install(|| {
        tasks
            .par_iter()
            .map(|t| run_task(t, &gen(t)))
            .collect()
    });

    let mut csv = String::with_capacity(rows.len() * 96 + CSV_HEADER.len() + 1);
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    for row in rows {
        csv.push_str(&row);
        csv.push('\n');
    }
    Ok(csv)
}

fn run_task(task: &Task, gen: &GenParams) -> String {
    let started = Instant::now();
    let outcome = generate_benchmark_graph(gen)
        .and_then(|g| init_with_holes(&g))
        .and_then(|m| {
            let iterations = task.variant.params.iterations_for(m.non_hole_regions().count());
            run(&m, &task.variant.params).map(|o| (o, iterations))
        });
    let elapsed = started.elapsed().as_secs_f64();
    let mut row = String::new();
    write!(
        row,
        "{},{},{},{},",
        task.n, task.graph_index, task.seed, task.variant.label
    )
    .unwrap();
    match outcome {
        Ok((o, iterations)) => {
            write!(
                row,
                "{},{:.6},{:.6},{:.6},{:.6},{:.3},ok",
                iterations,
                o.report.avg_error,
                o.report.max_error,
                o.report.avg_complexity,
                o.report.max_complexity,
                elapsed
            )
            .unwrap();
        }
        Err(e) => {
            let reason = e.to_string().replace([',', '\n'], ";");
            write!(row, ",,,,,{elapsed:.3},failed: {reason}").unwrap();
        }
    }
    row
}
