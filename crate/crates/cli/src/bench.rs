//! `bench`: wall-clock timings of the covariant convolution.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{ensure, Result};
use covhalg_core::covariant::{contexts_for, CovariantContext};
use covhalg_core::{cov_convolve, make_finite_heisenberg, Subgroup};
use rand::SeedableRng;
use serde::Serialize;

use crate::groupspec::GroupSpec;
use crate::output::{csv_bytes, emit, json_bytes, Format};

/// Largest group order benchmarked through composition tables.
pub const ORDER_BUDGET: usize = 4096;

#[derive(Serialize)]
struct Row {
    group: String,
    order: usize,
    cosets: usize,
    convolutions: usize,
    mean_ms: f64,
    stddev_ms: f64,
    min_ms: f64,
}

fn time(label: String, ctx: &Arc<CovariantContext>, reps: usize, repeats: usize) -> Result<Row> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    let a = ctx.random(&mut rng);
    let b = ctx.random(&mut rng);
    let mut samples = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let t = Instant::now();
        for _ in 0..reps {
            std::hint::black_box(cov_convolve(&a, &b)?);
        }
        samples.push(t.elapsed().as_secs_f64() * 1e3);
    }
    let mean = samples.iter().sum::<f64>() / repeats as f64;
    let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (repeats.max(2) - 1) as f64;
    Ok(Row {
        group: label,
        order: ctx.group().order(),
        cosets: ctx.coset_count(),
        convolutions: reps,
        mean_ms: mean,
        stddev_ms: var.sqrt(),
        min_ms: samples.iter().copied().fold(f64::INFINITY, f64::min),
    })
}

pub struct BenchArgs<'a> {
    pub spec: Option<&'a Path>,
    pub sizes: Vec<usize>,
    pub reps: usize,
    pub repeats: usize,
}

pub fn bench(a: BenchArgs<'_>, format: Format, out: Option<&Path>) -> Result<()> {
    ensure!(a.reps >= 1 && a.repeats >= 1, "--reps and --repeats must be at least 1");
    let mut rows = Vec::new();
    if let Some(spec) = a.spec {
        let built = GroupSpec::load(spec)?.build()?;
        let ctx = contexts_for(&built.n)?.into_iter().next().expect("the trivial character is invariant");
        rows.push(time(built.label(), &ctx, a.reps, a.repeats)?);
    } else {
        for &m in &a.sizes {
            ensure!(m >= 2, "Heisenberg size M = {m} is below 2");
            ensure!(m.pow(3) <= ORDER_BUDGET, "H(Z{m}) has {} elements, over the {ORDER_BUDGET}-element budget", m.pow(3));
            let sd = make_finite_heisenberg(m)?;
            let ctx = contexts_for(&Subgroup::center(Arc::clone(sd.group())))?.remove(0);
            rows.push(time(sd.group().label().to_string(), &ctx, a.reps, a.repeats)?);
        }
    }
    let bytes = match format {
        Format::Json => json_bytes(&rows)?,
        Format::Csv => csv_bytes(&[], &rows, &["group", "order", "cosets", "convolutions", "mean_ms", "stddev_ms", "min_ms"])?,
    };
    emit(out, &bytes)
}
