//! `verify`: the identity suite over every selected invariant character.

use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, ensure, Context, Result};
use clap::Args;
use covhalg_core::covariant::{contexts_for, CovariantContext};
use covhalg_core::{enumerate_characters, invariant_characters, run_verification, Quotient, VerificationReport, VerifyOptions};
use serde::Serialize;

use crate::groupspec::GroupSpec;
use crate::output::{csv_bytes, emit, json_bytes, Format};

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = covhalg_core::covariant::DEFAULT_TOL)]
    pub tol: f64,
    /// Norm exponents, comma separated.
    #[arg(long = "p", value_delimiter = ',', default_values_t = [1.0, 2.0, 3.0])]
    pub p: Vec<f64>,
}

impl RunArgs {
    pub fn validate(&self) -> Result<()> {
        ensure!(self.trials >= 1, "--trials must be at least 1");
        ensure!(self.tol > 0.0, "--tol must be positive");
        ensure!(self.p.iter().all(|&p| p >= 1.0), "--p values must be at least 1");
        Ok(())
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    xi: String,
    id: &'a str,
    anchor: &'a str,
    trials: usize,
    max_residual: f64,
    tolerance: f64,
    pass: bool,
}

pub struct VerifyRequest<'a> {
    pub spec: &'a Path,
    pub run: RunArgs,
    pub xi: Option<usize>,
    pub corrupt_xi: bool,
    pub format: Format,
    pub out: Option<&'a Path>,
}

/// Writes the reports and returns whether every property passed.
pub fn verify(req: VerifyRequest<'_>) -> Result<bool> {
    req.run.validate()?;
    let built = GroupSpec::load(req.spec)?.build()?;
    let label = built.label();
    let mut targets: Vec<(Option<usize>, Arc<CovariantContext>)> = if req.corrupt_xi {
        // Negative control: a character of N that conjugation moves.
        let gamma = invariant_characters(&built.n)?;
        let dual = enumerate_characters(&built.n)?;
        let Some(bad) = dual.characters().iter().find(|c| !gamma.contains(c)) else {
            bail!("--corrupt-xi needs a non-invariant character, but every character of N is invariant");
        };
        vec![(None, CovariantContext::new_unchecked(Quotient::new(&built.n)?, bad.clone()))]
    } else {
        contexts_for(&built.n)?.into_iter().enumerate().map(|(i, c)| (Some(i), c)).collect()
    };
    if let Some(i) = req.xi {
        ensure!(!req.corrupt_xi, "--xi and --corrupt-xi are exclusive");
        ensure!(i < targets.len(), "--xi {i} out of range: Gamma(G,N) has {} characters", targets.len());
        targets = vec![targets.swap_remove(i)];
    }
    let reports = targets
        .iter()
        .map(|(idx, ctx)| {
            let opts = VerifyOptions {
                trials: req.run.trials,
                seed: req.run.seed,
                tolerance: req.run.tol,
                p_values: req.run.p.clone(),
                n_label: built.n_label.clone(),
                xi_index: *idx,
            };
            let mut r = run_verification(ctx, &opts).context("verification")?;
            r.group = label.clone();
            Ok(r)
        })
        .collect::<Result<Vec<VerificationReport>>>()?;

    let bytes = match req.format {
        Format::Json => json_bytes(&reports)?,
        Format::Csv => {
            let rows: Vec<CsvRow> = reports
                .iter()
                .flat_map(|r| {
                    let xi = r.xi.index.map_or("corrupt".to_string(), |i| i.to_string());
                    r.properties.iter().map(move |p| CsvRow {
                        xi: xi.clone(),
                        id: &p.id,
                        anchor: &p.anchor,
                        trials: p.trials,
                        max_residual: p.max_residual,
                        tolerance: p.tolerance,
                        pass: p.pass,
                    })
                })
                .collect();
            csv_bytes(&[], &rows, &["xi", "id", "anchor", "trials", "max_residual", "tolerance", "pass"])?
        }
    };
    emit(req.out, &bytes)?;
    let mut ok = true;
    for r in &reports {
        for p in r.failures() {
            ok = false;
            let xi = r.xi.index.map_or("corrupt".to_string(), |i| i.to_string());
            eprintln!("FAIL {} xi={xi} {}: residual {:e} > {:e}", r.group, p.id, p.max_residual, p.tolerance);
        }
    }
    Ok(ok)
}
