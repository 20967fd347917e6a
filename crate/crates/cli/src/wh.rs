//! `wh`: Weyl–Heisenberg closed forms on CSV data.
//!
//! Centre case files start with `# M=<M> n=<n>` and have columns `x,l,re,im`.
//! Full case files (`N = L̂ × 𝕋`, selected with `--y`) start with
//! `# M=<M> y=<y> n=<n>` and have columns `x,re,im`.

use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use covhalg_core::weyl_heisenberg::{
    circle_oracle_check, wh_center_convolve, wh_center_involve, wh_full_convolve, wh_full_involve, wh_invariant_characters,
    WhCenterCovariant, WhFullCovariant,
};
use covhalg_core::C64;
use rand::SeedableRng;
use serde::Serialize;

use crate::output::{csv_bytes, emit, json_bytes, Format};

/// The two kinds of covariant data a file can hold.
pub enum WhData {
    Center(WhCenterCovariant),
    Full(WhFullCovariant),
}

#[derive(Clone, Copy, Debug)]
pub struct WhParams {
    pub m: usize,
    pub n: i64,
    pub y: Option<usize>,
}

impl WhParams {
    fn header(&self) -> String {
        match self.y {
            None => format!("M={} n={}", self.m, self.n),
            Some(y) => format!("M={} y={} n={}", self.m, y, self.n),
        }
    }
}

#[derive(Serialize)]
struct CenterRow {
    x: usize,
    l: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct FullRow {
    x: usize,
    re: f64,
    im: f64,
}

fn to_csv(p: WhParams, data: &WhData) -> Result<Vec<u8>> {
    let m = p.m;
    match data {
        WhData::Center(w) => {
            let rows: Vec<CenterRow> = (0..m * m)
                .map(|i| {
                    let v = w.values()[i];
                    CenterRow { x: i / m, l: i % m, re: v.re, im: v.im }
                })
                .collect();
            csv_bytes(&[p.header()], &rows, &["x", "l", "re", "im"])
        }
        WhData::Full(w) => {
            let rows: Vec<FullRow> = w
                .values()
                .iter()
                .enumerate()
                .map(|(x, v)| FullRow { x, re: v.re, im: v.im })
                .collect();
            csv_bytes(&[p.header()], &rows, &["x", "re", "im"])
        }
    }
}

pub fn read(path: &Path, p: WhParams) -> Result<WhData> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse(&text, p).with_context(|| format!("in {}", path.display()))
}

pub fn parse(text: &str, p: WhParams) -> Result<WhData> {
    let m = p.m;
    ensure!(m >= 1, "--M must be at least 1");
    if let Some(h) = text.lines().find_map(|l| l.trim().strip_prefix('#')) {
        let h = h.trim();
        if h.starts_with("M=") {
            ensure!(h == p.header(), "file header '{h}' does not match '{}'", p.header());
        }
    }
    let body: String = text.lines().filter(|l| !l.trim_start().starts_with('#')).collect::<Vec<_>>().join("\n");
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(body.as_bytes());
    let cells = if p.y.is_some() { m } else { m * m };
    let mut values: Vec<Option<C64>> = vec![None; cells];
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.with_context(|| format!("row {}", line + 1))?;
        let num = |i: usize| -> Result<f64> {
            rec.get(i)
                .context("missing column")?
                .parse::<f64>()
                .with_context(|| format!("row {}: column {} is not a number", line + 1, i + 1))
        };
        let (cell, re, im) = if p.y.is_some() {
            ensure!(rec.len() == 3, "row {}: expected x,re,im", line + 1);
            let x = num(0)? as usize;
            ensure!(x < m, "row {}: x = {x} out of range", line + 1);
            (x, num(1)?, num(2)?)
        } else {
            ensure!(rec.len() == 4, "row {}: expected x,l,re,im", line + 1);
            let (x, l) = (num(0)? as usize, num(1)? as usize);
            ensure!(x < m && l < m, "row {}: ({x}, {l}) out of range", line + 1);
            (x * m + l, num(2)?, num(3)?)
        };
        ensure!(values[cell].is_none(), "row {}: duplicate entry", line + 1);
        values[cell] = Some(C64::new(re, im));
    }
    let Some(values) = values.into_iter().collect::<Option<Vec<_>>>() else {
        bail!("expected {cells} rows, some are missing");
    };
    Ok(match p.y {
        None => WhData::Center(WhCenterCovariant::new(m, p.n, values)?),
        Some(y) => WhData::Full(WhFullCovariant::new(m, y, p.n, values)?),
    })
}

pub fn random(p: WhParams, seed: u64, out: Option<&Path>) -> Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let data = match p.y {
        None => WhData::Center(WhCenterCovariant::random(p.m, p.n, &mut rng)),
        Some(y) => WhData::Full(WhFullCovariant::random(p.m, y, p.n, &mut rng)?),
    };
    emit(out, &to_csv(p, &data)?)
}

pub fn convolve(p: WhParams, psi: &Path, phi: &Path, out: Option<&Path>) -> Result<()> {
    let res = match (read(psi, p)?, read(phi, p)?) {
        (WhData::Center(a), WhData::Center(b)) => WhData::Center(wh_center_convolve(&a, &b)?),
        (WhData::Full(a), WhData::Full(b)) => WhData::Full(wh_full_convolve(&a, &b)?),
        _ => unreachable!("both files are read with the same parameters"),
    };
    emit(out, &to_csv(p, &res)?)
}

pub fn involve(p: WhParams, psi: &Path, out: Option<&Path>) -> Result<()> {
    let res = match read(psi, p)? {
        WhData::Center(a) => WhData::Center(wh_center_involve(&a)),
        WhData::Full(a) => WhData::Full(wh_full_involve(&a)),
    };
    emit(out, &to_csv(p, &res)?)
}

#[derive(Serialize)]
struct GammaRow {
    y: usize,
    n: i64,
}

pub fn gamma(m: usize, n_max: i64, format: Format, out: Option<&Path>) -> Result<()> {
    let rows: Vec<GammaRow> = wh_invariant_characters(m, n_max)?.into_iter().map(|(y, n)| GammaRow { y, n }).collect();
    let bytes = match format {
        Format::Json => json_bytes(&rows)?,
        Format::Csv => csv_bytes(&[format!("M={m} nmax={n_max}: {} invariant characters", rows.len())], &rows, &["y", "n"])?,
    };
    emit(out, &bytes)
}

pub struct OracleArgs {
    pub m: usize,
    pub n: i64,
    pub degree: usize,
    pub points: usize,
    pub trials: usize,
    pub seed: u64,
}

pub fn oracle(a: OracleArgs, out: Option<&Path>) -> Result<bool> {
    ensure!(a.trials >= 1, "--trials must be at least 1");
    let report = circle_oracle_check(a.m, a.n, a.degree, a.points, a.trials, a.seed)?;
    emit(out, &json_bytes(&report)?)?;
    for p in report.failures() {
        eprintln!("FAIL {}: residual {:e} > {:e}", p.id, p.max_residual, p.tolerance);
    }
    Ok(report.all_pass())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_roundtrip() {
        let p = WhParams { m: 3, n: 2, y: None };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let w = WhCenterCovariant::random(3, 2, &mut rng);
        let text = String::from_utf8(to_csv(p, &WhData::Center(w.clone())).unwrap()).unwrap();
        assert!(text.starts_with("# M=3 n=2\nx,l,re,im\n"));
        match parse(&text, p).unwrap() {
            WhData::Center(back) => assert_eq!(back, w),
            WhData::Full(_) => panic!(),
        }
        assert!(parse(&text, WhParams { n: 1, ..p }).is_err());
        let short: String = text.lines().take(5).collect::<Vec<_>>().join("\n");
        assert!(parse(&short, p).is_err());
    }

    #[test]
    fn full_case_roundtrip() {
        let p = WhParams { m: 4, n: 4, y: Some(1) };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let w = WhFullCovariant::random(4, 1, 4, &mut rng).unwrap();
        let text = String::from_utf8(to_csv(p, &WhData::Full(w.clone())).unwrap()).unwrap();
        match parse(&text, p).unwrap() {
            WhData::Full(back) => assert_eq!(back, w),
            WhData::Center(_) => panic!(),
        }
    }
}
