//! Reproducible experiment scripts. Each produces a CSV table and a short
//! summary; `passed` is false iff one of its checks failed.

use std::fmt::Write;
use std::path::Path;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use tilesed::deficit::run_trials;
use tilesed::gsed::{decide, extract, OutcomeSeries};
use tilesed::hamiltonian::{
    energy_density_bounds, grid_decompose_check, ground_state, square_hamiltonian, top_level, toys, LocalHamiltonian,
    Method, SolveOptions,
};
use tilesed::robinson::{build_tileset, full_layers};
use tilesed::tm::{compile, InstanceIndexer};

use crate::config::{split_seed, RunConfig, Stream};
use crate::error::{CliError, CliResult};
use crate::inputs;

pub const NAMES: [&str; 4] = [
    "deficit-sweep",
    "extraction-roundtrip",
    "solver-crosscheck",
    "convergence",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub csv: Vec<u8>,
    pub summary: String,
    pub passed: bool,
}

impl Report {
    /// Writes `NAME.csv` and `NAME.txt` into `dir`.
    pub fn write(&self, dir: &Path) -> CliResult<()> {
        inputs::write(&dir.join(format!("{}.csv", self.name)), &self.csv)?;
        inputs::write(&dir.join(format!("{}.txt", self.name)), self.summary.as_bytes())
    }
}

pub fn run(name: &str, cfg: &RunConfig) -> CliResult<Report> {
    cfg.validate()?;
    let (csv, summary, passed) = match name {
        "deficit-sweep" => deficit_sweep(cfg)?,
        "extraction-roundtrip" => extraction_roundtrip(cfg)?,
        "solver-crosscheck" => solver_crosscheck(cfg)?,
        "convergence" => convergence(cfg)?,
        _ => {
            return Err(CliError::Config(format!(
                "unknown experiment {name:?}; known: {}",
                NAMES.join(", ")
            )))
        }
    };
    let mut summary = summary;
    let _ = writeln!(summary, "result: {}", if passed { "PASS" } else { "FAIL" });
    Ok(Report {
        name: name.to_string(),
        csv,
        summary,
        passed,
    })
}

type Parts = (Vec<u8>, String, bool);

fn table(header: &[&str], rows: Vec<Vec<String>>) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.into_inner().map_err(|e| CliError::Config(format!("csv: {e}")))
}

pub const DEFICIT_COLUMNS: [&str; 18] = [
    "seed",
    "L",
    "D",
    "injected",
    "phase_x",
    "phase_y",
    "deficit",
    "sdeficit",
    "odeficit",
    "tdeficit",
    "bound_deficit",
    "bound_sdeficit",
    "bound_odeficit",
    "bound_tdeficit",
    "slack_deficit",
    "slack_sdeficit",
    "slack_odeficit",
    "slack_tdeficit",
];

fn deficit_sweep(cfg: &RunConfig) -> CliResult<Parts> {
    let ts = build_tileset(&full_layers())?;
    let range = (cfg.defects[0], cfg.defects[1]);
    let trials = run_trials(
        &ts,
        cfg.window,
        range,
        cfg.trials,
        cfg.split_seed(Stream::DeficitTrials),
    )?;
    let mut least = [i64::MAX; 4];
    let rows = trials
        .iter()
        .map(|t| {
            let r = &t.report;
            let slack = r.slack();
            for (m, s) in least.iter_mut().zip(slack) {
                *m = (*m).min(s);
            }
            let mut row = vec![
                t.seed.to_string(),
                r.l.to_string(),
                r.defects.to_string(),
                t.injected.to_string(),
                t.phase.0.to_string(),
                t.phase.1.to_string(),
            ];
            row.extend(r.measured().iter().chain(&r.bounds).chain(&slack).map(i64::to_string));
            row
        })
        .collect();
    let passed = trials.iter().all(|t| t.report.holds());
    let mut s = format!(
        "deficit-sweep: {} trials, L = {}, |D| in {}..{}\n",
        trials.len(),
        cfg.window,
        range.0,
        range.1
    );
    if !trials.is_empty() {
        let _ = writeln!(s, "least slack (deficit, sdeficit, odeficit, tdeficit): {least:?}");
    }
    Ok((table(&DEFICIT_COLUMNS, rows)?, s, passed))
}

fn extraction_roundtrip(cfg: &RunConfig) -> CliResult<Parts> {
    let m = inputs::machine(&cfg.machine)?;
    let ix = InstanceIndexer::default();
    let tiles = OutcomeSeries::from_tiles(&m, ix, cfg.budgets.square as usize);
    let t = extract(cfg.k, &mut |p| decide(&tiles, p, cfg.k))?;
    let direct = OutcomeSeries::simulated(&m, ix).bits(cfg.k)?;
    let rows = t
        .queries
        .iter()
        .enumerate()
        .map(|(i, (p, d))| {
            vec![
                (i + 1).to_string(),
                p.alpha.to_string(),
                p.beta.to_string(),
                p.bit_length().to_string(),
                d.name().to_string(),
                t.recovered[i].to_string(),
                direct[i].to_string(),
            ]
        })
        .collect();
    let passed = t.recovered == direct;
    let bits = |v: &[u8]| v.iter().map(u8::to_string).collect::<String>();
    let s = format!(
        "extraction-roundtrip: machine {}, k = {}\nrecovered {}\ndirect    {}\nlongest query {} bits\n",
        m.name,
        cfg.k,
        bits(&t.recovered),
        bits(&direct),
        t.max_bit_length()
    );
    Ok((
        table(&["m", "alpha", "beta", "bits", "decision", "recovered", "direct"], rows)?,
        s,
        passed,
    ))
}

const CROSS_SIZES: [(usize, usize); 6] = [(3, 4), (4, 3), (3, 3), (2, 4), (2, 3), (1, 4)];

fn solver_crosscheck(cfg: &RunConfig) -> CliResult<Parts> {
    let base = cfg.split_seed(Stream::ToySets);
    let lambda = cfg.lambda()?;
    let cap = cfg.budgets.brute.min(20_000_000);
    let brute = SolveOptions {
        budget: Some(cfg.budgets.brute),
        block: None,
    };
    let transfer = SolveOptions {
        budget: Some(cfg.budgets.transfer),
        block: None,
    };
    let results: Vec<CliResult<Vec<String>>> = (0..cfg.crosscheck_sets as u64)
        .into_par_iter()
        .map(|i| {
            let seed = split_seed(base, i);
            let d = 2 + (i % 5) as usize;
            let ts = toys::random(d, 2 + (i % 2) as usize, seed);
            let h = LocalHamiltonian::from_tileset(&ts, lambda.clone(), |t| t == 0, |t| t + 1 == d)?;
            let &(w, hh) = CROSS_SIZES
                .iter()
                .find(|&&(w, hh)| (d as u64).checked_pow((w * hh) as u32).is_some_and(|v| v <= cap))
                .ok_or_else(|| CliError::Config("brute budget too small for any cross-check lattice".into()))?;
            let b = ground_state(&h, w, hh, Method::Brute, brute)?.energy;
            let t = ground_state(&h, w, hh, Method::Transfer, transfer)?.energy;
            Ok(vec![
                seed.to_string(),
                d.to_string(),
                format!("{w}x{hh}"),
                b.to_string(),
                t.to_string(),
                (b == t).to_string(),
            ])
        })
        .collect();
    let rows: Vec<Vec<String>> = results.into_iter().collect::<CliResult<_>>()?;
    let agree = rows.iter().filter(|r| r[5] == "true").count();
    let mut grid_ok = true;
    for i in 0..2 {
        let ts = toys::random(3, 2, split_seed(base, 1_000 + i));
        let h = LocalHamiltonian::from_tileset(&ts, lambda.clone(), |_| false, |_| false)?;
        grid_ok &= grid_decompose_check(&h, 2, 2)?.holds();
    }
    let s = format!(
        "solver-crosscheck: {agree}/{} tile sets agree (brute vs transfer), grid decomposition {}\n",
        rows.len(),
        if grid_ok { "holds" } else { "fails" }
    );
    let passed = agree == rows.len() && grid_ok;
    Ok((
        table(&["seed", "d", "size", "brute", "transfer", "agree"], rows)?,
        s,
        passed,
    ))
}

fn convergence(cfg: &RunConfig) -> CliResult<Parts> {
    let m = inputs::machine(&cfg.machine)?;
    let h = square_hamiltonian(&compile(&m)?, cfg.lambda()?)?;
    let largest = 2 * cfg.sizes.iter().max().copied().unwrap_or(1);
    let series = OutcomeSeries::simulated(&m, InstanceIndexer::default()).bits(top_level(largest).max(1))?;
    let mut rows = Vec::new();
    let mut passed = true;
    let limit = BigRational::new(3.into(), 5.into());
    for &l in &cfg.sizes {
        let a = energy_density_bounds(&h, &series, l)?;
        let b = energy_density_bounds(&h, &series, 2 * l)?;
        let (wa, wb) = (a.width().to_rational(), b.width().to_rational());
        let ratio = &wb / &wa;
        passed &= ratio <= limit;
        rows.push(vec![
            l.to_string(),
            a.width().to_string(),
            b.width().to_string(),
            format!("{:.6}", ratio.to_f64().unwrap_or(f64::NAN)),
        ]);
    }
    let s = format!(
        "convergence: machine {}, sizes {:?}, width(2L)/width(L) must be <= 0.6\n",
        m.name, cfg.sizes
    );
    Ok((table(&["L", "width_L", "width_2L", "ratio"], rows)?, s, passed))
}
