//! Argument definitions and dispatch for the `tilesed` binary.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use tilesed::deficit::{border_intersection_sweep, frame_cut_sweep, inject_defects, measure_deficits};
use tilesed::gsed::{decide, extract, fgsed, OutcomeSeries, ThresholdPair, DEFAULT_MAX_DEPTH};
use tilesed::hamiltonian::{
    energy_density_bounds, evaluate, ground_state, restricted_square_energy, square_hamiltonian, top_level, toys,
    Dyadic, LocalHamiltonian, Method, SolveOptions,
};
use tilesed::robinson::{
    build_tileset, census_bounds, find_all_borders, full_layers, generate_tiling, parse_layers, predicted_borders,
    Layer,
};
use tilesed::tm::{compile, content_token, level_machine, parse_input, run_reference, InstanceIndexer, TMSpec};
use tilesed::wang::{energy_raw, TileSet};

use crate::config::{RunConfig, Stream};
use crate::error::{CliError, CliResult};
use crate::experiments;
use crate::inputs;
use crate::render::{render, Format, Highlight, RenderSpec};

#[derive(Debug, Parser)]
#[command(
    name = "tilesed",
    version,
    about = "Robinson tilings, tiled Turing machines and energy-density experiments"
)]
pub struct Cli {
    /// Run configuration (TOML). Budgets may be overridden through
    /// TILESED_BRUTE_BUDGET, TILESED_TRANSFER_BUDGET, TILESED_BRANCH_BUDGET
    /// and TILESED_SQUARE_BUDGET.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Robinson tile sets, tilings and borders.
    #[command(subcommand)]
    Robinson(RobinsonCmd),
    /// Turing machines and their tile compilation.
    #[command(subcommand)]
    Tm(TmCmd),
    /// Tiling Hamiltonians and exact ground states.
    #[command(subcommand)]
    Ham(HamCmd),
    /// Defect injection and deficit bounds.
    #[command(subcommand)]
    Deficit(DeficitCmd),
    /// Threshold decisions on energy densities and digit extraction.
    #[command(subcommand)]
    Gsed(GsedCmd),
    /// Draw a tiling as text, SVG or PPM.
    Render(RenderArgs),
    /// Run a named experiment and write its CSV and summary.
    Experiment(ExperimentArgs),
    /// Print the effective configuration.
    Config,
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    inputs::size(s)
}

fn parse_phase(s: &str) -> Result<(i64, i64), String> {
    inputs::phase(s)
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    inputs::range(s)
}

#[derive(Debug, Subcommand)]
pub enum RobinsonCmd {
    /// Print the tile set for a layer list.
    Tileset {
        #[arg(long, default_value = "robinson,dash,obstruction,tm")]
        layers: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Generate a window of the canonical tiling.
    Gen {
        #[arg(long, value_parser = parse_size)]
        size: (usize, usize),
        #[arg(long, value_parser = parse_phase, default_value = "0,0", allow_hyphen_values = true)]
        phase: (i64, i64),
        #[arg(long, default_value = "robinson,dash,obstruction")]
        layers: String,
        /// Replace this many cells by clashing tiles.
        #[arg(long, default_value_t = 0)]
        inject: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// List borders of a tiling as `n corner_x corner_y complete`.
    Borders {
        tiling: PathBuf,
        /// Include incomplete borders.
        #[arg(long)]
        all: bool,
    },
    /// Complete border counts per level against the census bounds.
    Census {
        #[arg(long, value_parser = parse_size)]
        size: (usize, usize),
        #[arg(long, value_parser = parse_phase, default_value = "0,0", allow_hyphen_values = true)]
        phase: (i64, i64),
    },
}

#[derive(Debug, Subcommand)]
pub enum TmCmd {
    /// Print a machine in the text format (`builtin:NAME` or a file).
    Show { machine: String },
    /// Run the reference simulator.
    Run {
        machine: String,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
    },
    /// Compile a machine to its Wang tile set.
    Compile {
        machine: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Ground history of the level-n square, one tape row per line.
    Square {
        machine: String,
        #[arg(short, long)]
        n: u32,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Brute,
    Transfer,
    BranchBound,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ToyKind {
    Blank,
    Incompatible,
    Checkerboard,
    Random,
}

#[derive(Debug, Subcommand)]
pub enum HamCmd {
    /// Energy of a tiling (Robinson tilings are recognised by their hash).
    Eval {
        tiling: PathBuf,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        tileset: Option<PathBuf>,
    },
    /// Exact ground state of a tile set on a small open lattice.
    Solve {
        #[arg(long)]
        tileset: PathBuf,
        #[arg(long, value_parser = parse_size)]
        size: (usize, usize),
        #[arg(long, value_enum, default_value = "transfer")]
        method: MethodArg,
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Restricted ground energy of the level-n square of a machine.
    SquareEnergy {
        #[arg(long)]
        machine: String,
        #[arg(short, long)]
        n: u32,
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Energy-density interval at size L.
    Density {
        #[arg(long)]
        machine: String,
        #[arg(short = 'l', long)]
        size: usize,
    },
    /// Write a toy tile set.
    Toy {
        #[arg(long, value_enum, default_value = "random")]
        kind: ToyKind,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        colours: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum DeficitCmd {
    /// Seeded trials with injected defects; CSV of deficits, bounds, slack.
    Run {
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, value_parser = parse_range)]
        defects: Option<(usize, usize)>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Deficits of one tiling file against a reference phase.
    Measure {
        tiling: PathBuf,
        #[arg(long, value_parser = parse_phase, default_value = "0,0", allow_hyphen_values = true)]
        phase: (i64, i64),
    },
    /// Exhaustive checks of the frame-cut and border-intersection bounds.
    Lemmas {
        #[arg(long, default_value_t = 2)]
        top: u32,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Source {
    /// Restricted square energies of the compiled tiles.
    Tiles,
    /// Direct simulation.
    Sim,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long)]
    pub machine: String,
    #[arg(long, value_enum, default_value = "tiles")]
    pub source: Source,
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    pub max_depth: u32,
}

#[derive(Debug, Subcommand)]
pub enum GsedCmd {
    Decide {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
    },
    Extract {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(short)]
        k: Option<u32>,
    },
    Fgsed {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long)]
        eps: String,
    },
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Tiling file; without it a window of the canonical tiling is drawn.
    pub tiling: Option<PathBuf>,
    #[arg(long, value_parser = parse_size, default_value = "15x15")]
    pub size: (usize, usize),
    #[arg(long, value_parser = parse_phase, default_value = "0,0", allow_hyphen_values = true)]
    pub phase: (i64, i64),
    /// Layers to draw.
    #[arg(long, default_value = "robinson,dash")]
    pub layers: String,
    #[arg(long, default_value = "borders")]
    pub highlight: String,
    #[arg(long, default_value = "ascii")]
    pub format: String,
    #[arg(long, default_value_t = 0)]
    pub inject: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    pub name: String,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

fn emit(stdout: &mut dyn Write, out: &Option<PathBuf>, bytes: &[u8]) -> CliResult<()> {
    match out {
        Some(p) => inputs::write(p, bytes),
        None => stdout.write_all(bytes).map_err(|e| CliError::io("stdout", e)),
    }
}

fn say(stdout: &mut dyn Write, text: &str) -> CliResult<()> {
    stdout.write_all(text.as_bytes()).map_err(|e| CliError::io("stdout", e))
}

fn dyadic(s: &str) -> CliResult<Dyadic> {
    Ok(s.parse()?)
}

fn lambda_of(arg: &Option<String>, cfg: &RunConfig) -> CliResult<BigRational> {
    match arg {
        Some(l) => RunConfig {
            lambda: l.clone(),
            ..cfg.clone()
        }
        .lambda(),
        None => cfg.lambda(),
    }
}

/// Loads the configuration named by `--config` and applies budget
/// overrides from the environment.
pub fn load_config(path: Option<&Path>, env: impl Fn(&str) -> Option<String>) -> CliResult<RunConfig> {
    let mut cfg = match path {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    cfg.apply_env(env)?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn run(cli: Cli, stdout: &mut dyn Write, env: impl Fn(&str) -> Option<String>) -> CliResult<()> {
    let cfg = load_config(cli.config.as_deref(), env)?;
    match cli.command {
        Command::Robinson(c) => robinson(c, &cfg, stdout),
        Command::Tm(c) => tm(c, &cfg, stdout),
        Command::Ham(c) => ham(c, &cfg, stdout),
        Command::Deficit(c) => deficit(c, &cfg, stdout),
        Command::Gsed(c) => gsed(c, &cfg, stdout),
        Command::Render(a) => render_cmd(a, &cfg, stdout),
        Command::Experiment(a) => {
            let report = experiments::run(&a.name, &cfg)?;
            let dir = a.out_dir.unwrap_or_else(|| PathBuf::from(&cfg.out_dir));
            report.write(&dir)?;
            say(stdout, &report.summary)?;
            if report.passed {
                Ok(())
            } else {
                Err(CliError::Assertion(format!("experiment {} failed", a.name)))
            }
        }
        Command::Config => say(stdout, &cfg.to_text()),
    }
}

fn robinson(c: RobinsonCmd, cfg: &RunConfig, stdout: &mut dyn Write) -> CliResult<()> {
    match c {
        RobinsonCmd::Tileset { layers, out } => {
            let ts = build_tileset(&parse_layers(&layers)?)?;
            emit(stdout, &out.out, ts.base().to_text().as_bytes())
        }
        RobinsonCmd::Gen {
            size,
            phase,
            layers,
            inject,
            seed,
            out,
        } => {
            let ts = build_tileset(&parse_layers(&layers)?)?;
            let mut c = generate_tiling(&ts, size.0, size.1, phase)?;
            if inject > 0 {
                c = inject_defects(ts.base(), &c, inject, seed.unwrap_or(cfg.split_seed(Stream::Injection)))?;
            }
            emit(stdout, &out.out, c.to_text(ts.base()).as_bytes())
        }
        RobinsonCmd::Borders { tiling, all } => {
            let (ts, c) = inputs::robinson_tiling(&tiling)?;
            let mut s = String::from("n corner_x corner_y complete\n");
            for b in find_all_borders(&ts, &c).into_iter().filter(|b| all || b.complete) {
                let _ = writeln!(s, "{} {} {} {}", b.n, b.corner.0, b.corner.1, b.complete);
            }
            say(stdout, &s)
        }
        RobinsonCmd::Census { size, phase } => {
            let ts = build_tileset(&[Layer::Robinson, Layer::Dash])?;
            let c = generate_tiling(&ts, size.0, size.1, phase)?;
            let found = find_all_borders(&ts, &c);
            let mut s = String::from("n complete predicted census_lo census_hi\n");
            let mut n = 1;
            while 2usize << (2 * n) <= size.0.min(size.1) {
                let count = found.iter().filter(|b| b.n == n && b.complete).count();
                let (lo, hi) = census_bounds(size.0.min(size.1), n);
                let _ = writeln!(
                    s,
                    "{n} {count} {} {lo} {hi}",
                    predicted_borders(n, size.0, size.1, phase)
                );
                n += 1;
            }
            say(stdout, &s)
        }
    }
}

fn tm(c: TmCmd, cfg: &RunConfig, stdout: &mut dyn Write) -> CliResult<()> {
    match c {
        TmCmd::Show { machine } => say(stdout, &inputs::machine(&machine)?.to_text()),
        TmCmd::Run {
            machine,
            input,
            max_steps,
        } => {
            let m = inputs::machine(&machine)?;
            let r = run_reference(&m, &parse_input(&input), max_steps)?;
            let tape = r.trace.last().map(|s| s.tape_string(&m)).unwrap_or_default();
            say(
                stdout,
                &format!("outcome {:?}\nsteps {}\ntape {tape}\n", r.outcome, r.steps).to_lowercase(),
            )
        }
        TmCmd::Compile { machine, out } => {
            let cm = compile(&inputs::machine(&machine)?)?;
            emit(stdout, &out.out, cm.tiles.to_text().as_bytes())?;
            if out.out.is_some() {
                say(stdout, &format!("{} tiles, hash {}\n", cm.tiles.len(), cm.tiles.hash()))?;
            }
            Ok(())
        }
        TmCmd::Square { machine, n } => {
            let m = inputs::machine(&machine)?;
            let cm = compile(&level_machine(&m, InstanceIndexer::default(), n)?)?;
            let sq = restricted_square_energy(&cm, n, cfg.lambda()?, cfg.budgets.square as usize)?;
            let mut s = format!("energy {}\n", sq.energy);
            // top row first, matching the picture of the square
            for row in cm.decode(&sq.witness)?.iter().rev() {
                let cells: Vec<String> = row.iter().map(|&c| content_token(&cm.machine, c)).collect();
                let _ = writeln!(s, "{}", cells.join(" "));
            }
            say(stdout, &s)
        }
    }
}

fn method(m: MethodArg) -> Method {
    match m {
        MethodArg::Brute => Method::Brute,
        MethodArg::Transfer => Method::Transfer,
        MethodArg::BranchBound => Method::BranchBound,
    }
}

fn ham(c: HamCmd, cfg: &RunConfig, stdout: &mut dyn Write) -> CliResult<()> {
    match c {
        HamCmd::Eval {
            tiling,
            lambda,
            tileset,
        } => {
            let lambda = lambda_of(&lambda, cfg)?;
            let (ts, c) = match tileset {
                Some(t) => inputs::tiling_with(&tiling, &t)?,
                None => {
                    let (ts, c) = inputs::robinson_tiling(&tiling)?;
                    (ts.base().clone(), c)
                }
            };
            let h = LocalHamiltonian::from_tileset(&ts, lambda, |_| false, |_| false)?;
            say(
                stdout,
                &format!("energy {}\nviolations {}\n", evaluate(&h, &c)?, energy_raw(&ts, &c)?),
            )
        }
        HamCmd::Solve {
            tileset,
            size,
            method: m,
            lambda,
        } => {
            let ts = TileSet::parse(&inputs::read(&tileset)?)?;
            let h = LocalHamiltonian::from_tileset(&ts, lambda_of(&lambda, cfg)?, |_| false, |_| false)?;
            let m = method(m);
            let budget = match m {
                Method::Brute => cfg.budgets.brute,
                Method::Transfer => cfg.budgets.transfer,
                Method::BranchBound => cfg.budgets.branch,
            };
            let opts = SolveOptions {
                budget: Some(budget),
                block: None,
            };
            let r = ground_state(&h, size.0, size.1, m, opts)?;
            say(
                stdout,
                &format!(
                    "energy {}\nmethod {}\n{}",
                    r.energy,
                    r.method.name(),
                    r.argmin.to_text(&ts)
                ),
            )
        }
        HamCmd::SquareEnergy { machine, n, lambda } => {
            let m = inputs::machine(&machine)?;
            let cm = compile(&level_machine(&m, InstanceIndexer::default(), n)?)?;
            let sq = restricted_square_energy(&cm, n, lambda_of(&lambda, cfg)?, cfg.budgets.square as usize)?;
            say(stdout, &format!("energy {}\nvisited {}\n", sq.energy, sq.visited))
        }
        HamCmd::Density { machine, size } => {
            let m = inputs::machine(&machine)?;
            let h = square_hamiltonian(&compile(&m)?, cfg.lambda()?)?;
            let bits = OutcomeSeries::simulated(&m, InstanceIndexer::default()).bits(top_level(size).max(1))?;
            let e = energy_density_bounds(&h, &bits, size)?;
            say(
                stdout,
                &format!("lo {}\nhi {}\nwidth {}\n", e.value_lo, e.value_hi, e.width()),
            )
        }
        HamCmd::Toy {
            kind,
            d,
            colours,
            seed,
            out,
        } => {
            let ts = match kind {
                ToyKind::Blank => toys::blank(),
                ToyKind::Incompatible => toys::incompatible(),
                ToyKind::Checkerboard => toys::checkerboard(),
                ToyKind::Random => {
                    if d == 0 || colours == 0 {
                        return Err(CliError::Config("d and colours must be positive".into()));
                    }
                    toys::random(d, colours, seed)
                }
            };
            emit(stdout, &out.out, ts.to_text().as_bytes())
        }
    }
}

fn deficit(c: DeficitCmd, cfg: &RunConfig, stdout: &mut dyn Write) -> CliResult<()> {
    match c {
        DeficitCmd::Run {
            size,
            defects,
            trials,
            seed,
            report,
        } => {
            let mut cfg = cfg.clone();
            cfg.window = size.unwrap_or(cfg.window);
            if let Some((lo, hi)) = defects {
                cfg.defects = [lo, hi];
            }
            cfg.trials = trials.unwrap_or(cfg.trials);
            cfg.seed = seed.unwrap_or(cfg.seed);
            let r = experiments::run("deficit-sweep", &cfg)?;
            match &report {
                Some(p) => inputs::write(p, &r.csv)?,
                None => say(stdout, std::str::from_utf8(&r.csv).expect("csv is utf-8"))?,
            }
            say(stdout, &r.summary)?;
            if r.passed {
                Ok(())
            } else {
                Err(CliError::Assertion("a deficit bound was exceeded".into()))
            }
        }
        DeficitCmd::Measure { tiling, phase } => {
            let (ts, c) = inputs::robinson_tiling(&tiling)?;
            let r = measure_deficits(&ts, &c, phase)?;
            let mut s = format!("defects {}\nL {}\n", r.defects, r.l);
            for (name, (v, b)) in ["deficit", "sdeficit", "odeficit", "tdeficit"]
                .iter()
                .zip(r.measured().into_iter().zip(r.bounds))
            {
                let _ = writeln!(s, "{name} {v} bound {b} slack {}", b - v);
            }
            say(stdout, &s)?;
            if r.holds() {
                Ok(())
            } else {
                Err(CliError::Assertion("a deficit bound was exceeded".into()))
            }
        }
        DeficitCmd::Lemmas { top } => {
            if !(1..=3).contains(&top) {
                return Err(CliError::Config("--top must lie in 1..=3".into()));
            }
            let mut s = String::from("lemma m l max_observed bound cases\n");
            let mut ok = true;
            for l in 1..=top {
                for m in 1..=l {
                    let r = frame_cut_sweep(m, l);
                    ok &= r.holds();
                    let _ = writeln!(s, "frame-cut {m} {l} {} {} {}", r.max_observed, r.bound, r.cases);
                }
            }
            for m in 1..=top {
                let r = border_intersection_sweep(m, top);
                ok &= r.holds();
                let _ = writeln!(
                    s,
                    "border-intersection {m} {} {} {} {}",
                    r.l, r.max_observed, r.bound, r.cases
                );
            }
            say(stdout, &s)?;
            if ok {
                Ok(())
            } else {
                Err(CliError::Assertion("a lemma bound was exceeded".into()))
            }
        }
    }
}

fn series(a: &SeriesArgs, cfg: &RunConfig) -> CliResult<(TMSpec, OutcomeSeries)> {
    let m = inputs::machine(&a.machine)?;
    let ix = InstanceIndexer::default();
    let s = match a.source {
        Source::Tiles => OutcomeSeries::from_tiles(&m, ix, cfg.budgets.square as usize),
        Source::Sim => OutcomeSeries::simulated(&m, ix),
    };
    Ok((m, s))
}

fn gsed(c: GsedCmd, cfg: &RunConfig, stdout: &mut dyn Write) -> CliResult<()> {
    match c {
        GsedCmd::Decide { series: a, alpha, beta } => {
            let (_, s) = series(&a, cfg)?;
            let t = ThresholdPair::new(dyadic(&alpha)?, dyadic(&beta)?)?;
            say(stdout, &format!("{}\n", decide(&s, &t, a.max_depth)?.name()))
        }
        GsedCmd::Extract { series: a, k } => {
            let (_, s) = series(&a, cfg)?;
            let k = k.unwrap_or(cfg.k);
            let t = extract(k, &mut |p| decide(&s, p, a.max_depth))?;
            let mut out = String::new();
            for (i, (p, d)) in t.queries.iter().enumerate() {
                let _ = writeln!(out, "query {} alpha {} beta {} -> {}", i + 1, p.alpha, p.beta, d.name());
            }
            let bits: String = t.recovered.iter().map(u8::to_string).collect();
            let _ = writeln!(out, "bits {bits}");
            say(stdout, &out)
        }
        GsedCmd::Fgsed { series: a, eps } => {
            let (_, s) = series(&a, cfg)?;
            say(stdout, &format!("{}\n", fgsed(&s, &dyadic(&eps)?, a.max_depth)?))
        }
    }
}

fn render_cmd(a: RenderArgs, cfg: &RunConfig, stdout: &mut dyn Write) -> CliResult<()> {
    let shown = parse_layers(&a.layers)?;
    let spec = RenderSpec::new(&shown, a.highlight.parse::<Highlight>()?, a.format.parse::<Format>()?)?;
    let (ts, mut c) = match &a.tiling {
        Some(p) => inputs::robinson_tiling(p)?,
        None => {
            let ts = build_tileset(&full_layers())?;
            let c = generate_tiling(&ts, a.size.0, a.size.1, a.phase)?;
            (ts, c)
        }
    };
    if a.inject > 0 {
        c = inject_defects(
            ts.base(),
            &c,
            a.inject,
            a.seed.unwrap_or(cfg.split_seed(Stream::Injection)),
        )?;
    }
    emit(stdout, &a.out.out, &render(&ts, &c, &spec)?)
}
