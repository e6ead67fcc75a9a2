use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use ringladder::prelude::*;
use ringladder::sweep::{crossing_bonds, find_extrema, find_zero_crossing, write_csv, ExtremumKind};

/// Exact diagonalization of the two-leg spin ladder with ring exchange.
#[derive(Debug, Parser)]
#[command(name = "ringladder", version, args_override_self = true)]
struct Cli {
    /// Flat `key = value` file with defaults for the subcommand flags.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ground state observables at a single angle.
    Gs(GsArgs),
    /// Observables over a grid of angles, one CSV row per angle.
    Sweep(SweepArgs),
    /// Closed-form block entropies of the ferromagnetic Dicke state.
    FmOracle(FmArgs),
    /// Site sets and boundary bonds of block geometries.
    Blocks(BlocksArgs),
}

#[derive(Debug, Args)]
struct LadderArgs {
    /// Number of rungs L (N = 2L spins).
    #[arg(long, value_name = "L")]
    rungs: usize,

    #[arg(long, default_value = "periodic", value_name = "periodic|open")]
    bc: Boundary,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Blocks whose entropy is recorded, e.g. `A:4,B:4,D:3`.
    #[arg(long, value_name = "LIST")]
    blocks: Option<String>,

    /// Pairs whose concurrence is recorded.
    #[arg(long, default_value = "rung,leg,diag", value_name = "LIST")]
    pairs: PairSelection,

    /// Twice the total Sz of the sector.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true, value_name = "twoSz")]
    sector: i32,

    #[arg(long, default_value_t = SolverConfig::default().seed)]
    seed: u64,

    /// Residual tolerance of the eigensolver.
    #[arg(long, default_value_t = SolverConfig::default().tol)]
    tol: f64,

    /// CSV destination; standard output when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GsArgs {
    #[command(flatten)]
    ladder: LadderArgs,
    #[command(flatten)]
    solve: SolveArgs,

    /// Angle in units of π.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta: f64,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    ladder: LadderArgs,
    #[command(flatten)]
    solve: SolveArgs,

    /// First angle in units of π.
    #[arg(long, default_value_t = -0.40, allow_negative_numbers = true)]
    theta_min: f64,

    /// Last angle in units of π.
    #[arg(long, default_value_t = 0.95, allow_negative_numbers = true)]
    theta_max: f64,

    /// Grid spacing in units of π.
    #[arg(long, default_value_t = 0.005)]
    theta_step: f64,

    /// Worker threads; all cores when absent.
    #[arg(long, value_name = "W")]
    workers: Option<usize>,

    /// Accept angles outside the non-degenerate window.
    #[arg(long)]
    allow_degenerate: bool,
}

#[derive(Debug, Args)]
struct FmArgs {
    #[arg(long, value_name = "L")]
    rungs: usize,

    /// CSV destination; standard output when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BlocksArgs {
    #[command(flatten)]
    ladder: LadderArgs,

    /// Blocks to show; every valid block when absent.
    #[arg(long, value_name = "LIST")]
    blocks: Option<String>,
}

/// Turn a `key = value` file into flag arguments for `subcommand`. Keys
/// that belong only to other subcommands are skipped.
fn config_args(path: &Path, subcommand: &str) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let root = Cli::command();
    let takes_value = |cmd: &clap::Command, key: &str| {
        cmd.get_arguments()
            .find(|a| a.get_long() == Some(key))
            .map(|a| a.get_action().takes_values())
    };
    let target = root.find_subcommand(subcommand).context("unknown subcommand")?;

    let mut args = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("{}:{}: expected `key = value`", path.display(), n + 1);
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        match takes_value(target, &key) {
            Some(true) => args.extend([format!("--{key}"), value.to_string()]),
            Some(false) => match value {
                "true" => args.push(format!("--{key}")),
                "false" => {}
                _ => bail!("{}:{}: `{key}` expects true or false", path.display(), n + 1),
            },
            None if root.get_subcommands().any(|c| takes_value(c, &key).is_some()) => {}
            None => bail!("{}:{}: unknown key `{key}`", path.display(), n + 1),
        }
    }
    Ok(args)
}

/// Value of `--config` on a raw command line.
fn config_path(argv: &[String]) -> Option<PathBuf> {
    argv.iter().enumerate().find_map(|(i, a)| match a.strip_prefix("--config") {
        Some("") => argv.get(i + 1).map(PathBuf::from),
        Some(rest) => rest.strip_prefix('=').map(PathBuf::from),
        None => None,
    })
}

/// Parse the command line, splicing config-file flags in front of the
/// explicit ones so that the latter win.
fn parse(argv: Vec<String>) -> Result<Cli> {
    let Some(path) = config_path(&argv) else {
        return Ok(Cli::try_parse_from(&argv)?);
    };
    let root = Cli::command();
    let Some((at, name)) = argv
        .iter()
        .enumerate()
        .skip(1)
        .find_map(|(i, a)| root.find_subcommand(a).map(|c| (i, c.get_name().to_string())))
    else {
        return Ok(Cli::try_parse_from(&argv)?);
    };
    let mut merged = argv[..=at].to_vec();
    merged.extend(config_args(&path, &name)?);
    merged.extend_from_slice(&argv[at + 1..]);
    let matches = root.try_get_matches_from(merged)?;
    Ok(Cli::from_arg_matches(&matches)?)
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn sweep_config(ladder: &LadderArgs, solve: &SolveArgs) -> Result<SweepConfig> {
    let mut cfg = SweepConfig::new(LadderSpec::new(ladder.rungs, ladder.bc)?);
    cfg.blocks = match &solve.blocks {
        Some(list) => BlockSpec::parse_list(list)?,
        None => Vec::new(),
    };
    cfg.pairs = solve.pairs;
    cfg.two_sz = solve.sector;
    cfg.solver.seed = solve.seed;
    cfg.solver.tol = solve.tol;
    Ok(cfg)
}

fn run_gs(args: &GsArgs) -> Result<()> {
    let cfg = sweep_config(&args.ladder, &args.solve)?;
    let point = solve_point(&cfg, args.theta)?;
    eprintln!(
        "E0 = {:.12}  E1 = {:.12}  residual = {:.1e}  matvecs = {}",
        point.eigen.energies[0],
        point.eigen.energies.get(1).copied().unwrap_or(f64::NAN),
        point.eigen.residuals[0],
        point.eigen.matvecs
    );
    write_csv(output(&args.solve.out)?, &cfg.blocks, std::slice::from_ref(&point.record))?;
    Ok(())
}

fn report_features(cfg: &SweepConfig, records: &[SweepRecord]) {
    let series = |f: &dyn Fn(&SweepRecord) -> Option<f64>| -> Vec<(f64, f64)> {
        records.iter().filter_map(|r| f(r).map(|v| (r.theta_over_pi, v))).collect()
    };
    let show_extrema = |name: &str, s: &[(f64, f64)]| {
        let found: Vec<String> = find_extrema(s)
            .iter()
            .map(|e| {
                let kind = if e.kind == ExtremumKind::Maximum { "max" } else { "min" };
                format!("{kind} {:.4}", e.theta)
            })
            .collect();
        if !found.is_empty() {
            eprintln!("{name}: {}", found.join(", "));
        }
    };
    let crossings = find_zero_crossing(&series(&|r| r.der_dtheta));
    if !crossings.is_empty() {
        let shown: Vec<String> = crossings.iter().map(|x| format!("{x:.6}")).collect();
        eprintln!("dEr_dtheta zero crossings (theta/pi): {}", shown.join(", "));
    }
    show_extrema("T_expect", &series(&|r| Some(r.t_expect)));
    show_extrema("C_rung", &series(&|r| r.c_rung));
    show_extrema("C_leg", &series(&|r| r.c_leg));
    show_extrema("C_diag", &series(&|r| r.c_diag));
    for (i, b) in cfg.blocks.iter().enumerate() {
        show_extrema(&format!("Ev_{}{}", b.family.letter(), b.size), &series(&|r| Some(r.block_entropies[i])));
    }
}

fn run_sweep_cmd(args: &SweepArgs) -> Result<()> {
    let mut cfg = sweep_config(&args.ladder, &args.solve)?;
    cfg.theta_min = args.theta_min;
    cfg.theta_max = args.theta_max;
    cfg.theta_step = args.theta_step;
    cfg.workers = args.workers;
    cfg.allow_degenerate = args.allow_degenerate;
    let records = run_sweep(&cfg)?;
    write_csv(output(&args.solve.out)?, &cfg.blocks, &records)?;
    report_features(&cfg, &records);
    Ok(())
}

fn run_fm(args: &FmArgs) -> Result<()> {
    let sites = 2 * args.rungs;
    let mut out = output(&args.out)?;
    writeln!(out, "l,Ev,Ev_asymptotic,C_pair")?;
    let pair = fm_pair_concurrence(sites)?;
    for l in 1..sites {
        writeln!(
            out,
            "{l},{:.11e},{:.11e},{pair:.11e}",
            fm_entropy(sites, l)?,
            fm_entropy_asymptotic(sites, l)?
        )?;
    }
    out.flush()?;
    Ok(())
}

fn run_blocks(args: &BlocksArgs) -> Result<()> {
    let spec = LadderSpec::new(args.ladder.rungs, args.ladder.bc)?;
    let blocks = match &args.blocks {
        Some(list) => BlockSpec::parse_list(list)?,
        None => BlockFamily::all()
            .into_iter()
            .flat_map(|f| (1..=spec.sites()).map(move |l| BlockSpec::new(f, l)))
            .filter(|b| b.sites(&spec).is_ok())
            .collect(),
    };
    let mut out = io::stdout().lock();
    for b in blocks {
        let sites = b.sites(&spec)?;
        let bonds = crossing_bonds(&sites, &spec);
        let shown: Vec<String> = sites
            .iter()
            .map(|&s| {
                let (leg, rung) = spec.leg_rung(s);
                format!("({leg},{rung})")
            })
            .collect();
        writeln!(out, "{b}  crossing rung={} leg={}  sites {}", bonds.rung, bonds.leg, shown.join(" "))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Gs(a) => run_gs(a),
        Command::Sweep(a) => run_sweep_cmd(a),
        Command::FmOracle(a) => run_fm(a),
        Command::Blocks(a) => run_blocks(a),
    }
}

fn main() -> ExitCode {
    let cli = match parse(std::env::args().collect()) {
        Ok(cli) => cli,
        Err(e) => match e.downcast::<clap::Error>() {
            Ok(clap_err) => clap_err.exit(),
            Err(e) => {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
        },
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
