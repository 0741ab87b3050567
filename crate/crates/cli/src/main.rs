//! Command-line front end: fans, covers, piecewise-linear sweeps, bundles
//! and reproduction of the worked examples.

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fanbranch::census::branch_census;
use fanbranch::io::{bundle_from_json, cover_from_json, pl_to_json, Bundle};
use fanbranch::klyachko::{branched_cover_of, chern, necessary_dimension_check, verify, DimensionCheck};
use fanbranch::linalg::Rational;
use fanbranch::monodromy::{canonical_class, MonodromyContext};
use fanbranch::pl::{group_triviality_of, solve, Mode, Verdict};
use fanbranch::reproduce::{reproduce, NAMES};
use fanbranch::sweep::{run_sweep, Sweep, SweepOptions, SweepSummary};
use fanbranch::{data, Fan};

const EXIT_INVALID: u8 = 1;
const EXIT_NONTRIVIAL: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "fanbranch", version, about = "Branched covers of fans and toric vector bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fan files
    #[command(subcommand)]
    Fan(FanCommand),
    /// Branched covers built from monodromy assignments
    #[command(subcommand)]
    Covers(CoversCommand),
    /// Piecewise-linear functions on covers
    #[command(subcommand)]
    Pl(PlCommand),
    /// Filtration data of toric vector bundles
    #[command(subcommand)]
    Bundle(BundleCommand),
    /// Worked examples with bundled expected values
    #[command(subcommand)]
    Paper(PaperCommand),
}

#[derive(Subcommand, Debug)]
enum FanCommand {
    /// Load and validate a fan, then print its rays, cones and walls
    Validate { fan: String },
}

#[derive(Subcommand, Debug)]
enum CoversCommand {
    /// Count the monodromy assignments of a given degree
    Enumerate {
        fan: String,
        #[arg(long)]
        degree: usize,
        /// Also count conjugacy classes
        #[arg(long)]
        classes: bool,
        /// Tabulate branch ray sets
        #[arg(long)]
        branch_report: bool,
    },
}

#[derive(Args, Debug, Clone)]
struct SweepArgs {
    /// Worker threads
    #[arg(long, env = "FANBRANCH_JOBS", default_value_t = 1)]
    jobs: usize,
    /// Line-delimited JSON cache of sweep records
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Continue from the records already in the cache
    #[arg(long, requires = "cache")]
    resume: bool,
    /// Stop after this many assignments
    #[arg(long)]
    limit: Option<u64>,
}

impl SweepArgs {
    fn options(&self) -> SweepOptions {
        SweepOptions { jobs: self.jobs, cache: self.cache.clone(), resume: self.resume, limit: self.limit }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModeArg {
    Rational,
    Integral,
}

#[derive(Subcommand, Debug)]
enum PlCommand {
    /// Solve and decide triviality for every assignment of a degree
    Sweep {
        fan: String,
        #[arg(long)]
        degree: usize,
        #[command(flatten)]
        sweep: SweepArgs,
        /// Exit with status 2 if any cover has a nontrivial function
        #[arg(long)]
        expect_trivial: bool,
    },
    /// Solve a single cover
    Solve {
        fan: String,
        /// Cover file with explicit cells or a monodromy assignment
        #[arg(long, conflicts_with = "branch_rays")]
        cover: Option<PathBuf>,
        /// Comma-separated branch rays of a degree-2 cover
        #[arg(long, num_args = 1, allow_hyphen_values = true)]
        branch_rays: Option<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::Rational)]
        mode: ModeArg,
        /// Exit with status 2 if the cover has a nontrivial function
        #[arg(long)]
        expect_trivial: bool,
    },
}

#[derive(Subcommand, Debug)]
enum BundleCommand {
    /// Check the splitting certificate against the filtrations
    Verify { bundle: String },
    /// Print the multisets of functionals on each maximal cone
    Chern { bundle: String },
    /// Build the associated branched cover and its function
    Cover { bundle: String },
}

#[derive(Subcommand, Debug)]
enum PaperCommand {
    /// Rerun an example and diff against its expected values
    Reproduce {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(NAMES))]
        name: String,
        #[command(flatten)]
        sweep: SweepArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Fan(FanCommand::Validate { fan }) => fan_validate(&fan),
        Command::Covers(CoversCommand::Enumerate { fan, degree, classes, branch_report }) => {
            covers_enumerate(&fan, degree, classes, branch_report)
        }
        Command::Pl(PlCommand::Sweep { fan, degree, sweep, expect_trivial }) => pl_sweep(&fan, degree, &sweep, expect_trivial),
        Command::Pl(PlCommand::Solve { fan, cover, branch_rays, mode, expect_trivial }) => {
            pl_solve(&fan, cover.as_deref(), branch_rays.as_deref(), mode, expect_trivial)
        }
        Command::Bundle(cmd) => bundle(cmd),
        Command::Paper(PaperCommand::Reproduce { name, sweep }) => reproduce_example(&name, &sweep),
    }
}

/// A fan from a file, or a bundled fan by name (with or without `.fan.json`).
fn load_fan(arg: &str) -> Result<Arc<Fan>> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        return Ok(Arc::new(Fan::from_json(&text).with_context(|| format!("loading {arg}"))?));
    }
    let name = arg.trim_end_matches(".json").trim_end_matches(".fan");
    match data::fan_text(name) {
        Some(_) => Ok(Arc::new(data::fan(name)?)),
        None => bail!("{arg}: no such file or bundled fan (bundled: {})", data::FAN_NAMES.join(", ")),
    }
}

fn load_bundle(arg: &str) -> Result<Bundle> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        return bundle_from_json(&text, path.parent()).with_context(|| format!("loading {arg}"));
    }
    let name = arg.trim_end_matches(".json").trim_end_matches(".bundle");
    match data::bundle_text(name) {
        Some(_) => Ok(data::bundle(name)?),
        None => bail!("{arg}: no such file or bundled bundle (bundled: {})", data::BUNDLE_NAMES.join(", ")),
    }
}

fn vector(v: &[Rational]) -> String {
    format!("({})", v.iter().map(Rational::to_string).collect::<Vec<_>>().join(", "))
}

fn fan_validate(arg: &str) -> Result<u8> {
    let fan = match load_fan(arg) {
        Ok(f) => f,
        Err(e) => {
            println!("invalid: {e:#}");
            return Ok(EXIT_INVALID);
        }
    };
    let completeness = match fan.is_complete() {
        Ok(true) => "complete".to_string(),
        Ok(false) => "valid, not complete".to_string(),
        Err(e) => format!("valid, completeness unknown ({e})"),
    };
    println!(
        "{completeness}, {} rays, {} maximal cones, {} walls",
        fan.num_rays(),
        fan.num_max_cones(),
        fan.walls().len()
    );
    for (i, r) in fan.rays().iter().enumerate() {
        println!("ray {i}: {r:?}");
    }
    for (k, rays) in fan.max_cone_rays().iter().enumerate() {
        println!("cone {k}: rays {rays:?}");
    }
    for (w, &face) in fan.walls().iter().enumerate() {
        println!("wall {w}: rays {:?} between cones {:?}", fan.face(face).rays, fan.wall_cones(w));
    }
    Ok(0)
}

fn covers_enumerate(arg: &str, degree: usize, classes: bool, branch_report: bool) -> Result<u8> {
    let fan = load_fan(arg)?;
    let ctx = MonodromyContext::new(fan.clone())?;
    if degree == 0 {
        bail!("degree must be positive");
    }
    println!("{} generators, {} assignments of degree {degree}", ctx.num_generators(), ctx.count(degree));
    if classes {
        let mut seen = HashSet::new();
        let mut transitive = 0u64;
        for a in ctx.assignments(degree) {
            if a.is_transitive() {
                transitive += 1;
            }
            seen.insert(canonical_class(&a));
        }
        println!("{} conjugacy classes, {transitive} transitive assignments", seen.len());
    }
    if branch_report {
        let census = branch_census(&ctx, degree);
        let mut counts: BTreeMap<&Vec<usize>, u64> = BTreeMap::new();
        for b in &census.branch_sets {
            *counts.entry(b).or_default() += 1;
        }
        println!("{} distinct branch sets; {} assignments unbranched", counts.len(), census.unbranched);
        for (set, n) in &counts {
            println!("  {set:?}: {n}");
        }
        println!("{} assignments with nonempty branch set and no two adjacent branch rays", census.admissible.len());
        for o in &census.orbits {
            println!(
                "  orbit of {:?}: {} branch sets, pairwise ray distances {:?}",
                o.representative,
                o.members.len(),
                o.distances
            );
        }
    }
    Ok(0)
}

fn progress_printer(label: &str) -> impl FnMut(u64, u64) + '_ {
    let start = Instant::now();
    let mut last = 0.0f64;
    move |done, total| {
        let t = start.elapsed().as_secs_f64();
        if t - last >= 5.0 || done == total {
            last = t;
            eprintln!("{label}: {done}/{total} ({t:.0}s)");
        }
    }
}

fn print_summary(s: &SweepSummary) {
    println!("{} of {} assignments processed", s.processed, s.total);
    for (tag, n) in &s.by_verdict {
        println!("  {tag}: {n}");
    }
    println!("largest dimension: {}", s.max_dim);
    println!("{} nontrivial", s.nontrivial.len());
    for r in &s.nontrivial {
        println!("  assignment {} branched over {:?}, dimension {}", r.index, r.branch_rays, r.dim_pl);
    }
}

fn pl_sweep(arg: &str, degree: usize, args: &SweepArgs, expect_trivial: bool) -> Result<u8> {
    let fan = load_fan(arg)?;
    let sweep = Sweep::new(fan, degree)?;
    let summary = run_sweep(&sweep, &args.options(), progress_printer("sweep"))?;
    print_summary(&summary);
    Ok(if expect_trivial && !summary.nontrivial.is_empty() { EXIT_NONTRIVIAL } else { 0 })
}

fn pl_solve(arg: &str, cover: Option<&Path>, branch_rays: Option<&str>, mode: ModeArg, expect_trivial: bool) -> Result<u8> {
    let fan = load_fan(arg)?;
    let cover = match (cover, branch_rays) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let c = cover_from_json(&text, path.parent())?;
            if c.fan().as_ref() != fan.as_ref() {
                bail!("the cover is not over {arg}");
            }
            c
        }
        (None, Some(list)) => {
            let rays = list
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().with_context(|| format!("bad ray index {s:?}")))
                .collect::<Result<Vec<_>>>()?;
            let ctx = MonodromyContext::new(fan.clone())?;
            ctx.build_cover(&ctx.assignment_for_branch_rays(&rays)?)?
        }
        (None, None) => bail!("give --cover or --branch-rays"),
    };
    if let Err(v) = cover.validate() {
        println!("invalid cover: {v}");
        return Ok(EXIT_INVALID);
    }
    let cover = Arc::new(cover);
    let mode = match mode {
        ModeArg::Rational => Mode::Rational,
        ModeArg::Integral => Mode::Integral,
    };
    let basis = solve(cover.clone(), mode)?;
    println!("cover: degree {}, {} cells, {} maximal cells", cover.degree(), cover.len(), cover.maximal_cells().len());
    println!("dimension: {}", basis.dim());
    for (i, f) in basis.complement().iter().enumerate() {
        let slopes: Vec<String> = f.slopes().iter().map(|u| vector(u)).collect();
        println!("basis {}: {}", i + basis.pullbacks().len(), slopes.join(" "));
    }
    let verdict = group_triviality_of(&basis);
    match &verdict {
        Verdict::AllTrivial(c) => println!("verdict: all trivial ({})", c.tag()),
        Verdict::Nontrivial(f) => {
            println!("verdict: nontrivial");
            println!("witness: {}", pl_to_json(f));
        }
    }
    Ok(if expect_trivial && !verdict.is_trivial() { EXIT_NONTRIVIAL } else { 0 })
}

fn bundle(cmd: BundleCommand) -> Result<u8> {
    let (arg, action) = match &cmd {
        BundleCommand::Verify { bundle } => (bundle, "verify"),
        BundleCommand::Chern { bundle } => (bundle, "chern"),
        BundleCommand::Cover { bundle } => (bundle, "cover"),
    };
    let b = load_bundle(arg)?;
    println!("rank {} over a fan with {} rays", b.data.rank(), b.data.fan().num_rays());
    let Some(cert) = &b.certificate else {
        match necessary_dimension_check(&b.data) {
            DimensionCheck::Ok { multisets } => {
                println!("no certificate; the dimension screen passes with multisets:");
                for (k, m) in multisets.iter().enumerate() {
                    println!("  cone {k}: {}", m.entries.iter().map(|(u, n)| format!("{}^{n}", vector(u))).collect::<Vec<_>>().join(" "));
                }
            }
            DimensionCheck::Violation { cone, message } => println!("no certificate; dimension screen fails on cone {cone}: {message}"),
        }
        return Ok(EXIT_INVALID);
    };
    if let Err(v) = verify(&b.data, cert) {
        println!("verification failed: {v}");
        return Ok(EXIT_INVALID);
    }
    match action {
        "verify" => println!("verify ok"),
        "chern" => {
            let ch = chern(&b.data, cert)?;
            for (k, m) in ch.multisets.iter().enumerate() {
                println!("cone {k}: {}", m.entries.iter().map(|(u, n)| format!("{}^{n}", vector(u))).collect::<Vec<_>>().join(" "));
            }
            println!("chern: {}", if ch.is_trivial() { "trivial" } else { "nontrivial" });
        }
        _ => {
            let (cover, psi) = branched_cover_of(&b.data, cert)?;
            let rays: Vec<usize> = cover.ramification_cells().iter().filter_map(|&c| cover.ray_of(c)).collect();
            println!("cover: degree {}, {} cells, {} maximal cells", cover.degree(), cover.len(), cover.maximal_cells().len());
            println!("ramified over rays {rays:?}");
            for (i, &c) in psi.cells().iter().enumerate() {
                let cell = cover.cell(c);
                let k = cover.fan().max_index(cell.base).unwrap();
                println!("cone {k} copy {} weight {}: {}", cell.copy, cell.weight, vector(&psi.slopes()[i]));
            }
            println!("function: {}", pl_to_json(&psi));
        }
    }
    Ok(0)
}

fn reproduce_example(name: &str, args: &SweepArgs) -> Result<u8> {
    let r = reproduce(name, &args.options(), progress_printer(name))?;
    for line in &r.report {
        println!("{line}");
    }
    for c in &r.checks {
        let mark = if c.passed() { "ok" } else { "MISMATCH" };
        println!("{mark:>8} {}: expected {}, found {}", c.key, c.expected, c.actual);
    }
    let failed = r.checks.iter().filter(|c| !c.passed()).count();
    println!("{name}: {} of {} checks match", r.checks.len() - failed, r.checks.len());
    Ok(if failed == 0 { 0 } else { EXIT_INVALID })
}
