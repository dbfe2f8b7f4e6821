//! Command-line front end: problem and point files in, one JSON result
//! document out.

mod document;
mod files;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::stratum::Stratum;
use crate::toric::{refine, validate_grading, ToricSpace};

pub use document::*;
pub use files::*;

#[derive(Debug, Parser)]
#[command(name = "qstrata", version, about = "Stratified primitive spectra of quantum affine spaces and toric varieties")]
pub struct Cli {
    /// Worker threads for per-stratum parallelism.
    #[arg(long, global = true, env = "QSTRATA_THREADS")]
    pub threads: Option<usize>,
    /// Write the result document here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ProblemArg {
    #[arg(long)]
    pub problem: PathBuf,
}

#[derive(Debug, Args)]
pub struct StratumArgs {
    #[command(flatten)]
    pub problem: ProblemArg,
    /// 1-based vanishing indices, comma separated; empty for the dense stratum.
    #[arg(long, allow_hyphen_values = true)]
    pub stratum: String,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub problem: ProblemArg,
    #[arg(long)]
    pub point: PathBuf,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[command(flatten)]
    pub problem: ProblemArg,
    #[arg(long)]
    pub point: PathBuf,
    #[arg(long)]
    pub other: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the problem file.
    Validate(ProblemArg),
    /// Summaries of all strata.
    Strata(ProblemArg),
    /// Radical lattice of one stratum.
    Radical(StratumArgs),
    /// The square-root cocycle matrix.
    Cocycle(ProblemArg),
    /// Central monomials on one stratum.
    Center(StratumArgs),
    /// Ideal generators over a point.
    MapPoint(PointArgs),
    /// Ideal generators over a point of the quantum torus.
    TorusMapPoint(PointArgs),
    /// Whether two points lie in the same fibre.
    Fibre(PairArgs),
    /// Points in the fibre through a point.
    OrbitSample {
        #[command(flatten)]
        args: PointArgs,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Ideal generators over a point of the toric variety.
    ToricMapPoint(PointArgs),
    /// Toric fibre test, computed two ways.
    ToricFibre(PairArgs),
    /// Compare the problem's toric bicharacter with a finer one at a point.
    Refine {
        #[command(flatten)]
        args: PointArgs,
        /// File holding the finer bicharacter `{"c": [[...]]}`.
        #[arg(long)]
        c1: PathBuf,
    },
    /// Sanity checks on the grading data.
    CheckGrading(ProblemArg),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Strata(_) => "strata",
            Command::Radical(_) => "radical",
            Command::Cocycle(_) => "cocycle",
            Command::Center(_) => "center",
            Command::MapPoint(_) => "map-point",
            Command::TorusMapPoint(_) => "torus-map-point",
            Command::Fibre(_) => "fibre",
            Command::OrbitSample { .. } => "orbit-sample",
            Command::ToricMapPoint(_) => "toric-map-point",
            Command::ToricFibre(_) => "toric-fibre",
            Command::Refine { .. } => "refine",
            Command::CheckGrading(_) => "check-grading",
        }
    }
}

fn load(path: &Path) -> Result<(ProblemFile, Problem)> {
    let file: ProblemFile = read_json(path)?;
    let problem = file.build()?;
    Ok((file, problem))
}

fn load_point(problem: &Problem, path: &Path) -> Result<crate::affine::Point> {
    let file: PointFile = read_json(path)?;
    file.to_point(problem.space.cocycle().ext())
}

fn toric(problem: &Problem) -> Result<&ToricSpace> {
    problem
        .toric
        .as_ref()
        .ok_or_else(|| Error::Invalid("the problem has no toric block".into()))
}

fn stratum(problem: &Problem, text: &str) -> Result<Stratum> {
    parse_stratum(problem.space.n(), text)
}

/// Runs one command and returns its document.
pub fn execute(command: &Command) -> Result<ResultDocument> {
    let mut doc = ResultDocument::ok(command.name());
    match command {
        Command::Validate(a) => {
            load(&a.problem)?;
        }
        Command::Strata(a) => {
            let (_, p) = load(&a.problem)?;
            let all = p.space.enumerate_strata()?;
            doc.summaries = Some(all.iter().map(summary_doc).collect::<Result<_>>()?);
        }
        Command::Radical(a) | Command::Center(a) => {
            let (_, p) = load(&a.problem.problem)?;
            let w = stratum(&p, &a.stratum)?;
            doc.stratum = Some(w.one_based());
            doc.lattice = Some(lattice_rows(&p.space.radical(&w)?)?);
            if matches!(command, Command::Center(_)) {
                doc.summaries = Some(vec![summary_doc(&p.space.summary(&w)?)?]);
            }
            if let (Command::Radical(_), Some(t)) = (command, &p.toric) {
                doc.toric_radical = Some(toric_radical_doc(&t.stratum_radical(&w)?)?);
            }
        }
        Command::Cocycle(a) => {
            let (_, p) = load(&a.problem)?;
            let c = p.space.cocycle();
            let n = p.space.n();
            doc.cocycle = Some(
                (0..n)
                    .map(|i| (0..n).map(|j| named(c.ext(), &c.entry(i, j))).collect())
                    .collect::<Result<_>>()?,
            );
        }
        Command::MapPoint(a) | Command::TorusMapPoint(a) | Command::ToricMapPoint(a) => {
            let (_, p) = load(&a.problem.problem)?;
            let point = load_point(&p, &a.point)?;
            let ideal = match command {
                Command::MapPoint(_) => p.space.map_point(&point)?,
                Command::TorusMapPoint(_) => p.space.torus_map_point(&point)?,
                _ => toric(&p)?.map_point(&point)?,
            };
            doc.stratum = Some(ideal.stratum.one_based());
            doc.generators = Some(ideal_doc(&ideal, p.space.cocycle().ext())?);
        }
        Command::Fibre(a) | Command::ToricFibre(a) => {
            let (_, p) = load(&a.problem.problem)?;
            let lambda = load_point(&p, &a.point)?;
            let mu = load_point(&p, &a.other)?;
            let same = match command {
                Command::Fibre(_) => p.space.same_fibre(&lambda, &mu)?,
                _ => toric(&p)?.same_fibre(&lambda, &mu)?,
            };
            doc.stratum = Some(lambda.stratum().one_based());
            doc.same_fibre = Some(same);
        }
        Command::OrbitSample { args, count, seed } => {
            let (_, p) = load(&args.problem.problem)?;
            let point = load_point(&p, &args.point)?;
            let sample = p.space.orbit_sample(&point, *count, *seed)?;
            doc.stratum = Some(point.stratum().one_based());
            doc.orbit = Some(orbit_doc(&sample)?);
        }
        Command::Refine { args, c1 } => {
            let (file, p) = load(&args.problem.problem)?;
            let t = toric(&p)?;
            let point = load_point(&p, &args.point)?;
            let c1_file: BicharacterFile = read_json(c1)?;
            let c1 = file.bicharacter(t.bicharacter().group(), &c1_file.c)?;
            let r = refine(t.grading(), &c1, t.bicharacter(), &point)?;
            let ext = p.space.cocycle().ext();
            doc.stratum = Some(point.stratum().one_based());
            doc.refinement = Some(RefinementDoc {
                finer: ideal_doc(&r.finer, ext)?,
                coarser: ideal_doc(&r.coarser, ext)?,
            });
        }
        Command::CheckGrading(a) => {
            let (file, p) = load(&a.problem)?;
            let report = validate_grading(toric(&p)?.grading(), file.characteristic)?;
            doc.grading = Some(grading_doc(&report));
        }
    }
    Ok(doc)
}

/// Runs the command on a pool of the requested size. Returns the document
/// and the process exit code: 0 on success, 2 for rejected input and 1 for
/// a violated internal identity.
pub fn run(cli: &Cli) -> (ResultDocument, i32) {
    let job = || match execute(&cli.command) {
        Ok(doc) => (doc, 0),
        Err(e) => {
            let code = if e.is_internal() { 1 } else { 2 };
            (ResultDocument::error(cli.command.name(), &e), code)
        }
    };
    match cli.threads {
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(job),
            Err(e) => {
                let err = Error::Invalid(format!("cannot start {threads} threads: {e}"));
                (ResultDocument::error(cli.command.name(), &err), 2)
            }
        },
        None => job(),
    }
}
