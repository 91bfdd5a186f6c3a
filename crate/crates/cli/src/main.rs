use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qtree::characteristic::JostData;
use qtree::io::{read_potential_csv, read_samples_csv, write_samples_csv};
use qtree::numeric::{find_jost_zeros, find_jost_zeros_with_potential, PotentialJost, Rect};
use qtree::poly::rational::parse_rational;
use qtree::reconstruct::{invert, invert_pair, ReconstructionResult, DEFAULT_P_MAX};
use qtree::sfit::{pipeline_invert, synthesize, Grid};
use qtree::tree::{enumerate_rooted_trees, RootedTree};
use qtree::{Error, RatFunc, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const EXIT_USAGE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_NOT_SHAPE: u8 = 4;
const EXIT_NO_TREE: u8 = 5;
const EXIT_FIT: u8 = 6;
const EXIT_NUMERIC: u8 = 7;

#[derive(Parser)]
#[command(name = "qtree", version, about = "Shape recovery for equilateral quantum trees")]
struct Cli {
    /// Worker threads for enumeration and zero scans (results do not depend on it).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a tree and print it as JSON.
    Gen(GenArgs),
    /// psi and psi_hat of a tree with edge length l.
    Forward {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        l: String,
        #[command(flatten)]
        out: Output,
    },
    /// Sample S on a sqrt(lambda) grid, as CSV.
    Sfunc {
        #[command(flatten)]
        source: JostSource,
        /// start:stop:count
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Fit S samples and recover the tree shapes.
    Fit {
        #[arg(long)]
        samples: PathBuf,
        #[arg(long, default_value_t = DEFAULT_P_MAX)]
        p_max: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Trees with a given shape fraction ({"num": .., "den": ..} or JostData JSON).
    Invert {
        #[arg(long)]
        fraction: PathBuf,
        #[arg(long, default_value_t = DEFAULT_P_MAX)]
        p_max: usize,
        #[command(flatten)]
        out: Output,
    },
    /// tree -> fraction -> invert for every tree up to p_max.
    Roundtrip {
        #[arg(long, default_value_t = 9)]
        p_max: usize,
        #[command(flatten)]
        out: Output,
    },
    /// All rooted trees with p vertices.
    Enumerate {
        #[arg(long)]
        p: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Zeros of the Jost function in a rectangle of the sqrt(lambda) plane.
    Zeros {
        #[command(flatten)]
        source: JostSource,
        /// re_min:re_max:im_min:im_max; defaults to [-10/l, 10/l] x [-2/l, 2/l].
        #[arg(long)]
        rect: Option<String>,
        /// Potential CSV (columns x,q); the default is q = 0.
        #[arg(long)]
        potential: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Snowflake,
    Path,
    Star,
    Random,
}

#[derive(Args)]
struct GenArgs {
    kind: Kind,
    /// snowflake: root degree and comma-separated child degrees (3 3,3,4);
    /// path: vertex count; star: leaf count.
    params: Vec<String>,
    /// Vertex count for random trees.
    #[arg(long)]
    p: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct JostSource {
    /// JostData JSON.
    #[arg(long, conflicts_with = "tree")]
    jost: Option<PathBuf>,
    /// Tree JSON, used with --l.
    #[arg(long)]
    tree: Option<PathBuf>,
    #[arg(long, requires = "tree")]
    l: Option<String>,
}

#[derive(Args)]
struct Output {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a Graphviz rendering of the (first) tree.
    #[arg(long)]
    dot: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

type Res<T = ()> = std::result::Result<T, Failure>;

fn exit_code(e: &Error) -> u8 {
    match e.root() {
        Error::NotShapeFraction(_) => EXIT_NOT_SHAPE,
        Error::NoTree { .. } => EXIT_NO_TREE,
        Error::FitFailed(_) | Error::PeriodNotDetected => EXIT_FIT,
        Error::SPole { .. } | Error::NonFinite { .. } => EXIT_NUMERIC,
        _ => EXIT_INPUT,
    }
}

fn open(path: &Path) -> Res<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::Lib(Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Res<T> {
    let mut s = String::new();
    open(path)?.read_to_string(&mut s)?;
    Ok(serde_json::from_str(&s).map_err(Error::from)?)
}

fn sink(out: &Output) -> Res<Box<dyn Write>> {
    Ok(match &out.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit<T: Serialize>(out: &Output, value: &T) -> Res {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn write_dot(out: &Output, tree: Option<&RootedTree>) -> Res {
    if let (Some(path), Some(t)) = (&out.dot, tree) {
        std::fs::write(path, t.to_dot())?;
    }
    Ok(())
}

fn parse_length(s: &str) -> Res<Rational> {
    let l = parse_rational(s)?;
    if l <= Rational::from_integer(0.into()) {
        return Err(Failure::Usage(format!("--l must be positive, got {s}")));
    }
    Ok(l)
}

fn load_jost(src: &JostSource) -> Res<JostData> {
    match (&src.jost, &src.tree, &src.l) {
        (Some(j), _, _) => read_json(j),
        (None, Some(t), Some(l)) => {
            let tree: RootedTree = read_json(t)?;
            Ok(JostData::from_tree(&tree, parse_length(l)?)?)
        }
        (None, Some(_), None) => Err(Failure::Usage("--tree needs --l".into())),
        (None, None, _) => Err(Failure::Usage("give --jost or --tree with --l".into())),
    }
}

fn gen(a: &GenArgs) -> Res {
    let usage = |m: &str| Failure::Usage(m.to_string());
    let count = |i: usize, what: &str| -> Res<usize> {
        a.params
            .get(i)
            .ok_or_else(|| usage(&format!("missing {what}")))?
            .parse()
            .map_err(|_| usage(&format!("{what} must be a non-negative integer")))
    };
    let tree = match a.kind {
        Kind::Snowflake => {
            let root = count(0, "root degree")?;
            let kids: Vec<usize> = a
                .params
                .get(1)
                .ok_or_else(|| usage("missing child degrees"))?
                .split(',')
                .map(|x| x.trim().parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| usage("child degrees must be comma-separated integers"))?;
            RootedTree::snowflake(root, &kids)?
        }
        Kind::Path => RootedTree::path(count(0, "vertex count")?)?,
        Kind::Star => RootedTree::star(count(0, "leaf count")?),
        Kind::Random => {
            let p = a.p.ok_or_else(|| usage("random trees need --p"))?;
            RootedTree::random(p, &mut ChaCha8Rng::seed_from_u64(a.seed))?
        }
    };
    write_dot(&a.out, Some(&tree))?;
    emit(&a.out, &tree)
}

/// Inverts either a bare `{num, den}` fraction or Jost data; the latter
/// carries the unreduced pair, which can rule out extra shapes.
fn invert_input(path: &Path, p_max: usize) -> Res<ReconstructionResult> {
    let value: serde_json::Value = read_json(path)?;
    if value.get("psi").is_some() {
        let d: JostData = serde_json::from_value(value).map_err(Error::from)?;
        Ok(invert_pair(d.psi(), d.psi_hat(), p_max)?)
    } else {
        let f: RatFunc = serde_json::from_value(value).map_err(Error::from)?;
        Ok(invert(&f, p_max))
    }
}

#[derive(Serialize)]
struct RoundtripFailure {
    code: String,
    found: Vec<String>,
}

#[derive(Serialize)]
struct RoundtripSummary {
    p_max: usize,
    trees: usize,
    recovered: usize,
    non_singleton: usize,
    all_pass: bool,
    failures: Vec<RoundtripFailure>,
}

fn roundtrip(p_max: usize) -> Res<RoundtripSummary> {
    use rayon::prelude::*;
    let trees: Vec<RootedTree> = (2..=p_max).flat_map(enumerate_rooted_trees).collect();
    let rows = trees
        .par_iter()
        .map(|t| {
            let f = qtree::characteristic::shape_fraction(t)?;
            let r = invert(&f, p_max);
            let codes: Vec<String> = r.codes().into_iter().map(String::from).collect();
            Ok((t.canonical_code(), codes))
        })
        .collect::<qtree::Result<Vec<_>>>()?;
    let failures: Vec<RoundtripFailure> = rows
        .iter()
        .filter(|(c, found)| !found.contains(c))
        .map(|(c, found)| RoundtripFailure {
            code: c.clone(),
            found: found.clone(),
        })
        .collect();
    Ok(RoundtripSummary {
        p_max,
        trees: rows.len(),
        recovered: rows.len() - failures.len(),
        non_singleton: rows.iter().filter(|(_, f)| f.len() > 1).count(),
        all_pass: failures.is_empty(),
        failures,
    })
}

#[derive(Serialize)]
struct Listed {
    code: String,
    #[serde(flatten)]
    tree: RootedTree,
}

fn run(cmd: &Cmd) -> Res {
    match cmd {
        Cmd::Gen(a) => gen(a),
        Cmd::Forward { tree, l, out } => {
            let t: RootedTree = read_json(tree)?;
            let d = JostData::from_tree(&t, parse_length(l)?)?;
            write_dot(out, Some(&t))?;
            emit(out, &d)
        }
        Cmd::Sfunc {
            source,
            grid,
            noise,
            seed,
            out,
        } => {
            if !(*noise >= 0.0) {
                return Err(Failure::Usage("--noise must be non-negative".into()));
            }
            let grid = Grid::parse(grid)?;
            let d = load_jost(source)?;
            let set = synthesize(&d, &grid, *noise, &mut ChaCha8Rng::seed_from_u64(*seed))?;
            let mut w = sink(out)?;
            write_samples_csv(&mut w, &set)?;
            w.flush()?;
            Ok(())
        }
        Cmd::Fit { samples, p_max, out } => {
            let set = read_samples_csv(open(samples)?)?;
            let rep = pipeline_invert(&set, *p_max)?;
            write_dot(out, rep.shapes.first().map(|m| &m.tree))?;
            emit(out, &rep)
        }
        Cmd::Invert { fraction, p_max, out } => {
            let r = invert_input(fraction, *p_max)?;
            write_dot(out, r.matches.first().map(|m| &m.tree))?;
            emit(out, &r)?;
            r.into_result()?;
            Ok(())
        }
        Cmd::Roundtrip { p_max, out } => {
            let s = roundtrip(*p_max)?;
            emit(out, &s)?;
            if s.all_pass {
                Ok(())
            } else {
                Err(Error::NoTree { p_max: *p_max }.into())
            }
        }
        Cmd::Enumerate { p, out } => {
            if *p == 0 {
                return Err(Failure::Usage("--p must be at least 1".into()));
            }
            let list: Vec<Listed> = enumerate_rooted_trees(*p)
                .map(|t| Listed {
                    code: t.canonical_code(),
                    tree: t,
                })
                .collect();
            emit(out, &list)
        }
        Cmd::Zeros {
            source,
            rect,
            potential,
            out,
        } => {
            let d = load_jost(source)?;
            let rect = match rect {
                Some(r) => Rect::parse(r)?,
                None => Rect::for_length(d.l_f64()),
            };
            let rep = match potential {
                None => find_jost_zeros(&d, rect)?,
                Some(path) => {
                    let q = read_potential_csv(open(path)?)?;
                    let pj = PotentialJost::from_jost(&d, q)?;
                    find_jost_zeros_with_potential(&pj, rect)?
                }
            };
            emit(out, &rep)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(&cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
