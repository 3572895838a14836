//! Command-line front end. Exit codes: 0 popular (or fractional popular),
//! 1 not, 2 usage, input or internal error, 3 disagreement with an oracle.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bench;
use crate::error::{Error, Result};
use crate::fractional::{is_fractional_popular, FractionalCertificate, FractionalStructure, FractionalVerdict};
use crate::gen::{generate, Model};
use crate::io::{parse_instance, parse_matching, write_instance, CertificateDocument};
use crate::model::{Matching, RoommatesInstance};
use crate::oracle::{brute_fractional_popular, brute_popular};
use crate::popularity::{is_popular, PopularityVerdict};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_DISAGREE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "popmatch", version, about = "Popularity tests for roommates matchings, with certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide popularity; print a dual witness or a more popular matching.
    Check(Inputs),
    /// Like `check`, with the dual witness spelled out.
    Witness(Inputs),
    /// Decide fractional popularity.
    Fractional(Inputs),
    /// Cross-check the fast verdicts against exhaustive enumeration.
    Oracle(Inputs),
    /// Generate a random instance.
    Gen(GenArgs),
    /// Measure check time per edge across instance sizes.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct Inputs {
    /// Instance file.
    #[arg(short, long)]
    instance: PathBuf,
    /// Matching file.
    #[arg(short, long)]
    matching: PathBuf,
    /// Print the certificate document as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("model").required(true).args(["complete", "gnp"]))]
struct GenArgs {
    /// Number of nodes.
    #[arg(short)]
    n: usize,
    /// Complete graph.
    #[arg(long)]
    complete: bool,
    /// G(n, p) with this edge probability.
    #[arg(long, value_name = "P")]
    gnp: Option<f64>,
    #[arg(long)]
    seed: u64,
    /// Output file (standard output when absent).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Target edge counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "10000,100000,1000000")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    reps: usize,
}

/// Runs the CLI with the given arguments (program name first) and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_YES };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load(inputs: &Inputs) -> Result<(RoommatesInstance, Matching)> {
    let inst = parse_instance(&read(&inputs.instance)?)?;
    let m = parse_matching(&read(&inputs.matching)?, &inst)?;
    Ok((inst, m))
}

fn names(inst: &RoommatesInstance, nodes: &[usize]) -> String {
    nodes.iter().map(|&v| inst.name(v)).collect::<Vec<_>>().join("-")
}

fn pairs(inst: &RoommatesInstance, m: &Matching) -> String {
    let p: Vec<String> = m.pairs().iter().map(|&(a, b)| format!("{}{}", inst.name(a), inst.name(b))).collect();
    format!("{{{}}}", p.join(", "))
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Check(inputs) => popularity(&inputs, out, false),
        Command::Witness(inputs) => popularity(&inputs, out, true),
        Command::Fractional(inputs) => fractional(&inputs, out),
        Command::Oracle(inputs) => oracle(&inputs, out),
        Command::Gen(args) => {
            let model = match args.gnp {
                Some(p) if !args.complete => Model::Gnp(p),
                _ => Model::Complete,
            };
            let text = write_instance(&generate(args.n, model, args.seed)?);
            match &args.output {
                Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(EXIT_YES)
        }
        Command::Bench(args) => {
            let rows = bench::measure(&args.sizes, args.seed, args.reps)?;
            out.write_all(bench::format_table(&rows).as_bytes())?;
            Ok(EXIT_YES)
        }
    }
}

fn popularity(inputs: &Inputs, out: &mut dyn Write, show_witness: bool) -> Result<i32> {
    let (inst, m) = load(inputs)?;
    let verdict = is_popular(&inst, &m)?;
    let doc = CertificateDocument::from_popularity(&verdict);
    doc.verify(&inst, &m)?;
    if inputs.json {
        writeln!(out, "{}", doc.to_json())?;
    } else {
        match &verdict {
            PopularityVerdict::Popular { witness } => {
                writeln!(out, "popular")?;
                if show_witness {
                    let alpha: Vec<String> =
                        witness.alpha.iter().enumerate().map(|(v, a)| format!("{}:{a}", inst.name(v))).collect();
                    writeln!(out, "alpha: {}", alpha.join(" "))?;
                    for z in &witness.two_sets {
                        writeln!(out, "odd set with value 2: {{{}}}", names(&inst, z).replace('-', ","))?;
                    }
                    writeln!(out, "objective: {}", witness.objective())?;
                } else {
                    writeln!(out, "dual witness with {} odd set(s), objective 0", witness.two_sets.len())?;
                }
            }
            PopularityVerdict::Unpopular {
                structure,
                better,
                margin,
            } => {
                writeln!(out, "not popular")?;
                writeln!(out, "blocking structure ({}): {}", structure.kind.as_str(), names(&inst, &structure.nodes))?;
                writeln!(out, "more popular matching: {} (margin {margin})", pairs(&inst, better))?;
            }
        }
    }
    Ok(if verdict.is_popular() { EXIT_YES } else { EXIT_NO })
}

fn fractional(inputs: &Inputs, out: &mut dyn Write) -> Result<i32> {
    let (inst, m) = load(inputs)?;
    let verdict = is_fractional_popular(&inst, &m)?;
    let doc = CertificateDocument::from_fractional(&verdict);
    doc.verify(&inst, &m)?;
    if inputs.json {
        writeln!(out, "{}", doc.to_json())?;
    } else {
        match &verdict {
            FractionalVerdict::FractionalPopular { .. } => writeln!(out, "fractional popular")?,
            FractionalVerdict::NotFractionalPopular { certificate, p, value } => {
                writeln!(out, "not fractional popular")?;
                match certificate {
                    FractionalCertificate::Structure(FractionalStructure::StarCycle { cycle }) => {
                        writeln!(out, "odd cycle through a star: {}-{}", names(&inst, cycle), inst.name(cycle[0]))?;
                    }
                    FractionalCertificate::Structure(FractionalStructure::PathCycle { path, cycle }) => {
                        writeln!(out, "path: {}", names(&inst, path))?;
                        writeln!(out, "odd cycle: {}-{}", names(&inst, cycle), inst.name(cycle[0]))?;
                    }
                    FractionalCertificate::Unpopular { better, .. } => {
                        writeln!(out, "not popular; more popular matching: {}", pairs(&inst, better))?;
                    }
                }
                let ones: Vec<String> = p.ones.iter().map(|&(a, b)| format!("{}{}", inst.name(a), inst.name(b))).collect();
                let loops: Vec<String> = p.loop_ones.iter().map(|&v| inst.name(v)).collect();
                writeln!(out, "p: 1 on {{{}}}, loops on {{{}}}", ones.join(", "), loops.join(", "))?;
                for c in &p.half_cycles {
                    writeln!(out, "p: 1/2 on cycle {}-{}", names(&inst, c), inst.name(c[0]))?;
                }
                writeln!(out, "value: {value}")?;
            }
        }
    }
    Ok(if verdict.is_fractional_popular() { EXIT_YES } else { EXIT_NO })
}

fn oracle(inputs: &Inputs, out: &mut dyn Write) -> Result<i32> {
    let (inst, m) = load(inputs)?;
    let fast = is_popular(&inst, &m)?.is_popular();
    let slow = brute_popular(&inst, &m)?;
    let mut agree = fast == slow.verdict;
    writeln!(
        out,
        "popular: algorithm {fast}, enumeration {} (best margin {})",
        slow.verdict, slow.best_value
    )?;
    match brute_fractional_popular(&inst, &m) {
        Ok(slow_frac) => {
            let fast_frac = is_fractional_popular(&inst, &m)?.is_fractional_popular();
            agree &= fast_frac == slow_frac.verdict;
            writeln!(
                out,
                "fractional popular: algorithm {fast_frac}, enumeration {} (best value {})",
                slow_frac.verdict, slow_frac.best_value
            )?;
        }
        Err(Error::SizeGuard { nodes, limit }) => {
            writeln!(out, "fractional popular: skipped, {nodes} nodes above the limit of {limit}")?;
        }
        Err(e) => return Err(e),
    }
    if !agree {
        writeln!(out, "DISAGREEMENT")?;
        return Ok(EXIT_DISAGREE);
    }
    Ok(if fast { EXIT_YES } else { EXIT_NO })
}
