//! Command-line front end. Results go to standard output as single-line
//! JSON unless `--text` is given; diagrams are emitted as DOT. Exit codes:
//! 0 on success, 2 on malformed input or domain errors, 1 on internal
//! errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use fi1::analysis::{
    self, ClassificationReport, Decomposition, GeneratorSet, IdempotentCount, Witness,
};
use fi1::element::{self, Element};
use fi1::error::Error as FiError;
use fi1::munn;
use fi1::numerical::{NumericalPresentation, NumericalSgp};
use fi1::presentation::{self, BuiltPresentation, VerificationReport, VerifyOptions};
use fi1::ptrans::{self, ScheinReport};
use fi1::word::Word;

#[derive(Parser)]
#[command(name = "fi1", version, about = "Computations in the monogenic free inverse semigroup")]
struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a word over x and x^-1 to an element.
    Eval { word: String },
    /// Multiply two elements given as "[-a, p, b]".
    Mul { e1: String, e2: String },
    /// Invert an element.
    Inv { e: String },
    /// Raise an element to a positive power.
    Pow { e: String, n: i64 },
    /// Decide finite presentability of the generated subsemigroup.
    Classify { gens: PathBuf },
    /// Construct the non-presentability witness for a mixed-sign set.
    Witness { gens: PathBuf },
    /// Enumerate the generated subsemigroup up to a D-class index.
    Closure {
        gens: PathBuf,
        #[arg(long)]
        dmax: i64,
    },
    /// Count (and list, when finite) the idempotents of the subsemigroup.
    Idempotents { gens: PathBuf },
    /// Decompose a positive subsemigroup into arithmetic pieces.
    Decompose { gens: PathBuf },
    /// Verify the partial-transformation relation families by composition.
    #[command(name = "schein-verify")]
    ScheinVerify {
        #[arg(long)]
        n: usize,
        #[arg(long = "max-ij")]
        max_ij: u64,
    },
    /// Numerical semigroup computations.
    Numerical {
        #[command(subcommand)]
        op: NumericalOp,
    },
    /// Presentation synthesis and verification.
    Presentation {
        #[command(subcommand)]
        op: PresentationOp,
    },
    /// Render the tree of an element as DOT (ASCII with --text).
    #[command(name = "munn-dot")]
    MunnDot { e: String },
    /// Render the idempotent grid as DOT, optionally marking a closure.
    #[command(name = "lattice-dot")]
    LatticeDot {
        #[arg(long)]
        amax: i64,
        #[arg(long)]
        bmax: i64,
        /// Mark the idempotents generated by this set.
        #[arg(long)]
        mark: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum NumericalOp {
    /// Frobenius number and gaps (in gcd-normalized units).
    Frobenius { gens: PathBuf },
    /// The unique minimal generating set.
    Mingens { gens: PathBuf },
    /// Minimal presentation as pairs of exponent vectors.
    Presentation { gens: PathBuf },
}

#[derive(Subcommand)]
enum PresentationOp {
    /// Build a finite presentation for a finitely presented subsemigroup.
    Build { gens: PathBuf },
    /// Build and then verify: soundness plus bounded completeness.
    Verify {
        gens: PathBuf,
        /// Completeness is checked for all symbol words up to this length.
        #[arg(long, default_value_t = 8)]
        length: usize,
        /// Expansion budget for each derivation search.
        #[arg(long, default_value_t = 200_000)]
        steps: usize,
    },
}

enum CliError {
    Input(String),
    Internal(String),
}

impl From<FiError> for CliError {
    fn from(e: FiError) -> CliError {
        match e {
            FiError::Internal(msg) => CliError::Internal(msg),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            use std::io::Write;
            let stdout = std::io::stdout();
            let mut handle = stdout.lock();
            match writeln!(handle, "{}", output.trim_end_matches('\n')) {
                Ok(()) => ExitCode::SUCCESS,
                // Downstream consumer (e.g. head) closed the pipe.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("internal error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Eval { word } => {
            let parsed = Word::parse(word)?;
            let value = element::eval_word(&parsed);
            render_value(cli.text, &value, |v| v.to_string())
        }
        Command::Mul { e1, e2 } => {
            let value = parse_element(e1)?.multiply(&parse_element(e2)?)?;
            render_value(cli.text, &value, |v| v.to_string())
        }
        Command::Inv { e } => {
            let value = parse_element(e)?.invert();
            render_value(cli.text, &value, |v| v.to_string())
        }
        Command::Pow { e, n } => {
            let value = parse_element(e)?.power(*n)?;
            render_value(cli.text, &value, |v| v.to_string())
        }
        Command::Classify { gens } => {
            let report = analysis::classify(&read_generators(gens)?)?;
            render_value(cli.text, &report, classify_text)
        }
        Command::Witness { gens } => {
            let witness = analysis::non_fp_witness(&read_generators(gens)?)?;
            render_value(cli.text, &witness, witness_text)
        }
        Command::Closure { gens, dmax } => {
            let closure = analysis::enumerate_closure(&read_generators(gens)?, *dmax)?;
            let out = ClosureOut {
                dmax: *dmax,
                count: closure.len(),
                elements: closure.into_iter().collect(),
            };
            render_value(cli.text, &out, |o| {
                let mut s = format!("{} elements with D-class index <= {}\n", o.count, o.dmax);
                for e in &o.elements {
                    let _ = writeln!(s, "{e}");
                }
                s
            })
        }
        Command::Idempotents { gens } => {
            let set = read_generators(gens)?;
            let count = analysis::count_idempotents(&set)?;
            let idempotents = match count {
                IdempotentCount::Infinite => None,
                IdempotentCount::Finite(_) => {
                    let idems: Vec<Element> = set
                        .gens()
                        .iter()
                        .filter(|g| g.is_idempotent())
                        .copied()
                        .collect();
                    let closure = if idems.is_empty() {
                        Vec::new()
                    } else {
                        analysis::semilattice_closure(&idems)?.into_iter().collect()
                    };
                    Some(closure)
                }
            };
            let out = IdempotentsOut {
                idempotent_count: count,
                idempotents,
            };
            render_value(cli.text, &out, idempotents_text)
        }
        Command::Decompose { gens } => {
            let decomposition = analysis::decompose_positive(&read_generators(gens)?)?;
            render_value(cli.text, &decomposition, decompose_text)
        }
        Command::ScheinVerify { n, max_ij } => {
            if *n == 0 || *max_ij == 0 {
                return Err(CliError::Input("--n and --max-ij must be positive".into()));
            }
            let report = ptrans::schein_check(*n, *max_ij);
            let out = ScheinOut {
                passed: report.passed(),
                report,
            };
            render_value(cli.text, &out, schein_text)
        }
        Command::Numerical { op } => match op {
            NumericalOp::Frobenius { gens } => {
                let sgp = read_numerical(gens)?;
                let out = FrobeniusOut {
                    gens: sgp.gens().to_vec(),
                    gcd: sgp.gcd(),
                    normalized_gens: sgp.normalized_gens(),
                    frobenius: sgp.frobenius(),
                    gaps: sgp.gaps(),
                };
                render_value(cli.text, &out, |o| {
                    format!(
                        "frobenius: {}\ngaps: {:?}",
                        o.frobenius.map_or("none".to_string(), |f| f.to_string()),
                        o.gaps
                    )
                })
            }
            NumericalOp::Mingens { gens } => {
                let sgp = read_numerical(gens)?;
                let out = MingensOut {
                    gens: sgp.gens().to_vec(),
                    minimal_generators: sgp.minimal_generators(),
                };
                render_value(cli.text, &out, |o| format!("{:?}", o.minimal_generators))
            }
            NumericalOp::Presentation { gens } => {
                let pres = read_numerical(gens)?.minimal_presentation();
                render_value(cli.text, &pres, numerical_presentation_text)
            }
        },
        Command::Presentation { op } => match op {
            PresentationOp::Build { gens } => {
                let built = presentation::build_presentation(&read_generators(gens)?)?;
                render_value(cli.text, &built, built_text)
            }
            PresentationOp::Verify { gens, length, steps } => {
                let set = read_generators(gens)?;
                let built = presentation::build_presentation(&set)?;
                let opts = VerifyOptions {
                    length_bound: *length,
                    derive_max_length: length + 4,
                    derive_max_steps: *steps,
                    ..VerifyOptions::default()
                };
                let report = presentation::verify_presentation(
                    &set,
                    &built.presentation,
                    &built.symbol_values,
                    &opts,
                )?;
                render_value(cli.text, &report, verify_text)
            }
        },
        Command::MunnDot { e } => {
            let el = parse_element(e)?;
            if cli.text {
                Ok(munn::munn_ascii(&el))
            } else {
                Ok(munn::munn_dot(&el))
            }
        }
        Command::LatticeDot { amax, bmax, mark } => {
            let marked = match mark {
                None => Default::default(),
                Some(path) => {
                    let set = read_generators(path)?;
                    let bound = amax.saturating_add(*bmax);
                    analysis::enumerate_closure(&set, bound)?
                        .into_iter()
                        .filter(|e| {
                            e.is_idempotent()
                                && e.left_reach() <= *amax
                                && e.right_reach() <= *bmax
                        })
                        .collect()
                }
            };
            Ok(munn::lattice_dot(*amax, *bmax, &marked))
        }
    }
}

#[derive(Serialize)]
struct ClosureOut {
    dmax: i64,
    count: usize,
    elements: Vec<Element>,
}

#[derive(Serialize)]
struct IdempotentsOut {
    idempotent_count: IdempotentCount,
    #[serde(skip_serializing_if = "Option::is_none")]
    idempotents: Option<Vec<Element>>,
}

#[derive(Serialize)]
struct ScheinOut {
    passed: bool,
    #[serde(flatten)]
    report: ScheinReport,
}

#[derive(Serialize)]
struct FrobeniusOut {
    gens: Vec<u64>,
    gcd: u64,
    normalized_gens: Vec<u64>,
    frobenius: Option<u64>,
    gaps: Vec<u64>,
}

#[derive(Serialize)]
struct MingensOut {
    gens: Vec<u64>,
    minimal_generators: Vec<u64>,
}

#[derive(serde::Deserialize)]
struct NumericalInput {
    gens: Vec<u64>,
}

fn parse_element(text: &str) -> Result<Element, CliError> {
    Ok(text.parse::<Element>()?)
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn read_generators(path: &Path) -> Result<GeneratorSet, CliError> {
    let raw = read_file(path)?;
    serde_json::from_str(&raw).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_numerical(path: &Path) -> Result<NumericalSgp, CliError> {
    let raw = read_file(path)?;
    let input: NumericalInput = serde_json::from_str(&raw)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(NumericalSgp::new(input.gens)?)
}

fn render_value<T: Serialize>(
    text: bool,
    value: &T,
    to_text: impl Fn(&T) -> String,
) -> Result<String, CliError> {
    if text {
        Ok(to_text(value))
    } else {
        serde_json::to_string(value).map_err(|e| CliError::Internal(e.to_string()))
    }
}

fn classify_text(report: &ClassificationReport) -> String {
    let count = match report.idempotent_count {
        IdempotentCount::Finite(n) => n.to_string(),
        IdempotentCount::Infinite => "infinite".to_string(),
    };
    format!(
        "verdict: {:?}\nidempotent count: {}\ngenerator signs: positive={} negative={} zero={}",
        report.verdict,
        count,
        report.evidence.positive,
        report.evidence.negative,
        report.evidence.zero
    )
}

fn witness_text(w: &Witness) -> String {
    format!(
        "u1 = {}  (n1 = {})\nu2 = {}  (n2 = {})\ne = {}  in C_{}\nf = {}  in D_{}\n\
         image of e then f: {}\nimage of f then e: {}",
        w.u1, w.n1, w.u2, w.n2, w.e, w.n, w.f, w.m, w.obstruction.0, w.obstruction.1
    )
}

fn idempotents_text(out: &IdempotentsOut) -> String {
    match (&out.idempotent_count, &out.idempotents) {
        (IdempotentCount::Infinite, _) => "idempotent count: infinite".to_string(),
        (IdempotentCount::Finite(n), Some(list)) => {
            let mut s = format!("idempotent count: {n}\n");
            for e in list {
                let _ = writeln!(s, "{e}");
            }
            s
        }
        (IdempotentCount::Finite(n), None) => format!("idempotent count: {n}"),
    }
}

fn decompose_text(d: &Decomposition) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "chain bound: {}", d.chain_bound);
    let _ = writeln!(
        s,
        "detection bound: {} ({})",
        d.detection_bound,
        if d.stabilized { "stabilized" } else { "hit the cap" }
    );
    let _ = writeln!(s, "Q: {}", d.q_bound);
    for piece in &d.pieces {
        let _ = writeln!(
            s,
            "piece ({}, {}): deep generators {:?}, {} visible values",
            piece.x,
            piece.y,
            piece.u_min_generators,
            piece.p_values.len()
        );
    }
    let _ = writeln!(s, "deep generators as elements:");
    for e in &d.u_generators {
        let _ = writeln!(s, "  {e}");
    }
    let _ = writeln!(s, "shallow complement ({} elements):", d.complement.len());
    for e in &d.complement {
        let _ = writeln!(s, "  {e}");
    }
    s
}

fn schein_text(out: &ScheinOut) -> String {
    let r = &out.report;
    let mut s = String::new();
    let _ = writeln!(s, "n = {}, exponents up to {}", r.n, r.max_ij);
    let _ = writeln!(s, "a b a = a: {}", r.absorption_alpha);
    let _ = writeln!(s, "b a b = b: {}", r.absorption_beta);
    let _ = writeln!(
        s,
        "equalities (i > n, j > n or i + j <= n): {}",
        match r.first_equality_failure {
            None => "all hold".to_string(),
            Some((i, j)) => format!("FAIL at i={i}, j={j}"),
        }
    );
    let _ = writeln!(
        s,
        "inequalities (i + j > n, i, j <= n): {}",
        match r.first_inequality_failure {
            None => "all hold".to_string(),
            Some((i, j)) => format!("FAIL at i={i}, j={j}"),
        }
    );
    if let Some(w) = &r.inequality_witness {
        let _ = writeln!(
            s,
            "witness i={}, j={}: {} vs {}",
            w.i, w.j, w.lhs, w.rhs
        );
    }
    let _ = write!(s, "passed: {}", out.passed);
    s
}

fn numerical_presentation_text(p: &NumericalPresentation) -> String {
    let mut s = format!("minimal generators: {:?}\n", p.generators);
    if p.relations.is_empty() {
        let _ = write!(s, "no relations (free on one generator)");
    }
    for (lhs, rhs) in &p.relations {
        let _ = writeln!(s, "{lhs:?} = {rhs:?}");
    }
    s
}

fn built_text(b: &BuiltPresentation) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "alphabet:");
    for (name, value) in b.presentation.alphabet().iter().zip(&b.symbol_values) {
        let _ = writeln!(s, "  {name} = {value}");
    }
    let _ = writeln!(s, "relations ({}):", b.presentation.relations().len());
    for (lhs, rhs) in b.presentation.relations() {
        let _ = writeln!(
            s,
            "  {} = {}",
            b.presentation.render_word(lhs),
            b.presentation.render_word(rhs)
        );
    }
    s
}

fn verify_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "sound: {}", r.sound);
    let _ = writeln!(
        s,
        "words checked: {} (length <= {}), value classes: {}",
        r.words_checked, r.length_bound, r.value_classes
    );
    let _ = writeln!(s, "underivable pairs: {}", r.underivable_count);
    for (u, v) in &r.underivable_samples {
        let _ = writeln!(s, "  {u}  vs  {v}");
    }
    let _ = writeln!(s, "budget exhausted pairs: {}", r.budget_exhausted_count);
    for (u, v) in &r.budget_exhausted_samples {
        let _ = writeln!(s, "  {u}  vs  {v}");
    }
    let _ = write!(s, "complete: {}", r.complete);
    s
}
