//! `kmc`: classification, contraction certificates and tree experiments.
//!
//! Reports go to stdout as JSON; diagnostics go to stderr. Exit codes: 0
//! success, 1 verification failure, 2 inconclusive or budget exhausted,
//! 3 input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use contraction_core::cartan::{classify_type, components, coxeter_matrix, main_theorem_applicable};
use contraction_core::config::{analyze, Caps};
use contraction_core::treesim::dynamics::{parabolic_report, DEFAULT_SAMPLE_BUDGET};
use contraction_core::treesim::{
    classify, fold_line, in_contraction, nonclosed_witness, scale, seeded_rng, Automorphism, Line,
    Membership, Portrait, Tree,
};
use contraction_core::{parse_gcm, Error, Word};

#[derive(Parser)]
#[command(name = "kmc", version, about = "Contraction groups of Kac-Moody groups and tree automorphisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coxeter matrix, components, type and applicability of a GCM file.
    Classify { file: PathBuf },
    /// Contraction certificate for a Weyl group element.
    Analyze {
        file: PathBuf,
        /// Whitespace-separated 1-based generator indices.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, default_value_t = Caps::default().orbit)]
        orbit_cap: usize,
        #[arg(long, default_value_t = Caps::default().bfs_radius)]
        bfs_radius: usize,
        #[arg(long, alias = "max-power", default_value_t = Caps::default().power)]
        power_cap: usize,
        #[arg(long, default_value_t = Caps::default().periods)]
        periods: usize,
    },
    /// Experiments on the regular tree.
    Tree {
        #[command(subcommand)]
        sub: TreeCommand,
    },
}

#[derive(Args, Clone)]
struct TreeOpts {
    #[arg(long, default_value_t = 3)]
    degree: u8,
    #[arg(long, default_value_t = 12)]
    depth: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Reject odd translation lengths and odd base displacements.
    #[arg(long)]
    type_preserving: bool,
    /// Translation length of the default hyperbolic element.
    #[arg(long, default_value_t = 1)]
    translation_length: usize,
}

#[derive(Subcommand)]
enum TreeCommand {
    /// Elliptic or hyperbolic, with fixed point or axis.
    Classify {
        portrait: PathBuf,
        #[command(flatten)]
        opts: TreeOpts,
    },
    /// Membership of g in the contraction group of h.
    Contract {
        portrait: PathBuf,
        /// Portrait of h; defaults to the standard translation.
        #[arg(long)]
        h: Option<PathBuf>,
        #[command(flatten)]
        opts: TreeOpts,
    },
    /// Membership of g in the parabolic group of h, cross-checked against
    /// orbit boundedness.
    Parabolic {
        portrait: PathBuf,
        #[arg(long)]
        h: Option<PathBuf>,
        #[command(flatten)]
        opts: TreeOpts,
    },
    /// Scale of a portrait, or of the standard translation if none is given.
    Scale {
        portrait: Option<PathBuf>,
        #[command(flatten)]
        opts: TreeOpts,
    },
    /// Fold a line onto the standard line; a seeded random line if no file.
    Fold {
        line: Option<PathBuf>,
        #[command(flatten)]
        opts: TreeOpts,
    },
    /// A convergent sequence in U_h whose limit is not in U_h.
    Witness {
        #[command(flatten)]
        opts: TreeOpts,
    },
}

#[derive(Serialize)]
struct Report<P: Serialize> {
    tool_version: &'static str,
    command: Vec<String>,
    input_digest: Option<String>,
    payload: P,
    #[serde(skip_serializing_if = "Option::is_none")]
    caps: Option<Caps>,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Inconclusive(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() || matches!(e, Error::Elliptic | Error::NotApplicable(_)) {
            Failure::Input(e.to_string())
        } else if e.is_inconclusive() {
            Failure::Inconclusive(e.to_string())
        } else {
            Failure::Verification(e.to_string())
        }
    }
}

/// What the report says about the run.
enum Outcome {
    Ok,
    Inconclusive(String),
    Failed(String),
}

struct Inputs {
    hasher: Option<Sha256>,
}

impl Inputs {
    fn new() -> Self {
        Inputs { hasher: None }
    }

    fn read(&mut self, path: &PathBuf) -> Result<String, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
        let h = self.hasher.get_or_insert_with(Sha256::new);
        h.update((text.len() as u64).to_le_bytes());
        h.update(text.as_bytes());
        Ok(text)
    }

    fn digest(self) -> Option<String> {
        self.hasher.map(|h| format!("sha256:{}", hex::encode(h.finalize())))
    }
}

fn emit<P: Serialize>(inputs: Inputs, payload: P, caps: Option<Caps>) {
    let report = Report {
        tool_version: contraction_core::VERSION,
        command: std::env::args().skip(1).collect(),
        input_digest: inputs.digest(),
        payload,
        caps,
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let mut inputs = Inputs::new();
    match cli.command {
        Command::Classify { file } => {
            let gcm = parse_gcm(&inputs.read(&file)?)?;
            let diagram = coxeter_matrix(&gcm);
            #[derive(Serialize)]
            struct Payload {
                input: contraction_core::GeneralizedCartanMatrix,
                coxeter_matrix: contraction_core::cartan::CoxeterDiagram,
                components: Vec<Vec<usize>>,
                classification: contraction_core::cartan::TypeClassification,
                applicability: contraction_core::cartan::Applicability,
            }
            let payload = Payload {
                components: components(&diagram)
                    .into_iter()
                    .map(|c| c.into_iter().map(|i| i + 1).collect())
                    .collect(),
                classification: classify_type(&diagram),
                applicability: main_theorem_applicable(&gcm),
                coxeter_matrix: diagram,
                input: gcm,
            };
            emit(inputs, payload, None);
            Ok(Outcome::Ok)
        }
        Command::Analyze { file, word, orbit_cap, bfs_radius, power_cap, periods } => {
            let gcm = parse_gcm(&inputs.read(&file)?)?;
            let word: Word = word.parse()?;
            let caps = Caps { orbit: orbit_cap, bfs_radius, power: power_cap, periods };
            let cert = analyze(&gcm, &word, &caps)?;
            let outcome = if cert.is_inconclusive() {
                Outcome::Inconclusive("a search stage ran out of budget".into())
            } else {
                Outcome::Ok
            };
            emit(inputs, cert, Some(caps));
            Ok(outcome)
        }
        Command::Tree { sub } => run_tree(sub, inputs),
    }
}

fn load_portrait(inputs: &mut Inputs, path: &PathBuf, opts: &TreeOpts) -> Result<Automorphism, Failure> {
    let p = Portrait::parse(&inputs.read(path)?)?;
    if p.degree != opts.degree {
        return Err(Error::DegreeMismatch(p.degree, opts.degree).into());
    }
    let g = p.to_automorphism()?;
    if opts.type_preserving {
        let moved = g.apply(&Default::default()).map_or(0, |v| v.len());
        if moved % 2 == 1 {
            return Err(Failure::Input(format!(
                "{} moves the base an odd distance; not type-preserving",
                path.display()
            )));
        }
    }
    Ok(g)
}

fn standard_h(opts: &TreeOpts) -> Result<Automorphism, Failure> {
    if opts.type_preserving && opts.translation_length % 2 == 1 {
        return Err(Failure::Input("odd translation length is not type-preserving".into()));
    }
    if opts.translation_length == 0 {
        return Err(Failure::Input("translation length must be positive".into()));
    }
    Ok(Automorphism::standard_translation(Tree::new(opts.degree)?, opts.translation_length as i64))
}

fn choose_h(inputs: &mut Inputs, h: &Option<PathBuf>, opts: &TreeOpts) -> Result<Automorphism, Failure> {
    match h {
        Some(path) => load_portrait(inputs, path, opts),
        None => standard_h(opts),
    }
}

fn run_tree(sub: TreeCommand, mut inputs: Inputs) -> Result<Outcome, Failure> {
    match sub {
        TreeCommand::Classify { portrait, opts } => {
            let g = load_portrait(&mut inputs, &portrait, &opts)?;
            emit(inputs, classify(&g)?, None);
            Ok(Outcome::Ok)
        }
        TreeCommand::Contract { portrait, h, opts } => {
            let g = load_portrait(&mut inputs, &portrait, &opts)?;
            let h = choose_h(&mut inputs, &h, &opts)?;
            let report = in_contraction(&g, &h, DEFAULT_SAMPLE_BUDGET)?;
            let outcome = match report.membership {
                Membership::Inconclusive { .. } => Outcome::Inconclusive("depth budget exhausted".into()),
                _ => Outcome::Ok,
            };
            emit(inputs, report, None);
            Ok(outcome)
        }
        TreeCommand::Parabolic { portrait, h, opts } => {
            let g = load_portrait(&mut inputs, &portrait, &opts)?;
            let h = choose_h(&mut inputs, &h, &opts)?;
            let report = parabolic_report(&g, &h, DEFAULT_SAMPLE_BUDGET)?;
            let outcome = match report.in_parabolic {
                Some(p) if p != report.bounded_orbit => {
                    Outcome::Failed("end-fixing and bounded-orbit tests disagree".into())
                }
                _ => Outcome::Ok,
            };
            emit(inputs, report, None);
            Ok(outcome)
        }
        TreeCommand::Scale { portrait, opts } => {
            let g = match &portrait {
                Some(path) => load_portrait(&mut inputs, path, &opts)?,
                None => standard_h(&opts)?,
            };
            #[derive(Serialize)]
            struct Payload {
                isometry: contraction_core::treesim::TreeIsometry,
                scale: u64,
            }
            emit(inputs, Payload { isometry: classify(&g)?, scale: scale(&g)? }, None);
            Ok(Outcome::Ok)
        }
        TreeCommand::Fold { line, opts } => {
            let line = match &line {
                Some(path) => {
                    let l = Line::parse(&inputs.read(path)?)?;
                    if l.tree.degree != opts.degree {
                        return Err(Error::DegreeMismatch(l.tree.degree, opts.degree).into());
                    }
                    l
                }
                None => Line::random(Tree::new(opts.degree)?, &mut seeded_rng(opts.seed)),
            };
            let fold = fold_line(&line, opts.depth)?;
            let t = fold.transcript;
            let outcome = if t.onto_standard && t.cauchy.iter().all(|c| c.ok) {
                Outcome::Ok
            } else {
                Outcome::Failed("folding checks failed".into())
            };
            emit(inputs, t, None);
            Ok(outcome)
        }
        TreeCommand::Witness { opts } => {
            if opts.type_preserving && opts.translation_length % 2 == 1 {
                return Err(Failure::Input("odd translation length is not type-preserving".into()));
            }
            let w = nonclosed_witness(Tree::new(opts.degree)?, opts.translation_length, opts.depth)?;
            let outcome = if w.transcript.all_checks_pass {
                Outcome::Ok
            } else {
                Outcome::Failed("witness checks failed".into())
            };
            emit(inputs, w.transcript, None);
            Ok(outcome)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Inconclusive(msg)) => {
            eprintln!("kmc: inconclusive: {msg}");
            ExitCode::from(2)
        }
        Ok(Outcome::Failed(msg)) => {
            eprintln!("kmc: verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("kmc: input error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Inconclusive(msg)) => {
            eprintln!("kmc: inconclusive: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("kmc: verification failed: {msg}");
            ExitCode::from(1)
        }
    }
}
