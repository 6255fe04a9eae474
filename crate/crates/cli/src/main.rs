use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use esdecide_core::algebra::rational::{self, Rational};
use esdecide_core::algebra::transform::TransformKind;
use esdecide_core::corpus::{generate, CorpusSpec};
use esdecide_core::decider::{complexity_note, decide_es, es_bruteforce, Answer, DecideOptions, EsValue};
use esdecide_core::feasibility::{
    is_feasible, witness_search_seeded, Feasibility, FeasibilityInstance, DEFAULT_SEED,
};
use esdecide_core::predicate::{parse, PredicateSet};
use esdecide_core::qe::cad::decide_with_stats;
use esdecide_core::qe::{export_smtlib, QeConfig, Sentence};
use esdecide_core::ramsey::homogeneous::homogeneous_truth;
use esdecide_core::ramsey::{
    extract_growing_embedding, extract_homogeneous, format_sequence, is_r_growing,
    parse_sequence, verify_embedding, GrowthParams,
};
use esdecide_core::types::{build_q, compute_type, enumerate_types};
use esdecide_core::Error;

const EXIT_NO: u8 = 10;
const EXIT_UNDECIDED: u8 = 20;
const EXIT_ERROR: u8 = 1;
const EXIT_FAILED: u8 = 2;

#[derive(Parser)]
#[command(name = "esdecide", version, about = "Decide the Erdős–Szekeres property for semialgebraic predicates")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Omit timings so repeated runs print identical output.
    #[arg(long, global = true)]
    reproducible: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Transform {
    F1,
    F2,
}

impl From<Transform> for TransformKind {
    fn from(t: Transform) -> Self {
        match t {
            Transform::F1 => TransformKind::F1,
            Transform::F2 => TransformKind::F2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Crossratio,
    Monotone,
    Arithmetic,
    Geometric,
    ShiftedReciprocal,
    Integers,
}

#[derive(Args)]
struct Budget {
    /// Maximum candidate types per transform.
    #[arg(long, env = "ESDECIDE_TYPE_CAP", default_value_t = 2_000_000)]
    type_cap: u128,
    /// Maximum CAD cells per sentence.
    #[arg(long, env = "ESDECIDE_CELL_BUDGET", default_value_t = 2_000_000)]
    cell_budget: u64,
    /// Wall-clock limit in seconds.
    #[arg(long, env = "ESDECIDE_TIME_LIMIT")]
    time_limit: Option<f64>,
}

impl Budget {
    fn qe(&self) -> QeConfig {
        QeConfig {
            cell_budget: self.cell_budget,
            ..QeConfig::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a predicate set is Erdős–Szekeres.
    Decide {
        predicates: PathBuf,
        #[command(flatten)]
        budget: Budget,
        /// Skip the sign screen before full feasibility checks.
        #[arg(long)]
        naive: bool,
        #[arg(long)]
        no_witness: bool,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Find n positions on which every member holds everywhere or nowhere.
    Homog {
        sequence: PathBuf,
        predicates: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Embed an R-growing sequence into a host sequence.
    ExtractGrowing {
        sequence: PathBuf,
        #[arg(long = "R", default_value_t = 4)]
        r: u32,
        #[arg(long)]
        n: usize,
    },
    /// Feasibility census over the candidate types of one transform.
    Feasible {
        predicates: PathBuf,
        #[arg(long, value_enum, default_value_t = Transform::F1)]
        transform: Transform,
        /// Stop after this many types.
        #[arg(long)]
        limit: Option<usize>,
        #[command(flatten)]
        budget: Budget,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Decide a prenex sentence over the reals.
    Qe {
        sentence: String,
        /// Print an SMT-LIB2 script instead of deciding.
        #[arg(long)]
        smtlib: bool,
        #[command(flatten)]
        budget: Budget,
    },
    /// Generate a corpus sequence or predicate family.
    Gen {
        #[arg(long, value_enum)]
        family: Option<Family>,
        /// JSON corpus spec, instead of --family.
        #[arg(long, conflicts_with = "family")]
        spec: Option<PathBuf>,
        #[arg(long = "N", default_value_t = 10)]
        n: usize,
        #[arg(long = "A", default_value = "1")]
        a: String,
        #[arg(long = "B", default_value = "1")]
        b: String,
        #[arg(long, default_value = "1")]
        step: String,
        #[arg(long, default_value = "2")]
        ratio: String,
    },
    /// Exact ES(n) for an order-invariant set by brute force.
    EsExact {
        predicates: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long = "Nmax", default_value_t = 8)]
        n_max: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ExtractionFailed(_) => EXIT_FAILED,
            Error::ResourceLimit(_) => EXIT_UNDECIDED,
            _ => EXIT_ERROR,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

type Outcome = Result<(Value, String, u8), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_ERROR, format!("{}: {e}", path.display())))
}

fn read_predicates(path: &Path) -> Result<PredicateSet, Failure> {
    parse(&read(path)?).map_err(|e| fail(EXIT_ERROR, format!("{}: {e}", path.display())))
}

fn read_sequence(path: &Path) -> Result<Vec<Rational>, Failure> {
    parse_sequence(&read(path)?).map_err(|e| fail(EXIT_ERROR, format!("{}: {e}", path.display())))
}

fn strings(seq: &[Rational]) -> Vec<String> {
    seq.iter().map(|v| v.to_string()).collect()
}

fn parse_rational(text: &str, what: &str) -> Result<Rational, Failure> {
    rational::parse(text).map_err(|e| fail(EXIT_ERROR, format!("--{what}: {e}")))
}

fn cmd_decide(
    path: &Path,
    budget: &Budget,
    naive: bool,
    no_witness: bool,
    seed: u64,
    reproducible: bool,
) -> Outcome {
    let set = read_predicates(path)?;
    eprintln!("{}", complexity_note(&set));
    let opts = DecideOptions {
        type_cap: budget.type_cap,
        qe: budget.qe(),
        naive,
        witness: !no_witness,
        seed,
        time_limit: budget.time_limit.map(Duration::from_secs_f64),
        cancel: Some(Arc::new(AtomicBool::new(false))),
        ..DecideOptions::default()
    };
    let flag = opts.cancel.clone().unwrap();
    let _ = ctrlc::set_handler(move || flag.store(true, Ordering::Relaxed));
    let mut v = decide_es(&set, &opts);
    if opts.cancel.as_ref().is_some_and(|c| c.load(Ordering::Relaxed)) {
        eprintln!("interrupted; partial stats: {}", serde_json::to_string(&v.stats).unwrap());
    }
    if let Some(w) = &v.witness {
        let (kind, _, o) = v.certificate.clone().expect("NO verdicts carry a certificate");
        let mut host = kind.apply_all(&w.seq, &w.a, &w.b).unwrap_or_default();
        if !o.is_ascending() {
            host.reverse();
        }
        if !set.members.iter().all(|m| m.holds_nowhere(&host)) {
            v.witness = None;
        }
    }
    if reproducible {
        v.stats.elapsed_ms = 0;
    }
    let (word, code) = match v.answer {
        Answer::Yes => ("YES", 0),
        Answer::No => ("NO", EXIT_NO),
        Answer::Undecided => ("UNDECIDED", EXIT_UNDECIDED),
    };
    let mut text = word.to_string();
    if let (Some(kind), Some(o)) = (v.transform, v.orientation) {
        text.push_str(&format!(" (refuting type under {kind}, {o:?})"));
    }
    for u in &v.undecided {
        text.push_str(&format!("\n  {u}"));
    }
    Ok((serde_json::to_value(&v).unwrap(), text, code))
}

fn cmd_homog(seq_path: &Path, pred_path: &Path, n: usize) -> Outcome {
    let a = read_sequence(seq_path)?;
    let set = read_predicates(pred_path)?;
    let h = extract_homogeneous(&a, &set, n)?;
    if h.values.len() < n || homogeneous_truth(&set, &h.values).as_ref() != Some(&h.truth) {
        return Err(fail(EXIT_FAILED, "extracted subsequence failed re-verification"));
    }
    let members: Vec<Value> = set
        .members
        .iter()
        .zip(&h.truth)
        .map(|(m, &t)| json!({"predicate": m.to_string(), "holds": if t { "everywhere" } else { "nowhere" }}))
        .collect();
    let out = json!({
        "indices": h.indices,
        "values": strings(&h.values),
        "members": members,
        "method": h.method,
    });
    let text = format!("{:?}\n{}", h.indices, format_sequence(&h.values).trim_end());
    Ok((out, text, 0))
}

fn cmd_extract_growing(path: &Path, r: u32, n: usize) -> Outcome {
    let host = read_sequence(path)?;
    let e = extract_growing_embedding(&host, GrowthParams::new(r, n)?)?;
    if !is_r_growing(&e.b, r) || !verify_embedding(&host, &e.b, &e.witness) {
        return Err(fail(EXIT_FAILED, "embedding failed re-verification"));
    }
    let out = json!({"b": strings(&e.b), "witness": e.witness, "stage": e.stage});
    let text = format!(
        "{} A={} B={} {:?} at {:?}",
        e.witness.kind, e.witness.a, e.witness.b, e.witness.orientation, e.witness.index_map
    );
    Ok((out, text, 0))
}

fn cmd_feasible(
    path: &Path,
    transform: Transform,
    limit: Option<usize>,
    budget: &Budget,
    seed: u64,
) -> Outcome {
    let set = read_predicates(path)?;
    let q = build_q(&set, transform.into());
    let cfg = budget.qe();
    let mut rows = Vec::new();
    let mut text = String::new();
    let (mut feasible, mut infeasible, mut undecided) = (0, 0, 0);
    for (i, t) in enumerate_types(&q, budget.type_cap)?.enumerate() {
        if limit.is_some_and(|l| i >= l) {
            break;
        }
        let inst = FeasibilityInstance::new(&q, &t);
        let status = is_feasible(&inst, &cfg);
        match status {
            Feasibility::Feasible => feasible += 1,
            Feasibility::Infeasible => infeasible += 1,
            Feasibility::Undecided(_) => undecided += 1,
        }
        let witness = witness_search_seeded(&inst, 4, 4, 2000, seed)
            .filter(|w| compute_type(&q, &w.a, &w.b, &w.seq, w.r).ok().as_ref() == Some(&t));
        text.push_str(&format!(
            "{i}: {:?}{}\n",
            status,
            if witness.is_some() { " (witnessed)" } else { "" }
        ));
        rows.push(json!({"index": i, "type": t.to_json(&q), "feasibility": status, "witness": witness}));
    }
    text.push_str(&format!("feasible {feasible}, infeasible {infeasible}, undecided {undecided}"));
    let out = json!({
        "transform": TransformKind::from(transform),
        "types": rows,
        "feasible": feasible,
        "infeasible": infeasible,
        "undecided": undecided,
    });
    Ok((out, text, 0))
}

fn cmd_qe(sentence: &str, smtlib: bool, budget: &Budget) -> Outcome {
    let s = Sentence::parse(sentence)?;
    if smtlib {
        let script = export_smtlib(&s);
        return Ok((json!({"smtlib": script}), script.trim_end().to_string(), 0));
    }
    let (truth, cells) = decide_with_stats(&s, &budget.qe())?;
    let out = json!({"sentence": s.to_string(), "truth": truth, "cells": cells});
    Ok((out, truth.to_string(), 0))
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    family: Option<Family>,
    spec: Option<&Path>,
    n: usize,
    a: &str,
    b: &str,
    step: &str,
    ratio: &str,
) -> Outcome {
    let spec = match (family, spec) {
        (_, Some(path)) => serde_json::from_str::<CorpusSpec>(&read(path)?)
            .map_err(|e| fail(EXIT_ERROR, format!("{}: {e}", path.display())))?,
        (Some(f), None) => match f {
            Family::Crossratio => CorpusSpec::Crossratio,
            Family::Monotone => CorpusSpec::Monotone,
            Family::Integers => CorpusSpec::Integers { n },
            Family::Arithmetic => CorpusSpec::Arithmetic {
                a: parse_rational(a, "A")?,
                step: parse_rational(step, "step")?,
                n,
            },
            Family::Geometric => CorpusSpec::Geometric {
                a: parse_rational(a, "A")?,
                ratio: parse_rational(ratio, "ratio")?,
                n,
            },
            Family::ShiftedReciprocal => CorpusSpec::ShiftedReciprocal {
                a: parse_rational(a, "A")?,
                b: parse_rational(b, "B")?,
                n,
            },
        },
        (None, None) => return Err(fail(EXIT_ERROR, "either --family or --spec is required")),
    };
    if let Some(set) = spec.predicates() {
        let text = set.to_string();
        return Ok((json!({"predicates": text}), text, 0));
    }
    let seq = generate(&spec)?;
    Ok((json!({"sequence": strings(&seq)}), format_sequence(&seq).trim_end().to_string(), 0))
}

fn cmd_es_exact(path: &Path, n: usize, n_max: usize) -> Outcome {
    let set = read_predicates(path)?;
    let v = es_bruteforce(&set, n, n_max)?;
    let text = match v {
        EsValue::Exact(x) => x.to_string(),
        EsValue::Exceeds(x) => format!(">{x}"),
    };
    Ok((json!({"n": n, "value": v}), text, 0))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Decide {
            predicates,
            budget,
            naive,
            no_witness,
            seed,
        } => cmd_decide(predicates, budget, *naive, *no_witness, *seed, cli.reproducible),
        Command::Homog {
            sequence,
            predicates,
            n,
        } => cmd_homog(sequence, predicates, *n),
        Command::ExtractGrowing { sequence, r, n } => cmd_extract_growing(sequence, *r, *n),
        Command::Feasible {
            predicates,
            transform,
            limit,
            budget,
            seed,
        } => cmd_feasible(predicates, *transform, *limit, budget, *seed),
        Command::Qe {
            sentence,
            smtlib,
            budget,
        } => {
            let mut r = cmd_qe(sentence, *smtlib, budget);
            if cli.reproducible {
                if let Ok((v, _, _)) = &mut r {
                    if let Some(o) = v.as_object_mut() {
                        o.remove("cells");
                    }
                }
            }
            r
        }
        Command::Gen {
            family,
            spec,
            n,
            a,
            b,
            step,
            ratio,
        } => cmd_gen(*family, spec.as_deref(), *n, a, b, step, ratio),
        Command::EsExact {
            predicates,
            n,
            n_max,
        } => cmd_es_exact(predicates, *n, *n_max),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((json, text, code)) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&json).unwrap()),
                Format::Text => println!("{text}"),
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
