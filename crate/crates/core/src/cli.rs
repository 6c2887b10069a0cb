//! The `ffs` command line.
//!
//! [`run`] parses arguments, executes one subcommand and returns the exit
//! code together with everything that should go to stdout. Exit codes: 0 on
//! success, 1 when a yes/no query answers no, 2 on input errors.

use std::path::Path;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::agency::{self, Observation};
use crate::error::{Error, Result};
use crate::factored_set::{count_factorizations_parallel, enumerate_factorizations, FactorSubset};
use crate::format::{self, FactoredSetDoc};
use crate::inference::{self, InferenceVerdict, Model, OrthogonalityDatabase, SearchBounds, TemporalQuery};
use crate::partitions::{all_partitions, GroundSet, Partition};
use crate::polynomial;
use crate::probability;
use crate::structure::{self, TemporalRelation};

/// Seed used by randomized commands when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed;

const BUNDLED: &[(&str, &str)] = &[
    ("ex1.ffs", include_str!("../examples-data/ex1.ffs")),
    ("ex1.db", include_str!("../examples-data/ex1.db")),
    ("ex1-model.ffs", include_str!("../examples-data/ex1-model.ffs")),
    ("ex2.db", include_str!("../examples-data/ex2.db")),
    ("ex2-model.ffs", include_str!("../examples-data/ex2-model.ffs")),
];

/// Contents of a bundled example file, looked up by file name (`ex1.db`) or
/// by stem plus the extension the caller expects (`ex1` with `.db`).
pub fn bundled(name: &str, extension: &str) -> Option<&'static str> {
    BUNDLED
        .iter()
        .find(|(file, _)| *file == name || file.strip_suffix(extension) == Some(name))
        .map(|(_, text)| *text)
}

#[derive(Parser, Debug)]
#[command(
    name = "ffs",
    version,
    about = "Finite factored sets: histories, orthogonality, time and temporal inference"
)]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    format: OutputFormat,
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Structured,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count the factorizations of an n-element set.
    CountFact { n: usize },
    /// List the factorizations of an n-element set.
    EnumFact {
        n: usize,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// History of a named partition.
    History {
        file: String,
        #[arg(long)]
        partition: String,
    },
    /// Orthogonality, optionally conditioned on a partition or an event.
    Orth {
        file: String,
        a: String,
        b: String,
        #[arg(long, conflicts_with = "event")]
        given: Option<String>,
        #[arg(long)]
        event: Option<String>,
    },
    /// Temporal relation between two partitions, optionally given an event.
    Before {
        file: String,
        a: String,
        b: String,
        #[arg(long)]
        given_event: Option<String>,
    },
    /// Characteristic polynomial of an event.
    Poly {
        file: String,
        #[arg(long)]
        event: String,
        /// Also print the irreducible factorization.
        #[arg(long)]
        factor: bool,
    },
    /// Probability of an event under a distribution file.
    Prob {
        file: String,
        dist: String,
        #[arg(long)]
        event: String,
    },
    /// Compare conditional orthogonality, the polynomial identity and sampled
    /// distributions on every triple of partitions, for every factorization
    /// of every set size up to the bound.
    FtVerify {
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Check a model file against a database.
    CheckModel {
        #[arg(long)]
        model: String,
        #[arg(long)]
        db: String,
    },
    /// Bounded search for a temporal relation implied by a database.
    Infer {
        #[arg(long)]
        db: String,
        #[arg(long, num_args = 2, value_names = ["A", "B"], required = true)]
        before: Vec<String>,
        #[command(flatten)]
        bounds: BoundArgs,
        /// Ask for the non-strict relation instead.
        #[arg(long)]
        non_strict: bool,
        /// Print the counterexample model, if any.
        #[arg(long)]
        show_model: bool,
    },
    /// Bounded search for any model of a database.
    Consistent {
        #[arg(long)]
        db: String,
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long)]
        show_model: bool,
    },
    /// Whether an agent observes an event or a partition with respect to a world model.
    Observes {
        file: String,
        #[arg(long)]
        agent: String,
        #[arg(long, conflicts_with = "partition", required_unless_present = "partition")]
        event: Option<String>,
        #[arg(long)]
        partition: Option<String>,
        #[arg(long)]
        world: String,
        #[arg(long, default_value_t = agency::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Whether a partition is counterfactable, optionally relative to another.
    Counterfactable {
        file: String,
        x: String,
        #[arg(long)]
        relative_to: Option<String>,
    },
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long)]
    max_size: usize,
    #[arg(long)]
    max_dim: Option<usize>,
    /// Only consider labelings onto the whole observation space.
    #[arg(long)]
    surjective: bool,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    time_budget: Option<u64>,
}

impl BoundArgs {
    fn bounds(&self) -> SearchBounds {
        SearchBounds {
            max_size: self.max_size,
            max_dim: self.max_dim,
            surjective_only: self.surjective,
            time_budget: self.time_budget.map(Duration::from_secs),
        }
    }
}

/// What a subcommand produced.
struct Outcome {
    text: String,
    results: Value,
    negative: bool,
    seed: Option<u64>,
    bounds: Option<Value>,
}

impl Outcome {
    fn new(text: String, results: Value) -> Self {
        Outcome {
            text,
            results,
            negative: false,
            seed: None,
            bounds: None,
        }
    }

    fn negative(mut self, negative: bool) -> Self {
        self.negative = negative;
        self
    }
}

/// Reads input files and digests everything read.
struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    fn read(&mut self, path: &str, extension: &str) -> Result<String> {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                let name = Path::new(path).file_name().and_then(|n| n.to_str()).unwrap_or(path);
                match (
                    Path::new(path).exists(),
                    bundled(name, extension).or_else(|| bundled(path, extension)),
                ) {
                    (false, Some(t)) => t.to_string(),
                    _ => return Err(Error::Invalid(format!("cannot read {path}: {e}"))),
                }
            }
        };
        self.hasher.update(path.as_bytes());
        self.hasher.update([0]);
        self.hasher.update(text.as_bytes());
        self.hasher.update([0]);
        Ok(text)
    }

    fn factored_set(&mut self, path: &str) -> Result<FactoredSetDoc> {
        let text = self.read(path, ".ffs")?;
        format::parse_factored_set(&text, path)
    }

    fn database(&mut self, path: &str) -> Result<OrthogonalityDatabase> {
        let text = self.read(path, ".db")?;
        format::parse_database(&text, path)
    }
}

/// Runs the command line; returns the exit code and the stdout text.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut inputs = Inputs { hasher: Sha256::new() };
    let outcome = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command, &mut inputs)),
            Err(e) => Err(Error::Invalid(format!("thread pool: {e}"))),
        },
        None => dispatch(&cli.command, &mut inputs),
    };
    match outcome {
        Ok(o) => {
            let code = i32::from(o.negative);
            let out = match cli.format {
                OutputFormat::Text => o.text,
                OutputFormat::Structured => {
                    let mut report = json!({
                        "command": echo,
                        "inputs_digest": hex::encode(inputs.hasher.finalize()),
                        "results": o.results,
                    });
                    if let Some(seed) = o.seed {
                        report["seed"] = json!(seed);
                    }
                    if let Some(b) = o.bounds {
                        report["bounds"] = b;
                    }
                    serde_json::to_string_pretty(&report).expect("json") + "\n"
                }
            };
            (code, out)
        }
        Err(e) => {
            let out = match cli.format {
                OutputFormat::Text => format!("error: {e}\n"),
                OutputFormat::Structured => {
                    serde_json::to_string_pretty(&json!({ "command": echo, "error": e.to_string() })).expect("json")
                        + "\n"
                }
            };
            (2, out)
        }
    }
}

fn subset_names(doc: &FactoredSetDoc, c: FactorSubset) -> Vec<String> {
    c.iter().map(|b| doc.factor_names[b].clone()).collect()
}

fn render_subset(doc: &FactoredSetDoc, c: FactorSubset) -> String {
    format!("{{{}}}", subset_names(doc, c).join(", "))
}

fn partition_json(ground: &GroundSet, p: &Partition) -> Value {
    json!(p
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&s| ground.name(s)).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn model_json(model: &Model, omega: &GroundSet) -> Value {
    let ground = GroundSet::new(model.factored().size());
    json!({
        "size": model.factored().size(),
        "factors": model.factored().factors().iter().map(|f| partition_json(&ground, f)).collect::<Vec<_>>(),
        "labeling": model.labeling().iter().map(|&w| omega.name(w)).collect::<Vec<_>>(),
    })
}

fn model_text(model: &Model, omega: &GroundSet) -> String {
    let doc = FactoredSetDoc::unnamed(model.factored().clone());
    format::render_model(&doc, model, omega)
}

fn dispatch(cmd: &Command, inputs: &mut Inputs) -> Result<Outcome> {
    match cmd {
        Command::CountFact { n } => {
            if *n > 16 {
                return Err(Error::Invalid("counts are supported for n ≤ 16".into()));
            }
            let count = count_factorizations_parallel(*n);
            Ok(Outcome::new(format!("{count}\n"), json!({ "n": n, "count": count })))
        }
        Command::EnumFact { n, limit } => {
            if *n > 12 {
                return Err(Error::Invalid("enumeration is supported for n ≤ 12".into()));
            }
            let ground = GroundSet::new(*n);
            let mut text = String::new();
            let mut list = Vec::new();
            for (i, fs) in enumerate_factorizations(*n)
                .take(limit.unwrap_or(usize::MAX))
                .enumerate()
            {
                text.push_str(&format!("# factorization {}\n", i + 1));
                text.push_str(&format::render_factored_set(&FactoredSetDoc::unnamed(fs.clone())));
                list.push(json!(fs
                    .factors()
                    .iter()
                    .map(|f| partition_json(&ground, f))
                    .collect::<Vec<_>>()));
            }
            Ok(Outcome::new(text, json!({ "n": n, "factorizations": list })))
        }
        Command::History { file, partition } => {
            let doc = inputs.factored_set(file)?;
            let p = doc.resolve(partition)?;
            let h = structure::history(&doc.factored, &p)?;
            Ok(Outcome::new(
                format!("h({partition}) = {}\n", render_subset(&doc, h)),
                json!({ "partition": partition, "history": subset_names(&doc, h) }),
            ))
        }
        Command::Orth {
            file,
            a,
            b,
            given,
            event,
        } => {
            let doc = inputs.factored_set(file)?;
            let (pa, pb) = (doc.resolve(a)?, doc.resolve(b)?);
            let (holds, condition) = match (given, event) {
                (Some(c), _) => (
                    structure::cond_orthogonal(&doc.factored, &pa, &pb, &doc.resolve(c)?)?,
                    json!({ "partition": c }),
                ),
                (None, Some(e)) => {
                    let set = doc.event(e)?;
                    (
                        structure::cond_orthogonal_given_subset(&doc.factored, &pa, &pb, &set)?,
                        json!({ "event": set.iter().map(|s| doc.ground.name(s)).collect::<Vec<_>>() }),
                    )
                }
                (None, None) => (structure::orthogonal(&doc.factored, &pa, &pb)?, Value::Null),
            };
            let word = if holds { "orthogonal" } else { "not orthogonal" };
            Ok(Outcome::new(
                format!("{word}\n"),
                json!({ "a": a, "b": b, "given": condition, "orthogonal": holds }),
            )
            .negative(!holds))
        }
        Command::Before {
            file,
            a,
            b,
            given_event,
        } => {
            let doc = inputs.factored_set(file)?;
            let (pa, pb) = (doc.resolve(a)?, doc.resolve(b)?);
            match given_event {
                Some(e) => {
                    let set = doc.event(e)?;
                    let holds = structure::cond_before(&doc.factored, &pa, &pb, &set)?;
                    let word = if holds { "before" } else { "not before" };
                    Ok(Outcome::new(
                        format!("{word} (given {})\n", format::render_event(&doc.ground, &set)),
                        json!({ "a": a, "b": b, "before": holds }),
                    )
                    .negative(!holds))
                }
                None => {
                    let v = structure::before(&doc.factored, &pa, &pb)?;
                    let word = match v.relation {
                        TemporalRelation::EqualHistory => "before (equal histories)",
                        TemporalRelation::StrictlyBefore => "strictly before",
                        TemporalRelation::StrictlyAfter => "not before (strictly after)",
                        TemporalRelation::Incomparable => "not before (incomparable)",
                    };
                    Ok(Outcome::new(
                        format!(
                            "{word}\nh({a}) = {}\nh({b}) = {}\n",
                            render_subset(&doc, v.histories.0),
                            render_subset(&doc, v.histories.1)
                        ),
                        json!({
                            "a": a,
                            "b": b,
                            "relation": v.relation,
                            "histories": [subset_names(&doc, v.histories.0), subset_names(&doc, v.histories.1)],
                        }),
                    )
                    .negative(!v.is_before()))
                }
            }
        }
        Command::Poly { file, event, factor } => {
            let doc = inputs.factored_set(file)?;
            let set = doc.event(event)?;
            let q = polynomial::characteristic(&doc.factored, &set);
            let mut text = format!("Q = {}\n", q.render(&doc.factor_names));
            let mut results = json!({ "polynomial": q.render(&doc.factor_names) });
            if *factor {
                let d = polynomial::irreducible_components(&doc.factored, &set)?;
                let mut parts = Vec::new();
                for (c, p) in d.components.iter().zip(&d.factors_of_q) {
                    text.push_str(&format!(
                        "{} : {}\n",
                        render_subset(&doc, *c),
                        p.render(&doc.factor_names)
                    ));
                    parts.push(json!({ "component": subset_names(&doc, *c), "factor": p.render(&doc.factor_names) }));
                }
                results["irreducible"] = json!(parts);
            }
            Ok(Outcome::new(text, results))
        }
        Command::Prob { file, dist, event } => {
            let doc = inputs.factored_set(file)?;
            let text = inputs.read(dist, ".dist")?;
            let p = format::parse_distribution(&text, dist, &doc)?;
            let set = doc.event(event)?;
            let value = probability::prob(&doc.factored, &p, &set)?;
            Ok(Outcome::new(
                format!("{value}\n"),
                json!({ "probability": value.to_string() }),
            ))
        }
        Command::FtVerify { max_size, seed, trials } => {
            if *max_size > 5 {
                return Err(Error::Invalid(
                    "exhaustive verification is supported up to size 5".into(),
                ));
            }
            let summary = ft_verify(*max_size, *seed, *trials)?;
            let text =
                format!(
                "checked {} triples over {} factorizations (sizes 1..={max_size}, {trials} trials each, seed {seed})\n\
                 orthogonal: {} (sampled independence failures: {})\n\
                 not orthogonal: {} (polynomial identity held: {}; witnesses found: {}; witness none found: {})\n\
                 {}\n",
                summary.triples,
                summary.factorizations,
                summary.orthogonal,
                summary.soundness_failures,
                summary.dependent,
                summary.identity_mismatches,
                summary.dependent - summary.witness_misses,
                summary.witness_misses,
                if summary.agrees() { "all verdicts agree" } else { "DISAGREEMENT" },
            );
            let mut o = Outcome::new(text, serde_json::to_value(&summary).expect("json")).negative(!summary.agrees());
            o.seed = Some(*seed);
            Ok(o)
        }
        Command::CheckModel { model, db } => {
            let database = inputs.database(db)?;
            let doc = inputs.factored_set(model)?;
            let m = doc.model(database.omega())?;
            let report = inference::models_database(&m, &database)?;
            let mut text = String::new();
            for c in &report.checks {
                let want = if c.required_orthogonal {
                    "orthogonal"
                } else {
                    "dependent"
                };
                let mark = if c.satisfied() { "ok" } else { "FAIL" };
                text.push_str(&format!("{mark:4} {want:10} {}\n", c.triple));
            }
            let ok = report.models();
            text.push_str(if ok {
                "models the database\n"
            } else {
                "does not model the database\n"
            });
            Ok(Outcome::new(text, json!({ "models": ok, "checks": report.checks })).negative(!ok))
        }
        Command::Infer {
            db,
            before,
            bounds,
            non_strict,
            show_model,
        } => {
            let database = inputs.database(db)?;
            let query = if *non_strict {
                TemporalQuery::Before
            } else {
                TemporalQuery::StrictlyBefore
            };
            let b = bounds.bounds();
            let inf = inference::infer_temporal(&database, &before[0], &before[1], query, &b)?;
            let mut text = format!("{inf}\n");
            let (kind, model, count) = match &inf.verdict {
                InferenceVerdict::Refuted { model } => ("refuted", Some(model), None),
                InferenceVerdict::HoldsUpToBound { models } => ("holds-up-to-bound", None, Some(*models)),
                InferenceVerdict::Vacuous => ("vacuous", None, None),
            };
            if let (Some(m), true) = (model, *show_model) {
                text.push_str(&model_text(m, database.omega()));
            }
            let mut o = Outcome::new(
                text,
                json!({
                    "query": query,
                    "a": before[0],
                    "b": before[1],
                    "verdict": kind,
                    "qualifier": b.qualifier(),
                    "models_checked": count,
                    "labelings_examined": inf.labelings,
                    "truncated": inf.truncated,
                    "counterexample": model.map(|m| model_json(m, database.omega())),
                }),
            )
            .negative(model.is_some());
            o.bounds = Some(serde_json::to_value(&b).expect("json"));
            Ok(o)
        }
        Command::Consistent { db, bounds, show_model } => {
            let database = inputs.database(db)?;
            let b = bounds.bounds();
            let c = inference::is_consistent_up_to_bound(&database, &b)?;
            let mut text = format!("{c}\n");
            if let (Some(m), true) = (&c.witness, *show_model) {
                text.push_str(&model_text(m, database.omega()));
            }
            let mut o = Outcome::new(
                text,
                json!({
                    "consistent": c.consistent(),
                    "qualifier": b.qualifier(),
                    "truncated": c.truncated,
                    "witness": c.witness.as_ref().map(|m| model_json(m, database.omega())),
                }),
            )
            .negative(!c.consistent());
            o.bounds = Some(serde_json::to_value(&b).expect("json"));
            Ok(o)
        }
        Command::Observes {
            file,
            agent,
            event,
            partition,
            world,
            budget,
        } => {
            let doc = inputs.factored_set(file)?;
            let a = doc.resolve(agent)?;
            let w = doc.resolve(world)?;
            if let Some(e) = event {
                let set = doc.event(e)?;
                let holds = agency::observes_event(&doc.factored, &a, &set, &w)?;
                let word = if holds { "observes" } else { "does not observe" };
                return Ok(Outcome::new(format!("{word}\n"), json!({ "observes": holds })).negative(!holds));
            }
            let x = doc.resolve(partition.as_deref().expect("clap requires one"))?;
            match agency::observes_partition(&doc.factored, &a, &x, &w, *budget)? {
                Observation::Yes(parts) => {
                    let mut text = "observes\n".to_string();
                    for (i, p) in parts.iter().enumerate() {
                        text.push_str(&format!("A{i} = {}\n", format::render_partition(&doc.ground, p)));
                    }
                    let witness: Vec<Value> = parts.iter().map(|p| partition_json(&doc.ground, p)).collect();
                    Ok(Outcome::new(text, json!({ "observes": "yes", "witness": witness })))
                }
                Observation::No => {
                    Ok(Outcome::new("does not observe\n".into(), json!({ "observes": "no" })).negative(true))
                }
                Observation::Inconclusive => Ok(Outcome::new(
                    format!("inconclusive (budget of {budget} exhausted)\n"),
                    json!({ "observes": "inconclusive", "budget": budget }),
                )
                .negative(true)),
            }
        }
        Command::Counterfactable { file, x, relative_to } => {
            let doc = inputs.factored_set(file)?;
            let px = doc.resolve(x)?;
            let holds = match relative_to {
                Some(w) => agency::relatively_counterfactable(&doc.factored, &px, &doc.resolve(w)?)?,
                None => agency::counterfactable(&doc.factored, &px)?,
            };
            let word = if holds {
                "counterfactable"
            } else {
                "not counterfactable"
            };
            Ok(Outcome::new(format!("{word}\n"), json!({ "counterfactable": holds })).negative(!holds))
        }
    }
}

/// Totals over every triple of every factorization checked by `ft-verify`.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct FtSummary {
    pub factorizations: usize,
    pub triples: usize,
    pub orthogonal: usize,
    pub dependent: usize,
    /// Orthogonal triples where a sampled distribution was not independent.
    pub soundness_failures: usize,
    /// Triples where the polynomial identity disagreed with orthogonality.
    pub identity_mismatches: usize,
    /// Dependent triples where no sampled distribution violated independence.
    pub witness_misses: usize,
}

impl FtSummary {
    pub fn agrees(&self) -> bool {
        self.soundness_failures == 0 && self.identity_mismatches == 0
    }
}

/// Per-triple seed, spread so neighbouring triples get unrelated streams.
pub fn triple_seed(seed: u64, index: u64) -> u64 {
    seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn ft_verify(max_size: usize, seed: u64, trials: usize) -> Result<FtSummary> {
    let mut total = FtSummary::default();
    let mut offset = 0u64;
    for n in 1..=max_size {
        let parts: Vec<Partition> = all_partitions(n).collect();
        let count = parts.len();
        for fs in enumerate_factorizations(n) {
            total.factorizations += 1;
            let per: Vec<Result<FtSummary>> = (0..count * count * count)
                .into_par_iter()
                .map(|i| {
                    let (x, y, z) = (
                        &parts[i / (count * count)],
                        &parts[(i / count) % count],
                        &parts[i % count],
                    );
                    let r = probability::fundamental_theorem_check(
                        &fs,
                        x,
                        y,
                        z,
                        trials,
                        triple_seed(seed, offset + i as u64),
                    )?;
                    let mut s = FtSummary {
                        triples: 1,
                        ..Default::default()
                    };
                    if r.orthogonal {
                        s.orthogonal = 1;
                        s.soundness_failures = usize::from(r.independent_trials != r.trials);
                    } else {
                        s.dependent = 1;
                        s.witness_misses = usize::from(r.witness.is_none());
                    }
                    s.identity_mismatches = usize::from(r.orthogonal != r.polynomial_identity);
                    Ok(s)
                })
                .collect();
            for s in per {
                let s = s?;
                total.triples += s.triples;
                total.orthogonal += s.orthogonal;
                total.dependent += s.dependent;
                total.soundness_failures += s.soundness_failures;
                total.identity_mismatches += s.identity_mismatches;
                total.witness_misses += s.witness_misses;
            }
            offset += (count * count * count) as u64;
        }
    }
    Ok(total)
}
