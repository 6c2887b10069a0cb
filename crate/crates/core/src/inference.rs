//! Orthogonality databases over an observation space, factored-set models
//! of them, and bounded search for temporal relations that hold in every
//! model.
//!
//! The search never decides the unbounded question. Every verdict carries the
//! size bound it was computed under.
//!
//! Models are enumerated up to isomorphism. All factorizations of an
//! `n`-element set with the same factor sizes are related by a permutation of
//! the set, so one product factorization per size list suffices. Labelings of
//! that product are then taken up to its automorphism group (permutations of
//! each axis, and swaps of equal-size axes), keeping the lexicographically
//! least member of each orbit.

use std::collections::HashSet;
use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use indexmap::IndexMap;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factored_set::{size_multisets, FactoredSet};
use crate::partitions::{bell, GroundSet, Partition};
use crate::structure::{self, HistoryMemo};

/// Name of the indiscrete partition of Ω in databases.
pub const INDISCRETE_NAME: &str = "_";
/// Name of the discrete partition of Ω in databases.
pub const DISCRETE_NAME: &str = "!";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Triple {
    pub a: String,
    pub b: String,
    pub given: String,
}

impl Triple {
    pub fn new(a: &str, b: &str, given: &str) -> Self {
        Triple {
            a: a.to_string(),
            b: b.to_string(),
            given: given.to_string(),
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} | {}", self.a, self.b, self.given)
    }
}

/// Asserted orthogonal triples `O` and asserted dependent triples `N` over
/// named partitions of Ω.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalityDatabase {
    omega: GroundSet,
    partitions: IndexMap<String, Partition>,
    orthogonal: Vec<Triple>,
    dependent: Vec<Triple>,
}

impl OrthogonalityDatabase {
    pub fn new(omega: GroundSet) -> Self {
        OrthogonalityDatabase {
            omega,
            partitions: IndexMap::new(),
            orthogonal: Vec::new(),
            dependent: Vec::new(),
        }
    }

    pub fn omega(&self) -> &GroundSet {
        &self.omega
    }

    pub fn partitions(&self) -> &IndexMap<String, Partition> {
        &self.partitions
    }

    pub fn orthogonal(&self) -> &[Triple] {
        &self.orthogonal
    }

    pub fn dependent(&self) -> &[Triple] {
        &self.dependent
    }

    pub fn declare(&mut self, name: &str, p: Partition) -> Result<()> {
        if name == INDISCRETE_NAME || name == DISCRETE_NAME {
            return Err(Error::Invalid(format!("`{name}` is reserved")));
        }
        if p.ground_size() != self.omega.size() {
            return Err(Error::GroundMismatch {
                left: self.omega.size(),
                right: p.ground_size(),
            });
        }
        if !p.is_full() {
            return Err(Error::Invalid(format!("partition `{name}` must cover Ω")));
        }
        if self.partitions.contains_key(name) {
            return Err(Error::Invalid(format!("partition `{name}` declared twice")));
        }
        self.partitions.insert(name.to_string(), p);
        Ok(())
    }

    pub fn resolve(&self, name: &str) -> Result<Partition> {
        match name {
            INDISCRETE_NAME => Ok(Partition::indiscrete(self.omega.size())),
            DISCRETE_NAME => Ok(Partition::discrete(self.omega.size())),
            _ => self
                .partitions
                .get(name)
                .cloned()
                .ok_or_else(|| Error::UnknownPartition(name.to_string())),
        }
    }

    fn check_triple(&self, t: &Triple) -> Result<()> {
        for name in [&t.a, &t.b, &t.given] {
            self.resolve(name)?;
        }
        Ok(())
    }

    pub fn add_orthogonal(&mut self, t: Triple) -> Result<()> {
        self.check_triple(&t)?;
        self.orthogonal.push(t);
        Ok(())
    }

    pub fn add_dependent(&mut self, t: Triple) -> Result<()> {
        self.check_triple(&t)?;
        self.dependent.push(t);
        Ok(())
    }

    /// Every triple with its required verdict (`true` for `O`), plus the
    /// distinct partitions the triples refer to by slot.
    fn requirements(&self) -> Result<(Vec<Requirement>, Vec<Partition>)> {
        let mut names: Vec<String> = Vec::new();
        let mut index = |name: &str| -> usize {
            match names.iter().position(|n| n == name) {
                Some(i) => i,
                None => {
                    names.push(name.to_string());
                    names.len() - 1
                }
            }
        };
        let mut reqs = Vec::new();
        for (list, orthogonal) in [(&self.orthogonal, true), (&self.dependent, false)] {
            for t in list {
                reqs.push(Requirement {
                    triple: t.clone(),
                    slots: [index(&t.a), index(&t.b), index(&t.given)],
                    orthogonal,
                });
            }
        }
        let parts = names.iter().map(|n| self.resolve(n)).collect::<Result<Vec<_>>>()?;
        Ok((reqs, parts))
    }

    /// Whether `O ∪ N` mentions every triple of partitions of Ω.
    pub fn is_complete(&self, cap: u128) -> Result<bool> {
        let count = bell(self.omega.size());
        if count > cap {
            return Err(Error::CapExceeded { needed: count, cap });
        }
        let mut seen = HashSet::new();
        for t in self.orthogonal.iter().chain(&self.dependent) {
            seen.insert((self.resolve(&t.a)?, self.resolve(&t.b)?, self.resolve(&t.given)?));
        }
        Ok(seen.len() as u128 == count * count * count)
    }
}

#[derive(Clone, Debug)]
struct Requirement {
    triple: Triple,
    slots: [usize; 3],
    orthogonal: bool,
}

/// A factored set with a total map from its elements into Ω.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    factored: FactoredSet,
    labeling: Vec<usize>,
}

impl Model {
    pub fn new(factored: FactoredSet, labeling: Vec<usize>, omega_size: usize) -> Result<Self> {
        if labeling.len() != factored.size() {
            return Err(Error::LabelingSize {
                got: labeling.len(),
                expected: factored.size(),
            });
        }
        if let Some(&label) = labeling.iter().find(|&&l| l >= omega_size) {
            return Err(Error::LabelOutOfRange {
                label,
                size: omega_size,
            });
        }
        Ok(Model { factored, labeling })
    }

    pub fn factored(&self) -> &FactoredSet {
        &self.factored
    }

    pub fn labeling(&self) -> &[usize] {
        &self.labeling
    }

    /// The same model with its set relabeled: new element `s` is old `perm[s]`.
    pub fn permuted(&self, perm: &[usize]) -> Model {
        Model {
            factored: self.factored.permuted(perm),
            labeling: perm.iter().map(|&old| self.labeling[old]).collect(),
        }
    }
}

/// `f⁻¹(X)`: preimages of the blocks of `X`, empty ones dropped.
pub fn pullback(model: &Model, x: &Partition) -> Partition {
    pullback_labeling(&model.labeling, x)
}

fn pullback_labeling(labeling: &[usize], x: &Partition) -> Partition {
    let keys: Vec<Option<usize>> = labeling.iter().map(|&w| x.block_of(w)).collect();
    Partition::from_keys(&keys)
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct TripleCheck {
    pub triple: Triple,
    /// `true` if the triple is in `O`, `false` if in `N`.
    pub required_orthogonal: bool,
    pub orthogonal_in_model: bool,
}

impl TripleCheck {
    pub fn satisfied(&self) -> bool {
        self.required_orthogonal == self.orthogonal_in_model
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ModelReport {
    pub checks: Vec<TripleCheck>,
}

impl ModelReport {
    pub fn models(&self) -> bool {
        self.checks.iter().all(TripleCheck::satisfied)
    }
}

/// Whether the model realizes every requirement of the database.
pub fn models_database(model: &Model, db: &OrthogonalityDatabase) -> Result<ModelReport> {
    let labels = db.omega.size();
    if let Some(&label) = model.labeling.iter().find(|&&l| l >= labels) {
        return Err(Error::LabelOutOfRange { label, size: labels });
    }
    let memo = HistoryMemo::new(&model.factored);
    let (reqs, parts) = db.requirements()?;
    let mut checks = Vec::new();
    for r in reqs {
        let pulled: Vec<Partition> = r.slots.iter().map(|&i| pullback(model, &parts[i])).collect();
        let orthogonal_in_model = memo.cond_orthogonal(&pulled[0], &pulled[1], &pulled[2])?;
        checks.push(TripleCheck {
            triple: r.triple,
            required_orthogonal: r.orthogonal,
            orthogonal_in_model,
        });
    }
    Ok(ModelReport { checks })
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SearchBounds {
    pub max_size: usize,
    pub max_dim: Option<usize>,
    pub surjective_only: bool,
    #[serde(skip)]
    pub time_budget: Option<Duration>,
}

impl SearchBounds {
    pub fn new(max_size: usize) -> Self {
        SearchBounds {
            max_size,
            max_dim: None,
            surjective_only: false,
            time_budget: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_size == 0 {
            return Err(Error::Invalid("max size must be at least 1".into()));
        }
        Ok(())
    }

    /// Human-readable qualifier naming the bounds.
    pub fn qualifier(&self) -> String {
        let mut s = format!("up to size {}", self.max_size);
        if let Some(d) = self.max_dim {
            s.push_str(&format!(", dimension at most {d}"));
        }
        if self.surjective_only {
            s.push_str(", surjective labelings only");
        }
        s
    }
}

/// One size list for one set size: a search unit.
struct Unit {
    radices: Vec<usize>,
    factored: FactoredSet,
    automorphisms: Vec<Vec<usize>>,
}

impl Unit {
    fn new(n: usize, radices: Vec<usize>) -> Unit {
        let factored = product_factored_set(n, &radices);
        let automorphisms = if radices.len() >= 2 {
            product_automorphisms(&radices)
        } else {
            Vec::new()
        };
        Unit {
            radices,
            factored,
            automorphisms,
        }
    }

    fn single_axis(&self) -> bool {
        self.radices.len() < 2
    }

    fn is_canonical(&self, f: &[usize]) -> bool {
        self.automorphisms.iter().all(|g| {
            for (s, &gs) in g.iter().enumerate() {
                match f[gs].cmp(&f[s]) {
                    std::cmp::Ordering::Less => return false,
                    std::cmp::Ordering::Greater => return true,
                    std::cmp::Ordering::Equal => {}
                }
            }
            true
        })
    }
}

/// The product of `{0..k_i-1}` with element `s` at coordinates `(s / stride_i) % k_i`.
fn product_factored_set(n: usize, radices: &[usize]) -> FactoredSet {
    if radices.is_empty() {
        return FactoredSet::trivial(n);
    }
    let mut stride = 1;
    let mut factors = Vec::new();
    for &k in radices {
        let labels: Vec<usize> = (0..n).map(|s| (s / stride) % k).collect();
        factors.push(Partition::from_labeling(&labels));
        stride *= k;
    }
    FactoredSet::validate(n, &factors).expect("products are factorizations")
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, acc: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                acc.push(i);
                rec(k, acc, used, out);
                acc.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(k, &mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Every non-identity permutation of the product set preserving its factors.
fn product_automorphisms(radices: &[usize]) -> Vec<Vec<usize>> {
    let d = radices.len();
    let n: usize = radices.iter().product();
    let strides: Vec<usize> = radices
        .iter()
        .scan(1, |acc, &k| {
            let s = *acc;
            *acc *= k;
            Some(s)
        })
        .collect();
    let axis_perms: Vec<Vec<usize>> = permutations(d)
        .into_iter()
        .filter(|t| (0..d).all(|i| radices[t[i]] == radices[i]))
        .collect();
    let per_axis: Vec<Vec<Vec<usize>>> = radices.iter().map(|&k| permutations(k)).collect();

    let mut out = Vec::new();
    let mut choice = vec![0usize; d];
    loop {
        for tau in &axis_perms {
            let g: Vec<usize> = (0..n)
                .map(|s| {
                    (0..d)
                        .map(|i| {
                            let c = (s / strides[tau[i]]) % radices[tau[i]];
                            per_axis[i][choice[i]][c] * strides[i]
                        })
                        .sum()
                })
                .collect();
            if g.iter().enumerate().any(|(s, &t)| s != t) {
                out.push(g);
            }
        }
        let mut i = 0;
        loop {
            if i == d {
                return out;
            }
            choice[i] += 1;
            if choice[i] < per_axis[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn units(bounds: &SearchBounds) -> Vec<(usize, Vec<usize>)> {
    (1..=bounds.max_size)
        .flat_map(|n| size_multisets(n).into_iter().map(move |r| (n, r)))
        .filter(|(_, r)| bounds.max_dim.is_none_or(|d| r.len() <= d))
        .collect()
}

/// Advance to the next labeling in lexicographic order; nondecreasing only
/// when `monotone`.
fn next_labeling(f: &mut [usize], m: usize, monotone: bool) -> bool {
    for i in (0..f.len()).rev() {
        if f[i] + 1 < m {
            f[i] += 1;
            if monotone {
                let v = f[i];
                f[i + 1..].iter_mut().for_each(|x| *x = v);
            } else {
                f[i + 1..].iter_mut().for_each(|x| *x = 0);
            }
            return true;
        }
    }
    false
}

struct UnitOutcome {
    models: u64,
    labelings: u64,
    hit: Option<Model>,
    collected: Vec<Model>,
    truncated: bool,
}

struct ScanOutcome {
    models: u64,
    labelings: u64,
    hit: Option<Model>,
    collected: Vec<Model>,
    truncated: bool,
}

type HitTest<'a> = dyn Fn(&[usize], &HistoryMemo) -> Result<bool> + Sync + 'a;

/// Walks every canonical model within bounds. Stops at the first model (in
/// canonical order) for which `is_hit` holds; later units abort early once an
/// earlier one has a hit, so the reported hit is deterministic.
fn scan(db: &OrthogonalityDatabase, bounds: &SearchBounds, collect_all: bool, is_hit: &HitTest) -> Result<ScanOutcome> {
    bounds.validate()?;
    let (reqs, parts) = db.requirements()?;
    let m = db.omega.size();
    let start = Instant::now();
    let out_of_time = AtomicBool::new(false);
    let first_hit_unit = AtomicUsize::new(usize::MAX);
    let work = units(bounds);

    let outcomes: Vec<Result<UnitOutcome>> = work
        .into_par_iter()
        .enumerate()
        .map(|(ui, (n, radices))| {
            let unit = Unit::new(n, radices);
            let memo = HistoryMemo::new(&unit.factored);
            let mut outcome = UnitOutcome {
                models: 0,
                labelings: 0,
                hit: None,
                collected: Vec::new(),
                truncated: false,
            };
            if m == 0 {
                return Ok(outcome);
            }
            let mut f = vec![0usize; n];
            let mut pulled: Vec<Option<Partition>> = vec![None; parts.len()];
            loop {
                if first_hit_unit.load(Ordering::Relaxed) < ui {
                    break;
                }
                if outcome.labelings.is_multiple_of(1024) {
                    if let Some(budget) = bounds.time_budget {
                        if start.elapsed() > budget {
                            out_of_time.store(true, Ordering::Relaxed);
                        }
                    }
                    if out_of_time.load(Ordering::Relaxed) {
                        outcome.truncated = true;
                        break;
                    }
                }
                let surjective_ok = !bounds.surjective_only || {
                    let mut seen = vec![false; m];
                    f.iter().for_each(|&w| seen[w] = true);
                    seen.iter().all(|&x| x)
                };
                if surjective_ok && (unit.single_axis() || unit.is_canonical(&f)) {
                    outcome.labelings += 1;
                    pulled.iter_mut().for_each(|p| *p = None);
                    let mut ok = true;
                    for r in &reqs {
                        for &i in &r.slots {
                            if pulled[i].is_none() {
                                pulled[i] = Some(pullback_labeling(&f, &parts[i]));
                            }
                        }
                        let [a, b, c] = r.slots.map(|i| pulled[i].as_ref().unwrap());
                        if memo.cond_orthogonal(a, b, c)? != r.orthogonal {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        outcome.models += 1;
                        let model = || Model {
                            factored: unit.factored.clone(),
                            labeling: f.clone(),
                        };
                        if collect_all {
                            outcome.collected.push(model());
                        }
                        if is_hit(&f, &memo)? {
                            outcome.hit = Some(model());
                            first_hit_unit.fetch_min(ui, Ordering::Relaxed);
                            break;
                        }
                    }
                }
                if !next_labeling(&mut f, m, unit.single_axis()) {
                    break;
                }
            }
            Ok(outcome)
        })
        .collect();

    let mut total = ScanOutcome {
        models: 0,
        labelings: 0,
        hit: None,
        collected: Vec::new(),
        truncated: false,
    };
    for o in outcomes {
        let o = o?;
        total.models += o.models;
        total.labelings += o.labelings;
        total.truncated |= o.truncated;
        total.collected.extend(o.collected);
        if total.hit.is_none() {
            total.hit = o.hit;
        }
    }
    Ok(total)
}

/// Every canonical model of the database within bounds, in canonical order.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub models: Vec<Model>,
    /// Canonical labelings examined.
    pub labelings: u64,
    /// The time budget ran out before the space was covered.
    pub truncated: bool,
}

pub fn search_models(db: &OrthogonalityDatabase, bounds: &SearchBounds) -> Result<SearchOutcome> {
    let s = scan(db, bounds, true, &|_, _| Ok(false))?;
    Ok(SearchOutcome {
        models: s.collected,
        labelings: s.labelings,
        truncated: s.truncated,
    })
}

#[derive(Clone, Debug)]
pub struct Consistency {
    pub witness: Option<Model>,
    pub bounds: SearchBounds,
    pub truncated: bool,
}

impl Consistency {
    pub fn consistent(&self) -> bool {
        self.witness.is_some()
    }
}

impl fmt::Display for Consistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            Some(m) => write!(
                f,
                "consistent (witness model of size {}, dimension {})",
                m.factored.size(),
                m.factored.dim()
            ),
            None => {
                write!(f, "no model found {}", self.bounds.qualifier())?;
                if self.truncated {
                    write!(f, "; search truncated by the time budget")?;
                }
                Ok(())
            }
        }
    }
}

pub fn is_consistent_up_to_bound(db: &OrthogonalityDatabase, bounds: &SearchBounds) -> Result<Consistency> {
    let s = scan(db, bounds, false, &|_, _| Ok(true))?;
    Ok(Consistency {
        witness: s.hit,
        bounds: bounds.clone(),
        truncated: s.truncated,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TemporalQuery {
    /// `h(f⁻¹X) ⊂ h(f⁻¹Y)` in every model.
    StrictlyBefore,
    /// `h(f⁻¹X) ⊆ h(f⁻¹Y)` in every model.
    Before,
}

impl TemporalQuery {
    fn name(self) -> &'static str {
        match self {
            TemporalQuery::StrictlyBefore => "strictly-before",
            TemporalQuery::Before => "before",
        }
    }
}

#[derive(Clone, Debug)]
pub enum InferenceVerdict {
    /// A model of the database in which the relation fails.
    Refuted { model: Model },
    /// The relation holds in all `models` models found within bounds.
    HoldsUpToBound { models: u64 },
    /// No model of the database exists within bounds.
    Vacuous,
}

#[derive(Clone, Debug)]
pub struct Inference {
    pub query: TemporalQuery,
    pub verdict: InferenceVerdict,
    pub bounds: SearchBounds,
    pub labelings: u64,
    pub truncated: bool,
}

impl fmt::Display for Inference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.bounds.qualifier();
        match &self.verdict {
            InferenceVerdict::Refuted { model } => write!(
                f,
                "refuted (counterexample model of size {}, dimension {})",
                model.factored.size(),
                model.factored.dim()
            )?,
            InferenceVerdict::HoldsUpToBound { models } => write!(
                f,
                "{} (holds for all models {q}; {models} models checked)",
                self.query.name()
            )?,
            InferenceVerdict::Vacuous => write!(f, "vacuous (no model of the database {q})")?,
        }
        if self.truncated {
            write!(f, "; search truncated by the time budget")?;
        }
        Ok(())
    }
}

/// Bounded check of `X <_D Y` (or the non-strict analogue).
pub fn infer_temporal(
    db: &OrthogonalityDatabase,
    x: &str,
    y: &str,
    query: TemporalQuery,
    bounds: &SearchBounds,
) -> Result<Inference> {
    let px = db.resolve(x)?;
    let py = db.resolve(y)?;
    let check = |labeling: &[usize], memo: &HistoryMemo| -> Result<bool> {
        let hx = memo.history(&pullback_labeling(labeling, &px))?;
        let hy = memo.history(&pullback_labeling(labeling, &py))?;
        let v = structure::TemporalVerdict::from_histories(hx, hy);
        Ok(match query {
            TemporalQuery::StrictlyBefore => !v.is_strictly_before(),
            TemporalQuery::Before => !v.is_before(),
        })
    };
    let s = scan(db, bounds, false, &check)?;
    let verdict = match s.hit {
        Some(model) => InferenceVerdict::Refuted { model },
        None if s.models == 0 => InferenceVerdict::Vacuous,
        None => InferenceVerdict::HoldsUpToBound { models: s.models },
    };
    Ok(Inference {
        query,
        verdict,
        bounds: bounds.clone(),
        labelings: s.labelings,
        truncated: s.truncated,
    })
}

pub fn infer_before(db: &OrthogonalityDatabase, x: &str, y: &str, bounds: &SearchBounds) -> Result<Inference> {
    infer_temporal(db, x, y, TemporalQuery::StrictlyBefore, bounds)
}
