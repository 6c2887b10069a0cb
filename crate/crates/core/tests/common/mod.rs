#![allow(dead_code)]

use factored_sets::format::{self, FactoredSetDoc};
use factored_sets::inference::OrthogonalityDatabase;
use factored_sets::{sample, ElementSet, FactorSubset, FactoredSet, Partition};
use rand::Rng;

pub fn data(name: &str) -> String {
    let path = format!("{}/examples-data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn ex1() -> FactoredSetDoc {
    format::parse_factored_set(&data("ex1.ffs"), "ex1.ffs").unwrap()
}

pub fn ex1_db() -> OrthogonalityDatabase {
    format::parse_database(&data("ex1.db"), "ex1.db").unwrap()
}

pub fn ex2_db() -> OrthogonalityDatabase {
    format::parse_database(&data("ex2.db"), "ex2.db").unwrap()
}

pub fn ex2_model() -> FactoredSetDoc {
    format::parse_factored_set(&data("ex2-model.ffs"), "ex2-model.ffs").unwrap()
}

/// Random coarsening of a partition: its blocks are merged by a random labeling.
pub fn coarsen<R: Rng>(rng: &mut R, p: &Partition) -> Partition {
    let k = p.num_blocks();
    if k == 0 {
        return p.clone();
    }
    let groups = rng.gen_range(1..=k);
    let merge: Vec<usize> = (0..k).map(|_| rng.gen_range(0..groups)).collect();
    let keys: Vec<Option<usize>> = p.assignment().iter().map(|b| b.map(|b| merge[b])).collect();
    Partition::from_keys(&keys)
}

/// Usually a coarsening of the join of a random factor subset, so that
/// orthogonality between draws is common. Indiscrete draws are retried a few
/// times since they satisfy most premises trivially.
pub fn structured_partition<R: Rng>(rng: &mut R, fs: &FactoredSet) -> Partition {
    let mut p = Partition::indiscrete(fs.size());
    for _ in 0..4 {
        p = if rng.gen_bool(0.2) {
            sample::partition(rng, fs.size())
        } else {
            let c = sample::factor_subset(rng, fs.dim());
            coarsen(rng, &fs.join_of(c))
        };
        if !p.is_indiscrete() {
            break;
        }
    }
    p
}

/// A nonempty product of block choices, one nonempty set of blocks per factor.
pub fn rectangle<R: Rng>(rng: &mut R, fs: &FactoredSet) -> ElementSet {
    let chosen: Vec<Vec<bool>> = fs
        .factors()
        .iter()
        .map(|f| {
            let k = f.num_blocks();
            let mut pick: Vec<bool> = (0..k).map(|_| rng.gen_bool(0.6)).collect();
            let forced = rng.gen_range(0..k);
            pick[forced] = true;
            pick
        })
        .collect();
    let mut e = ElementSet::empty(fs.size());
    for s in 0..fs.size() {
        if (0..fs.dim()).all(|b| chosen[b][fs.coordinate(s, b)]) {
            e.insert(s);
        }
    }
    e
}

/// History oracle independent of chimera functions: intersect every factor
/// subset whose common refinement refines `x` (full partitions only).
pub fn history_by_refinement(fs: &FactoredSet, x: &Partition) -> FactorSubset {
    FactorSubset::all(fs.dim())
        .filter(|&c| fs.join_of(c).refines(x).unwrap())
        .fold(fs.basis(), FactorSubset::intersection)
}

/// Subpartition version: refinement on the domain plus stability of the domain.
pub fn subpartition_history_by_refinement(fs: &FactoredSet, x: &Partition) -> FactorSubset {
    let e = x.domain();
    FactorSubset::all(fs.dim())
        .filter(|&c| fs.join_of(c).restrict(&e).unwrap().refines(x).unwrap() && fs.is_stable(c, &e))
        .fold(fs.basis(), FactorSubset::intersection)
}

/// Number of factorizations of an `n`-element set from the orbit count
/// `n! / (∏ k_i! · ∏ m_j!)` summed over factor-size lists.
pub fn closed_form_count(n: usize) -> u128 {
    fn lists(rest: usize, min: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 1 {
            out.push(acc.clone());
            return;
        }
        for d in min..=rest {
            if rest.is_multiple_of(d) {
                acc.push(d);
                lists(rest / d, d, acc, out);
                acc.pop();
            }
        }
    }
    if n <= 1 {
        return 1;
    }
    let fact = |k: usize| (1..=k as u128).product::<u128>();
    let mut out = Vec::new();
    lists(n, 2, &mut Vec::new(), &mut out);
    out.iter()
        .map(|ks| {
            let mut denom: u128 = ks.iter().map(|&k| fact(k)).product();
            let mut i = 0;
            while i < ks.len() {
                let j = ks[i..].iter().take_while(|&&k| k == ks[i]).count();
                denom *= fact(j);
                i += j;
            }
            fact(n) / denom
        })
        .sum()
}

/// Seed for instance `i` of a randomized check.
pub fn instance_seed(base: u64, i: usize) -> u64 {
    base.wrapping_mul(1_000_003).wrapping_add(i as u64)
}
