//! Observation and counterfactability predicates for agents modelled as
//! partitions of a factored set.

use crate::error::{Error, Result};
use crate::factored_set::FactoredSet;
use crate::partitions::{bell, ElementSet, Partition};
use crate::structure;

/// Default cap on candidate checks plus tuple evaluations in [`observes_partition`].
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// `{E, S∖E}`, or the indiscrete partition when `E` is empty or everything.
pub fn event_partition(e: &ElementSet) -> Partition {
    let n = e.ground_size();
    if e.is_empty() || e.is_full() {
        return Partition::indiscrete(n);
    }
    let keys: Vec<bool> = (0..n).map(|s| e.contains(s)).collect();
    Partition::from_labeling(&keys)
}

/// `A` observes `E` with respect to `W`: `A ⊥ X_E`, and `A ⊥ W` given `S∖E`.
pub fn observes_event(fs: &FactoredSet, a: &Partition, e: &ElementSet, w: &Partition) -> Result<bool> {
    if e.ground_size() != fs.size() {
        return Err(Error::GroundMismatch {
            left: fs.size(),
            right: e.ground_size(),
        });
    }
    Ok(structure::orthogonal(fs, a, &event_partition(e))?
        && structure::cond_orthogonal_given_subset(fs, a, w, &e.complement())?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Observation {
    /// One partition per block of `X`, in block order, joining to `A`.
    Yes(Vec<Partition>),
    No,
    /// The budget ran out before every candidate tuple was tried.
    Inconclusive,
}

/// `A` observes `X` with respect to `W`: `A ⊥ X`, and there are `A_i` with
/// common refinement `A` such that `A_i ⊥ W` given `S∖x_i`.
///
/// A common refinement equal to `A` forces every `A_i` to be a coarsening of
/// `A`, so the search runs over tuples of coarsenings and is exhaustive
/// within budget. The lexicographically first witness tuple is returned.
pub fn observes_partition(
    fs: &FactoredSet,
    a: &Partition,
    x: &Partition,
    w: &Partition,
    budget: u64,
) -> Result<Observation> {
    if !structure::orthogonal(fs, a, x)? {
        return Ok(Observation::No);
    }
    let blocks = x.block_sets();
    let coarse_count = bell(a.num_blocks());
    if coarse_count.saturating_mul(blocks.len() as u128) > budget as u128 {
        return Ok(Observation::Inconclusive);
    }
    let mut spent = coarse_count as u64 * blocks.len() as u64;
    let coarsenings = a.coarsenings();
    let mut candidates: Vec<Vec<&Partition>> = Vec::with_capacity(blocks.len());
    for xi in &blocks {
        let rest = xi.complement();
        let mut ok = Vec::new();
        for c in &coarsenings {
            if structure::cond_orthogonal_given_subset(fs, c, w, &rest)? {
                ok.push(c);
            }
        }
        if ok.is_empty() {
            return Ok(Observation::No);
        }
        candidates.push(ok);
    }

    // depth-first over tuples; joins of prefixes are kept on a stack
    let domain = ElementSet::full(fs.size());
    let k = candidates.len();
    let mut choice = vec![0usize; k];
    let mut joins: Vec<Partition> = Vec::with_capacity(k + 1);
    joins.push(Partition::indiscrete_on(&domain));
    let mut depth = 0;
    loop {
        if depth == k {
            spent += 1;
            if joins[k] == *a {
                return Ok(Observation::Yes(
                    (0..k).map(|i| candidates[i][choice[i]].clone()).collect(),
                ));
            }
            if spent > budget {
                return Ok(Observation::Inconclusive);
            }
            depth -= 1;
            joins.pop();
            choice[depth] += 1;
            continue;
        }
        if choice[depth] < candidates[depth].len() {
            let next = joins[depth].join(candidates[depth][choice[depth]])?;
            joins.push(next);
            depth += 1;
            if depth < k {
                choice[depth] = 0;
            }
        } else {
            if depth == 0 {
                return Ok(Observation::No);
            }
            depth -= 1;
            joins.pop();
            choice[depth] += 1;
        }
    }
}

/// `X` equals the common refinement of the factors in its history.
pub fn counterfactable(fs: &FactoredSet, x: &Partition) -> Result<bool> {
    let h = structure::history(fs, x)?;
    Ok(fs.join_of(h) == *x)
}

/// `∨h(X) ⊥ W` given `X`.
pub fn relatively_counterfactable(fs: &FactoredSet, x: &Partition, w: &Partition) -> Result<bool> {
    let h = structure::history(fs, x)?;
    structure::cond_orthogonal(fs, &fs.join_of(h), w, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::all_partitions;

    fn ex1() -> (FactoredSet, Partition, Partition, Partition) {
        let x = Partition::from_blocks(4, &[[0, 1], [2, 3]]).unwrap();
        let v = Partition::from_blocks(4, &[[0, 3], [1, 2]]).unwrap();
        let y = Partition::from_blocks(4, &[[0, 2], [1, 3]]).unwrap();
        let fs = FactoredSet::validate(4, &[x.clone(), v.clone()]).unwrap();
        (fs, x, v, y)
    }

    #[test]
    fn event_partitions() {
        assert_eq!(event_partition(&ElementSet::empty(3)), Partition::indiscrete(3));
        assert_eq!(event_partition(&ElementSet::full(3)), Partition::indiscrete(3));
        let e = ElementSet::from_indices(3, [1]).unwrap();
        assert_eq!(
            event_partition(&e),
            Partition::from_blocks(3, &[vec![0, 2], vec![1]]).unwrap()
        );
    }

    #[test]
    fn trivial_observations() {
        let (fs, x, v, y) = ex1();
        let ind = Partition::indiscrete(4);
        for w in [&x, &v, &y] {
            for a in [&x, &v, &y, &ind] {
                assert!(observes_event(&fs, a, &ElementSet::full(4), w).unwrap());
            }
            for e in x.block_sets().iter().chain(&y.block_sets()) {
                assert!(observes_event(&fs, &ind, e, w).unwrap());
            }
        }
    }

    #[test]
    fn observation_fails_on_shared_history() {
        let (fs, x, v, y) = ex1();
        let v0 = ElementSet::from_indices(4, [0, 3]).unwrap();
        assert!(!observes_event(&fs, &x, &v0, &y).unwrap());
        // with respect to V itself the condition on v1 is vacuous
        assert!(observes_event(&fs, &x, &v0, &v).unwrap());
    }

    #[test]
    fn degenerate_events() {
        // both give X_E = Ind, but only S makes the second condition vacuous;
        // the empty event leaves A ⊥ W given S
        let (fs, ..) = ex1();
        for a in all_partitions(4) {
            for w in all_partitions(4) {
                assert!(observes_event(&fs, &a, &ElementSet::full(4), &w).unwrap());
                assert_eq!(
                    observes_event(&fs, &a, &ElementSet::empty(4), &w).unwrap(),
                    structure::orthogonal(&fs, &a, &w).unwrap()
                );
            }
        }
    }

    #[test]
    fn partition_observation_cases() {
        let (fs, x, v, y) = ex1();
        let ind = Partition::indiscrete(4);
        assert_eq!(
            observes_partition(&fs, &x, &ind, &y, DEFAULT_BUDGET).unwrap(),
            Observation::Yes(vec![x.clone()])
        );
        assert_eq!(
            observes_partition(&fs, &ind, &v, &y, DEFAULT_BUDGET).unwrap(),
            Observation::Yes(vec![ind.clone(), ind.clone()])
        );
        assert_eq!(
            observes_partition(&fs, &v, &v, &y, DEFAULT_BUDGET).unwrap(),
            Observation::No
        );
        assert_eq!(
            observes_partition(&fs, &x, &v, &y, 1).unwrap(),
            Observation::Inconclusive
        );
        // with respect to V any coarsening works; the first witness starts with Ind
        assert_eq!(
            observes_partition(&fs, &x, &v, &v, DEFAULT_BUDGET).unwrap(),
            Observation::Yes(vec![ind.clone(), x.clone()])
        );
        // with respect to Y, every A_i must be indiscrete, which cannot join to X
        assert_eq!(
            observes_partition(&fs, &x, &v, &y, DEFAULT_BUDGET).unwrap(),
            Observation::No
        );
    }

    #[test]
    fn witnesses_join_to_the_agent() {
        let (fs, ..) = ex1();
        for a in all_partitions(4) {
            for x in all_partitions(4) {
                for w in all_partitions(4) {
                    if let Observation::Yes(parts) = observes_partition(&fs, &a, &x, &w, DEFAULT_BUDGET).unwrap() {
                        let joined = Partition::join_all(&ElementSet::full(4), parts.iter()).unwrap();
                        assert_eq!(joined, a);
                        for (p, blk) in parts.iter().zip(x.block_sets()) {
                            assert!(structure::cond_orthogonal_given_subset(&fs, p, &w, &blk.complement()).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn counterfactability() {
        let (fs, x, v, y) = ex1();
        assert!(counterfactable(&fs, &x).unwrap());
        assert!(counterfactable(&fs, &v).unwrap());
        assert!(!counterfactable(&fs, &y).unwrap());
        assert!(counterfactable(&fs, &Partition::indiscrete(4)).unwrap());
        for p in all_partitions(4) {
            assert!(relatively_counterfactable(&fs, &p, &p).unwrap());
            for w in all_partitions(4) {
                if counterfactable(&fs, &p).unwrap() {
                    assert!(relatively_counterfactable(&fs, &p, &w).unwrap());
                }
            }
        }
        assert!(!relatively_counterfactable(&fs, &y, &x).unwrap());
    }
}
