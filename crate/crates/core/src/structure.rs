//! Generation, history, orthogonality and time on a finite factored set.
//!
//! All predicates accept subpartitions: a [`Partition`] whose domain is a
//! proper subset of the ground set is treated as a partition of that subset.
//! Histories of full partitions use the per-factor test `b ∈ h(X) ⟺ ¬(B∖{b} ⊢ X)`,
//! which relies on generating sets being closed under supersets. That closure
//! fails for proper subpartitions, so those fall back to intersecting every
//! generating subset of the basis.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::error::{Error, Result};
pub use crate::factored_set::FactorSubset;
use crate::factored_set::FactoredSet;
use crate::partitions::{ElementSet, Partition};

fn check_ground(fs: &FactoredSet, x: &Partition) -> Result<()> {
    if x.ground_size() != fs.size() {
        return Err(Error::GroundMismatch {
            left: fs.size(),
            right: x.ground_size(),
        });
    }
    Ok(())
}

fn check_event(fs: &FactoredSet, e: &ElementSet) -> Result<()> {
    if e.ground_size() != fs.size() {
        return Err(Error::GroundMismatch {
            left: fs.size(),
            right: e.ground_size(),
        });
    }
    Ok(())
}

/// `C ⊢ X`: for all `s, t ∈ dom(X)`, `χ_C(s, t)` lies in `[s]_X`.
pub fn generates(fs: &FactoredSet, c: FactorSubset, x: &Partition) -> Result<bool> {
    check_ground(fs, x)?;
    Ok(generates_unchecked(fs, c, x, &x.domain().to_vec()))
}

fn generates_unchecked(fs: &FactoredSet, c: FactorSubset, x: &Partition, domain: &[usize]) -> bool {
    domain
        .iter()
        .all(|&s| domain.iter().all(|&t| x.same_block(fs.chimera_pair(c, s, t), s)))
}

/// The smallest subset of the basis generating `X`.
pub fn history(fs: &FactoredSet, x: &Partition) -> Result<FactorSubset> {
    check_ground(fs, x)?;
    let domain = x.domain().to_vec();
    let basis = fs.basis();
    if x.is_full() {
        let h = (0..fs.dim())
            .filter(|&b| {
                let rest = basis.difference(FactorSubset::singleton(b));
                !generates_unchecked(fs, rest, x, &domain)
            })
            .fold(FactorSubset::EMPTY, |acc, b| acc.union(FactorSubset::singleton(b)));
        Ok(h)
    } else {
        Ok(intersect_generating(fs, x, &domain))
    }
}

/// History computed by scanning every subset of the basis, for any domain.
pub fn history_exhaustive(fs: &FactoredSet, x: &Partition) -> Result<FactorSubset> {
    check_ground(fs, x)?;
    Ok(intersect_generating(fs, x, &x.domain().to_vec()))
}

fn intersect_generating(fs: &FactoredSet, x: &Partition, domain: &[usize]) -> FactorSubset {
    let h = FactorSubset::all(fs.dim())
        .filter(|&c| generates_unchecked(fs, c, x, domain))
        .fold(fs.basis(), FactorSubset::intersection);
    // generating sets of a subpartition are closed under intersection
    debug_assert!(generates_unchecked(fs, h, x, domain));
    h
}

/// `X ⊥ Y`: disjoint histories.
pub fn orthogonal(fs: &FactoredSet, x: &Partition, y: &Partition) -> Result<bool> {
    Ok(history(fs, x)?.is_disjoint(history(fs, y)?))
}

/// How two histories compare.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TemporalRelation {
    /// `h(X) = h(Y)`: each is before the other.
    EqualHistory,
    /// `h(X) ⊂ h(Y)`.
    StrictlyBefore,
    /// `h(Y) ⊂ h(X)`.
    StrictlyAfter,
    Incomparable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TemporalVerdict {
    pub relation: TemporalRelation,
    pub histories: (FactorSubset, FactorSubset),
}

impl TemporalVerdict {
    pub fn from_histories(hx: FactorSubset, hy: FactorSubset) -> Self {
        let relation = if hx == hy {
            TemporalRelation::EqualHistory
        } else if hx.is_subset(hy) {
            TemporalRelation::StrictlyBefore
        } else if hy.is_subset(hx) {
            TemporalRelation::StrictlyAfter
        } else {
            TemporalRelation::Incomparable
        };
        TemporalVerdict {
            relation,
            histories: (hx, hy),
        }
    }

    /// `X ≤ Y`.
    pub fn is_before(&self) -> bool {
        matches!(
            self.relation,
            TemporalRelation::EqualHistory | TemporalRelation::StrictlyBefore
        )
    }

    /// `X < Y`.
    pub fn is_strictly_before(&self) -> bool {
        self.relation == TemporalRelation::StrictlyBefore
    }
}

pub fn before(fs: &FactoredSet, x: &Partition, y: &Partition) -> Result<TemporalVerdict> {
    Ok(TemporalVerdict::from_histories(history(fs, x)?, history(fs, y)?))
}

/// `X ⊥ Y | E`: the restrictions to `E` have disjoint histories.
pub fn cond_orthogonal_given_subset(fs: &FactoredSet, x: &Partition, y: &Partition, e: &ElementSet) -> Result<bool> {
    check_event(fs, e)?;
    orthogonal(fs, &x.restrict(e)?, &y.restrict(e)?)
}

/// `X ⊥ Y | Z`: orthogonal given every block of `Z`.
pub fn cond_orthogonal(fs: &FactoredSet, x: &Partition, y: &Partition, z: &Partition) -> Result<bool> {
    check_ground(fs, z)?;
    for block in z.block_sets() {
        if !cond_orthogonal_given_subset(fs, x, y, &block)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `X ≤ Y | E`: `h(X|E) ⊆ h(Y|E)`.
pub fn cond_before(fs: &FactoredSet, x: &Partition, y: &Partition, e: &ElementSet) -> Result<bool> {
    check_event(fs, e)?;
    Ok(history(fs, &x.restrict(e)?)?.is_subset(history(fs, &y.restrict(e)?)?))
}

/// History cache for one factored set. Concurrent readers are fine; racing
/// writers store identical values.
pub struct HistoryMemo<'a> {
    fs: &'a FactoredSet,
    cache: RwLock<HashMap<Partition, FactorSubset>>,
}

impl<'a> HistoryMemo<'a> {
    pub fn new(fs: &'a FactoredSet) -> Self {
        HistoryMemo {
            fs,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn factored_set(&self) -> &'a FactoredSet {
        self.fs
    }

    pub fn history(&self, x: &Partition) -> Result<FactorSubset> {
        if let Some(&h) = self.cache.read().expect("history cache poisoned").get(x) {
            return Ok(h);
        }
        let h = history(self.fs, x)?;
        self.cache.write().expect("history cache poisoned").insert(x.clone(), h);
        Ok(h)
    }

    pub fn cond_orthogonal(&self, x: &Partition, y: &Partition, z: &Partition) -> Result<bool> {
        check_ground(self.fs, z)?;
        for block in z.block_sets() {
            let hx = self.history(&x.restrict(&block)?)?;
            let hy = self.history(&y.restrict(&block)?)?;
            if !hx.is_disjoint(hy) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
