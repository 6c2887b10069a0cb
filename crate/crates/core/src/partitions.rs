//! Ground sets, element sets and (sub)partitions in canonical form.
//!
//! A [`Partition`] stores one block id per ground element, with elements
//! outside its domain marked absent. Block ids follow the restricted-growth
//! convention: the block holding the smallest domain element is 0, and new ids
//! appear in increasing order of their smallest member. This makes structural
//! equality coincide with equality of partitions, so partitions can be hashed,
//! sorted and deduplicated directly.
//!
//! Refinement follows the "finer is larger" convention: `x.refines(&y)` means
//! every pair of elements sharing a block of `x` also shares a block of `y`.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};

const OUTSIDE: u32 = u32::MAX;

/// A ground set of `n` elements, identified by index, with optional display labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    size: usize,
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(size: usize) -> Self {
        GroundSet { size, labels: None }
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut seen = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if let Some(prev) = seen.insert(label.as_str(), i) {
                return Err(Error::Invalid(format!(
                    "label `{label}` used for elements {prev} and {i}"
                )));
            }
        }
        Ok(GroundSet {
            size: labels.len(),
            labels: Some(labels),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of element `s`: its label if declared, else its index.
    pub fn name(&self, s: usize) -> String {
        match &self.labels {
            Some(labels) => labels[s].clone(),
            None => s.to_string(),
        }
    }

    /// Resolves a token to an element index. Labels take precedence; decimal
    /// indices are accepted only when no labels are declared.
    pub fn lookup(&self, token: &str) -> Option<usize> {
        match &self.labels {
            Some(labels) => labels.iter().position(|l| l == token),
            None => token.parse::<usize>().ok().filter(|&s| s < self.size),
        }
    }
}

/// A subset of a ground set, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    size: usize,
    words: Vec<u64>,
}

impl ElementSet {
    pub fn empty(size: usize) -> Self {
        ElementSet {
            size,
            words: vec![0; size.div_ceil(64)],
        }
    }

    pub fn full(size: usize) -> Self {
        let mut set = Self::empty(size);
        for s in 0..size {
            set.insert(s);
        }
        set
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(size: usize, items: I) -> Result<Self> {
        let mut set = Self::empty(size);
        for s in items {
            if s >= size {
                return Err(Error::OutOfRange {
                    element: s,
                    block: 0,
                    size,
                });
            }
            set.insert(s);
        }
        Ok(set)
    }

    pub fn ground_size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn contains(&self, s: usize) -> bool {
        s < self.size && self.words[s / 64] >> (s % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, s: usize) {
        debug_assert!(s < self.size);
        self.words[s / 64] |= 1 << (s % 64);
    }

    pub fn remove(&mut self, s: usize) {
        if s < self.size {
            self.words[s / 64] &= !(1 << (s % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.size
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + bit)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.size != other.size {
            return Err(Error::GroundMismatch {
                left: self.size,
                right: other.size,
            });
        }
        Ok(())
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(ElementSet {
            size: self.size,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        })
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(ElementSet {
            size: self.size,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        })
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(ElementSet {
            size: self.size,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        })
    }

    pub fn complement(&self) -> Self {
        let mut out = ElementSet::full(self.size);
        for (w, &mine) in out.words.iter_mut().zip(&self.words) {
            *w &= !mine;
        }
        out
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.size == other.size && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Which of the two extreme partitions to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Special {
    Discrete,
    Indiscrete,
}

/// A partition of a subset (the domain) of a ground set `{0, .., n-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    block_of: Vec<u32>,
    blocks: u32,
}

impl Partition {
    /// Builds the canonical partition whose blocks are exactly `blocks`.
    pub fn from_blocks<B: AsRef<[usize]>>(size: usize, blocks: &[B]) -> Result<Self> {
        let mut assign = vec![None; size];
        for (b, block) in blocks.iter().enumerate() {
            let block = block.as_ref();
            if block.is_empty() {
                return Err(Error::EmptyBlock { block: b });
            }
            for &s in block {
                if s >= size {
                    return Err(Error::OutOfRange {
                        element: s,
                        block: b,
                        size,
                    });
                }
                if assign[s].is_some() {
                    return Err(Error::Overlap { element: s, block: b });
                }
                assign[s] = Some(b);
            }
        }
        Ok(Self::from_keys(&assign))
    }

    /// Canonical partition grouping elements with equal keys; `None` marks
    /// elements outside the domain.
    pub fn from_keys<K: Eq + Hash + Clone>(keys: &[Option<K>]) -> Self {
        let mut ids: HashMap<K, u32> = HashMap::new();
        let mut block_of = Vec::with_capacity(keys.len());
        for key in keys {
            match key {
                None => block_of.push(OUTSIDE),
                Some(k) => {
                    let next = ids.len() as u32;
                    block_of.push(*ids.entry(k.clone()).or_insert(next));
                }
            }
        }
        Partition {
            blocks: ids.len() as u32,
            block_of,
        }
    }

    /// Canonical full partition from a total labeling of the ground set.
    pub fn from_labeling<K: Eq + Hash + Clone>(keys: &[K]) -> Self {
        let keys: Vec<Option<K>> = keys.iter().cloned().map(Some).collect();
        Self::from_keys(&keys)
    }

    pub fn special(kind: Special, size: usize) -> Self {
        match kind {
            Special::Discrete => Self::discrete(size),
            Special::Indiscrete => Self::indiscrete(size),
        }
    }

    pub fn discrete(size: usize) -> Self {
        Partition {
            block_of: (0..size as u32).collect(),
            blocks: size as u32,
        }
    }

    pub fn indiscrete(size: usize) -> Self {
        Partition {
            block_of: vec![0; size],
            blocks: (size > 0) as u32,
        }
    }

    /// The indiscrete subpartition `{E}` of a domain `E` (empty if `E` is empty).
    pub fn indiscrete_on(domain: &ElementSet) -> Self {
        let mut block_of = vec![OUTSIDE; domain.ground_size()];
        for s in domain.iter() {
            block_of[s] = 0;
        }
        Partition {
            block_of,
            blocks: !domain.is_empty() as u32,
        }
    }

    pub fn ground_size(&self) -> usize {
        self.block_of.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks as usize
    }

    #[inline]
    pub fn block_of(&self, s: usize) -> Option<usize> {
        match self.block_of.get(s) {
            Some(&b) if b != OUTSIDE => Some(b as usize),
            _ => None,
        }
    }

    /// Block ids indexed by element, `None` outside the domain.
    pub fn assignment(&self) -> Vec<Option<usize>> {
        (0..self.ground_size()).map(|s| self.block_of(s)).collect()
    }

    #[inline]
    pub fn in_domain(&self, s: usize) -> bool {
        self.block_of(s).is_some()
    }

    /// True when both elements lie in the domain and share a block.
    #[inline]
    pub fn same_block(&self, s: usize, t: usize) -> bool {
        let b = self.block_of[s];
        b != OUTSIDE && b == self.block_of[t]
    }

    pub fn domain(&self) -> ElementSet {
        let mut set = ElementSet::empty(self.ground_size());
        for (s, &b) in self.block_of.iter().enumerate() {
            if b != OUTSIDE {
                set.insert(s);
            }
        }
        set
    }

    pub fn domain_size(&self) -> usize {
        self.block_of.iter().filter(|&&b| b != OUTSIDE).count()
    }

    pub fn is_full(&self) -> bool {
        self.block_of.iter().all(|&b| b != OUTSIDE)
    }

    /// At most one block (the indiscrete partition of its domain).
    pub fn is_indiscrete(&self) -> bool {
        self.blocks <= 1
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks as usize == self.domain_size()
    }

    /// Blocks as sorted element lists, in block-id order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (s, &b) in self.block_of.iter().enumerate() {
            if b != OUTSIDE {
                out[b as usize].push(s);
            }
        }
        out
    }

    pub fn block_sets(&self) -> Vec<ElementSet> {
        let mut out = vec![ElementSet::empty(self.ground_size()); self.num_blocks()];
        for (s, &b) in self.block_of.iter().enumerate() {
            if b != OUTSIDE {
                out[b as usize].insert(s);
            }
        }
        out
    }

    fn check_comparable(&self, other: &Self) -> Result<()> {
        if self.ground_size() != other.ground_size() {
            return Err(Error::GroundMismatch {
                left: self.ground_size(),
                right: other.ground_size(),
            });
        }
        let same_domain = self
            .block_of
            .iter()
            .zip(&other.block_of)
            .all(|(&a, &b)| (a == OUTSIDE) == (b == OUTSIDE));
        if !same_domain {
            return Err(Error::DomainMismatch);
        }
        Ok(())
    }

    /// `self ≥ other`: `self` is finer than (or equal to) `other`.
    pub fn refines(&self, other: &Self) -> Result<bool> {
        self.check_comparable(other)?;
        let mut image = vec![OUTSIDE; self.num_blocks()];
        for (&mine, &theirs) in self.block_of.iter().zip(&other.block_of) {
            if mine == OUTSIDE {
                continue;
            }
            let slot = &mut image[mine as usize];
            if *slot == OUTSIDE {
                *slot = theirs;
            } else if *slot != theirs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Common refinement of two partitions with the same domain.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_comparable(other)?;
        let keys: Vec<Option<(u32, u32)>> = self
            .block_of
            .iter()
            .zip(&other.block_of)
            .map(|(&a, &b)| (a != OUTSIDE).then_some((a, b)))
            .collect();
        Ok(Self::from_keys(&keys))
    }

    /// Common refinement of a collection of partitions of `domain`; the empty
    /// collection yields the indiscrete partition of `domain`.
    pub fn join_all<'a, I>(domain: &ElementSet, parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Partition>,
    {
        let mut acc = Self::indiscrete_on(domain);
        for p in parts {
            acc = acc.join(p)?;
        }
        Ok(acc)
    }

    /// Restriction `X|E`: blocks intersected with `E`, empty pieces dropped.
    pub fn restrict(&self, subset: &ElementSet) -> Result<Self> {
        if subset.ground_size() != self.ground_size() {
            return Err(Error::GroundMismatch {
                left: self.ground_size(),
                right: subset.ground_size(),
            });
        }
        if !subset.is_subset(&self.domain()) {
            return Err(Error::NotSubset);
        }
        let keys: Vec<Option<u32>> = (0..self.ground_size())
            .map(|s| subset.contains(s).then_some(self.block_of[s]))
            .collect();
        Ok(Self::from_keys(&keys))
    }

    /// Restriction to `E ∩ dom(self)`, for callers that intersect implicitly.
    pub fn restrict_meet(&self, subset: &ElementSet) -> Result<Self> {
        let meet = self.domain().intersection(subset)?;
        self.restrict(&meet)
    }

    /// Relabels elements: element `s` of the result sits where `perm[s]` sat.
    /// Used to transport partitions along bijections of the ground set.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let keys: Vec<Option<u32>> = perm
            .iter()
            .map(|&src| {
                let b = self.block_of[src];
                (b != OUTSIDE).then_some(b)
            })
            .collect();
        Self::from_keys(&keys)
    }

    /// Every partition coarser than (or equal to) `self`, on the same domain.
    pub fn coarsenings(&self) -> Vec<Partition> {
        all_rgs(self.num_blocks())
            .map(|merge| {
                let keys: Vec<Option<u32>> = self
                    .block_of
                    .iter()
                    .map(|&b| (b != OUTSIDE).then(|| merge[b as usize]))
                    .collect();
                Self::from_keys(&keys)
            })
            .collect()
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, block) in self.blocks().iter().enumerate() {
            if i > 0 {
                write!(f, " |")?;
            }
            for s in block {
                write!(f, " {s}")?;
            }
        }
        write!(f, " }}")
    }
}

/// Restricted growth strings of length `n`, in lexicographic order.
fn all_rgs(n: usize) -> impl Iterator<Item = Vec<u32>> {
    let mut current: Option<Vec<u32>> = Some(vec![0; n]);
    std::iter::from_fn(move || {
        let out = current.clone()?;
        // advance: find rightmost position that can grow
        let next = {
            let mut rgs = out.clone();
            let mut maxes = vec![0u32; n];
            let mut m = 0;
            for i in 0..n {
                maxes[i] = m;
                m = m.max(rgs[i]);
            }
            let mut advanced = false;
            for i in (1..n).rev() {
                if rgs[i] <= maxes[i] {
                    rgs[i] += 1;
                    for v in rgs.iter_mut().skip(i + 1) {
                        *v = 0;
                    }
                    advanced = true;
                    break;
                }
            }
            advanced.then_some(rgs)
        };
        current = next;
        Some(out)
    })
}

/// Every partition of the ground set `{0, .., n-1}`, in restricted-growth order.
pub fn all_partitions(size: usize) -> impl Iterator<Item = Partition> {
    all_rgs(size).map(move |rgs| {
        let blocks = if size == 0 { 0 } else { rgs.iter().max().unwrap() + 1 };
        Partition { block_of: rgs, blocks }
    })
}

/// Bell number `B(n)`, saturating at `u128::MAX`.
pub fn bell(n: usize) -> u128 {
    // Bell triangle
    let mut row: Vec<u128> = vec![1];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &v in &row {
            let last = *next.last().unwrap();
            next.push(last.saturating_add(v));
        }
        row = next;
    }
    row[0]
}
