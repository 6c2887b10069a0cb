//! Factorizations of finite sets and chimera functions.
//!
//! A [`FactoredSet`] keeps its factors sorted by canonical form, so a subset
//! of the basis is a bitmask over that order ([`FactorSubset`]). Validation
//! builds a coordinate table (`s ↦ ([s]_b)_b`) together with its inverse,
//! which turns every chimera evaluation into a mixed-radix lookup.

use std::fmt;

use crate::error::{Error, Result};
use crate::partitions::{ElementSet, Partition};

/// A subset of the basis of a factored set, as a bitmask over its factors.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FactorSubset(u64);

impl FactorSubset {
    pub const EMPTY: FactorSubset = FactorSubset(0);

    pub fn from_bits(bits: u64) -> Self {
        FactorSubset(bits)
    }

    pub fn full(dim: usize) -> Self {
        assert!(dim <= 64, "at most 64 factors are supported");
        if dim == 64 {
            FactorSubset(u64::MAX)
        } else {
            FactorSubset((1u64 << dim) - 1)
        }
    }

    pub fn singleton(b: usize) -> Self {
        FactorSubset(1 << b)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(items: I) -> Self {
        FactorSubset(items.into_iter().fold(0, |acc, b| acc | 1 << b))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn contains(self, b: usize) -> bool {
        self.0 >> b & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Self) -> Self {
        FactorSubset(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        FactorSubset(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        FactorSubset(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: Self) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut w = self.0;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(b)
            }
        })
    }

    /// All subsets of the `dim`-element basis, in increasing bitmask order.
    pub fn all(dim: usize) -> impl Iterator<Item = FactorSubset> {
        assert!(dim < 64, "subset enumeration needs dim < 64");
        (0..1u64 << dim).map(FactorSubset)
    }
}

impl fmt::Debug for FactorSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite set together with a validated factorization.
#[derive(Clone, PartialEq, Eq)]
pub struct FactoredSet {
    size: usize,
    factors: Vec<Partition>,
    // offsets[s * dim + b] = [s]_b * stride_b
    offsets: Vec<usize>,
    inverse: Vec<u32>,
}

impl fmt::Debug for FactoredSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FactoredSet")
            .field("size", &self.size)
            .field("factors", &self.factors)
            .finish()
    }
}

impl FactoredSet {
    /// Checks that `candidates` (a set: duplicates collapse) factorizes the
    /// ground set `{0, .., size-1}` and builds the chimera tables.
    pub fn validate(size: usize, candidates: &[Partition]) -> Result<Self> {
        for (index, c) in candidates.iter().enumerate() {
            if c.ground_size() != size {
                return Err(Error::GroundMismatch {
                    left: size,
                    right: c.ground_size(),
                });
            }
            if !c.is_full() {
                return Err(Error::PartialFactor { index });
            }
            if c.num_blocks() == 1 {
                return Err(Error::TrivialFactor { index });
            }
        }
        let mut factors = candidates.to_vec();
        factors.sort();
        factors.dedup();
        let product = factors
            .iter()
            .try_fold(1usize, |acc, b| acc.checked_mul(b.num_blocks()));
        match product {
            Some(p) if p == size => {}
            other => {
                return Err(Error::CardinalityMismatch {
                    product: other.unwrap_or(usize::MAX),
                    size,
                })
            }
        }
        Self::build(size, factors)
    }

    /// Builds tables for sorted, deduplicated, nontrivial factors whose block
    /// counts multiply to `size`.
    fn build(size: usize, factors: Vec<Partition>) -> Result<Self> {
        let dim = factors.len();
        let mut strides = Vec::with_capacity(dim);
        let mut stride = 1usize;
        for b in &factors {
            strides.push(stride);
            stride *= b.num_blocks().max(1);
        }
        let mut offsets = vec![0usize; size * dim];
        let mut inverse = vec![u32::MAX; size];
        for s in 0..size {
            let mut index = 0;
            for (b, factor) in factors.iter().enumerate() {
                let off = factor.block_of(s).expect("full factor") * strides[b];
                offsets[s * dim + b] = off;
                index += off;
            }
            if inverse[index] != u32::MAX {
                return Err(Error::CoordinateCollision {
                    first: inverse[index] as usize,
                    second: s,
                });
            }
            inverse[index] = s as u32;
        }
        Ok(FactoredSet {
            size,
            factors,
            offsets,
            inverse,
        })
    }

    /// The unique trivial factorization: `{Dis_S}`, or `{}` when `|S| = 1`.
    pub fn trivial(size: usize) -> Self {
        let factors = if size == 1 {
            Vec::new()
        } else {
            vec![Partition::discrete(size)]
        };
        Self::build(size, factors).expect("trivial factorization is valid")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Partition] {
        &self.factors
    }

    pub fn factor(&self, b: usize) -> &Partition {
        &self.factors[b]
    }

    pub fn basis(&self) -> FactorSubset {
        FactorSubset::full(self.dim())
    }

    pub fn index_of_factor(&self, p: &Partition) -> Option<usize> {
        self.factors.binary_search(p).ok()
    }

    /// Coordinate `[s]_b` as a block index of factor `b`.
    #[inline]
    pub fn coordinate(&self, s: usize, b: usize) -> usize {
        self.factors[b].block_of(s).expect("full factor")
    }

    /// The element whose block in each factor `b` matches that of `g[b]`.
    pub fn chimera(&self, g: &[usize]) -> usize {
        assert_eq!(g.len(), self.dim(), "chimera input must be total on the basis");
        let dim = self.dim();
        let index: usize = g.iter().enumerate().map(|(b, &s)| self.offsets[s * dim + b]).sum();
        self.inverse[index] as usize
    }

    /// `χ_C(s, t)`: agrees with `s` on factors in `C`, with `t` elsewhere.
    #[inline]
    pub fn chimera_pair(&self, c: FactorSubset, s: usize, t: usize) -> usize {
        let dim = self.dim();
        let (rs, rt) = (
            &self.offsets[s * dim..s * dim + dim],
            &self.offsets[t * dim..t * dim + dim],
        );
        let mut index = 0;
        for b in 0..dim {
            index += if c.contains(b) { rs[b] } else { rt[b] };
        }
        self.inverse[index] as usize
    }

    /// `χ_C(T, R) = { χ_C(t, r) | t ∈ T, r ∈ R }`.
    pub fn chimera_sets(&self, c: FactorSubset, left: &ElementSet, right: &ElementSet) -> ElementSet {
        let mut out = ElementSet::empty(self.size);
        let rs: Vec<usize> = right.iter().collect();
        for t in left.iter() {
            for &r in &rs {
                out.insert(self.chimera_pair(c, t, r));
            }
        }
        out
    }

    /// True when `χ_C(E, E) = E` (equivalently `⊆ E`).
    pub fn is_stable(&self, c: FactorSubset, event: &ElementSet) -> bool {
        let members: Vec<usize> = event.iter().collect();
        members
            .iter()
            .all(|&s| members.iter().all(|&t| event.contains(self.chimera_pair(c, s, t))))
    }

    /// Common refinement `∨C` of a set of factors, as a partition of `S`.
    pub fn join_of(&self, c: FactorSubset) -> Partition {
        let dim = self.dim();
        let keys: Vec<usize> = (0..self.size)
            .map(|s| c.iter().map(|b| self.offsets[s * dim + b]).sum())
            .collect();
        Partition::from_labeling(&keys)
    }

    /// Relabels elements along `perm` (new element `s` is old `perm[s]`).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let factors: Vec<Partition> = self.factors.iter().map(|b| b.permuted(perm)).collect();
        FactoredSet::validate(self.size, &factors).expect("relabeling preserves factorizations")
    }
}

/// Unordered factor cardinality lists (nondecreasing, each ≥ 2) with product `n`.
pub fn size_multisets(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, min: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 1 {
            out.push(acc.clone());
            return;
        }
        for d in min..=rest {
            if rest.is_multiple_of(d) {
                acc.push(d);
                rec(rest / d, d, acc, out);
                acc.pop();
            }
        }
    }
    match n {
        0 => vec![vec![0]],
        1 => vec![vec![]],
        _ => {
            let mut out = Vec::new();
            rec(n, 2, &mut Vec::new(), &mut out);
            out
        }
    }
}

/// Backtracking generator of balanced factor tuples for one cardinality list.
///
/// Factors are built one after another as restricted growth strings. Each
/// new factor must split every cell of the previous factors' common
/// refinement evenly across its blocks; equal-size neighbours must increase
/// lexicographically so each set of factors is produced once.
struct Balanced {
    n: usize,
    sizes: Vec<usize>,
    vals: Vec<u32>,
    // running max of the current factor before each position, -1 at start
    maxv: Vec<i32>,
    // whether the current factor still equals the previous one before each position
    tied: Vec<bool>,
    counts: Vec<Vec<u32>>,
    cells: Vec<Vec<u32>>,
    quota: Vec<u32>,
    pos: usize,
    next_from: u32,
    done: bool,
}

impl Balanced {
    fn new(n: usize, sizes: Vec<usize>) -> Self {
        let m = sizes.len();
        let mut quota = Vec::with_capacity(m);
        let mut counts = Vec::with_capacity(m);
        let mut cell_size = n;
        let mut cell_count = 1;
        for &k in &sizes {
            quota.push((cell_size / k) as u32);
            counts.push(vec![0u32; cell_count * k]);
            cell_size /= k;
            cell_count *= k;
        }
        let total = m * n;
        Balanced {
            n,
            vals: vec![0; total],
            maxv: vec![-1; total + 1],
            tied: vec![false; total + 1],
            cells: vec![vec![0; n]; m + 1],
            counts,
            quota,
            sizes,
            pos: 0,
            next_from: 0,
            done: total == 0,
        }
    }

    fn level_start(&mut self, p: usize) {
        let j = p / self.n;
        self.maxv[p] = -1;
        self.tied[p] = j > 0 && self.sizes[j] == self.sizes[j - 1];
    }

    /// Smallest admissible value ≥ `from` at position `pos`.
    fn candidate(&self, from: u32) -> Option<u32> {
        let p = self.pos;
        let (j, i) = (p / self.n, p % self.n);
        let k = self.sizes[j] as u32;
        let limit = ((self.maxv[p] + 1) as u32).min(k - 1);
        let mut lo = from;
        if self.tied[p] {
            lo = lo.max(self.vals[p - self.n]);
        }
        let cell = self.cells[j][i] as usize * k as usize;
        (lo..=limit).find(|&v| self.counts[j][cell + v as usize] < self.quota[j])
    }

    fn place(&mut self, v: u32) {
        let p = self.pos;
        let (j, i) = (p / self.n, p % self.n);
        let k = self.sizes[j];
        self.vals[p] = v;
        self.counts[j][self.cells[j][i] as usize * k + v as usize] += 1;
        if i + 1 < self.n {
            self.maxv[p + 1] = self.maxv[p].max(v as i32);
            self.tied[p + 1] = self.tied[p] && v == self.vals[p - self.n];
        } else {
            for e in 0..self.n {
                self.cells[j + 1][e] = self.cells[j][e] * k as u32 + self.vals[j * self.n + e];
            }
        }
        self.pos += 1;
    }

    fn unplace(&mut self) {
        self.pos -= 1;
        let p = self.pos;
        let (j, i) = (p / self.n, p % self.n);
        let v = self.vals[p];
        self.counts[j][self.cells[j][i] as usize * self.sizes[j] + v as usize] -= 1;
        self.next_from = v + 1;
    }

    /// Advances to the next complete tuple; returns false when exhausted.
    fn advance(&mut self) -> bool {
        let total = self.vals.len();
        if self.done {
            return false;
        }
        if self.pos == total {
            self.unplace();
        }
        loop {
            if self.pos.is_multiple_of(self.n) && self.next_from == 0 {
                self.level_start(self.pos);
            }
            match self.candidate(self.next_from) {
                Some(v) => {
                    self.place(v);
                    self.next_from = 0;
                    if self.pos == total {
                        let last = (self.sizes.len() - 1) * self.n;
                        if self.sizes.len() > 1 && self.tied_full(last) {
                            self.unplace();
                            continue;
                        }
                        return true;
                    }
                }
                None => {
                    if self.pos == 0 {
                        self.done = true;
                        return false;
                    }
                    self.unplace();
                }
            }
        }
    }

    fn tied_full(&self, start: usize) -> bool {
        let j = start / self.n;
        self.sizes[j] == self.sizes[j - 1] && self.vals[start..start + self.n] == self.vals[start - self.n..start]
    }

    fn factors(&self) -> Vec<Partition> {
        self.vals
            .chunks(self.n)
            .map(|rgs| {
                let keys: Vec<u32> = rgs.to_vec();
                Partition::from_labeling(&keys)
            })
            .collect()
    }
}

/// Every factorization of `{0, .., n-1}`, each exactly once.
///
/// Order: cardinality lists in lexicographic order (see [`size_multisets`]),
/// then factor tuples in lexicographic order of their restricted growth
/// strings.
pub fn enumerate_factorizations(n: usize) -> impl Iterator<Item = FactoredSet> {
    let mut lists = size_multisets(n).into_iter();
    let mut current: Option<Balanced> = None;
    let mut degenerate_pending = n <= 1;
    std::iter::from_fn(move || {
        if degenerate_pending {
            degenerate_pending = false;
            return Some(FactoredSet::trivial(n));
        }
        if n <= 1 {
            return None;
        }
        loop {
            if let Some(gen) = current.as_mut() {
                if gen.advance() {
                    let fs =
                        FactoredSet::validate(n, &gen.factors()).expect("balanced factor tuples are factorizations");
                    return Some(fs);
                }
            }
            let sizes = lists.next()?;
            current = Some(Balanced::new(n, sizes));
        }
    })
}

/// `|Fact(n)|`, computed by running the enumeration without building sets.
pub fn count_factorizations(n: usize) -> u64 {
    if n <= 1 {
        return 1;
    }
    size_multisets(n)
        .into_iter()
        .map(|sizes| {
            let mut gen = Balanced::new(n, sizes);
            let mut count = 0u64;
            while gen.advance() {
                count += 1;
            }
            count
        })
        .sum()
}

/// Parallel variant of [`count_factorizations`], split by cardinality list.
pub fn count_factorizations_parallel(n: usize) -> u64 {
    use rayon::prelude::*;
    if n <= 1 {
        return 1;
    }
    size_multisets(n)
        .into_par_iter()
        .map(|sizes| {
            let mut gen = Balanced::new(n, sizes);
            let mut count = 0u64;
            while gen.advance() {
                count += 1;
            }
            count
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, blocks: &[&[usize]]) -> Partition {
        Partition::from_blocks(n, blocks).unwrap()
    }

    /// Two-bit strings: X = first bit, V = bits equal.
    fn example_one() -> FactoredSet {
        let x = p(4, &[&[0, 1], &[2, 3]]);
        let v = p(4, &[&[0, 3], &[1, 2]]);
        FactoredSet::validate(4, &[x, v]).unwrap()
    }

    #[test]
    fn validate_examples() {
        let fs = example_one();
        assert_eq!(fs.dim(), 2);
        let dup = FactoredSet::validate(4, &[p(4, &[&[0, 1], &[2, 3]]), p(4, &[&[0, 1], &[2, 3]])]);
        assert_eq!(dup.unwrap_err(), Error::CardinalityMismatch { product: 2, size: 4 });
        let six = FactoredSet::validate(
            6,
            &[p(6, &[&[0, 1], &[2, 3], &[4, 5]]), p(6, &[&[0, 2, 4], &[1, 3, 5]])],
        )
        .unwrap();
        assert_eq!(six.dim(), 2);
    }

    #[test]
    fn validate_rejects_bad_candidates() {
        assert_eq!(
            FactoredSet::validate(4, &[Partition::indiscrete(4)]).unwrap_err(),
            Error::TrivialFactor { index: 0 }
        );
        let err = FactoredSet::validate(4, &[p(4, &[&[0, 1], &[2, 3]]), p(4, &[&[0, 2], &[1], &[3]])]).unwrap_err();
        assert!(matches!(err, Error::CardinalityMismatch { product: 6, .. }));
        // both factors have two blocks but fail to separate 0 and 1
        let err = FactoredSet::validate(4, &[p(4, &[&[0, 1], &[2, 3]]), p(4, &[&[0, 1, 2], &[3]])]).unwrap_err();
        assert_eq!(err, Error::CoordinateCollision { first: 0, second: 1 });
    }

    #[test]
    fn trivial_factorizations() {
        assert_eq!(FactoredSet::trivial(3).factors(), &[Partition::discrete(3)]);
        assert_eq!(FactoredSet::trivial(1).dim(), 0);
        let empty = FactoredSet::trivial(0);
        assert_eq!(empty.dim(), 1);
        assert_eq!(empty.factor(0).num_blocks(), 0);
        assert!(FactoredSet::validate(0, &[]).is_err());
        assert!(FactoredSet::validate(1, &[]).is_ok());
    }

    #[test]
    fn chimera_examples() {
        let fs = example_one();
        let x = fs.index_of_factor(&p(4, &[&[0, 1], &[2, 3]])).unwrap();
        let mut g = vec![0; 2];
        g[x] = 3;
        g[1 - x] = 1;
        assert_eq!(fs.chimera(&g), 2);
        for s in 0..4 {
            assert_eq!(fs.chimera(&[s, s]), s);
        }
        assert_eq!(fs.chimera_pair(FactorSubset::singleton(x), 3, 1), 2);
        let one = FactoredSet::trivial(1);
        assert_eq!(one.chimera(&[]), 0);
    }

    #[test]
    fn enumerates_the_four_factorizations_of_four() {
        let all: Vec<_> = enumerate_factorizations(4).collect();
        assert_eq!(all.len(), 4);
        let expected = [
            vec![Partition::discrete(4)],
            vec![p(4, &[&[0, 1], &[2, 3]]), p(4, &[&[0, 2], &[1, 3]])],
            vec![p(4, &[&[0, 1], &[2, 3]]), p(4, &[&[0, 3], &[1, 2]])],
            vec![p(4, &[&[0, 2], &[1, 3]]), p(4, &[&[0, 3], &[1, 2]])],
        ];
        for e in expected {
            let fs = FactoredSet::validate(4, &e).unwrap();
            assert!(all.contains(&fs), "missing {e:?}");
        }
    }

    #[test]
    fn small_counts() {
        let expected = [1u64, 1, 1, 1, 4, 1, 61, 1];
        for (n, &c) in expected.iter().enumerate() {
            assert_eq!(count_factorizations(n), c, "n = {n}");
            assert_eq!(enumerate_factorizations(n).count() as u64, c, "n = {n}");
        }
    }

    #[test]
    fn multisets() {
        assert_eq!(
            size_multisets(12),
            vec![vec![2, 2, 3], vec![2, 6], vec![3, 4], vec![12]]
        );
        assert_eq!(size_multisets(7), vec![vec![7]]);
        assert_eq!(size_multisets(1), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn factor_subset_algebra() {
        let c = FactorSubset::from_indices([0, 2]);
        let d = FactorSubset::from_indices([1, 2]);
        assert_eq!(c.union(d), FactorSubset::full(3));
        assert_eq!(c.intersection(d), FactorSubset::singleton(2));
        assert!(FactorSubset::singleton(2).is_proper_subset(c));
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(FactorSubset::all(3).count(), 8);
    }

    #[test]
    fn enumeration_has_no_duplicates_and_revalidates() {
        for n in 2..=8 {
            let mut seen = std::collections::HashSet::new();
            for fs in enumerate_factorizations(n) {
                let again = FactoredSet::validate(n, fs.factors()).unwrap();
                assert_eq!(again, fs);
                assert!(seen.insert(fs.factors().to_vec()), "duplicate for n={n}");
            }
        }
    }

    #[test]
    fn dimension_is_bounded_by_prime_factor_count() {
        for (n, primes) in [(4, 2), (6, 2), (8, 3), (9, 2), (10, 2)] {
            for fs in enumerate_factorizations(n) {
                assert!((1..=primes).contains(&fs.dim()), "n={n} dim={}", fs.dim());
            }
        }
    }

    #[test]
    fn chimera_is_the_unique_element_agreeing_with_each_choice() {
        for fs in enumerate_factorizations(8) {
            let dim = fs.dim();
            // every function from the basis to the set
            for code in 0..8usize.pow(dim as u32) {
                let g: Vec<usize> = (0..dim).map(|b| (code / 8usize.pow(b as u32)) % 8).collect();
                let s = fs.chimera(&g);
                let matching: Vec<usize> = (0..8)
                    .filter(|&t| (0..dim).all(|b| fs.factor(b).same_block(t, g[b])))
                    .collect();
                assert_eq!(matching, vec![s]);
            }
        }
    }
}
