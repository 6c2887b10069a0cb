//! Random generators for factored sets, partitions and events.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::factored_set::{size_multisets, FactorSubset, FactoredSet};
use crate::partitions::{ElementSet, Partition};

/// A factorization of `{0..n-1}`: a random size list, laid out as a product
/// and then relabeled by a random permutation.
pub fn factored_set<R: Rng>(rng: &mut R, n: usize) -> FactoredSet {
    if n <= 1 {
        return FactoredSet::trivial(n);
    }
    let lists = size_multisets(n);
    let radices = lists.choose(rng).expect("n ≥ 2 has a size list");
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut stride = 1;
    let factors: Vec<Partition> = radices
        .iter()
        .map(|&k| {
            let labels: Vec<usize> = perm.iter().map(|&s| (s / stride) % k).collect();
            stride *= k;
            Partition::from_labeling(&labels)
        })
        .collect();
    FactoredSet::validate(n, &factors).expect("relabeled products are factorizations")
}

/// A factored set of size at most `max_size` with at least two factors.
pub fn factored_set_with_structure<R: Rng>(rng: &mut R, max_size: usize) -> FactoredSet {
    let sizes: Vec<usize> = (4..=max_size)
        .filter(|&n| size_multisets(n).iter().any(|l| l.len() >= 2))
        .collect();
    let n = *sizes.choose(rng).expect("max_size ≥ 4");
    loop {
        let fs = factored_set(rng, n);
        if fs.dim() >= 2 {
            return fs;
        }
    }
}

/// A partition with a random number of blocks, each element placed uniformly.
pub fn partition<R: Rng>(rng: &mut R, n: usize) -> Partition {
    if n == 0 {
        return Partition::indiscrete(0);
    }
    let k = rng.gen_range(1..=n);
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    Partition::from_labeling(&labels)
}

pub fn element_set<R: Rng>(rng: &mut R, n: usize) -> ElementSet {
    let mut e = ElementSet::empty(n);
    for s in 0..n {
        if rng.gen_bool(0.5) {
            e.insert(s);
        }
    }
    e
}

pub fn nonempty_element_set<R: Rng>(rng: &mut R, n: usize) -> ElementSet {
    assert!(n > 0);
    loop {
        let e = element_set(rng, n);
        if !e.is_empty() {
            return e;
        }
    }
}

pub fn factor_subset<R: Rng>(rng: &mut R, dim: usize) -> FactorSubset {
    FactorSubset::from_indices((0..dim).filter(|_| rng.gen_bool(0.5)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 0..=12 {
            let fs = factored_set(&mut rng, n);
            assert_eq!(fs.size(), n);
            let p = partition(&mut rng, n);
            assert_eq!(p.ground_size(), n);
            assert!(p.is_full());
        }
        for _ in 0..20 {
            assert!(factored_set_with_structure(&mut rng, 8).dim() >= 2);
        }
    }
}
