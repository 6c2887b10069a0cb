//! Product distributions on a factored set and the check that conditional
//! orthogonality coincides with conditional independence.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::factored_set::FactoredSet;
use crate::partitions::{ElementSet, Partition};
use crate::polynomial::{self, Var};
use crate::structure;

/// Upper end of the integer range used for random factor weights.
pub const DEFAULT_WEIGHT_RANGE: u32 = 97;

/// One weight vector per factor, indexed by block. Each vector is
/// nonnegative and sums to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredDistribution {
    weights: Vec<Vec<BigRational>>,
}

impl FactoredDistribution {
    pub fn new(fs: &FactoredSet, weights: Vec<Vec<BigRational>>) -> Result<Self> {
        if weights.len() != fs.dim() {
            return Err(Error::Invalid(format!(
                "expected weights for {} factors, got {}",
                fs.dim(),
                weights.len()
            )));
        }
        for (b, w) in weights.iter().enumerate() {
            let blocks = fs.factor(b).num_blocks();
            if w.len() != blocks {
                return Err(Error::InvalidWeights {
                    factor: b,
                    reason: format!("expected {blocks} weights, got {}", w.len()),
                });
            }
            if w.iter().any(|x| x.is_negative()) {
                return Err(Error::InvalidWeights {
                    factor: b,
                    reason: "negative weight".into(),
                });
            }
            let total: BigRational = w.iter().sum();
            if !total.is_one() {
                return Err(Error::InvalidWeights {
                    factor: b,
                    reason: format!("weights sum to {total}"),
                });
            }
        }
        Ok(FactoredDistribution { weights })
    }

    pub fn uniform(fs: &FactoredSet) -> Self {
        let weights = fs
            .factors()
            .iter()
            .map(|f| {
                let k = f.num_blocks();
                vec![BigRational::new(BigInt::one(), BigInt::from(k)); k]
            })
            .collect();
        FactoredDistribution { weights }
    }

    /// Weights drawn as integers in `[1, range]` and normalized per factor.
    pub fn random_positive<R: Rng>(fs: &FactoredSet, rng: &mut R, range: u32) -> Self {
        let range = range.max(1);
        let weights = fs
            .factors()
            .iter()
            .map(|f| {
                let raw: Vec<u32> = (0..f.num_blocks()).map(|_| rng.gen_range(1..=range)).collect();
                let total: u64 = raw.iter().map(|&r| r as u64).sum();
                raw.iter()
                    .map(|&r| BigRational::new(BigInt::from(r), BigInt::from(total)))
                    .collect()
            })
            .collect();
        FactoredDistribution { weights }
    }

    pub fn weights(&self) -> &[Vec<BigRational>] {
        &self.weights
    }

    /// The weights as an assignment to polynomial variables.
    pub fn assignment(&self) -> BTreeMap<Var, BigRational> {
        let mut out = BTreeMap::new();
        for (b, w) in self.weights.iter().enumerate() {
            for (k, x) in w.iter().enumerate() {
                out.insert(
                    Var {
                        factor: b as u32,
                        block: k as u32,
                    },
                    x.clone(),
                );
            }
        }
        out
    }

    pub fn point_mass(&self, fs: &FactoredSet, s: usize) -> BigRational {
        let mut p = BigRational::one();
        for (b, w) in self.weights.iter().enumerate() {
            p *= &w[fs.coordinate(s, b)];
        }
        p
    }

    pub fn table(&self, fs: &FactoredSet) -> Vec<BigRational> {
        (0..fs.size()).map(|s| self.point_mass(fs, s)).collect()
    }
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

pub fn prob(fs: &FactoredSet, p: &FactoredDistribution, e: &ElementSet) -> Result<BigRational> {
    check_event(fs, e)?;
    Ok(e.iter().map(|s| p.point_mass(fs, s)).sum())
}

fn table_prob(table: &[BigRational], e: &ElementSet) -> BigRational {
    e.iter().map(|s| table[s].clone()).sum()
}

/// Whether a table over the ground set is a distribution whose point masses
/// are the products of the probabilities of their factor blocks.
pub fn is_distribution_on(fs: &FactoredSet, table: &[BigRational]) -> Result<bool> {
    if table.len() != fs.size() {
        return Err(Error::LabelingSize {
            got: table.len(),
            expected: fs.size(),
        });
    }
    if table.iter().any(|x| x.is_negative()) {
        return Ok(false);
    }
    if !table.iter().sum::<BigRational>().is_one() {
        return Ok(false);
    }
    let block_probs: Vec<Vec<BigRational>> = fs
        .factors()
        .iter()
        .map(|f| f.block_sets().iter().map(|blk| table_prob(table, blk)).collect())
        .collect();
    Ok((0..fs.size()).all(|s| {
        let product: BigRational = block_probs
            .iter()
            .enumerate()
            .map(|(b, probs)| probs[fs.coordinate(s, b)].clone())
            .product();
        product == table[s]
    }))
}

/// `P(x∩z)·P(y∩z) = P(x∩y∩z)·P(z)` for every `x, y, z`, in exact arithmetic.
pub fn conditional_independence_holds(
    fs: &FactoredSet,
    p: &FactoredDistribution,
    x: &Partition,
    y: &Partition,
    z: &Partition,
) -> Result<bool> {
    for q in [x, y, z] {
        if q.ground_size() != fs.size() {
            return Err(Error::GroundMismatch {
                left: fs.size(),
                right: q.ground_size(),
            });
        }
    }
    Ok(independence_in_table(&p.table(fs), x, y, z))
}

fn independence_in_table(table: &[BigRational], x: &Partition, y: &Partition, z: &Partition) -> bool {
    // Scaling by the common denominator keeps the identity exact and lets
    // small tables use machine integers.
    let denom = table.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let scaled: Vec<BigInt> = table.iter().map(|q| q.numer() * (&denom / q.denom())).collect();
    let total: BigInt = scaled.iter().sum();
    if total.bits() < 62 && scaled.iter().all(|v| !v.is_negative()) {
        let small: Vec<u128> = scaled.iter().map(|v| v.to_u128().expect("fits")).collect();
        independence_scaled(&small, x, y, z)
    } else {
        independence_scaled(&scaled, x, y, z)
    }
}

fn independence_scaled<T>(table: &[T], x: &Partition, y: &Partition, z: &Partition) -> bool
where
    T: Clone + Zero + PartialEq + for<'a> std::ops::AddAssign<&'a T>,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    let (nx, ny, nz) = (x.num_blocks(), y.num_blocks(), z.num_blocks());
    // joint[(a * ny + b) * nz + c] = P(x_a ∩ y_b ∩ z_c)
    let mut joint = vec![T::zero(); nx * ny * nz];
    for (s, mass) in table.iter().enumerate() {
        let (Some(a), Some(b), Some(c)) = (x.block_of(s), y.block_of(s), z.block_of(s)) else {
            continue;
        };
        joint[(a * ny + b) * nz + c] += mass;
    }
    let at = |a: usize, b: usize, c: usize| &joint[(a * ny + b) * nz + c];
    for c in 0..nz {
        let mut pz = T::zero();
        let mut pxz = vec![T::zero(); nx];
        let mut pyz = vec![T::zero(); ny];
        for (a, pa) in pxz.iter_mut().enumerate() {
            for (b, pb) in pyz.iter_mut().enumerate() {
                let v = at(a, b, c);
                pz += v;
                *pa += v;
                *pb += v;
            }
        }
        for (a, pa) in pxz.iter().enumerate() {
            for (b, pb) in pyz.iter().enumerate() {
                if pa * pb != at(a, b, c) * &pz {
                    return false;
                }
            }
        }
    }
    true
}

/// Outcome of comparing orthogonality, the polynomial identity and sampled
/// distributions on one triple.
#[derive(Clone, Debug)]
pub struct FundamentalTheoremReport {
    pub orthogonal: bool,
    pub polynomial_identity: bool,
    pub seed: u64,
    pub trials: usize,
    pub independent_trials: usize,
    /// A sampled distribution under which independence fails, if one was found.
    pub witness: Option<FactoredDistribution>,
}

impl FundamentalTheoremReport {
    /// The three verdicts point the same way. A missing witness for a
    /// non-orthogonal triple does not count against agreement.
    pub fn consistent(&self) -> bool {
        if self.orthogonal {
            self.polynomial_identity && self.independent_trials == self.trials && self.witness.is_none()
        } else {
            !self.polynomial_identity
        }
    }
}

pub fn fundamental_theorem_check(
    fs: &FactoredSet,
    x: &Partition,
    y: &Partition,
    z: &Partition,
    trials: usize,
    seed: u64,
) -> Result<FundamentalTheoremReport> {
    if trials == 0 {
        return Err(Error::Invalid("trials must be at least 1".into()));
    }
    let orthogonal = structure::cond_orthogonal(fs, x, y, z)?;
    let polynomial_identity = polynomial::cond_orth_by_divisibility(fs, x, y, z)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut independent_trials = 0;
    let mut witness = None;
    for _ in 0..trials {
        let p = FactoredDistribution::random_positive(fs, &mut rng, DEFAULT_WEIGHT_RANGE);
        if conditional_independence_holds(fs, &p, x, y, z)? {
            independent_trials += 1;
        } else if witness.is_none() {
            witness = Some(p);
        }
    }
    Ok(FundamentalTheoremReport {
        orthogonal,
        polynomial_identity,
        seed,
        trials,
        independent_trials,
        witness,
    })
}
