//! Characteristic polynomials of events and the irreducible decomposition.
//!
//! Variables name the parts of factors: `Var { factor, block }` stands for the
//! block `block` of factor `factor`. Parts of distinct factors are distinct
//! subsets of the ground set, so this naming never identifies two different
//! sets. Coefficients are exact rationals.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::factored_set::{FactorSubset, FactoredSet};
use crate::partitions::{ElementSet, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub factor: u32,
    pub block: u32,
}

/// Product of variables with positive exponents, sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// A product of distinct variables, each with exponent 1.
    pub fn multilinear<I: IntoIterator<Item = Var>>(vars: I) -> Self {
        let mut m = Monomial::one();
        for v in vars {
            m = m.mul(&Monomial(vec![(v, 1)]));
        }
        m
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_multilinear(&self) -> bool {
        self.0.iter().all(|&(_, e)| e == 1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }
}

/// A polynomial with rational coefficients. Zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SetPolynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl SetPolynomial {
    pub fn zero() -> Self {
        SetPolynomial::default()
    }

    pub fn one() -> Self {
        SetPolynomial::from_monomial(Monomial::one())
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, BigRational::one());
        SetPolynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Substitute a value for every variable.
    pub fn eval(&self, values: &BTreeMap<Var, BigRational>) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for &(v, e) in m.powers() {
                let x = values
                    .get(&v)
                    .ok_or_else(|| Error::MissingVariable(format!("{}.{}", v.factor, v.block)))?;
                for _ in 0..e {
                    term *= x;
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Terms sorted by monomial, variables printed as `name.block`.
    pub fn render(&self, factor_names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            let unit = c.is_one();
            if !unit || m.powers().is_empty() {
                write!(out, "{c}").unwrap();
            }
            for (k, &(v, e)) in m.powers().iter().enumerate() {
                if k > 0 || !unit {
                    out.push('*');
                }
                match factor_names.get(v.factor as usize) {
                    Some(name) => write!(out, "{name}.{}", v.block).unwrap(),
                    None => write!(out, "{}.{}", v.factor, v.block).unwrap(),
                }
                if e > 1 {
                    write!(out, "^{e}").unwrap();
                }
            }
        }
        out
    }
}

impl Add for &SetPolynomial {
    type Output = SetPolynomial;
    fn add(self, rhs: &SetPolynomial) -> SetPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Mul for &SetPolynomial {
    type Output = SetPolynomial;
    fn mul(self, rhs: &SetPolynomial) -> SetPolynomial {
        let mut out = SetPolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

/// `∏_{b∈C} [s]_b`.
pub fn monomial_of(fs: &FactoredSet, c: FactorSubset, s: usize) -> Monomial {
    Monomial::multilinear(c.iter().map(|b| Var {
        factor: b as u32,
        block: fs.coordinate(s, b) as u32,
    }))
}

/// Sum of the distinct monomials `∏_{b∈C} [s]_b` over `s ∈ E`.
pub fn restricted_polynomial(fs: &FactoredSet, c: FactorSubset, e: &ElementSet) -> SetPolynomial {
    let mut terms = BTreeMap::new();
    for s in e.iter() {
        terms.insert(monomial_of(fs, c, s), BigRational::one());
    }
    SetPolynomial { terms }
}

/// `Q_E`, the characteristic polynomial of `E`.
pub fn characteristic(fs: &FactoredSet, e: &ElementSet) -> SetPolynomial {
    restricted_polynomial(fs, fs.basis(), e)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrrDecomposition {
    pub components: Vec<FactorSubset>,
    pub factors_of_q: Vec<SetPolynomial>,
}

impl IrrDecomposition {
    pub fn product(&self) -> SetPolynomial {
        self.factors_of_q.iter().fold(SetPolynomial::one(), |acc, p| &acc * p)
    }
}

/// Minimal nonempty factor subsets `C` with `χ_C(E, E) = E`, ordered by
/// their smallest factor, with the matching factors of `Q_E`.
pub fn irreducible_components(fs: &FactoredSet, e: &ElementSet) -> Result<IrrDecomposition> {
    if e.ground_size() != fs.size() {
        return Err(Error::GroundMismatch {
            left: fs.size(),
            right: e.ground_size(),
        });
    }
    if e.is_empty() {
        return Err(Error::EmptyEvent);
    }
    let stable: Vec<FactorSubset> = FactorSubset::all(fs.dim()).filter(|&c| fs.is_stable(c, e)).collect();
    let mut components: Vec<FactorSubset> = Vec::new();
    for b in 0..fs.dim() {
        if components.iter().any(|c| c.contains(b)) {
            continue;
        }
        let smallest = stable
            .iter()
            .filter(|c| c.contains(b))
            .fold(fs.basis(), |acc, &c| acc.intersection(c));
        components.push(smallest);
    }
    let factors_of_q = components.iter().map(|&c| restricted_polynomial(fs, c, e)).collect();
    Ok(IrrDecomposition {
        components,
        factors_of_q,
    })
}

/// `X ⊥ Y | Z` decided by `Q_z · Q_{x∩y∩z} = Q_{x∩z} · Q_{y∩z}` for all blocks.
pub fn cond_orth_by_divisibility(fs: &FactoredSet, x: &Partition, y: &Partition, z: &Partition) -> Result<bool> {
    for p in [x, y, z] {
        if p.ground_size() != fs.size() {
            return Err(Error::GroundMismatch {
                left: fs.size(),
                right: p.ground_size(),
            });
        }
    }
    let (xs, ys) = (x.block_sets(), y.block_sets());
    for zb in z.block_sets() {
        let qz = characteristic(fs, &zb);
        let xz: Vec<ElementSet> = xs.iter().map(|b| b.intersection(&zb)).collect::<Result<_>>()?;
        let yz: Vec<ElementSet> = ys.iter().map(|b| b.intersection(&zb)).collect::<Result<_>>()?;
        let qyz: Vec<SetPolynomial> = yz.iter().map(|e| characteristic(fs, e)).collect();
        for xe in &xz {
            let qxz = characteristic(fs, xe);
            for (ye, qy) in yz.iter().zip(&qyz) {
                let lhs = &qz * &characteristic(fs, &xe.intersection(ye)?);
                let rhs = &qxz * qy;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure;

    fn ex1() -> (FactoredSet, Partition, Partition, Partition) {
        let x = Partition::from_blocks(4, &[[0, 1], [2, 3]]).unwrap();
        let v = Partition::from_blocks(4, &[[0, 3], [1, 2]]).unwrap();
        let y = Partition::from_blocks(4, &[[0, 2], [1, 3]]).unwrap();
        let fs = FactoredSet::validate(4, &[x.clone(), v.clone()]).unwrap();
        (fs, x, v, y)
    }

    fn var(factor: usize, block: usize) -> SetPolynomial {
        SetPolynomial::from_monomial(Monomial::multilinear([Var {
            factor: factor as u32,
            block: block as u32,
        }]))
    }

    fn set(items: &[usize]) -> ElementSet {
        ElementSet::from_indices(4, items.iter().copied()).unwrap()
    }

    #[test]
    fn empty_event_gives_zero() {
        let (fs, ..) = ex1();
        assert!(characteristic(&fs, &ElementSet::empty(4)).is_zero());
    }

    #[test]
    fn singleton_event_is_one_monomial() {
        let (fs, x, v, _) = ex1();
        let bx = fs.index_of_factor(&x).unwrap();
        let bv = fs.index_of_factor(&v).unwrap();
        let q = characteristic(&fs, &set(&[0]));
        assert_eq!(q, &var(bx, 0) * &var(bv, 0));
    }

    #[test]
    fn restriction_to_one_factor_merges_monomials() {
        let (fs, x, ..) = ex1();
        let bx = fs.index_of_factor(&x).unwrap();
        let p = restricted_polynomial(&fs, FactorSubset::singleton(bx), &ElementSet::full(4));
        assert_eq!(p, &var(bx, 0) + &var(bx, 1));
        assert_eq!(p.num_terms(), 2);
    }

    #[test]
    fn full_set_factors_as_a_product_of_sums() {
        let (fs, ..) = ex1();
        let expanded = &(&var(0, 0) + &var(0, 1)) * &(&var(1, 0) + &var(1, 1));
        assert_eq!(expanded, characteristic(&fs, &ElementSet::full(4)));
        assert!((&expanded * &SetPolynomial::zero()).is_zero());
    }

    #[test]
    fn uniform_evaluation_of_full_set_is_one() {
        let (fs, ..) = ex1();
        let half = BigRational::new(1.into(), 2.into());
        let values: BTreeMap<Var, BigRational> = (0..2)
            .flat_map(|f| (0..2).map(move |b| Var { factor: f, block: b }))
            .map(|v| (v, half.clone()))
            .collect();
        let q = characteristic(&fs, &ElementSet::full(4));
        assert_eq!(q.eval(&values).unwrap(), BigRational::one());
        assert!(matches!(q.eval(&BTreeMap::new()), Err(Error::MissingVariable(_))));
    }

    #[test]
    fn non_multilinear_products_keep_exponents() {
        let p = &var(0, 0) * &var(0, 0);
        let (m, _) = p.terms().next().unwrap();
        assert_eq!(m.powers(), &[(Var { factor: 0, block: 0 }, 2)]);
        assert!(!m.is_multilinear());
        assert_ne!(p, var(0, 0));
    }

    #[test]
    fn irr_examples() {
        let (fs, x, v, _) = ex1();
        let full = irreducible_components(&fs, &ElementSet::full(4)).unwrap();
        assert_eq!(
            full.components,
            vec![FactorSubset::singleton(0), FactorSubset::singleton(1)]
        );

        let bx = fs.index_of_factor(&x).unwrap();
        let bv = fs.index_of_factor(&v).unwrap();
        let x0 = set(&[0, 1]);
        let d = irreducible_components(&fs, &x0).unwrap();
        assert_eq!(d.components.len(), 2);
        let fx = &d.factors_of_q[d.components.iter().position(|c| c.contains(bx)).unwrap()];
        let fv = &d.factors_of_q[d.components.iter().position(|c| c.contains(bv)).unwrap()];
        assert_eq!(*fx, var(bx, 0));
        assert_eq!(*fv, &var(bv, 0) + &var(bv, 1));
        assert_eq!(d.product(), characteristic(&fs, &x0));

        let three = set(&[0, 1, 2]);
        let d = irreducible_components(&fs, &three).unwrap();
        assert_eq!(d.components, vec![fs.basis()]);
        assert_eq!(d.product(), characteristic(&fs, &three));

        assert_eq!(
            irreducible_components(&fs, &ElementSet::empty(4)),
            Err(Error::EmptyEvent)
        );
    }

    #[test]
    fn divisibility_examples() {
        let (fs, x, v, y) = ex1();
        let ind = Partition::indiscrete(4);
        assert!(cond_orth_by_divisibility(&fs, &x, &v, &ind).unwrap());
        assert!(!cond_orth_by_divisibility(&fs, &v, &v, &ind).unwrap());
        for p in crate::partitions::all_partitions(4) {
            for q in crate::partitions::all_partitions(4) {
                assert!(cond_orth_by_divisibility(&fs, &ind, &p, &q).unwrap());
            }
        }
        assert!(!cond_orth_by_divisibility(&fs, &y, &v, &ind).unwrap());
    }

    #[test]
    fn divisibility_agrees_with_histories_on_one_factorization() {
        let (fs, ..) = ex1();
        let parts: Vec<Partition> = crate::partitions::all_partitions(4).collect();
        for a in &parts {
            for b in &parts {
                for c in &parts {
                    assert_eq!(
                        cond_orth_by_divisibility(&fs, a, b, c).unwrap(),
                        structure::cond_orthogonal(&fs, a, b, c).unwrap(),
                        "{a:?} {b:?} {c:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn rendering() {
        let (fs, ..) = ex1();
        let names = vec!["A".to_string(), "B".to_string()];
        let q = characteristic(&fs, &set(&[0]));
        let r = q.render(&names);
        assert!(r == "A.0*B.0", "{r}");
        assert_eq!(SetPolynomial::zero().render(&names), "0");
        let two = &var(0, 1) + &var(0, 1);
        assert_eq!(two.render(&names), "2*A.1");
        let sq = &var(1, 0) * &var(1, 0);
        assert_eq!(sq.render(&names), "B.0^2");
    }
}
