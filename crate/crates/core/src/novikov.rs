//! Effective curve classes and truncated series over the Novikov ring.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Q};

/// A class in the effective cone, in coordinates of a fixed lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CurveClass(pub Vec<u32>);

impl CurveClass {
    pub fn zero(rank: usize) -> Self {
        CurveClass(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn checked_sub(&self, other: &CurveClass) -> Option<CurveClass> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(CurveClass)
    }

    /// All `(b1, b2)` with `b1 + b2 = self`, both effective. Ordered by `b1`.
    pub fn splittings(&self) -> Vec<(CurveClass, CurveClass)> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.rank()];
        loop {
            let b1 = CurveClass(cur.clone());
            let b2 = self.checked_sub(&b1).expect("componentwise bounded");
            out.push((b1, b2));
            // odometer increment
            let mut k = 0;
            loop {
                if k == cur.len() {
                    return out;
                }
                if cur[k] < self.0[k] {
                    cur[k] += 1;
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
        }
    }
}

impl Add for &CurveClass {
    type Output = CurveClass;
    fn add(self, rhs: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Truncation bounds for the phase-space computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncationPolicy {
    /// Bound on the degree of `beta`, measured against the ample class.
    pub max_beta_degree: u64,
    /// Bound on the total degree in the phase-space coordinates.
    pub max_x_degree: u32,
    /// Bound on the descendant level `d` of the coordinates `x_{d,a}`.
    pub max_descendant: u32,
}

/// The additive degree on curve classes together with its cut-off.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QBound {
    weights: Vec<u64>,
    max_degree: u64,
}

impl QBound {
    /// `weights[k]` is the ample pairing with the k-th lattice generator.
    pub fn new(weights: Vec<u64>, max_degree: u64) -> Result<Self> {
        if weights.contains(&0) {
            return Err(Error::domain("degree weights must be positive"));
        }
        Ok(QBound { weights, max_degree })
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn max_degree(&self) -> u64 {
        self.max_degree
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn degree(&self, beta: &CurveClass) -> u64 {
        self.weights
            .iter()
            .zip(&beta.0)
            .map(|(w, b)| w * u64::from(*b))
            .sum()
    }

    pub fn admits(&self, beta: &CurveClass) -> bool {
        self.degree(beta) <= self.max_degree
    }

    /// Every effective class of degree within the bound, in lexicographic order.
    pub fn classes(&self) -> Vec<CurveClass> {
        fn rec(bound: &QBound, k: usize, left: u64, cur: &mut Vec<u32>, out: &mut Vec<CurveClass>) {
            if k == bound.rank() {
                out.push(CurveClass(cur.clone()));
                return;
            }
            let w = bound.weights[k];
            for c in 0..=(left / w) {
                cur.push(c as u32);
                rec(bound, k + 1, left - c * w, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(self, 0, self.max_degree, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

/// A finite sum `sum c_beta q^beta` cut off at the bound's degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NovikovSeries {
    terms: BTreeMap<CurveClass, Q>,
    bound: QBound,
}

impl NovikovSeries {
    pub fn zero(bound: &QBound) -> Self {
        NovikovSeries {
            terms: BTreeMap::new(),
            bound: bound.clone(),
        }
    }

    pub fn monomial(bound: &QBound, beta: CurveClass, coeff: Q) -> Self {
        let mut s = Self::zero(bound);
        s.add_term(beta, coeff);
        s
    }

    pub fn constant(bound: &QBound, coeff: Q) -> Self {
        Self::monomial(bound, CurveClass::zero(bound.rank()), coeff)
    }

    pub fn bound(&self) -> &QBound {
        &self.bound
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, beta: &CurveClass) -> Q {
        self.terms.get(beta).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CurveClass, &Q)> {
        self.terms.iter()
    }

    /// Adds `coeff q^beta`, dropping it if it lies beyond the bound.
    pub fn add_term(&mut self, beta: CurveClass, coeff: Q) {
        if coeff.is_zero() || !self.bound.admits(&beta) {
            return;
        }
        match self.terms.entry(beta) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_bound(&self, other: &NovikovSeries) -> Result<()> {
        if self.bound != other.bound {
            return Err(Error::Config(format!(
                "truncation mismatch: {:?} vs {:?}",
                self.bound, other.bound
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &NovikovSeries) -> Result<NovikovSeries> {
        self.check_bound(other)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), c.clone());
        }
        Ok(out)
    }

    /// Cauchy product over `beta_1 + beta_2 = beta`, truncated.
    pub fn try_mul(&self, other: &NovikovSeries) -> Result<NovikovSeries> {
        self.check_bound(other)?;
        let mut out = Self::zero(&self.bound);
        for (b1, c1) in &self.terms {
            let d1 = self.bound.degree(b1);
            for (b2, c2) in &other.terms {
                if d1 + self.bound.degree(b2) > self.bound.max_degree {
                    continue;
                }
                out.add_term(b1 + b2, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> NovikovSeries {
        if c.is_zero() {
            return Self::zero(&self.bound);
        }
        NovikovSeries {
            terms: self.terms.iter().map(|(b, v)| (b.clone(), v * c)).collect(),
            bound: self.bound.clone(),
        }
    }

    /// `sum pairing(beta) c_beta q^beta`.
    pub fn derivative(&self, pairing: impl Fn(&CurveClass) -> i64) -> NovikovSeries {
        let mut out = Self::zero(&self.bound);
        for (b, c) in &self.terms {
            out.add_term(b.clone(), c * Q::from_integer(pairing(b).into()));
        }
        out
    }

    /// Inverse of [`derivative`](Self::derivative) on series without constant term.
    pub fn antiderivative(&self, pairing: impl Fn(&CurveClass) -> i64) -> Result<NovikovSeries> {
        let mut out = Self::zero(&self.bound);
        for (b, c) in &self.terms {
            if b.is_zero() {
                return Err(Error::domain(format!(
                    "antiderivative of a series with constant term {}",
                    rational::format(c)
                )));
            }
            let p = pairing(b);
            if p == 0 {
                return Err(Error::domain(format!(
                    "ample class pairs to zero with {b}"
                )));
            }
            out.add_term(b.clone(), c / Q::from_integer(p.into()));
        }
        Ok(out)
    }

    /// Restriction to a coarser cut-off with the same weights.
    pub fn truncated(&self, bound: &QBound) -> Result<NovikovSeries> {
        if bound.weights != self.bound.weights || bound.max_degree > self.bound.max_degree {
            return Err(Error::Config(format!(
                "cannot truncate {:?} to {:?}",
                self.bound, bound
            )));
        }
        let mut out = Self::zero(bound);
        for (b, c) in &self.terms {
            out.add_term(b.clone(), c.clone());
        }
        Ok(out)
    }

    /// Drops the `q^0` coefficient.
    pub fn without_constant(&self) -> NovikovSeries {
        let mut out = self.clone();
        out.terms.remove(&CurveClass::zero(self.bound.rank()));
        out
    }
}

impl Add for &NovikovSeries {
    type Output = NovikovSeries;
    /// Panics on mismatched bounds; use [`NovikovSeries::try_add`] otherwise.
    fn add(self, rhs: &NovikovSeries) -> NovikovSeries {
        self.try_add(rhs).expect("series with equal truncation")
    }
}

impl Sub for &NovikovSeries {
    type Output = NovikovSeries;
    fn sub(self, rhs: &NovikovSeries) -> NovikovSeries {
        self.try_add(&-rhs).expect("series with equal truncation")
    }
}

impl Mul for &NovikovSeries {
    type Output = NovikovSeries;
    fn mul(self, rhs: &NovikovSeries) -> NovikovSeries {
        self.try_mul(rhs).expect("series with equal truncation")
    }
}

impl Neg for &NovikovSeries {
    type Output = NovikovSeries;
    fn neg(self) -> NovikovSeries {
        self.scale(&-Q::one())
    }
}

impl fmt::Display for NovikovSeries {
    /// `c·q^[beta] + ...` in class order; the zero series prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| format!("{}·q^{}", rational::format(c), b))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn line(max: u64) -> QBound {
        QBound::new(vec![1], max).unwrap()
    }

    fn series(bound: &QBound, coeffs: &[(u32, i64)]) -> NovikovSeries {
        let mut s = NovikovSeries::zero(bound);
        for &(d, c) in coeffs {
            s.add_term(CurveClass(vec![d]), q(c));
        }
        s
    }

    #[test]
    fn additive_inverse_is_empty() {
        let b = line(3);
        let s = &series(&b, &[(0, 1)]) + &series(&b, &[(0, -1)]);
        assert!(s.is_zero());
    }

    #[test]
    fn like_terms_collect() {
        let b = line(3);
        let half = NovikovSeries::monomial(&b, CurveClass(vec![1]), qf(1, 2));
        let s = &half + &half;
        assert_eq!(s, NovikovSeries::monomial(&b, CurveClass(vec![1]), q(1)));
    }

    #[test]
    fn semigroup_law_two_parameters() {
        let b = QBound::new(vec![1, 1], 5).unwrap();
        let x = NovikovSeries::monomial(&b, CurveClass(vec![1, 0]), q(1));
        let y = NovikovSeries::monomial(&b, CurveClass(vec![1, 2]), q(1));
        assert_eq!(&x * &y, NovikovSeries::monomial(&b, CurveClass(vec![2, 2]), q(1)));
    }

    #[test]
    fn difference_of_squares() {
        let b = line(2);
        let p = series(&b, &[(0, 1), (1, 1)]);
        let m = series(&b, &[(0, 1), (1, -1)]);
        assert_eq!(&p * &m, series(&b, &[(0, 1), (2, -1)]));
    }

    #[test]
    fn truncation_drops_high_terms() {
        let b = line(1);
        let p = series(&b, &[(0, 1), (1, 1)]);
        assert_eq!(&p * &p, series(&b, &[(0, 1), (1, 2)]));
    }

    #[test]
    fn mismatched_bounds_error() {
        let a = series(&line(1), &[(0, 1)]);
        let b = series(&line(2), &[(0, 1)]);
        assert!(matches!(a.try_add(&b), Err(Error::Config(_))));
        assert!(matches!(a.try_mul(&b), Err(Error::Config(_))));
    }

    #[test]
    fn antiderivative_divides_by_pairing() {
        let b = line(5);
        let s = NovikovSeries::monomial(&b, CurveClass(vec![3]), q(7));
        let a = s.antiderivative(|beta| beta.0[0] as i64).unwrap();
        assert_eq!(a.coeff(&CurveClass(vec![3])), qf(7, 3));
        assert!(NovikovSeries::zero(&b).antiderivative(|_| 1).unwrap().is_zero());
        let c = series(&b, &[(0, 5)]);
        assert!(matches!(c.antiderivative(|_| 1), Err(Error::Domain(_))));
        let z = series(&b, &[(2, 1)]);
        assert!(z.antiderivative(|_| 0).is_err());
    }

    #[test]
    fn classes_within_bound() {
        let b = QBound::new(vec![1, 2], 3).unwrap();
        let cls: Vec<Vec<u32>> = b.classes().into_iter().map(|c| c.0).collect();
        assert_eq!(
            cls,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1], vec![2, 0], vec![3, 0]]
        );
    }

    #[test]
    fn splittings_enumerate_all() {
        let beta = CurveClass(vec![1, 2]);
        let s = beta.splittings();
        assert_eq!(s.len(), 6);
        assert!(s.iter().all(|(a, b)| (a + b) == beta));
    }

    #[test]
    fn display_format() {
        let b = line(2);
        assert_eq!(series(&b, &[(1, 1)]).to_string(), "1·q^[1]");
        assert_eq!(NovikovSeries::zero(&b).to_string(), "0");
    }
}
