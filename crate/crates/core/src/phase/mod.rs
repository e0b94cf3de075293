//! Big phase space: series in the coordinates `x_{d,a}` with Novikov
//! coefficients, the coordinate change `T`, and the genus-zero potentials.

mod space;
mod transform;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use space::{PhaseSpace, SubstitutionCheck, Theorem22Report, WdvvReport};
pub use transform::{TransformEntry, TransformT};

use crate::error::{Error, Result};
use crate::novikov::{CurveClass, NovikovSeries, QBound};
use crate::rational::{self, serde_q, Q};

/// The coordinate `x_{d,a}` dual to `tau_d Delta_a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PhaseIndex {
    pub d: u32,
    pub a: usize,
}

impl PhaseIndex {
    pub fn new(d: u32, a: usize) -> Self {
        PhaseIndex { d, a }
    }
}

impl fmt::Display for PhaseIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{},{}]", self.d, self.a)
    }
}

/// A sorted multiset of coordinates.
pub type Monomial = Vec<PhaseIndex>;

/// A finite map coordinate -> Novikov series; `PhaseVector` in the
/// coordinate sense, `Gamma = sum x_{d,a} tau_d Delta_a`.
pub type PhaseVector = BTreeMap<PhaseIndex, NovikovSeries>;

/// One line of a potential dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotentialRecord {
    pub indices: Vec<(u32, usize)>,
    pub beta: Vec<u32>,
    #[serde(with = "serde_q")]
    pub value: Q,
}

/// `sum_M c_M(q) x^M` with the `1/prod m!` factors absorbed into `c_M`,
/// truncated in total `x`-degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PotentialSeries {
    terms: BTreeMap<Monomial, NovikovSeries>,
    bound: QBound,
    max_x_degree: u32,
}

impl PotentialSeries {
    pub fn zero(bound: &QBound, max_x_degree: u32) -> Self {
        PotentialSeries {
            terms: BTreeMap::new(),
            bound: bound.clone(),
            max_x_degree,
        }
    }

    /// `sum_k c_k x_k`.
    pub fn linear(bound: &QBound, max_x_degree: u32, coeffs: impl IntoIterator<Item = (PhaseIndex, NovikovSeries)>) -> Self {
        let mut p = Self::zero(bound, max_x_degree);
        for (i, c) in coeffs {
            p.add_term(vec![i], &c);
        }
        p
    }

    pub fn bound(&self) -> &QBound {
        &self.bound
    }

    pub fn max_x_degree(&self) -> u32 {
        self.max_x_degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &NovikovSeries)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[PhaseIndex]) -> NovikovSeries {
        let mut key = m.to_vec();
        key.sort_unstable();
        self.terms
            .get(&key)
            .cloned()
            .unwrap_or_else(|| NovikovSeries::zero(&self.bound))
    }

    /// Adds `c x^m`; drops terms above the degree bound.
    pub fn add_term(&mut self, mut m: Monomial, c: &NovikovSeries) {
        if c.is_zero() || m.len() > self.max_x_degree as usize {
            return;
        }
        m.sort_unstable();
        match self.terms.get_mut(&m) {
            Some(old) => {
                *old = &*old + c;
                if old.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    fn check(&self, other: &PotentialSeries) -> Result<()> {
        if self.bound != other.bound || self.max_x_degree != other.max_x_degree {
            return Err(Error::Config("potential series with different truncations".into()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &PotentialSeries) -> Result<PotentialSeries> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &PotentialSeries) -> Result<PotentialSeries> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &PotentialSeries) -> Result<PotentialSeries> {
        self.check(other)?;
        let mut out = Self::zero(&self.bound, self.max_x_degree);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.len() + m2.len() > self.max_x_degree as usize {
                    continue;
                }
                let c = c1.try_mul(c2)?;
                let mut m = m1.clone();
                m.extend_from_slice(m2);
                out.add_term(m, &c);
            }
        }
        Ok(out)
    }

    /// Same terms, lower cut-off.
    pub fn truncated(&self, max_x_degree: u32) -> PotentialSeries {
        PotentialSeries {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.len() <= max_x_degree as usize)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            bound: self.bound.clone(),
            max_x_degree,
        }
    }

    /// Keeps the monomials satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&[PhaseIndex]) -> bool) -> PotentialSeries {
        PotentialSeries {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            bound: self.bound.clone(),
            max_x_degree: self.max_x_degree,
        }
    }

    /// `d/dx_i`.
    pub fn derivative(&self, i: PhaseIndex) -> PotentialSeries {
        let mut out = Self::zero(&self.bound, self.max_x_degree);
        for (m, c) in &self.terms {
            let mult = m.iter().filter(|&&x| x == i).count();
            if mult == 0 {
                continue;
            }
            let mut rest = m.clone();
            let pos = rest.iter().position(|&x| x == i).expect("present");
            rest.remove(pos);
            out.add_term(rest, &c.scale(&Q::from_integer((mult as i64).into())));
        }
        out
    }

    /// Canonically ordered `(monomial, beta, value)` records.
    pub fn to_records(&self) -> Vec<PotentialRecord> {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            for (beta, v) in c.terms() {
                out.push(PotentialRecord {
                    indices: m.iter().map(|i| (i.d, i.a)).collect(),
                    beta: beta.0.clone(),
                    value: v.clone(),
                });
            }
        }
        out
    }

    pub fn coefficient(&self, m: &[PhaseIndex], beta: &CurveClass) -> Q {
        self.coeff(m).coeff(beta)
    }
}

impl fmt::Display for PotentialSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            let names: Vec<String> = m.iter().map(PhaseIndex::to_string).collect();
            write!(f, "{}: {}", names.join(" "), c)?;
        }
        Ok(())
    }
}

/// A cohomology class whose coordinates are Novikov series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSeries {
    pub coeffs: Vec<NovikovSeries>,
}

impl ClassSeries {
    pub fn zero(rank: usize, bound: &QBound) -> Self {
        ClassSeries {
            coeffs: vec![NovikovSeries::zero(bound); rank],
        }
    }

    pub fn coeff(&self, a: usize) -> &NovikovSeries {
        &self.coeffs[a]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(NovikovSeries::is_zero)
    }

    /// The `q^beta` coefficient as a plain class.
    pub fn at(&self, beta: &CurveClass) -> crate::geometry::CohClass {
        crate::geometry::CohClass(self.coeffs.iter().map(|c| c.coeff(beta)).collect())
    }
}

impl fmt::Display for ClassSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| format!("({c})·D{a}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// All sorted multisets of `items` with sizes in `sizes`.
pub(crate) fn multisets(items: &[PhaseIndex], sizes: std::ops::RangeInclusive<usize>) -> Vec<Monomial> {
    fn rec(items: &[PhaseIndex], start: usize, left: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for k in start..items.len() {
            cur.push(items[k]);
            rec(items, k, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for n in sizes {
        rec(items, 0, n, &mut Vec::new(), &mut out);
    }
    out
}

/// `prod_i m_i!` over the multiplicities of a sorted monomial.
pub(crate) fn symmetry_factor(m: &[PhaseIndex]) -> Q {
    let mut out = Q::from_integer(1.into());
    let mut k = 0;
    while k < m.len() {
        let run = m[k..].iter().take_while(|&&x| x == m[k]).count();
        out *= Q::from_integer(rational::factorial(run as u32));
        k += run;
    }
    out
}
