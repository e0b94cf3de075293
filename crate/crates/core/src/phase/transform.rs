use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::PhaseIndex;
use crate::error::{Error, Result};
use crate::novikov::{NovikovSeries, QBound};
use crate::rational::{serde_q, Q};

/// One nonzero `q^beta` coefficient of a matrix entry, for dumps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformEntry {
    pub row: (u32, usize),
    pub col: (u32, usize),
    pub beta: Vec<u32>,
    #[serde(with = "serde_q")]
    pub value: Q,
}

/// `y_{c,b} = sum_{(d,a)} T[(c,b),(d,a)] x_{d,a}` on the coordinates with
/// `d <= max_descendant`; only nonzero entries are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformT {
    index: Vec<PhaseIndex>,
    entries: BTreeMap<(PhaseIndex, PhaseIndex), NovikovSeries>,
    bound: QBound,
}

impl TransformT {
    pub fn identity(index: Vec<PhaseIndex>, bound: &QBound) -> Self {
        let mut t = TransformT {
            index,
            entries: BTreeMap::new(),
            bound: bound.clone(),
        };
        for i in t.index.clone() {
            t.set(i, i, NovikovSeries::constant(bound, Q::from_integer(1.into())));
        }
        t
    }

    pub fn index(&self) -> &[PhaseIndex] {
        &self.index
    }

    pub fn bound(&self) -> &QBound {
        &self.bound
    }

    pub fn get(&self, row: PhaseIndex, col: PhaseIndex) -> NovikovSeries {
        self.entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(|| NovikovSeries::zero(&self.bound))
    }

    pub fn set(&mut self, row: PhaseIndex, col: PhaseIndex, value: NovikovSeries) {
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(PhaseIndex, PhaseIndex), &NovikovSeries)> {
        self.entries.iter()
    }

    /// Row `(c,b)` as a linear form in the `x` coordinates.
    pub fn row(&self, row: PhaseIndex) -> Vec<(PhaseIndex, NovikovSeries)> {
        self.entries
            .range((row, PhaseIndex::new(0, 0))..)
            .take_while(|((r, _), _)| *r == row)
            .map(|((_, c), v)| (*c, v.clone()))
            .collect()
    }

    fn check(&self, other: &TransformT) -> Result<()> {
        if self.index != other.index || self.bound != other.bound {
            return Err(Error::Config("transforms on different index sets or truncations".into()));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &TransformT) -> Result<TransformT> {
        self.check(other)?;
        let mut out = TransformT {
            index: self.index.clone(),
            entries: BTreeMap::new(),
            bound: self.bound.clone(),
        };
        for (&(r, k), a) in &self.entries {
            for (c, b) in other.row(k) {
                let cur = out.get(r, c);
                out.set(r, c, cur.try_add(&a.try_mul(&b)?)?);
            }
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        *self == TransformT::identity(self.index.clone(), &self.bound)
    }

    /// Whether every off-diagonal entry strictly raises the descendant level.
    pub fn is_weight_raising(&self) -> bool {
        self.entries.iter().all(|(&(r, c), v)| {
            if r == c {
                v == &NovikovSeries::constant(&self.bound, Q::from_integer(1.into()))
            } else {
                c.d > r.d
            }
        })
    }

    /// `sum_k (-N)^k` for `T = Id + N`; terminates since `N` raises the level.
    pub fn invert(&self) -> Result<TransformT> {
        if !self.is_weight_raising() {
            return Err(Error::domain("transform is not identity plus a level-raising part"));
        }
        let id = TransformT::identity(self.index.clone(), &self.bound);
        let mut minus_n = id.clone();
        minus_n.entries.clear();
        for (&(r, c), v) in &self.entries {
            if r != c {
                minus_n.set(r, c, -v);
            }
        }
        let mut result = id.clone();
        let mut power = id;
        let levels = self.index.iter().map(|i| i.d).max().unwrap_or(0);
        for _ in 0..levels {
            power = power.try_mul(&minus_n)?;
            if power.entries.is_empty() {
                break;
            }
            for (&(r, c), v) in &power.entries {
                let cur = result.get(r, c);
                result.set(r, c, &cur + v);
            }
        }
        Ok(result)
    }

    pub fn to_records(&self) -> Vec<TransformEntry> {
        let mut out = Vec::new();
        for (&(r, c), v) in &self.entries {
            for (beta, x) in v.terms() {
                out.push(TransformEntry {
                    row: (r.d, r.a),
                    col: (c.d, c.a),
                    beta: beta.0.clone(),
                    value: x.clone(),
                });
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::novikov::CurveClass;
    use crate::rational::q;

    fn bound(max: u64) -> QBound {
        QBound::new(vec![1], max).unwrap()
    }

    fn index() -> Vec<PhaseIndex> {
        (0..3).flat_map(|d| (0..2).map(move |a| PhaseIndex::new(d, a))).collect()
    }

    #[test]
    fn identity_inverts_to_itself() {
        let id = TransformT::identity(index(), &bound(2));
        assert!(id.is_identity());
        assert_eq!(id.invert().unwrap(), id);
    }

    #[test]
    fn nilpotent_single_entry() {
        let b = bound(1);
        let mut t = TransformT::identity(index(), &b);
        let n = NovikovSeries::monomial(&b, CurveClass(vec![1]), q(5));
        t.set(PhaseIndex::new(0, 1), PhaseIndex::new(2, 0), n.clone());
        let inv = t.invert().unwrap();
        let mut expected = TransformT::identity(index(), &b);
        expected.set(PhaseIndex::new(0, 1), PhaseIndex::new(2, 0), -&n);
        assert_eq!(inv, expected);
        assert!(t.try_mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn chained_entries_need_second_power() {
        let b = bound(3);
        let mut t = TransformT::identity(index(), &b);
        let q1 = NovikovSeries::monomial(&b, CurveClass(vec![1]), q(1));
        t.set(PhaseIndex::new(0, 0), PhaseIndex::new(1, 1), q1.clone());
        t.set(PhaseIndex::new(1, 1), PhaseIndex::new(2, 0), q1.clone());
        let inv = t.invert().unwrap();
        assert!(t.try_mul(&inv).unwrap().is_identity());
        assert!(inv.try_mul(&t).unwrap().is_identity());
        let q2 = NovikovSeries::monomial(&b, CurveClass(vec![2]), q(1));
        assert_eq!(inv.get(PhaseIndex::new(0, 0), PhaseIndex::new(2, 0)), q2);
    }

    #[test]
    fn non_triangular_rejected() {
        let b = bound(1);
        let mut t = TransformT::identity(index(), &b);
        t.set(PhaseIndex::new(1, 0), PhaseIndex::new(0, 0), NovikovSeries::constant(&b, q(1)));
        assert!(t.invert().is_err());
    }
}
