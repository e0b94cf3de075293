//! Primary correlators. Three points come from the table (or the classical
//! triple intersection at `beta = 0`); more points are reconstructed with
//! the divisor axiom and associativity.

use num_traits::Zero;

use super::recursion::{runs, sub_multisets};
use super::{CorrelatorKey, Engine, Insertion};
use crate::error::{Error, Result};
use crate::geometry::CohClass;
use crate::novikov::CurveClass;
use crate::rational::Q;

impl Engine {
    pub(super) fn primary(&self, beta: &CurveClass, mut ids: Vec<usize>) -> Result<Q> {
        ids.sort_unstable();
        let n = ids.len();
        if n < 3 {
            let ins: Vec<Insertion> = ids.iter().map(|&a| Insertion::primary(a)).collect();
            return self.genus0(beta, &ins);
        }
        if beta.is_zero() {
            if n > 3 {
                return Ok(Q::zero());
            }
            let classes: Vec<CohClass> = ids.iter().map(|&a| self.model.basis_class(a)).collect();
            return Ok(self.model.integrate(&self.model.cup_all(&classes)));
        }
        if n == 3 {
            return Ok(self.table.get(beta, [ids[0], ids[1], ids[2]]));
        }
        let key = CorrelatorKey::genus0(beta.clone(), ids.iter().map(|&a| Insertion::primary(a)).collect());
        self.memo(key, |key| {
            if self.pruned(beta, &key.insertions)? {
                return Ok(Q::zero());
            }
            if ids.iter().any(|&a| self.model.degree(a) == 0) {
                return Ok(Q::zero());
            }
            if let Some(p) = ids.iter().position(|&a| self.model.degree(a) == 1) {
                let h = self.model.basis_class(ids[p]);
                let factor = self.model.beta_pairing(&h, beta)?;
                if factor.is_zero() {
                    return Ok(factor);
                }
                let mut rest = ids.clone();
                rest.remove(p);
                return Ok(factor * self.primary(beta, rest)?);
            }
            self.reconstruct(beta, &ids)
        })
    }

    fn primary_classes(&self, beta: &CurveClass, classes: &[&CohClass]) -> Result<Q> {
        let items: Vec<(u32, u32, &CohClass)> = classes.iter().map(|c| (0, 0, *c)).collect();
        self.expand(&items, &mut |ins| self.primary(beta, ins.iter().map(|x| x.a).collect()))
    }

    /// All insertions of degree at least two, `n >= 4`, `beta != 0`.
    ///
    /// Writes the lowest-degree insertion as `sum_k h_k ∪ x_k` and uses the
    /// associativity relation for the four points `h_k, x_k, b, c`: the
    /// term where `h_k` and `x_k` bubble off on a constant component is the
    /// wanted value, and every other term has fewer points, smaller curve
    /// class or an insertion of lower degree.
    fn reconstruct(&self, beta: &CurveClass, ids: &[usize]) -> Result<Q> {
        let mut order = ids.to_vec();
        order.sort_by_key(|&a| (self.model.degree(a), a));
        let (a, b, c) = (order[0], order[1], order[2]);
        let mut rest = order[3..].to_vec();
        rest.sort_unstable();
        let factors = self.model.divisor_factorization(a).ok_or_else(|| {
            Error::domain(format!(
                "{} is not in the ideal generated by divisors; higher-point primaries cannot be reconstructed",
                self.model.label(a)
            ))
        })?;
        let cb = self.model.basis_class(b);
        let cc = self.model.basis_class(c);
        let splits = sub_multisets(&runs(&rest));
        let mut total = Q::zero();
        for (h, x) in &factors {
            let ch = self.model.basis_class(*h);
            for (s1, s2, w) in &splits {
                for (b1, b2) in beta.splittings() {
                    let wanted_term = b1.is_zero() && s1.is_empty();
                    if !wanted_term {
                        let lhs = self.wdvv_side(&b1, &b2, [&ch, x], s1, [&cb, &cc], s2)?;
                        total -= w * lhs;
                    }
                    let rhs = self.wdvv_side(&b1, &b2, [&ch, &cb], s1, [x, &cc], s2)?;
                    total += w * rhs;
                }
            }
        }
        Ok(total)
    }

    /// `sum_{e,f} eta^{ef} <p, s1, Delta_e>_{b1} <Delta_f, r, s2>_{b2}`.
    fn wdvv_side(
        &self,
        b1: &CurveClass,
        b2: &CurveClass,
        p: [&CohClass; 2],
        s1: &[usize],
        r: [&CohClass; 2],
        s2: &[usize],
    ) -> Result<Q> {
        let s1c: Vec<CohClass> = s1.iter().map(|&a| self.model.basis_class(a)).collect();
        let s2c: Vec<CohClass> = s2.iter().map(|&a| self.model.basis_class(a)).collect();
        let mut total = Q::zero();
        for e in 0..self.model.rank() {
            let de = self.model.basis_class(e);
            let mut left: Vec<&CohClass> = vec![p[0], p[1]];
            left.extend(s1c.iter());
            left.push(&de);
            let lv = self.primary_classes(b1, &left)?;
            if lv.is_zero() {
                continue;
            }
            for (f, g) in &self.ginv[e] {
                let df = self.model.basis_class(*f);
                let mut right: Vec<&CohClass> = vec![&df, r[0], r[1]];
                right.extend(s2c.iter());
                let rv = self.primary_classes(b2, &right)?;
                if !rv.is_zero() {
                    total += &lv * g * rv;
                }
            }
        }
        Ok(total)
    }
}
