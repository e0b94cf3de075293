//! Both sides of the divisor and dilaton equations, each evaluated on its own.

use num_traits::Zero;

use super::{CorrelatorKey, Engine};
use crate::error::{Error, Result};
use crate::geometry::CohClass;
use crate::rational::Q;

impl Engine {
    fn descendant_items(&self, key: &CorrelatorKey) -> Result<Vec<(u32, CohClass)>> {
        if key.g != 0 {
            return Err(Error::OutOfScope("identity checks run in genus zero".into()));
        }
        self.check_beta(&key.beta)?;
        self.check_insertions(&key.insertions)?;
        if key.insertions.iter().any(|i| i.e > 0) {
            return Err(Error::domain("identity checks take descendant insertions"));
        }
        Ok(key
            .insertions
            .iter()
            .map(|i| (i.d, self.model.basis_class(i.a)))
            .collect())
    }

    fn eval_items(&self, key: &CorrelatorKey, items: &[(u32, CohClass)]) -> Result<Q> {
        let refs: Vec<(u32, u32, &CohClass)> = items.iter().map(|(d, c)| (*d, 0, c)).collect();
        if key.beta.is_zero() {
            // constant maps: the closed form, independent of the recursion
            return self.expand(&refs, &mut |ins| self.point_value(0, ins));
        }
        self.correlator_classes(&key.beta, &refs)
    }

    /// `(<gamma, key>, (gamma, beta) <key> + sum_k <... tau_{d_k - 1}(gamma ∪ g_k) ...>)`
    /// for a degree-one `gamma`.
    pub fn divisor_check(&self, gamma: &CohClass, key: &CorrelatorKey) -> Result<(Q, Q)> {
        let items = self.descendant_items(key)?;
        if key.beta.is_zero() && items.len() < 3 {
            return Err(Error::domain("the divisor equation needs beta != 0 or three base points"));
        }
        let mut with = vec![(0, gamma.clone())];
        with.extend(items.iter().cloned());
        let lhs = self.eval_items(key, &with)?;

        let mut rhs = if key.beta.is_zero() {
            Q::zero()
        } else {
            self.model.beta_pairing(gamma, &key.beta)? * self.eval_items(key, &items)?
        };
        for k in 0..items.len() {
            let (d, g) = &items[k];
            if *d == 0 {
                continue;
            }
            let mut lowered = items.clone();
            lowered[k] = (d - 1, self.model.cup(gamma, g));
            rhs += self.eval_items(key, &lowered)?;
        }
        Ok((lhs, rhs))
    }

    /// `(<tau_1 1, key>, (n - 2) <key>)` in genus zero.
    pub fn dilaton_check(&self, key: &CorrelatorKey) -> Result<(Q, Q)> {
        let items = self.descendant_items(key)?;
        let one = self.model.basis_class(self.model.identity());
        let mut with = vec![(1, one)];
        with.extend(items.iter().cloned());
        let lhs = self.eval_items(key, &with)?;
        let factor = Q::from_integer((items.len() as i64 - 2).into());
        let rhs = if factor.is_zero() {
            Q::zero()
        } else {
            factor * self.eval_items(key, &items)?
        };
        Ok((lhs, rhs))
    }
}
