use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::rational::Q;

/// An element of `H^*(V)` in coordinates of the model's basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CohClass(pub Vec<Q>);

impl CohClass {
    pub fn zero(len: usize) -> Self {
        CohClass(vec![Q::zero(); len])
    }

    pub fn basis(len: usize, a: usize) -> Self {
        let mut c = Self::zero(len);
        c.0[a] = Q::from_integer(1.into());
        c
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn coeff(&self, a: usize) -> &Q {
        &self.0[a]
    }

    /// Nonzero coordinates as `(basis index, coefficient)`.
    pub fn components(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.0.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn scale(&self, c: &Q) -> CohClass {
        CohClass(self.0.iter().map(|x| x * c).collect())
    }

    pub fn add_scaled(&mut self, other: &CohClass, c: &Q) {
        for (x, y) in self.0.iter_mut().zip(&other.0) {
            if !y.is_zero() {
                *x += y * c;
            }
        }
    }
}

impl Add for &CohClass {
    type Output = CohClass;
    fn add(self, rhs: &CohClass) -> CohClass {
        CohClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &CohClass {
    type Output = CohClass;
    fn sub(self, rhs: &CohClass) -> CohClass {
        CohClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &CohClass {
    type Output = CohClass;
    fn neg(self) -> CohClass {
        CohClass(self.0.iter().map(|a| -a).collect())
    }
}
