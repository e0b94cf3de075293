//! Target geometry: graded basis, cup product, Poincaré pairing, curve
//! lattice and Chern data. Only even classes are supported, so every
//! superalgebra sign is `+1`.

mod class;
mod file;
pub mod symmetric;
mod validate;

use num_traits::{One, Zero};

pub use class::CohClass;
pub use file::{BasisEntry, CupEntry, ModelFile};
pub use validate::{Check, ValidationReport};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::novikov::{CurveClass, QBound};
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub label: String,
    /// Complex degree, `0..=dimension`.
    pub degree: u32,
}

/// Poincaré dual bases: `delta` is the model basis, `delta_dual[a]` is the
/// class with `eta(delta[a], delta_dual[b]) = [a == b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualBases {
    pub delta: Vec<CohClass>,
    pub delta_dual: Vec<CohClass>,
}

#[derive(Clone, Debug)]
pub struct GeometryModel {
    name: String,
    dimension: u32,
    basis: Vec<BasisElement>,
    cup: Vec<Vec<CohClass>>,
    integral: Vec<Q>,
    lattice_rank: usize,
    /// `divisor_pairing[a]` is `Some(row)` for degree-one basis elements.
    divisor_pairing: Vec<Option<Vec<i64>>>,
    ample: CohClass,
    chern: Vec<CohClass>,
    gram: Matrix,
    gram_inv: Option<Matrix>,
}

impl GeometryModel {
    /// Assembles a model without checking the structural axioms; see
    /// [`validate`](Self::validate).
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        dimension: u32,
        basis: Vec<BasisElement>,
        cup: Vec<Vec<CohClass>>,
        integral: Vec<Q>,
        lattice_rank: usize,
        divisor_pairing: Vec<Option<Vec<i64>>>,
        ample: CohClass,
        chern: Vec<CohClass>,
    ) -> Result<Self> {
        let r = basis.len();
        if r == 0 {
            return Err(Error::validation("empty basis"));
        }
        let shape_ok = cup.len() == r
            && cup.iter().all(|row| row.len() == r && row.iter().all(|c| c.len() == r))
            && integral.len() == r
            && divisor_pairing.len() == r
            && ample.len() == r
            && chern.iter().all(|c| c.len() == r);
        if !shape_ok {
            return Err(Error::validation("inconsistent table sizes"));
        }
        let mut model = GeometryModel {
            name: name.into(),
            dimension,
            basis,
            cup,
            integral,
            lattice_rank,
            divisor_pairing,
            ample,
            chern,
            gram: Vec::new(),
            gram_inv: None,
        };
        model.gram = (0..r)
            .map(|a| (0..r).map(|b| model.integrate(&model.cup[a][b])).collect())
            .collect();
        model.gram_inv = linalg::inverse(&model.gram);
        Ok(model)
    }

    /// Parses and validates a model; any failed check is an error.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        let model = file.into_model()?;
        model.validate().into_result()?;
        Ok(model)
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile::from_model(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn degree(&self, a: usize) -> u32 {
        self.basis[a].degree
    }

    pub fn label(&self, a: usize) -> &str {
        &self.basis[a].label
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    /// The unique degree-zero basis element.
    pub fn identity(&self) -> usize {
        self.basis
            .iter()
            .position(|b| b.degree == 0)
            .expect("validated model has an identity")
    }

    pub fn divisor_indices(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&a| self.degree(a) == 1).collect()
    }

    pub fn basis_class(&self, a: usize) -> CohClass {
        CohClass::basis(self.rank(), a)
    }

    pub fn cup_basis(&self, a: usize, b: usize) -> &CohClass {
        &self.cup[a][b]
    }

    pub fn cup(&self, x: &CohClass, y: &CohClass) -> CohClass {
        let mut out = CohClass::zero(self.rank());
        for (a, xa) in x.components() {
            for (b, yb) in y.components() {
                out.add_scaled(&self.cup[a][b], &(xa * yb));
            }
        }
        out
    }

    pub fn cup_all<'a>(&self, classes: impl IntoIterator<Item = &'a CohClass>) -> CohClass {
        classes
            .into_iter()
            .fold(self.basis_class(self.identity()), |acc, c| self.cup(&acc, c))
    }

    /// `int_V x`: only the top-degree component contributes.
    pub fn integrate(&self, x: &CohClass) -> Q {
        x.components()
            .filter(|(a, _)| self.basis[*a].degree == self.dimension)
            .fold(Q::zero(), |acc, (a, c)| acc + c * &self.integral[a])
    }

    pub fn integral_values(&self) -> &[Q] {
        &self.integral
    }

    /// `eta(x, y) = int_V x ∪ y`.
    pub fn pairing(&self, x: &CohClass, y: &CohClass) -> Q {
        self.integrate(&self.cup(x, y))
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// Inverse Gram matrix `eta^{ab}`; `None` if the pairing is degenerate.
    pub fn gram_inverse(&self) -> Option<&Matrix> {
        self.gram_inv.as_ref()
    }

    pub fn dual_bases(&self) -> Result<DualBases> {
        let inv = self
            .gram_inv
            .as_ref()
            .ok_or_else(|| Error::validation("Poincaré pairing is degenerate"))?;
        let r = self.rank();
        let delta = (0..r).map(|a| self.basis_class(a)).collect();
        let delta_dual = (0..r)
            .map(|b| CohClass((0..r).map(|c| inv[c][b].clone()).collect()))
            .collect();
        Ok(DualBases { delta, delta_dual })
    }

    /// Dual bases computed from an arbitrary basis of classes instead of
    /// the model basis.
    pub fn dual_of(&self, classes: &[CohClass]) -> Result<Vec<CohClass>> {
        let r = self.rank();
        let g: Matrix = classes
            .iter()
            .map(|x| classes.iter().map(|y| self.pairing(x, y)).collect())
            .collect();
        let inv = linalg::inverse(&g).ok_or_else(|| Error::validation("degenerate basis"))?;
        Ok((0..classes.len())
            .map(|b| {
                let mut out = CohClass::zero(r);
                for (c, x) in classes.iter().enumerate() {
                    out.add_scaled(x, &inv[c][b]);
                }
                out
            })
            .collect())
    }

    pub fn divisor_row(&self, a: usize) -> Option<&[i64]> {
        self.divisor_pairing[a].as_deref()
    }

    /// `(gamma, beta)` for `gamma` in the span of the degree-one basis.
    pub fn beta_pairing(&self, gamma: &CohClass, beta: &CurveClass) -> Result<Q> {
        let mut total = Q::zero();
        for (a, c) in gamma.components() {
            let row = self.divisor_pairing[a].as_ref().ok_or_else(|| {
                Error::domain(format!("{} is not a degree-one class", self.label(a)))
            })?;
            let p: i64 = row.iter().zip(&beta.0).map(|(r, b)| r * i64::from(*b)).sum();
            total += c * Q::from_integer(p.into());
        }
        Ok(total)
    }

    pub fn ample(&self) -> &CohClass {
        &self.ample
    }

    /// Pairings of an ample class with each lattice generator, which must
    /// be positive integers.
    pub fn weights_of(&self, ample: &CohClass) -> Result<Vec<u64>> {
        (0..self.lattice_rank)
            .map(|k| {
                let mut e = CurveClass::zero(self.lattice_rank);
                e.0[k] = 1;
                let p = self.beta_pairing(ample, &e)?;
                if !p.is_integer() || p <= Q::zero() {
                    return Err(Error::domain(format!(
                        "ample class pairs to {p} with generator {k}"
                    )));
                }
                p.to_integer().try_into().map_err(|_| Error::domain("pairing overflow"))
            })
            .collect()
    }

    pub fn ample_weights(&self) -> Result<Vec<u64>> {
        self.weights_of(&self.ample)
    }

    pub fn qbound(&self, max_degree: u64) -> Result<QBound> {
        QBound::new(self.ample_weights()?, max_degree)
    }

    pub fn chern_classes(&self) -> &[CohClass] {
        &self.chern
    }

    pub fn chern(&self, j: usize) -> CohClass {
        self.chern
            .get(j)
            .cloned()
            .unwrap_or_else(|| CohClass::zero(self.rank()))
    }

    /// `(c_1(V), beta)`.
    pub fn c1_pairing(&self, beta: &CurveClass) -> Result<Q> {
        if self.dimension == 0 || beta.is_zero() {
            return Ok(Q::zero());
        }
        self.beta_pairing(&self.chern(1), beta)
    }

    /// Writes `Delta_a = sum_k h_k ∪ x_k` with `h_k` degree-one basis
    /// elements and `x_k` of degree `deg(a) - 1`. `None` when `Delta_a` is
    /// not in the ideal generated by divisors.
    pub fn divisor_factorization(&self, a: usize) -> Option<Vec<(usize, CohClass)>> {
        let deg = self.degree(a);
        if deg == 0 {
            return None;
        }
        let divisors = self.divisor_indices();
        let lower: Vec<usize> = (0..self.rank()).filter(|&b| self.degree(b) == deg - 1).collect();
        let target: Vec<usize> = (0..self.rank()).filter(|&b| self.degree(b) == deg).collect();
        let unknowns: Vec<(usize, usize)> = divisors
            .iter()
            .flat_map(|&h| lower.iter().map(move |&b| (h, b)))
            .collect();
        let m: Matrix = target
            .iter()
            .map(|&t| {
                unknowns
                    .iter()
                    .map(|&(h, b)| self.cup[h][b].coeff(t).clone())
                    .collect()
            })
            .collect();
        let rhs: Vec<Q> = target
            .iter()
            .map(|&t| if t == a { Q::one() } else { Q::zero() })
            .collect();
        let sol = linalg::solve_any(&m, &rhs)?;
        let mut out: Vec<(usize, CohClass)> = Vec::new();
        for (&(h, b), c) in unknowns.iter().zip(sol) {
            if c.is_zero() {
                continue;
            }
            match out.iter_mut().find(|(hh, _)| *hh == h) {
                Some((_, x)) => x.0[b] += c,
                None => {
                    let mut x = CohClass::zero(self.rank());
                    x.0[b] = c;
                    out.push((h, x));
                }
            }
        }
        Some(out)
    }

    pub fn validate(&self) -> ValidationReport {
        validate::validate_model(self)
    }
}
