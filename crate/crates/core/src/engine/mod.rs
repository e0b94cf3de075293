//! Recursive evaluation of genus-zero correlators
//! `<tau_{d_1,e_1} g_1 ... tau_{d_n,e_n} g_n>_{0,beta}`.
//!
//! * stable descendants reduce to modified correlators (all `d = 0`) by
//!   trading `psi` for `phi` plus a two-point bubble term;
//! * modified correlators reduce to primaries by expanding one `phi` into
//!   boundary divisors of the curve moduli;
//! * primaries with more than three points are reconstructed from the
//!   three-point table through associativity and the divisor axiom;
//! * two-, one- and zero-point correlators are solved from the divisor
//!   equation for the chosen ample class (or the dilaton equation).
//!
//! Every value is memoized on its [`CorrelatorKey`].

mod checks;
mod primary;
mod recursion;
mod table;

use std::collections::HashMap;
use std::sync::RwLock;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use table::{PrimaryRecord, PrimaryTable};

use crate::error::{Error, Result};
use crate::geometry::{CohClass, GeometryModel};
use crate::moduli::{self, PointCorrelatorQuery, TautTable};
use crate::novikov::CurveClass;
use crate::rational::Q;

/// `tau_{d,e} Delta_a`: `psi^d phi^e ev^*(Delta_a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Insertion {
    pub d: u32,
    pub e: u32,
    pub a: usize,
}

impl Insertion {
    pub fn new(d: u32, e: u32, a: usize) -> Self {
        Insertion { d, e, a }
    }

    pub fn primary(a: usize) -> Self {
        Insertion { d: 0, e: 0, a }
    }

    pub fn descendant(d: u32, a: usize) -> Self {
        Insertion { d, e: 0, a }
    }

    pub fn modified(e: u32, a: usize) -> Self {
        Insertion { d: 0, e, a }
    }
}

/// Genus, curve class and the sorted insertion multiset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CorrelatorKey {
    pub g: u32,
    pub beta: CurveClass,
    pub insertions: Vec<Insertion>,
}

impl CorrelatorKey {
    pub fn new(g: u32, beta: CurveClass, mut insertions: Vec<Insertion>) -> Self {
        insertions.sort_unstable();
        CorrelatorKey { g, beta, insertions }
    }

    pub fn genus0(beta: CurveClass, insertions: Vec<Insertion>) -> Self {
        Self::new(0, beta, insertions)
    }

    pub fn n(&self) -> usize {
        self.insertions.len()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnstableRoute {
    /// Solve the divisor equation for the ample class for the lower-point side.
    #[default]
    Divisor,
    /// `<tau_d g> = -<tau_1 1, tau_d g>` and `<> = -1/2 <tau_1 1>`.
    Dilaton,
}

#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub use_cache: bool,
    /// Return zero without recursing when the degree count rules a value out.
    pub dimension_shortcut: bool,
    pub unstable_route: UnstableRoute,
    /// Divisor class used in the unstable-range reductions; the model's
    /// ample class when `None`.
    pub gamma0: Option<CohClass>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            use_cache: true,
            dimension_shortcut: true,
            unstable_route: UnstableRoute::Divisor,
            gamma0: None,
        }
    }
}

pub struct Engine {
    model: GeometryModel,
    table: PrimaryTable,
    taut: TautTable,
    config: EngineConfig,
    gamma0: CohClass,
    /// Sparse rows of the inverse Gram matrix.
    ginv: Vec<Vec<(usize, Q)>>,
    cache: RwLock<HashMap<CorrelatorKey, Q>>,
}

impl Engine {
    pub fn new(model: GeometryModel, table: PrimaryTable, config: EngineConfig) -> Result<Self> {
        let gamma0 = config.gamma0.clone().unwrap_or_else(|| model.ample().clone());
        if gamma0.len() != model.rank() {
            return Err(Error::Config("gamma0 has the wrong number of coordinates".into()));
        }
        if model.lattice_rank() > 0 {
            model.weights_of(&gamma0)?;
        }
        let inv = model
            .gram_inverse()
            .ok_or_else(|| Error::validation("Poincaré pairing is degenerate"))?;
        let ginv = inv
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(b, v)| (b, v.clone()))
                    .collect()
            })
            .collect();
        Ok(Engine {
            model,
            table,
            taut: TautTable::new(),
            config,
            gamma0,
            ginv,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn with_taut_table(mut self, taut: TautTable) -> Self {
        self.taut = taut;
        self
    }

    pub fn model(&self) -> &GeometryModel {
        &self.model
    }

    pub fn table(&self) -> &PrimaryTable {
        &self.table
    }

    pub fn taut_table(&self) -> &TautTable {
        &self.taut
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn gamma0(&self) -> &CohClass {
        &self.gamma0
    }

    /// `(gamma0, beta)`.
    pub fn gamma0_pairing(&self, beta: &CurveClass) -> Result<Q> {
        if beta.is_zero() {
            return Ok(Q::zero());
        }
        self.model.beta_pairing(&self.gamma0, beta)
    }

    pub fn cache_len(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }

    pub fn clear_cache(&self) {
        self.cache.write().expect("cache lock").clear();
    }

    fn memo(&self, key: CorrelatorKey, f: impl FnOnce(&CorrelatorKey) -> Result<Q>) -> Result<Q> {
        if self.config.use_cache {
            if let Some(v) = self.cache.read().expect("cache lock").get(&key) {
                return Ok(v.clone());
            }
        }
        let v = f(&key)?;
        if self.config.use_cache {
            self.cache.write().expect("cache lock").insert(key, v.clone());
        }
        Ok(v)
    }

    fn check_beta(&self, beta: &CurveClass) -> Result<()> {
        if beta.rank() != self.model.lattice_rank() {
            return Err(Error::domain(format!(
                "curve class {beta} has rank {}, model lattice rank is {}",
                beta.rank(),
                self.model.lattice_rank()
            )));
        }
        Ok(())
    }

    fn check_insertions(&self, ins: &[Insertion]) -> Result<()> {
        match ins.iter().find(|i| i.a >= self.model.rank()) {
            Some(i) => Err(Error::domain(format!("basis index {} out of range", i.a))),
            None => Ok(()),
        }
    }

    /// Whether the degree count `sum (d + e + deg) = dim V + (c_1, beta) + n - 3`
    /// holds.
    pub fn dimension_matches(&self, beta: &CurveClass, ins: &[Insertion]) -> Result<bool> {
        let lhs: u64 = ins
            .iter()
            .map(|i| u64::from(i.d + i.e + self.model.degree(i.a)))
            .sum();
        let rhs = Q::from_integer(self.model.dimension().into()) + self.model.c1_pairing(beta)?
            + Q::from_integer((ins.len() as i64 - 3).into());
        Ok(Q::from_integer(lhs.into()) == rhs)
    }

    fn pruned(&self, beta: &CurveClass, ins: &[Insertion]) -> Result<bool> {
        Ok(self.config.dimension_shortcut && !self.dimension_matches(beta, ins)?)
    }

    /// Calls `f` on every basis expansion of class-valued insertions and
    /// returns the coefficient-weighted sum.
    fn expand(
        &self,
        items: &[(u32, u32, &CohClass)],
        f: &mut dyn FnMut(&[Insertion]) -> Result<Q>,
    ) -> Result<Q> {
        fn rec(
            items: &[(u32, u32, &CohClass)],
            cur: &mut Vec<Insertion>,
            coeff: Q,
            f: &mut dyn FnMut(&[Insertion]) -> Result<Q>,
            acc: &mut Q,
        ) -> Result<()> {
            let Some(((d, e, class), rest)) = items.split_first() else {
                let v = f(cur)?;
                if !v.is_zero() {
                    *acc += coeff * v;
                }
                return Ok(());
            };
            for (a, c) in class.components() {
                cur.push(Insertion::new(*d, *e, a));
                rec(rest, cur, &coeff * c, f, acc)?;
                cur.pop();
            }
            Ok(())
        }
        let mut acc = Q::zero();
        rec(items, &mut Vec::with_capacity(items.len()), Q::one(), f, &mut acc)?;
        Ok(acc)
    }

    /// Any genus-zero correlator with class-valued insertions `(d, e, gamma)`.
    pub fn correlator_classes(&self, beta: &CurveClass, items: &[(u32, u32, &CohClass)]) -> Result<Q> {
        self.expand(items, &mut |ins| self.genus0(beta, ins))
    }

    /// Genus-zero dispatcher for basis insertions.
    fn genus0(&self, beta: &CurveClass, ins: &[Insertion]) -> Result<Q> {
        match ins.len() {
            0 | 1 => {
                if ins.iter().any(|i| i.e > 0) {
                    return Err(Error::domain("phi powers need at least three marked points"));
                }
                self.unstable(beta, ins.first().map(|i| (i.d, i.a)))
            }
            2 => {
                if ins.iter().any(|i| i.e > 0) {
                    return Err(Error::domain("phi powers need at least three marked points"));
                }
                self.two_point_basis(beta, (ins[0].d, ins[0].a), (ins[1].d, ins[1].a))
            }
            _ => self.generalized(beta, ins.to_vec()),
        }
    }

    /// `<tau_{d_1} g_1 ... tau_{d_n} g_n>_{g,beta}` with basis classes.
    ///
    /// Genus zero at `beta != 0` runs the recursions; `beta = 0` uses the
    /// constant-map formula, reading the tautological table for `g >= 1`.
    pub fn descendant_correlator(&self, g: u32, beta: &CurveClass, ins: &[(u32, usize)]) -> Result<Q> {
        self.check_beta(beta)?;
        let ins: Vec<Insertion> = ins.iter().map(|&(d, a)| Insertion::descendant(d, a)).collect();
        self.check_insertions(&ins)?;
        if beta.is_zero() {
            return self.point_value(g, &ins);
        }
        if g > 0 {
            return Err(Error::OutOfScope(format!(
                "genus {g} correlators at nonzero curve class {beta}"
            )));
        }
        self.genus0(beta, &ins)
    }

    fn point_value(&self, g: u32, ins: &[Insertion]) -> Result<Q> {
        let q = PointCorrelatorQuery {
            g,
            insertions: ins
                .iter()
                .map(|i| (i.d + i.e, self.model.basis_class(i.a)))
                .collect(),
        };
        moduli::point_correlator(&q, &self.model, &self.taut)
    }

    /// `<prod tau_{d_i,e_i} Delta_{a_i}>_{0,beta}`, always through the
    /// recursion (also at `beta = 0`).
    pub fn generalized_correlator(&self, beta: &CurveClass, ins: &[Insertion]) -> Result<Q> {
        self.check_beta(beta)?;
        self.check_insertions(ins)?;
        if ins.len() < 3 && ins.iter().any(|i| i.e > 0) {
            return Err(Error::domain("phi powers need at least three marked points"));
        }
        self.genus0(beta, ins)
    }

    /// `<prod tau_{0,e_i} Delta_{a_i}>_{0,beta}`.
    pub fn modified_correlator(&self, beta: &CurveClass, ins: &[(u32, usize)]) -> Result<Q> {
        if ins.len() < 3 {
            return Err(Error::domain("modified correlators need at least three marked points"));
        }
        let ins: Vec<Insertion> = ins.iter().map(|&(e, a)| Insertion::modified(e, a)).collect();
        self.generalized_correlator(beta, &ins)
    }

    /// Three-point primary `<Delta_a Delta_b Delta_c>_{0,beta}`.
    pub fn primary3(&self, beta: &CurveClass, a: usize, b: usize, c: usize) -> Result<Q> {
        self.check_beta(beta)?;
        self.check_insertions(&[Insertion::primary(a), Insertion::primary(b), Insertion::primary(c)])?;
        self.primary(beta, vec![a, b, c])
    }

    /// Two-point descendant `<tau_{d1} g1, tau_{d2} g2>_{0,beta}`.
    pub fn two_point(&self, beta: &CurveClass, (d1, g1): (u32, &CohClass), (d2, g2): (u32, &CohClass)) -> Result<Q> {
        self.check_beta(beta)?;
        self.expand(&[(d1, 0, g1), (d2, 0, g2)], &mut |ins| {
            self.two_point_basis(beta, (ins[0].d, ins[0].a), (ins[1].d, ins[1].a))
        })
    }
}
