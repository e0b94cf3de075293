use std::collections::HashMap;

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{multisets, symmetry_factor, ClassSeries, Monomial, PhaseIndex, PotentialSeries, TransformT};
use crate::engine::{Engine, Insertion};
use crate::error::{Error, Result};
use crate::geometry::CohClass;
use crate::novikov::{CurveClass, NovikovSeries, QBound, TruncationPolicy};
use crate::rational::Q;

/// Series computations over one engine at a fixed truncation.
pub struct PhaseSpace<'e> {
    engine: &'e Engine,
    policy: TruncationPolicy,
    bound: QBound,
    classes: Vec<CurveClass>,
    duals: Vec<CohClass>,
}

/// Both sides of `<prod tau_{d_i} g_i> = <prod sum_j tau_{0,j} U_{d_i - j}(g_i)>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionCheck {
    pub monomial: Monomial,
    pub lhs: NovikovSeries,
    pub rhs: NovikovSeries,
}

impl SubstitutionCheck {
    pub fn passed(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Clone, Debug)]
pub struct Theorem22Report {
    pub f_terms: usize,
    pub g_terms: usize,
    /// Monomials where `F^st` and `G(Tx)` differ, with both coefficients.
    pub mismatches: Vec<(Monomial, NovikovSeries, NovikovSeries)>,
    pub substitutions: Vec<SubstitutionCheck>,
    pub transform_inverse_ok: bool,
    pub transform_weight_raising: bool,
}

impl Theorem22Report {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
            && self.substitutions.iter().all(SubstitutionCheck::passed)
            && self.transform_inverse_ok
            && self.transform_weight_raising
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct WdvvReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl WdvvReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl<'e> PhaseSpace<'e> {
    pub fn new(engine: &'e Engine, policy: TruncationPolicy) -> Result<Self> {
        let model = engine.model();
        let bound = if model.lattice_rank() == 0 {
            QBound::new(Vec::new(), policy.max_beta_degree)?
        } else {
            model.qbound(policy.max_beta_degree)?
        };
        let classes = bound.classes();
        let duals = model.dual_bases()?.delta_dual;
        Ok(PhaseSpace {
            engine,
            policy,
            bound,
            classes,
            duals,
        })
    }

    pub fn engine(&self) -> &Engine {
        self.engine
    }

    pub fn policy(&self) -> TruncationPolicy {
        self.policy
    }

    pub fn bound(&self) -> &QBound {
        &self.bound
    }

    fn rank(&self) -> usize {
        self.engine.model().rank()
    }

    fn zero(&self) -> NovikovSeries {
        NovikovSeries::zero(&self.bound)
    }

    fn constant(&self, c: Q) -> NovikovSeries {
        NovikovSeries::constant(&self.bound, c)
    }

    /// Coordinates `x_{d,a}` with `d <= max_descendant`.
    pub fn index(&self) -> Vec<PhaseIndex> {
        (0..=self.policy.max_descendant)
            .flat_map(|d| (0..self.rank()).map(move |a| PhaseIndex::new(d, a)))
            .collect()
    }

    /// `sum_beta q^beta <tau_{d_1} g_1 ... tau_{d_n} g_n>_{0,beta}`.
    pub fn summed_correlator(&self, items: &[(u32, &CohClass)]) -> Result<NovikovSeries> {
        let refs: Vec<(u32, u32, &CohClass)> = items.iter().map(|(d, c)| (*d, 0, *c)).collect();
        let mut out = self.zero();
        for beta in &self.classes {
            out.add_term(beta.clone(), self.engine.correlator_classes(beta, &refs)?);
        }
        Ok(out)
    }

    /// Summed generalized correlator with basis insertions.
    pub fn summed_generalized(&self, ins: &[Insertion]) -> Result<NovikovSeries> {
        let mut out = self.zero();
        for beta in &self.classes {
            out.add_term(beta.clone(), self.engine.generalized_correlator(beta, ins)?);
        }
        Ok(out)
    }

    /// `<x y z>_{0,beta}` from three-point primary data only.
    fn primary_triple(&self, beta: &CurveClass, x: &CohClass, y: &CohClass, z: &CohClass) -> Result<Q> {
        let mut total = Q::zero();
        for (a, ca) in x.components() {
            for (b, cb) in y.components() {
                for (c, cc) in z.components() {
                    let v = self.engine.primary3(beta, a, b, c)?;
                    if !v.is_zero() {
                        total += ca * cb * cc * v;
                    }
                }
            }
        }
        Ok(total)
    }

    /// `x · y = sum_a Delta_a <Delta^a x y>` in small quantum cohomology.
    pub fn quantum_product(&self, x: &CohClass, y: &CohClass) -> Result<ClassSeries> {
        let mut out = ClassSeries::zero(self.rank(), &self.bound);
        for a in 0..self.rank() {
            for beta in &self.classes {
                let v = self.primary_triple(beta, &self.duals[a], x, y)?;
                out.coeffs[a].add_term(beta.clone(), v);
            }
        }
        Ok(out)
    }

    /// `U_0(g) = g`, `U_d(g) = sum_a sum_beta q^beta <tau_{d-1} g, Delta_a>_{0,beta} Delta^a`.
    pub fn u_operator(&self, d: u32, gamma: &CohClass) -> Result<ClassSeries> {
        let mut out = ClassSeries::zero(self.rank(), &self.bound);
        if d == 0 {
            for (a, c) in gamma.components() {
                out.coeffs[a] = self.constant(c.clone());
            }
            return Ok(out);
        }
        for a in 0..self.rank() {
            let delta = self.engine.model().basis_class(a);
            for beta in &self.classes {
                if beta.is_zero() {
                    continue;
                }
                let v = self.engine.two_point(beta, (d - 1, gamma), (0, &delta))?;
                if v.is_zero() {
                    continue;
                }
                for (b, c) in self.duals[a].components() {
                    out.coeffs[b].add_term(beta.clone(), &v * c);
                }
            }
        }
        Ok(out)
    }

    fn gamma0_pairings(&self) -> Result<HashMap<CurveClass, i64>> {
        self.classes
            .iter()
            .map(|b| {
                let p = self.engine.gamma0_pairing(b)?;
                let i = p
                    .to_integer()
                    .to_i64()
                    .filter(|_| p.is_integer())
                    .ok_or_else(|| Error::domain(format!("gamma0 pairing {p} with {b} is not a small integer")))?;
                Ok((b.clone(), i))
            })
            .collect()
    }

    /// `<tau_d g1, g2>` summed over `beta`, through iterated antiderivatives of
    /// three-point series:
    /// `sum_{j=1}^{d+1} (-1)^{j+1} D^{-j} [<gamma0, tau_{d+1-j}(gamma0^{j-1} g1), g2> - (beta = 0 part)]`.
    pub fn two_point_via_25(&self, d: u32, g1: &CohClass, g2: &CohClass) -> Result<NovikovSeries> {
        let pairings = self.gamma0_pairings()?;
        let pairing = |b: &CurveClass| pairings.get(b).copied().unwrap_or(0);
        let gamma0 = self.engine.gamma0();
        let model = self.engine.model();
        let mut lifted = g1.clone();
        let mut total = self.zero();
        for j in 1..=d + 1 {
            let mut s = self.triple_via_product(d + 1 - j, &lifted, g2)?.without_constant();
            for _ in 0..j {
                s = s.antiderivative(pairing)?;
            }
            total = if j % 2 == 1 { &total + &s } else { &total - &s };
            lifted = model.cup(gamma0, &lifted);
        }
        Ok(total)
    }

    /// `<gamma0, tau_k x, y>` summed over `beta`: primary data for `k = 0`,
    /// otherwise `<tau_{k-1} x, gamma0 · y>`.
    fn triple_via_product(&self, k: u32, x: &CohClass, y: &CohClass) -> Result<NovikovSeries> {
        let gamma0 = self.engine.gamma0();
        if k == 0 {
            let mut out = self.zero();
            for beta in &self.classes {
                out.add_term(beta.clone(), self.primary_triple(beta, gamma0, x, y)?);
            }
            return Ok(out);
        }
        let product = self.quantum_product(gamma0, y)?;
        let mut out = self.zero();
        for a in 0..self.rank() {
            let c = product.coeff(a);
            if c.is_zero() {
                continue;
            }
            let tp = self.two_point_via_25(k - 1, x, &self.engine.model().basis_class(a))?;
            out = &out + &(c * &tp);
        }
        Ok(out)
    }

    /// `y_{c,b} = x_{c,b} + sum_{d > c, a} <tau_{d-c-1} Delta_a, Delta^b> x_{d,a}`.
    pub fn build_t(&self) -> Result<TransformT> {
        let index = self.index();
        let mut t = TransformT::identity(index.clone(), &self.bound);
        let model = self.engine.model();
        for &row in &index {
            for &col in &index {
                if col.d <= row.d {
                    continue;
                }
                let delta = model.basis_class(col.a);
                let mut entry = self.zero();
                for beta in &self.classes {
                    if beta.is_zero() {
                        continue;
                    }
                    let v = self.engine.two_point(beta, (col.d - row.d - 1, &delta), (0, &self.duals[row.a]))?;
                    entry.add_term(beta.clone(), v);
                }
                t.set(row, col, entry);
            }
        }
        Ok(t)
    }

    fn assemble(
        &self,
        monomials: Vec<Monomial>,
        value: impl Fn(&CurveClass, &[PhaseIndex]) -> Result<Q> + Sync,
    ) -> Result<PotentialSeries> {
        let coeffs: Vec<NovikovSeries> = monomials
            .par_iter()
            .map(|m| {
                let sym = symmetry_factor(m);
                let mut c = self.zero();
                for beta in &self.classes {
                    let v = value(beta, m)?;
                    if !v.is_zero() {
                        c.add_term(beta.clone(), v / &sym);
                    }
                }
                Ok(c)
            })
            .collect::<Result<_>>()?;
        let mut out = PotentialSeries::zero(&self.bound, self.policy.max_x_degree);
        for (m, c) in monomials.into_iter().zip(coeffs) {
            out.add_term(m, &c);
        }
        Ok(out)
    }

    fn stable_monomials(&self, index: &[PhaseIndex]) -> Vec<Monomial> {
        let top = self.policy.max_x_degree as usize;
        if top < 3 {
            return Vec::new();
        }
        multisets(index, 3..=top)
    }

    /// `F^st`: summed descendant correlators over stable monomials.
    pub fn potential_f_st(&self) -> Result<PotentialSeries> {
        let monomials = self.stable_monomials(&self.index());
        self.assemble(monomials, |beta, m| {
            let ins: Vec<(u32, usize)> = m.iter().map(|i| (i.d, i.a)).collect();
            self.engine.descendant_correlator(0, beta, &ins)
        })
    }

    /// `G`: every `tau_d` replaced by `tau_{0,d}`.
    pub fn potential_g(&self) -> Result<PotentialSeries> {
        let monomials = self.stable_monomials(&self.index());
        self.assemble(monomials, |beta, m| {
            let ins: Vec<(u32, usize)> = m.iter().map(|i| (i.d, i.a)).collect();
            self.engine.modified_correlator(beta, &ins)
        })
    }

    /// `Phi`: primaries only.
    pub fn primary_potential_phi(&self) -> Result<PotentialSeries> {
        let index: Vec<PhaseIndex> = (0..self.rank()).map(|a| PhaseIndex::new(0, a)).collect();
        let monomials = self.stable_monomials(&index);
        self.assemble(monomials, |beta, m| {
            let ins: Vec<(u32, usize)> = m.iter().map(|i| (0, i.a)).collect();
            self.engine.descendant_correlator(0, beta, &ins)
        })
    }

    /// `G(T x)`: each `y_{c,b}` replaced by its linear form in `x`.
    pub fn compose_with_t(&self, g: &PotentialSeries, t: &TransformT) -> Result<PotentialSeries> {
        let top = g.max_x_degree();
        let mut rows: HashMap<PhaseIndex, PotentialSeries> = HashMap::new();
        for &i in t.index() {
            rows.insert(i, PotentialSeries::linear(&self.bound, top, t.row(i)));
        }
        let terms: Vec<(&Monomial, &NovikovSeries)> = g.terms().collect();
        let parts: Vec<PotentialSeries> = terms
            .par_iter()
            .map(|(m, c)| {
                let mut prod = PotentialSeries::zero(&self.bound, top);
                prod.add_term(Vec::new(), c);
                for i in m.iter() {
                    let row = rows
                        .get(i)
                        .ok_or_else(|| Error::Config(format!("{i} is outside the transform's index")))?;
                    prod = prod.try_mul(row)?;
                }
                Ok(prod)
            })
            .collect::<Result<_>>()?;
        let mut out = PotentialSeries::zero(&self.bound, top);
        for p in &parts {
            out = out.try_add(p)?;
        }
        Ok(out)
    }

    /// Both sides of the substitution `tau_{d,0} g -> sum_j tau_{0,j} U_{d-j}(g)`
    /// on one summed correlator.
    pub fn substitution_check(&self, m: &[PhaseIndex]) -> Result<SubstitutionCheck> {
        let model = self.engine.model();
        let classes: Vec<CohClass> = m.iter().map(|i| model.basis_class(i.a)).collect();
        let items: Vec<(u32, &CohClass)> = m.iter().zip(&classes).map(|(i, c)| (i.d, c)).collect();
        let lhs = self.summed_correlator(&items)?;

        // per insertion: every (j, b, coefficient) with tau_{0,j} Delta_b
        let mut options: Vec<Vec<(u32, usize, NovikovSeries)>> = Vec::new();
        for i in m {
            let mut opts = Vec::new();
            for j in 0..=i.d {
                let u = self.u_operator(i.d - j, &model.basis_class(i.a))?;
                for b in 0..self.rank() {
                    if !u.coeff(b).is_zero() {
                        opts.push((j, b, u.coeff(b).clone()));
                    }
                }
            }
            options.push(opts);
        }
        let mut rhs = self.zero();
        let mut pick = vec![0usize; options.len()];
        if options.iter().all(|o| !o.is_empty()) {
            loop {
                let ins: Vec<Insertion> = pick
                    .iter()
                    .zip(&options)
                    .map(|(&p, o)| Insertion::modified(o[p].0, o[p].1))
                    .collect();
                let corr = self.summed_generalized(&ins)?;
                if !corr.is_zero() {
                    let mut term = corr;
                    for (&p, o) in pick.iter().zip(&options) {
                        term = term.try_mul(&o[p].2)?;
                    }
                    rhs = rhs.try_add(&term)?;
                }
                let mut k = 0;
                loop {
                    if k == pick.len() {
                        return Ok(SubstitutionCheck {
                            monomial: m.to_vec(),
                            lhs,
                            rhs,
                        });
                    }
                    pick[k] += 1;
                    if pick[k] < options[k].len() {
                        break;
                    }
                    pick[k] = 0;
                    k += 1;
                }
            }
        }
        Ok(SubstitutionCheck {
            monomial: m.to_vec(),
            lhs,
            rhs,
        })
    }

    /// `F^st = G(T x)` coefficientwise, plus the substitution identity on
    /// three-point monomials and on four-point monomials of total level
    /// at most two.
    pub fn verify_theorem22(&self) -> Result<Theorem22Report> {
        let f = self.potential_f_st()?;
        let g = self.potential_g()?;
        let t = self.build_t()?;
        let t_inv = t.invert()?;
        let transform_inverse_ok = t.try_mul(&t_inv)?.is_identity();
        let gt = self.compose_with_t(&g, &t)?;
        let diff = f.try_sub(&gt)?;
        let mismatches = diff
            .terms()
            .map(|(m, _)| (m.clone(), f.coeff(m), gt.coeff(m)))
            .collect();
        let subs: Vec<Monomial> = self
            .stable_monomials(&self.index())
            .into_iter()
            .filter(|m| m.len() == 3 || (m.len() == 4 && m.iter().map(|i| i.d).sum::<u32>() <= 2))
            .collect();
        let substitutions = subs
            .par_iter()
            .map(|m| self.substitution_check(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Theorem22Report {
            f_terms: f.len(),
            g_terms: g.len(),
            mismatches,
            substitutions,
            transform_inverse_ok,
            transform_weight_raising: t.is_weight_raising(),
        })
    }

    /// Associativity of the product given by third derivatives of `Phi`,
    /// compared up to the degree where `Phi` is complete.
    pub fn wdvv_check(&self, phi: &PotentialSeries) -> Result<WdvvReport> {
        let r = self.rank();
        let top = phi.max_x_degree().saturating_sub(3);
        let ginv = self
            .engine
            .model()
            .gram_inverse()
            .ok_or_else(|| Error::validation("Poincaré pairing is degenerate"))?
            .clone();
        let x = |a: usize| PhaseIndex::new(0, a);
        let mut third: HashMap<(usize, usize, usize), PotentialSeries> = HashMap::new();
        for a in 0..r {
            let da = phi.derivative(x(a));
            for b in a..r {
                let dab = da.derivative(x(b));
                for c in b..r {
                    third.insert((a, b, c), dab.derivative(x(c)).truncated(top));
                }
            }
        }
        let phi3 = |a: usize, b: usize, c: usize| {
            let mut k = [a, b, c];
            k.sort_unstable();
            &third[&(k[0], k[1], k[2])]
        };
        let contract = |a: usize, b: usize, c: usize, d: usize| -> Result<PotentialSeries> {
            let mut total = PotentialSeries::zero(&self.bound, top);
            for (e, row) in ginv.iter().enumerate() {
                for (f, g) in row.iter().enumerate() {
                    if g.is_zero() {
                        continue;
                    }
                    let prod = phi3(a, b, e).try_mul(phi3(f, c, d))?;
                    let mut scaled = PotentialSeries::zero(&self.bound, top);
                    for (m, s) in prod.terms() {
                        scaled.add_term(m.clone(), &s.scale(g));
                    }
                    total = total.try_add(&scaled)?;
                }
            }
            Ok(total)
        };
        let mut report = WdvvReport::default();
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    for d in 0..r {
                        report.checked += 1;
                        let lhs = contract(a, b, c, d)?;
                        let rhs = contract(a, c, b, d)?;
                        if lhs != rhs {
                            report.failures.push(format!("associativity fails for ({a},{b},{c},{d})"));
                        }
                    }
                }
            }
        }
        Ok(report)
    }
}
