use num_traits::{One, Zero};

use super::{CorrelatorKey, Engine, Insertion, UnstableRoute};
use crate::error::{Error, Result};
use crate::geometry::CohClass;
use crate::moduli;
use crate::novikov::CurveClass;
use crate::rational::{self, Q};

/// Groups a sorted slice into `(item, multiplicity)` runs.
pub(super) fn runs<T: Copy + PartialEq>(items: &[T]) -> Vec<(T, u32)> {
    let mut out: Vec<(T, u32)> = Vec::new();
    for &x in items {
        match out.last_mut() {
            Some((y, c)) if *y == x => *c += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

/// Every sub-multiset of `runs` as `(chosen, complement, weight)`, where
/// `weight` counts the labelled subsets with that content.
pub(super) fn sub_multisets<T: Copy>(runs: &[(T, u32)]) -> Vec<(Vec<T>, Vec<T>, Q)> {
    let mut out = Vec::new();
    let mut pick = vec![0u32; runs.len()];
    loop {
        let mut chosen = Vec::new();
        let mut rest = Vec::new();
        let mut w = Q::one();
        for (&(x, m), &k) in runs.iter().zip(&pick) {
            chosen.extend(std::iter::repeat_n(x, k as usize));
            rest.extend(std::iter::repeat_n(x, (m - k) as usize));
            w *= Q::from_integer(rational::binomial(m.into(), k.into()));
        }
        out.push((chosen, rest, w));
        let mut t = 0;
        loop {
            if t == runs.len() {
                return out;
            }
            if pick[t] < runs[t].1 {
                pick[t] += 1;
                break;
            }
            pick[t] = 0;
            t += 1;
        }
    }
}

impl Engine {
    /// Stable range (`n >= 3`), canonical reduction order.
    pub(super) fn generalized(&self, beta: &CurveClass, ins: Vec<Insertion>) -> Result<Q> {
        let key = CorrelatorKey::genus0(beta.clone(), ins);
        if key.insertions.iter().all(|i| i.d == 0 && i.e == 0) {
            let ids = key.insertions.iter().map(|i| i.a).collect();
            return self.primary(beta, ids);
        }
        self.memo(key, |key| {
            let ins = &key.insertions;
            if self.pruned(beta, ins)? {
                return Ok(Q::zero());
            }
            // phi vanishes on three-pointed curves
            if ins.len() == 3 && ins.iter().any(|i| i.e > 0) {
                return Ok(Q::zero());
            }
            match ins.iter().position(|i| i.d > 0) {
                Some(j) => self.psi_step(beta, ins, j),
                None => self.phi_step_canonical(beta, ins),
            }
        })
    }

    /// Trades one `psi_j` for `phi_j` plus the bubble where mark `j` sits
    /// alone on a non-contracted component.
    pub(super) fn psi_step(&self, beta: &CurveClass, ins: &[Insertion], j: usize) -> Result<Q> {
        let x = ins[j];
        debug_assert!(x.d > 0);
        let mut shifted = ins.to_vec();
        shifted[j] = Insertion::new(x.d - 1, x.e + 1, x.a);
        let mut total = self.generalized(beta, shifted)?;
        for (b1, b2) in beta.splittings() {
            if b1.is_zero() {
                continue;
            }
            for a in 0..self.model.rank() {
                let tp = self.two_point_basis(&b1, (x.d - 1, x.a), (0, a))?;
                if tp.is_zero() {
                    continue;
                }
                for (b, g) in &self.ginv[a] {
                    let mut rest = ins.to_vec();
                    rest[j] = Insertion::new(0, x.e, *b);
                    let v = self.generalized(&b2, rest)?;
                    if !v.is_zero() {
                        total += &tp * g * v;
                    }
                }
            }
        }
        Ok(total)
    }

    /// All `d = 0`, some `e > 0`, `n >= 4`: expands one `phi_i` with the
    /// first marked `i` and the first two other marks as auxiliaries.
    fn phi_step_canonical(&self, beta: &CurveClass, ins: &[Insertion]) -> Result<Q> {
        let i = ins.iter().position(|x| x.e > 0).expect("some phi power");
        let others: Vec<usize> = (0..ins.len()).filter(|&m| m != i).collect();
        let (j, k) = (others[0], others[1]);
        let rest: Vec<Insertion> = others[2..].iter().map(|&m| ins[m]).collect();
        let mut lowered = ins[i];
        lowered.e -= 1;
        let mut total = Q::zero();
        for (chosen, complement, w) in sub_multisets(&runs(&rest)) {
            if chosen.is_empty() {
                continue;
            }
            let mut left = chosen;
            left.push(lowered);
            let mut right = complement;
            right.push(ins[j]);
            right.push(ins[k]);
            total += w * self.split_sum(beta, &left, &right)?;
        }
        Ok(total)
    }

    /// `sum_{b1+b2=beta} sum_{a,b} eta^{ab} <left, Delta_a>_{b1} <Delta_b, right>_{b2}`.
    fn split_sum(&self, beta: &CurveClass, left: &[Insertion], right: &[Insertion]) -> Result<Q> {
        let mut total = Q::zero();
        for (b1, b2) in beta.splittings() {
            for a in 0..self.model.rank() {
                let mut l = left.to_vec();
                l.push(Insertion::primary(a));
                let lv = self.genus0(&b1, &l)?;
                if lv.is_zero() {
                    continue;
                }
                for (b, g) in &self.ginv[a] {
                    let mut r = right.to_vec();
                    r.push(Insertion::primary(*b));
                    let rv = self.genus0(&b2, &r)?;
                    if !rv.is_zero() {
                        total += &lv * g * rv;
                    }
                }
            }
        }
        Ok(total)
    }

    /// One boundary expansion of `phi_i` with explicit auxiliary marks
    /// `j, k` (0-based positions in `ins`), using the labelled partitions.
    pub fn modified_step(&self, beta: &CurveClass, ins: &[Insertion], i: usize, j: usize, k: usize) -> Result<Q> {
        self.check_beta(beta)?;
        self.check_insertions(ins)?;
        let n = ins.len();
        if ins.iter().any(|x| x.d > 0) {
            return Err(Error::domain("boundary expansion applies to modified correlators"));
        }
        if i >= n || ins[i].e == 0 {
            return Err(Error::domain("the expanded mark needs a phi power"));
        }
        let parts = moduli::psi_boundary_partitions(i + 1, j + 1, k + 1, n)?;
        let mut total = Q::zero();
        for s in parts {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (m, x) in ins.iter().enumerate() {
                if m == i {
                    left.push(Insertion::new(0, x.e - 1, x.a));
                } else if s.contains(&(m + 1)) {
                    left.push(*x);
                } else {
                    right.push(*x);
                }
            }
            total += self.split_sum(beta, &left, &right)?;
        }
        Ok(total)
    }

    /// One reduction step at a chosen mark `j` with `d_j >= 1`.
    pub fn generalized_at(&self, beta: &CurveClass, ins: &[Insertion], j: usize) -> Result<Q> {
        self.check_beta(beta)?;
        self.check_insertions(ins)?;
        if ins.len() < 3 {
            return Err(Error::domain("the reduction needs at least three marked points"));
        }
        if ins.get(j).is_none_or(|x| x.d == 0) {
            return Err(Error::domain(format!("mark {j} carries no psi power")));
        }
        if ins.len() == 3 && ins.iter().any(|x| x.e > 0) {
            return Ok(Q::zero());
        }
        self.psi_step(beta, ins, j)
    }

    /// Evaluates with the first reduction step taken in the given order of
    /// insertions rather than the canonical one.
    pub fn evaluate_in_order(&self, beta: &CurveClass, ins: &[Insertion]) -> Result<Q> {
        self.check_beta(beta)?;
        self.check_insertions(ins)?;
        let n = ins.len();
        if n >= 3 {
            if let Some(j) = ins.iter().position(|x| x.d > 0) {
                return self.generalized_at(beta, ins, j);
            }
            if n >= 4 {
                if let Some(i) = ins.iter().position(|x| x.e > 0) {
                    let others: Vec<usize> = (0..n).filter(|&m| m != i).collect();
                    return self.modified_step(beta, ins, i, others[0], others[1]);
                }
            }
        }
        self.genus0(beta, ins)
    }

    /// Three-point descendants by the bubble recursion alone, without the
    /// cache or the general stable-range machinery.
    pub fn three_point_descendant(&self, beta: &CurveClass, ins: &[(u32, usize)]) -> Result<Q> {
        self.check_beta(beta)?;
        if ins.len() != 3 {
            return Err(Error::domain("three insertions expected"));
        }
        let ins: Vec<Insertion> = ins.iter().map(|&(d, a)| Insertion::descendant(d, a)).collect();
        self.check_insertions(&ins)?;
        self.three_point_rec(beta, &ins)
    }

    fn three_point_rec(&self, beta: &CurveClass, ins: &[Insertion]) -> Result<Q> {
        let Some(j) = ins.iter().position(|x| x.d > 0) else {
            return self.primary(beta, ins.iter().map(|x| x.a).collect());
        };
        let x = ins[j];
        let mut total = Q::zero();
        for (b1, b2) in beta.splittings() {
            if b1.is_zero() {
                continue;
            }
            for a in 0..self.model.rank() {
                let tp = self.two_point_basis(&b1, (x.d - 1, x.a), (0, a))?;
                if tp.is_zero() {
                    continue;
                }
                for (b, g) in &self.ginv[a] {
                    let mut rest = ins.to_vec();
                    rest[j] = Insertion::primary(*b);
                    total += &tp * g * self.three_point_rec(&b2, &rest)?;
                }
            }
        }
        Ok(total)
    }

    /// `gamma0^k ∪ x`.
    fn gamma0_power_times(&self, k: u32, x: &CohClass) -> CohClass {
        (0..k).fold(x.clone(), |acc, _| self.model.cup(&self.gamma0, &acc))
    }

    fn inverse_pairing(&self, beta: &CurveClass) -> Result<Q> {
        let l = self.gamma0_pairing(beta)?;
        if l.is_zero() {
            return Err(Error::domain(format!("gamma0 pairs to zero with {beta}")));
        }
        Ok(l.recip())
    }

    pub(super) fn two_point_basis(&self, beta: &CurveClass, x: (u32, usize), y: (u32, usize)) -> Result<Q> {
        if beta.is_zero() {
            return Ok(Q::zero());
        }
        let key = CorrelatorKey::genus0(
            beta.clone(),
            vec![Insertion::descendant(x.0, x.1), Insertion::descendant(y.0, y.1)],
        );
        self.memo(key, |key| {
            if self.pruned(beta, &key.insertions)? {
                return Ok(Q::zero());
            }
            let (p, q) = (key.insertions[0], key.insertions[1]);
            let inv_l = self.inverse_pairing(beta)?;
            if p.d == 0 || q.d == 0 {
                let (desc, other) = if p.d == 0 { (q, p) } else { (p, q) };
                self.two_point_one_sided(beta, desc.d, desc.a, other.a, &inv_l)
            } else {
                self.two_point_both(beta, p, q, &inv_l)
            }
        })
    }

    /// `<tau_d g1, g2> = sum_{j=1}^{d+1} (-1)^{j+1} L^{-j}
    /// <gamma0, tau_{d+1-j}(gamma0^{j-1} g1), g2>`, `L = (gamma0, beta)`.
    fn two_point_one_sided(&self, beta: &CurveClass, d: u32, a1: usize, a2: usize, inv_l: &Q) -> Result<Q> {
        let g1 = self.model.basis_class(a1);
        let g2 = self.model.basis_class(a2);
        let mut total = Q::zero();
        let mut factor = inv_l.clone();
        for j in 1..=d + 1 {
            let lifted = self.gamma0_power_times(j - 1, &g1);
            let v = self.correlator_classes(beta, &[(0, 0, &self.gamma0), (d + 1 - j, 0, &lifted), (0, 0, &g2)])?;
            total += &factor * v;
            factor = -(factor * inv_l);
        }
        Ok(total)
    }

    /// Both sides carry descendants: the divisor equation for `gamma0` solved
    /// for the two-point term.
    fn two_point_both(&self, beta: &CurveClass, p: Insertion, q: Insertion, inv_l: &Q) -> Result<Q> {
        let gp = self.model.basis_class(p.a);
        let gq = self.model.basis_class(q.a);
        let mut v = self.correlator_classes(beta, &[(0, 0, &self.gamma0), (p.d, 0, &gp), (q.d, 0, &gq)])?;
        let gp_low = self.model.cup(&self.gamma0, &gp);
        v -= self.correlator_classes(beta, &[(p.d - 1, 0, &gp_low), (q.d, 0, &gq)])?;
        let gq_low = self.model.cup(&self.gamma0, &gq);
        v -= self.correlator_classes(beta, &[(p.d, 0, &gp), (q.d - 1, 0, &gq_low)])?;
        Ok(v * inv_l)
    }

    /// One- and zero-point correlators.
    pub(super) fn unstable(&self, beta: &CurveClass, x: Option<(u32, usize)>) -> Result<Q> {
        if beta.is_zero() {
            return Ok(Q::zero());
        }
        let ins: Vec<Insertion> = x.iter().map(|&(d, a)| Insertion::descendant(d, a)).collect();
        let key = CorrelatorKey::genus0(beta.clone(), ins);
        self.memo(key, |key| {
            if self.pruned(beta, &key.insertions)? {
                return Ok(Q::zero());
            }
            let one = self.model.basis_class(self.model.identity());
            match (self.config.unstable_route, x) {
                (UnstableRoute::Divisor, Some((d, a))) => {
                    let g = self.model.basis_class(a);
                    let mut v = self.correlator_classes(beta, &[(0, 0, &self.gamma0), (d, 0, &g)])?;
                    if d > 0 {
                        let low = self.model.cup(&self.gamma0, &g);
                        v -= self.correlator_classes(beta, &[(d - 1, 0, &low)])?;
                    }
                    Ok(v * self.inverse_pairing(beta)?)
                }
                (UnstableRoute::Divisor, None) => {
                    let v = self.correlator_classes(beta, &[(0, 0, &self.gamma0)])?;
                    Ok(v * self.inverse_pairing(beta)?)
                }
                (UnstableRoute::Dilaton, Some((d, a))) => {
                    let g = self.model.basis_class(a);
                    Ok(-self.correlator_classes(beta, &[(1, 0, &one), (d, 0, &g)])?)
                }
                (UnstableRoute::Dilaton, None) => {
                    let v = self.correlator_classes(beta, &[(1, 0, &one)])?;
                    Ok(v * rational::qf(-1, 2))
                }
            }
        })
    }
}
