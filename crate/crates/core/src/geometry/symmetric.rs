//! Monomial symmetric functions of the negated Chern roots, rewritten in
//! terms of the Chern classes.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{CohClass, GeometryModel};
use crate::error::{Error, Result};
use crate::rational::Q;

/// A polynomial in `n` variables: exponent vector to coefficient.
pub type Poly = BTreeMap<Vec<u32>, Q>;

fn poly_add_term(p: &mut Poly, exp: Vec<u32>, c: Q) {
    if c.is_zero() {
        return;
    }
    match p.entry(exp) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            poly_add_term(&mut out, e, ca * cb);
        }
    }
    out
}

/// `e_j(x_1, ..., x_n)` as a polynomial.
pub fn elementary(j: usize, n: usize) -> Poly {
    let mut out = Poly::new();
    fn rec(start: usize, left: usize, n: usize, cur: &mut Vec<u32>, out: &mut Poly) {
        if left == 0 {
            out.insert(cur.clone(), Q::one());
            return;
        }
        for i in start..n {
            cur[i] = 1;
            rec(i + 1, left - 1, n, cur, out);
            cur[i] = 0;
        }
    }
    rec(0, j, n, &mut vec![0; n], &mut out);
    out
}

/// `prod_j e_j^{k_j}` expanded into monomials.
pub fn elementary_product(powers: &[u32]) -> Poly {
    let n = powers.len();
    let mut acc: Poly = [(vec![0; n], Q::one())].into_iter().collect();
    for (j, &k) in powers.iter().enumerate() {
        let e = elementary(j + 1, n);
        for _ in 0..k {
            acc = poly_mul(&acc, &e);
        }
    }
    acc
}

/// `m_alpha(x_1, ..., x_n)`: the sum of the distinct permutations of `x^alpha`.
pub fn monomial_symmetric(alpha: &[u32]) -> Poly {
    let mut exps: Vec<u32> = alpha.to_vec();
    exps.sort_unstable();
    let mut out = Poly::new();
    loop {
        out.insert(exps.clone(), Q::one());
        if !next_permutation(&mut exps) {
            return out;
        }
    }
}

fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Rewrites a symmetric polynomial as a polynomial in `e_1, ..., e_n`; the
/// result maps `(k_1, ..., k_n)` to the coefficient of `prod e_j^{k_j}`.
/// Uses repeated removal of the lexicographically leading monomial.
pub fn to_elementary(p: &Poly, n: usize) -> Result<Poly> {
    let mut rest = p.clone();
    let mut out = Poly::new();
    while let Some((lead, c)) = rest.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
        if lead.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::domain("polynomial is not symmetric"));
        }
        let powers: Vec<u32> = (0..n)
            .map(|j| lead[j] - lead.get(j + 1).copied().unwrap_or(0))
            .collect();
        for (e, v) in elementary_product(&powers) {
            poly_add_term(&mut rest, e, -(&v * &c));
        }
        poly_add_term(&mut out, powers, c);
    }
    Ok(out)
}

/// `m_{g-i_1, ..., g-i_delta}` evaluated at the roots `-v_j` of
/// `c_t(T_V) = prod (1 + v_j t)`, as a cohomology class.
pub fn chern_symmetric(model: &GeometryModel, indices: &[u32], g: u32) -> Result<CohClass> {
    let n = model.dimension() as usize;
    if indices.len() != n {
        return Err(Error::domain(format!(
            "expected {n} indices, got {}",
            indices.len()
        )));
    }
    if indices.windows(2).any(|w| w[0] > w[1]) || indices.iter().any(|&i| i > g) {
        return Err(Error::domain(format!(
            "indices {indices:?} not sorted within 0..={g}"
        )));
    }
    let alpha: Vec<u32> = indices.iter().map(|i| g - i).collect();
    let in_e = to_elementary(&monomial_symmetric(&alpha), n)?;
    // e_j(-v) = (-1)^j c_j(V)
    let signed: Vec<CohClass> = (1..=n)
        .map(|j| {
            let c = model.chern(j);
            if j % 2 == 1 {
                -&c
            } else {
                c
            }
        })
        .collect();
    let mut out = CohClass::zero(model.rank());
    for (powers, coeff) in &in_e {
        let mut term = model.basis_class(model.identity());
        for (j, &k) in powers.iter().enumerate() {
            for _ in 0..k {
                term = model.cup(&term, &signed[j]);
            }
        }
        out.add_scaled(&term, coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::q;

    #[test]
    fn all_zero_exponents_give_identity() {
        let p2 = fixtures::load_fixture("P2").unwrap().model;
        assert_eq!(chern_symmetric(&p2, &[3, 3], 3).unwrap(), p2.basis_class(0));
    }

    #[test]
    fn one_root_squared() {
        // delta = 1: (-v)^2 = c_1^2, which vanishes on P^1 for degree reasons
        let p1 = fixtures::load_fixture("P1").unwrap().model;
        assert!(chern_symmetric(&p1, &[0], 2).unwrap().is_zero());
        // (-v)^1 = -c_1 = -2h
        assert_eq!(
            chern_symmetric(&p1, &[0], 1).unwrap(),
            p1.basis_class(1).scale(&q(-2))
        );
    }

    #[test]
    fn two_roots_linear() {
        // m_{1,0}(-v1, -v2) = -c_1 = -3h on P^2
        let p2 = fixtures::load_fixture("P2").unwrap().model;
        assert_eq!(
            chern_symmetric(&p2, &[0, 1], 1).unwrap(),
            p2.basis_class(1).scale(&q(-3))
        );
        // m_{1,1}(-v) = e_2(-v) = c_2 = 3 h^2
        assert_eq!(
            chern_symmetric(&p2, &[0, 0], 1).unwrap(),
            p2.basis_class(2).scale(&q(3))
        );
    }

    #[test]
    fn rejects_bad_indices() {
        let p2 = fixtures::load_fixture("P2").unwrap().model;
        assert!(chern_symmetric(&p2, &[1, 0], 1).is_err());
        assert!(chern_symmetric(&p2, &[0, 3], 2).is_err());
        assert!(chern_symmetric(&p2, &[0], 2).is_err());
    }

    #[test]
    fn power_sums_in_elementary_basis() {
        // p_2 = e_1^2 - 2 e_2
        let e = to_elementary(&monomial_symmetric(&[2, 0]), 2).unwrap();
        assert_eq!(e.get(&vec![2, 0]), Some(&q(1)));
        assert_eq!(e.get(&vec![0, 1]), Some(&q(-2)));
        assert_eq!(e.len(), 2);
    }
}
