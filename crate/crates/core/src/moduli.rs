//! Intersection numbers on moduli of stable curves and the constant-map
//! correlators built from them.

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{symmetric, CohClass, GeometryModel};
use crate::rational::{self, serde_q, Q};

/// `int_{M_{0,n}} psi_1^{d_1} ... psi_n^{d_n} = (sum d)! / prod d_i!` when
/// `sum d = n - 3`, zero otherwise (and zero for `n < 3`).
pub fn psi_integral_genus0(d: &[u32]) -> Q {
    let n = d.len();
    if n < 3 || d.iter().sum::<u32>() as usize != n - 3 {
        return Q::zero();
    }
    Q::from_integer(rational::multinomial(d))
}

/// Boundary divisors `D_S` of `M_{0,n}` whose sum is `psi_i`, for fixed
/// auxiliary marks `j, k`: every `S` with `i ∈ S`, `j, k ∉ S` and
/// `2 <= |S| <= n - 2`. Marks are 1-based.
pub fn psi_boundary_partitions(i: usize, j: usize, k: usize, n: usize) -> Result<Vec<BTreeSet<usize>>> {
    if i == j || i == k || j == k {
        return Err(Error::domain(format!("marks {i}, {j}, {k} are not distinct")));
    }
    if [i, j, k].iter().any(|&m| m == 0 || m > n) {
        return Err(Error::domain(format!("marks must lie in 1..={n}")));
    }
    if n < 4 {
        return Err(Error::domain("boundary expansion needs at least 4 marks"));
    }
    let others: Vec<usize> = (1..=n).filter(|m| ![i, j, k].contains(m)).collect();
    let mut out: Vec<BTreeSet<usize>> = (1u64..(1 << others.len()))
        .map(|mask| {
            let mut s: BTreeSet<usize> = others
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &m)| m)
                .collect();
            s.insert(i);
            s
        })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TautRecord {
    pub g: u32,
    pub n: usize,
    pub psi: Vec<u32>,
    pub lambda: Vec<u32>,
    #[serde(with = "serde_q")]
    pub value: Q,
}

type TautKey = (u32, usize, Vec<u32>, Vec<u32>);

/// Injected `int_{M_{g,n}} lambda_{i_1} ... lambda_{i_k} psi^d` values, `g >= 1`.
///
/// psi vectors are stored sorted, since the integrals are symmetric in the
/// marks; `lambda_0 = 1` entries are dropped from the index multiset.
#[derive(Clone, Debug, Default)]
pub struct TautTable {
    entries: HashMap<TautKey, Q>,
}

fn canonical_key(g: u32, psi: &[u32], lambda: &[u32]) -> TautKey {
    let mut psi = psi.to_vec();
    psi.sort_unstable_by(|a, b| b.cmp(a));
    let mut lambda: Vec<u32> = lambda.iter().copied().filter(|&i| i > 0).collect();
    lambda.sort_unstable();
    (g, psi.len(), psi, lambda)
}

impl TautTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_records(records: &[TautRecord]) -> Result<Self> {
        let mut t = TautTable::new();
        for r in records {
            t.insert(r)?;
        }
        Ok(t)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let records: Vec<TautRecord> = serde_json::from_str(text)?;
        Self::from_records(&records)
    }

    pub fn insert(&mut self, r: &TautRecord) -> Result<()> {
        if r.g == 0 {
            return Err(Error::validation("genus-zero entries are computed, not tabulated"));
        }
        if r.psi.len() != r.n {
            return Err(Error::validation(format!(
                "psi vector {:?} does not have n = {} entries",
                r.psi, r.n
            )));
        }
        if r.lambda.iter().any(|&i| i > r.g) {
            return Err(Error::validation(format!("lambda index above genus in {:?}", r.lambda)));
        }
        let dim = 3 * i64::from(r.g) - 3 + r.n as i64;
        let total: i64 = r.psi.iter().chain(&r.lambda).map(|&x| i64::from(x)).sum();
        if total != dim {
            return Err(Error::validation(format!(
                "entry g={} n={} psi={:?} lambda={:?} has degree {total}, moduli dimension {dim}",
                r.g, r.n, r.psi, r.lambda
            )));
        }
        let key = canonical_key(r.g, &r.psi, &r.lambda);
        if let Some(old) = self.entries.get(&key) {
            if old != &r.value {
                return Err(Error::validation(format!("conflicting entries for {key:?}")));
            }
        }
        self.entries.insert(key, r.value.clone());
        Ok(())
    }

    pub fn get(&self, g: u32, psi: &[u32], lambda: &[u32]) -> Option<&Q> {
        self.entries.get(&canonical_key(g, psi, lambda))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A constant-map correlator `<tau_{d_1} g_1 ... tau_{d_n} g_n>_{g,0}`.
#[derive(Clone, Debug)]
pub struct PointCorrelatorQuery {
    pub g: u32,
    pub insertions: Vec<(u32, CohClass)>,
}

/// Largest total lambda degree that can be nonzero: the Hodge bundle is
/// pulled back from `M_{1,1}` or `M_{g,0}`.
fn lambda_degree_cap(g: u32) -> u32 {
    if g == 1 {
        1
    } else {
        3 * g - 3
    }
}

fn sorted_tuples(len: usize, max: u32) -> Vec<Vec<u32>> {
    fn rec(len: usize, lo: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in lo..=max {
            cur.push(i);
            rec(len, i, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, 0, max, &mut Vec::new(), &mut out);
    out
}

/// Degree-zero correlators. Genus zero uses the multinomial closed form;
/// higher genus expands the virtual class of `M_{g,n} x V` through the
/// Hodge bundle and the Chern roots of `V`, reading the tautological
/// integrals from `table`.
pub fn point_correlator(q: &PointCorrelatorQuery, model: &GeometryModel, table: &TautTable) -> Result<Q> {
    let n = q.insertions.len();
    let psi: Vec<u32> = q.insertions.iter().map(|(d, _)| *d).collect();
    let product = model.cup_all(q.insertions.iter().map(|(_, c)| c));
    if q.g == 0 {
        if n < 3 {
            return Ok(Q::zero());
        }
        let m = psi_integral_genus0(&psi);
        if m.is_zero() {
            return Ok(m);
        }
        return Ok(m * model.integrate(&product));
    }
    if q.g == 1 && n == 0 {
        return Ok(Q::zero());
    }
    let g = q.g;
    let delta = model.dimension() as usize;
    let moduli_dim = 3 * i64::from(g) - 3 + n as i64;
    let psi_total: i64 = psi.iter().map(|&d| i64::from(d)).sum();
    let mut total = Q::zero();
    for idx in sorted_tuples(delta, g) {
        let lambda_deg: u32 = idx.iter().sum();
        if lambda_deg > lambda_degree_cap(g) || i64::from(lambda_deg) + psi_total != moduli_dim {
            continue;
        }
        let m = symmetric::chern_symmetric(model, &idx, g)?;
        let v_integral = model.integrate(&model.cup(&m, &product));
        if v_integral.is_zero() {
            continue;
        }
        let taut = table.get(g, &psi, &idx).ok_or_else(|| {
            let (g, n, psi, lambda) = canonical_key(g, &psi, &idx);
            Error::TableIncomplete { g, n, psi, lambda }
        })?;
        total += taut * v_integral;
    }
    // (-1)^{g dim V}
    if (q.g as usize * delta) % 2 == 1 {
        total = -total;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{q, qf};

    #[test]
    fn genus0_closed_form() {
        assert_eq!(psi_integral_genus0(&[0, 0, 0]), q(1));
        assert_eq!(psi_integral_genus0(&[1, 1, 0, 0, 0]), q(2));
        assert_eq!(psi_integral_genus0(&[2, 0, 0, 0]), q(0));
        assert_eq!(psi_integral_genus0(&[0, 0]), q(0));
    }

    #[test]
    fn boundary_partitions_small() {
        let p = psi_boundary_partitions(1, 2, 3, 4).unwrap();
        assert_eq!(p, vec![BTreeSet::from([1, 4])]);
        let p = psi_boundary_partitions(1, 2, 3, 5).unwrap();
        assert_eq!(
            p,
            vec![BTreeSet::from([1, 4]), BTreeSet::from([1, 5]), BTreeSet::from([1, 4, 5])]
        );
        assert!(psi_boundary_partitions(1, 1, 2, 4).is_err());
    }

    fn ins(model: &GeometryModel, items: &[(u32, usize)]) -> Vec<(u32, CohClass)> {
        items.iter().map(|&(d, a)| (d, model.basis_class(a))).collect()
    }

    #[test]
    fn genus0_point_correlators_on_p2() {
        let p2 = fixtures::load_fixture("P2").unwrap().model;
        let t = TautTable::new();
        let q1 = PointCorrelatorQuery { g: 0, insertions: ins(&p2, &[(1, 1), (0, 1), (0, 0), (0, 0)]) };
        assert_eq!(point_correlator(&q1, &p2, &t).unwrap(), q(1));
        let q2 = PointCorrelatorQuery {
            g: 0,
            insertions: ins(&p2, &[(1, 1), (1, 1), (0, 0), (0, 0), (0, 0)]),
        };
        assert_eq!(point_correlator(&q2, &p2, &t).unwrap(), q(2));
        let q3 = PointCorrelatorQuery { g: 0, insertions: ins(&p2, &[(0, 1), (0, 1)]) };
        assert_eq!(point_correlator(&q3, &p2, &t).unwrap(), q(0));
    }

    #[test]
    fn genus1_one_point_scales_euler_number() {
        let p2 = fixtures::load_fixture("P2").unwrap().model;
        let t = TautTable::from_records(&[TautRecord { g: 1, n: 1, psi: vec![1], lambda: vec![], value: qf(7, 5) }])
            .unwrap();
        let query = PointCorrelatorQuery { g: 1, insertions: ins(&p2, &[(1, 0)]) };
        // deg c_2(P^2) = 3
        assert_eq!(point_correlator(&query, &p2, &t).unwrap(), qf(21, 5));
    }

    #[test]
    fn genus1_divisor_term_uses_lambda1() {
        let p2 = fixtures::load_fixture("P2").unwrap().model;
        let t = TautTable::from_records(&[TautRecord { g: 1, n: 1, psi: vec![0], lambda: vec![1], value: qf(1, 24) }])
            .unwrap();
        let query = PointCorrelatorQuery { g: 1, insertions: ins(&p2, &[(0, 1)]) };
        // -(c_1, h) * 1/24 = -3/24
        assert_eq!(point_correlator(&query, &p2, &t).unwrap(), qf(-1, 8));
    }

    #[test]
    fn missing_table_entry_is_named() {
        let p1 = fixtures::load_fixture("P1").unwrap().model;
        let query = PointCorrelatorQuery { g: 1, insertions: ins(&p1, &[(1, 0)]) };
        match point_correlator(&query, &p1, &TautTable::new()) {
            Err(Error::TableIncomplete { g: 1, n: 1, psi, lambda }) => {
                assert_eq!(psi, vec![1]);
                assert!(lambda.is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn table_rejects_dimension_mismatch() {
        let r = TautRecord { g: 1, n: 1, psi: vec![2], lambda: vec![], value: q(1) };
        assert!(TautTable::from_records(&[r]).is_err());
    }
}
