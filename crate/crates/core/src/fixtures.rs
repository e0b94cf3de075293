//! Built-in models: the point, the projective line and the projective
//! plane, plus the associativity recursion for plane rational curves that
//! generates the plane's three-point table.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::engine::PrimaryTable;
use crate::error::{Error, Result};
use crate::geometry::{BasisElement, CohClass, GeometryModel};
use crate::novikov::CurveClass;
use crate::rational::{self, Q};

pub const FIXTURE_NAMES: [&str; 3] = ["P1", "P2", "point"];

#[derive(Clone, Debug)]
pub struct FixtureModel {
    pub name: String,
    pub model: GeometryModel,
    pub table: PrimaryTable,
}

fn sources(name: &str) -> Option<(&'static str, &'static str)> {
    match name {
        "P1" => Some((include_str!("../data/P1.json"), include_str!("../data/P1_table.json"))),
        "P2" => Some((include_str!("../data/P2.json"), include_str!("../data/P2_table.json"))),
        "point" => Some((include_str!("../data/point.json"), include_str!("../data/point_table.json"))),
        _ => None,
    }
}

/// The raw primary-table file shipped for a fixture.
pub fn fixture_table_source(name: &str) -> Option<&'static str> {
    sources(name).map(|(_, t)| t)
}

pub fn load_fixture(name: &str) -> Result<FixtureModel> {
    let (model_src, table_src) =
        sources(name).ok_or_else(|| Error::domain(format!("unknown fixture {name:?}; expected one of P1, P2, point")))?;
    let model = GeometryModel::from_json(model_src)?;
    let table = PrimaryTable::from_json(&model, table_src)?;
    Ok(FixtureModel {
        name: name.to_string(),
        model,
        table,
    })
}

/// `P^n` with basis `one, h, h2, ..., h{n}`, `c(P^n) = (1 + h)^{n+1}`.
pub fn projective_space(n: u32) -> Result<GeometryModel> {
    let r = n as usize + 1;
    let label = |k: usize| match k {
        0 => "one".to_string(),
        1 => "h".to_string(),
        k => format!("h{k}"),
    };
    let basis = (0..r)
        .map(|k| BasisElement {
            label: label(k),
            degree: k as u32,
        })
        .collect();
    let cup = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| if i + j < r { CohClass::basis(r, i + j) } else { CohClass::zero(r) })
                .collect()
        })
        .collect();
    let mut integral = vec![Q::zero(); r];
    integral[r - 1] = Q::one();
    let lattice = usize::from(n > 0);
    let divisor_pairing = (0..r).map(|k| (k == 1).then(|| vec![1])).collect();
    let ample = if n > 0 { CohClass::basis(r, 1) } else { CohClass::zero(r) };
    let chern = (0..r)
        .map(|j| {
            CohClass::basis(r, j).scale(&Q::from_integer(rational::binomial(u64::from(n) + 1, j as u64)))
        })
        .collect();
    let model = GeometryModel::new(
        format!("P{n}"),
        n,
        basis,
        cup,
        integral,
        lattice,
        divisor_pairing,
        ample,
        chern,
    )?;
    model.validate().into_result()?;
    Ok(model)
}

/// Numbers `N_d` of rational plane curves of degree `d` through `3d - 1`
/// general points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WdvvState {
    pub n: BTreeMap<u32, Q>,
}

impl WdvvState {
    pub fn get(&self, d: u32) -> Option<&Q> {
        self.n.get(&d)
    }
}

fn binom(n: u32, k: u32) -> Q {
    Q::from_integer(rational::binomial(n.into(), k.into()))
}

/// `N_d = sum_{d1 + d2 = d} N_{d1} N_{d2} d1^2 d2 (d2 C(3d-4, 3d1-2) - d1 C(3d-4, 3d1-1))`
/// from `N_1 = 1`.
pub fn wdvv_p2(dmax: u32) -> Result<WdvvState> {
    if dmax == 0 {
        return Err(Error::domain("the recursion starts at degree 1"));
    }
    let mut n: BTreeMap<u32, Q> = BTreeMap::new();
    n.insert(1, Q::one());
    for d in 2..=dmax {
        let mut total = Q::zero();
        for d1 in 1..d {
            let d2 = d - d1;
            let (q1, q2) = (Q::from_integer(BigInt::from(d1)), Q::from_integer(BigInt::from(d2)));
            let inner = &q2 * binom(3 * d - 4, 3 * d1 - 2) - &q1 * binom(3 * d - 4, 3 * d1 - 1);
            total += &n[&d1] * &n[&d2] * &q1 * &q1 * &q2 * inner;
        }
        n.insert(d, total);
    }
    Ok(WdvvState { n })
}

/// Three-point table of `P^2` up to degree `dmax`: a triple with `k`
/// copies of `h` and `3d - 1` copies of `h2` has value `d^k N_d`.
pub fn projective_plane_table(model: &GeometryModel, dmax: u32) -> Result<PrimaryTable> {
    if model.dimension() != 2 || model.rank() != 3 || model.lattice_rank() != 1 {
        return Err(Error::domain("the plane table needs the P2 model"));
    }
    let state = wdvv_p2(dmax)?;
    let mut table = PrimaryTable::new();
    for d in 1..=dmax {
        for a in 0..3 {
            for b in a..3 {
                for c in b..3 {
                    let idx = [a, b, c];
                    let degs: Vec<u32> = idx.iter().map(|&x| model.degree(x)).collect();
                    let points = degs.iter().filter(|&&g| g == 2).count() as u32;
                    let lines = degs.iter().filter(|&&g| g == 1).count() as u32;
                    if points + lines != 3 || points != 3 * d - 1 {
                        continue;
                    }
                    let v = Q::from_integer(BigInt::from(d).pow(lines)) * &state.n[&d];
                    table.insert(model, CurveClass(vec![d]), idx, v)?;
                }
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::PrimaryRecord;
    use crate::rational::q;

    #[test]
    fn fixtures_load() {
        let p1 = load_fixture("P1").unwrap();
        assert_eq!(p1.model.dimension(), 1);
        assert_eq!(p1.model.chern(1), p1.model.basis_class(1).scale(&q(2)));
        assert_eq!(p1.table.get(&CurveClass(vec![1]), [1, 1, 1]), q(1));
        assert_eq!(p1.table.len(), 1);
        let pt = load_fixture("point").unwrap();
        assert_eq!(pt.model.dimension(), 0);
        assert_eq!(pt.model.lattice_rank(), 0);
        let p2 = load_fixture("P2").unwrap();
        assert_eq!(p2.model.chern(2), p2.model.basis_class(2).scale(&q(3)));
        assert!(load_fixture("P7").is_err());
    }

    #[test]
    fn plane_counts() {
        let s = wdvv_p2(5).unwrap();
        assert_eq!(s.get(1), Some(&q(1)));
        assert_eq!(s.get(2), Some(&q(1)));
        assert_eq!(s.get(3), Some(&q(12)));
        assert_eq!(s.get(4), Some(&q(620)));
        assert_eq!(s.get(5), Some(&q(87304)));
        assert!(wdvv_p2(0).is_err());
    }

    #[test]
    fn shipped_plane_table_matches_recursion() {
        let f = load_fixture("P2").unwrap();
        for dmax in 1..=4 {
            let generated = projective_plane_table(&f.model, dmax).unwrap();
            assert_eq!(generated, f.table);
        }
        let shipped: Vec<PrimaryRecord> = serde_json::from_str(fixture_table_source("P2").unwrap()).unwrap();
        assert_eq!(f.table.to_records(&f.model), shipped);
    }

    #[test]
    fn projective_space_matches_fixtures() {
        for (n, name) in [(1, "P1"), (2, "P2"), (0, "point")] {
            let built = projective_space(n).unwrap();
            let f = load_fixture(name).unwrap();
            assert_eq!(built.to_file().cup_table, f.model.to_file().cup_table);
            assert_eq!(built.chern_classes(), f.model.chern_classes());
            assert_eq!(built.gram(), f.model.gram());
        }
        let p3 = projective_space(3).unwrap();
        assert_eq!(p3.chern(2), p3.basis_class(2).scale(&q(6)));
        assert_eq!(p3.chern(3), p3.basis_class(3).scale(&q(4)));
    }
}
