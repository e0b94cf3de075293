use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{CohClass, GeometryModel};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn into_result(self) -> Result<()> {
        if self.passed() {
            return Ok(());
        }
        let msgs: Vec<String> = self
            .failures()
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        Err(Error::Validation(msgs.join("; ")))
    }

    fn push(&mut self, name: &'static str, failure: Option<String>) {
        self.checks.push(Check {
            name,
            passed: failure.is_none(),
            detail: failure.unwrap_or_else(|| "ok".to_string()),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {:<14} {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

pub(super) fn validate_model(m: &GeometryModel) -> ValidationReport {
    let mut report = ValidationReport::default();
    let r = m.rank();
    let label = |a: usize| m.label(a).to_string();

    report.push(
        "degrees",
        (0..r)
            .find(|&a| m.degree(a) > m.dimension())
            .map(|a| format!("{} has degree above the dimension", label(a))),
    );

    let units: Vec<usize> = (0..r).filter(|&a| m.degree(a) == 0).collect();
    let identity = if units.len() != 1 {
        Some(format!("{} basis elements of degree 0", units.len()))
    } else {
        let e = units[0];
        (0..r)
            .find(|&x| m.cup_basis(e, x) != &m.basis_class(x) || m.cup_basis(x, e) != &m.basis_class(x))
            .map(|x| format!("1 ∪ {} ≠ {}", label(x), label(x)))
    };
    report.push("identity", identity);

    let mut grading = None;
    'outer: for a in 0..r {
        for b in 0..r {
            let want = m.degree(a) + m.degree(b);
            if let Some((c, _)) = m.cup_basis(a, b).components().find(|(c, _)| m.degree(*c) != want) {
                grading = Some(format!(
                    "{} ∪ {} has a component along {}",
                    label(a),
                    label(b),
                    label(c)
                ));
                break 'outer;
            }
        }
    }
    report.push("grading", grading);

    let commutativity = (0..r)
        .flat_map(|a| (0..r).map(move |b| (a, b)))
        .find(|&(a, b)| m.cup_basis(a, b) != m.cup_basis(b, a))
        .map(|(a, b)| format!("{} ∪ {} ≠ {} ∪ {}", label(a), label(b), label(b), label(a)));
    report.push("commutativity", commutativity);

    let mut associativity = None;
    'assoc: for a in 0..r {
        for b in 0..r {
            let ab = m.cup_basis(a, b).clone();
            for c in 0..r {
                let left = m.cup(&ab, &m.basis_class(c));
                let right = m.cup(&m.basis_class(a), m.cup_basis(b, c));
                if left != right {
                    associativity = Some(format!(
                        "witness ({}, {}, {})",
                        label(a),
                        label(b),
                        label(c)
                    ));
                    break 'assoc;
                }
            }
        }
    }
    report.push("associativity", associativity);

    report.push(
        "integral",
        (0..r)
            .find(|&a| !m.integral_values()[a].is_zero() && m.degree(a) != m.dimension())
            .map(|a| format!("integral is nonzero on {} below top degree", label(a))),
    );

    let det = linalg::determinant(m.gram());
    report.push(
        "nondegeneracy",
        det.is_zero().then(|| "Gram matrix is singular".to_string()),
    );

    let mut frobenius = None;
    'frob: for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let x = m.basis_class(a);
                let z = m.basis_class(c);
                if m.pairing(m.cup_basis(a, b), &z) != m.pairing(&x, m.cup_basis(b, c)) {
                    frobenius = Some(format!("witness ({}, {}, {})", label(a), label(b), label(c)));
                    break 'frob;
                }
            }
        }
    }
    report.push("frobenius", frobenius);

    let duals = match m.dual_bases() {
        Err(_) => Some("no dual basis".to_string()),
        Ok(d) => {
            let mut bad = None;
            for a in 0..r {
                for b in 0..r {
                    let want = if a == b { Q::one() } else { Q::zero() };
                    if m.pairing(&d.delta[a], &d.delta_dual[b]) != want {
                        bad = Some(format!("eta({}, dual {}) ≠ δ", label(a), label(b)));
                    }
                }
            }
            bad.or_else(|| match m.dual_of(&d.delta_dual) {
                Ok(back) if back == d.delta => None,
                _ => Some("duals of duals differ from the basis".to_string()),
            })
        }
    };
    report.push("dual-bases", duals);

    let divisor = (0..r)
        .find(|&a| (m.degree(a) == 1) != m.divisor_row(a).is_some())
        .map(|a| format!("divisor pairing row presence mismatch at {}", label(a)));
    report.push("divisor-rows", divisor);

    let ample = if let Some((a, _)) = m.ample().components().find(|(a, _)| m.degree(*a) != 1) {
        Some(format!("ample class has a component along {}", label(a)))
    } else {
        m.ample_weights().err().map(|e| e.to_string())
    };
    report.push("ample", ample);

    let chern = if m.chern_classes().len() != m.dimension() as usize + 1 {
        Some(format!(
            "expected {} Chern classes, found {}",
            m.dimension() + 1,
            m.chern_classes().len()
        ))
    } else if units.len() == 1 && m.chern(0) != m.basis_class(units[0]) {
        Some("c_0 ≠ 1".to_string())
    } else {
        m.chern_classes()
            .iter()
            .enumerate()
            .find_map(|(j, c): (usize, &CohClass)| {
                c.components()
                    .find(|(a, _)| m.degree(*a) as usize != j)
                    .map(|(a, _)| format!("c_{j} has a component along {}", label(a)))
            })
    };
    report.push("chern", chern);

    report
}

#[cfg(test)]
mod tests {
    use crate::fixtures;

    #[test]
    fn fixtures_pass() {
        for name in ["P1", "P2", "point"] {
            let m = fixtures::load_fixture(name).unwrap().model;
            let r = m.validate();
            assert!(r.passed(), "{name}: {r}");
        }
    }

    #[test]
    fn zero_pairing_flagged() {
        let mut f = fixtures::load_fixture("P1").unwrap().model.to_file();
        f.integral.clear();
        let m = f.into_model().unwrap();
        let r = m.validate();
        assert!(!r.check("nondegeneracy").unwrap().passed);
    }

    #[test]
    fn non_associative_table_flagged_with_witness() {
        // h ∪ h2 = h: (h ∪ h) ∪ h2 = 0 but h ∪ (h ∪ h2) = h2.
        let mut f = fixtures::load_fixture("P2").unwrap().model.to_file();
        f.cup_table.push(crate::geometry::CupEntry {
            left: "h".into(),
            right: "h2".into(),
            result: [("h".to_string(), "1".to_string())].into_iter().collect(),
        });
        let m = f.into_model().unwrap();
        let r = m.validate();
        let c = r.check("associativity").unwrap();
        assert!(!c.passed);
        assert!(c.detail.starts_with("witness"));
    }
}
