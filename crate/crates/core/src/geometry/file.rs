//! JSON form of a geometry model. Classes are objects mapping basis labels
//! to `"p/q"` strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{BasisElement, CohClass, GeometryModel};
use crate::error::{Error, Result};
use crate::rational;

pub type ClassSpec = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub label: String,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CupEntry {
    pub left: String,
    pub right: String,
    pub result: ClassSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub name: String,
    pub dimension: u32,
    pub basis: Vec<BasisEntry>,
    /// Products not listed are zero, except that products with the
    /// identity default to `1 ∪ x = x` and a listed `(a, b)` also fills
    /// `(b, a)` unless that is listed separately.
    pub cup_table: Vec<CupEntry>,
    pub integral: ClassSpec,
    pub curve_lattice_rank: usize,
    pub divisor_pairing: BTreeMap<String, Vec<i64>>,
    pub ample_class: ClassSpec,
    pub chern_classes: Vec<ClassSpec>,
}

fn parse_class(labels: &[BasisElement], spec: &ClassSpec) -> Result<CohClass> {
    let mut c = CohClass::zero(labels.len());
    for (label, value) in spec {
        let a = labels
            .iter()
            .position(|b| &b.label == label)
            .ok_or_else(|| Error::validation(format!("unknown basis label {label:?}")))?;
        c.0[a] = rational::parse(value)?;
    }
    Ok(c)
}

fn class_spec(model: &GeometryModel, c: &CohClass) -> ClassSpec {
    c.components()
        .map(|(a, v)| (model.label(a).to_string(), rational::format(v)))
        .collect()
}

impl ModelFile {
    pub fn into_model(self) -> Result<GeometryModel> {
        let basis: Vec<BasisElement> = self
            .basis
            .iter()
            .map(|b| BasisElement {
                label: b.label.clone(),
                degree: b.degree,
            })
            .collect();
        let r = basis.len();
        for (i, b) in basis.iter().enumerate() {
            if basis[..i].iter().any(|o| o.label == b.label) {
                return Err(Error::validation(format!("duplicate label {:?}", b.label)));
            }
        }
        let index = |label: &str| {
            basis
                .iter()
                .position(|b| b.label == label)
                .ok_or_else(|| Error::validation(format!("unknown basis label {label:?}")))
        };

        let mut cup = vec![vec![CohClass::zero(r); r]; r];
        let units: Vec<usize> = (0..r).filter(|&a| basis[a].degree == 0).collect();
        if let [e] = units[..] {
            for x in 0..r {
                cup[e][x] = CohClass::basis(r, x);
                cup[x][e] = CohClass::basis(r, x);
            }
        }
        let mut explicit = vec![vec![false; r]; r];
        for entry in &self.cup_table {
            let (a, b) = (index(&entry.left)?, index(&entry.right)?);
            if explicit[a][b] {
                return Err(Error::validation(format!(
                    "cup product {} ∪ {} listed twice",
                    entry.left, entry.right
                )));
            }
            explicit[a][b] = true;
        }
        for entry in &self.cup_table {
            let (a, b) = (index(&entry.left)?, index(&entry.right)?);
            let value = parse_class(&basis, &entry.result)?;
            if !explicit[b][a] {
                cup[b][a] = value.clone();
            }
            cup[a][b] = value;
        }

        let integral_class = parse_class(&basis, &self.integral)?;
        let mut divisor_pairing = vec![None; r];
        for (label, row) in &self.divisor_pairing {
            let a = index(label)?;
            if row.len() != self.curve_lattice_rank {
                return Err(Error::validation(format!(
                    "divisor pairing row for {label} has length {}, expected {}",
                    row.len(),
                    self.curve_lattice_rank
                )));
            }
            divisor_pairing[a] = Some(row.clone());
        }
        let ample = parse_class(&basis, &self.ample_class)?;
        let chern = self
            .chern_classes
            .iter()
            .map(|c| parse_class(&basis, c))
            .collect::<Result<Vec<_>>>()?;
        GeometryModel::new(
            self.name,
            self.dimension,
            basis,
            cup,
            integral_class.0,
            self.curve_lattice_rank,
            divisor_pairing,
            ample,
            chern,
        )
    }

    pub fn from_model(model: &GeometryModel) -> Self {
        let r = model.rank();
        let e = model.identity();
        let mut cup_table = Vec::new();
        for a in 0..r {
            for b in a..r {
                if a == e || b == e {
                    continue;
                }
                let value = model.cup_basis(a, b);
                if value.is_zero() && model.cup_basis(b, a).is_zero() {
                    continue;
                }
                cup_table.push(CupEntry {
                    left: model.label(a).to_string(),
                    right: model.label(b).to_string(),
                    result: class_spec(model, value),
                });
            }
        }
        let integral = CohClass(model.integral_values().to_vec());
        ModelFile {
            name: model.name().to_string(),
            dimension: model.dimension(),
            basis: model
                .basis()
                .iter()
                .map(|b| BasisEntry {
                    label: b.label.clone(),
                    degree: b.degree,
                })
                .collect(),
            cup_table,
            integral: class_spec(model, &integral),
            curve_lattice_rank: model.lattice_rank(),
            divisor_pairing: (0..r)
                .filter_map(|a| {
                    model
                        .divisor_row(a)
                        .map(|row| (model.label(a).to_string(), row.to_vec()))
                })
                .collect(),
            ample_class: class_spec(model, model.ample()),
            chern_classes: model
                .chern_classes()
                .iter()
                .map(|c| class_spec(model, c))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::fixtures;

    #[test]
    fn unknown_label_rejected() {
        let mut f = fixtures::load_fixture("P1").unwrap().model.to_file();
        f.ample_class.insert("nope".into(), "1".into());
        assert!(f.into_model().is_err());
    }

    #[test]
    fn file_round_trip() {
        let m = fixtures::load_fixture("P2").unwrap().model;
        let again = m.to_file().into_model().unwrap();
        assert_eq!(again.to_file(), m.to_file());
    }
}
