//! Three-point primary numbers at nonzero curve class.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::GeometryModel;
use crate::novikov::CurveClass;
use crate::rational::{serde_q, Q};

/// One line of a primary-table file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimaryRecord {
    pub beta: Vec<u32>,
    pub classes: Vec<String>,
    #[serde(with = "serde_q")]
    pub value: Q,
}

/// `<Delta_a Delta_b Delta_c>_{0,beta}` for `beta != 0`, stored with sorted
/// indices. Missing entries are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrimaryTable {
    entries: BTreeMap<(CurveClass, [usize; 3]), Q>,
}

fn sorted3(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

impl PrimaryTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an entry after checking it against the model's dimension count.
    pub fn insert(&mut self, model: &GeometryModel, beta: CurveClass, idx: [usize; 3], value: Q) -> Result<()> {
        if beta.rank() != model.lattice_rank() {
            return Err(Error::validation(format!(
                "curve class {beta} has rank {}, lattice rank is {}",
                beta.rank(),
                model.lattice_rank()
            )));
        }
        if beta.is_zero() {
            return Err(Error::validation("degree-zero entries are not tabulated"));
        }
        if idx.iter().any(|&a| a >= model.rank()) {
            return Err(Error::validation(format!("basis index out of range in {idx:?}")));
        }
        let key = (beta, sorted3(idx));
        if !value.is_zero() {
            let degrees: u32 = idx.iter().map(|&a| model.degree(a)).sum();
            let expected = Q::from_integer(model.dimension().into()) + model.c1_pairing(&key.0)?;
            if Q::from_integer(degrees.into()) != expected {
                return Err(Error::validation(format!(
                    "entry {} at {} has degree {degrees}, expected {expected}",
                    idx.iter().map(|&a| model.label(a)).collect::<Vec<_>>().join(","),
                    key.0
                )));
            }
        }
        if let Some(old) = self.entries.get(&key) {
            if old != &value {
                return Err(Error::validation(format!("conflicting entries for {:?} at {}", key.1, key.0)));
            }
        }
        if value.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
        Ok(())
    }

    pub fn from_records(model: &GeometryModel, records: &[PrimaryRecord]) -> Result<Self> {
        let mut t = PrimaryTable::new();
        for r in records {
            if r.classes.len() != 3 {
                return Err(Error::validation(format!(
                    "primary entries have three classes, found {}",
                    r.classes.len()
                )));
            }
            let mut idx = [0; 3];
            for (slot, label) in idx.iter_mut().zip(&r.classes) {
                *slot = model
                    .index_of(label)
                    .ok_or_else(|| Error::validation(format!("unknown basis label {label:?}")))?;
            }
            t.insert(model, CurveClass(r.beta.clone()), idx, r.value.clone())?;
        }
        Ok(t)
    }

    pub fn from_json(model: &GeometryModel, text: &str) -> Result<Self> {
        let records: Vec<PrimaryRecord> = serde_json::from_str(text)?;
        Self::from_records(model, &records)
    }

    /// Canonically ordered records, one per stored triple.
    pub fn to_records(&self, model: &GeometryModel) -> Vec<PrimaryRecord> {
        self.entries
            .iter()
            .map(|((beta, idx), v)| PrimaryRecord {
                beta: beta.0.clone(),
                classes: idx.iter().map(|&a| model.label(a).to_string()).collect(),
                value: v.clone(),
            })
            .collect()
    }

    pub fn get(&self, beta: &CurveClass, idx: [usize; 3]) -> Q {
        self.entries
            .get(&(beta.clone(), sorted3(idx)))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
