//! JSON formats for tensor and vector solutions.
//!
//! Instances serialize through their serde derives; the formats here need
//! instance context (variable names, domain sizes) and are therefore
//! explicit conversions. Field order is fixed by struct declaration and
//! map-valued fields preserve insertion order, so serialized artifacts are
//! byte-stable for fixed inputs.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::instance::{LcInstance, Point, PointTable};
use crate::power::PowerMeta;
use crate::relax::TensorSolution;
use crate::vectors::VectorSolution;
use crate::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
pub struct TensorJson {
    pub p: u64,
    pub k: usize,
    pub entries: Vec<TensorEntryJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TensorEntryJson {
    /// Points as [variable index, domain-element index] pairs, canonical
    /// (sorted) order.
    pub points: Vec<(usize, usize)>,
    pub value: u64,
}

pub fn tensor_to_json(d: &LcInstance, t: &TensorSolution) -> TensorJson {
    let table = PointTable::new(d);
    TensorJson {
        p: t.p,
        k: t.k,
        entries: t
            .entries
            .iter()
            .map(|(key, &value)| TensorEntryJson {
                points: key
                    .iter()
                    .map(|&id| {
                        let pt = table.point(id);
                        (pt.variable, pt.element)
                    })
                    .collect(),
                value,
            })
            .collect(),
    }
}

pub fn tensor_from_json(d: &LcInstance, j: &TensorJson) -> Result<TensorSolution> {
    let table = PointTable::new(d);
    let mut entries = BTreeMap::new();
    for e in &j.entries {
        if e.points.len() != j.k {
            return Err(Error::ShapeMismatch(format!(
                "entry with {} points in a level-{} tensor",
                e.points.len(),
                j.k
            )));
        }
        let mut key = Vec::with_capacity(j.k);
        for &(variable, element) in &e.points {
            if variable >= d.variables.len() || element >= d.domain_size(variable) {
                return Err(Error::ShapeMismatch(format!(
                    "point ({variable}, {element}) outside the instance"
                )));
            }
            key.push(table.id(Point { variable, element }));
        }
        key.sort_unstable();
        if entries.insert(key, e.value).is_some() {
            return Err(Error::ShapeMismatch("duplicate tensor entry".into()));
        }
    }
    Ok(TensorSolution { p: j.p, k: j.k, meta: PowerMeta::new(d, j.k), entries })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VectorSolutionJson {
    pub p: u64,
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub space_basis: Vec<Vec<u64>>,
    /// Vectors keyed by variable name, one row per domain element.
    pub vectors: IndexMap<String, Vec<Vec<u64>>>,
}

pub fn vector_solution_to_json(d: &LcInstance, s: &VectorSolution) -> VectorSolutionJson {
    VectorSolutionJson {
        p: s.p,
        k: s.k,
        n: s.dim,
        space_basis: s.space_basis.clone(),
        vectors: d
            .variables
            .iter()
            .zip(&s.per_variable)
            .map(|(var, vecs)| (var.name.clone(), vecs.clone()))
            .collect(),
    }
}

pub fn vector_solution_from_json(d: &LcInstance, j: &VectorSolutionJson) -> Result<VectorSolution> {
    let mut per_variable = Vec::with_capacity(d.variables.len());
    for var in &d.variables {
        let vecs = j
            .vectors
            .get(&var.name)
            .ok_or_else(|| Error::ShapeMismatch(format!("no vectors for variable {}", var.name)))?;
        per_variable.push(vecs.clone());
    }
    Ok(VectorSolution {
        p: j.p,
        k: j.k,
        dim: j.n,
        space_basis: j.space_basis.clone(),
        per_variable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::lc_of_csp;
    use crate::samples;
    use crate::vectors::extract_vectors;

    #[test]
    fn tensor_json_round_trip() {
        let lc = lc_of_csp(&samples::cycle_csp());
        let t = samples::cycle_level2_tensor();
        let j = tensor_to_json(&lc, &t);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.starts_with("{\"p\":2,\"k\":2,\"entries\":"));
        let back: TensorJson = serde_json::from_str(&text).unwrap();
        let t2 = tensor_from_json(&lc, &back).unwrap();
        assert_eq!(t.entries, t2.entries);
    }

    #[test]
    fn vector_solution_json_round_trip() {
        let lc = lc_of_csp(&samples::cycle_csp());
        let s = extract_vectors(&lc, &samples::cycle_level2_tensor()).unwrap();
        let j = vector_solution_to_json(&lc, &s);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("\"N\":"));
        let back: VectorSolutionJson = serde_json::from_str(&text).unwrap();
        let s2 = vector_solution_from_json(&lc, &back).unwrap();
        assert_eq!(s, s2);
    }

    #[test]
    fn tensor_json_rejects_bad_points() {
        let lc = lc_of_csp(&samples::cycle_csp());
        let j = TensorJson {
            p: 2,
            k: 2,
            entries: vec![TensorEntryJson { points: vec![(99, 0), (0, 0)], value: 1 }],
        };
        assert!(tensor_from_json(&lc, &j).is_err());
    }
}
