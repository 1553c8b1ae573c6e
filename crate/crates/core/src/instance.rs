//! CSP and LC instances, the `lc` translation, and connectivity.
//!
//! An LC instance has a finite domain per variable and functional
//! constraints `x = alpha(y)` given by explicit index tables. Domains are
//! ordered lists; everything downstream indexes by position, names are
//! metadata. The JSON formats are canonical with a fixed field order.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Domain element: an integer, a string, or a tuple of atoms (used by
/// constraint variables and power domains).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Atom {
    Int(i64),
    Str(String),
    Tuple(Vec<Atom>),
}

impl Atom {
    pub fn int(v: i64) -> Atom {
        Atom::Int(v)
    }

    pub fn pair(a: i64, b: i64) -> Atom {
        Atom::Tuple(vec![Atom::Int(a), Atom::Int(b)])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub domain: Vec<Atom>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CspConstraint {
    /// Indices of the constrained variables, in order.
    pub scope: Vec<usize>,
    /// Allowed value tuples, one atom per scope position. Deduplicated,
    /// first occurrence wins.
    pub relation: Vec<Vec<Atom>>,
}

/// CSP instance: variables with finite domains plus relational constraints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CspInstance {
    pub variables: Vec<Variable>,
    pub constraints: Vec<CspConstraint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcConstraint {
    pub target: usize,
    pub source: usize,
    /// `map[i]` is the target-domain index assigned to source-domain
    /// element `i`; total on the source domain.
    pub map: Vec<usize>,
}

/// LC instance: variables with finite domains plus functional constraints
/// `target = map(source)`. Empty domains are legal and force infeasibility.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcInstance {
    pub variables: Vec<Variable>,
    pub constraints: Vec<LcConstraint>,
}

/// A pair of a variable and one of its domain elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub variable: usize,
    pub element: usize,
}

/// One domain-element index per variable.
pub type Assignment = Vec<usize>;

impl CspInstance {
    pub fn new(variables: Vec<Variable>, constraints: Vec<CspConstraint>) -> Result<Self> {
        let mut inst = CspInstance { variables, constraints };
        inst.normalize()?;
        Ok(inst)
    }

    /// Validates scopes and relation tuples and deduplicates relations.
    pub fn normalize(&mut self) -> Result<()> {
        let variables = &self.variables;
        for c in &mut self.constraints {
            for &v in &c.scope {
                if v >= variables.len() {
                    return Err(Error::InvalidInstance(format!("scope index {v} out of range")));
                }
            }
            let mut seen = Vec::new();
            for tuple in &c.relation {
                if tuple.len() != c.scope.len() {
                    return Err(Error::InvalidInstance(format!(
                        "relation tuple arity {} against scope arity {}",
                        tuple.len(),
                        c.scope.len()
                    )));
                }
                for (pos, atom) in tuple.iter().enumerate() {
                    let var = c.scope[pos];
                    if !variables[var].domain.contains(atom) {
                        return Err(Error::InvalidInstance(format!(
                            "relation atom {atom:?} not in the domain of variable {var}"
                        )));
                    }
                }
                if !seen.contains(tuple) {
                    seen.push(tuple.clone());
                }
            }
            c.relation = seen;
        }
        Ok(())
    }

    /// Relation tuples as domain-element indices, per constraint.
    pub fn relation_indices(&self, c: &CspConstraint) -> Vec<Vec<usize>> {
        c.relation
            .iter()
            .map(|tuple| {
                tuple
                    .iter()
                    .zip(&c.scope)
                    .map(|(atom, &var)| {
                        self.variables[var]
                            .domain
                            .iter()
                            .position(|a| a == atom)
                            .expect("normalized instance")
                    })
                    .collect()
            })
            .collect()
    }

    pub fn check_solution(&self, assignment: &[usize]) -> Result<bool> {
        if assignment.len() != self.variables.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} chosen values for {} variables",
                assignment.len(),
                self.variables.len()
            )));
        }
        for (v, &e) in assignment.iter().enumerate() {
            if e >= self.variables[v].domain.len() {
                return Err(Error::ShapeMismatch(format!("element {e} out of domain of {v}")));
            }
        }
        for c in &self.constraints {
            let chosen: Vec<Atom> = c
                .scope
                .iter()
                .map(|&v| self.variables[v].domain[assignment[v]].clone())
                .collect();
            if !c.relation.contains(&chosen) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl LcInstance {
    pub fn new(variables: Vec<Variable>, constraints: Vec<LcConstraint>) -> Result<Self> {
        let inst = LcInstance { variables, constraints };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        for c in &self.constraints {
            if c.target >= self.variables.len() || c.source >= self.variables.len() {
                return Err(Error::InvalidInstance("constraint endpoint out of range".into()));
            }
            let src = self.variables[c.source].domain.len();
            let tgt = self.variables[c.target].domain.len();
            if c.map.len() != src {
                return Err(Error::InvalidInstance(format!(
                    "map of length {} on a source domain of size {src}",
                    c.map.len()
                )));
            }
            if let Some(&bad) = c.map.iter().find(|&&t| t >= tgt) {
                return Err(Error::InvalidInstance(format!(
                    "map value {bad} outside the target domain of size {tgt}"
                )));
            }
        }
        Ok(())
    }

    pub fn domain_size(&self, var: usize) -> usize {
        self.variables[var].domain.len()
    }

    /// True iff every constraint map sends the source choice to the target
    /// choice.
    pub fn check_solution(&self, assignment: &[usize]) -> Result<bool> {
        if assignment.len() != self.variables.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} chosen values for {} variables",
                assignment.len(),
                self.variables.len()
            )));
        }
        for (v, &e) in assignment.iter().enumerate() {
            if e >= self.domain_size(v) {
                return Err(Error::ShapeMismatch(format!("element {e} out of domain of {v}")));
            }
        }
        Ok(self
            .constraints
            .iter()
            .all(|c| c.map[assignment[c.source]] == assignment[c.target]))
    }

    /// Partition of the variables by connectivity of the shape multigraph
    /// (constraints as undirected edges). Components are sorted by their
    /// smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.variables.len();
        let mut adj = vec![Vec::new(); n];
        for c in &self.constraints {
            adj[c.source].push(c.target);
            adj[c.target].push(c.source);
        }
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Splits into connected sub-instances. Each is returned with the list
    /// of original variable indices it covers (new index -> old index).
    pub fn split_components(&self) -> Vec<(LcInstance, Vec<usize>)> {
        self.connected_components()
            .into_iter()
            .map(|comp| {
                let mut new_of_old = vec![usize::MAX; self.variables.len()];
                for (new, &old) in comp.iter().enumerate() {
                    new_of_old[old] = new;
                }
                let variables = comp.iter().map(|&v| self.variables[v].clone()).collect();
                let constraints = self
                    .constraints
                    .iter()
                    .filter(|c| comp.binary_search(&c.source).is_ok())
                    .map(|c| LcConstraint {
                        target: new_of_old[c.target],
                        source: new_of_old[c.source],
                        map: c.map.clone(),
                    })
                    .collect();
                (LcInstance { variables, constraints }, comp)
            })
            .collect()
    }
}

/// Translates a CSP instance into LC shape: one LC variable per CSP
/// variable (same domain) plus one per constraint whose domain is the
/// relation, with a projection constraint per scope position.
pub fn lc_of_csp(inst: &CspInstance) -> LcInstance {
    let mut variables = inst.variables.clone();
    let mut constraints = Vec::new();
    for (k, c) in inst.constraints.iter().enumerate() {
        let mut name = format!("c{k}");
        while variables.iter().any(|v| v.name == name) {
            name.push('_');
        }
        let relation_idx = inst.relation_indices(c);
        let cvar = variables.len();
        variables.push(Variable {
            name,
            domain: c.relation.iter().map(|t| Atom::Tuple(t.clone())).collect(),
        });
        for (pos, &target) in c.scope.iter().enumerate() {
            constraints.push(LcConstraint {
                target,
                source: cvar,
                map: relation_idx.iter().map(|t| t[pos]).collect(),
            });
        }
    }
    LcInstance { variables, constraints }
}

/// Dense numbering of the points of an LC instance, in (variable, element)
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct PointTable {
    offsets: Vec<usize>,
    var_of: Vec<u32>,
    total: usize,
}

impl PointTable {
    pub fn new(inst: &LcInstance) -> PointTable {
        let mut offsets = Vec::with_capacity(inst.variables.len() + 1);
        let mut var_of = Vec::new();
        let mut total = 0;
        for (v, var) in inst.variables.iter().enumerate() {
            offsets.push(total);
            total += var.domain.len();
            var_of.extend(std::iter::repeat(v as u32).take(var.domain.len()));
        }
        offsets.push(total);
        PointTable { offsets, var_of, total }
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn id(&self, p: Point) -> u32 {
        (self.offsets[p.variable] + p.element) as u32
    }

    pub fn point(&self, id: u32) -> Point {
        let variable = self.var_of[id as usize] as usize;
        Point { variable, element: id as usize - self.offsets[variable] }
    }

    pub fn variable_of(&self, id: u32) -> usize {
        self.var_of[id as usize] as usize
    }

    /// Point ids belonging to a variable.
    pub fn ids_of_variable(&self, var: usize) -> std::ops::Range<u32> {
        self.offsets[var] as u32..self.offsets[var + 1] as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn chain_example_translates() {
        let csp = samples::chain_csp();
        let lc = lc_of_csp(&csp);
        assert_eq!(lc.variables.len(), 6);
        assert_eq!(lc.constraints.len(), 5);
        // Constraint variables carry the relations as tuple domains.
        assert_eq!(lc.variables[3].domain.len(), 1);
        assert_eq!(lc.variables[4].domain.len(), 2);
        assert_eq!(lc.variables[5].domain.len(), 3);
        assert!(lc.is_connected());
    }

    #[test]
    fn chain_example_solution_checks() {
        let lc = lc_of_csp(&samples::chain_csp());
        // x=1, y=0, z=0, (x=1) -> 1, (x!=y) -> 10, (y<=z) -> 00
        assert!(lc.check_solution(&[1, 0, 0, 0, 1, 0]).unwrap());
        // Flipping y violates the x != y projection.
        assert!(!lc.check_solution(&[1, 1, 0, 0, 1, 0]).unwrap());
    }

    #[test]
    fn discrete_instance_any_assignment_solves() {
        let lc = LcInstance::new(
            vec![
                Variable { name: "a".into(), domain: vec![Atom::int(0), Atom::int(1)] },
                Variable { name: "b".into(), domain: vec![Atom::int(0)] },
            ],
            vec![],
        )
        .unwrap();
        assert!(lc.check_solution(&[1, 0]).unwrap());
        assert_eq!(lc.connected_components().len(), 2);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let lc = lc_of_csp(&samples::chain_csp());
        assert!(matches!(lc.check_solution(&[0, 0]), Err(Error::ShapeMismatch(_))));
        assert!(matches!(lc.check_solution(&[9, 0, 0, 0, 0, 0]), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn disjoint_union_has_two_components() {
        let lc = lc_of_csp(&samples::chain_csp());
        let n = lc.variables.len();
        let mut vars = lc.variables.clone();
        vars.extend(lc.variables.iter().map(|v| Variable {
            name: format!("{}'", v.name),
            domain: v.domain.clone(),
        }));
        let mut cons = lc.constraints.clone();
        cons.extend(lc.constraints.iter().map(|c| LcConstraint {
            target: c.target + n,
            source: c.source + n,
            map: c.map.clone(),
        }));
        let doubled = LcInstance::new(vars, cons).unwrap();
        let comps = doubled.connected_components();
        assert_eq!(comps.len(), 2);
        let split = doubled.split_components();
        assert_eq!(split[0].0.variables.len(), n);
        assert!(split[1].0.check_solution(&[1, 0, 0, 0, 1, 0]).unwrap());
    }

    #[test]
    fn empty_relation_yields_empty_domain() {
        let csp = CspInstance::new(
            vec![Variable { name: "x".into(), domain: vec![Atom::int(0), Atom::int(1)] }],
            vec![CspConstraint { scope: vec![0], relation: vec![] }],
        )
        .unwrap();
        let lc = lc_of_csp(&csp);
        assert_eq!(lc.variables[1].domain.len(), 0);
        assert!(lc.validate().is_ok());
    }

    #[test]
    fn json_round_trip_preserves_instances() {
        let csp = samples::chain_csp();
        let text = serde_json::to_string(&csp).unwrap();
        let back: CspInstance = serde_json::from_str(&text).unwrap();
        assert_eq!(csp, back);

        let lc = lc_of_csp(&csp);
        let text = serde_json::to_string(&lc).unwrap();
        assert!(text.starts_with("{\"variables\":"));
        let back: LcInstance = serde_json::from_str(&text).unwrap();
        assert_eq!(lc, back);
    }

    #[test]
    fn point_table_round_trips() {
        let lc = lc_of_csp(&samples::chain_csp());
        let pts = PointTable::new(&lc);
        assert_eq!(pts.len(), 2 + 2 + 2 + 1 + 2 + 3);
        for id in 0..pts.len() as u32 {
            assert_eq!(pts.id(pts.point(id)), id);
        }
        assert_eq!(pts.ids_of_variable(3), 6..7);
    }
}
