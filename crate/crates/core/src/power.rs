//! Saturated powers of LC instances and partial-solution powers of CSP
//! instances.
//!
//! The k-th saturated power has one variable per k-tuple of base variables
//! with the product domain, product constraints lifted from the
//! (identity-augmented) base constraints, and permutation/merge constraints
//! for every map sigma: [k] -> [k]. Variable tuples are enumerated
//! lexicographically so the index dictionary is pure arithmetic.

use std::collections::HashMap;

use crate::instance::{Atom, CspInstance, LcConstraint, LcInstance, Variable};
use crate::limits::Caps;
use crate::{Error, Result};

/// Ties power-variable indices to base-variable tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerMeta {
    pub k: usize,
    /// Domain sizes of the base variables, in order.
    pub base_domain_sizes: Vec<usize>,
}

impl PowerMeta {
    pub fn new(base: &LcInstance, k: usize) -> PowerMeta {
        PowerMeta {
            k,
            base_domain_sizes: base.variables.iter().map(|v| v.domain.len()).collect(),
        }
    }

    pub fn base_vars(&self) -> usize {
        self.base_domain_sizes.len()
    }

    /// `|X|^k`, or an error when it exceeds `cap`.
    pub fn power_vars(&self, cap: u64) -> Result<u64> {
        let n = self.base_vars() as u64;
        let mut total: u64 = 1;
        for _ in 0..self.k {
            total = total
                .checked_mul(n)
                .filter(|&t| t <= cap)
                .ok_or_else(|| {
                    Error::SizeCapExceeded(format!(
                        "saturated power needs {n}^{} variables, cap is {cap}",
                        self.k
                    ))
                })?;
        }
        Ok(total)
    }

    /// Variable tuple of a power-variable index (lexicographic, leftmost
    /// position most significant).
    pub fn var_tuple(&self, mut index: u64) -> Vec<usize> {
        let n = self.base_vars() as u64;
        let mut tuple = vec![0usize; self.k];
        for slot in (0..self.k).rev() {
            tuple[slot] = (index % n) as usize;
            index /= n;
        }
        tuple
    }

    pub fn var_index(&self, tuple: &[usize]) -> u64 {
        let n = self.base_vars() as u64;
        tuple.iter().fold(0u64, |acc, &v| acc * n + v as u64)
    }

    /// Size of the product domain of a variable tuple.
    pub fn tuple_domain_size(&self, tuple: &[usize]) -> usize {
        tuple.iter().map(|&v| self.base_domain_sizes[v]).product()
    }

    /// Element tuple of a product-domain index (lexicographic, leftmost
    /// position most significant).
    pub fn elem_tuple(&self, var_tuple: &[usize], mut code: usize) -> Vec<usize> {
        let mut elems = vec![0usize; var_tuple.len()];
        for slot in (0..var_tuple.len()).rev() {
            let size = self.base_domain_sizes[var_tuple[slot]];
            elems[slot] = code % size;
            code /= size;
        }
        elems
    }

    pub fn elem_index(&self, var_tuple: &[usize], elems: &[usize]) -> usize {
        var_tuple
            .iter()
            .zip(elems)
            .fold(0usize, |acc, (&v, &e)| acc * self.base_domain_sizes[v] + e)
    }
}

fn tuple_name(base: &LcInstance, tuple: &[usize]) -> String {
    let names: Vec<&str> = tuple.iter().map(|&v| base.variables[v].name.as_str()).collect();
    format!("({})", names.join(","))
}

fn tuple_domain(base: &LcInstance, meta: &PowerMeta, tuple: &[usize]) -> Vec<Atom> {
    let size = meta.tuple_domain_size(tuple);
    (0..size)
        .map(|code| {
            let elems = meta.elem_tuple(tuple, code);
            Atom::Tuple(
                tuple
                    .iter()
                    .zip(&elems)
                    .map(|(&v, &e)| base.variables[v].domain[e].clone())
                    .collect(),
            )
        })
        .collect()
}

/// Identity-augmented constraint list: the base constraints followed by one
/// `x = id(x)` per variable.
pub fn augmented_arcs(base: &LcInstance) -> Vec<LcConstraint> {
    let mut arcs = base.constraints.clone();
    for (v, var) in base.variables.iter().enumerate() {
        arcs.push(LcConstraint {
            target: v,
            source: v,
            map: (0..var.domain.len()).collect(),
        });
    }
    arcs
}

/// Builds the k-th saturated power. In reduced mode the product constraints
/// are restricted to the shape `alpha x id x ... x id`; full mode emits all
/// k-tuples of augmented arcs. Both modes emit every sigma constraint.
pub fn saturated_power(
    base: &LcInstance,
    k: usize,
    reduced: bool,
    caps: &Caps,
) -> Result<(LcInstance, PowerMeta)> {
    if k == 0 {
        return Err(Error::LevelZero);
    }
    let meta = PowerMeta::new(base, k);
    let num_vars = meta.power_vars(caps.max_power_vars)?;

    let mut variables = Vec::with_capacity(num_vars as usize);
    let mut total_points: u64 = 0;
    for idx in 0..num_vars {
        let tuple = meta.var_tuple(idx);
        total_points += meta.tuple_domain_size(&tuple) as u64;
        if total_points > caps.max_unknowns {
            return Err(Error::SizeCapExceeded(format!(
                "saturated power needs more than {} points, cap is {}",
                total_points, caps.max_unknowns
            )));
        }
        variables.push(Variable {
            name: tuple_name(base, &tuple),
            domain: tuple_domain(base, &meta, &tuple),
        });
    }

    let arcs = augmented_arcs(base);
    let mut constraints = Vec::new();
    let mut table_entries: u64 = 0;
    let guard = |entries: usize, table_entries: &mut u64| -> Result<()> {
        *table_entries += entries as u64;
        if *table_entries > caps.max_nonzeros {
            return Err(Error::SizeCapExceeded(format!(
                "saturated power constraint tables exceed {} entries",
                caps.max_nonzeros
            )));
        }
        Ok(())
    };

    // Type (1): product constraints.
    if reduced {
        let mut right = vec![0usize; k - 1];
        loop {
            for arc in &arcs {
                let mut src_tuple = Vec::with_capacity(k);
                src_tuple.push(arc.source);
                src_tuple.extend_from_slice(&right);
                let mut tgt_tuple = Vec::with_capacity(k);
                tgt_tuple.push(arc.target);
                tgt_tuple.extend_from_slice(&right);
                let src_size = meta.tuple_domain_size(&src_tuple);
                guard(src_size, &mut table_entries)?;
                let map = (0..src_size)
                    .map(|code| {
                        let mut elems = meta.elem_tuple(&src_tuple, code);
                        elems[0] = arc.map[elems[0]];
                        meta.elem_index(&tgt_tuple, &elems)
                    })
                    .collect();
                constraints.push(LcConstraint {
                    target: meta.var_index(&tgt_tuple) as usize,
                    source: meta.var_index(&src_tuple) as usize,
                    map,
                });
            }
            if !advance(&mut right, base.variables.len()) {
                break;
            }
        }
    } else {
        let mut pick = vec![0usize; k];
        loop {
            let chosen: Vec<&LcConstraint> = pick.iter().map(|&i| &arcs[i]).collect();
            let src_tuple: Vec<usize> = chosen.iter().map(|a| a.source).collect();
            let tgt_tuple: Vec<usize> = chosen.iter().map(|a| a.target).collect();
            let src_size = meta.tuple_domain_size(&src_tuple);
            guard(src_size, &mut table_entries)?;
            let map = (0..src_size)
                .map(|code| {
                    let elems = meta.elem_tuple(&src_tuple, code);
                    let image: Vec<usize> =
                        chosen.iter().zip(&elems).map(|(a, &e)| a.map[e]).collect();
                    meta.elem_index(&tgt_tuple, &image)
                })
                .collect();
            constraints.push(LcConstraint {
                target: meta.var_index(&tgt_tuple) as usize,
                source: meta.var_index(&src_tuple) as usize,
                map,
            });
            if !advance(&mut pick, arcs.len()) {
                break;
            }
        }
    }

    // Type (2): one constraint per variable tuple and map sigma: [k] -> [k].
    for idx in 0..num_vars {
        let src_tuple = meta.var_tuple(idx);
        let mut sigma = vec![0usize; k];
        loop {
            let tgt_tuple: Vec<usize> = sigma.iter().map(|&i| src_tuple[i]).collect();
            let src_size = meta.tuple_domain_size(&src_tuple);
            guard(src_size, &mut table_entries)?;
            let map = (0..src_size)
                .map(|code| {
                    let elems = meta.elem_tuple(&src_tuple, code);
                    let image: Vec<usize> = sigma.iter().map(|&i| elems[i]).collect();
                    meta.elem_index(&tgt_tuple, &image)
                })
                .collect();
            constraints.push(LcConstraint {
                target: meta.var_index(&tgt_tuple) as usize,
                source: idx as usize,
                map,
            });
            if !advance(&mut sigma, k) {
                break;
            }
        }
    }

    Ok((LcInstance { variables, constraints }, meta))
}

/// Odometer increment over `[0, base)^len`, rightmost fastest.
fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Ties partial-power variables to the variable subsets they cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMeta {
    /// Subsets of base-variable indices, ordered by size then
    /// lexicographically; position = LC variable index.
    pub subsets: Vec<Vec<usize>>,
}

/// Builds the partial-solution power: one LC variable per subset `U` of at
/// most k CSP variables (including the empty set), whose domain is the set
/// of assignments on `U` satisfying every constraint with scope inside `U`,
/// with a restriction constraint for every proper inclusion.
pub fn partial_power(inst: &CspInstance, k: usize, caps: &Caps) -> Result<(LcInstance, PartialMeta)> {
    if k == 0 {
        return Err(Error::LevelZero);
    }
    let n = inst.variables.len();
    let mut subsets: Vec<Vec<usize>> = vec![vec![]];
    for size in 1..=k.min(n) {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            subsets.push(subset.clone());
            if subsets.len() as u64 > caps.max_power_vars {
                return Err(Error::SizeCapExceeded(format!(
                    "partial power needs more than {} subset variables",
                    caps.max_power_vars
                )));
            }
            if !next_combination(&mut subset, n) {
                break;
            }
        }
    }

    let relations: Vec<Vec<Vec<usize>>> =
        inst.constraints.iter().map(|c| inst.relation_indices(c)).collect();

    // Partial solutions per subset, each as element indices aligned with
    // the sorted subset.
    let mut domains: Vec<Vec<Vec<usize>>> = Vec::with_capacity(subsets.len());
    let mut total_points: u64 = 0;
    for subset in &subsets {
        let mut sols = Vec::new();
        let sizes: Vec<usize> =
            subset.iter().map(|&v| inst.variables[v].domain.len()).collect();
        let mut assign = vec![0usize; subset.len()];
        let empty_domain = sizes.iter().any(|&s| s == 0);
        loop {
            if empty_domain {
                break;
            }
            let ok = inst.constraints.iter().zip(&relations).all(|(c, rel)| {
                if !c.scope.iter().all(|v| subset.contains(v)) {
                    return true;
                }
                let tuple: Vec<usize> = c
                    .scope
                    .iter()
                    .map(|v| assign[subset.iter().position(|u| u == v).unwrap()])
                    .collect();
                rel.contains(&tuple)
            });
            if ok {
                sols.push(assign.clone());
            }
            if !advance_mixed(&mut assign, &sizes) {
                break;
            }
        }
        total_points += sols.len() as u64;
        if total_points > caps.max_unknowns {
            return Err(Error::SizeCapExceeded(format!(
                "partial power needs more than {} points",
                caps.max_unknowns
            )));
        }
        domains.push(sols);
    }

    let variables: Vec<Variable> = subsets
        .iter()
        .zip(&domains)
        .map(|(subset, sols)| {
            let names: Vec<&str> =
                subset.iter().map(|&v| inst.variables[v].name.as_str()).collect();
            Variable {
                name: format!("{{{}}}", names.join(",")),
                domain: sols
                    .iter()
                    .map(|assign| {
                        Atom::Tuple(
                            subset
                                .iter()
                                .zip(assign)
                                .map(|(&v, &e)| inst.variables[v].domain[e].clone())
                                .collect(),
                        )
                    })
                    .collect(),
            }
        })
        .collect();

    let index_of: Vec<HashMap<&Vec<usize>, usize>> = domains
        .iter()
        .map(|sols| sols.iter().enumerate().map(|(i, s)| (s, i)).collect())
        .collect();

    let mut constraints = Vec::new();
    for (small_idx, small) in subsets.iter().enumerate() {
        for (big_idx, big) in subsets.iter().enumerate() {
            if small_idx == big_idx
                || small.len() >= big.len()
                || !small.iter().all(|v| big.contains(v))
            {
                continue;
            }
            let positions: Vec<usize> = small
                .iter()
                .map(|v| big.iter().position(|u| u == v).unwrap())
                .collect();
            let map = domains[big_idx]
                .iter()
                .map(|assign| {
                    let restricted: Vec<usize> = positions.iter().map(|&p| assign[p]).collect();
                    index_of[small_idx][&restricted]
                })
                .collect();
            constraints.push(LcConstraint { target: small_idx, source: big_idx, map });
        }
    }

    Ok((LcInstance { variables, constraints }, PartialMeta { subsets }))
}

/// Next size-|c| combination of [0, n) in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let size = c.len();
    for i in (0..size).rev() {
        if c[i] < n - size + i {
            c[i] += 1;
            for j in i + 1..size {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn advance_mixed(digits: &mut [usize], sizes: &[usize]) -> bool {
    for (d, &s) in digits.iter_mut().zip(sizes).rev() {
        *d += 1;
        if *d < s {
            return true;
        }
        *d = 0;
    }
    false
}
