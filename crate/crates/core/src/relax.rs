//! Arc consistency and the Z_p / Z_n relaxations, including the level-k
//! pipeline on saturated powers.
//!
//! A level-k tensor solution assigns a residue to every k-tuple of points.
//! Values are stored canonically: keyed by sorted point-id tuples, with
//! tuples containing two distinct points of the same variable identically
//! zero and omitted. The `Canonical` encoding builds the linear system
//! directly on those canonical unknowns; `Direct` builds the saturated
//! power as an explicit LC instance and relaxes it like any other. Both
//! must agree on feasibility.

use std::collections::{BTreeMap, HashMap};

use crate::instance::{LcInstance, Point, PointTable};
use crate::limits::Caps;
use crate::modlin::{solve_mod_n, IncrementalSolver, SolveResult};
use crate::power::{saturated_power, PowerMeta};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcStatus {
    NonEmpty,
    Emptied,
}

/// Greatest family of domain subsets closed under images and preimages of
/// the constraint maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcResult {
    pub status: AcStatus,
    /// Kept element indices per variable, sorted.
    pub domains: Vec<Vec<usize>>,
}

/// Arc consistency: shrink `D'_x` to `alpha(D'_y)` and `D'_y` to
/// `alpha^{-1}(D'_x)` over all constraints until the greatest fixpoint is
/// reached. Emptied iff some domain becomes empty.
pub fn arc_consistency(d: &LcInstance) -> AcResult {
    let mut keep: Vec<Vec<bool>> = d
        .variables
        .iter()
        .map(|v| vec![true; v.domain.len()])
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        for c in &d.constraints {
            // D'_target &= alpha(D'_source)
            let mut image = vec![false; keep[c.target].len()];
            for (b, &a) in c.map.iter().enumerate() {
                if keep[c.source][b] {
                    image[a] = true;
                }
            }
            for (a, img) in image.iter().enumerate() {
                if keep[c.target][a] && !img {
                    keep[c.target][a] = false;
                    changed = true;
                }
            }
            // D'_source &= alpha^{-1}(D'_target)
            for (b, &a) in c.map.iter().enumerate() {
                if keep[c.source][b] && !keep[c.target][a] {
                    keep[c.source][b] = false;
                    changed = true;
                }
            }
        }
    }
    let domains: Vec<Vec<usize>> = keep
        .iter()
        .map(|mask| {
            mask.iter()
                .enumerate()
                .filter_map(|(i, &k)| k.then_some(i))
                .collect()
        })
        .collect();
    let status = if domains.iter().any(Vec::is_empty) {
        AcStatus::Emptied
    } else {
        AcStatus::NonEmpty
    };
    AcResult { status, domains }
}

/// Weights over Z_p, one residue tuple per variable, summing to 1 and
/// compatible with every constraint summation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZpSolution {
    pub p: u64,
    pub values: Vec<Vec<u64>>,
}

impl ZpSolution {
    pub fn verify(&self, d: &LcInstance) -> Result<bool> {
        if self.values.len() != d.variables.len() {
            return Err(Error::ShapeMismatch("one tuple per variable required".into()));
        }
        for (v, var) in d.variables.iter().enumerate() {
            if self.values[v].len() != var.domain.len() {
                return Err(Error::ShapeMismatch(format!("tuple length for variable {v}")));
            }
            let sum: u64 = self.values[v].iter().fold(0, |acc, &x| (acc + x) % self.p);
            if sum != 1 {
                return Ok(false);
            }
        }
        for c in &d.constraints {
            let mut pushed = vec![0u64; d.domain_size(c.target)];
            for (b, &a) in c.map.iter().enumerate() {
                pushed[a] = (pushed[a] + self.values[c.source][b]) % self.p;
            }
            if pushed != self.values[c.target] {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Same weights over Z_n (or Z when n = 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZnSolution {
    pub n: u64,
    pub values: Vec<Vec<i64>>,
}

impl ZnSolution {
    pub fn verify(&self, d: &LcInstance) -> Result<bool> {
        if self.values.len() != d.variables.len() {
            return Err(Error::ShapeMismatch("one tuple per variable required".into()));
        }
        let reduce = |v: i64| -> i64 {
            if self.n == 0 {
                v
            } else {
                v.rem_euclid(self.n as i64)
            }
        };
        for (v, var) in d.variables.iter().enumerate() {
            if self.values[v].len() != var.domain.len() {
                return Err(Error::ShapeMismatch(format!("tuple length for variable {v}")));
            }
            if reduce(self.values[v].iter().sum::<i64>() - 1) != 0 {
                return Ok(false);
            }
        }
        for c in &d.constraints {
            let mut pushed = vec![0i64; d.domain_size(c.target)];
            for (b, &a) in c.map.iter().enumerate() {
                pushed[a] += self.values[c.source][b];
            }
            for (a, &val) in self.values[c.target].iter().enumerate() {
                if reduce(pushed[a] - val) != 0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn check_point_cap(d: &LcInstance, caps: &Caps) -> Result<usize> {
    let points: usize = d.variables.iter().map(|v| v.domain.len()).sum();
    if points as u64 > caps.max_unknowns {
        return Err(Error::SizeCapExceeded(format!(
            "{points} points exceed the cap of {}",
            caps.max_unknowns
        )));
    }
    Ok(points)
}

/// Z_p relaxation: one unknown per point, sum-to-1 per variable, and the
/// summation condition per constraint, solved over GF(p). Feasible results
/// carry the canonical particular solution.
pub fn solve_zp(d: &LcInstance, p: u64, caps: &Caps) -> Result<Option<ZpSolution>> {
    let points = check_point_cap(d, caps)?;
    let table = PointTable::new(d);
    let mut solver = IncrementalSolver::new(p, points)?;
    let mut feasible = true;
    for (v, var) in d.variables.iter().enumerate() {
        let coeffs: Vec<(u32, u64)> =
            (0..var.domain.len()).map(|e| (table.id(Point { variable: v, element: e }), 1)).collect();
        feasible &= solver.push(&coeffs, 1);
    }
    'outer: for c in &d.constraints {
        for a in 0..d.domain_size(c.target) {
            if !feasible {
                break 'outer;
            }
            let mut acc: HashMap<u32, u64> = HashMap::new();
            *acc.entry(table.id(Point { variable: c.target, element: a })).or_insert(0) += 1;
            for (b, &img) in c.map.iter().enumerate() {
                if img == a {
                    let id = table.id(Point { variable: c.source, element: b });
                    *acc.entry(id).or_insert(0) += p - 1;
                }
            }
            let coeffs: Vec<(u32, u64)> =
                acc.into_iter().filter(|&(_, v)| v % p != 0).collect();
            if coeffs.is_empty() {
                continue;
            }
            feasible &= solver.push(&coeffs, 0);
        }
    }
    if !feasible {
        return Ok(None);
    }
    match solver.finish(false)? {
        SolveResult::Feasible { particular, .. } => {
            let mut values: Vec<Vec<u64>> = Vec::with_capacity(d.variables.len());
            for (v, var) in d.variables.iter().enumerate() {
                values.push(
                    (0..var.domain.len())
                        .map(|e| particular[table.id(Point { variable: v, element: e }) as usize] as u64)
                        .collect(),
                );
            }
            Ok(Some(ZpSolution { p, values }))
        }
        SolveResult::Infeasible { .. } => Ok(None),
    }
}

/// Z_n relaxation (n = 0 decides over the integers), via Smith normal form.
pub fn solve_zn(d: &LcInstance, n: u64, caps: &Caps) -> Result<Option<ZnSolution>> {
    let points = check_point_cap(d, caps)?;
    let table = PointTable::new(d);
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut rhs: Vec<i64> = Vec::new();
    for (v, var) in d.variables.iter().enumerate() {
        let mut row = vec![0i64; points];
        for e in 0..var.domain.len() {
            row[table.id(Point { variable: v, element: e }) as usize] = 1;
        }
        rows.push(row);
        rhs.push(1);
    }
    for c in &d.constraints {
        for a in 0..d.domain_size(c.target) {
            let mut row = vec![0i64; points];
            row[table.id(Point { variable: c.target, element: a }) as usize] += 1;
            for (b, &img) in c.map.iter().enumerate() {
                if img == a {
                    row[table.id(Point { variable: c.source, element: b }) as usize] -= 1;
                }
            }
            if row.iter().any(|&v| v != 0) {
                rows.push(row);
                rhs.push(0);
            }
        }
    }
    match solve_mod_n(&rows, &rhs, n)? {
        SolveResult::Feasible { particular, .. } => {
            let values = d
                .variables
                .iter()
                .enumerate()
                .map(|(v, var)| {
                    (0..var.domain.len())
                        .map(|e| particular[table.id(Point { variable: v, element: e }) as usize])
                        .collect()
                })
                .collect();
            Ok(Some(ZnSolution { n, values }))
        }
        SolveResult::Infeasible { .. } => Ok(None),
    }
}

/// Canonical storage of a level-k tensor: sorted point-id tuples with the
/// forced zeros omitted, one residue per kept key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorSolution {
    pub p: u64,
    pub k: usize,
    pub meta: PowerMeta,
    /// Nonzero values on canonical keys.
    pub entries: BTreeMap<Vec<u32>, u64>,
}

impl TensorSolution {
    /// Value at an arbitrary point tuple: symmetrizes and applies the zero
    /// pattern on the fly.
    pub fn value(&self, table: &PointTable, ids: &[u32]) -> u64 {
        let mut key = ids.to_vec();
        key.sort_unstable();
        if !key_is_valid(table, &key) {
            return 0;
        }
        self.entries.get(&key).copied().unwrap_or(0)
    }
}

/// A sorted key is valid unless two adjacent entries are distinct points of
/// the same variable (points of one variable are consecutive ids).
fn key_is_valid(table: &PointTable, sorted_ids: &[u32]) -> bool {
    sorted_ids
        .windows(2)
        .all(|w| w[0] == w[1] || table.variable_of(w[0]) != table.variable_of(w[1]))
}

/// All valid canonical (sorted) tuples of `k` point ids, lexicographic.
pub(crate) fn enumerate_keys(table: &PointTable, k: usize, cap: u64) -> Result<Vec<Vec<u32>>> {
    let total = table.len() as u32;
    let mut keys = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(
        table: &PointTable,
        total: u32,
        k: usize,
        cap: u64,
        current: &mut Vec<u32>,
        keys: &mut Vec<Vec<u32>>,
    ) -> Result<()> {
        if current.len() == k {
            if keys.len() as u64 >= cap {
                return Err(Error::SizeCapExceeded(format!(
                    "more than {cap} canonical tensor unknowns"
                )));
            }
            keys.push(current.clone());
            return Ok(());
        }
        let start = current.last().copied();
        match start {
            None => {
                for id in 0..total {
                    current.push(id);
                    rec(table, total, k, cap, current, keys)?;
                    current.pop();
                }
            }
            Some(prev) => {
                // Repeat the previous point, or move to a strictly later
                // variable; anything else is a forced zero.
                current.push(prev);
                rec(table, total, k, cap, current, keys)?;
                current.pop();
                let next_var_start = table.ids_of_variable(table.variable_of(prev)).end;
                for id in next_var_start..total {
                    current.push(id);
                    rec(table, total, k, cap, current, keys)?;
                    current.pop();
                }
            }
        }
        Ok(())
    }
    rec(table, total, k, cap, &mut current, &mut keys)?;
    Ok(keys)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    /// Build the saturated power explicitly and relax it like any LC
    /// instance.
    Direct,
    /// Solve on canonical tensor unknowns with the merge and product
    /// equations rewritten onto canonical representatives.
    Canonical,
}

/// Equation stream over canonical keys shared by the canonical solver and
/// the tensor checker. Calls `emit(coeffs, rhs)` for every equation; coeffs
/// pair canonical-key indices with residues. Returning `Ok(false)` from
/// `emit` stops the stream early.
fn canonical_equations<F>(
    d: &LcInstance,
    p: u64,
    k: usize,
    table: &PointTable,
    keys: &[Vec<u32>],
    mut emit: F,
) -> Result<()>
where
    F: FnMut(&[(u32, u64)], u64) -> Result<bool>,
{
    let key_index = |key: &[u32]| -> Option<u32> {
        keys.binary_search_by(|probe| probe.as_slice().cmp(key))
            .ok()
            .map(|i| i as u32)
    };
    let canonical = |ids: &mut Vec<u32>| -> Option<u32> {
        ids.sort_unstable();
        if key_is_valid(table, ids) {
            let idx = key_index(ids);
            debug_assert!(idx.is_some(), "valid key missing from enumeration");
            idx
        } else {
            None
        }
    };
    let nvars = d.variables.len();

    // Block sums: for every multiset of k variables, the values over its
    // product domain sum to 1.
    {
        let mut var_tuple = vec![0usize; k];
        loop {
            let mut acc: HashMap<u32, u64> = HashMap::new();
            let sizes: Vec<usize> = var_tuple.iter().map(|&v| d.domain_size(v)).collect();
            let mut elems = vec![0usize; k];
            let empty = sizes.iter().any(|&s| s == 0);
            if !empty {
                loop {
                    let mut ids: Vec<u32> = var_tuple
                        .iter()
                        .zip(&elems)
                        .map(|(&v, &e)| table.id(Point { variable: v, element: e }))
                        .collect();
                    if let Some(idx) = canonical(&mut ids) {
                        let slot = acc.entry(idx).or_insert(0);
                        *slot = (*slot + 1) % p;
                    }
                    if !advance_mixed(&mut elems, &sizes) {
                        break;
                    }
                }
            }
            let coeffs: Vec<(u32, u64)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
            if !emit(&coeffs, 1)? {
                return Ok(());
            }
            if !advance_nondecreasing(&mut var_tuple, nvars) {
                break;
            }
        }
    }

    if k >= 2 {
        let small_keys = enumerate_keys(table, k - 1, u64::MAX)?;
        // Merge equations: duplicating a point of a (k-1)-tuple equals
        // marginalizing any fresh variable over the same tuple.
        for q in &small_keys {
            let mut distinct = q.clone();
            distinct.dedup();
            for &pid in &distinct {
                let mut lhs = q.clone();
                lhs.push(pid);
                let lhs_idx = canonical(&mut lhs).expect("duplicate of a valid key is valid");
                for y in 0..nvars {
                    if y == table.variable_of(pid) {
                        continue;
                    }
                    let mut acc: HashMap<u32, u64> = HashMap::new();
                    *acc.entry(lhs_idx).or_insert(0) += 1;
                    for e in 0..d.domain_size(y) {
                        let mut rhs_key = q.clone();
                        rhs_key.push(table.id(Point { variable: y, element: e }));
                        if let Some(idx) = canonical(&mut rhs_key) {
                            let slot = acc.entry(idx).or_insert(0);
                            *slot = (*slot + p - 1) % p;
                        }
                    }
                    let coeffs: Vec<(u32, u64)> =
                        acc.into_iter().filter(|&(_, c)| c % p != 0).collect();
                    if !coeffs.is_empty() && !emit(&coeffs, 0)? {
                        return Ok(());
                    }
                }
            }
        }
        // Product equations: every base constraint, applied in one slot
        // with the rest fixed to an arbitrary (k-1)-tuple.
        for c in &d.constraints {
            let preimages: Vec<Vec<usize>> = {
                let mut pre = vec![Vec::new(); d.domain_size(c.target)];
                for (b, &a) in c.map.iter().enumerate() {
                    pre[a].push(b);
                }
                pre
            };
            for q in &small_keys {
                for a in 0..d.domain_size(c.target) {
                    let mut acc: HashMap<u32, u64> = HashMap::new();
                    let mut lhs = q.clone();
                    lhs.push(table.id(Point { variable: c.target, element: a }));
                    if let Some(idx) = canonical(&mut lhs) {
                        *acc.entry(idx).or_insert(0) += 1;
                    }
                    for &b in &preimages[a] {
                        let mut rhs_key = q.clone();
                        rhs_key.push(table.id(Point { variable: c.source, element: b }));
                        if let Some(idx) = canonical(&mut rhs_key) {
                            let slot = acc.entry(idx).or_insert(0);
                            *slot = (*slot + p - 1) % p;
                        }
                    }
                    let coeffs: Vec<(u32, u64)> =
                        acc.into_iter().filter(|&(_, c)| c % p != 0).collect();
                    if !coeffs.is_empty() && !emit(&coeffs, 0)? {
                        return Ok(());
                    }
                }
            }
        }
    }
    Ok(())
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

/// Next non-decreasing tuple over [0, n), lexicographic.
fn advance_nondecreasing(tuple: &mut [usize], n: usize) -> bool {
    let k = tuple.len();
    for i in (0..k).rev() {
        if tuple[i] + 1 < n {
            let v = tuple[i] + 1;
            for t in tuple.iter_mut().skip(i) {
                *t = v;
            }
            return true;
        }
    }
    false
}

/// Solves the k-th level of the Z_p relaxation.
pub fn solve_level(
    d: &LcInstance,
    p: u64,
    k: usize,
    encoding: Encoding,
    caps: &Caps,
) -> Result<Option<TensorSolution>> {
    if k == 0 {
        return Err(Error::LevelZero);
    }
    match encoding {
        Encoding::Direct => solve_level_direct(d, p, k, caps),
        Encoding::Canonical => solve_level_canonical(d, p, k, caps),
    }
}

fn solve_level_canonical(
    d: &LcInstance,
    p: u64,
    k: usize,
    caps: &Caps,
) -> Result<Option<TensorSolution>> {
    let table = PointTable::new(d);
    if table.len() >= u32::MAX as usize {
        return Err(Error::SizeCapExceeded("too many points".into()));
    }
    let keys = enumerate_keys(&table, k, caps.max_unknowns)?;
    let mut solver = IncrementalSolver::new(p, keys.len())?;
    let mut nonzeros: u64 = 0;
    canonical_equations(d, p, k, &table, &keys, |coeffs, rhs| {
        nonzeros += coeffs.len() as u64;
        if nonzeros > caps.max_nonzeros {
            return Err(Error::SizeCapExceeded(format!(
                "more than {} nonzero coefficients",
                caps.max_nonzeros
            )));
        }
        Ok(solver.push(coeffs, rhs))
    })?;
    if !solver.is_feasible() {
        return Ok(None);
    }
    match solver.finish(false)? {
        SolveResult::Feasible { particular, .. } => {
            let mut entries = BTreeMap::new();
            for (i, key) in keys.iter().enumerate() {
                if particular[i] != 0 {
                    entries.insert(key.clone(), particular[i] as u64);
                }
            }
            Ok(Some(TensorSolution { p, k, meta: PowerMeta::new(d, k), entries }))
        }
        SolveResult::Infeasible { .. } => Ok(None),
    }
}

fn solve_level_direct(d: &LcInstance, p: u64, k: usize, caps: &Caps) -> Result<Option<TensorSolution>> {
    let (power, meta) = saturated_power(d, k, true, caps)?;
    let Some(zp) = solve_zp(&power, p, caps)? else {
        return Ok(None);
    };
    let table = PointTable::new(d);
    let mut entries: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for (idx, values) in zp.values.iter().enumerate() {
        let var_tuple = meta.var_tuple(idx as u64);
        for (code, &val) in values.iter().enumerate() {
            let elems = meta.elem_tuple(&var_tuple, code);
            let mut key: Vec<u32> = var_tuple
                .iter()
                .zip(&elems)
                .map(|(&v, &e)| table.id(Point { variable: v, element: e }))
                .collect();
            key.sort_unstable();
            if !key_is_valid(&table, &key) {
                if val != 0 {
                    return Err(Error::InvalidTensor(
                        "nonzero value on a same-variable pair".into(),
                    ));
                }
                continue;
            }
            match entries.get(&key) {
                Some(&prev) if prev != val => {
                    return Err(Error::InvalidTensor("asymmetric power solution".into()))
                }
                Some(_) => {}
                None => {
                    entries.insert(key, val);
                }
            }
        }
    }
    entries.retain(|_, v| *v != 0);
    Ok(Some(TensorSolution { p, k, meta: PowerMeta::new(d, k), entries }))
}

/// Restricts a tensor on `original` to one of its connected components
/// (given as the sorted original variable indices): keeps the entries
/// whose points all lie on the component and remaps their ids.
pub fn restrict_tensor(
    original: &LcInstance,
    t: &TensorSolution,
    component: &LcInstance,
    old_vars: &[usize],
) -> Result<TensorSolution> {
    let orig_table = PointTable::new(original);
    let comp_table = PointTable::new(component);
    let mut new_of_old: Vec<Option<usize>> = vec![None; original.variables.len()];
    for (new, &old) in old_vars.iter().enumerate() {
        if old >= original.variables.len() {
            return Err(Error::ShapeMismatch(format!("component variable {old} out of range")));
        }
        new_of_old[old] = Some(new);
    }
    let mut entries = BTreeMap::new();
    for (key, &v) in &t.entries {
        let mut new_key = Vec::with_capacity(key.len());
        for &id in key {
            let pt = orig_table.point(id);
            let Some(nv) = new_of_old[pt.variable] else {
                new_key.clear();
                break;
            };
            new_key.push(comp_table.id(Point { variable: nv, element: pt.element }));
        }
        if !new_key.is_empty() {
            new_key.sort_unstable();
            entries.insert(new_key, v);
        }
    }
    Ok(TensorSolution { p: t.p, k: t.k, meta: PowerMeta::new(component, t.k), entries })
}

/// Checks every invariant of a tensor solution: canonical nonzero keys,
/// block sums, and the merge and product equations.
pub fn check_tensor_solution(d: &LcInstance, p: u64, k: usize, t: &TensorSolution) -> Result<bool> {
    if t.p != p || t.k != k {
        return Err(Error::ShapeMismatch(format!(
            "tensor is for p = {}, k = {}",
            t.p, t.k
        )));
    }
    if t.meta.base_domain_sizes != d.variables.iter().map(|v| v.domain.len()).collect::<Vec<_>>() {
        return Err(Error::ShapeMismatch("tensor metadata does not match the instance".into()));
    }
    let table = PointTable::new(d);
    for (key, &value) in &t.entries {
        if key.len() != k
            || key.windows(2).any(|w| w[0] > w[1])
            || key.iter().any(|&id| id as usize >= table.len())
            || !key_is_valid(&table, key)
            || value == 0
            || value >= p
        {
            return Ok(false);
        }
    }
    let keys = enumerate_keys(&table, k, u64::MAX)?;
    let value_at = |idx: u32| -> u64 { t.entries.get(&keys[idx as usize]).copied().unwrap_or(0) };
    let mut ok = true;
    canonical_equations(d, p, k, &table, &keys, |coeffs, rhs| {
        let lhs: u64 = coeffs
            .iter()
            .fold(0u64, |acc, &(idx, c)| (acc + c * value_at(idx)) % p);
        if lhs != rhs % p {
            ok = false;
        }
        Ok(ok)
    })?;
    Ok(ok)
}
