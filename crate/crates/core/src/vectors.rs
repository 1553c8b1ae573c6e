//! Vector objects over Z_p^N and the constructive equivalence between
//! level-k tensor solutions and vector solutions.
//!
//! A vector object attaches to each domain element a vector of a subspace
//! V <= Z_p^N containing the all-ones vector i with w(i) = 1, such that
//! the vectors sum to i, products of distinct elements (padded with k - 2
//! members of V) have weight zero, and squaring an element inside such a
//! product does not change the weight. Extraction turns a tensor solution
//! into such data by quotienting out the radical of the flattened tensor
//! and realizing the quotient form with 0/1 vectors; reconstruction
//! evaluates weights of componentwise products.

use std::collections::HashMap;

use crate::instance::{LcInstance, PointTable};
use crate::modlin::{left_nullspace_mod_p, rref_mod_p, IncrementalSolver, ModMatrix};
use crate::power::PowerMeta;
use crate::relax::{check_tensor_solution, enumerate_keys, TensorSolution};
use crate::{Error, Result};

/// A triple (V, i, v) over Z_p^N for one domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorObject {
    pub p: u64,
    pub k: usize,
    /// Ambient dimension N; satisfies N = 1 (mod p) so that w(i) = 1.
    pub dim: usize,
    /// Echelon basis of the subspace V (pivot entries 1, strictly
    /// increasing pivot columns).
    pub space_basis: Vec<Vec<u64>>,
    /// One member of V per domain element.
    pub vectors: Vec<Vec<u64>>,
}

pub(crate) fn weight(v: &[u64], p: u64) -> u64 {
    v.iter().fold(0, |acc, &x| (acc + x) % p)
}

pub(crate) fn hadamard(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    a.iter().zip(b).map(|(&x, &y)| x * y % p).collect()
}

fn add_scaled(a: &mut [u64], b: &[u64], coeff: u64, p: u64) {
    for (x, &y) in a.iter_mut().zip(b) {
        *x = (*x + coeff * y) % p;
    }
}

/// Reduces `v` against an echelon basis; the remainder is zero iff `v` is
/// in the span.
fn reduce_against(v: &mut [u64], basis: &[Vec<u64>], p: u64) {
    for row in basis {
        let Some(pivot) = row.iter().position(|&x| x != 0) else { continue };
        let coeff = v[pivot];
        if coeff != 0 {
            add_scaled(v, row, p - coeff, p);
        }
    }
}

/// Multisets of size `len` over `[0, n)`, non-decreasing.
fn multisets(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if len == 0 {
        out.push(Vec::new());
        return out;
    }
    if n == 0 {
        return out;
    }
    let mut cur = vec![0usize; len];
    loop {
        out.push(cur.clone());
        let mut advanced = false;
        for i in (0..len).rev() {
            if cur[i] + 1 < n {
                let v = cur[i] + 1;
                for item in cur.iter_mut().skip(i) {
                    *item = v;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            return out;
        }
    }
}

impl VectorObject {
    pub fn all_ones(&self) -> Vec<u64> {
        vec![1; self.dim]
    }

    /// Checks the defining conditions; the error string names the first
    /// violated one.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let p = self.p;
        if self.k < 2 {
            return Err("level k must be at least 2".into());
        }
        if self.dim % p as usize != 1 {
            return Err(format!("dimension {} is not 1 mod {}", self.dim, p));
        }
        let mut last_pivot = None;
        for row in &self.space_basis {
            if row.len() != self.dim || row.iter().any(|&x| x >= p) {
                return Err("basis row with wrong length or out-of-range entry".into());
            }
            let Some(pivot) = row.iter().position(|&x| x != 0) else {
                return Err("zero row in the space basis".into());
            };
            if row[pivot] != 1 || last_pivot.is_some_and(|l| pivot <= l) {
                return Err("space basis is not in echelon form".into());
            }
            last_pivot = Some(pivot);
        }
        let mut ones = self.all_ones();
        reduce_against(&mut ones, &self.space_basis, p);
        if ones.iter().any(|&x| x != 0) {
            return Err("the all-ones vector is not in the space".into());
        }
        for (a, v) in self.vectors.iter().enumerate() {
            if v.len() != self.dim || v.iter().any(|&x| x >= p) {
                return Err(format!("vector {a} has wrong length or entries"));
            }
            let mut r = v.clone();
            reduce_against(&mut r, &self.space_basis, p);
            if r.iter().any(|&x| x != 0) {
                return Err(format!("vector {a} is not in the space"));
            }
        }
        let mut sum = vec![0u64; self.dim];
        for v in &self.vectors {
            add_scaled(&mut sum, v, 1, p);
        }
        if sum != self.all_ones() {
            return Err("vectors do not sum to the all-ones vector".into());
        }
        // Orthogonality and idempotence over all basis multituples; by
        // multilinearity of the weight this covers arbitrary members of V.
        for us in multisets(self.space_basis.len(), self.k - 2) {
            let mut base = self.all_ones();
            for &u in &us {
                base = hadamard(&base, &self.space_basis[u], p);
            }
            for (a, va) in self.vectors.iter().enumerate() {
                let va_base = hadamard(va, &base, p);
                for (b, vb) in self.vectors.iter().enumerate() {
                    if a != b && weight(&hadamard(&va_base, vb, p), p) != 0 {
                        return Err(format!(
                            "product of vectors {a} and {b} with basis tuple {us:?} has nonzero weight"
                        ));
                    }
                }
                if weight(&hadamard(&va_base, va, p), p) != weight(&va_base, p) {
                    return Err(format!(
                        "squaring vector {a} inside the product with {us:?} changes the weight"
                    ));
                }
            }
        }
        Ok(())
    }

    /// Minor under `map`: sums vectors over preimages into a fresh object
    /// over `target_size` elements.
    pub fn minor(&self, map: &[usize], target_size: usize) -> Result<VectorObject> {
        if map.len() != self.vectors.len() {
            return Err(Error::ShapeMismatch(format!(
                "map of length {} on {} vectors",
                map.len(),
                self.vectors.len()
            )));
        }
        let mut vectors = vec![vec![0u64; self.dim]; target_size];
        for (a, &e) in map.iter().enumerate() {
            if e >= target_size {
                return Err(Error::ShapeMismatch(format!("map value {e} out of range")));
            }
            add_scaled(&mut vectors[e], &self.vectors[a], 1, self.p);
        }
        Ok(VectorObject {
            p: self.p,
            k: self.k,
            dim: self.dim,
            space_basis: self.space_basis.clone(),
            vectors,
        })
    }
}

/// A vector object per LC variable, all sharing (V, i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorSolution {
    pub p: u64,
    pub k: usize,
    pub dim: usize,
    pub space_basis: Vec<Vec<u64>>,
    /// Vectors per variable, one per domain element.
    pub per_variable: Vec<Vec<Vec<u64>>>,
}

impl VectorSolution {
    pub fn object_for(&self, var: usize) -> VectorObject {
        VectorObject {
            p: self.p,
            k: self.k,
            dim: self.dim,
            space_basis: self.space_basis.clone(),
            vectors: self.per_variable[var].clone(),
        }
    }

    /// Verifies every per-variable object and every constraint pushforward.
    pub fn verify(&self, d: &LcInstance) -> std::result::Result<(), String> {
        if self.per_variable.len() != d.variables.len() {
            return Err("one vector family per variable required".into());
        }
        for (x, var) in d.variables.iter().enumerate() {
            if self.per_variable[x].len() != var.domain.len() {
                return Err(format!("vector count for variable {x}"));
            }
            self.object_for(x).verify().map_err(|e| format!("variable {x}: {e}"))?;
        }
        for (ci, c) in d.constraints.iter().enumerate() {
            let pushed = self
                .object_for(c.source)
                .minor(&c.map, d.domain_size(c.target))
                .map_err(|e| format!("constraint {ci}: {e}"))?;
            if pushed.vectors != self.per_variable[c.target] {
                return Err(format!("constraint {ci} pushforward mismatch"));
            }
        }
        Ok(())
    }
}

/// Realizes a prescribed totally symmetric form on `labels` basis labels
/// with 0/1 vectors: for every k-multituple with underlying set S,
/// `w(r(w_1) * ... * r(w_k)) = targets[S]`.
///
/// Subsets are processed by decreasing size (ties lexicographically); each
/// adds as many indicator coordinates as its residual deficit, which never
/// disturbs the already-processed sets. Targets must be present for every
/// nonempty subset of size at most k.
pub fn gram_realize(
    labels: usize,
    targets: &HashMap<Vec<usize>, u64>,
    p: u64,
    k: usize,
) -> Result<(usize, Vec<Vec<u64>>)> {
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    for size in (1..=k.min(labels)).rev() {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            subsets.push(subset.clone());
            if !next_combination(&mut subset, labels) {
                break;
            }
        }
    }
    let mut vecs: Vec<Vec<u64>> = vec![Vec::new(); labels];
    let mut dim = 0usize;
    for s in &subsets {
        let target = *targets
            .get(s)
            .ok_or_else(|| Error::ShapeMismatch(format!("missing target for subset {s:?}")))?
            % p;
        // Current weight of the product over the set; the vectors are 0/1,
        // so repetitions inside a multituple are irrelevant.
        let mut current = 0u64;
        for coord in 0..dim {
            if s.iter().all(|&l| vecs[l][coord] == 1) {
                current = (current + 1) % p;
            }
        }
        let deficit = (target + p - current) % p;
        for _ in 0..deficit {
            for (l, v) in vecs.iter_mut().enumerate() {
                v.push(u64::from(s.contains(&l)));
            }
            dim += 1;
        }
    }
    Ok((dim, vecs))
}

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

/// Compositions of k into `parts` positive integers.
fn compositions(k: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![k]];
    }
    let mut out = Vec::new();
    for first in 1..=k - (parts - 1) {
        for rest in compositions(k - first, parts - 1) {
            let mut c = vec![first];
            c.extend(rest);
            out.push(c);
        }
    }
    out
}

fn push_dense(span: &mut IncrementalSolver, v: &[u64]) {
    let coeffs: Vec<(u32, u64)> = v
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, &x)| (i as u32, x))
        .collect();
    span.push(&coeffs, 0);
}

/// Extracts a vector solution from a valid level-k tensor on a connected
/// instance: computes the radical of the flattened tensor, extends the
/// shared block-sum class to a basis by point classes, realizes the
/// quotient form with 0/1 vectors, and reads every point's vector off its
/// class coordinates.
pub fn extract_vectors(d: &LcInstance, t: &TensorSolution) -> Result<VectorSolution> {
    let p = t.p;
    let k = t.k;
    if k < 2 {
        return Err(Error::ShapeMismatch("extraction requires level k >= 2".into()));
    }
    if !d.is_connected() {
        return Err(Error::NotConnected);
    }
    if !check_tensor_solution(d, p, k, t)? {
        return Err(Error::InvalidTensor("tensor fails its invariants".into()));
    }
    let table = PointTable::new(d);
    let n_points = table.len();

    // Radical: left nullspace of the |P| x (canonical (k-1)-multisets)
    // flattening; symmetry makes the remaining columns redundant and the
    // zero pattern removes the invalid ones.
    let small_keys = enumerate_keys(&table, k - 1, u64::MAX)?;
    let mut flat = Vec::with_capacity(n_points * small_keys.len());
    let mut scratch = Vec::with_capacity(k);
    for pid in 0..n_points as u32 {
        for q in &small_keys {
            scratch.clear();
            scratch.extend_from_slice(q);
            scratch.push(pid);
            flat.push(t.value(&table, &scratch));
        }
    }
    let flat = ModMatrix::new(p, n_points, small_keys.len(), flat)?;
    let radical = left_nullspace_mod_p(&flat)?;

    // Basis of the quotient: the shared block-sum class first, then point
    // classes in (variable, element) order, tested against the radical.
    let dim_w = n_points - radical.len();
    let mut span = IncrementalSolver::new(p, n_points)?;
    for row in &radical {
        push_dense(&mut span, row);
    }
    let mut m_vec = vec![0u64; n_points];
    for id in table.ids_of_variable(0) {
        m_vec[id as usize] = 1;
    }
    let before = span.rank();
    push_dense(&mut span, &m_vec);
    if span.rank() == before {
        return Err(Error::SymmetryAssertionFailed(
            "block-sum class lies in the radical".into(),
        ));
    }
    let mut basis_vecs: Vec<Vec<u64>> = vec![m_vec];
    let mut basis_points: Vec<u32> = Vec::new();
    for pid in 0..n_points as u32 {
        if basis_vecs.len() == dim_w {
            break;
        }
        let mut e = vec![0u64; n_points];
        e[pid as usize] = 1;
        let before = span.rank();
        push_dense(&mut span, &e);
        if span.rank() > before {
            basis_vecs.push(e);
            basis_points.push(pid);
        }
    }
    if basis_vecs.len() != dim_w {
        return Err(Error::SymmetryAssertionFailed(
            "point classes do not span the quotient".into(),
        ));
    }

    // Targets for the realization: tensor values on padded point tuples,
    // asserted independent of the padding (total symmetry).
    let labels = basis_points.len();
    let mut targets: HashMap<Vec<usize>, u64> = HashMap::new();
    for size in 1..=k.min(labels) {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            let mut value = None;
            for comp in compositions(k, size) {
                let mut ids = Vec::with_capacity(k);
                for (pos, &mult) in comp.iter().enumerate() {
                    ids.extend(std::iter::repeat(basis_points[subset[pos]]).take(mult));
                }
                let v = t.value(&table, &ids);
                match value {
                    None => value = Some(v),
                    Some(prev) if prev != v => {
                        return Err(Error::SymmetryAssertionFailed(format!(
                            "padding of subset {subset:?} is ambiguous: {prev} vs {v}"
                        )));
                    }
                    Some(_) => {}
                }
            }
            targets.insert(subset.clone(), value.expect("at least one composition"));
            if !next_combination(&mut subset, labels) {
                break;
            }
        }
    }
    let (raw_dim, raw_vecs) = gram_realize(labels, &targets, p, k)?;
    let dim = if raw_dim % p as usize == 1 {
        raw_dim
    } else {
        raw_dim + (1 + p as usize - raw_dim % p as usize) % p as usize
    };
    // r on the basis: all-ones for the block-sum class, zero-padded
    // realization vectors for the point classes.
    let mut r_basis: Vec<Vec<u64>> = Vec::with_capacity(dim_w);
    r_basis.push(vec![1; dim]);
    for v in raw_vecs {
        let mut padded = v;
        padded.resize(dim, 0);
        r_basis.push(padded);
    }

    // Coordinates of every point class: invert the column matrix
    // [basis | radical], which is square and invertible by construction.
    let mut columns: Vec<&Vec<u64>> = basis_vecs.iter().collect();
    columns.extend(radical.iter());
    debug_assert_eq!(columns.len(), n_points);
    let mut aug = Vec::with_capacity(n_points * 2 * n_points);
    for row in 0..n_points {
        for col in columns.iter() {
            aug.push(col[row]);
        }
        for col in 0..n_points {
            aug.push(u64::from(col == row));
        }
    }
    let aug = ModMatrix::new(p, n_points, 2 * n_points, aug)?;
    let (rref, pivots, rank) = rref_mod_p(&aug)?;
    if rank != n_points || pivots.iter().take(n_points).enumerate().any(|(i, &c)| i != c) {
        return Err(Error::SymmetryAssertionFailed("basis matrix is singular".into()));
    }

    let mut per_variable: Vec<Vec<Vec<u64>>> = Vec::with_capacity(d.variables.len());
    for x in 0..d.variables.len() {
        let mut vecs = Vec::with_capacity(d.domain_size(x));
        for id in table.ids_of_variable(x) {
            // Column id of the inverse holds the coefficients of the point
            // indicator; radical coefficients do not contribute.
            let mut v = vec![0u64; dim];
            for (j, r_j) in r_basis.iter().enumerate() {
                let coeff = rref.get(j, n_points + id as usize);
                if coeff != 0 {
                    add_scaled(&mut v, r_j, coeff, p);
                }
            }
            vecs.push(v);
        }
        per_variable.push(vecs);
    }

    let basis_mat = ModMatrix::from_rows(p, r_basis)?;
    let (space_rref, _, space_rank) = rref_mod_p(&basis_mat)?;
    let space_basis: Vec<Vec<u64>> =
        (0..space_rank).map(|r| space_rref.row(r).to_vec()).collect();

    let solution = VectorSolution { p, k, dim, space_basis, per_variable };
    solution.verify(d).map_err(Error::InvalidVectorSolution)?;
    Ok(solution)
}

/// Evaluates the Gram tensor of a vector solution: the value at a point
/// tuple is the weight of the componentwise product of its vectors.
pub fn tensor_from_vectors(d: &LcInstance, s: &VectorSolution) -> Result<TensorSolution> {
    s.verify(d).map_err(Error::InvalidVectorSolution)?;
    let table = PointTable::new(d);
    let vector_of = |id: u32| -> &Vec<u64> {
        let pt = table.point(id);
        &s.per_variable[pt.variable][pt.element]
    };
    let keys = enumerate_keys(&table, s.k, u64::MAX)?;
    let mut entries = std::collections::BTreeMap::new();
    for key in keys {
        let mut prod = vector_of(key[0]).clone();
        for &id in &key[1..] {
            prod = hadamard(&prod, vector_of(id), s.p);
        }
        let w = weight(&prod, s.p);
        if w != 0 {
            entries.insert(key, w);
        }
    }
    Ok(TensorSolution { p: s.p, k: s.k, meta: PowerMeta::new(d, s.k), entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{lc_of_csp, Atom, Point, Variable};
    use crate::limits::Caps;
    use crate::relax::{solve_level, Encoding};
    use crate::samples;

    fn simple_object() -> VectorObject {
        // D = {a, b} with v(a) = 100, v(b) = 011 over Z_2^3.
        VectorObject {
            p: 2,
            k: 2,
            dim: 3,
            space_basis: vec![vec![1, 0, 0], vec![0, 1, 1]],
            vectors: vec![vec![1, 0, 0], vec![0, 1, 1]],
        }
    }

    #[test]
    fn singleton_object_verifies() {
        let o = VectorObject {
            p: 3,
            k: 2,
            dim: 1,
            space_basis: vec![vec![1]],
            vectors: vec![vec![1]],
        };
        assert!(o.verify().is_ok());
    }

    #[test]
    fn two_element_object_verifies() {
        assert!(simple_object().verify().is_ok());
    }

    #[test]
    fn sum_condition_violation_is_reported() {
        let mut o = simple_object();
        o.vectors[1] = vec![1, 1, 0];
        o.space_basis = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let err = o.verify().unwrap_err();
        assert!(err.contains("sum"), "{err}");
    }

    #[test]
    fn minor_merging_all_gives_all_ones() {
        let o = simple_object();
        let merged = o.minor(&[0, 0], 1).unwrap();
        assert_eq!(merged.vectors, vec![vec![1, 1, 1]]);
        assert!(merged.verify().is_ok());
        let id = o.minor(&[0, 1], 2).unwrap();
        assert_eq!(id, o);
    }

    #[test]
    fn minor_example_from_three_elements() {
        // (100, 010, 001) under 1 -> 1, 2 -> 2, 3 -> 2 lands on
        // (100, 011, 000).
        let o = VectorObject {
            p: 2,
            k: 2,
            dim: 3,
            space_basis: vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            vectors: vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        };
        let m = o.minor(&[0, 1, 1], 3).unwrap();
        assert_eq!(m.vectors, vec![vec![1, 0, 0], vec![0, 1, 1], vec![0, 0, 0]]);
    }

    #[test]
    fn minor_functoriality() {
        let o = VectorObject {
            p: 3,
            k: 3,
            dim: 4,
            space_basis: vec![
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
            ],
            vectors: vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 1]],
        };
        let alpha = [0usize, 0, 1];
        let beta = [1usize, 1];
        let via_both = o.minor(&alpha, 2).unwrap().minor(&beta, 2).unwrap();
        let composed: Vec<usize> = alpha.iter().map(|&a| beta[a]).collect();
        let direct = o.minor(&composed, 2).unwrap();
        assert_eq!(via_both, direct);
        let id_map = [0usize, 1, 2];
        assert_eq!(o.minor(&id_map, 3).unwrap(), o);
    }

    #[test]
    fn gram_realize_single_label() {
        let mut targets = HashMap::new();
        targets.insert(vec![0], 1u64);
        let (n, r) = gram_realize(1, &targets, 2, 2).unwrap();
        assert_eq!(n, 1);
        assert_eq!(r, vec![vec![1]]);
    }

    #[test]
    fn gram_realize_two_labels_traced() {
        let mut targets = HashMap::new();
        targets.insert(vec![0, 1], 1u64);
        targets.insert(vec![0], 1u64);
        targets.insert(vec![1], 0u64);
        let (n, r) = gram_realize(2, &targets, 2, 2).unwrap();
        assert_eq!(n, 2);
        assert_eq!(r[0], vec![1, 0]);
        assert_eq!(r[1], vec![1, 1]);
        // Re-verify all three targets.
        assert_eq!(weight(&hadamard(&r[0], &r[1], 2), 2), 1);
        assert_eq!(weight(&r[0], 2), 1);
        assert_eq!(weight(&r[1], 2), 0);
    }

    #[test]
    fn gram_realize_all_zero_targets() {
        let mut targets = HashMap::new();
        targets.insert(vec![0], 0u64);
        targets.insert(vec![1], 0u64);
        targets.insert(vec![0, 1], 0u64);
        let (n, r) = gram_realize(2, &targets, 3, 2).unwrap();
        assert_eq!(n, 0);
        assert!(r.iter().all(Vec::is_empty));
    }

    #[test]
    fn extraction_round_trips_the_printed_table() {
        let lc = lc_of_csp(&samples::cycle_csp());
        let t = samples::cycle_level2_tensor();
        let s = extract_vectors(&lc, &t).unwrap();
        assert!(s.verify(&lc).is_ok());
        let back = tensor_from_vectors(&lc, &s).unwrap();
        assert_eq!(back.entries, t.entries);
    }

    #[test]
    fn extraction_requires_connectivity() {
        let lc = LcInstance::new(
            vec![
                Variable { name: "a".into(), domain: vec![Atom::int(0)] },
                Variable { name: "b".into(), domain: vec![Atom::int(0)] },
            ],
            vec![],
        )
        .unwrap();
        let t = solve_level(&lc, 2, 2, Encoding::Canonical, &Caps::default())
            .unwrap()
            .unwrap();
        assert!(matches!(extract_vectors(&lc, &t), Err(Error::NotConnected)));
    }

    #[test]
    fn singleton_instance_extraction() {
        let lc = LcInstance::new(
            vec![Variable { name: "v".into(), domain: vec![Atom::int(0)] }],
            vec![],
        )
        .unwrap();
        let t = solve_level(&lc, 2, 2, Encoding::Canonical, &Caps::default())
            .unwrap()
            .unwrap();
        let s = extract_vectors(&lc, &t).unwrap();
        assert_eq!(s.per_variable[0][0], vec![1; s.dim]);
        let back = tensor_from_vectors(&lc, &s).unwrap();
        assert_eq!(back.entries, t.entries);
    }

    #[test]
    fn determined_tensor_extracts_rank_one_data() {
        // The indicator tensor of a classical solution extracts to vectors
        // in {0, i}.
        let lc = lc_of_csp(&samples::chain_csp());
        let solution = vec![1usize, 0, 0, 0, 1, 0];
        assert!(lc.check_solution(&solution).unwrap());
        let table = PointTable::new(&lc);
        let ids: Vec<u32> = solution
            .iter()
            .enumerate()
            .map(|(v, &e)| table.id(Point { variable: v, element: e }))
            .collect();
        let mut entries = std::collections::BTreeMap::new();
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i..] {
                entries.insert(vec![a.min(b), a.max(b)], 1u64);
            }
        }
        let t = TensorSolution { p: 2, k: 2, meta: PowerMeta::new(&lc, 2), entries };
        assert!(check_tensor_solution(&lc, 2, 2, &t).unwrap());
        let s = extract_vectors(&lc, &t).unwrap();
        let ones = vec![1u64; s.dim];
        let zeros = vec![0u64; s.dim];
        for vecs in &s.per_variable {
            for v in vecs {
                assert!(*v == ones || *v == zeros);
            }
        }
        let back = tensor_from_vectors(&lc, &s).unwrap();
        assert_eq!(back.entries, t.entries);
    }

    #[test]
    fn pushforward_of_solution_stays_valid() {
        let lc = lc_of_csp(&samples::cycle_csp());
        let t = samples::cycle_level2_tensor();
        let s = extract_vectors(&lc, &t).unwrap();
        for c in &lc.constraints {
            let pushed =
                s.object_for(c.source).minor(&c.map, lc.domain_size(c.target)).unwrap();
            assert!(pushed.verify().is_ok());
        }
    }

    use crate::instance::LcInstance;

    #[test]
    fn basis_condition_check_matches_random_members() {
        // Spot check: (o) and (p) verified on basis tuples extend to random
        // members of V by multilinearity.
        use rand::{Rng, SeedableRng};
        let lc = lc_of_csp(&samples::chain_csp());
        let t = solve_level(&lc, 3, 3, Encoding::Canonical, &Caps::default())
            .unwrap()
            .expect("satisfiable instance stays feasible at level 3");
        let s = extract_vectors(&lc, &t).unwrap();
        let o = s.object_for(0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let mut u = vec![0u64; o.dim];
            for row in &o.space_basis {
                let c = rng.gen_range(0..o.p);
                add_scaled(&mut u, row, c, o.p);
            }
            for (a, va) in o.vectors.iter().enumerate() {
                let base = hadamard(va, &u, o.p);
                for (b, vb) in o.vectors.iter().enumerate() {
                    if a != b {
                        assert_eq!(weight(&hadamard(&base, vb, o.p), o.p), 0);
                    }
                }
                assert_eq!(weight(&hadamard(&base, va, o.p), o.p), weight(&base, o.p));
            }
        }
    }
}
