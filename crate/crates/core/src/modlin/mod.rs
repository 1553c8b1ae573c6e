//! Exact linear algebra over Z_p (prime) and Z_n.
//!
//! Gaussian elimination over prime fields uses the packed engine in
//! [`engine`]; general moduli and the integers go through the Smith normal
//! form in [`snf`]. Pivoting is deterministic (first nonzero in column
//! order), so reduced forms, particular solutions, and nullspace bases are
//! canonical and safe to freeze into test fixtures.

mod engine;
mod snf;

pub use snf::{smith_normal_form, solve_mod_n, SnfDecomposition};

use crate::{Error, Result};
use engine::{AnyElim, Insert};

/// Dense matrix with entries reduced modulo a fixed modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ModMatrix {
    /// Builds a matrix from row-major entries; every entry must already be
    /// a residue in `[0, modulus)`.
    pub fn new(modulus: u64, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if modulus < 2 || modulus > u32::MAX as u64 {
            return Err(Error::OutOfRange(format!("modulus {modulus}")));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|&&v| v >= modulus) {
            return Err(Error::OutOfRange(format!("entry {bad} >= modulus {modulus}")));
        }
        Ok(ModMatrix { modulus, rows, cols, data })
    }

    pub fn from_rows(modulus: u64, rows: Vec<Vec<u64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        ModMatrix::new(modulus, r, c, rows.into_iter().flatten().collect())
    }

    pub fn zero(modulus: u64, rows: usize, cols: usize) -> Result<Self> {
        ModMatrix::new(modulus, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(modulus: u64, n: usize) -> Result<Self> {
        let mut m = ModMatrix::zero(modulus, n, n)?;
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        Ok(m)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> ModMatrix {
        let mut data = vec![0; self.data.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                data[c * self.rows + r] = self.get(r, c);
            }
        }
        ModMatrix {
            modulus: self.modulus,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// `A * x` mod the matrix modulus.
    pub fn mul_vec(&self, x: &[u64]) -> Result<Vec<u64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        let m = self.modulus as u128;
        Ok((0..self.rows)
            .map(|r| {
                let acc: u128 = self
                    .row(r)
                    .iter()
                    .zip(x)
                    .fold(0u128, |acc, (&a, &b)| (acc + a as u128 * b as u128) % m);
                acc as u64
            })
            .collect())
    }
}

/// Outcome of a linear solve, modulo either a prime or a general `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Feasible {
        /// Canonical particular solution: free variables are 0 after
        /// deterministic RREF (or Smith-form back-substitution).
        particular: Vec<i64>,
        /// Canonical basis of `{z : Az = 0}`, present when requested.
        nullspace_basis: Option<Vec<Vec<i64>>>,
    },
    Infeasible {
        certificate: Certificate,
    },
}

impl SolveResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SolveResult::Feasible { .. })
    }

    pub fn particular(&self) -> Option<&[i64]> {
        match self {
            SolveResult::Feasible { particular, .. } => Some(particular),
            SolveResult::Infeasible { .. } => None,
        }
    }
}

/// Witness of unsolvability, retained for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Elimination produced the reduced row `0 = constant` with a nonzero
    /// constant.
    ZeroEqualsNonzero { constant: u64 },
    /// The Smith diagonal entry fails to divide the transformed right-hand
    /// side modulo `n` (`n = 0` means over the integers).
    Divisibility { index: usize, diagonal: i128, rhs: i128, modulus: u64 },
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NonPrimeModulus(p))
    }
}

fn sparse_row(row: &[u64]) -> Vec<(u32, u64)> {
    row.iter()
        .enumerate()
        .filter(|(_, &v)| v != 0)
        .map(|(c, &v)| (c as u32, v))
        .collect()
}

/// Reduced row-echelon form over GF(p) with deterministic pivoting.
///
/// Returns the RREF (zero rows at the bottom), the strictly increasing list
/// of pivot columns, and the rank. The row space is preserved.
pub fn rref_mod_p(m: &ModMatrix) -> Result<(ModMatrix, Vec<usize>, usize)> {
    require_prime(m.modulus)?;
    let mut elim = AnyElim::new(m.modulus, m.cols, None);
    for r in 0..m.rows {
        elim.insert_sparse(&sparse_row(m.row(r)));
    }
    elim.reduce();
    let rank = elim.rank();
    let pivots = elim.pivot_columns();
    let mut rows = elim.dense_rows();
    rows.resize(m.rows, vec![0; m.cols]);
    Ok((ModMatrix::from_rows(m.modulus, rows)?, pivots, rank))
}

/// Solves `A x = b` over GF(p), where p is the (prime) modulus of `a`.
///
/// Feasible results carry the canonical particular solution (free variables
/// zero) and, when `want_nullspace` is set, a canonical nullspace basis.
pub fn solve_mod_p(a: &ModMatrix, b: &[u64], want_nullspace: bool) -> Result<SolveResult> {
    require_prime(a.modulus)?;
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch(format!(
            "rhs of length {} against {} rows",
            b.len(),
            a.rows
        )));
    }
    let mut solver = IncrementalSolver::new(a.modulus, a.cols)?;
    for r in 0..a.rows {
        solver.push(&sparse_row(a.row(r)), b[r] % a.modulus);
    }
    solver.finish(want_nullspace)
}

/// Canonical basis of the left nullspace `{q : q^T A = 0}` over GF(p).
pub fn left_nullspace_mod_p(a: &ModMatrix) -> Result<Vec<Vec<u64>>> {
    require_prime(a.modulus)?;
    let t = a.transpose();
    let result = solve_mod_p(&t, &vec![0; t.rows()], true)?;
    match result {
        SolveResult::Feasible { nullspace_basis, .. } => Ok(nullspace_basis
            .expect("nullspace requested")
            .into_iter()
            .map(|v| v.into_iter().map(|x| x as u64).collect())
            .collect()),
        SolveResult::Infeasible { .. } => unreachable!("homogeneous system"),
    }
}

/// Streaming solver over GF(p): equations are pushed one at a time and a
/// contradiction is detected as soon as it appears, so refutations of large
/// systems exit early.
pub struct IncrementalSolver {
    modulus: u64,
    unknowns: usize,
    elim: AnyElim,
    contradiction: Option<Certificate>,
}

impl IncrementalSolver {
    pub fn new(modulus: u64, unknowns: usize) -> Result<Self> {
        require_prime(modulus)?;
        Ok(IncrementalSolver {
            modulus,
            unknowns,
            elim: AnyElim::new(modulus, unknowns + 1, Some(unknowns)),
            contradiction: None,
        })
    }

    /// Adds `sum(coeff * x_col) = rhs`; duplicate columns accumulate.
    /// Returns false once the system is known infeasible.
    pub fn push(&mut self, coeffs: &[(u32, u64)], rhs: u64) -> bool {
        if self.contradiction.is_some() {
            return false;
        }
        let mut entries: Vec<(u32, u64)> = coeffs
            .iter()
            .map(|&(c, v)| {
                debug_assert!((c as usize) < self.unknowns);
                (c, v % self.modulus)
            })
            .collect();
        entries.push((self.unknowns as u32, rhs % self.modulus));
        if let Insert::Contradiction(row) = self.elim.insert_sparse(&entries) {
            self.contradiction = Some(Certificate::ZeroEqualsNonzero {
                constant: row[self.unknowns],
            });
        }
        self.contradiction.is_none()
    }

    pub fn is_feasible(&self) -> bool {
        self.contradiction.is_none()
    }

    /// Rank of the echelon basis accumulated so far.
    pub fn rank(&self) -> usize {
        self.elim.rank()
    }

    /// Finalizes the system: RREF back-substitution, canonical particular
    /// solution, and optionally a canonical nullspace basis.
    pub fn finish(mut self, want_nullspace: bool) -> Result<SolveResult> {
        if let Some(certificate) = self.contradiction {
            return Ok(SolveResult::Infeasible { certificate });
        }
        self.elim.reduce();
        let pivots = self.elim.pivot_columns();
        let mut particular = vec![0i64; self.unknowns];
        for &c in &pivots {
            particular[c] = self.elim.get(c, self.unknowns) as i64;
        }
        let nullspace_basis = if want_nullspace {
            Some(self.nullspace(&pivots)?)
        } else {
            None
        };
        Ok(SolveResult::Feasible { particular, nullspace_basis })
    }

    fn nullspace(&self, pivots: &[usize]) -> Result<Vec<Vec<i64>>> {
        let m = self.modulus;
        let mut basis: Vec<Vec<u64>> = Vec::new();
        for free in 0..self.unknowns {
            if self.elim.has_pivot(free) {
                continue;
            }
            let mut v = vec![0u64; self.unknowns];
            v[free] = 1;
            for &c in pivots {
                let coeff = self.elim.get(c, free);
                if coeff != 0 {
                    v[c] = m - coeff;
                }
            }
            basis.push(v);
        }
        // Re-reduce so the basis itself is in canonical RREF.
        let mat = ModMatrix::from_rows(m, basis)?;
        if mat.rows() == 0 {
            return Ok(Vec::new());
        }
        let (rref, _, rank) = rref_mod_p(&mat)?;
        Ok((0..rank)
            .map(|r| rref.row(r).iter().map(|&v| v as i64).collect())
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(modulus: u64, rows: &[&[u64]]) -> ModMatrix {
        ModMatrix::from_rows(modulus, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn rref_duplicate_rows_mod_2() {
        let m = mat(2, &[&[1, 1], &[1, 1]]);
        let (r, pivots, rank) = rref_mod_p(&m).unwrap();
        assert_eq!(r, mat(2, &[&[1, 1], &[0, 0]]));
        assert_eq!(pivots, vec![0]);
        assert_eq!(rank, 1);
    }

    #[test]
    fn rref_identity_mod_5() {
        let m = ModMatrix::identity(5, 3).unwrap();
        let (r, pivots, rank) = rref_mod_p(&m).unwrap();
        assert_eq!(r, m);
        assert_eq!(pivots, vec![0, 1, 2]);
        assert_eq!(rank, 3);
    }

    #[test]
    fn rref_proportional_rows_mod_3() {
        // 2*(1,2) = (2,1) mod 3, so the rows are proportional.
        let m = mat(3, &[&[2, 1], &[1, 2]]);
        let (_, _, rank) = rref_mod_p(&m).unwrap();
        assert_eq!(rank, 1);
    }

    #[test]
    fn rref_rejects_composite_modulus() {
        let m = mat(6, &[&[1, 2]]);
        assert_eq!(rref_mod_p(&m).unwrap_err(), Error::NonPrimeModulus(6));
    }

    #[test]
    fn solve_basic_gf2() {
        // x + y = 1, x = 1  =>  (1, 0)
        let a = mat(2, &[&[1, 1], &[1, 0]]);
        let r = solve_mod_p(&a, &[1, 1], false).unwrap();
        assert_eq!(r.particular().unwrap(), &[1, 0]);
    }

    #[test]
    fn solve_contradiction_gf2() {
        let a = mat(2, &[&[1, 1], &[1, 1]]);
        let r = solve_mod_p(&a, &[1, 0], false).unwrap();
        match r {
            SolveResult::Infeasible {
                certificate: Certificate::ZeroEqualsNonzero { constant },
            } => assert_eq!(constant, 1),
            other => panic!("expected contradiction, got {other:?}"),
        }
    }

    #[test]
    fn solve_scaling_gf3() {
        // 2x = 1 mod 3 => x = 2
        let a = mat(3, &[&[2]]);
        let r = solve_mod_p(&a, &[1], false).unwrap();
        assert_eq!(r.particular().unwrap(), &[2]);
    }

    #[test]
    fn left_nullspace_examples() {
        let m = mat(2, &[&[1], &[1]]);
        assert_eq!(left_nullspace_mod_p(&m).unwrap(), vec![vec![1, 1]]);

        let id = ModMatrix::identity(7, 4).unwrap();
        assert!(left_nullspace_mod_p(&id).unwrap().is_empty());

        // q1 + q2 = 0 mod 3 over the given column pattern.
        let m = mat(3, &[&[1, 0], &[1, 0], &[0, 1]]);
        assert_eq!(left_nullspace_mod_p(&m).unwrap(), vec![vec![1, 2, 0]]);
    }

    #[test]
    fn rref_is_idempotent() {
        let m = mat(5, &[&[1, 2, 3], &[4, 0, 1], &[2, 4, 4]]);
        let (r1, _, _) = rref_mod_p(&m).unwrap();
        let (r2, _, _) = rref_mod_p(&r1).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn feasible_solution_and_nullspace_satisfy_system() {
        let a = mat(3, &[&[1, 2, 0, 1], &[0, 1, 1, 1]]);
        let b = vec![2, 1];
        let SolveResult::Feasible { particular, nullspace_basis } =
            solve_mod_p(&a, &b, true).unwrap()
        else {
            panic!("feasible system");
        };
        let x: Vec<u64> = particular.iter().map(|&v| v as u64).collect();
        assert_eq!(a.mul_vec(&x).unwrap(), b);
        let basis = nullspace_basis.unwrap();
        assert_eq!(basis.len(), 2);
        for z in &basis {
            let shifted: Vec<u64> = x
                .iter()
                .zip(z)
                .map(|(&xi, &zi)| (xi + zi as u64) % 3)
                .collect();
            assert_eq!(a.mul_vec(&shifted).unwrap(), b);
        }
    }

    #[test]
    fn wide_path_solves_large_prime() {
        let p = 1_000_003;
        let a = mat(p, &[&[2, 1], &[1, 1]]);
        let r = solve_mod_p(&a, &[5, 3], false).unwrap();
        let x: Vec<u64> = r.particular().unwrap().iter().map(|&v| v as u64).collect();
        assert_eq!(a.mul_vec(&x).unwrap(), vec![5, 3]);
    }

    fn brute_force_feasible(a: &ModMatrix, b: &[u64]) -> bool {
        let p = a.modulus();
        let n = a.cols();
        let total = (p as u128).pow(n as u32);
        (0..total).any(|code| {
            let mut x = Vec::with_capacity(n);
            let mut c = code;
            for _ in 0..n {
                x.push((c % p as u128) as u64);
                c /= p as u128;
            }
            a.mul_vec(&x).unwrap() == b
        })
    }

    #[test]
    fn cross_oracle_random_4x4() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for p in [2u64, 3, 5] {
            for _ in 0..40 {
                let data: Vec<u64> = (0..16).map(|_| rng.gen_range(0..p)).collect();
                let a = ModMatrix::new(p, 4, 4, data).unwrap();
                let b: Vec<u64> = (0..4).map(|_| rng.gen_range(0..p)).collect();
                let solved = solve_mod_p(&a, &b, false).unwrap().is_feasible();
                assert_eq!(solved, brute_force_feasible(&a, &b), "p={p} a={a:?} b={b:?}");
            }
        }
    }
}
