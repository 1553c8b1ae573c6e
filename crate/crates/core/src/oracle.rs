//! Brute-force ground truth, the finite infeasibility systems certifying
//! the two no-homomorphism results, and seeded instance generators.
//!
//! The infeasibility systems record concrete vector objects together with
//! minor equalities between them. Every recorded equality is machine
//! verified on the vectors before the implied linear equations on the
//! unknown images are emitted, so the argument's premises are checked, not
//! trusted; the conclusion is then a finite linear system over Z_n decided
//! by Smith normal form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{Assignment, Atom, CspConstraint, CspInstance, LcInstance, Variable};
use crate::limits::Caps;
use crate::modlin::solve_mod_n;
use crate::vectors::VectorObject;
use crate::{Error, Result};

fn assignment_space(sizes: &[usize], cap: u64) -> Result<Option<Vec<usize>>> {
    if sizes.iter().any(|&s| s == 0) {
        return Ok(None);
    }
    let product = sizes.iter().fold(1u128, |acc, &s| acc.saturating_mul(s as u128));
    if product > cap as u128 {
        return Err(Error::SearchSpaceTooLarge(product, cap));
    }
    Ok(Some(vec![0; sizes.len()]))
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

/// Lexicographically first satisfying assignment of a CSP instance, or
/// None.
pub fn brute_solve_csp(inst: &CspInstance, caps: &Caps) -> Result<Option<Assignment>> {
    let sizes: Vec<usize> = inst.variables.iter().map(|v| v.domain.len()).collect();
    let Some(mut assign) = assignment_space(&sizes, caps.max_assignments)? else {
        return Ok(None);
    };
    let relations: Vec<Vec<Vec<usize>>> =
        inst.constraints.iter().map(|c| inst.relation_indices(c)).collect();
    loop {
        let ok = inst.constraints.iter().zip(&relations).all(|(c, rel)| {
            let tuple: Vec<usize> = c.scope.iter().map(|&v| assign[v]).collect();
            rel.contains(&tuple)
        });
        if ok {
            return Ok(Some(assign));
        }
        if !advance_mixed(&mut assign, &sizes) {
            return Ok(None);
        }
    }
}

/// Lexicographically first solution of an LC instance, or None.
pub fn brute_solve_lc(d: &LcInstance, caps: &Caps) -> Result<Option<Assignment>> {
    let sizes: Vec<usize> = d.variables.iter().map(|v| v.domain.len()).collect();
    let Some(mut assign) = assignment_space(&sizes, caps.max_assignments)? else {
        return Ok(None);
    };
    loop {
        if d.check_solution(&assign)? {
            return Ok(Some(assign));
        }
        if !advance_mixed(&mut assign, &sizes) {
            return Ok(None);
        }
    }
}

/// A named vector object over Z_p^dim, part of an infeasibility system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonObject {
    pub name: String,
    pub vectors: Vec<Vec<u64>>,
}

/// A recorded equality `left^(left_map) = right^(right_map)` between
/// minors of two objects, both landing on `[target_size]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorEquality {
    pub left: usize,
    pub left_map: Vec<usize>,
    pub right: usize,
    pub right_map: Vec<usize>,
    pub target_size: usize,
}

/// Vector objects plus recorded minor equalities, inducing a linear system
/// over Z_target on the unknown images of a hypothetical homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonSystem {
    pub p: u64,
    pub target_modulus: u64,
    pub dim: usize,
    pub objects: Vec<EpsilonObject>,
    pub equalities: Vec<MinorEquality>,
}

impl EpsilonSystem {
    fn full_basis(&self) -> Vec<Vec<u64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| u64::from(i == j)).collect())
            .collect()
    }

    fn as_vector_object(&self, idx: usize) -> VectorObject {
        VectorObject {
            p: self.p,
            k: 2,
            dim: self.dim,
            space_basis: self.full_basis(),
            vectors: self.objects[idx].vectors.clone(),
        }
    }

    /// Verifies that every object is a valid level-2 vector object and
    /// that every recorded minor equality holds on the vectors.
    pub fn verify_premises(&self) -> Result<()> {
        for (i, obj) in self.objects.iter().enumerate() {
            self.as_vector_object(i).verify().map_err(|e| {
                Error::EqualityVerificationFailed(format!("object {} invalid: {e}", obj.name))
            })?;
        }
        for (idx, eq) in self.equalities.iter().enumerate() {
            let left = self
                .as_vector_object(eq.left)
                .minor(&eq.left_map, eq.target_size)?;
            let right = self
                .as_vector_object(eq.right)
                .minor(&eq.right_map, eq.target_size)?;
            if left.vectors != right.vectors {
                return Err(Error::EqualityVerificationFailed(format!(
                    "equality {idx} between {} and {} fails on the vectors",
                    self.objects[eq.left].name, self.objects[eq.right].name
                )));
            }
        }
        Ok(())
    }

    /// The implied equations on the images: coordinates summing to 1 per
    /// object (when `include_sums`), and matching summations under each
    /// recorded minor pair.
    pub fn linear_system(&self, include_sums: bool) -> (Vec<Vec<i64>>, Vec<i64>) {
        let offsets: Vec<usize> = self
            .objects
            .iter()
            .scan(0usize, |acc, o| {
                let start = *acc;
                *acc += o.vectors.len();
                Some(start)
            })
            .collect();
        let unknowns = offsets.last().copied().unwrap_or(0)
            + self.objects.last().map_or(0, |o| o.vectors.len());
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        if include_sums {
            for (i, obj) in self.objects.iter().enumerate() {
                let mut row = vec![0i64; unknowns];
                for a in 0..obj.vectors.len() {
                    row[offsets[i] + a] = 1;
                }
                rows.push(row);
                rhs.push(1);
            }
        }
        for eq in &self.equalities {
            for e in 0..eq.target_size {
                let mut row = vec![0i64; unknowns];
                for (a, &img) in eq.left_map.iter().enumerate() {
                    if img == e {
                        row[offsets[eq.left] + a] += 1;
                    }
                }
                for (a, &img) in eq.right_map.iter().enumerate() {
                    if img == e {
                        row[offsets[eq.right] + a] -= 1;
                    }
                }
                if row.iter().any(|&v| v != 0) {
                    rows.push(row);
                    rhs.push(0);
                }
            }
        }
        (rows, rhs)
    }

    /// Verifies the premises, then returns true iff the implied system has
    /// no solution mod the target modulus.
    pub fn decide(&self) -> Result<bool> {
        self.verify_premises()?;
        let (rows, rhs) = self.linear_system(true);
        Ok(!solve_mod_n(&rows, &rhs, self.target_modulus)?.is_feasible())
    }
}

/// The level-2 / Z_2 system over four explicit objects in Z_2^3, targeted
/// at an arbitrary modulus (8 for the impossibility proof; 4 is recorded
/// as a control, where the rounding homomorphism exists).
pub fn v2z2_system(target_modulus: u64) -> EpsilonSystem {
    let objects = vec![
        EpsilonObject {
            name: "eps0".into(),
            vectors: vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        },
        EpsilonObject {
            name: "eps1".into(),
            vectors: vec![vec![1, 0, 0], vec![0, 1, 1], vec![0, 1, 1], vec![0, 1, 1]],
        },
        EpsilonObject {
            name: "eps2".into(),
            vectors: vec![vec![0, 1, 0], vec![1, 0, 1], vec![1, 0, 1], vec![1, 0, 1]],
        },
        EpsilonObject {
            name: "eps3".into(),
            vectors: vec![vec![0, 0, 1], vec![1, 1, 0], vec![1, 1, 0], vec![1, 1, 0]],
        },
    ];
    let mut equalities = Vec::new();
    // Permuting the three equal vectors fixes each eps_i, forcing the
    // matching image coordinates equal.
    for i in 1..=3 {
        equalities.push(MinorEquality {
            left: i,
            left_map: vec![0, 1, 2, 3],
            right: i,
            right_map: vec![0, 2, 3, 1],
            target_size: 4,
        });
    }
    // Merging two coordinates of eps0 equals merging the two trailing
    // copies in eps_i; the third target element has an empty preimage on
    // the left, which is what makes the arities match.
    let merges = [vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]];
    for (i, left_map) in merges.into_iter().enumerate() {
        equalities.push(MinorEquality {
            left: 0,
            left_map,
            right: i + 1,
            right_map: vec![0, 1, 2, 2],
            target_size: 3,
        });
    }
    EpsilonSystem { p: 2, target_modulus, dim: 3, objects, equalities }
}

/// No homomorphism from the level-2 Z_2 vector minion into Z_8: the
/// recorded equalities are verified and the implied Z_8 system is
/// infeasible.
pub fn check_no_homo_v2z2_to_z8() -> Result<bool> {
    v2z2_system(8).decide()
}

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The level-2 / Z_p system for odd p: indicator patterns over p + 2
/// coordinate groups, concatenated (p+1)/2 times so the weights come out
/// right.
pub fn v2zp_system(p: u64) -> Result<EpsilonSystem> {
    if !is_odd_prime(p) {
        return Err(Error::NonPrimeModulus(p));
    }
    let m = p as usize + 2;
    let copies = (p as usize + 1) / 2;
    let dim = m * copies;
    let e_of = |s: &[usize]| -> Vec<u64> {
        let mut block = vec![0u64; m];
        for &i in s {
            block[i] = 1;
        }
        block.iter().copied().cycle().take(dim).collect()
    };
    let f_of = |s: &[usize]| -> Vec<u64> {
        let mut block = vec![1u64; m];
        for &i in s {
            block[i] = 0;
        }
        block.iter().copied().cycle().take(dim).collect()
    };
    let mut objects = vec![
        EpsilonObject { name: "mu".into(), vectors: (0..m).map(|i| e_of(&[i])).collect() },
        EpsilonObject { name: "eta".into(), vectors: (0..m).map(|i| f_of(&[i])).collect() },
    ];
    let mut pair_index = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            pair_index.push((i, j));
            let mut vectors = vec![f_of(&[i, j]); m - 1];
            vectors.push(e_of(&[i, j]));
            objects.push(EpsilonObject { name: format!("eps{i}_{j}"), vectors });
        }
    }

    let mut equalities = Vec::new();
    for (pos, &(i, j)) in pair_index.iter().enumerate() {
        let eps = 2 + pos;
        // Cycling the first p + 1 equal coordinates fixes the object.
        let mut cyc: Vec<usize> = (0..m).map(|a| if a < m - 1 { (a + 1) % (m - 1) } else { a }).collect();
        equalities.push(MinorEquality {
            left: eps,
            left_map: (0..m).collect(),
            right: eps,
            right_map: std::mem::take(&mut cyc),
            target_size: m,
        });
        // (p+1) f = f and p f + e = e: merging all leading copies equals
        // merging all but the first into the trailing coordinate.
        let all_f_then_e: Vec<usize> = (0..m).map(|a| usize::from(a == m - 1)).collect();
        let first_f_then_rest: Vec<usize> = (0..m).map(|a| usize::from(a != 0)).collect();
        equalities.push(MinorEquality {
            left: eps,
            left_map: all_f_then_e,
            right: eps,
            right_map: first_f_then_rest,
            target_size: 2,
        });
        // f_i + f_j = e_ij + 2 f_ij.
        let pair_merge: Vec<usize> = (0..m).map(|a| usize::from(a != i && a != j)).collect();
        let eta_side: Vec<usize> = (0..m).map(|a| usize::from(a >= 2 && a != m - 1)).collect();
        equalities.push(MinorEquality {
            left: 1,
            left_map: pair_merge.clone(),
            right: eps,
            right_map: eta_side,
            target_size: 2,
        });
        // e_i + e_j = e_ij.
        let mu_side: Vec<usize> = (0..m).map(|a| usize::from(a != m - 1)).collect();
        equalities.push(MinorEquality {
            left: 0,
            left_map: pair_merge,
            right: eps,
            right_map: mu_side,
            target_size: 2,
        });
    }
    Ok(EpsilonSystem { p, target_modulus: p * p, dim, objects, equalities })
}

/// No homomorphism from the level-2 Z_p vector minion into Z_{p^2} for odd
/// primes p.
pub fn check_no_homo_v2zp_to_zp2(p: u64) -> Result<bool> {
    v2zp_system(p)?.decide()
}

/// Seeded random system of linear equations over Z_n as a CSP: each
/// equation picks 1..=max_arity distinct variables with nonzero
/// coefficients and a uniform right-hand side, and its relation enumerates
/// the solution tuples.
pub fn gen_linear_system_csp(
    n: u64,
    num_vars: usize,
    num_eqs: usize,
    max_arity: usize,
    seed: u64,
) -> Result<CspInstance> {
    if n < 2 || num_vars == 0 {
        return Err(Error::OutOfRange("modulus >= 2 and at least one variable required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domain: Vec<Atom> = (0..n as i64).map(Atom::int).collect();
    let variables: Vec<Variable> = (0..num_vars)
        .map(|i| Variable { name: format!("x{i}"), domain: domain.clone() })
        .collect();
    let mut constraints = Vec::new();
    for _ in 0..num_eqs {
        let arity = rng.gen_range(1..=max_arity.min(num_vars));
        let mut scope: Vec<usize> = (0..num_vars).collect();
        for i in 0..arity {
            let j = rng.gen_range(i..num_vars);
            scope.swap(i, j);
        }
        scope.truncate(arity);
        let coeffs: Vec<u64> = (0..arity).map(|_| rng.gen_range(1..n)).collect();
        let rhs: u64 = rng.gen_range(0..n);
        let space = (n as u128).pow(arity as u32);
        if space > 100_000 {
            return Err(Error::SizeCapExceeded(format!("relation of {space} tuples")));
        }
        let mut relation = Vec::new();
        let sizes = vec![n as usize; arity];
        let mut tuple = vec![0usize; arity];
        loop {
            let lhs: u64 = coeffs
                .iter()
                .zip(&tuple)
                .fold(0, |acc, (&c, &x)| (acc + c * x as u64) % n);
            if lhs == rhs {
                relation.push(tuple.iter().map(|&x| Atom::int(x as i64)).collect());
            }
            if !advance_mixed(&mut tuple, &sizes) {
                break;
            }
        }
        constraints.push(CspConstraint { scope, relation });
    }
    CspInstance::new(variables, constraints)
}

/// Seeded random relational CSP at desk scale: up to 3 variables with
/// domains of size up to 3, up to 3 constraints of arity up to 2 with
/// random relations (scopes may repeat a variable).
pub fn gen_random_csp(seed: u64) -> CspInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let num_vars = rng.gen_range(1..=3usize);
    let variables: Vec<Variable> = (0..num_vars)
        .map(|i| {
            let size = rng.gen_range(1..=3i64);
            Variable { name: format!("x{i}"), domain: (0..size).map(Atom::int).collect() }
        })
        .collect();
    let num_cons = rng.gen_range(0..=3usize);
    let mut constraints = Vec::new();
    for _ in 0..num_cons {
        let arity = rng.gen_range(1..=2usize);
        let scope: Vec<usize> = (0..arity).map(|_| rng.gen_range(0..num_vars)).collect();
        let sizes: Vec<usize> = scope.iter().map(|&v| variables[v].domain.len()).collect();
        let mut relation = Vec::new();
        let mut tuple = vec![0usize; arity];
        loop {
            if rng.gen_bool(0.5) {
                relation.push(
                    tuple
                        .iter()
                        .zip(&scope)
                        .map(|(&e, &v)| variables[v].domain[e].clone())
                        .collect(),
                );
            }
            if !advance_mixed(&mut tuple, &sizes) {
                break;
            }
        }
        constraints.push(CspConstraint { scope, relation });
    }
    CspInstance::new(variables, constraints).expect("generated instance is valid")
}

/// Seeded random valid vector object: a random partition of N = 1 (mod p)
/// coordinates into blocks (their indicators trivially satisfy every
/// condition), pushed through a random merge so the entries are not just
/// 0/1.
pub fn gen_vector_object(p: u64, k: usize, seed: u64) -> VectorObject {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = rng.gen_range(1..=4usize);
    let dim = p as usize * rng.gen_range(1..=3usize) + 1;
    let mut vectors = vec![vec![0u64; dim]; blocks];
    for coord in 0..dim {
        vectors[rng.gen_range(0..blocks)][coord] = 1;
    }
    let target = rng.gen_range(1..=blocks);
    let map: Vec<usize> = (0..blocks).map(|_| rng.gen_range(0..target)).collect();
    let base = VectorObject {
        p,
        k,
        dim,
        space_basis: Vec::new(),
        vectors,
    };
    let mut merged = base.minor(&map, target).expect("valid merge");
    // V = span of the block indicators and the all-ones vector.
    let rows: Vec<Vec<u64>> = base
        .vectors
        .iter()
        .cloned()
        .chain(std::iter::once(vec![1u64; dim]))
        .collect();
    let mat = crate::modlin::ModMatrix::from_rows(p, rows).expect("basis rows");
    let (rref, _, rank) = crate::modlin::rref_mod_p(&mat).expect("prime modulus");
    merged.space_basis = (0..rank).map(|r| rref.row(r).to_vec()).collect();
    merged
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::lc_of_csp;
    use crate::samples;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn chain_brute_force_solution() {
        let csp = samples::chain_csp();
        // (x, y, z) = (1, 0, 0) is the lexicographically first solution.
        assert_eq!(brute_solve_csp(&csp, &caps()).unwrap(), Some(vec![1, 0, 0]));
        let lc = lc_of_csp(&csp);
        assert_eq!(
            brute_solve_lc(&lc, &caps()).unwrap(),
            Some(vec![1, 0, 0, 0, 1, 0])
        );
    }

    #[test]
    fn cycle_has_no_solution() {
        assert_eq!(brute_solve_csp(&samples::cycle_csp(), &caps()).unwrap(), None);
    }

    #[test]
    fn no_constraints_yields_all_first() {
        let csp = CspInstance::new(
            vec![
                Variable { name: "a".into(), domain: vec![Atom::int(0), Atom::int(1)] },
                Variable { name: "b".into(), domain: vec![Atom::int(0), Atom::int(1)] },
            ],
            vec![],
        )
        .unwrap();
        assert_eq!(brute_solve_csp(&csp, &caps()).unwrap(), Some(vec![0, 0]));
    }

    #[test]
    fn empty_domain_lc_has_no_solution() {
        let mut lc = lc_of_csp(&samples::chain_csp());
        lc.variables[2].domain.clear();
        lc.constraints.retain(|c| c.target != 2 && c.source != 2);
        assert_eq!(brute_solve_lc(&lc, &caps()).unwrap(), None);
    }

    #[test]
    fn search_cap_is_enforced() {
        let csp = samples::cycle_csp();
        let caps = Caps { max_assignments: 3, ..Caps::default() };
        assert!(matches!(
            brute_solve_csp(&csp, &caps),
            Err(Error::SearchSpaceTooLarge(16, 3))
        ));
    }

    #[test]
    fn lc_and_csp_solvability_agree_on_random_instances() {
        for seed in 0..150 {
            let csp = gen_random_csp(seed);
            let lc = lc_of_csp(&csp);
            let csp_solved = brute_solve_csp(&csp, &caps()).unwrap().is_some();
            let lc_solved = brute_solve_lc(&lc, &caps()).unwrap().is_some();
            assert_eq!(csp_solved, lc_solved, "seed {seed}");
        }
    }

    #[test]
    fn csp_solutions_extend_uniquely_to_lc() {
        // Every CSP solution extends to exactly one LC solution: the
        // witnessing relation tuple per constraint is determined.
        for seed in 0..60 {
            let csp = gen_random_csp(seed);
            let lc = lc_of_csp(&csp);
            let Some(sol) = brute_solve_csp(&csp, &caps()).unwrap() else { continue };
            let sizes: Vec<usize> = lc.variables.iter().map(|v| v.domain.len()).collect();
            let n = csp.variables.len();
            let mut count = 0;
            let Some(mut assign) = assignment_space(&sizes, caps().max_assignments).unwrap()
            else {
                panic!("solution exists, so no domain is empty");
            };
            loop {
                if assign[..n] == sol[..] && lc.check_solution(&assign).unwrap() {
                    count += 1;
                }
                if !advance_mixed(&mut assign, &sizes) {
                    break;
                }
            }
            assert_eq!(count, 1, "seed {seed}");
        }
    }

    #[test]
    fn z8_system_premises_verify_and_refute() {
        let sys = v2z2_system(8);
        sys.verify_premises().unwrap();
        assert!(check_no_homo_v2z2_to_z8().unwrap());
    }

    #[test]
    fn mod4_control_runs() {
        // Same equations mod 4: recorded, not asserted, and consistent
        // with the existing rounding homomorphism into Z_4.
        let sys = v2z2_system(4);
        sys.verify_premises().unwrap();
        let (rows, rhs) = sys.linear_system(true);
        let feasible = solve_mod_n(&rows, &rhs, 4).unwrap().is_feasible();
        assert!(feasible, "the Z_4 control system should admit a solution");
    }

    #[test]
    fn dropping_sums_makes_it_homogeneous() {
        let sys = v2z2_system(8);
        let (rows, rhs) = sys.linear_system(false);
        assert!(solve_mod_n(&rows, &rhs, 8).unwrap().is_feasible());
    }

    #[test]
    fn odd_prime_systems_refute() {
        assert!(check_no_homo_v2zp_to_zp2(3).unwrap());
        assert!(check_no_homo_v2zp_to_zp2(5).unwrap());
    }

    #[test]
    fn even_prime_is_rejected() {
        assert!(matches!(check_no_homo_v2zp_to_zp2(2), Err(Error::NonPrimeModulus(2))));
    }

    #[test]
    fn broken_equality_is_caught() {
        let mut sys = v2z2_system(8);
        // Swapping which coordinate of eps0 stays single breaks the
        // recorded merge against eps1.
        sys.equalities[3].left_map = vec![1, 0, 0];
        assert!(matches!(sys.decide(), Err(Error::EqualityVerificationFailed(_))));
    }

    #[test]
    fn linear_system_generator_is_deterministic() {
        let a = gen_linear_system_csp(4, 3, 2, 2, 42).unwrap();
        let b = gen_linear_system_csp(4, 3, 2, 2, 42).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let c = gen_linear_system_csp(4, 3, 2, 2, 43).unwrap();
        assert_ne!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&c).unwrap());
    }

    #[test]
    fn one_equation_relation_size() {
        // A two-variable equation over Z_4 has one free variable: 4 tuples.
        for seed in 0..20 {
            let csp = gen_linear_system_csp(4, 2, 1, 2, seed).unwrap();
            let c = &csp.constraints[0];
            if c.scope.len() == 2 {
                assert_eq!(c.relation.len() % 4, 0);
                assert!(!c.relation.is_empty() || c.relation.is_empty());
            }
        }
    }

    #[test]
    fn generated_systems_agree_with_snf_oracle() {
        for seed in 0..40 {
            let csp = gen_linear_system_csp(4, 3, 2, 2, seed).unwrap();
            let brute = brute_solve_csp(&csp, &caps()).unwrap().is_some();
            // Rebuild the coefficient matrix from the relations is not
            // possible in general, so regenerate it alongside.
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for _ in 0..2 {
                let arity = rng.gen_range(1..=2usize);
                let mut scope: Vec<usize> = (0..3).collect();
                for i in 0..arity {
                    let j = rng.gen_range(i..3);
                    scope.swap(i, j);
                }
                scope.truncate(arity);
                let coeffs: Vec<u64> = (0..arity).map(|_| rng.gen_range(1..4u64)).collect();
                let d: u64 = rng.gen_range(0..4);
                let mut row = vec![0i64; 3];
                for (pos, &v) in scope.iter().enumerate() {
                    row[v] += coeffs[pos] as i64;
                }
                rows.push(row);
                rhs.push(d as i64);
            }
            let snf = solve_mod_n(&rows, &rhs, 4).unwrap().is_feasible();
            assert_eq!(brute, snf, "seed {seed}");
        }
    }

    #[test]
    fn generated_vector_objects_are_valid() {
        for seed in 0..50 {
            for (p, k) in [(2u64, 2usize), (3, 3)] {
                let o = gen_vector_object(p, k, seed);
                assert!(o.verify().is_ok(), "seed {seed} p {p}: {:?}", o.verify());
            }
        }
    }
}
