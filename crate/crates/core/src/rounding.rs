//! The carry polynomial, rounding of vector objects into Z_{p^2} weights,
//! and affine decoding of Z_n solutions for linear-equation templates.
//!
//! Rounding sums the integer representatives in [0, p) of a vector's
//! coordinates modulo p^2 and divides by the corresponding weight of the
//! all-ones vector; because the carry of a coordinatewise sum is a
//! polynomial divisible by the product of its arguments, this commutes
//! with the summation minors and lands in Z_{p^2}.

use crate::instance::{lc_of_csp, Atom, CspInstance};
use crate::limits::Caps;
use crate::relax::{solve_level, Encoding};
use crate::vectors::{extract_vectors, VectorObject};
use crate::{Error, Result};

/// Residues indexed by a domain, summing to 1 mod n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZnTuple {
    pub n: u64,
    pub residues: Vec<u64>,
}

impl ZnTuple {
    pub fn sum_is_one(&self) -> bool {
        self.residues.iter().fold(0, |acc, &x| (acc + x) % self.n) == 1
    }

    /// Summation minor: residues over preimages, mod n.
    pub fn minor(&self, map: &[usize], target_size: usize) -> Result<ZnTuple> {
        if map.len() != self.residues.len() {
            return Err(Error::ShapeMismatch(format!(
                "map of length {} on {} residues",
                map.len(),
                self.residues.len()
            )));
        }
        let mut residues = vec![0u64; target_size];
        for (a, &e) in map.iter().enumerate() {
            if e >= target_size {
                return Err(Error::ShapeMismatch(format!("map value {e} out of range")));
            }
            residues[e] = (residues[e] + self.residues[a]) % self.n;
        }
        Ok(ZnTuple { n: self.n, residues })
    }
}

/// The base-p carry of a + b for residues a, b in [0, p): floor((a+b)/p),
/// which agrees with the binomial coefficient C(a+b, p) mod p.
pub fn carry_polynomial(p: u64, a: u64, b: u64) -> Result<u64> {
    if a >= p || b >= p {
        return Err(Error::OutOfRange(format!("carry arguments {a}, {b} must be below {p}")));
    }
    Ok(((a + b) / p) % p)
}

fn inv_mod(v: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (v % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(m as i128) as u64
}

fn weight_mod(v: &[u64], m: u64) -> u64 {
    v.iter().fold(0, |acc, &x| (acc + x) % m)
}

/// Rounds a vector object with level k = p into Z_{p^2} weights:
/// `out(a) = w(v(a)) / w(i)` with integer coordinate sums taken mod p^2.
/// The division is well defined because w(i) = N = 1 (mod p).
pub fn round_to_zp2(o: &VectorObject) -> Result<ZnTuple> {
    if o.k as u64 != o.p {
        return Err(Error::LevelMismatch { k: o.k, p: o.p });
    }
    let m = o.p * o.p;
    let ones_weight = (o.dim as u64) % m;
    debug_assert_eq!(ones_weight % o.p, 1);
    let inv = inv_mod(ones_weight, m);
    let residues = o
        .vectors
        .iter()
        .map(|v| weight_mod(v, m) * inv % m)
        .collect();
    Ok(ZnTuple { n: m, residues })
}

/// Affine decoding of Z_n weights over a domain that is literally
/// {0, ..., n-1}: the decoded value is the weighted sum of the domain
/// values. Callers must re-verify against the original constraints.
pub fn decode_affine(csp: &CspInstance, tuples: &[ZnTuple], n: u64) -> Result<Vec<u64>> {
    if tuples.len() != csp.variables.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} tuples for {} variables",
            tuples.len(),
            csp.variables.len()
        )));
    }
    for (v, var) in csp.variables.iter().enumerate() {
        let expected: Vec<Atom> = (0..n as i64).map(Atom::int).collect();
        if var.domain != expected {
            return Err(Error::DomainMismatch(format!(
                "variable {v} does not range over 0..{n}"
            )));
        }
        if tuples[v].n != n || tuples[v].residues.len() != n as usize {
            return Err(Error::DomainMismatch(format!("tuple shape for variable {v}")));
        }
    }
    Ok(tuples
        .iter()
        .map(|t| {
            t.residues
                .iter()
                .enumerate()
                .fold(0u64, |acc, (a, &f)| (acc + f * a as u64) % n)
        })
        .collect())
}

/// End-to-end decision procedure for linear-equation CSPs over Z_{p^2}:
/// solve the p-th level of the Z_p relaxation per connected component,
/// extract vectors, round to Z_{p^2}, decode affinely, and re-verify the
/// assignment. Returns the satisfying assignment (as domain values) or
/// None when the relaxation refutes.
pub fn solve_mod_p2_system(
    csp: &CspInstance,
    p: u64,
    caps: &Caps,
) -> Result<Option<Vec<u64>>> {
    let n = p * p;
    let lc = lc_of_csp(csp);
    let k = p as usize;
    let mut tuples: Vec<Option<ZnTuple>> = vec![None; csp.variables.len()];
    for (component, old_vars) in lc.split_components() {
        let Some(tensor) = solve_level(&component, p, k, Encoding::Canonical, caps)? else {
            return Ok(None);
        };
        let vectors = extract_vectors(&component, &tensor)?;
        for (new, &old) in old_vars.iter().enumerate() {
            if old < csp.variables.len() {
                tuples[old] = Some(round_to_zp2(&vectors.object_for(new))?);
            }
        }
    }
    let tuples: Vec<ZnTuple> = tuples
        .into_iter()
        .map(|t| t.ok_or_else(|| Error::ShapeMismatch("variable missing from components".into())))
        .collect::<Result<_>>()?;
    let decoded = decode_affine(csp, &tuples, n)?;
    // The decoded values double as domain indices since the domain is
    // literally 0..n. Re-verification is mandatory: the rounding is never
    // trusted on its own.
    let as_indices: Vec<usize> = decoded.iter().map(|&v| v as usize).collect();
    if !csp.check_solution(&as_indices)? {
        return Err(Error::InvalidVectorSolution(
            "decoded assignment fails the original equations".into(),
        ));
    }
    Ok(Some(decoded))
}
