//! Dihedral group arithmetic, coset-constraint templates, and the
//! certificate construction that maps Z_2 vector solutions into the pair
//! minion (f, g) over Z_2.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

use crate::instance::{Atom, CspConstraint, CspInstance, LcInstance, Variable};
use crate::vectors::{weight, VectorSolution};
use crate::{Error, Result};

/// Element of the 8-element dihedral group in canonical form `r^i s^j`
/// with `0 <= i < 4`, `j in {0, 1}` and the relation `s r = r^3 s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct D4 {
    rot: u8,
    refl: bool,
}

pub const D4_NAMES: [&str; 8] = ["e", "r", "r2", "r3", "s", "rs", "r2s", "r3s"];

impl D4 {
    pub fn new(rot: u8, refl: bool) -> D4 {
        D4 { rot: rot % 4, refl }
    }

    pub fn identity() -> D4 {
        D4 { rot: 0, refl: false }
    }

    pub fn all() -> impl Iterator<Item = D4> {
        (0..8).map(D4::from_index)
    }

    pub fn index(self) -> usize {
        self.rot as usize + if self.refl { 4 } else { 0 }
    }

    pub fn from_index(i: usize) -> D4 {
        D4 { rot: (i % 4) as u8, refl: i >= 4 }
    }

    pub fn name(self) -> &'static str {
        D4_NAMES[self.index()]
    }

    pub fn from_name(name: &str) -> Option<D4> {
        D4_NAMES.iter().position(|&n| n == name).map(D4::from_index)
    }

    pub fn mul(self, other: D4) -> D4 {
        // (r^i s^j)(r^k s^l): a reflection on the left inverts the rotation
        // it passes over.
        let rot = if self.refl {
            (self.rot + 4 - other.rot) % 4
        } else {
            (self.rot + other.rot) % 4
        };
        D4 { rot, refl: self.refl ^ other.refl }
    }

    pub fn inverse(self) -> D4 {
        if self.refl {
            self
        } else {
            D4 { rot: (4 - self.rot) % 4, refl: false }
        }
    }
}

type Word = Vec<D4>;

fn word_mul(a: &Word, b: &Word) -> Word {
    a.iter().zip(b).map(|(&x, &y)| x.mul(y)).collect()
}

fn word_inv(a: &Word) -> Word {
    a.iter().map(|&x| x.inverse()).collect()
}

/// Worklist closure of a generating set into a subgroup of D4^n, in
/// canonical element order.
fn close_subgroup(generators: &[Word], arity: usize) -> BTreeSet<Word> {
    let mut set: BTreeSet<Word> = BTreeSet::new();
    set.insert(vec![D4::identity(); arity]);
    let mut work: Vec<Word> = generators.to_vec();
    while let Some(g) = work.pop() {
        if !set.insert(g.clone()) {
            continue;
        }
        let mut new = vec![word_inv(&g)];
        for h in &set {
            new.push(word_mul(&g, h));
            new.push(word_mul(h, &g));
        }
        for w in new {
            if !set.contains(&w) {
                work.push(w);
            }
        }
    }
    set
}

fn random_word(arity: usize, rng: &mut impl Rng) -> Word {
    (0..arity).map(|_| D4::from_index(rng.gen_range(0..8))).collect()
}

pub(crate) fn random_coset_with_rng(arity: usize, rng: &mut impl Rng) -> Vec<Word> {
    let gen_count = rng.gen_range(1..=2);
    let generators: Vec<Word> = (0..gen_count).map(|_| random_word(arity, rng)).collect();
    let subgroup = close_subgroup(&generators, arity);
    let rep = random_word(arity, rng);
    let coset: BTreeSet<Word> = subgroup.iter().map(|h| word_mul(&rep, h)).collect();
    coset.into_iter().collect()
}

/// A random coset of a subgroup of D4^n: random generators are closed into
/// a subgroup and translated by a random representative. The result is
/// checked to be closed under `g h^{-1} g'`.
pub fn random_coset_relation(arity: usize, seed: u64) -> Result<Vec<Word>> {
    if arity == 0 || arity > 4 {
        return Err(Error::OutOfRange(format!("coset arity {arity} not in 1..=4")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coset = random_coset_with_rng(arity, &mut rng);
    debug_assert!(coset_is_closed(&coset));
    Ok(coset)
}

/// A set R is a subgroup coset iff g h^{-1} g' stays in R for all members.
pub fn coset_is_closed(relation: &[Word]) -> bool {
    let set: BTreeSet<&Word> = relation.iter().collect();
    for g in relation {
        for h in relation {
            let gh = word_mul(g, &word_inv(h));
            for g2 in relation {
                if !set.contains(&word_mul(&gh, g2)) {
                    return false;
                }
            }
        }
    }
    true
}

fn d4_domain() -> Vec<Atom> {
    D4_NAMES.iter().map(|&n| Atom::Str(n.into())).collect()
}

fn relation_atoms(words: &[Word]) -> Vec<Vec<Atom>> {
    words
        .iter()
        .map(|w| w.iter().map(|g| Atom::Str(g.name().into())).collect())
        .collect()
}

/// Seeded random CSP over D4 with coset relations: a connected chain of
/// binary constraints over at most three variables plus an optional extra
/// constraint of arity 1 or 2.
pub fn gen_coset_csp(seed: u64) -> CspInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let num_vars = rng.gen_range(1..=3usize);
    let variables: Vec<Variable> = (0..num_vars)
        .map(|i| Variable { name: format!("x{i}"), domain: d4_domain() })
        .collect();
    let mut constraints = Vec::new();
    if num_vars == 1 {
        let rel = random_coset_with_rng(1, &mut rng);
        constraints.push(CspConstraint { scope: vec![0], relation: relation_atoms(&rel) });
    } else {
        for i in 0..num_vars - 1 {
            let rel = random_coset_with_rng(2, &mut rng);
            constraints.push(CspConstraint {
                scope: vec![i, i + 1],
                relation: relation_atoms(&rel),
            });
        }
    }
    if rng.gen_bool(0.5) {
        let arity = rng.gen_range(1..=2.min(num_vars));
        let mut scope: Vec<usize> = (0..num_vars).collect();
        scope.shuffle(&mut rng);
        scope.truncate(arity);
        let rel = random_coset_with_rng(arity, &mut rng);
        constraints.push(CspConstraint { scope, relation: relation_atoms(&rel) });
    }
    CspInstance::new(variables, constraints).expect("generated instance is valid")
}

/// The standard strictly-upper-triangular bilinear form over Z_2:
/// `Q(v, w) = sum_{i < j} v_i w_j`.
pub fn bilinear_q(v: &[u64], w: &[u64]) -> Result<u64> {
    if v.len() != w.len() {
        return Err(Error::LengthMismatch(v.len(), w.len()));
    }
    // Running suffix sum of w keeps this linear time.
    let mut acc = 0u64;
    let mut suffix = weight(w, 2);
    for (&vi, &wi) in v.iter().zip(w) {
        suffix = (suffix + wi) % 2;
        acc = (acc + vi * suffix) % 2;
    }
    Ok(acc)
}

/// A pair (f, g) over Z_2 on one domain: f sums to 1, g sums to 0, and
/// distinct elements satisfy g(a,b) + g(b,a) = f(a) f(b).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MObject {
    pub f: Vec<u64>,
    pub g: Vec<Vec<u64>>,
}

impl MObject {
    pub fn verify(&self) -> bool {
        let n = self.f.len();
        if self.g.len() != n || self.g.iter().any(|row| row.len() != n) {
            return false;
        }
        if self.f.iter().any(|&x| x > 1)
            || self.g.iter().any(|row| row.iter().any(|&x| x > 1))
        {
            return false;
        }
        if weight(&self.f, 2) != 1 {
            return false;
        }
        let total: u64 = self.g.iter().map(|row| weight(row, 2)).fold(0, |a, b| (a + b) % 2);
        if total != 0 {
            return false;
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && (self.g[a][b] + self.g[b][a]) % 2 != self.f[a] * self.f[b] % 2 {
                    return false;
                }
            }
        }
        true
    }

    /// Summation minor of the pair.
    pub fn minor(&self, map: &[usize], target_size: usize) -> Result<MObject> {
        if map.len() != self.f.len() {
            return Err(Error::ShapeMismatch("minor map length".into()));
        }
        let mut f = vec![0u64; target_size];
        let mut g = vec![vec![0u64; target_size]; target_size];
        for (a, &e) in map.iter().enumerate() {
            if e >= target_size {
                return Err(Error::ShapeMismatch(format!("map value {e} out of range")));
            }
            f[e] = (f[e] + self.f[a]) % 2;
        }
        for (a, &ea) in map.iter().enumerate() {
            for (b, &eb) in map.iter().enumerate() {
                g[ea][eb] = (g[ea][eb] + self.g[a][b]) % 2;
            }
        }
        Ok(MObject { f, g })
    }
}

/// One pair per LC variable, compatible with every constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MCertificate {
    pub objects: Vec<MObject>,
}

/// Builds the certificate from a Z_2 vector solution at level 2:
/// `f_x(a) = w(v_x(a))`, `g_x(a, a) = Q(v_x(a), v_x(a) - i)` (subtraction
/// over Z_2 is xor), and `g_x(a, b) = Q(v_x(a), v_x(b))` for distinct
/// elements.
pub fn m_certificate(d: &LcInstance, s: &VectorSolution) -> Result<MCertificate> {
    m_certificate_with_form(d, s, &|v, w| bilinear_q(v, w).expect("equal lengths"))
}

/// Same construction with an arbitrary bilinear form satisfying
/// `Q(v, w) + Q(w, v) = w(v) w(w) + v . w`.
pub fn m_certificate_with_form(
    d: &LcInstance,
    s: &VectorSolution,
    form: &dyn Fn(&[u64], &[u64]) -> u64,
) -> Result<MCertificate> {
    if s.p != 2 || s.k != 2 {
        return Err(Error::WrongParameters { p: s.p, k: s.k });
    }
    s.verify(d).map_err(Error::InvalidVectorSolution)?;
    let mut objects = Vec::with_capacity(d.variables.len());
    for vectors in &s.per_variable {
        let n = vectors.len();
        let f: Vec<u64> = vectors.iter().map(|v| weight(v, 2)).collect();
        let mut g = vec![vec![0u64; n]; n];
        for (a, va) in vectors.iter().enumerate() {
            for (b, vb) in vectors.iter().enumerate() {
                g[a][b] = if a == b {
                    let shifted: Vec<u64> = va.iter().map(|&x| x ^ 1).collect();
                    form(va, &shifted)
                } else {
                    form(va, vb)
                };
            }
        }
        objects.push(MObject { f, g });
    }
    Ok(MCertificate { objects })
}

/// Checks every per-variable pair and every constraint's summation minor.
pub fn verify_m_certificate(d: &LcInstance, c: &MCertificate) -> Result<bool> {
    if c.objects.len() != d.variables.len() {
        return Err(Error::ShapeMismatch("one pair per variable required".into()));
    }
    for (x, obj) in c.objects.iter().enumerate() {
        if obj.f.len() != d.domain_size(x) {
            return Err(Error::ShapeMismatch(format!("pair shape for variable {x}")));
        }
        if !obj.verify() {
            return Ok(false);
        }
    }
    for cons in &d.constraints {
        let pushed = c.objects[cons.source].minor(&cons.map, d.domain_size(cons.target))?;
        if pushed != c.objects[cons.target] {
            return Ok(false);
        }
    }
    Ok(true)
}
