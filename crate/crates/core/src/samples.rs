//! Small worked examples used as fixtures by the test suites and by the
//! CLI's built-in verification command.
//!
//! The chain instance is the 2SAT-style example (x = 1, x != y, y <= z over
//! {0,1}); the cycle instance is the order cycle (x <= y <= z <= u < x)
//! whose Z_2 relaxation is feasible at every level even though the
//! instance itself is unsatisfiable. The printed level-2 table for the
//! cycle is shipped verbatim as a tensor fixture.

use std::collections::BTreeMap;

use crate::instance::{Atom, CspConstraint, CspInstance, Variable};
use crate::power::PowerMeta;
use crate::relax::{TensorSolution, ZpSolution};

fn bool_var(name: &str) -> Variable {
    Variable { name: name.into(), domain: vec![Atom::int(0), Atom::int(1)] }
}

fn pairs(ps: &[(i64, i64)]) -> Vec<Vec<Atom>> {
    ps.iter().map(|&(a, b)| vec![Atom::int(a), Atom::int(b)]).collect()
}

/// `x = 1`, `x != y`, `y <= z` over `{0, 1}`.
pub fn chain_csp() -> CspInstance {
    CspInstance::new(
        vec![bool_var("x"), bool_var("y"), bool_var("z")],
        vec![
            CspConstraint { scope: vec![0], relation: vec![vec![Atom::int(1)]] },
            CspConstraint { scope: vec![0, 1], relation: pairs(&[(0, 1), (1, 0)]) },
            CspConstraint { scope: vec![1, 2], relation: pairs(&[(0, 0), (0, 1), (1, 1)]) },
        ],
    )
    .expect("valid instance")
}

/// Arc-consistency fixpoint of the chain instance: element indices kept per
/// LC variable (x, y, z, then the three constraint variables).
pub fn chain_ac_domains() -> Vec<Vec<usize>> {
    vec![
        vec![1],    // x -> {1}
        vec![0],    // y -> {0}
        vec![0, 1], // z unchanged
        vec![0],    // (x = 1) -> {1}
        vec![1],    // (x != y) -> {10}
        vec![0, 1], // (y <= z) -> {00, 01}
    ]
}

/// `x <= y`, `y <= z`, `z <= u`, `u < x` over `{0, 1}`; unsatisfiable, but
/// feasible for every Z_p relaxation.
pub fn cycle_csp() -> CspInstance {
    let le = pairs(&[(0, 0), (0, 1), (1, 1)]);
    CspInstance::new(
        vec![bool_var("x"), bool_var("y"), bool_var("z"), bool_var("u")],
        vec![
            CspConstraint { scope: vec![0, 1], relation: le.clone() },
            CspConstraint { scope: vec![1, 2], relation: le.clone() },
            CspConstraint { scope: vec![2, 3], relation: le },
            CspConstraint { scope: vec![3, 0], relation: pairs(&[(0, 1)]) },
        ],
    )
    .expect("valid instance")
}

/// The printed Z_2 weights for the cycle instance.
pub fn cycle_z2_solution() -> ZpSolution {
    ZpSolution {
        p: 2,
        values: vec![
            vec![0, 1],    // x
            vec![0, 1],    // y
            vec![1, 0],    // z
            vec![1, 0],    // u
            vec![0, 0, 1], // x <= y over (00, 01, 11)
            vec![1, 1, 1], // y <= z
            vec![1, 0, 0], // z <= u
            vec![1],       // u < x over (01)
        ],
    }
}

/// The printed second-level table for the cycle instance, as a symmetric
/// 0/1 matrix over the 18 points in (variable, element) order.
pub fn cycle_level2_matrix() -> [[u64; 18]; 18] {
    [
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0], // x,0
        [0, 1, 0, 1, 1, 0, 1, 0, 0, 0, 1, 1, 1, 1, 1, 0, 0, 1], // x,1
        [0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 0], // y,0
        [0, 1, 0, 1, 0, 1, 1, 0, 0, 0, 1, 0, 0, 1, 1, 1, 1, 1], // y,1
        [0, 1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 1, 0, 0, 1, 0, 0, 1], // z,0
        [0, 0, 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 0, 0], // z,1
        [0, 1, 0, 1, 1, 0, 1, 0, 0, 0, 1, 1, 1, 1, 1, 0, 0, 1], // u,0
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0], // u,1
        [0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 0], // xy,00
        [0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 0], // xy,01
        [0, 1, 0, 1, 1, 0, 1, 0, 0, 0, 1, 1, 1, 1, 1, 0, 0, 1], // xy,11
        [0, 1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 1, 0, 0, 1, 0, 0, 1], // yz,00
        [0, 1, 1, 0, 0, 1, 1, 0, 1, 1, 1, 0, 1, 0, 1, 1, 1, 1], // yz,01
        [0, 1, 0, 1, 0, 1, 1, 0, 0, 0, 1, 0, 0, 1, 1, 1, 1, 1], // yz,11
        [0, 1, 0, 1, 1, 0, 1, 0, 0, 0, 1, 1, 1, 1, 1, 0, 0, 1], // zu,00
        [0, 0, 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 0, 0], // zu,01
        [0, 0, 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 0, 0], // zu,11
        [0, 1, 0, 1, 1, 0, 1, 0, 0, 0, 1, 1, 1, 1, 1, 0, 0, 1], // ux,01
    ]
}

/// The printed table as a canonical tensor fixture.
pub fn cycle_level2_tensor() -> TensorSolution {
    let lc = crate::instance::lc_of_csp(&cycle_csp());
    let matrix = cycle_level2_matrix();
    let mut entries = BTreeMap::new();
    for i in 0..18u32 {
        for j in i..18u32 {
            let v = matrix[i as usize][j as usize];
            assert_eq!(v, matrix[j as usize][i as usize], "fixture must be symmetric");
            if v != 0 {
                entries.insert(vec![i, j], v);
            }
        }
    }
    TensorSolution { p: 2, k: 2, meta: PowerMeta::new(&lc, 2), entries }
}

/// `x + y = 1` and `x + y = 0` over Z_2: refutable by the Z_2 relaxation.
pub fn parity_contradiction_csp() -> CspInstance {
    CspInstance::new(
        vec![bool_var("x"), bool_var("y")],
        vec![
            CspConstraint { scope: vec![0, 1], relation: pairs(&[(0, 1), (1, 0)]) },
            CspConstraint { scope: vec![0, 1], relation: pairs(&[(0, 0), (1, 1)]) },
        ],
    )
    .expect("valid instance")
}

/// `2x = 2` and `2x = 0` over Z_4: unsatisfiable, refuted at level 2 of the
/// Z_2 relaxation.
pub fn mod4_contradiction_csp() -> CspInstance {
    let dom: Vec<Atom> = (0..4).map(Atom::int).collect();
    CspInstance::new(
        vec![Variable { name: "x".into(), domain: dom }],
        vec![
            CspConstraint {
                scope: vec![0],
                relation: vec![vec![Atom::int(1)], vec![Atom::int(3)]],
            },
            CspConstraint {
                scope: vec![0],
                relation: vec![vec![Atom::int(0)], vec![Atom::int(2)]],
            },
        ],
    )
    .expect("valid instance")
}
