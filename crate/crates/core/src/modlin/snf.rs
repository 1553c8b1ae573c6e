//! Smith normal form over the integers and congruence solving mod n.
//!
//! Arithmetic is performed in checked i128; growth is limited by pivoting
//! on the smallest nonzero magnitude and, inside [`solve_mod_n`], by
//! reducing the working matrix into balanced residues mod n after every
//! step (sound there because changing the matrix by multiples of n does
//! not change the congruence system; U and V stay exact transforms of the
//! reduced matrix).

use crate::{Error, Result};

use super::{Certificate, SolveResult};

/// `U * A * V = S` with `U`, `V` unimodular and `S` diagonal with a
/// divisibility chain `d_i | d_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: Vec<Vec<i128>>,
    pub s: Vec<Vec<i128>>,
    pub v: Vec<Vec<i128>>,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

fn checked_mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

fn checked_sub_mul(dst: i128, a: i128, b: i128) -> Result<i128> {
    dst.checked_sub(checked_mul(a, b)?).ok_or(Error::Overflow)
}

/// Balanced residue in `(-n/2, n/2]`.
fn balance(v: i128, n: i128) -> i128 {
    let mut r = v.rem_euclid(n);
    if 2 * r > n {
        r -= n;
    }
    r
}

struct Work {
    a: Vec<Vec<i128>>,
    u: Vec<Vec<i128>>,
    v: Vec<Vec<i128>>,
    rows: usize,
    cols: usize,
    /// When set, entries of `a` are reduced into balanced residues mod n.
    reduce: Option<i128>,
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

impl Work {
    fn rebalance(&mut self, r: usize, c: usize) {
        if let Some(n) = self.reduce {
            self.a[r][c] = balance(self.a[r][c], n);
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        for row in &mut self.v {
            row.swap(i, j);
        }
    }

    /// row_i -= q * row_j
    fn row_op(&mut self, i: usize, j: usize, q: i128) -> Result<()> {
        for c in 0..self.cols {
            self.a[i][c] = checked_sub_mul(self.a[i][c], q, self.a[j][c])?;
            self.rebalance(i, c);
        }
        for c in 0..self.rows {
            self.u[i][c] = checked_sub_mul(self.u[i][c], q, self.u[j][c])?;
        }
        Ok(())
    }

    /// col_i -= q * col_j
    fn col_op(&mut self, i: usize, j: usize, q: i128) -> Result<()> {
        for r in 0..self.rows {
            self.a[r][i] = checked_sub_mul(self.a[r][i], q, self.a[r][j])?;
            self.rebalance(r, i);
        }
        for r in 0..self.cols {
            self.v[r][i] = checked_sub_mul(self.v[r][i], q, self.v[r][j])?;
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            self.a[i][c] = -self.a[i][c];
        }
        for c in 0..self.rows {
            self.u[i][c] = -self.u[i][c];
        }
    }

    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, i128)> = None;
        for r in t..self.rows {
            for c in t..self.cols {
                let v = self.a[r][c].abs();
                if v != 0 && best.map_or(true, |(_, _, bv)| v < bv) {
                    best = Some((r, c, v));
                }
            }
        }
        best.map(|(r, c, _)| (r, c))
    }
}

/// Division rounded to nearest, so remainders stay within half the divisor.
fn div_round(a: i128, b: i128) -> i128 {
    let q = a / b;
    let r = a - q * b;
    if 2 * r.abs() > b.abs() {
        q + if (r < 0) == (b < 0) { 1 } else { -1 }
    } else {
        q
    }
}

fn snf_inner(a: Vec<Vec<i128>>, reduce: Option<i128>) -> Result<SnfDecomposition> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut w = Work {
        u: identity(rows),
        v: identity(cols),
        a,
        rows,
        cols,
        reduce,
    };
    if let Some(n) = reduce {
        for r in 0..rows {
            for c in 0..cols {
                w.a[r][c] = balance(w.a[r][c], n);
            }
        }
    }
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pr, pc)) = w.min_pivot(t) else { break };
        w.swap_rows(t, pr);
        w.swap_cols(t, pc);
        'clear: loop {
            // Reduce the pivot column and row; a nonzero remainder becomes
            // the new (smaller) pivot.
            for r in t + 1..w.rows {
                if w.a[r][t] != 0 {
                    let q = div_round(w.a[r][t], w.a[t][t]);
                    w.row_op(r, t, q)?;
                    if w.a[r][t] != 0 {
                        w.swap_rows(t, r);
                        continue 'clear;
                    }
                }
            }
            for c in t + 1..w.cols {
                if w.a[t][c] != 0 {
                    let q = div_round(w.a[t][c], w.a[t][t]);
                    w.col_op(c, t, q)?;
                    if w.a[t][c] != 0 {
                        w.swap_cols(t, c);
                        continue 'clear;
                    }
                }
            }
            // Enforce the divisibility chain: fold in a row containing an
            // entry not divisible by the pivot and restart.
            let p = w.a[t][t];
            let offender = (t + 1..w.rows)
                .flat_map(|r| (t + 1..w.cols).map(move |c| (r, c)))
                .find(|&(r, c)| w.a[r][c] % p != 0);
            match offender {
                Some((r, _)) => {
                    w.row_op(t, r, -1)?;
                }
                None => break,
            }
        }
        if w.a[t][t] < 0 {
            w.negate_row(t);
        }
        t += 1;
    }
    let rank = (0..rows.min(cols)).take_while(|&i| w.a[i][i] != 0).count();
    Ok(SnfDecomposition { u: w.u, s: w.a, v: w.v, rank })
}

/// Exact Smith normal form of an integer matrix.
pub fn smith_normal_form(a: &[Vec<i64>]) -> Result<SnfDecomposition> {
    let cols = a.first().map_or(0, Vec::len);
    if a.iter().any(|row| row.len() != cols) {
        return Err(Error::DimensionMismatch("ragged rows".into()));
    }
    let wide: Vec<Vec<i128>> = a
        .iter()
        .map(|row| row.iter().map(|&v| v as i128).collect())
        .collect();
    snf_inner(wide, None)
}

/// Decides `A x = b (mod n)`; `n = 0` solves over the integers.
///
/// Feasibility is read off the Smith form: with `U A V = S`, the system is
/// solvable iff every component of `U b` is divisible by the matching
/// diagonal entry modulo n (exactly, when n = 0). Feasible results carry a
/// particular solution with free coordinates set to zero.
pub fn solve_mod_n(a: &[Vec<i64>], b: &[i64], n: u64) -> Result<SolveResult> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    if a.iter().any(|row| row.len() != cols) {
        return Err(Error::DimensionMismatch("ragged rows".into()));
    }
    if b.len() != rows {
        return Err(Error::DimensionMismatch(format!(
            "rhs of length {} against {rows} rows",
            b.len()
        )));
    }
    let nn = n as i128;
    let wide: Vec<Vec<i128>> = a
        .iter()
        .map(|row| row.iter().map(|&v| v as i128).collect())
        .collect();
    let snf = snf_inner(wide, (n >= 2).then_some(nn))?;

    // ub = U * b
    let mut ub = Vec::with_capacity(rows);
    for r in 0..rows {
        let mut acc: i128 = 0;
        for c in 0..rows {
            acc = acc
                .checked_add(checked_mul(snf.u[r][c], b[c] as i128)?)
                .ok_or(Error::Overflow)?;
        }
        if n >= 2 {
            acc = acc.rem_euclid(nn);
        }
        ub.push(acc);
    }

    let mut z = vec![0i128; cols];
    for i in 0..rows {
        let s = if i < cols { snf.s[i][i] } else { 0 };
        let rhs = ub[i];
        if n == 0 {
            if s == 0 {
                if rhs != 0 {
                    return Ok(SolveResult::Infeasible {
                        certificate: Certificate::Divisibility {
                            index: i,
                            diagonal: s,
                            rhs,
                            modulus: n,
                        },
                    });
                }
            } else {
                if rhs % s != 0 {
                    return Ok(SolveResult::Infeasible {
                        certificate: Certificate::Divisibility {
                            index: i,
                            diagonal: s,
                            rhs,
                            modulus: n,
                        },
                    });
                }
                z[i] = rhs / s;
            }
        } else if n == 1 {
            if i < cols {
                z[i] = 0;
            }
        } else {
            // s z = rhs (mod n) is solvable iff gcd(s, n) divides rhs.
            let g = gcd(s.rem_euclid(nn), nn);
            if rhs.rem_euclid(nn) % g != 0 {
                return Ok(SolveResult::Infeasible {
                    certificate: Certificate::Divisibility {
                        index: i,
                        diagonal: s,
                        rhs,
                        modulus: n,
                    },
                });
            }
            if i < cols && s.rem_euclid(nn) != 0 {
                let m = nn / g;
                let inv = inv_mod_i128((s.rem_euclid(nn)) / g, m);
                z[i] = ((rhs.rem_euclid(nn) / g) * inv).rem_euclid(m);
            }
        }
    }

    // x = V z
    let mut x = vec![0i128; cols];
    for r in 0..cols {
        let mut acc: i128 = 0;
        for c in 0..cols {
            acc = acc
                .checked_add(checked_mul(snf.v[r][c], z[c])?)
                .ok_or(Error::Overflow)?;
        }
        if n >= 2 {
            acc = acc.rem_euclid(nn);
        }
        x[r] = acc;
    }
    let particular: Vec<i64> = x
        .iter()
        .map(|&v| i64::try_from(v).map_err(|_| Error::Overflow))
        .collect::<Result<_>>()?;
    Ok(SolveResult::Feasible { particular, nullspace_basis: None })
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn inv_mod_i128(v: i128, m: i128) -> i128 {
    if m == 1 {
        return 0;
    }
    let (mut r0, mut r1) = (m, v.rem_euclid(m));
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(m)
}
