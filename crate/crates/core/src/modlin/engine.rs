//! Row-echelon engine over Z_p with packed row storage.
//!
//! Rows are bit-packed for p = 2 (64 entries per word), byte-packed for
//! p <= 251, and stored as plain words otherwise. The eliminator keeps an
//! online echelon basis: rows are inserted one at a time, reduced against
//! the existing pivots, and either vanish, become a new pivot, or expose a
//! contradiction in the augmented column. A final backward pass turns the
//! basis into the (unique) reduced row-echelon form.

pub(crate) trait RowStore: Clone {
    fn from_sparse(cols: usize, entries: &[(u32, u64)], modulus: u64) -> Self;
    /// First column >= `from` holding a nonzero entry, with its value.
    fn leading(&self, from: usize, cols: usize, modulus: u64) -> Option<(usize, u64)>;
    fn get(&self, col: usize, modulus: u64) -> u64;
    /// `self += c * other` (mod p).
    fn axpy(&mut self, other: &Self, c: u64, modulus: u64);
    /// `self *= c` (mod p).
    fn scale(&mut self, c: u64, modulus: u64);
    fn to_dense(&self, cols: usize, modulus: u64) -> Vec<u64> {
        (0..cols).map(|c| self.get(c, modulus)).collect()
    }
}

#[derive(Clone)]
pub(crate) struct BitRow(Vec<u64>);

impl RowStore for BitRow {
    fn from_sparse(cols: usize, entries: &[(u32, u64)], _m: u64) -> Self {
        let mut words = vec![0u64; cols.div_ceil(64)];
        for &(c, v) in entries {
            if v & 1 == 1 {
                words[c as usize / 64] ^= 1 << (c % 64);
            }
        }
        BitRow(words)
    }

    fn leading(&self, from: usize, cols: usize, _m: u64) -> Option<(usize, u64)> {
        let mut w = from / 64;
        if w >= self.0.len() {
            return None;
        }
        let mut word = self.0[w] & (u64::MAX << (from % 64));
        loop {
            if word != 0 {
                let col = w * 64 + word.trailing_zeros() as usize;
                return if col < cols { Some((col, 1)) } else { None };
            }
            w += 1;
            if w >= self.0.len() {
                return None;
            }
            word = self.0[w];
        }
    }

    fn get(&self, col: usize, _m: u64) -> u64 {
        (self.0[col / 64] >> (col % 64)) & 1
    }

    fn axpy(&mut self, other: &Self, c: u64, _m: u64) {
        if c & 1 == 1 {
            for (a, b) in self.0.iter_mut().zip(&other.0) {
                *a ^= *b;
            }
        }
    }

    fn scale(&mut self, c: u64, _m: u64) {
        if c & 1 == 0 {
            self.0.fill(0);
        }
    }
}

#[derive(Clone)]
pub(crate) struct ByteRow(Vec<u8>);

fn axpy_bytes_const<const P: u32>(dst: &mut [u8], src: &[u8], c: u32) {
    for (a, b) in dst.iter_mut().zip(src) {
        let v = *a as u32 + c * *b as u32;
        *a = (v % P) as u8;
    }
}

fn axpy_bytes(dst: &mut [u8], src: &[u8], c: u32, p: u32) {
    // Specializations let the compiler strength-reduce the modulo and
    // vectorize; these cover every prime the artifact actually uses.
    match p {
        3 => axpy_bytes_const::<3>(dst, src, c),
        5 => axpy_bytes_const::<5>(dst, src, c),
        7 => axpy_bytes_const::<7>(dst, src, c),
        11 => axpy_bytes_const::<11>(dst, src, c),
        13 => axpy_bytes_const::<13>(dst, src, c),
        _ => {
            for (a, b) in dst.iter_mut().zip(src) {
                let v = *a as u32 + c * *b as u32;
                *a = (v % p) as u8;
            }
        }
    }
}

impl RowStore for ByteRow {
    fn from_sparse(cols: usize, entries: &[(u32, u64)], modulus: u64) -> Self {
        let mut data = vec![0u8; cols];
        for &(c, v) in entries {
            let cur = data[c as usize] as u64;
            data[c as usize] = ((cur + v) % modulus) as u8;
        }
        ByteRow(data)
    }

    fn leading(&self, from: usize, cols: usize, _m: u64) -> Option<(usize, u64)> {
        self.0[from..cols]
            .iter()
            .position(|&v| v != 0)
            .map(|off| (from + off, self.0[from + off] as u64))
    }

    fn get(&self, col: usize, _m: u64) -> u64 {
        self.0[col] as u64
    }

    fn axpy(&mut self, other: &Self, c: u64, modulus: u64) {
        if c % modulus == 0 {
            return;
        }
        axpy_bytes(&mut self.0, &other.0, (c % modulus) as u32, modulus as u32);
    }

    fn scale(&mut self, c: u64, modulus: u64) {
        let c = (c % modulus) as u32;
        let p = modulus as u32;
        for a in self.0.iter_mut() {
            *a = ((*a as u32 * c) % p) as u8;
        }
    }
}

#[derive(Clone)]
pub(crate) struct WideRow(Vec<u64>);

impl RowStore for WideRow {
    fn from_sparse(cols: usize, entries: &[(u32, u64)], modulus: u64) -> Self {
        let mut data = vec![0u64; cols];
        for &(c, v) in entries {
            data[c as usize] = (data[c as usize] + v) % modulus;
        }
        WideRow(data)
    }

    fn leading(&self, from: usize, cols: usize, _m: u64) -> Option<(usize, u64)> {
        self.0[from..cols]
            .iter()
            .position(|&v| v != 0)
            .map(|off| (from + off, self.0[from + off]))
    }

    fn get(&self, col: usize, _m: u64) -> u64 {
        self.0[col]
    }

    fn axpy(&mut self, other: &Self, c: u64, modulus: u64) {
        let c = c % modulus;
        if c == 0 {
            return;
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a = ((*a as u128 + c as u128 * *b as u128) % modulus as u128) as u64;
        }
    }

    fn scale(&mut self, c: u64, modulus: u64) {
        let c = c as u128;
        for a in self.0.iter_mut() {
            *a = ((*a as u128 * c) % modulus as u128) as u64;
        }
    }
}

/// Mutable/shared references to two distinct slice elements.
fn disjoint_pair<T>(items: &mut [T], i: usize, j: usize) -> (&mut T, &T) {
    debug_assert_ne!(i, j);
    if i < j {
        let (left, right) = items.split_at_mut(j);
        (&mut left[i], &right[0])
    } else {
        let (left, right) = items.split_at_mut(i);
        (&mut right[0], &left[j])
    }
}

/// Modular inverse via extended Euclid; `v` must be a unit mod `m`.
pub(crate) fn inv_mod(v: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (v % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "inverse of non-unit {v} mod {m}");
    t0.rem_euclid(m as i128) as u64
}

pub(crate) enum Insert {
    ReducedToZero,
    NewPivot,
    /// The row reduced to zero coefficients with a nonzero trailing
    /// (augmented) entry; the dense reduced row is returned.
    Contradiction(Vec<u64>),
}

pub(crate) struct Eliminator<R: RowStore> {
    modulus: u64,
    cols: usize,
    /// Column considered the augmented right-hand side, if any. A pivot
    /// landing there is a contradiction, not a basis row.
    rhs_col: Option<usize>,
    pivot_of_col: Vec<Option<usize>>,
    rows: Vec<R>,
    pivot_cols: Vec<usize>,
    reduced: bool,
}

impl<R: RowStore> Eliminator<R> {
    pub(crate) fn new(modulus: u64, cols: usize, rhs_col: Option<usize>) -> Self {
        Eliminator {
            modulus,
            cols,
            rhs_col,
            pivot_of_col: vec![None; cols],
            rows: Vec::new(),
            pivot_cols: Vec::new(),
            reduced: false,
        }
    }

    pub(crate) fn insert_sparse(&mut self, entries: &[(u32, u64)]) -> Insert {
        let row = R::from_sparse(self.cols, entries, self.modulus);
        self.insert(row)
    }

    fn insert(&mut self, mut row: R) -> Insert {
        self.reduced = false;
        let m = self.modulus;
        let mut start = 0;
        loop {
            let Some((col, val)) = row.leading(start, self.cols, m) else {
                return Insert::ReducedToZero;
            };
            match self.pivot_of_col[col] {
                Some(ri) => {
                    // Pivot rows are normalized, so subtracting val * pivot
                    // clears this column.
                    row.axpy(&self.rows[ri], m - val, m);
                    start = col;
                }
                None => {
                    if Some(col) == self.rhs_col {
                        return Insert::Contradiction(row.to_dense(self.cols, m));
                    }
                    if val != 1 {
                        row.scale(inv_mod(val, m), m);
                    }
                    self.pivot_of_col[col] = Some(self.rows.len());
                    self.rows.push(row);
                    self.pivot_cols.push(col);
                    return Insert::NewPivot;
                }
            }
        }
    }

    /// Backward pass: clear every pivot column from the other rows, turning
    /// the echelon basis into the unique RREF of the row space.
    pub(crate) fn reduce(&mut self) {
        if self.reduced {
            return;
        }
        let m = self.modulus;
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivot_cols[i]);
        for &i in &order {
            let mut start = self.pivot_cols[i] + 1;
            while start < self.cols {
                let Some((col, val)) = self.rows[i].leading(start, self.cols, m) else {
                    break;
                };
                match self.pivot_of_col[col] {
                    Some(rj) if rj != i => {
                        let (target, pivot) = disjoint_pair(&mut self.rows, i, rj);
                        target.axpy(pivot, m - val, m);
                        start = col;
                    }
                    _ => start = col + 1,
                }
            }
        }
        self.reduced = true;
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Pivot columns in increasing order.
    pub(crate) fn pivot_columns(&self) -> Vec<usize> {
        let mut cols = self.pivot_cols.clone();
        cols.sort_unstable();
        cols
    }

    /// Rows of the (reduced) basis ordered by pivot column.
    pub(crate) fn dense_rows(&self) -> Vec<Vec<u64>> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivot_cols[i]);
        order
            .into_iter()
            .map(|i| self.rows[i].to_dense(self.cols, self.modulus))
            .collect()
    }

    pub(crate) fn get(&self, pivot_col: usize, col: usize) -> u64 {
        let ri = self.pivot_of_col[pivot_col].expect("no pivot in column");
        self.rows[ri].get(col, self.modulus)
    }

    pub(crate) fn has_pivot(&self, col: usize) -> bool {
        self.pivot_of_col[col].is_some()
    }
}

pub(crate) enum AnyElim {
    Bits(Eliminator<BitRow>),
    Bytes(Eliminator<ByteRow>),
    Wide(Eliminator<WideRow>),
}

impl AnyElim {
    pub(crate) fn new(modulus: u64, cols: usize, rhs_col: Option<usize>) -> Self {
        if modulus == 2 {
            AnyElim::Bits(Eliminator::new(modulus, cols, rhs_col))
        } else if modulus <= 251 {
            AnyElim::Bytes(Eliminator::new(modulus, cols, rhs_col))
        } else {
            AnyElim::Wide(Eliminator::new(modulus, cols, rhs_col))
        }
    }

    pub(crate) fn insert_sparse(&mut self, entries: &[(u32, u64)]) -> Insert {
        match self {
            AnyElim::Bits(e) => e.insert_sparse(entries),
            AnyElim::Bytes(e) => e.insert_sparse(entries),
            AnyElim::Wide(e) => e.insert_sparse(entries),
        }
    }

    pub(crate) fn reduce(&mut self) {
        match self {
            AnyElim::Bits(e) => e.reduce(),
            AnyElim::Bytes(e) => e.reduce(),
            AnyElim::Wide(e) => e.reduce(),
        }
    }

    pub(crate) fn rank(&self) -> usize {
        match self {
            AnyElim::Bits(e) => e.rank(),
            AnyElim::Bytes(e) => e.rank(),
            AnyElim::Wide(e) => e.rank(),
        }
    }

    pub(crate) fn pivot_columns(&self) -> Vec<usize> {
        match self {
            AnyElim::Bits(e) => e.pivot_columns(),
            AnyElim::Bytes(e) => e.pivot_columns(),
            AnyElim::Wide(e) => e.pivot_columns(),
        }
    }

    pub(crate) fn dense_rows(&self) -> Vec<Vec<u64>> {
        match self {
            AnyElim::Bits(e) => e.dense_rows(),
            AnyElim::Bytes(e) => e.dense_rows(),
            AnyElim::Wide(e) => e.dense_rows(),
        }
    }

    pub(crate) fn get(&self, pivot_col: usize, col: usize) -> u64 {
        match self {
            AnyElim::Bits(e) => e.get(pivot_col, col),
            AnyElim::Bytes(e) => e.get(pivot_col, col),
            AnyElim::Wide(e) => e.get(pivot_col, col),
        }
    }

    pub(crate) fn has_pivot(&self, col: usize) -> bool {
        match self {
            AnyElim::Bits(e) => e.has_pivot(col),
            AnyElim::Bytes(e) => e.has_pivot(col),
            AnyElim::Wide(e) => e.has_pivot(col),
        }
    }
}
