//! Exact integer and finite-field linear algebra.
//!
//! Everything downstream (homology, canonical subspaces, saturation) sits on
//! the Smith normal form implemented here. Matrices store arbitrary-precision
//! integers; the SNF driver picks minimal-absolute-value pivots to keep entry
//! growth on sparse boundary matrices under control, and large boundary
//! matrices go through a sparse unit-pivot reduction that only falls back to
//! the dense routine for the (small) non-unit block.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
            .collect();
        IntMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, BigInt::from(f(i, j)));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        let cur = out.at(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn row_i64(&self, i: usize) -> Vec<i64> {
        (0..self.cols).map(|j| to_i64(self.at(i, j))).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.at(dst, j) + c * self.at(src, j);
            self.set(dst, j, v);
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.at(i, dst) + c * self.at(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.at(i, j);
            self.set(i, j, v);
        }
    }

    /// rows (a, b) <- (s*a + t*b, u*a + v*b)
    fn transform_rows(
        &mut self,
        a: usize,
        b: usize,
        s: &BigInt,
        t: &BigInt,
        u: &BigInt,
        v: &BigInt,
    ) {
        for j in 0..self.cols {
            let x = self.at(a, j).clone();
            let y = self.at(b, j).clone();
            self.set(a, j, s * &x + t * &y);
            self.set(b, j, u * &x + v * &y);
        }
    }

    fn transform_cols(
        &mut self,
        a: usize,
        b: usize,
        s: &BigInt,
        t: &BigInt,
        u: &BigInt,
        v: &BigInt,
    ) {
        for i in 0..self.rows {
            let x = self.at(i, a).clone();
            let y = self.at(i, b).clone();
            self.set(i, a, s * &x + t * &y);
            self.set(i, b, u * &x + v * &y);
        }
    }
}

pub fn to_i64(x: &BigInt) -> i64 {
    i64::try_from(x).expect("entry exceeds i64 at desk scale")
}

/// Smith normal form `left * A * right = diag(d_1, ..., d_r)` with
/// `d_i | d_{i+1}` and unimodular transforms. The inverse transforms are
/// tracked during elimination, which is what lattice saturation consumes.
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub left_inv: IntMatrix,
    pub right_inv: IntMatrix,
    pub rank: usize,
}

impl SmithNormalForm {
    /// Reconstructs the original matrix from the transforms, for checking.
    pub fn reconstruct(&self) -> IntMatrix {
        let rows = self.left.cols();
        let cols = self.right.rows();
        let mut d = IntMatrix::zeros(rows, cols);
        for (i, di) in self.diagonal.iter().enumerate() {
            d.set(i, i, di.clone());
        }
        self.left_inv.mul(&d).mul(&self.right_inv)
    }
}

struct SnfWork {
    a: IntMatrix,
    left: IntMatrix,
    left_inv: IntMatrix,
    right: IntMatrix,
    right_inv: IntMatrix,
}

impl SnfWork {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.left.swap_rows(i, j);
        self.left_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.right.swap_cols(i, j);
        self.right_inv.swap_rows(i, j);
    }

    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_row(dst, src, c);
        self.left.add_row(dst, src, c);
        let minus = -c;
        self.left_inv.add_col(src, dst, &minus);
    }

    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_col(dst, src, c);
        self.right.add_col(dst, src, c);
        let minus = -c;
        self.right_inv.add_row(src, dst, &minus);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.left.negate_row(i);
        for k in 0..self.left_inv.rows() {
            let v = -self.left_inv.at(k, i);
            self.left_inv.set(k, i, v);
        }
    }

    /// Bezout transform on rows (i, j): pivot becomes gcd.
    fn bezout_rows(&mut self, i: usize, j: usize, col: usize) {
        let a = self.a.at(i, col).clone();
        let b = self.a.at(j, col).clone();
        let e = a.extended_gcd(&b);
        let (g, s, t) = (e.gcd, e.x, e.y);
        let u = -(&b / &g);
        let v = &a / &g;
        // [[s, t], [u, v]] has determinant 1
        self.a.transform_rows(i, j, &s, &t, &u, &v);
        self.left.transform_rows(i, j, &s, &t, &u, &v);
        // inverse is [[v, -t], [-u, s]]
        let (nt, nu) = (-&t, -&u);
        self.left_inv.transform_cols(i, j, &v, &nu, &nt, &s);
    }

    fn bezout_cols(&mut self, i: usize, j: usize, row: usize) {
        let a = self.a.at(row, i).clone();
        let b = self.a.at(row, j).clone();
        let e = a.extended_gcd(&b);
        let (g, s, t) = (e.gcd, e.x, e.y);
        let u = -(&b / &g);
        let v = &a / &g;
        self.a.transform_cols(i, j, &s, &t, &u, &v);
        self.right.transform_cols(i, j, &s, &t, &u, &v);
        let (nt, nu) = (-&t, -&u);
        self.right_inv.transform_rows(i, j, &v, &nu, &nt, &s);
    }
}

/// Smith normal form of an arbitrary integer matrix. Total on all inputs,
/// including the zero matrix (empty diagonal).
pub fn smith_normal_form(a: &IntMatrix) -> SmithNormalForm {
    let (m, n) = (a.rows(), a.cols());
    let mut w = SnfWork {
        a: a.clone(),
        left: IntMatrix::identity(m),
        left_inv: IntMatrix::identity(m),
        right: IntMatrix::identity(n),
        right_inv: IntMatrix::identity(n),
    };

    let mut k = 0;
    while k < m.min(n) {
        // minimal-absolute-value pivot in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..m {
            for j in k..n {
                if !w.a.at(i, j).is_zero() {
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => w.a.at(i, j).abs() < w.a.at(pi, pj).abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        w.swap_rows(k, pi);
        w.swap_cols(k, pj);

        loop {
            // clear column k below the pivot
            let mut dirty = false;
            for i in (k + 1)..m {
                if !w.a.at(i, k).is_zero() {
                    if (w.a.at(i, k) % w.a.at(k, k)).is_zero() {
                        let q = -(w.a.at(i, k) / w.a.at(k, k));
                        w.add_row(i, k, &q);
                    } else {
                        w.bezout_rows(k, i, k);
                        dirty = true;
                    }
                }
            }
            for j in (k + 1)..n {
                if !w.a.at(k, j).is_zero() {
                    if (w.a.at(k, j) % w.a.at(k, k)).is_zero() {
                        let q = -(w.a.at(k, j) / w.a.at(k, k));
                        w.add_col(j, k, &q);
                        // clearing the row can reintroduce column entries
                    } else {
                        w.bezout_cols(k, j, k);
                        dirty = true;
                    }
                }
            }
            let col_clear = ((k + 1)..m).all(|i| w.a.at(i, k).is_zero());
            let row_clear = ((k + 1)..n).all(|j| w.a.at(k, j).is_zero());
            if col_clear && row_clear && !dirty {
                break;
            }
        }

        // pivot must divide the remaining block for the divisibility chain
        let mut offender = None;
        'scan: for i in (k + 1)..m {
            for j in (k + 1)..n {
                if !(w.a.at(i, j) % w.a.at(k, k)).is_zero() {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            let one = BigInt::one();
            w.add_row(k, i, &one);
            continue; // redo this pivot
        }

        if w.a.at(k, k).is_negative() {
            w.negate_row(k);
        }
        k += 1;
    }

    let rank = k;
    let diagonal: Vec<BigInt> = (0..rank).map(|i| w.a.at(i, i).clone()).collect();
    debug_assert!(diagonal.windows(2).all(|p| (&p[1] % &p[0]).is_zero()));
    SmithNormalForm {
        diagonal,
        left: w.left,
        right: w.right,
        left_inv: w.left_inv,
        right_inv: w.right_inv,
        rank,
    }
}

/// Invariant factors of a sparse integer matrix given as triplets, without
/// transforms. Unit pivots are peeled off with a bucket-queue elimination
/// ordered by column fill; whatever block survives goes through the dense
/// routine. Entries use checked i128 arithmetic (elimination fill at desk
/// scale stays far below the width), with a loud failure on overflow.
pub fn elementary_divisors_sparse(
    rows: usize,
    cols: usize,
    triplets: &[(usize, usize, i64)],
) -> Vec<BigInt> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    let mut row_data: Vec<BTreeMap<usize, i128>> = vec![BTreeMap::new(); rows];
    let mut col_rows: Vec<std::collections::BTreeSet<usize>> =
        vec![std::collections::BTreeSet::new(); cols];
    for &(i, j, v) in triplets {
        assert!(i < rows && j < cols, "triplet out of bounds");
        if v == 0 {
            continue;
        }
        let e = row_data[i].entry(j).or_insert(0);
        *e = e.checked_add(v as i128).expect("sparse entry overflow");
        if *e == 0 {
            row_data[i].remove(&j);
        } else {
            col_rows[j].insert(i);
        }
    }
    for j in 0..cols {
        col_rows[j].retain(|&i| row_data[i].contains_key(&j));
    }

    let mut units = 0usize;
    let mut alive_rows: Vec<bool> = vec![true; rows];
    let mut alive_cols: Vec<bool> = vec![true; cols];
    // lazy priority queue over (column nnz, column)
    let mut queue: BinaryHeap<Reverse<(usize, usize)>> = (0..cols)
        .filter(|&j| !col_rows[j].is_empty())
        .map(|j| Reverse((col_rows[j].len(), j)))
        .collect();

    while let Some(Reverse((nnz, pj))) = queue.pop() {
        if !alive_cols[pj] || col_rows[pj].is_empty() {
            continue;
        }
        if col_rows[pj].len() != nnz {
            queue.push(Reverse((col_rows[pj].len(), pj)));
            continue;
        }
        // unit entry with the sparsest row
        let mut best: Option<(usize, usize)> = None;
        for &i in &col_rows[pj] {
            if row_data[i][&pj].abs() == 1 {
                let score = row_data[i].len();
                if best.map_or(true, |(s, _)| score < s) {
                    best = Some((score, i));
                }
            }
        }
        let Some((_, pi)) = best else {
            continue; // no unit pivot in this column; leave for the dense pass
        };

        let pivot_sign = row_data[pi][&pj];
        let pivot_row: Vec<(usize, i128)> = row_data[pi].iter().map(|(&j, &v)| (j, v)).collect();
        let elim_rows: Vec<usize> = col_rows[pj].iter().copied().filter(|&i| i != pi).collect();
        let mut touched_cols: Vec<usize> = Vec::new();
        for i in elim_rows {
            let factor = row_data[i][&pj]
                .checked_mul(pivot_sign)
                .expect("sparse factor overflow");
            for (j, pv) in &pivot_row {
                let e = row_data[i].entry(*j).or_insert(0);
                *e = e
                    .checked_sub(factor.checked_mul(*pv).expect("sparse product overflow"))
                    .expect("sparse entry overflow");
                if *e == 0 {
                    row_data[i].remove(j);
                    col_rows[*j].remove(&i);
                } else {
                    col_rows[*j].insert(i);
                }
                touched_cols.push(*j);
            }
        }
        // column pj holds only the pivot now; clearing row pi is free
        for (j, _) in &pivot_row {
            col_rows[*j].remove(&pi);
            touched_cols.push(*j);
        }
        row_data[pi].clear();
        alive_rows[pi] = false;
        alive_cols[pj] = false;
        units += 1;
        touched_cols.sort_unstable();
        touched_cols.dedup();
        for j in touched_cols {
            if alive_cols[j] && !col_rows[j].is_empty() {
                queue.push(Reverse((col_rows[j].len(), j)));
            }
        }
    }

    // residual block -> dense
    let live_r: Vec<usize> = (0..rows)
        .filter(|&i| alive_rows[i] && !row_data[i].is_empty())
        .collect();
    let mut live_c: Vec<usize> = Vec::new();
    for &i in &live_r {
        for &j in row_data[i].keys() {
            if !live_c.contains(&j) {
                live_c.push(j);
            }
        }
    }
    live_c.sort_unstable();
    let mut divisors: Vec<BigInt> = vec![BigInt::one(); units];
    if !live_r.is_empty() {
        let mut dense = IntMatrix::zeros(live_r.len(), live_c.len());
        for (ri, &i) in live_r.iter().enumerate() {
            for (&j, &v) in &row_data[i] {
                let cj = live_c.binary_search(&j).unwrap();
                dense.set(ri, cj, BigInt::from(v));
            }
        }
        divisors.extend(smith_normal_form(&dense).diagonal);
    }
    divisors
}

/// Field selector for rank/kernel computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Rank and kernel basis of `A` over Q or F_p. Kernel vectors over Q are
/// scaled to primitive integer vectors with positive leading entry.
pub fn field_rank_kernel(a: &IntMatrix, field: FieldSpec) -> Result<(usize, Vec<Vec<i64>>)> {
    match field {
        FieldSpec::Rationals => Ok(rank_kernel_q(a)),
        FieldSpec::Prime(p) => {
            if !is_prime(p) {
                return Err(Error::NonPrimeModulus(p));
            }
            Ok(rank_kernel_fp(a, p))
        }
    }
}

fn rank_kernel_q(a: &IntMatrix) -> (usize, Vec<Vec<i64>>) {
    // fraction-free row echelon with content reduction
    let (m, n) = (a.rows(), a.cols());
    let mut rows: Vec<Vec<BigInt>> = (0..m)
        .map(|i| (0..n).map(|j| a.at(i, j).clone()).collect())
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in (r + 1)..m {
            if rows[i][c].is_zero() {
                continue;
            }
            let g = rows[r][c].gcd(&rows[i][c]);
            let fr = &rows[i][c] / &g;
            let fi = &rows[r][c] / &g;
            for j in 0..n {
                rows[i][j] = &rows[i][j] * &fi - &rows[r][j] * &fr;
            }
            reduce_content(&mut rows[i]);
        }
        pivots.push((r, c));
        r += 1;
        if r == m {
            break;
        }
    }
    let rank = pivots.len();

    // back-substitute one kernel vector per free column, exactly
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut kernel = Vec::new();
    for f in 0..n {
        if pivot_cols.contains(&f) {
            continue;
        }
        // x_f = 1, solve pivots bottom-up over Q via a common denominator walk
        let mut num = vec![BigInt::zero(); n];
        let mut den = BigInt::one();
        num[f] = BigInt::one();
        for idx in (0..rank).rev() {
            let (pr, pc) = pivots[idx];
            // row: sum_j rows[pr][j] * x_j = 0  =>  x_pc = -(sum_{j>pc}) / rows[pr][pc]
            let mut s = BigInt::zero();
            for j in (pc + 1)..n {
                if !rows[pr][j].is_zero() && !num[j].is_zero() {
                    s += &rows[pr][j] * &num[j];
                }
            }
            // x_pc = -s / (den * rows[pr][pc]); rescale all numerators
            let piv = rows[pr][pc].clone();
            for x in num.iter_mut() {
                *x *= &piv;
            }
            num[pc] = -s;
            den *= &piv;
        }
        let _ = den; // only ratios matter; normalize to primitive below
        reduce_content(&mut num);
        if let Some(lead) = num.iter().find(|x| !x.is_zero()) {
            if lead.is_negative() {
                for x in num.iter_mut() {
                    *x = -&*x;
                }
            }
        }
        kernel.push(num.iter().map(to_i64).collect());
    }
    (rank, kernel)
}

fn reduce_content(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
        }
    }
    if g > BigInt::one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

fn rank_kernel_fp(a: &IntMatrix, p: u64) -> (usize, Vec<Vec<i64>>) {
    let (m, n) = (a.rows(), a.cols());
    let pi = BigInt::from(p);
    let mut rows: Vec<Vec<u64>> = (0..m)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let r = a.at(i, j).mod_floor(&pi);
                    u64::try_from(&r).unwrap()
                })
                .collect()
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pos) = (r..m).find(|&i| rows[i][c] % p != 0) else {
            continue;
        };
        rows.swap(r, pos);
        let inv = mod_inverse(rows[r][c], p);
        for j in 0..n {
            rows[r][j] = rows[r][j] * inv % p;
        }
        for i in 0..m {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..n {
                    rows[i][j] = (rows[i][j] + (p - f) * rows[r][j]) % p;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == m {
            break;
        }
    }
    let rank = pivots.len();
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut kernel = Vec::new();
    for f in 0..n {
        if pivot_cols.contains(&f) {
            continue;
        }
        let mut v = vec![0i64; n];
        v[f] = 1;
        for (idx, &(pr, pc)) in pivots.iter().enumerate() {
            let _ = idx;
            let coeff = rows[pr][f] % p;
            if coeff != 0 {
                v[pc] = ((p - coeff) % p) as i64;
            }
        }
        kernel.push(v);
    }
    (rank, kernel)
}

pub fn mod_inverse(a: u64, p: u64) -> u64 {
    // extended Euclid; p prime, a not divisible by p
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert!(r == 1, "{a} not invertible mod {p}");
    (t.rem_euclid(p as i128)) as u64
}

/// Integer kernel lattice basis of `A` (saturated: the span is a direct
/// summand of Z^cols). Columns of the right transform past the rank.
pub fn kernel_z(a: &IntMatrix) -> Vec<Vec<i64>> {
    let snf = smith_normal_form(a);
    let n = a.cols();
    (snf.rank..n)
        .map(|j| (0..n).map(|i| to_i64(snf.right.at(i, j))).collect())
        .collect()
}

/// One integer solution of `A x = b`, if any.
pub fn solve_z(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), a.rows());
    let snf = smith_normal_form(a);
    let m = a.rows();
    let n = a.cols();
    // y with D y = L b, then x = R y
    let mut lb = vec![BigInt::zero(); m];
    for i in 0..m {
        for k in 0..m {
            if !snf.left.at(i, k).is_zero() {
                lb[i] += snf.left.at(i, k) * &b[k];
            }
        }
    }
    let mut y = vec![BigInt::zero(); n];
    for i in 0..m {
        if i < snf.rank {
            if (&lb[i] % &snf.diagonal[i]).is_zero() {
                y[i] = &lb[i] / &snf.diagonal[i];
            } else {
                return None;
            }
        } else if !lb[i].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigInt::zero(); n];
    for i in 0..n {
        for k in 0..n {
            if !snf.right.at(i, k).is_zero() && !y[k].is_zero() {
                x[i] += snf.right.at(i, k) * &y[k];
            }
        }
    }
    Some(x)
}

/// Basis of the saturation of the row lattice of `A`: the lattice
/// `span_Q(rows) ∩ Z^cols`, returned as the first `rank` rows of the inverse
/// right transform. Always spans a direct summand.
pub fn saturate_rows(a: &IntMatrix) -> Vec<Vec<i64>> {
    let snf = smith_normal_form(a);
    (0..snf.rank)
        .map(|i| {
            (0..a.cols())
                .map(|j| to_i64(snf.right_inv.at(i, j)))
                .collect()
        })
        .collect()
}

/// True iff the row lattice of `A` is a direct summand of Z^cols of full row
/// count (all invariant factors 1, rank = number of rows). Equivalent to the
/// maximal minors having gcd 1; small matrices take the direct minor route,
/// the rest go through the SNF.
pub fn rows_span_summand(a: &IntMatrix) -> bool {
    if a.rows() == 0 {
        return true;
    }
    if a.rows() <= 4 && a.cols() <= 8 {
        if let Some(result) = minor_gcd_is_one_i128(a) {
            return result;
        }
    }
    let snf = smith_normal_form(a);
    snf.rank == a.rows() && snf.diagonal.iter().all(|d| d.is_one())
}

/// Direct maximal-minor gcd test in fixed-width arithmetic; None when an
/// entry is too large for the overflow-free bound.
fn minor_gcd_is_one_i128(a: &IntMatrix) -> Option<bool> {
    let k = a.rows();
    let n = a.cols();
    let mut rows: Vec<Vec<i128>> = Vec::with_capacity(k);
    for i in 0..k {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let v = i128::try_from(a.at(i, j)).ok()?;
            if v.abs() > 1 << 30 {
                return None;
            }
            row.push(v);
        }
        rows.push(row);
    }
    let mut cols: Vec<usize> = Vec::with_capacity(k);
    let mut g: i128 = 0;
    minor_gcd_rec(&rows, 0, &mut cols, &mut g);
    Some(g == 1)
}

fn minor_gcd_rec(rows: &[Vec<i128>], start: usize, cols: &mut Vec<usize>, g: &mut i128) {
    if *g == 1 {
        return;
    }
    let k = rows.len();
    if cols.len() == k {
        let det = det_i128(rows, cols);
        *g = gcd_i128(*g, det.abs());
        return;
    }
    let n = rows[0].len();
    let remaining = k - cols.len();
    for c in start..=(n - remaining) {
        cols.push(c);
        minor_gcd_rec(rows, c + 1, cols, g);
        cols.pop();
        if *g == 1 {
            return;
        }
    }
}

fn det_i128(rows: &[Vec<i128>], cols: &[usize]) -> i128 {
    // Laplace for k ≤ 4
    let k = cols.len();
    match k {
        1 => rows[0][cols[0]],
        2 => rows[0][cols[0]] * rows[1][cols[1]] - rows[0][cols[1]] * rows[1][cols[0]],
        _ => {
            let mut det = 0i128;
            let sub_rows: Vec<Vec<i128>> = rows[1..].to_vec();
            for (i, &c) in cols.iter().enumerate() {
                let rest: Vec<usize> = cols
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, &cc)| cc)
                    .collect();
                let minor = det_i128(&sub_rows, &rest);
                let term = rows[0][c].checked_mul(minor).expect("determinant overflow");
                det = if i % 2 == 0 { det + term } else { det - term };
            }
            det
        }
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Hermite normal form of the row lattice (row-style, pivots positive,
/// entries above pivots reduced to [0, pivot)). Unique per lattice: used as
/// the canonical representative of rational subspaces via their saturation.
pub fn hnf_rows(a: &IntMatrix) -> Vec<Vec<i64>> {
    let (m, n) = (a.rows(), a.cols());
    let mut rows: Vec<Vec<BigInt>> = (0..m)
        .map(|i| (0..n).map(|j| a.at(i, j).clone()).collect())
        .collect();
    let mut r = 0;
    for c in 0..n {
        // gcd the column below r into one row
        loop {
            let mut nz: Vec<usize> = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            nz.sort_by_key(|&i| rows[i][c].abs());
            rows.swap(r, nz[0]);
            let mut done = true;
            for i in (r + 1)..rows.len() {
                if !rows[i][c].is_zero() {
                    let q = div_round(&rows[i][c], &rows[r][c]);
                    for j in 0..n {
                        let v = &rows[i][j] - &q * &rows[r][j];
                        rows[i][j] = v;
                    }
                    if !rows[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for j in 0..n {
                    rows[r][j] = -&rows[r][j];
                }
            }
            // reduce entries above the pivot into [0, pivot)
            for i in 0..r {
                let q = rows[i][c].div_floor(&rows[r][c]);
                if !q.is_zero() {
                    for j in 0..n {
                        let v = &rows[i][j] - &q * &rows[r][j];
                        rows[i][j] = v;
                    }
                }
            }
            r += 1;
        }
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows.iter()
        .map(|row| row.iter().map(to_i64).collect())
        .collect()
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // nearest-integer division keeps HNF intermediate entries small
    let two = BigInt::from(2);
    let (q, r) = a.div_mod_floor(b);
    if &(&r * &two) > &b.abs() {
        q + BigInt::one()
    } else {
        q
    }
}
