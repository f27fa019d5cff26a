//! Dense matrices over small finite fields, with the handful of exact
//! operations the rest of the crate needs: RREF, rank, kernels, solving and
//! RREF-canonical subspace enumeration. Entries are integer element codes;
//! the field is supplied per call as an [`Arith`] view.

use crate::field::Arith;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct Mat {
    rows: usize,
    cols: usize,
    a: Vec<u64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, a: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        debug_assert!(rows.iter().all(|x| x.len() == c));
        Mat { rows: r, cols: c, a: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.a[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<u64> {
        self.row(i).to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn push_row(&mut self, row: &[u64]) {
        debug_assert!(row.len() == self.cols || self.rows == 0);
        if self.rows == 0 {
            self.cols = row.len();
        }
        self.a.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.rows, other.rows);
        let mut m = Mat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    pub fn mul<A: Arith>(&self, other: &Mat, f: &A) -> Mat {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let v = self.get(i, l);
                if v == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let w = other.get(l, j);
                    if w != 0 {
                        let cur = out.get(i, j);
                        out.set(i, j, f.add(cur, f.mul(v, w)));
                    }
                }
            }
        }
        out
    }

    /// In-place reduced row echelon form. Returns the pivot columns.
    pub fn rref<A: Arith>(&mut self, f: &A) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let mut piv = None;
            for i in r..self.rows {
                if self.get(i, c) != 0 {
                    piv = Some(i);
                    break;
                }
            }
            let Some(piv) = piv else { continue };
            self.swap_rows(r, piv);
            let inv = f.inv(self.get(r, c));
            if inv != 1 {
                for j in c..self.cols {
                    let v = self.get(r, j);
                    self.set(r, j, f.mul(v, inv));
                }
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let v = self.get(i, c);
                if v != 0 {
                    for j in c..self.cols {
                        let sub = f.mul(v, self.get(r, j));
                        let cur = self.get(i, j);
                        self.set(i, j, f.sub(cur, sub));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.a.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn rank<A: Arith>(&self, f: &A) -> usize {
        let mut m = self.clone();
        m.rref(f).len()
    }

    /// RREF with zero rows removed: the canonical representative of the row
    /// space, suitable for hashing and equality of subspaces.
    pub fn rref_canon<A: Arith>(&self, f: &A) -> Mat {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let r = pivots.len();
        Mat { rows: r, cols: m.cols, a: m.a[..r * m.cols].to_vec() }
    }

    /// Basis of { x : self · x = 0 }, one solution per row.
    pub fn right_kernel<A: Arith>(&self, f: &A) -> Mat {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut out = Mat::zeros(free.len(), self.cols);
        for (idx, &fc) in free.iter().enumerate() {
            out.set(idx, fc, 1);
            for (r, &pc) in pivots.iter().enumerate() {
                let v = m.get(r, fc);
                if v != 0 {
                    out.set(idx, pc, f.neg(v));
                }
            }
        }
        out
    }

    /// Whether `v` lies in the row space. `self` must already be in RREF.
    pub fn rref_row_space_contains<A: Arith>(&self, v: &[u64], f: &A) -> bool {
        self.reduce_dense(v, f).iter().all(|&x| x == 0)
    }

    /// Reduces `v` against the rows of an RREF matrix.
    pub fn reduce_dense<A: Arith>(&self, v: &[u64], f: &A) -> Vec<u64> {
        debug_assert_eq!(v.len(), self.cols);
        let mut w = v.to_vec();
        for i in 0..self.rows {
            // locate this row's pivot
            let Some(pc) = self.row(i).iter().position(|&x| x != 0) else {
                continue;
            };
            let c = w[pc];
            if c != 0 {
                for j in pc..self.cols {
                    let sub = f.mul(c, self.get(i, j));
                    w[j] = f.sub(w[j], sub);
                }
            }
        }
        w
    }

    /// One solution x (as a row) of x · self = rhs, if any.
    pub fn solve_left<A: Arith>(&self, rhs: &[u64], f: &A) -> Option<Vec<u64>> {
        // Solve self^T · x^T = rhs^T by eliminating on [self^T | rhs^T].
        debug_assert_eq!(rhs.len(), self.cols);
        let t = self.transpose();
        let mut aug = Mat::zeros(t.rows, t.cols + 1);
        for i in 0..t.rows {
            for j in 0..t.cols {
                aug.set(i, j, t.get(i, j));
            }
            aug.set(i, t.cols, rhs[i]);
        }
        let pivots = aug.rref(f);
        if pivots.contains(&t.cols) {
            return None; // inconsistent
        }
        let mut x = vec![0u64; t.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, t.cols);
        }
        Some(x)
    }
}

/// Iterator over all d×n matrices in reduced row echelon form of rank d over
/// a field of the given size, in a fixed deterministic order. Their row
/// spaces enumerate each d-dimensional subspace of F_q^n exactly once.
pub(crate) struct RrefIter {
    d: usize,
    n: usize,
    q: u64,
    pivots: Option<Vec<usize>>,
    fill: u128,
    fill_count: u128,
    free_positions: Vec<(usize, usize)>,
}

impl RrefIter {
    pub fn new(d: usize, n: usize, q: u64) -> RrefIter {
        let pivots = if d <= n { Some((0..d).collect()) } else { None };
        let mut it = RrefIter {
            d,
            n,
            q,
            pivots,
            fill: 0,
            fill_count: 0,
            free_positions: Vec::new(),
        };
        if it.pivots.is_some() {
            it.recompute_free();
        }
        it
    }

    fn recompute_free(&mut self) {
        let pivots = self.pivots.as_ref().unwrap();
        let mut is_pivot = vec![false; self.n];
        for &c in pivots {
            is_pivot[c] = true;
        }
        self.free_positions.clear();
        for (r, &pc) in pivots.iter().enumerate() {
            for c in pc + 1..self.n {
                if !is_pivot[c] {
                    self.free_positions.push((r, c));
                }
            }
        }
        self.fill = 0;
        self.fill_count = (self.q as u128).pow(self.free_positions.len() as u32);
    }

    /// Advances the pivot-column combination (lexicographic), if possible.
    fn next_pivots(&mut self) -> bool {
        let pivots = self.pivots.as_mut().unwrap();
        let d = self.d;
        if d == 0 {
            return false;
        }
        let mut i = d;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if pivots[i] < self.n - (d - i) {
                pivots[i] += 1;
                for j in i + 1..d {
                    pivots[j] = pivots[i] + (j - i);
                }
                return true;
            }
        }
    }
}

impl Iterator for RrefIter {
    type Item = Mat;

    fn next(&mut self) -> Option<Mat> {
        let pivots = self.pivots.as_ref()?;
        if self.d == 0 {
            // single empty matrix
            self.pivots = None;
            return Some(Mat::zeros(0, self.n));
        }
        if self.fill >= self.fill_count {
            if !self.next_pivots() {
                self.pivots = None;
                return None;
            }
            self.recompute_free();
        }
        let pivots = self.pivots.as_ref().unwrap();
        let mut m = Mat::zeros(self.d, self.n);
        for (r, &c) in pivots.iter().enumerate() {
            m.set(r, c, 1);
        }
        let mut v = self.fill;
        for &(r, c) in &self.free_positions {
            m.set(r, c, (v % self.q as u128) as u64);
            v /= self.q as u128;
        }
        self.fill += 1;
        Some(m)
    }
}
