//! Dense exact linear algebra over `F_{p^m}`: matrices, row echelon form,
//! kernels, and incrementally maintained echelonized subspaces.
//!
//! Entries are stored flat, `m` limbs per entry, so prime-field matrices are
//! plain `u64` arrays and the inner loops stay allocation-free.

use crate::gfield::{Field, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    m: usize,
    data: Vec<u64>,
}

impl Mat {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            m: field.degree(),
            data: vec![0; rows * cols * field.degree()],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Mat {
        let mut a = Mat::zeros(field, n, n);
        for i in 0..n {
            a.set(i, i, &field.one());
        }
        a
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    fn off(&self, i: usize, j: usize) -> usize {
        (i * self.cols + j) * self.m
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        let o = self.off(i, j);
        FieldElement(self.data[o..o + self.m].to_vec())
    }

    pub fn set(&mut self, i: usize, j: usize, v: &FieldElement) {
        let o = self.off(i, j);
        self.data[o..o + self.m].copy_from_slice(&v.0);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&c| c == 0)
    }

    pub fn row(&self, i: usize) -> Vec<u64> {
        self.data[self.off(i, 0)..self.off(i, 0) + self.cols * self.m].to_vec()
    }

    pub fn set_row(&mut self, i: usize, row: &[u64]) {
        let o = self.off(i, 0);
        self.data[o..o + self.cols * self.m].copy_from_slice(row);
    }

    pub fn from_rows(field: &Field, cols: usize, rows: Vec<Vec<u64>>) -> Mat {
        let mut a = Mat::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            a.set_row(i, r);
        }
        a
    }

    pub fn add(&self, field: &Field, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = field.p();
        let mut out = self.clone();
        for (o, &b) in out.data.iter_mut().zip(other.data.iter()) {
            *o = (*o + b) % p;
        }
        out
    }

    pub fn sub(&self, field: &Field, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = field.p();
        let mut out = self.clone();
        for (o, &b) in out.data.iter_mut().zip(other.data.iter()) {
            *o = (*o + p - b) % p;
        }
        out
    }

    pub fn scale(&self, field: &Field, c: &FieldElement) -> Mat {
        let mut out = Mat::zeros_like(self);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, &field.mul(&self.get(i, j), c));
            }
        }
        out
    }

    fn zeros_like(a: &Mat) -> Mat {
        Mat {
            rows: a.rows,
            cols: a.cols,
            m: a.m,
            data: vec![0; a.data.len()],
        }
    }

    pub fn mul(&self, field: &Field, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let (n, k, q) = (self.rows, self.cols, other.cols);
        let p = field.p();
        let mut out = Mat {
            rows: n,
            cols: q,
            m: self.m,
            data: vec![0; n * q * self.m],
        };
        if self.m == 1 {
            // delayed reduction: k*(p-1)^2 stays far below u64::MAX at the
            // supported field sizes
            for i in 0..n {
                for t in 0..k {
                    let a = self.data[i * k + t];
                    if a == 0 {
                        continue;
                    }
                    let brow = &other.data[t * q..(t + 1) * q];
                    let orow = &mut out.data[i * q..(i + 1) * q];
                    for j in 0..q {
                        orow[j] += a * brow[j];
                    }
                }
                for v in out.data[i * q..(i + 1) * q].iter_mut() {
                    *v %= p;
                }
            }
        } else {
            for i in 0..n {
                for j in 0..q {
                    let mut acc = field.zero();
                    for t in 0..k {
                        let prod = field.mul(&self.get(i, t), &other.get(t, j));
                        acc = field.add(&acc, &prod);
                    }
                    out.set(i, j, &acc);
                }
            }
        }
        out
    }

    /// `self * v` for a column vector given as a flat limb slice.
    pub fn matvec(&self, field: &Field, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols * self.m);
        let p = field.p();
        let mut out = vec![0u64; self.rows * self.m];
        if self.m == 1 {
            for i in 0..self.rows {
                let arow = &self.data[i * self.cols..(i + 1) * self.cols];
                let mut acc = 0u64;
                for (a, b) in arow.iter().zip(v.iter()) {
                    acc += a * b;
                }
                out[i] = acc % p;
            }
        } else {
            for i in 0..self.rows {
                let mut acc = field.zero();
                for j in 0..self.cols {
                    let b = FieldElement(v[j * self.m..(j + 1) * self.m].to_vec());
                    acc = field.add(&acc, &field.mul(&self.get(i, j), &b));
                }
                out[i * self.m..(i + 1) * self.m].copy_from_slice(&acc.0);
            }
        }
        out
    }

    pub fn commutator(&self, field: &Field, other: &Mat) -> Mat {
        self.mul(field, other).sub(field, &other.mul(field, self))
    }

    pub fn pow(&self, field: &Field, e: u32) -> Mat {
        assert_eq!(self.rows, self.cols);
        let mut acc = Mat::identity_sized(field, self.rows, self.m);
        for _ in 0..e {
            acc = acc.mul(field, self);
        }
        acc
    }

    fn identity_sized(field: &Field, n: usize, m: usize) -> Mat {
        let mut a = Mat {
            rows: n,
            cols: n,
            m,
            data: vec![0; n * n * m],
        };
        for i in 0..n {
            a.set(i, i, &field.one());
        }
        a
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat {
            rows: self.cols,
            cols: self.rows,
            m: self.m,
            data: vec![0; self.data.len()],
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                let src = self.off(i, j);
                let dst = (j * self.rows + i) * self.m;
                out.data[dst..dst + self.m].copy_from_slice(&self.data[src..src + self.m]);
            }
        }
        out
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self, field: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let mut piv = None;
            for i in r..self.rows {
                if !field.is_zero(&self.get(i, c)) {
                    piv = Some(i);
                    break;
                }
            }
            let Some(i0) = piv else { continue };
            if i0 != r {
                for j in 0..self.cols * self.m {
                    self.data.swap(r * self.cols * self.m + j, i0 * self.cols * self.m + j);
                }
            }
            let inv = field.inv(&self.get(r, c)).expect("pivot nonzero");
            for j in c..self.cols {
                let v = field.mul(&self.get(r, j), &inv);
                self.set(r, j, &v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if field.is_zero(&factor) {
                    continue;
                }
                for j in c..self.cols {
                    let v = field.sub(&self.get(i, j), &field.mul(&factor, &self.get(r, j)));
                    self.set(i, j, &v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &Field) -> usize {
        let mut a = self.clone();
        a.rref(field).len()
    }

    /// Inverse of a square matrix, by row reduction of `[A | I]`.
    pub fn inverse(&self, field: &Field) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zeros(field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, &self.get(i, j));
            }
            aug.set(i, n + i, &field.one());
        }
        let pivots = aug.rref(field);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Mat::zeros(field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, &aug.get(i, n + j));
            }
        }
        Some(inv)
    }

    /// Basis of the right kernel, one vector per row, in reduced echelon form.
    pub fn nullspace(&self, field: &Field) -> Mat {
        let mut a = self.clone();
        let pivots = a.rref(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zeros(field, free.len(), self.cols);
        for (row, &fc) in free.iter().enumerate() {
            out.set(row, fc, &field.one());
            for (pr, &pc) in pivots.iter().enumerate() {
                let v = field.neg(&a.get(pr, fc));
                out.set(row, pc, &v);
            }
        }
        // rows are already independent; echelonize for a canonical layout
        out.rref(field);
        out
    }
}

/// An echelonized subspace basis that supports incremental insertion,
/// the workhorse of spin-up and submodule bookkeeping.
#[derive(Debug, Clone)]
pub struct EchelonSpace {
    dim_ambient: usize,
    m: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl EchelonSpace {
    pub fn new(field: &Field, dim_ambient: usize) -> EchelonSpace {
        EchelonSpace {
            dim_ambient,
            m: field.degree(),
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn entry<'a>(&self, row: &'a [u64], j: usize) -> &'a [u64] {
        &row[j * self.m..(j + 1) * self.m]
    }

    /// Reduces `v` against the current basis, in place.
    pub fn reduce(&self, field: &Field, v: &mut [u64]) {
        for (r, &pc) in self.rows.iter().zip(self.pivots.iter()) {
            let c = FieldElement(self.entry(v, pc).to_vec());
            if field.is_zero(&c) {
                continue;
            }
            for j in 0..self.dim_ambient {
                let rv = FieldElement(self.entry(r, j).to_vec());
                if field.is_zero(&rv) {
                    continue;
                }
                let cur = FieldElement(self.entry(v, j).to_vec());
                let nv = field.sub(&cur, &field.mul(&c, &rv));
                v[j * self.m..(j + 1) * self.m].copy_from_slice(&nv.0);
            }
        }
    }

    /// Inserts `v` if independent of the basis. Returns true when the
    /// dimension grew.
    pub fn insert(&mut self, field: &Field, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(field, &mut w);
        let mut pivot = None;
        for j in 0..self.dim_ambient {
            if !field.is_zero(&FieldElement(self.entry(&w, j).to_vec())) {
                pivot = Some(j);
                break;
            }
        }
        let Some(pc) = pivot else { return false };
        let inv = field
            .inv(&FieldElement(self.entry(&w, pc).to_vec()))
            .expect("pivot nonzero");
        for j in 0..self.dim_ambient {
            let cur = FieldElement(self.entry(&w, j).to_vec());
            let nv = field.mul(&cur, &inv);
            w[j * self.m..(j + 1) * self.m].copy_from_slice(&nv.0);
        }
        // back-substitute into existing rows to keep the basis reduced
        for r in self.rows.iter_mut() {
            let c = FieldElement(r[pc * self.m..(pc + 1) * self.m].to_vec());
            if field.is_zero(&c) {
                continue;
            }
            for j in 0..self.dim_ambient {
                let wv = FieldElement(w[j * self.m..(j + 1) * self.m].to_vec());
                if field.is_zero(&wv) {
                    continue;
                }
                let cur = FieldElement(r[j * self.m..(j + 1) * self.m].to_vec());
                let nv = field.sub(&cur, &field.mul(&c, &wv));
                r[j * self.m..(j + 1) * self.m].copy_from_slice(&nv.0);
            }
        }
        let at = self.pivots.iter().position(|&q| q > pc).unwrap_or(self.pivots.len());
        self.pivots.insert(at, pc);
        self.rows.insert(at, w);
        true
    }

    pub fn contains(&self, field: &Field, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(field, &mut w);
        w.iter().all(|&c| c == 0)
    }

    pub fn basis_mat(&self, field: &Field) -> Mat {
        Mat::from_rows(field, self.dim_ambient, self.rows.clone())
    }

    pub fn from_mat(field: &Field, a: &Mat) -> EchelonSpace {
        let mut s = EchelonSpace::new(field, a.cols());
        for i in 0..a.rows() {
            s.insert(field, &a.row(i));
        }
        s
    }
}

/// Unit vector as a flat limb slice.
pub fn unit_vector(field: &Field, dim: usize, idx: usize) -> Vec<u64> {
    let m = field.degree();
    let mut v = vec![0; dim * m];
    v[idx * m..idx * m + m].copy_from_slice(&field.one().0);
    v
}

pub fn vec_is_zero(v: &[u64]) -> bool {
    v.iter().all(|&c| c == 0)
}

/// Extracts entry `j` of a flat vector.
pub fn vec_entry(field: &Field, v: &[u64], j: usize) -> FieldElement {
    let m = field.degree();
    FieldElement(v[j * m..(j + 1) * m].to_vec())
}

pub fn vec_set_entry(field: &Field, v: &mut [u64], j: usize, val: &FieldElement) {
    let m = field.degree();
    v[j * m..(j + 1) * m].copy_from_slice(&val.0);
}
