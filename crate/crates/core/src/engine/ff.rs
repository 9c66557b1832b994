//! Fast residue-field arithmetic via discrete-log (Zech) tables, plus
//! dense matrices over it.
//!
//! Elements are coded as `0` for zero and `1 + k` for the k-th power of
//! the canonical primitive root, so multiplication is addition of
//! exponents and addition goes through one Zech-logarithm lookup.  The
//! tables are built from the verified polynomial arithmetic in
//! [`CoeffRing`], which also provides the conversion maps in both
//! directions.

use std::collections::HashMap;
use std::sync::Arc;

use super::ring::{CoeffRing, El};
use crate::error::Result;

/// Coded field element: `0` is zero, `1 + k` is `gamma^k`.
pub type F = u32;

#[derive(Debug)]
pub struct FField {
    pub p: u64,
    pub m: usize,
    pub q: u64,
    /// `exp[k] = gamma^k` in polynomial coordinates, `k < q - 1`.
    exp: Vec<El>,
    dlog: HashMap<El, u32>,
    /// `zech[d]` = code of `1 + gamma^d`.
    zech: Vec<F>,
    /// `-1 = gamma^((q-1)/2)` (p is odd).
    neg_shift: u32,
    coeff: CoeffRing,
}

impl FField {
    pub fn new(p: u64, m: usize) -> Result<Arc<FField>> {
        let coeff = CoeffRing::new(p, m, 1)?;
        let q = coeff.q();
        let gamma = coeff.gen_x();
        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut dlog = HashMap::new();
        let mut cur = coeff.one();
        for k in 0..q - 1 {
            exp.push(cur.clone());
            dlog.insert(cur.clone(), k as u32);
            cur = coeff.mul(&cur, &gamma);
        }
        debug_assert_eq!(cur, coeff.one());
        let one = coeff.one();
        let mut zech = Vec::with_capacity((q - 1) as usize);
        for k in 0..(q - 1) as usize {
            let s = coeff.add(&one, &exp[k]);
            zech.push(if coeff.is_zero(&s) {
                0
            } else {
                1 + dlog[&s]
            });
        }
        Ok(Arc::new(FField {
            p,
            m,
            q,
            exp,
            dlog,
            zech,
            neg_shift: ((q - 1) / 2) as u32,
            coeff,
        }))
    }

    pub fn zero(&self) -> F {
        0
    }

    pub fn one(&self) -> F {
        1
    }

    pub fn is_zero(&self, a: F) -> bool {
        a == 0
    }

    /// The canonical primitive root.
    pub fn gen(&self) -> F {
        if self.q == 2 {
            1
        } else {
            2
        }
    }

    pub fn from_el(&self, e: &El) -> F {
        let r = self.coeff.reduce(e);
        if self.coeff.is_zero(&r) {
            0
        } else {
            1 + self.dlog[&r]
        }
    }

    pub fn to_el(&self, a: F) -> El {
        if a == 0 {
            self.coeff.zero()
        } else {
            self.exp[(a - 1) as usize].clone()
        }
    }

    pub fn from_u64(&self, v: u64) -> F {
        self.from_el(&self.coeff.from_u64(v % self.p))
    }

    /// `gamma^k`.
    pub fn gen_pow(&self, k: u64) -> F {
        1 + (k % (self.q - 1)) as u32
    }

    pub fn mul(&self, a: F, b: F) -> F {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = (a as u64 - 1 + b as u64 - 1) % (self.q - 1);
        1 + e as u32
    }

    pub fn inv(&self, a: F) -> F {
        assert!(a != 0, "inverse of zero");
        let k = (a - 1) as u64;
        1 + ((self.q - 1 - k) % (self.q - 1)) as u32
    }

    pub fn neg(&self, a: F) -> F {
        if a == 0 {
            return 0;
        }
        let e = (a - 1 + self.neg_shift) % (self.q - 1) as u32;
        1 + e
    }

    pub fn add(&self, a: F, b: F) -> F {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        // gamma^i + gamma^j = gamma^i (1 + gamma^(j - i)).
        let i = a - 1;
        let j = b - 1;
        let d = (j + (self.q - 1) as u32 - i) % (self.q - 1) as u32;
        let z = self.zech[d as usize];
        if z == 0 {
            0
        } else {
            1 + ((i + z - 1) % (self.q - 1) as u32)
        }
    }

    pub fn sub(&self, a: F, b: F) -> F {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, a: F, e: u64) -> F {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let k = (a - 1) as u64;
        1 + ((k % (self.q - 1)) * (e % (self.q - 1)) % (self.q - 1)) as u32
    }

    /// Frobenius `a -> a^(p^j)`.
    pub fn frobenius(&self, a: F, j: usize) -> F {
        if a == 0 {
            return 0;
        }
        let pj = self.p.pow((j % self.m) as u32) % (self.q - 1);
        let k = (a - 1) as u64;
        1 + ((k * pj) % (self.q - 1)) as u32
    }
}

/// Dense matrix over an [`FField`]; elements are row vectors, with
/// matrices acting on the right.
#[derive(Debug, Clone)]
pub struct FMat {
    pub field: Arc<FField>,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

impl PartialEq for FMat {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}
impl Eq for FMat {}

impl FMat {
    pub fn zero(field: &Arc<FField>, rows: usize, cols: usize) -> Self {
        FMat {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Arc<FField>, n: usize) -> Self {
        let mut m = FMat::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: &Arc<FField>, rows: Vec<Vec<F>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols);
            data.extend(row);
        }
        FMat {
            field: field.clone(),
            rows: r,
            cols,
            data,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> F {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<F> {
        self.row(i).to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &FMat) -> FMat {
        assert_eq!(self.cols, other.rows);
        let f = &self.field;
        let mut out = FMat::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b == 0 {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &FMat) -> FMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&other.data) {
            *a = self.field.add(*a, b);
        }
        out
    }

    pub fn sub(&self, other: &FMat) -> FMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&other.data) {
            *a = self.field.sub(*a, b);
        }
        out
    }

    pub fn scale(&self, s: F) -> FMat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = self.field.mul(*a, s);
        }
        out
    }

    pub fn transpose(&self) -> FMat {
        let mut out = FMat::zero(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn kronecker(&self, other: &FMat) -> FMat {
        let f = &self.field;
        let mut out = FMat::zero(f, self.rows * other.rows, self.cols * other.cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a == 0 {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        let v = f.mul(a, other.get(i2, j2));
                        out.set(i1 * other.rows + i2, j1 * other.cols + j2, v);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> FMat {
        assert_eq!(self.rows, self.cols);
        let mut base = self.clone();
        let mut acc = FMat::identity(&self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn frobenius(&self, j: usize) -> FMat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = self.field.frobenius(*a, j);
        }
        out
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(r * self.cols + j, pr * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c));
            for j in 0..self.cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                let factor = self.get(i, c);
                if i != r && factor != 0 {
                    for j in 0..self.cols {
                        let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Reduced basis of the row span.
    pub fn row_basis(&self) -> FMat {
        let mut m = self.clone();
        let pivots = m.rref();
        let rows: Vec<Vec<F>> = (0..pivots.len()).map(|i| m.row_vec(i)).collect();
        FMat::from_rows(&self.field, rows, self.cols)
    }

    /// Basis (rows) of `{v : self * v^T = 0}`.
    pub fn right_kernel(&self) -> FMat {
        let f = self.field.clone();
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0; self.cols];
            v[fc] = 1;
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.get(ri, fc));
            }
            rows.push(v);
        }
        FMat::from_rows(&f, rows, self.cols)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<FMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let f = &self.field;
        let mut aug = FMat::zero(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = FMat::zero(f, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Some(inv)
    }
}

/// Reduces `v` against a matrix in reduced row echelon form; returns the
/// coefficients of the basis rows used.  `v` ends as the canonical
/// representative modulo the row span.
pub fn reduce_mod_rref(basis: &FMat, pivots: &[usize], v: &mut [F]) -> Vec<F> {
    let f = &basis.field;
    let mut coeffs = vec![0; pivots.len()];
    for (i, &c) in pivots.iter().enumerate() {
        let factor = v[c];
        if factor == 0 {
            continue;
        }
        coeffs[i] = factor;
        for j in 0..basis.cols {
            v[j] = f.sub(v[j], f.mul(factor, basis.get(i, j)));
        }
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_tables_agree_with_polynomial_arithmetic() {
        for (p, m) in [(5u64, 1usize), (5, 2), (7, 2), (5, 3)] {
            let f = FField::new(p, m).unwrap();
            let ring = CoeffRing::new(p, m, 1).unwrap();
            let q = f.q;
            // Exhaustive check of addition and multiplication against the
            // polynomial model.
            let els: Vec<El> = (0..q)
                .map(|v| {
                    let mut e = ring.zero();
                    let mut t = v;
                    for c in e.iter_mut() {
                        *c = t % p;
                        t /= p;
                    }
                    e
                })
                .collect();
            for a in &els {
                for b in &els {
                    let ca = f.from_el(a);
                    let cb = f.from_el(b);
                    assert_eq!(f.to_el(f.add(ca, cb)), ring.add(a, b));
                    assert_eq!(f.to_el(f.mul(ca, cb)), ring.mul(a, b));
                }
                let ca = f.from_el(a);
                assert_eq!(f.to_el(f.neg(ca)), ring.neg(a));
                if ca != 0 {
                    assert_eq!(f.mul(ca, f.inv(ca)), f.one());
                }
            }
        }
    }

    #[test]
    fn frobenius_and_powers() {
        let f = FField::new(5, 2).unwrap();
        let g = f.gen();
        assert_eq!(f.pow(g, 24), f.one());
        for k in 0..24u64 {
            let a = f.gen_pow(k);
            assert_eq!(f.frobenius(a, 1), f.pow(a, 5));
            assert_eq!(f.frobenius(a, 2), a);
        }
    }

    #[test]
    fn matrix_algebra_and_kernels() {
        let f = FField::new(5, 2).unwrap();
        let g = f.gen();
        let m = FMat::from_rows(
            &f,
            vec![vec![1, g, 0], vec![0, 1, g], vec![1, f.add(g, 1), g]],
            3,
        );
        // Third row = first + second, so rank 2 and a 1-dim kernel.
        assert_eq!(m.rank(), 2);
        let k = m.right_kernel();
        assert_eq!(k.rows, 1);
        assert!(m.mul(&k.transpose()).is_zero());
        // Inverse round trip on an invertible matrix.
        let a = FMat::from_rows(&f, vec![vec![1, g], vec![g, 1]], 2);
        let ai = a.inverse().expect("invertible");
        assert_eq!(a.mul(&ai), FMat::identity(&f, 2));
        // Kronecker mixed-product identity.
        let b = FMat::from_rows(&f, vec![vec![g, 1], vec![0, 2]], 2);
        let lhs = a.kronecker(&b).mul(&ai.kronecker(&b));
        let rhs = a.mul(&ai).kronecker(&b.mul(&b));
        assert_eq!(lhs, rhs);
    }
}
