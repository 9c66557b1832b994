//! Exact linear algebra over the engine's coefficient rings.
//!
//! Over the residue field this is ordinary Gaussian elimination.  Over the
//! truncated Witt ring (a local chain ring, not a domain) canonical spans
//! are maintained through the Howell form: pivots are powers of p, rows
//! are reduced above pivots, and the form is closed under multiplication
//! by p, which makes span membership a simple reduction.

use super::ring::{CoeffRing, El};
use crate::error::{Error, Result};

/// A dense matrix over a [`CoeffRing`]; elements act as row vectors, with
/// matrices multiplying on the right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub ring: CoeffRing,
    pub rows: usize,
    pub cols: usize,
    data: Vec<El>,
}

impl Mat {
    pub fn zero(ring: &CoeffRing, rows: usize, cols: usize) -> Self {
        Mat {
            ring: ring.clone(),
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &CoeffRing, n: usize) -> Self {
        let mut m = Mat::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_rows(ring: &CoeffRing, rows: Vec<Vec<El>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row);
        }
        Mat {
            ring: ring.clone(),
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &El {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: El) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[El] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<El> {
        self.row(i).to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.ring.is_zero(e))
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let ring = &self.ring;
        let mut out = Mat::zero(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if ring.is_zero(b) {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.set(i, j, ring.add(&cur, &ring.mul(a, b)));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows * self.cols {
            out.data[i] = self.ring.add(&self.data[i], &other.data[i]);
        }
        out
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows * self.cols {
            out.data[i] = self.ring.sub(&self.data[i], &other.data[i]);
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn scale_el(&self, s: &El) -> Mat {
        let mut out = self.clone();
        for e in &mut out.data {
            *e = self.ring.mul(e, s);
        }
        out
    }

    pub fn scale_pow_p(&self, k: u32) -> Mat {
        let mut out = self.clone();
        for e in &mut out.data {
            *e = self.ring.mul_pow_p(e, k);
        }
        out
    }

    /// Entrywise reduction to the residue field.
    pub fn reduce(&self) -> Mat {
        let field = self.ring.residue_field();
        let mut out = Mat::zero(&field, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.ring.reduce(self.get(i, j)));
            }
        }
        out
    }

    /// Entrywise Frobenius twist (residue field only).
    pub fn frobenius(&self, j: usize) -> Result<Mat> {
        let mut out = self.clone();
        for e in &mut out.data {
            *e = self.ring.frobenius(e, j)?;
        }
        Ok(out)
    }

    /// Kronecker (tensor) product.
    pub fn kronecker(&self, other: &Mat) -> Mat {
        let ring = &self.ring;
        let mut out = Mat::zero(ring, self.rows * other.rows, self.cols * other.cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if ring.is_zero(a) {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        out.set(
                            i1 * other.rows + i2,
                            j1 * other.cols + j2,
                            ring.mul(a, other.get(i2, j2)),
                        );
                    }
                }
            }
        }
        out
    }

    /// Matrix power (square matrices).
    pub fn pow(&self, mut e: u64) -> Mat {
        assert_eq!(self.rows, self.cols);
        let mut base = self.clone();
        let mut acc = Mat::identity(&self.ring, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Residue-field elimination.
// ---------------------------------------------------------------------------

/// Row-reduces a matrix over the residue field in place; returns the pivot
/// columns.
pub fn rref(mat: &mut Mat) -> Vec<usize> {
    let ring = mat.ring.clone();
    assert!(ring.is_field());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..mat.cols {
        let Some(pr) = (r..mat.rows).find(|&i| !ring.is_zero(mat.get(i, c))) else {
            continue;
        };
        for j in 0..mat.cols {
            let tmp = mat.get(r, j).clone();
            mat.set(r, j, mat.get(pr, j).clone());
            mat.set(pr, j, tmp);
        }
        let inv = ring.inv(mat.get(r, c)).expect("field pivot");
        for j in 0..mat.cols {
            mat.set(r, j, ring.mul(mat.get(r, j), &inv));
        }
        for i in 0..mat.rows {
            if i != r && !ring.is_zero(mat.get(i, c)) {
                let factor = mat.get(i, c).clone();
                for j in 0..mat.cols {
                    let v = ring.sub(mat.get(i, j), &ring.mul(&factor, mat.get(r, j)));
                    mat.set(i, j, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == mat.rows {
            break;
        }
    }
    pivots
}

/// Basis (as rows) of `{v : A v^T = 0}` over the residue field.
pub fn right_kernel(a: &Mat) -> Vec<Vec<El>> {
    let ring = a.ring.clone();
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    for &fc in &free {
        let mut v = vec![ring.zero(); a.cols];
        v[fc] = ring.one();
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = ring.neg(m.get(ri, fc));
        }
        basis.push(v);
    }
    basis
}

/// Rank over the residue field.
pub fn rank(a: &Mat) -> usize {
    let mut m = a.clone();
    rref(&mut m).len()
}

/// Row span of the matrix over the residue field: reduced basis rows.
pub fn row_basis(a: &Mat) -> Mat {
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let rows: Vec<Vec<El>> = (0..pivots.len()).map(|i| m.row_vec(i)).collect();
    Mat::from_rows(&a.ring, rows)
}

// ---------------------------------------------------------------------------
// Howell form over the chain ring.
// ---------------------------------------------------------------------------

/// Howell form of the row span: rows with pivot entries `p^k`, reduced
/// above pivots, and closed under multiplication by powers of p.
#[derive(Debug, Clone)]
pub struct Howell {
    pub ring: CoeffRing,
    pub cols: usize,
    /// Rows in pivot-column order.
    pub rows: Vec<Vec<El>>,
    /// Pivot (column, valuation) per row.
    pub pivots: Vec<(usize, u32)>,
}

fn row_is_zero(ring: &CoeffRing, row: &[El]) -> bool {
    row.iter().all(|e| ring.is_zero(e))
}

fn row_sub_scaled(ring: &CoeffRing, row: &mut [El], factor: &El, other: &[El]) {
    for (a, b) in row.iter_mut().zip(other) {
        *a = ring.sub(a, &ring.mul(factor, b));
    }
}

/// Coefficientwise "quotient by p^k": the element lambda with
/// `c - p^k lambda` having all coefficients in `[0, p^k)`.
fn div_floor_pow_p(ring: &CoeffRing, c: &El, k: u32) -> El {
    let pk = ring.p.pow(k);
    c.iter().map(|&x| x / pk).collect()
}

pub fn howell(ring: &CoeffRing, rows: Vec<Vec<El>>) -> Howell {
    let cols = rows.first().map_or(0, |r| r.len());
    let n = ring.n;
    let mut pool: Vec<Vec<El>> = rows
        .into_iter()
        .filter(|r| !row_is_zero(ring, r))
        .collect();
    let mut out_rows: Vec<Vec<El>> = Vec::new();
    let mut out_pivots: Vec<(usize, u32)> = Vec::new();
    for col in 0..cols {
        // Pick the row with the lowest valuation at this column.
        let mut best: Option<(usize, u32)> = None;
        for (i, r) in pool.iter().enumerate() {
            let v = ring.val(&r[col]);
            if v < n && best.map_or(true, |(_, bv)| v < bv) {
                best = Some((i, v));
            }
        }
        let Some((idx, k)) = best else { continue };
        let mut pivot = pool.swap_remove(idx);
        // Normalize the pivot entry to exactly p^k.
        let unit = ring.div_pow_p(&pivot[col], k).expect("exact by valuation");
        let inv = ring.inv(&unit).expect("unit by minimality");
        for e in pivot.iter_mut() {
            *e = ring.mul(e, &inv);
        }
        // Eliminate the column from the pool (valuations there are >= k).
        for r in pool.iter_mut() {
            if !ring.is_zero(&r[col]) {
                let factor = ring.div_pow_p(&r[col], k).expect("minimal valuation");
                row_sub_scaled(ring, r, &factor, &pivot);
            }
        }
        pool.retain(|r| !row_is_zero(ring, r));
        // Reduce entries above the pivot to canonical representatives.
        for r in out_rows.iter_mut() {
            if !ring.is_zero(&r[col]) {
                let factor = div_floor_pow_p(ring, &r[col], k);
                row_sub_scaled(ring, r, &factor, &pivot);
            }
        }
        // Howell closure: p^(N-k) times the pivot row stays in the span
        // and has a later pivot; feed it back.
        if k > 0 {
            let shifted: Vec<El> = pivot.iter().map(|e| ring.mul_pow_p(e, n - k)).collect();
            if !row_is_zero(ring, &shifted) {
                pool.push(shifted);
            }
        }
        out_rows.push(pivot);
        out_pivots.push((col, k));
    }
    Howell {
        ring: ring.clone(),
        cols,
        rows: out_rows,
        pivots: out_pivots,
    }
}

impl Howell {
    /// Reduces a vector against the basis; returns the (coefficient,
    /// remainder) pair.  The vector lies in the span iff the remainder is
    /// zero.
    pub fn reduce_with_coeffs(&self, v: &[El]) -> (Vec<El>, Vec<El>) {
        let ring = &self.ring;
        let mut rem = v.to_vec();
        let mut coeffs = vec![ring.zero(); self.rows.len()];
        for (i, &(col, k)) in self.pivots.iter().enumerate() {
            if ring.is_zero(&rem[col]) {
                continue;
            }
            if ring.val(&rem[col]) < k {
                // Cannot clear this pivot; reduce canonically and move on.
                let factor = div_floor_pow_p(ring, &rem[col], k);
                coeffs[i] = factor.clone();
                row_sub_scaled(ring, &mut rem, &factor, &self.rows[i]);
                continue;
            }
            let factor = ring.div_pow_p(&rem[col], k).expect("valuation checked");
            coeffs[i] = factor.clone();
            row_sub_scaled(ring, &mut rem, &factor, &self.rows[i]);
        }
        (coeffs, rem)
    }

    pub fn contains(&self, v: &[El]) -> bool {
        let (_, rem) = self.reduce_with_coeffs(v);
        row_is_zero(&self.ring, &rem)
    }

    pub fn contains_rows(&self, m: &Mat) -> bool {
        (0..m.rows).all(|i| self.contains(m.row(i)))
    }

    pub fn basis_mat(&self) -> Mat {
        Mat::from_rows(&self.ring, self.rows.clone())
    }
}

// ---------------------------------------------------------------------------
// Smith normal form with tracked column operations.
// ---------------------------------------------------------------------------

/// Smith data for a square matrix `A` of full expected rank with all
/// elementary divisors `p^(a_i)`, `a_i < N`: the row span of `A` equals
/// the row span of `diag(p^a) * w`, and `w * w_inv = identity`.
#[derive(Debug, Clone)]
pub struct Smith {
    pub divisors: Vec<u32>,
    pub w: Mat,
    pub w_inv: Mat,
}

pub fn smith(a: &Mat) -> Result<Smith> {
    assert_eq!(a.rows, a.cols);
    let ring = a.ring.clone();
    let n = a.rows;
    let mut m = a.clone();
    let mut w = Mat::identity(&ring, n);
    let mut w_inv = Mat::identity(&ring, n);
    let mut divisors = vec![0u32; n];
    for t in 0..n {
        // Global minimal-valuation pivot in the trailing block.
        let mut best: Option<(usize, usize, u32)> = None;
        for i in t..n {
            for j in t..n {
                let v = ring.val(m.get(i, j));
                if v < ring.n && best.map_or(true, |(_, _, bv)| v < bv) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((pi, pj, k)) = best else {
            return Err(Error::Precision(format!(
                "matrix is singular modulo p^{}: rank deficiency at step {t}",
                ring.n
            )));
        };
        // Move the pivot to (t, t): a row swap and a column swap.
        if pi != t {
            for j in 0..n {
                let tmp = m.get(t, j).clone();
                m.set(t, j, m.get(pi, j).clone());
                m.set(pi, j, tmp);
            }
        }
        if pj != t {
            for i in 0..n {
                let tmp = m.get(i, t).clone();
                m.set(i, t, m.get(i, pj).clone());
                m.set(i, pj, tmp);
            }
            // Column swap C: w <- C^{-1} w is a row swap; w_inv <- w_inv C
            // is a column swap.
            for j in 0..n {
                let tmp = w.get(t, j).clone();
                w.set(t, j, w.get(pj, j).clone());
                w.set(pj, j, tmp);
            }
            for i in 0..n {
                let tmp = w_inv.get(i, t).clone();
                w_inv.set(i, t, w_inv.get(i, pj).clone());
                w_inv.set(i, pj, tmp);
            }
        }
        // Normalize the pivot to p^k by scaling its row by a unit.
        let unit = ring.div_pow_p(m.get(t, t), k)?;
        let inv = ring.inv(&unit)?;
        for j in 0..n {
            m.set(t, j, ring.mul(m.get(t, j), &inv));
        }
        // Clear the pivot column with row operations (exact divisions).
        for i in 0..n {
            if i != t && !ring.is_zero(m.get(i, t)) {
                let factor = ring.div_pow_p(m.get(i, t), k)?;
                for j in 0..n {
                    let v = ring.sub(m.get(i, j), &ring.mul(&factor, m.get(t, j)));
                    m.set(i, j, v);
                }
            }
        }
        // Clear the pivot row with column operations, tracking w and its
        // inverse: col_j -= factor * col_t translates to
        // row_t of w += factor * row_j, and col ops on w_inv directly.
        for j in 0..n {
            if j != t && !ring.is_zero(m.get(t, j)) {
                let factor = ring.div_pow_p(m.get(t, j), k)?;
                for i in 0..n {
                    let v = ring.sub(m.get(i, j), &ring.mul(&factor, m.get(i, t)));
                    m.set(i, j, v);
                }
                // C = I - factor*E_{t j}; w <- C^{-1} w adds factor*row_j
                // to row_t; w_inv <- w_inv * C subtracts factor*col_t from
                // col_j.
                for c in 0..n {
                    let v = ring.add(w.get(t, c), &ring.mul(&factor, w.get(j, c)));
                    w.set(t, c, v);
                }
                for r in 0..n {
                    let v = ring.sub(w_inv.get(r, j), &ring.mul(&factor, w_inv.get(r, t)));
                    w_inv.set(r, j, v);
                }
            }
        }
        divisors[t] = k;
    }
    debug_assert!(w.mul(&w_inv).sub(&Mat::identity(&ring, n)).is_zero());
    Ok(Smith { divisors, w, w_inv })
}
