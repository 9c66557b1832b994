//! Coefficient rings for the representation engine: the Galois ring
//! `(Z/p^N)[x] / (C(x))` with `C` the monic lift of the Conway polynomial
//! of degree `m`, together with its residue field (`N = 1`).
//!
//! Elements are coefficient vectors of length `m` with entries in
//! `[0, p^N)`.  The class of `x` is a lift of a fixed primitive root of the
//! residue field, giving canonical Teichmueller representatives for all
//! multiplicative characters.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Conway polynomial coefficients `[c_0, .., c_{m-1}]` of
/// `x^m + c_{m-1} x^{m-1} + .. + c_0` over `F_p`, for the parameters the
/// engine supports.  Primitivity of the root is asserted by tests.
fn conway_coeffs(p: u64, m: usize) -> Result<Vec<u64>> {
    let coeffs: &[u64] = match (p, m) {
        (3, 1) => &[1],
        (3, 2) => &[2, 2],
        (5, 1) => &[3],
        (5, 2) => &[2, 4],
        (5, 3) => &[3, 3, 0],
        (5, 4) => &[2, 4, 4, 0],
        (7, 1) => &[4],
        (7, 2) => &[3, 6],
        (7, 3) => &[4, 0, 6],
        (7, 4) => &[3, 4, 5, 0],
        _ => {
            return Err(Error::Unsupported(format!(
                "no Conway polynomial on file for p = {p}, degree {m}"
            )))
        }
    };
    Ok(coeffs.to_vec())
}

/// An element of the coefficient ring: `m` coefficients modulo `p^N`.
pub type El = Vec<u64>;

/// The ring `(Z/p^N)[x]/(C(x))`; `N = 1` is the residue field `F_{p^m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffRing {
    pub p: u64,
    pub m: usize,
    /// Precision exponent `N >= 1`.
    pub n: u32,
    /// `p^N`.
    pub pn: u64,
    /// Monic modulus: coefficients `[c_0, .., c_{m-1}]` of the lower part.
    modulus: Arc<Vec<u64>>,
}

impl CoeffRing {
    pub fn new(p: u64, m: usize, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("precision must be positive".into()));
        }
        let pn = p
            .checked_pow(n)
            .filter(|v| *v < (1 << 40))
            .ok_or_else(|| Error::Unsupported(format!("p^N = {p}^{n} too large")))?;
        let modulus = Arc::new(conway_coeffs(p, m)?);
        Ok(CoeffRing { p, m, n, pn, modulus })
    }

    /// The residue field `F_{p^m}` of this ring.
    pub fn residue_field(&self) -> CoeffRing {
        CoeffRing {
            p: self.p,
            m: self.m,
            n: 1,
            pn: self.p,
            modulus: self.modulus.clone(),
        }
    }

    pub fn is_field(&self) -> bool {
        self.n == 1
    }

    /// Order of the residue field.
    pub fn q(&self) -> u64 {
        self.p.pow(self.m as u32)
    }

    pub fn zero(&self) -> El {
        vec![0; self.m]
    }

    pub fn one(&self) -> El {
        self.from_u64(1)
    }

    pub fn from_u64(&self, v: u64) -> El {
        let mut e = vec![0; self.m];
        e[0] = v % self.pn;
        e
    }

    /// The class of `x`: the canonical primitive root (Teichmueller lift
    /// taken separately when `N > 1`).
    pub fn gen_x(&self) -> El {
        let mut e = vec![0; self.m];
        if self.m == 1 {
            // x = -c_0.
            e[0] = (self.pn - self.modulus[0] % self.pn) % self.pn;
        } else {
            e[1] = 1;
        }
        e
    }

    pub fn is_zero(&self, a: &El) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &El, b: &El) -> El {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.pn).collect()
    }

    pub fn sub(&self, a: &El, b: &El) -> El {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| (x + self.pn - y) % self.pn)
            .collect()
    }

    pub fn neg(&self, a: &El) -> El {
        a.iter().map(|&x| (self.pn - x) % self.pn).collect()
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.pn as u128) as u64
    }

    pub fn scalar_mul(&self, s: u64, a: &El) -> El {
        a.iter().map(|&x| self.mulmod(s % self.pn, x)).collect()
    }

    pub fn mul(&self, a: &El, b: &El) -> El {
        let m = self.m;
        if m == 1 {
            return vec![self.mulmod(a[0], b[0])];
        }
        // Schoolbook product, then reduce by the monic modulus.
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + self.mulmod(x, y)) % self.pn;
            }
        }
        for k in (m..2 * m - 1).rev() {
            let lead = prod[k];
            if lead == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &c) in self.modulus.iter().enumerate() {
                let idx = k - m + i;
                prod[idx] = (prod[idx] + self.pn - self.mulmod(lead, c % self.pn)) % self.pn;
            }
        }
        prod.truncate(m);
        prod
    }

    pub fn pow(&self, a: &El, mut e: u64) -> El {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Reduces an element to the residue field.
    pub fn reduce(&self, a: &El) -> El {
        a.iter().map(|&x| x % self.p).collect()
    }

    /// Lifts a residue-field element (coefficientwise).
    pub fn lift(&self, a: &El) -> El {
        a.clone()
    }

    pub fn is_unit(&self, a: &El) -> bool {
        !a.iter().all(|&c| c % self.p == 0)
    }

    /// p-adic valuation of a scalar coefficient.
    pub fn val_u64(&self, mut v: u64) -> u32 {
        if v == 0 {
            return self.n;
        }
        let mut k = 0;
        while v % self.p == 0 {
            v /= self.p;
            k += 1;
        }
        k
    }

    /// Minimum valuation over the coefficients (`N` for zero).
    pub fn val(&self, a: &El) -> u32 {
        a.iter().map(|&c| self.val_u64(c)).min().unwrap_or(self.n)
    }

    /// Exact division by `p^k` (coefficientwise); requires `val >= k`.
    pub fn div_pow_p(&self, a: &El, k: u32) -> Result<El> {
        let pk = self.p.pow(k);
        let mut out = Vec::with_capacity(self.m);
        for &c in a {
            if c % pk != 0 {
                return Err(Error::Precision(format!(
                    "inexact division by p^{k} of coefficient {c}"
                )));
            }
            out.push(c / pk);
        }
        Ok(out)
    }

    pub fn mul_pow_p(&self, a: &El, k: u32) -> El {
        let pk = self.p.pow(k.min(self.n)) % self.pn;
        self.scalar_mul(pk, a)
    }

    /// Inverse of a unit: residue-field inverse by powering, then Hensel
    /// lifting to full precision.
    pub fn inv(&self, a: &El) -> Result<El> {
        if !self.is_unit(a) {
            return Err(Error::InvalidParameter("inverse of a non-unit".into()));
        }
        let field = self.residue_field();
        let res = self.reduce(a);
        let mut b = field.pow(&res, field.q() - 2);
        // Hensel: b <- b (2 - a b), doubling the precision each step.
        let two = self.from_u64(2);
        for _ in 0..self.n.ilog2() + 2 {
            let t = self.sub(&two, &self.mul(a, &b));
            b = self.mul(&b, &t);
        }
        debug_assert_eq!(self.mul(a, &b), self.one());
        Ok(b)
    }

    /// The Teichmueller lift of the canonical primitive root: the limit of
    /// `x^(q^k)`.
    pub fn teichmueller_gen(&self) -> El {
        let mut t = self.gen_x();
        loop {
            let next = self.pow(&t, self.q());
            if next == t {
                return t;
            }
            t = next;
        }
    }

    /// Teichmueller representative of `gamma^k`, `gamma` the primitive
    /// root.
    pub fn teichmueller_pow(&self, k: u64) -> El {
        self.pow(&self.teichmueller_gen(), k % (self.q() - 1))
    }

    /// Frobenius `a -> a^(p^j)` on the residue field (`N = 1` only).
    pub fn frobenius(&self, a: &El, j: usize) -> Result<El> {
        if !self.is_field() {
            return Err(Error::Unsupported(
                "entrywise Frobenius is defined on the residue field".into(),
            ));
        }
        Ok(self.pow(a, self.p.pow(j as u32)))
    }
}
