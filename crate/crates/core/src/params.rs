use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Global arithmetic parameters: an odd prime `p` and a degree `f >= 1`.
///
/// Everything downstream happens with residues modulo `q - 1` or `q^2 - 1`
/// where `q = p^f`.  The supported desk scale (`p <= 7`, `f <= 4`) keeps all
/// such moduli comfortably inside `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub p: u64,
    pub f: usize,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Params {
    /// Standard constructor: requires `p` prime, `p >= 5`, `f >= 1`.
    pub fn new(p: u64, f: usize) -> Result<Self> {
        Self::check(p, f, false)?;
        Ok(Params { p, f })
    }

    /// Constructor that additionally admits `p = 3` (where genericity
    /// degenerates); `p = 2` is always rejected.
    pub fn new_allowing_p3(p: u64, f: usize) -> Result<Self> {
        Self::check(p, f, true)?;
        Ok(Params { p, f })
    }

    fn check(p: u64, f: usize, allow_p3: bool) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("p = {p} is not prime")));
        }
        if p == 2 {
            return Err(Error::InvalidParameter("p = 2 is not supported".into()));
        }
        if p == 3 && !allow_p3 {
            return Err(Error::InvalidParameter(
                "p = 3 requires the explicit small-prime constructor".into(),
            ));
        }
        if f == 0 {
            return Err(Error::InvalidParameter("f must be >= 1".into()));
        }
        if (p as u128).pow(2 * f as u32) > u64::MAX as u128 {
            return Err(Error::Range(format!("p^(2f) overflows u64 for p={p}, f={f}")));
        }
        Ok(())
    }

    /// `q = p^f`.
    pub fn q(&self) -> u64 {
        self.p.pow(self.f as u32)
    }

    /// `q - 1`, the exponent modulus at level `f`.
    pub fn e(&self) -> u64 {
        self.q() - 1
    }

    /// `q^2 - 1`, the exponent modulus at level `2f`.
    pub fn e2(&self) -> u64 {
        self.q() * self.q() - 1
    }

    /// The same prime with degree `2f` (unramified quadratic extension).
    pub fn doubled(&self) -> Params {
        Params { p: self.p, f: 2 * self.f }
    }

    /// `p^j` for `0 <= j <= 2f`.
    pub fn ppow(&self, j: usize) -> u64 {
        self.p.pow(j as u32)
    }
}

/// Base-`p` digits of `n`, least significant first, padded to length `f`.
///
/// Fails if `n >= p^f`.
pub fn digits(n: u64, p: u64, f: usize) -> Result<Vec<u64>> {
    if n >= p.pow(f as u32) {
        return Err(Error::Range(format!("{n} has more than {f} base-{p} digits")));
    }
    let mut out = Vec::with_capacity(f);
    let mut n = n;
    for _ in 0..f {
        out.push(n % p);
        n /= p;
    }
    Ok(out)
}

/// Evaluate a digit vector: `sum d_j p^j` (no reduction).
pub fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// A subset of the cyclic index set `{0, .., width-1}`, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct JSet {
    pub width: usize,
    pub bits: u32,
}

impl JSet {
    pub fn empty(width: usize) -> Self {
        assert!(width <= 32);
        JSet { width, bits: 0 }
    }

    pub fn full(width: usize) -> Self {
        // Width 0 is allowed: the empty index set over an empty ground set.
        assert!(width <= 31);
        JSet { width, bits: (1u32 << width) - 1 }
    }

    pub fn from_bits(width: usize, bits: u32) -> Result<Self> {
        if width == 0 || width > 32 {
            return Err(Error::InvalidParameter(format!("bad subset width {width}")));
        }
        if bits >= (1u32 << width) {
            return Err(Error::Range(format!("bitmask {bits:#b} exceeds width {width}")));
        }
        Ok(JSet { width, bits })
    }

    pub fn from_elems<I: IntoIterator<Item = usize>>(width: usize, elems: I) -> Self {
        let mut bits = 0u32;
        for j in elems {
            assert!(j < width);
            bits |= 1 << j;
        }
        JSet { width, bits }
    }

    pub fn contains(&self, j: usize) -> bool {
        j < self.width && (self.bits >> j) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn insert(&self, j: usize) -> Self {
        assert!(j < self.width);
        JSet { width: self.width, bits: self.bits | (1 << j) }
    }

    pub fn remove(&self, j: usize) -> Self {
        assert!(j < self.width);
        JSet { width: self.width, bits: self.bits & !(1 << j) }
    }

    pub fn union(&self, other: &Self) -> Self {
        assert_eq!(self.width, other.width);
        JSet { width: self.width, bits: self.bits | other.bits }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        assert_eq!(self.width, other.width);
        JSet { width: self.width, bits: self.bits & other.bits }
    }

    pub fn minus(&self, other: &Self) -> Self {
        assert_eq!(self.width, other.width);
        JSet { width: self.width, bits: self.bits & !other.bits }
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        assert_eq!(self.width, other.width);
        JSet { width: self.width, bits: self.bits ^ other.bits }
    }

    pub fn complement(&self) -> Self {
        JSet { width: self.width, bits: !self.bits & ((1u32 << self.width) - 1) }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.width == other.width && self.bits & !other.bits == 0
    }

    /// Cyclic predecessor of an index: `j - 1 mod width`.
    pub fn pred(width: usize, j: usize) -> usize {
        if j == 0 { width - 1 } else { j - 1 }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width).filter(move |&j| self.contains(j))
    }

    /// All subsets of `{0, .., width-1}` in bitmask order.
    pub fn all(width: usize) -> impl Iterator<Item = JSet> {
        assert!(width <= 31);
        (0u32..(1u32 << width)).map(move |bits| JSet { width, bits })
    }

    /// All subsets between `lo` and `hi` (inclusive), in bitmask order.
    pub fn interval(lo: &JSet, hi: &JSet) -> Vec<JSet> {
        assert_eq!(lo.width, hi.width);
        if !lo.is_subset_of(hi) {
            return Vec::new();
        }
        JSet::all(lo.width)
            .filter(|j| lo.is_subset_of(j) && j.is_subset_of(hi))
            .collect()
    }
}

impl std::fmt::Debug for JSet {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(fm, "{{")?;
        let mut first = true;
        for j in self.iter() {
            if !first {
                write!(fm, ",")?;
            }
            write!(fm, "{j}")?;
            first = false;
        }
        write!(fm, "}}")
    }
}

impl std::fmt::Display for JSet {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(fm, "{self:?}")
    }
}
