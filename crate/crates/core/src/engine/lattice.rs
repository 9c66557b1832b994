//! Integral lattices in induced modules for principal series types over
//! the truncated Witt ring, and the operations the verification suites
//! need: reduction modulo p, the sublattice-with-prescribed-cosocle
//! algorithm, scaled duals via Smith normal form, and gauge measurement
//! against the distinguished lattice family.
//!
//! Normalization conventions.  The distinguished lattice with cosocle
//! indexed by `J` is represented by the sublattice `T_J` of the standard
//! induced lattice that is not contained in p times it; the abstract
//! family member is `p^(-|J|) T_J`.  Measured gauge values therefore come
//! out as `raw(T_J, L) + |J| - raw(T_empty, L)`, where `raw` is the least
//! exponent carrying one lattice into the other; the subtraction makes
//! the result homothety-invariant and normalized at the empty index.

use std::sync::Arc;

use num_rational::Ratio;

use super::ff::{FField, FMat, F};
use super::gmodule::{self, GModule};
use super::linalg::{howell, smith, Howell, Mat};
use super::ring::{CoeffRing, El};
use crate::error::{Error, Result};
use crate::gauge::GaugeVector;
use crate::params::JSet;
use crate::types::{TameType, TypeKind};
use crate::weight::Weight;

/// A full-rank lattice in the ambient module, by its canonical basis.
#[derive(Debug, Clone)]
pub struct Lattice {
    pub basis: Howell,
}

impl Lattice {
    pub fn rows(&self) -> Vec<Vec<El>> {
        self.basis.rows.clone()
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.basis.rows == other.basis.rows
    }
}
impl Eq for Lattice {}

/// The ambient free module with its generator action and residue field.
#[derive(Debug, Clone)]
pub struct LatticeModule {
    pub ring: CoeffRing,
    pub field: Arc<FField>,
    pub dim: usize,
    /// Generator actions `[t, u, w]` on row vectors, entries integral.
    pub gens: Vec<Mat>,
}

/// 2x2 matrices over the residue field, row-major `[m11, m12, m21, m22]`.
fn mul2(f: &FField, a: [F; 4], b: [F; 4]) -> [F; 4] {
    [
        f.add(f.mul(a[0], b[0]), f.mul(a[1], b[2])),
        f.add(f.mul(a[0], b[1]), f.mul(a[1], b[3])),
        f.add(f.mul(a[2], b[0]), f.mul(a[3], b[2])),
        f.add(f.mul(a[2], b[1]), f.mul(a[3], b[3])),
    ]
}

impl LatticeModule {
    /// The integral induced module of a principal series type: functions
    /// on the flag variety, dimension q + 1, with the inducing character
    /// lifted through Teichmueller representatives.
    pub fn induced(tau: &TameType, precision: u32) -> Result<LatticeModule> {
        if tau.kind != TypeKind::PrincipalSeries {
            return Err(Error::KindMismatch(
                "the engine builds induced lattices for principal series types".into(),
            ));
        }
        let params = &tau.params;
        let (p, f) = (params.p, params.f);
        let q = params.q();
        let e = params.e();
        let ring = CoeffRing::new(p, f, precision)?;
        let field = FField::new(p, f)?;
        // Teichmueller powers of the primitive root.
        let tg = ring.teichmueller_gen();
        let mut teich = Vec::with_capacity(e as usize);
        let mut cur = ring.one();
        for _ in 0..e {
            teich.push(cur.clone());
            cur = ring.mul(&cur, &tg);
        }
        // Character exponents on the two diagonal entries of the Borel.
        let (a1, a2) = (tau.exponents[0], tau.exponents[1]);
        let dim = (q + 1) as usize;
        // Coset representatives: k_z lower unipotent for z coded 0..q-1,
        // and the Weyl element at index q.
        let rep = |x: usize| -> [F; 4] {
            if x < q as usize {
                [1, 0, x as F, 1]
            } else {
                [0, 1, 1, 0]
            }
        };
        let gamma = field.gen();
        let group_gens: [[F; 4]; 3] = [
            [gamma, 0, 0, 1],
            [1, 1, 0, 1],
            [0, 1, 1, 0],
        ];
        let mut gens = Vec::with_capacity(3);
        for g in group_gens {
            let mut rho = Mat::zero(&ring, dim, dim);
            for x in 0..dim {
                let h = mul2(&field, rep(x), g);
                // Decompose h = b k_y with b upper triangular.
                let (y, b11, b22) = if h[3] != 0 {
                    let z = field.mul(h[2], field.inv(h[3]));
                    let b11 = field.sub(h[0], field.mul(h[1], z));
                    (z as usize, b11, h[3])
                } else {
                    (q as usize, h[1], h[2])
                };
                debug_assert!(b11 != 0 && b22 != 0);
                let exp = (a1 * (b11 as u64 - 1) + a2 * (b22 as u64 - 1)) % e;
                rho.set(x, y, teich[exp as usize].clone());
            }
            gens.push(rho.transpose());
        }
        Ok(LatticeModule {
            ring,
            field,
            dim,
            gens,
        })
    }

    /// The contragredient module on the same underlying space: generator
    /// actions are inverse transposes, so the evaluation pairing is
    /// invariant.
    pub fn dual(&self) -> LatticeModule {
        let q = self.ring.q();
        let p = self.ring.p;
        // Inverses through the generator orders: t^(q-1) = u^p = w^2 = 1.
        let inv = [
            self.gens[0].pow(q - 2),
            self.gens[1].pow(p - 1),
            self.gens[2].clone(),
        ];
        LatticeModule {
            ring: self.ring.clone(),
            field: self.field.clone(),
            dim: self.dim,
            gens: inv.into_iter().map(|m| m.transpose()).collect(),
        }
    }

    pub fn standard_lattice(&self) -> Lattice {
        let rows = (0..self.dim)
            .map(|i| {
                let mut r = vec![self.ring.zero(); self.dim];
                r[i] = self.ring.one();
                r
            })
            .collect();
        Lattice {
            basis: howell(&self.ring, rows),
        }
    }

    pub fn lattice_from_rows(&self, rows: Vec<Vec<El>>) -> Result<Lattice> {
        let h = howell(&self.ring, rows);
        if h.rows.len() != self.dim {
            return Err(Error::Precision(format!(
                "lattice basis has rank {} < {}",
                h.rows.len(),
                self.dim
            )));
        }
        Ok(Lattice { basis: h })
    }

    /// `p^k L`.
    pub fn scale(&self, l: &Lattice, k: u32) -> Result<Lattice> {
        let rows = l
            .basis
            .rows
            .iter()
            .map(|r| r.iter().map(|e| self.ring.mul_pow_p(e, k)).collect())
            .collect();
        self.lattice_from_rows(rows)
    }

    /// Divides out the largest power of p containing the lattice in the
    /// correspondingly scaled standard lattice; returns the lattice and
    /// the exponent removed.
    pub fn renormalize(&self, l: &Lattice) -> Result<(Lattice, u32)> {
        let k = l
            .basis
            .rows
            .iter()
            .flat_map(|r| r.iter().map(|e| self.ring.val(e)))
            .min()
            .unwrap_or(0);
        if k == 0 {
            return Ok((l.clone(), 0));
        }
        let rows = l
            .basis
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| self.ring.div_pow_p(e, k))
                    .collect::<Result<Vec<El>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((self.lattice_from_rows(rows)?, k))
    }

    /// Whether `p^shift inner` is contained in `outer`.
    pub fn contains_scaled(&self, outer: &Lattice, inner: &Lattice, shift: u32) -> bool {
        inner.basis.rows.iter().all(|r| {
            let scaled: Vec<El> = r.iter().map(|e| self.ring.mul_pow_p(e, shift)).collect();
            outer.basis.contains(&scaled)
        })
    }

    /// Least `n >= 0` with `p^n inner` contained in `outer`.
    pub fn raw_exponent(&self, inner: &Lattice, outer: &Lattice) -> Result<u32> {
        for n in 0..self.ring.n.saturating_sub(1) {
            if self.contains_scaled(outer, inner, n) {
                return Ok(n);
            }
        }
        Err(Error::Precision(format!(
            "no containment exponent below precision {}",
            self.ring.n
        )))
    }

    /// The reduction `L / pL` as a module over the residue field, on the
    /// canonical basis of `L`.
    pub fn reduction(&self, l: &Lattice) -> Result<GModule> {
        let n = self.dim;
        let mut gens = Vec::with_capacity(3);
        for g in &self.gens {
            let img = Mat::from_rows(&self.ring, l.basis.rows.clone()).mul(g);
            let mut b = FMat::zero(&self.field, n, n);
            for i in 0..n {
                let (coeffs, rem) = l.basis.reduce_with_coeffs(img.row(i));
                if rem.iter().any(|e| !self.ring.is_zero(e)) {
                    return Err(Error::Precondition(
                        "lattice is not stable under the group action".into(),
                    ));
                }
                for (j, c) in coeffs.iter().enumerate() {
                    b.set(i, j, self.field.from_el(c));
                }
            }
            gens.push(b);
        }
        Ok(GModule {
            field: self.field.clone(),
            dim: n,
            gens,
        })
    }

    /// Rows of `inner` expressed in the basis of `outer`, reduced modulo
    /// p, as a span inside the reduction of `outer`.
    pub fn span_in_reduction(&self, outer: &Lattice, inner: &Lattice) -> Result<FMat> {
        let n = self.dim;
        let mut rows = Vec::with_capacity(n);
        for r in &inner.basis.rows {
            let (coeffs, rem) = outer.basis.reduce_with_coeffs(r);
            if rem.iter().any(|e| !self.ring.is_zero(e)) {
                return Err(Error::Precondition(
                    "inner lattice is not contained in the outer lattice".into(),
                ));
            }
            rows.push(coeffs.iter().map(|c| self.field.from_el(c)).collect());
        }
        Ok(FMat::from_rows(&self.field, rows, n))
    }

    /// The quotient `outer / inner` (requires `p outer <= inner <= outer`)
    /// as a residue-field module.
    pub fn quotient_module(&self, outer: &Lattice, inner: &Lattice) -> Result<GModule> {
        let span = self.span_in_reduction(outer, inner)?;
        Ok(gmodule::quotient_by(&self.reduction(outer)?, &span).0)
    }

    /// The image of `inner` in `outer / p outer` as a residue-field
    /// module.
    pub fn image_module(&self, outer: &Lattice, inner: &Lattice) -> Result<GModule> {
        let span = self.span_in_reduction(outer, inner)?;
        Ok(gmodule::submodule_on(&self.reduction(outer)?, &span).0)
    }

    /// Largest sublattice of `l` (not inside `p l`) whose reduction has
    /// cosocle isotypic for `simples[target]`: iterated preimages of the
    /// kernel of all maps onto the other candidates.
    pub fn sublattice_with_cosocle(
        &self,
        l: &Lattice,
        simples: &[GModule],
        target: usize,
    ) -> Result<Lattice> {
        let mut cur = l.clone();
        for _ in 0..64 {
            let red = self.reduction(&cur)?;
            let mut rows: Vec<Vec<F>> = Vec::new();
            for (i, s) in simples.iter().enumerate() {
                if i == target {
                    continue;
                }
                for phi in gmodule::hom_space(&red, s) {
                    let pt = phi.transpose();
                    rows.extend((0..pt.rows).map(|r| pt.row_vec(r)));
                }
            }
            if rows.is_empty() {
                if gmodule::hom_space(&red, &simples[target]).is_empty() {
                    return Err(Error::NotFound(
                        "target simple does not occur in the cosocle".into(),
                    ));
                }
                return Ok(cur);
            }
            let ker = FMat::from_rows(&self.field, rows, self.dim).right_kernel();
            // Preimage: lift the kernel into the lattice, together with
            // p times the current basis.
            let mut gen_rows: Vec<Vec<El>> = Vec::new();
            for i in 0..ker.rows {
                let lifted: Vec<El> = ker.row(i).iter().map(|&c| self.field.to_el(c)).collect();
                let v = Mat::from_rows(&self.ring, vec![lifted])
                    .mul(&Mat::from_rows(&self.ring, cur.basis.rows.clone()));
                gen_rows.push(v.row_vec(0));
            }
            for r in &cur.basis.rows {
                gen_rows.push(r.iter().map(|e| self.ring.mul_pow_p(e, 1)).collect());
            }
            let next = self.lattice_from_rows(gen_rows)?;
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
        Err(Error::Precision(
            "cosocle refinement did not stabilize within the iteration cap".into(),
        ))
    }

    /// The lattice `{phi : <l, phi> = 0 mod p^c}` in the contragredient
    /// module (the p^c-scaled dual), computed through Smith normal form
    /// so no precision is lost.
    pub fn dual_lattice(&self, l: &Lattice, c: u32) -> Result<Lattice> {
        let b = Mat::from_rows(&self.ring, l.basis.rows.clone());
        let s = smith(&b)?;
        let n = self.dim;
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let shift = c.saturating_sub(s.divisors[i]);
            let row: Vec<El> = (0..n)
                .map(|r| self.ring.mul_pow_p(s.w_inv.get(r, i), shift))
                .collect();
            rows.push(row);
        }
        self.lattice_from_rows(rows)
    }
}

/// The candidate simple modules of a type, labelled by their indices and
/// weights.
pub fn type_simples(tau: &TameType, field: &Arc<FField>) -> Vec<(JSet, Weight, GModule)> {
    tau.jh_factors()
        .into_iter()
        .map(|(j, w)| {
            let m = GModule::simple_module(field, &tau.params, &w);
            (j, w, m)
        })
        .collect()
}

/// The distinguished cosocle-lattice family `{T_J}` inside the standard
/// induced lattice, one representative per index of the type.
pub fn cosocle_family(
    module: &LatticeModule,
    simples: &[(JSet, Weight, GModule)],
) -> Result<Vec<(JSet, Lattice)>> {
    let std = module.standard_lattice();
    let mods: Vec<GModule> = simples.iter().map(|(_, _, m)| m.clone()).collect();
    simples
        .iter()
        .enumerate()
        .map(|(i, (j, _, _))| {
            let lat = module.sublattice_with_cosocle(&std, &mods, i)?;
            Ok((*j, lat))
        })
        .collect()
}

/// Measures the gauge of `l` against the distinguished family, applying
/// the family normalization `p^(-|J|) T_J` and shifting so the value at
/// the empty index is zero.
pub fn measure_gauge(
    module: &LatticeModule,
    tau: &TameType,
    family: &[(JSet, Lattice)],
    l: &Lattice,
) -> Result<GaugeVector> {
    let f = tau.params.f;
    let empty = JSet::empty(f);
    let t_empty = family
        .iter()
        .find(|(j, _)| *j == empty)
        .ok_or_else(|| Error::NotFound("family lacks the empty index".into()))?;
    let base = module.raw_exponent(&t_empty.1, l)? as i64;
    let mut values = std::collections::BTreeMap::new();
    for (j, t_j) in family {
        let raw = module.raw_exponent(t_j, l)? as i64;
        let v = raw + j.len() as i64 - base;
        values.insert(*j, Ratio::new(v, 1));
    }
    let gauge = GaugeVector {
        tau: tau.clone(),
        values,
    };
    gauge.validate()?;
    Ok(gauge)
}
