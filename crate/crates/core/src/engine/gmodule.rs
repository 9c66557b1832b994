//! Finite-dimensional modules over the group of invertible 2x2 matrices
//! with entries in the residue field, presented through the action of
//! three generators: the torus element `t = diag(gamma, 1)`, the upper
//! unipotent `u = [[1,1],[0,1]]`, and the Weyl element `w = [[0,1],[1,0]]`.
//!
//! Elements are row vectors and generators act on the right.  Everything
//! downstream (Hom spaces, socles, radicals, composition series) only
//! uses the subalgebra generated by the three matrices, so an explicit
//! enumeration of the group is never needed.

use std::sync::Arc;

use super::ff::{reduce_mod_rref, FField, FMat, F};
use crate::error::{Error, Result};
use crate::params::Params;
use crate::weight::Weight;

/// A module given by the matrices of the three group generators.
#[derive(Debug, Clone)]
pub struct GModule {
    pub field: Arc<FField>,
    pub dim: usize,
    /// Generator actions `[t, u, w]`.
    pub gens: Vec<FMat>,
}

fn binom(n: u64, k: u64) -> u64 {
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

impl GModule {
    pub fn trivial(field: &Arc<FField>) -> GModule {
        GModule {
            field: field.clone(),
            dim: 1,
            gens: vec![FMat::identity(field, 1); 3],
        }
    }

    /// The s-th symmetric power of the standard two-dimensional module,
    /// on the monomial basis `X^(s-i) Y^i`.
    pub fn sym_power(field: &Arc<FField>, s: u64) -> GModule {
        let n = (s + 1) as usize;
        let mut t = FMat::zero(field, n, n);
        let mut u = FMat::zero(field, n, n);
        let mut w = FMat::zero(field, n, n);
        for i in 0..n {
            // t: X -> gamma X, Y -> Y.
            t.set(i, i, field.gen_pow(s - i as u64));
            // u: X -> X, Y -> X + Y, so X^(s-i)(X+Y)^i expands binomially.
            for j in 0..=i {
                u.set(i, j, field.from_u64(binom(i as u64, j as u64)));
            }
            // w swaps X and Y.
            w.set(i, n - 1 - i, 1);
        }
        GModule {
            field: field.clone(),
            dim: n,
            gens: vec![t, u, w],
        }
    }

    /// Entrywise Frobenius twist of the action.
    pub fn frobenius_twist(&self, j: usize) -> GModule {
        GModule {
            field: self.field.clone(),
            dim: self.dim,
            gens: self.gens.iter().map(|g| g.frobenius(j)).collect(),
        }
    }

    /// Twist by the d-th power of the determinant character.
    pub fn det_scale(&self, d: u64) -> GModule {
        let f = &self.field;
        // det t = gamma, det u = 1, det w = -1.
        let dt = f.gen_pow(d);
        let dw = f.pow(f.neg(1), d);
        GModule {
            field: f.clone(),
            dim: self.dim,
            gens: vec![
                self.gens[0].scale(dt),
                self.gens[1].clone(),
                self.gens[2].scale(dw),
            ],
        }
    }

    pub fn tensor(&self, other: &GModule) -> GModule {
        GModule {
            field: self.field.clone(),
            dim: self.dim * other.dim,
            gens: self
                .gens
                .iter()
                .zip(&other.gens)
                .map(|(a, b)| a.kronecker(b))
                .collect(),
        }
    }

    /// The irreducible module attached to a Serre weight: the twisted
    /// tensor product of Frobenius twists of symmetric powers, scaled by
    /// a determinant power.  Requires `field.m == params.f`.
    pub fn simple_module(field: &Arc<FField>, params: &Params, w: &Weight) -> GModule {
        assert_eq!(field.m, params.f, "field degree must match f");
        let mut acc = GModule::trivial(field);
        for (j, &s) in w.s.iter().enumerate() {
            acc = acc.tensor(&GModule::sym_power(field, s).frobenius_twist(j));
        }
        acc.det_scale(w.d)
    }

    /// Verifies the order relations of the generators; a cheap sanity
    /// check that a construction is a genuine module.
    pub fn check_relations(&self) -> bool {
        let q = self.field.q;
        let p = self.field.p;
        let id = FMat::identity(&self.field, self.dim);
        self.gens[0].pow(q - 1) == id
            && self.gens[1].pow(p) == id
            && self.gens[2].pow(2) == id
    }
}

/// Basis of the space of module maps `m -> n`: matrices `phi` with
/// `A_g phi = phi B_g` for each generator.
pub fn hom_space(m: &GModule, n: &GModule) -> Vec<FMat> {
    let field = m.field.clone();
    let (dm, dn) = (m.dim, n.dim);
    if dm == 0 || dn == 0 {
        return Vec::new();
    }
    let unknowns = dm * dn;
    let mut constraints = FMat::zero(&field, 3 * unknowns, unknowns);
    let mut row = 0;
    for (a, b) in m.gens.iter().zip(&n.gens) {
        for i in 0..dm {
            for j in 0..dn {
                // (A phi)_{ij} - (phi B)_{ij} = 0.
                for k in 0..dm {
                    let v = a.get(i, k);
                    if v != 0 {
                        let idx = k * dn + j;
                        let cur = constraints.get(row, idx);
                        constraints.set(row, idx, field.add(cur, v));
                    }
                }
                for k in 0..dn {
                    let v = b.get(k, j);
                    if v != 0 {
                        let idx = i * dn + k;
                        let cur = constraints.get(row, idx);
                        constraints.set(row, idx, field.sub(cur, v));
                    }
                }
                row += 1;
            }
        }
    }
    let kernel = constraints.right_kernel();
    (0..kernel.rows)
        .map(|r| {
            let mut phi = FMat::zero(&field, dm, dn);
            for i in 0..dm {
                for j in 0..dn {
                    phi.set(i, j, kernel.get(r, i * dn + j));
                }
            }
            phi
        })
        .collect()
}

/// Submodule spanned by the given rows (must be generator-stable); returns
/// the module on the reduced basis together with the basis matrix.
pub fn submodule_on(m: &GModule, span: &FMat) -> (GModule, FMat) {
    let field = m.field.clone();
    let mut basis = span.clone();
    let pivots = basis.rref();
    let k = pivots.len();
    let basis = FMat::from_rows(
        &field,
        (0..k).map(|i| basis.row_vec(i)).collect(),
        m.dim,
    );
    let gens = m
        .gens
        .iter()
        .map(|g| {
            let mut b = FMat::zero(&field, k, k);
            for i in 0..k {
                let mut img = FMat::from_rows(&field, vec![basis.row_vec(i)], m.dim)
                    .mul(g)
                    .row_vec(0);
                let coeffs = reduce_mod_rref(&basis, &pivots, &mut img);
                debug_assert!(img.iter().all(|&x| x == 0), "span not generator-stable");
                for (j, c) in coeffs.into_iter().enumerate() {
                    b.set(i, j, c);
                }
            }
            b
        })
        .collect();
    (
        GModule {
            field,
            dim: k,
            gens,
        },
        basis,
    )
}

/// Quotient of `m` by the submodule spanned by the given rows; returns the
/// quotient module and the projection matrix (dim x quotient-dim).
pub fn quotient_by(m: &GModule, span: &FMat) -> (GModule, FMat) {
    let field = m.field.clone();
    let mut basis = span.clone();
    let pivots = basis.rref();
    let k = pivots.len();
    let basis = FMat::from_rows(
        &field,
        (0..k).map(|i| basis.row_vec(i)).collect(),
        m.dim,
    );
    let free: Vec<usize> = (0..m.dim).filter(|c| !pivots.contains(c)).collect();
    let qd = free.len();
    // Projection: reduce each standard basis vector modulo the span and
    // read off the free coordinates.
    let mut proj = FMat::zero(&field, m.dim, qd);
    for i in 0..m.dim {
        let mut v = vec![0; m.dim];
        v[i] = 1;
        reduce_mod_rref(&basis, &pivots, &mut v);
        for (jq, &c) in free.iter().enumerate() {
            proj.set(i, jq, v[c]);
        }
    }
    let gens = m
        .gens
        .iter()
        .map(|g| {
            let mut b = FMat::zero(&field, qd, qd);
            for (iq, &c) in free.iter().enumerate() {
                // Image of the class of e_c.
                let mut img = g.row_vec(c);
                reduce_mod_rref(&basis, &pivots, &mut img);
                for (jq, &c2) in free.iter().enumerate() {
                    b.set(iq, jq, img[c2]);
                }
            }
            b
        })
        .collect();
    (
        GModule {
            field,
            dim: qd,
            gens,
        },
        proj,
    )
}

/// Smallest generator-stable subspace containing the given rows.
pub fn generated_submodule(m: &GModule, seed: &FMat) -> FMat {
    let mut basis = seed.row_basis();
    loop {
        let mut rows: Vec<Vec<F>> = (0..basis.rows).map(|i| basis.row_vec(i)).collect();
        for g in &m.gens {
            let img = basis.mul(g);
            rows.extend((0..img.rows).map(|i| img.row_vec(i)));
        }
        let next = FMat::from_rows(&m.field, rows, m.dim).row_basis();
        if next.rows == basis.rows {
            return basis;
        }
        basis = next;
    }
}

/// Radical: the intersection of the kernels of all maps to the candidate
/// simple modules.
pub fn radical_basis(m: &GModule, simples: &[GModule]) -> FMat {
    let field = m.field.clone();
    let mut rows: Vec<Vec<F>> = Vec::new();
    for s in simples {
        for phi in hom_space(m, s) {
            let pt = phi.transpose();
            rows.extend((0..pt.rows).map(|i| pt.row_vec(i)));
        }
    }
    if rows.is_empty() {
        // No maps at all: the radical is everything.
        return FMat::identity(&field, m.dim);
    }
    FMat::from_rows(&field, rows, m.dim).right_kernel().row_basis()
}

/// Socle: the sum of the images of all maps from the candidate simple
/// modules.
pub fn socle_basis(m: &GModule, simples: &[GModule]) -> FMat {
    let field = m.field.clone();
    let mut rows: Vec<Vec<F>> = Vec::new();
    for s in simples {
        for psi in hom_space(s, m) {
            rows.extend((0..psi.rows).map(|i| psi.row_vec(i)));
        }
    }
    if rows.is_empty() {
        return FMat::zero(&field, 0, m.dim);
    }
    FMat::from_rows(&field, rows, m.dim).row_basis()
}

pub fn is_semisimple(m: &GModule, simples: &[GModule]) -> bool {
    radical_basis(m, simples).rows == 0
}

/// Multiplicities of the candidate simples in a semisimple module (the
/// candidates are absolutely irreducible, so a Hom dimension is a
/// multiplicity).
fn layer_multiplicities(layer: &GModule, simples: &[GModule]) -> Vec<usize> {
    simples
        .iter()
        .map(|s| hom_space(s, layer).len())
        .collect()
}

/// Socle series, bottom layer first; each layer lists multiplicities
/// indexed like `simples`.  Fails if the candidate list does not exhaust
/// the composition factors.
pub fn socle_series(m: &GModule, simples: &[GModule]) -> Result<Vec<Vec<usize>>> {
    let mut cur = m.clone();
    let mut layers = Vec::new();
    while cur.dim > 0 {
        let soc = socle_basis(&cur, simples);
        if soc.rows == 0 {
            return Err(Error::Precondition(
                "candidate simple list does not exhaust the composition factors".into(),
            ));
        }
        let (socmod, _) = submodule_on(&cur, &soc);
        layers.push(layer_multiplicities(&socmod, simples));
        cur = quotient_by(&cur, &soc).0;
    }
    Ok(layers)
}

/// Radical series, top layer first.
pub fn radical_series(m: &GModule, simples: &[GModule]) -> Result<Vec<Vec<usize>>> {
    let mut cur = m.clone();
    let mut layers = Vec::new();
    while cur.dim > 0 {
        let rad = radical_basis(&cur, simples);
        if rad.rows == cur.dim {
            return Err(Error::Precondition(
                "candidate simple list does not exhaust the composition factors".into(),
            ));
        }
        let (top, _) = quotient_by(&cur, &rad);
        layers.push(layer_multiplicities(&top, simples));
        cur = submodule_on(&cur, &rad).0;
    }
    Ok(layers)
}

/// Composition-factor multiplicities (indexed like `simples`), certified
/// by a dimension count.
pub fn jh_multiset(m: &GModule, simples: &[GModule]) -> Result<Vec<usize>> {
    let layers = socle_series(m, simples)?;
    let mut mults = vec![0usize; simples.len()];
    for layer in layers {
        for (acc, v) in mults.iter_mut().zip(layer) {
            *acc += v;
        }
    }
    let total: usize = mults
        .iter()
        .zip(simples)
        .map(|(&mu, s)| mu * s.dim)
        .sum();
    if total != m.dim {
        return Err(Error::Precondition(format!(
            "dimension count {total} does not certify the module dimension {}",
            m.dim
        )));
    }
    Ok(mults)
}

/// Whether, inside a module with square-zero radical, the copy of
/// `simples[top]` in the cosocle sits in a nonsplit extension with
/// `simples[bot]` below it.
pub fn has_nonsplit_ext(
    n: &GModule,
    simples: &[GModule],
    top: usize,
    bot: usize,
) -> Result<bool> {
    let field = n.field.clone();
    // K: intersection of the kernels of all maps onto simples other than
    // the top one; its cosocle is the top-isotypic part.
    let mut rows: Vec<Vec<F>> = Vec::new();
    for (i, s) in simples.iter().enumerate() {
        if i == top {
            continue;
        }
        for phi in hom_space(n, s) {
            let pt = phi.transpose();
            rows.extend((0..pt.rows).map(|r| pt.row_vec(r)));
        }
    }
    let k_span = if rows.is_empty() {
        FMat::identity(&field, n.dim)
    } else {
        FMat::from_rows(&field, rows, n.dim).right_kernel()
    };
    let (kmod, _) = submodule_on(n, &k_span);
    if kmod.dim == 0 {
        return Ok(false);
    }
    // Strip every bottom factor other than the requested one.
    let radk = radical_basis(&kmod, simples);
    let (radkmod, radk_basis) = submodule_on(&kmod, &radk);
    let mut c_rows: Vec<Vec<F>> = Vec::new();
    for (i, s) in simples.iter().enumerate() {
        if i == bot {
            continue;
        }
        for psi in hom_space(s, &radkmod) {
            let img = psi.mul(&radk_basis);
            c_rows.extend((0..img.rows).map(|r| img.row_vec(r)));
        }
    }
    let q = if c_rows.is_empty() {
        kmod.clone()
    } else {
        quotient_by(&kmod, &FMat::from_rows(&field, c_rows, kmod.dim)).0
    };
    Ok(!is_semisimple(&q, simples))
}
