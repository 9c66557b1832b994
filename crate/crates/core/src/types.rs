use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::params::{digits, JSet, Params};
use crate::weight::Weight;

/// Kind of a (non-scalar) tame inertial type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TypeKind {
    PrincipalSeries,
    Cuspidal,
}

/// A tame inertial type for `GL_2` over an unramified p-adic field,
/// described by character exponents:
///
/// * principal series: a pair of characters of `F_q^x` with exponents
///   `(a_eta, a_eta2)` modulo `q - 1`, distinct;
/// * cuspidal: a character of `F_{q^2}^x` with exponent `a_psi` modulo
///   `q^2 - 1`, not fixed by the `q`-power map.
///
/// The derived data `(b, c)` and the digit vector of `c` drive all the
/// Jordan-Holder combinatorics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TameType {
    pub params: Params,
    pub kind: TypeKind,
    /// `[a_eta, a_eta2]` for principal series, `[a_psi]` for cuspidal.
    pub exponents: Vec<u64>,
    /// For PS: the unique `0 < c < q-1` with `a_eta - a_eta2 = c`;
    /// for cuspidal: the unique `0 <= c <= q-1` with
    /// `a_psi = (q+1) b + 1 + c mod q^2 - 1`.
    pub c: u64,
    /// Base-p digits of `c` (length f).
    pub c_digits: Vec<u64>,
    /// Cuspidal only (0 for PS): the `b` of the decomposition above.
    pub b: u64,
}

/// Regularity classification of a cuspidal type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CuspidalClass {
    Regular,
    /// No digit of `c` lies strictly between 0 and p-1; exactly one index in
    /// `P_tau` still carries a regular JH factor.
    Irregular { unique_regular_j: JSet },
}

fn delta(cond: bool) -> u64 {
    cond as u64
}

impl TameType {
    pub fn make_ps(params: Params, a_eta: u64, a_eta2: u64) -> Result<TameType> {
        let e = params.e();
        let (a_eta, a_eta2) = (a_eta % e, a_eta2 % e);
        if a_eta == a_eta2 {
            return Err(Error::KindMismatch(
                "characters coincide: scalar types are excluded".into(),
            ));
        }
        let c = (e + a_eta - a_eta2) % e;
        debug_assert!(c > 0 && c < e);
        Ok(TameType {
            params,
            kind: TypeKind::PrincipalSeries,
            exponents: vec![a_eta, a_eta2],
            c_digits: digits(c, params.p, params.f)?,
            c,
            b: 0,
        })
    }

    pub fn make_cuspidal(params: Params, a_psi: u64) -> Result<TameType> {
        let q = params.q();
        let e2 = params.e2();
        let a_psi = a_psi % e2;
        if a_psi % (q + 1) == 0 {
            return Err(Error::FactorsThroughNorm(format!(
                "a_psi = {a_psi} is a multiple of q + 1 = {}",
                q + 1
            )));
        }
        // a_psi = (q+1) b + 1 + c mod q^2-1 with 0 <= b <= q-2, 0 <= c <= q-1:
        // direct search over c, asserting uniqueness.
        let mut found = None;
        for c in 0..=q - 1 {
            let r = (2 * e2 + a_psi - 1 - c) % e2;
            if r % (q + 1) == 0 {
                let b = r / (q + 1);
                if b <= q - 2 {
                    assert!(found.is_none(), "(b, c) decomposition not unique");
                    found = Some((b, c));
                }
            }
        }
        let (b, c) = found.ok_or_else(|| {
            Error::InvalidParameter(format!("no (b, c) decomposition for a_psi = {a_psi}"))
        })?;
        Ok(TameType {
            params,
            kind: TypeKind::Cuspidal,
            exponents: vec![a_psi],
            c_digits: digits(c, params.p, params.f)?,
            c,
            b,
        })
    }

    /// `J_0 = J symm-diff {f-1}` (cuspidal index shift).
    fn j0(&self, j: &JSet) -> JSet {
        j.symmetric_difference(&JSet::from_elems(self.params.f, [self.params.f - 1]))
    }

    /// Membership of `J` in the JH index set `P_tau`.
    pub fn in_p_tau(&self, j: &JSet) -> bool {
        let f = self.params.f;
        if j.width != f {
            return false;
        }
        let left = match self.kind {
            TypeKind::PrincipalSeries => *j,
            TypeKind::Cuspidal => self.j0(j),
        };
        (0..f).all(|i| {
            let im1 = JSet::pred(f, i);
            if j.contains(i) && !left.contains(im1) && self.c_digits[i] == self.params.p - 1 {
                return false;
            }
            if !j.contains(i) && left.contains(im1) && self.c_digits[i] == 0 {
                return false;
            }
            true
        })
    }

    /// The full index set `P_tau`, sorted by bitmask.
    pub fn p_tau(&self) -> Vec<JSet> {
        JSet::all(self.params.f).filter(|j| self.in_p_tau(j)).collect()
    }

    /// The Jordan-Holder factor of the reduced type at index `J in P_tau`.
    pub fn jh_factor(&self, j: &JSet) -> Result<Weight> {
        if !self.in_p_tau(j) {
            return Err(Error::InvalidIndex(format!("{j} is not in P_tau")));
        }
        let params = &self.params;
        let (p, f, e) = (params.p, params.f, params.e());
        let left = match self.kind {
            TypeKind::PrincipalSeries => *j,
            TypeKind::Cuspidal => self.j0(j),
        };
        let mut s = vec![0u64; f];
        let mut t = vec![0u64; f];
        for i in 0..f {
            let im1 = JSet::pred(f, i);
            let ci = self.c_digits[i];
            if j.contains(i) {
                s[i] = p - 1 - ci - delta(!left.contains(im1));
                t[i] = ci + delta(!j.contains(im1));
            } else {
                s[i] = ci - delta(left.contains(im1));
            }
        }
        let twist = match self.kind {
            TypeKind::PrincipalSeries => self.exponents[1] % e,
            TypeKind::Cuspidal => {
                // The twisting character [.]^{(q+1)b + corner} of the
                // quadratic extension has (q+1)b-part factoring through the
                // norm, so on determinants of the base group it contributes
                // exponent b (checked against central characters and against
                // base change to the split side).
                let corner = delta(j.contains(0) && j.contains(f - 1))
                    + delta(!j.contains(0) && !j.contains(f - 1));
                (self.b + corner) % e
            }
        };
        let w = Weight::normalize(params, &t, s)?;
        Ok(w.twist(params, twist))
    }

    /// All `(J, weight)` descriptors, sorted by bitmask of `J`.
    pub fn jh_factors(&self) -> Vec<(JSet, Weight)> {
        self.p_tau()
            .into_iter()
            .map(|j| {
                let w = self.jh_factor(&j).expect("J came from p_tau");
                (j, w)
            })
            .collect()
    }

    /// Regular / irregular classification of a cuspidal type.
    pub fn classify_cuspidal(&self) -> Result<CuspidalClass> {
        if self.kind != TypeKind::Cuspidal {
            return Err(Error::KindMismatch("classification applies to cuspidal types".into()));
        }
        let p = self.params.p;
        if self.c_digits.iter().any(|&ci| ci > 0 && ci < p - 1) {
            return Ok(CuspidalClass::Regular);
        }
        let regular: Vec<JSet> = self
            .p_tau()
            .into_iter()
            .filter(|j| self.jh_factor(j).unwrap().is_regular(&self.params))
            .collect();
        if regular.len() != 1 {
            return Err(Error::TheoremViolation(format!(
                "irregular cuspidal type should have exactly one regular JH factor, found {}",
                regular.len()
            )));
        }
        Ok(CuspidalClass::Irregular { unique_regular_j: regular[0] })
    }

    /// Indices `i` admissible as the start of `J_base` for a regular
    /// cuspidal type (those with `0 < c_i < p-1`).
    pub fn j_base_candidates(&self) -> Vec<usize> {
        (0..self.params.f)
            .filter(|&i| self.c_digits[i] > 0 && self.c_digits[i] < self.params.p - 1)
            .collect()
    }

    /// `J_base` for a given admissible start index: `{i, .., f-1}`.
    pub fn j_base_at(&self, i: usize) -> JSet {
        JSet::from_elems(self.params.f, i..self.params.f)
    }

    /// The base index set normalizing lattice labels: empty for principal
    /// series, `{i, .., f-1}` (smallest admissible `i`) for regular
    /// cuspidal types.  Both it and its complement are asserted to lie in
    /// `P_tau`.
    pub fn j_base(&self) -> Result<JSet> {
        let jb = match self.kind {
            TypeKind::PrincipalSeries => JSet::empty(self.params.f),
            TypeKind::Cuspidal => {
                let i = *self.j_base_candidates().first().ok_or_else(|| {
                    Error::Unsupported(
                        "irregular cuspidal type: lattice normalization undefined".into(),
                    )
                })?;
                self.j_base_at(i)
            }
        };
        if !self.in_p_tau(&jb) || !self.in_p_tau(&jb.complement()) {
            return Err(Error::TheoremViolation(format!(
                "J_base = {jb} or its complement escapes P_tau"
            )));
        }
        Ok(jb)
    }

    /// The relabeling involution `iota(J) = J symm-diff J_base`.
    pub fn iota(&self, j: &JSet) -> Result<JSet> {
        Ok(j.symmetric_difference(&self.j_base()?))
    }

    /// Indices `J` (in relabeled coordinates) with `iota(J) in P_tau`,
    /// sorted by bitmask.  Contains the empty set and the full set.
    pub fn relabeled_indices(&self) -> Result<Vec<JSet>> {
        let jb = self.j_base()?;
        Ok(JSet::all(self.params.f)
            .filter(|j| self.in_p_tau(&j.symmetric_difference(&jb)))
            .collect())
    }

    /// Base change to the unramified quadratic extension.  The result is
    /// always a principal series type over `2f`.
    pub fn bc_type(&self) -> Result<TameType> {
        let params2 = self.params.doubled();
        let q = self.params.q();
        let e2 = self.params.e2();
        match self.kind {
            TypeKind::PrincipalSeries => {
                // Compose both characters with the norm: a -> a (1 + q).
                let a = self.exponents[0] * (1 + q) % e2;
                let a2 = self.exponents[1] * (1 + q) % e2;
                TameType::make_ps(params2, a, a2)
            }
            TypeKind::Cuspidal => {
                // psi tensor psi^q.
                let a = self.exponents[0] % e2;
                let a2 = self.exponents[0] * q % e2;
                TameType::make_ps(params2, a, a2)
            }
        }
    }

    /// Image of a JH index under base change.
    pub fn bc_jset(&self, j: &JSet) -> JSet {
        let f = self.params.f;
        match self.kind {
            TypeKind::PrincipalSeries => {
                JSet::from_elems(2 * f, (0..2 * f).filter(|&i| j.contains(i % f)))
            }
            TypeKind::Cuspidal => JSet::from_elems(
                2 * f,
                (0..2 * f).filter(|&i| if i < f { j.contains(i) } else { !j.contains(i - f) }),
            ),
        }
    }
}

impl Serialize for TameType {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            kind: &'a str,
            p: u64,
            f: usize,
            exponents: &'a [u64],
        }
        let kind = match self.kind {
            TypeKind::PrincipalSeries => "ps",
            TypeKind::Cuspidal => "cusp",
        };
        Repr { kind, p: self.params.p, f: self.params.f, exponents: &self.exponents }
            .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TameType {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            kind: String,
            p: u64,
            f: usize,
            exponents: Vec<u64>,
        }
        let r = Repr::deserialize(de)?;
        let params = Params::new_allowing_p3(r.p, r.f).map_err(D::Error::custom)?;
        match (r.kind.as_str(), r.exponents.as_slice()) {
            ("ps", [a, a2]) => TameType::make_ps(params, *a, *a2).map_err(D::Error::custom),
            ("cusp", [a]) => TameType::make_cuspidal(params, *a).map_err(D::Error::custom),
            _ => Err(D::Error::custom("expected ps with 2 exponents or cusp with 1")),
        }
    }
}

/// All principal series types `(a_eta, a_eta2)` with the given second
/// exponent fixed, ascending in the character difference.
pub fn all_ps_types(params: Params) -> impl Iterator<Item = TameType> {
    let e = params.e();
    (0..e).flat_map(move |a2| {
        (1..e).map(move |c| TameType::make_ps(params, (a2 + c) % e, a2).unwrap())
    })
}

/// All cuspidal types, ascending in `a_psi`.
pub fn all_cuspidal_types(params: Params) -> impl Iterator<Item = TameType> {
    let q = params.q();
    (0..params.e2()).filter(move |a| a % (q + 1) != 0).map(move |a| {
        TameType::make_cuspidal(params, a).unwrap()
    })
}

/// One principal series type per digit class (`a_eta2 = 0`): the JH index
/// combinatorics (P_tau, J_base, chains) depend only on the digits of `c`.
pub fn ps_digit_classes(params: Params) -> impl Iterator<Item = TameType> {
    (1..params.e()).map(move |c| TameType::make_ps(params, c, 0).unwrap())
}

/// One cuspidal type per digit class (`b = 0`, so `a_psi = 1 + c`).
pub fn cuspidal_digit_classes(params: Params) -> impl Iterator<Item = TameType> {
    (0..params.q()).map(move |c| TameType::make_cuspidal(params, 1 + c).unwrap())
}

/// Principal series types having `w` as the JH factor at index `J`
/// (inversion of the JH formulas; at most one solution).
pub fn ps_types_with_factor(params: Params, w: &Weight, j: &JSet) -> Vec<TameType> {
    invert_jh(params, w, j, TypeKind::PrincipalSeries)
}

/// Cuspidal types having `w` as the JH factor at index `J` (at most two).
pub fn cuspidal_types_with_factor(params: Params, w: &Weight, j: &JSet) -> Vec<TameType> {
    invert_jh(params, w, j, TypeKind::Cuspidal)
}

fn invert_jh(params: Params, w: &Weight, j: &JSet, kind: TypeKind) -> Vec<TameType> {
    let (p, f, e) = (params.p, params.f, params.e());
    let left = match kind {
        TypeKind::PrincipalSeries => *j,
        TypeKind::Cuspidal => {
            j.symmetric_difference(&JSet::from_elems(f, [f - 1]))
        }
    };
    // Solve the s-formulas for the digits of c.
    let mut c_digits = vec![0u64; f];
    for i in 0..f {
        let im1 = JSet::pred(f, i);
        let ci = if j.contains(i) {
            let x = p - 1 - delta(!left.contains(im1));
            if w.s[i] > x {
                return Vec::new();
            }
            x - w.s[i]
        } else {
            w.s[i] + delta(left.contains(im1))
        };
        if ci > p - 1 {
            return Vec::new();
        }
        c_digits[i] = ci;
    }
    let c = crate::params::undigits(&c_digits, p);
    let tsum: u64 = (0..f)
        .filter(|&i| j.contains(i))
        .map(|i| (c_digits[i] + delta(!j.contains(JSet::pred(f, i)))) * params.ppow(i) % e)
        .sum::<u64>()
        % e;
    let mut out = Vec::new();
    match kind {
        TypeKind::PrincipalSeries => {
            if c == 0 || c >= e {
                return Vec::new();
            }
            let a2 = (2 * e + w.d - tsum % e) % e;
            if let Ok(t) = TameType::make_ps(params, (a2 + c) % e, a2) {
                out.push(t);
            }
        }
        TypeKind::Cuspidal => {
            if c > params.q() - 1 {
                return Vec::new();
            }
            let corner = delta(j.contains(0) && j.contains(f - 1))
                + delta(!j.contains(0) && !j.contains(f - 1));
            // b = d - tsum - corner mod q-1 (unique in [0, q-2]).
            let b = (3 * e + w.d - tsum % e - corner) % e;
            let a_psi = ((params.q() + 1) * b + 1 + c) % params.e2();
            if let Ok(t) = TameType::make_cuspidal(params, a_psi) {
                out.push(t);
            }
        }
    }
    // Keep only genuine solutions.
    out.retain(|t| t.in_p_tau(j) && t.jh_factor(j).ok().as_ref() == Some(w));
    out
}
