//! Monomial-ideal calculus in the special-fibre ring
//! `R = F[X'_j, Y'_j : j in Delta] / (X'_j Y'_j)`.
//!
//! The irreducible components of `Spec R` are indexed by the subsets `J'`
//! in the window `W = [J'_min, J'_max]`; the component at `J'` is cut out
//! by `X'_j = 0` (`j in J' \ J'_min`) and `Y'_j = 0` (`j in J'_max \ J'`).
//! Everything here is exact arithmetic with squarefree-friendly monomial
//! ideals subject to the relation "X and Y at the same index multiply to
//! zero".

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::params::JSet;

/// The ambient ring: the window `[J'_min, J'_max]` whose difference set
/// `Delta` carries the variable pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingSpec {
    pub j_min_prime: JSet,
    pub j_max_prime: JSet,
}

impl RingSpec {
    pub fn new(j_min_prime: JSet, j_max_prime: JSet) -> Result<Self> {
        if j_min_prime.width != j_max_prime.width || !j_min_prime.is_subset_of(&j_max_prime) {
            return Err(Error::InvalidParameter(format!(
                "window bounds must be nested: {j_min_prime:?}, {j_max_prime:?}"
            )));
        }
        Ok(RingSpec {
            j_min_prime,
            j_max_prime,
        })
    }

    /// The standard ring with window the full power set of `{0..delta-1}`.
    pub fn standard(delta: usize) -> Result<Self> {
        RingSpec::new(JSet::empty(delta), JSet::full(delta))
    }

    pub fn delta(&self) -> JSet {
        self.j_max_prime.minus(&self.j_min_prime)
    }

    /// Members of the window `W`, sorted.
    pub fn window(&self) -> Vec<JSet> {
        JSet::interval(&self.j_min_prime, &self.j_max_prime)
    }

    pub fn in_window(&self, j: &JSet) -> bool {
        self.j_min_prime.is_subset_of(j) && j.is_subset_of(&self.j_max_prime)
    }
}

/// Axis of a variable pair at an index of `Delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, fmtr: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::X => write!(fmtr, "X"),
            Axis::Y => write!(fmtr, "Y"),
        }
    }
}

/// A nonzero monomial in normal form: at each index of `Delta` at most one
/// axis appears (a product carrying both axes at an index is zero in the
/// ring and is represented by `None` at the API level).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    ring: RingSpec,
    /// index -> (axis, exponent >= 1), sorted by index.
    exps: BTreeMap<usize, (Axis, u32)>,
}

impl Monomial {
    pub fn one(ring: RingSpec) -> Self {
        Monomial {
            ring,
            exps: BTreeMap::new(),
        }
    }

    pub fn var(ring: RingSpec, axis: Axis, j: usize, exp: u32) -> Result<Self> {
        if !ring.delta().contains(j) {
            return Err(Error::InvalidIndex(format!(
                "index {j} is not in Delta = {:?}",
                ring.delta()
            )));
        }
        let mut exps = BTreeMap::new();
        if exp > 0 {
            exps.insert(j, (axis, exp));
        }
        Ok(Monomial { ring, exps })
    }

    /// Product of single variables, e.g. `prod_vars(ring, X, J)`.
    pub fn prod_vars(ring: RingSpec, axis: Axis, js: &JSet) -> Result<Self> {
        let mut m = Monomial::one(ring);
        for j in js.iter() {
            m = m
                .mul(&Monomial::var(ring, axis, j, 1)?)
                .ok_or_else(|| Error::InvalidParameter("zero product".into()))?;
        }
        Ok(m)
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.values().map(|(_, e)| e).sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.exps.values().all(|(_, e)| *e == 1)
    }

    /// Product in the ring; `None` when the factors carry opposite axes at
    /// a common index (the relation `X'_j Y'_j = 0`).
    pub fn mul(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = self.exps.clone();
        for (&j, &(axis, e)) in &other.exps {
            match exps.get_mut(&j) {
                None => {
                    exps.insert(j, (axis, e));
                }
                Some((a, old)) if *a == axis => *old += e,
                Some(_) => return None,
            }
        }
        Some(Monomial {
            ring: self.ring,
            exps,
        })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().all(|(j, (axis, e))| {
            matches!(other.exps.get(j), Some((a, e2)) if a == axis && e2 >= e)
        })
    }

    /// Least common multiple; `None` when it vanishes (opposite axes at a
    /// common index).
    pub fn lcm(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = self.exps.clone();
        for (&j, &(axis, e)) in &other.exps {
            match exps.get_mut(&j) {
                None => {
                    exps.insert(j, (axis, e));
                }
                Some((a, old)) if *a == axis => *old = (*old).max(e),
                Some(_) => return None,
            }
        }
        Some(Monomial {
            ring: self.ring,
            exps,
        })
    }

    /// The quotient `self / gcd(self, other)` taken axis-compatibly: at an
    /// index where the axes agree, exponents subtract (floored at zero);
    /// other indices of `self` are kept.  Used for colon ideals.
    fn div_by_gcd(&self, other: &Monomial) -> Monomial {
        let mut exps = BTreeMap::new();
        for (&j, &(axis, e)) in &self.exps {
            let rem = match other.exps.get(&j) {
                Some(&(a, e2)) if a == axis => e.saturating_sub(e2),
                _ => e,
            };
            if rem > 0 {
                exps.insert(j, (axis, rem));
            }
        }
        Monomial {
            ring: self.ring,
            exps,
        }
    }

    /// Whether the two monomials have opposite axes at some common index
    /// (so their product is zero in the ring).
    fn clashes_with(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .any(|(j, (axis, _))| matches!(other.exps.get(j), Some((a, _)) if a != axis))
    }

    /// Canonical sort key: degree first, then axis-major lexicographic.
    fn sort_key(&self) -> (u32, Vec<(Axis, usize, u32)>) {
        let mut vars: Vec<(Axis, usize, u32)> =
            self.exps.iter().map(|(&j, &(a, e))| (a, j, e)).collect();
        vars.sort();
        (self.total_degree(), vars)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, fmtr: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(fmtr, "1");
        }
        let mut vars: Vec<(Axis, usize, u32)> =
            self.exps.iter().map(|(&j, &(a, e))| (a, j, e)).collect();
        vars.sort();
        let parts: Vec<String> = vars
            .iter()
            .map(|(a, j, e)| {
                if *e == 1 {
                    format!("{a}'_{j}")
                } else {
                    format!("{a}'_{j}^{e}")
                }
            })
            .collect();
        write!(fmtr, "{}", parts.join("*"))
    }
}

/// A monomial ideal given by its unique minimal generating antichain,
/// canonically sorted.  The zero ideal has no generators; the unit ideal is
/// generated by 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIdeal {
    ring: RingSpec,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn zero(ring: RingSpec) -> Self {
        MonomialIdeal { ring, gens: vec![] }
    }

    pub fn unit(ring: RingSpec) -> Self {
        MonomialIdeal {
            ring,
            gens: vec![Monomial::one(ring)],
        }
    }

    /// Normalizes a generating set to the minimal antichain.
    pub fn from_gens(ring: RingSpec, gens: Vec<Monomial>) -> Result<Self> {
        for g in &gens {
            if g.ring() != ring {
                return Err(Error::RingMismatch("monomials from different rings".into()));
            }
        }
        let mut kept: Vec<Monomial> = Vec::new();
        let mut sorted = gens;
        sorted.sort_by_key(|m| m.sort_key());
        sorted.dedup();
        for g in sorted {
            if !kept.iter().any(|k| k.divides(&g)) {
                kept.push(g);
            }
        }
        Ok(MonomialIdeal { ring, gens: kept })
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_one()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    pub fn contains_ideal(&self, other: &MonomialIdeal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn sum(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch("monomials from different rings".into()));
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        MonomialIdeal::from_gens(self.ring, gens)
    }

    /// Intersection via pairwise least common multiples; an lcm that
    /// vanishes in the ring contributes nothing.
    pub fn intersect(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch("monomials from different rings".into()));
        }
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                if let Some(m) = a.lcm(b) {
                    gens.push(m);
                }
            }
        }
        MonomialIdeal::from_gens(self.ring, gens)
    }

    /// The colon ideal `(I : m) = {n : n m in I}`.  It always contains the
    /// annihilator of `m` (the opposite-axis variables at the support of
    /// `m`); generators compatible with `m` contribute `g / gcd(g, m)`.
    pub fn colon(&self, m: &Monomial) -> Result<MonomialIdeal> {
        if self.ring != m.ring() {
            return Err(Error::RingMismatch("monomials from different rings".into()));
        }
        let mut gens = Vec::new();
        for (&j, &(axis, _)) in &m.exps {
            let opposite = if axis == Axis::X { Axis::Y } else { Axis::X };
            gens.push(Monomial::var(self.ring, opposite, j, 1)?);
        }
        for g in &self.gens {
            if !g.clashes_with(m) {
                gens.push(g.div_by_gcd(m));
            }
        }
        MonomialIdeal::from_gens(self.ring, gens)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.to_string()).collect()
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, fmtr: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(fmtr, "(0)");
        }
        write!(fmtr, "({})", self.to_strings().join(", "))
    }
}

/// The prime ideal cutting out the component at `J'`: generated by `X'_j`
/// for `j in J' \ J'_min` and `Y'_j` for `j in J'_max \ J'`.
pub fn component_ideal(ring: RingSpec, j: &JSet) -> Result<MonomialIdeal> {
    if !ring.in_window(j) {
        return Err(Error::InvalidIndex(format!(
            "{j:?} is outside the window of the ring"
        )));
    }
    let mut gens = Vec::new();
    for i in j.minus(&ring.j_min_prime).iter() {
        gens.push(Monomial::var(ring, Axis::X, i, 1)?);
    }
    for i in ring.j_max_prime.minus(j).iter() {
        gens.push(Monomial::var(ring, Axis::Y, i, 1)?);
    }
    MonomialIdeal::from_gens(ring, gens)
}

/// The radical ideal of the union of components indexed by a family: the
/// intersection of the component ideals.  The empty family yields the unit
/// ideal.
pub fn ideal_of_family(ring: RingSpec, family: &[JSet]) -> Result<MonomialIdeal> {
    let mut acc = MonomialIdeal::unit(ring);
    for j in family {
        acc = acc.intersect(&component_ideal(ring, j)?)?;
    }
    Ok(acc)
}

/// Outcome of a verification: failures carry human-readable witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub pass: bool,
    pub failures: Vec<String>,
}

impl CheckReport {
    fn ok() -> Self {
        CheckReport {
            pass: true,
            failures: vec![],
        }
    }

    fn record(&mut self, cond: bool, witness: impl FnOnce() -> String) {
        if !cond {
            self.pass = false;
            self.failures.push(witness());
        }
    }
}

/// The face `F(J1, J2) = {J' in W : J1 <= J' <= J2}` and its punctured
/// variant `F(J1, J2) \ {J1}`.
pub fn face(ring: RingSpec, j1: &JSet, j2: &JSet) -> Result<Vec<JSet>> {
    if !ring.in_window(j1) || !ring.in_window(j2) || !j1.is_subset_of(j2) {
        return Err(Error::Precondition(format!(
            "face bounds must be nested window members: {j1:?}, {j2:?}"
        )));
    }
    Ok(JSet::interval(j1, j2))
}

/// Verifies, for a nested pair `J1 <= J2` in the window, that
/// `I_{F(J1,J2)^x} = I_{F(J1,J2)} + (prod_{j in J2\J1} X'_j)` and that the
/// annihilator of that product modulo `I_{F(J1,J2)}` is the component
/// ideal at `J1`.
pub fn check_lemma_faces(ring: RingSpec, j1: &JSet, j2: &JSet) -> Result<CheckReport> {
    let f = face(ring, j1, j2)?;
    let fx: Vec<JSet> = f.iter().copied().filter(|j| j != j1).collect();
    let i_f = ideal_of_family(ring, &f)?;
    let i_fx = ideal_of_family(ring, &fx)?;
    let gen = Monomial::prod_vars(ring, Axis::X, &j2.minus(j1))?;
    let mut report = CheckReport::ok();
    let sum = i_f.sum(&MonomialIdeal::from_gens(ring, vec![gen.clone()])?)?;
    report.record(sum == i_fx, || {
        format!("I_Fx = {i_fx} but I_F + ({gen}) = {sum}")
    });
    let ann = i_f.colon(&gen)?;
    let comp = component_ideal(ring, j1)?;
    report.record(ann == comp, || {
        format!("(I_F : {gen}) = {ann} but the component ideal at {j1:?} is {comp}")
    });
    Ok(report)
}

/// Whether a family is an interval of the window (closed under
/// betweenness).
pub fn is_interval(ring: RingSpec, family: &[JSet]) -> bool {
    family.iter().all(|a| ring.in_window(a))
        && family.iter().all(|a| {
            family.iter().all(|b| {
                !a.is_subset_of(b)
                    || JSet::interval(a, b).iter().all(|j| family.contains(j))
            })
        })
}

/// The maximal elements of a family.
pub fn maximal_elements(family: &[JSet]) -> Vec<JSet> {
    family
        .iter()
        .copied()
        .filter(|a| !family.iter().any(|b| a != b && a.is_subset_of(b)))
        .collect()
}

/// The minimal elements of a family.
pub fn minimal_elements(family: &[JSet]) -> Vec<JSet> {
    family
        .iter()
        .copied()
        .filter(|a| !family.iter().any(|b| a != b && b.is_subset_of(a)))
        .collect()
}

/// The cap of a capped interval: its unique maximal element.
pub fn cap_of(ring: RingSpec, family: &[JSet]) -> Result<JSet> {
    if family.is_empty() || !is_interval(ring, family) {
        return Err(Error::Precondition(
            "family must be a nonempty interval of the window".into(),
        ));
    }
    let maxes = maximal_elements(family);
    if maxes.len() != 1 {
        return Err(Error::Precondition(format!(
            "family has {} maximal elements; a capped interval has exactly one",
            maxes.len()
        )));
    }
    Ok(maxes[0])
}

/// Verifies `I_{F1} + I_{F2} = I_{F1 cap F2}` for two capped intervals
/// sharing a common cap.
pub fn check_lemma_ideals(ring: RingSpec, fam1: &[JSet], fam2: &[JSet]) -> Result<CheckReport> {
    let cap1 = cap_of(ring, fam1)?;
    let cap2 = cap_of(ring, fam2)?;
    if cap1 != cap2 {
        return Err(Error::Precondition(format!(
            "caps differ: {cap1:?} vs {cap2:?}"
        )));
    }
    let meet: Vec<JSet> = fam1
        .iter()
        .copied()
        .filter(|j| fam2.contains(j))
        .collect();
    let sum = ideal_of_family(ring, fam1)?.sum(&ideal_of_family(ring, fam2)?)?;
    let target = ideal_of_family(ring, &meet)?;
    let mut report = CheckReport::ok();
    report.record(sum == target, || {
        format!("I_1 + I_2 = {sum} but I of the intersection is {target}")
    });
    Ok(report)
}

/// Result of replaying the cyclicity induction on a capped interval: the
/// verified annihilator and the number of induction steps checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicityReport {
    pub annihilator: MonomialIdeal,
    pub steps: usize,
}

/// Replays, at the level of ideal identities, the induction showing that
/// the module attached to a capped interval is cyclic with annihilator
/// `I_family`: base case of at most two members; a unique minimal element
/// reduces to the face identities; two minimal elements reduce to the
/// fibre-product identities.  Any failed identity is a theorem violation;
/// a family with two maximal elements is rejected as a precondition
/// failure (such a module admits a surjection onto a direct sum of two
/// simples and cannot be cyclic).
pub fn cyclicity_induction_check(ring: RingSpec, family: &[JSet]) -> Result<CyclicityReport> {
    let cap = cap_of(ring, family)?;
    let annihilator = ideal_of_family(ring, family)?;
    if family.len() <= 2 {
        return Ok(CyclicityReport {
            annihilator,
            steps: 1,
        });
    }
    let mins = minimal_elements(family);
    let mut steps = 1;
    if mins.len() == 1 {
        // A capped interval with a unique minimal element is exactly the
        // face F(J0, cap); the quotient identity is the face lemma plus
        // one instance of the capped-ideals lemma.
        let j0 = mins[0];
        let rest: Vec<JSet> = family.iter().copied().filter(|j| *j != j0).collect();
        let f = face(ring, &j0, &cap)?;
        let mut sorted_family = family.to_vec();
        sorted_family.sort();
        let mut sorted_face = f.clone();
        sorted_face.sort();
        if sorted_family != sorted_face {
            return Err(Error::TheoremViolation(
                "capped interval with unique minimum is not the full face".into(),
            ));
        }
        let i_rest = ideal_of_family(ring, &rest)?;
        let i_face = ideal_of_family(ring, &f)?;
        if i_rest.intersect(&i_face)? != annihilator {
            return Err(Error::TheoremViolation(
                "face intersection identity failed".into(),
            ));
        }
        let faces = check_lemma_faces(ring, &j0, &cap)?;
        if !faces.pass {
            return Err(Error::TheoremViolation(format!(
                "face lemma failed inside the induction: {:?}",
                faces.failures
            )));
        }
        steps += cyclicity_induction_check(ring, &rest)?.steps;
    } else {
        // Remove two distinct minimal elements and glue along the
        // fibre product: both ideal identities must hold.
        let (j1, j2) = (mins[0], mins[1]);
        let fam1: Vec<JSet> = family.iter().copied().filter(|j| *j != j1).collect();
        let fam2: Vec<JSet> = family.iter().copied().filter(|j| *j != j2).collect();
        let i1 = ideal_of_family(ring, &fam1)?;
        let i2 = ideal_of_family(ring, &fam2)?;
        let meet: Vec<JSet> = fam1.iter().copied().filter(|j| fam2.contains(j)).collect();
        if i1.sum(&i2)? != ideal_of_family(ring, &meet)? {
            return Err(Error::TheoremViolation(
                "fibre-product sum identity failed".into(),
            ));
        }
        if i1.intersect(&i2)? != annihilator {
            return Err(Error::TheoremViolation(
                "fibre-product intersection identity failed".into(),
            ));
        }
        steps += cyclicity_induction_check(ring, &fam1)?.steps;
        steps += cyclicity_induction_check(ring, &fam2)?.steps;
        steps += cyclicity_induction_check(ring, &meet)?.steps;
    }
    Ok(CyclicityReport { annihilator, steps })
}

/// Enumerates all capped intervals of the window (nonempty intervals with
/// a unique maximal element).  Only intended for small `|Delta|`.
pub fn capped_intervals(ring: RingSpec) -> Vec<Vec<JSet>> {
    let window = ring.window();
    let n = window.len();
    assert!(n <= 16, "window too large to enumerate families");
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let family: Vec<JSet> = (0..n)
            .filter(|i| (mask >> i) & 1 == 1)
            .map(|i| window[i])
            .collect();
        if is_interval(ring, &family) && maximal_elements(&family).len() == 1 {
            out.push(family);
        }
    }
    out
}
