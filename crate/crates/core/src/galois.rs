use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{digits, JSet, Params};
use crate::types::{
    cuspidal_types_with_factor, ps_types_with_factor, TameType,
};
use crate::weight::Weight;

/// A semisimple two-dimensional mod-p representation of the local Galois
/// group, recorded through its restriction to inertia:
///
/// * `ReducibleSS`: direct sum of two characters, with exponents `(m1, m2)`
///   of the level-`f` fundamental character, each mod `q - 1`;
/// * `Irreducible`: induced from the quadratic unramified extension, with
///   exponent `M` of the level-`2f` fundamental character mod `q^2 - 1`
///   (identified with its partner `qM`).
///
/// Unramified twists are dropped throughout: weight sets depend only on
/// this inertial data.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RhoBar {
    pub params: Params,
    pub shape: RhoShape,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum RhoShape {
    #[serde(rename = "red")]
    ReducibleSS { m1: u64, m2: u64 },
    #[serde(rename = "irr")]
    Irreducible { m: u64 },
}

/// Witness returned by `is_generic`: the digit vector `r` and, for the
/// irreducible case, the twist exponent `k` used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericWitness {
    pub r: Vec<u64>,
    pub twist: u64,
}

/// The window `[J_min, J_max]` of JH indices of a tame type carrying the
/// modular weights of a fixed generic parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightInterval {
    pub j_min: JSet,
    pub j_max: JSet,
}

impl RhoBar {
    pub fn reducible(params: Params, m1: u64, m2: u64) -> RhoBar {
        let e = params.e();
        RhoBar { params, shape: RhoShape::ReducibleSS { m1: m1 % e, m2: m2 % e } }
    }

    pub fn irreducible(params: Params, m: u64) -> Result<RhoBar> {
        let m = m % params.e2();
        if m % (params.q() + 1) == 0 {
            return Err(Error::InvalidParameter(format!(
                "M = {m} is fixed by the q-power map: not irreducible"
            )));
        }
        Ok(RhoBar { params, shape: RhoShape::Irreducible { m } })
    }

    /// Genericity test, with a witness digit vector when it holds.
    pub fn is_generic(&self) -> Option<GenericWitness> {
        let (p, f) = (self.params.p, self.params.f);
        match self.shape {
            RhoShape::ReducibleSS { m1, m2 } => {
                let e = self.params.e();
                for diff in [(e + m1 - m2) % e, (e + m2 - m1) % e] {
                    // diff = sum (r_j + 1) p^j with all digits in [1, p-2];
                    // the sum is < q - 1, so the lift's base-p digits decide.
                    let dg = digits(diff, p, f).unwrap();
                    if dg.iter().all(|&x| (1..=p - 2).contains(&x)) {
                        let r: Vec<u64> = dg.iter().map(|&x| x - 1).collect();
                        if r.iter().any(|&x| x != 0) && r.iter().any(|&x| x != p - 3) {
                            return Some(GenericWitness { r, twist: 0 });
                        }
                    }
                }
                None
            }
            RhoShape::Irreducible { m } => {
                let e2 = self.params.e2();
                let q = self.params.q();
                for k in 0..self.params.e() {
                    for base in [m, m * q % e2] {
                        let x = (base + (1 + q) * k) % e2;
                        if x >= q {
                            continue;
                        }
                        let dg = digits(x, p, f).unwrap();
                        let ok = (2..=p - 1).contains(&dg[0])
                            && dg[1..].iter().all(|&y| (1..=p - 2).contains(&y));
                        if ok {
                            let r: Vec<u64> = dg.iter().map(|&y| y - 1).collect();
                            return Some(GenericWitness { r, twist: k });
                        }
                    }
                }
                None
            }
        }
    }

    /// The set of Serre weights attached to this (semisimple) parameter,
    /// enumerated over splitting subsets `K` and symmetric-power vectors.
    pub fn weight_set(&self) -> BTreeSet<Weight> {
        let params = &self.params;
        let (p, f, e) = (params.p, params.f, params.e());
        let mut out = BTreeSet::new();
        match self.shape {
            RhoShape::ReducibleSS { m1, m2 } => {
                for k in JSet::all(f) {
                    for svec in svectors(p, f) {
                        let sk: u64 = k
                            .iter()
                            .map(|j| (svec[j] + 1) * params.ppow(j) % e)
                            .sum::<u64>()
                            % e;
                        let skc: u64 = k
                            .complement()
                            .iter()
                            .map(|j| (svec[j] + 1) * params.ppow(j) % e)
                            .sum::<u64>()
                            % e;
                        let d = (e + m1 % e - sk) % e;
                        if (d + skc) % e == m2 % e {
                            out.insert(Weight { s: svec.clone(), d });
                        }
                    }
                }
            }
            RhoShape::Irreducible { m } => {
                let q = params.q();
                let e2 = params.e2();
                // Antisymmetric subsets of {0, .., 2f-1}: i in K iff i+f not in K.
                for bits in JSet::all(f) {
                    let k = JSet::from_elems(
                        2 * f,
                        (0..2 * f).filter(|&i| {
                            if i < f { bits.contains(i) } else { !bits.contains(i - f) }
                        }),
                    );
                    for svec in svectors(p, f) {
                        let sk: u64 = k
                            .iter()
                            .map(|i| (svec[i % f] + 1) * params.p.pow(i as u32) % e2)
                            .sum::<u64>()
                            % e2;
                        let skc: u64 = k
                            .complement()
                            .iter()
                            .map(|i| (svec[i % f] + 1) * params.p.pow(i as u32) % e2)
                            .sum::<u64>()
                            % e2;
                        // Need (1+q) d = m - sk mod q^2 - 1 (then check partner).
                        let a = (e2 + m % e2 - sk) % e2;
                        if a % (q + 1) != 0 {
                            continue;
                        }
                        let d = (a / (q + 1)) % e;
                        if ((1 + q) * d + skc) % e2 == m * q % e2 {
                            out.insert(Weight { s: svec.clone(), d });
                        }
                    }
                }
            }
        }
        out
    }

    /// Restriction to the unramified quadratic extension (always reducible
    /// semisimple over `2f`).
    pub fn restrict(&self) -> RhoBar {
        let params2 = self.params.doubled();
        let q = self.params.q();
        let e2 = self.params.e2();
        match self.shape {
            RhoShape::ReducibleSS { m1, m2 } => {
                RhoBar::reducible(params2, (1 + q) * m1 % e2, (1 + q) * m2 % e2)
            }
            RhoShape::Irreducible { m } => RhoBar::reducible(params2, m % e2, m * q % e2),
        }
    }

    pub fn is_reducible(&self) -> bool {
        matches!(self.shape, RhoShape::ReducibleSS { .. })
    }
}

fn svectors(p: u64, f: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..f {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Whether two weights admit (one-dimensional, in both directions)
/// extensions between them.
pub fn ext_exists(params: &Params, w1: &Weight, w2: &Weight) -> Result<bool> {
    let (p, f, e) = (params.p, params.f, params.e());
    if f == 1 {
        let (s, s2) = (w1.s[0], w2.s[0]);
        if s == p - 1 || s2 == p - 1 {
            return Err(Error::Unsupported(
                "the extension criterion at f = 1 excludes s = p-1".into(),
            ));
        }
        // s2 = p - 2 - s +/- 1 and d2 - d = s + 1 - p (1 +/- 1)/2 mod p - 1.
        for sign in [1i64, -1] {
            let target = p as i64 - 2 - s as i64 + sign;
            if target < 0 || target >= p as i64 || s2 as i64 != target {
                continue;
            }
            let rhs = s as i64 + 1 - p as i64 * (1 + sign) / 2;
            let lhs = w2.d as i64 - w1.d as i64;
            if (lhs - rhs).rem_euclid(e as i64) == 0 {
                return Ok(true);
            }
        }
        return Ok(false);
    }
    for k in 0..f {
        let k1 = (k + 1) % f;
        for sign in [1i64, -1] {
            let mut ok = (0..f)
                .filter(|&j| j != k && j != k1)
                .all(|j| w1.s[j] == w2.s[j]);
            ok &= w2.s[k] as i64 == p as i64 - 2 - w1.s[k] as i64;
            ok &= w2.s[k1] as i64 == w1.s[k1] as i64 + sign;
            if !ok {
                continue;
            }
            let rhs = params.ppow(k) as i64 * (w1.s[k] as i64 + 1)
                - params.ppow(k) as i64 * p as i64 * (1 + sign) / 2;
            let lhs = w2.d as i64 - w1.d as i64;
            if (lhs - rhs).rem_euclid(e as i64) == 0 {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// The set `A = {J in P_tau : jh_factor(tau, J) modular for rhobar}` is
/// empty or a full sub-interval of subsets; returns that interval.
pub fn weight_interval(rho: &RhoBar, tau: &TameType) -> Result<Option<WeightInterval>> {
    let dset = rho.weight_set();
    let hits: Vec<JSet> = tau
        .jh_factors()
        .into_iter()
        .filter(|(_, w)| dset.contains(w))
        .map(|(j, _)| j)
        .collect();
    if hits.is_empty() {
        return Ok(None);
    }
    let f = tau.params.f;
    let mut j_min = JSet::full(f);
    let mut j_max = JSet::empty(f);
    for j in &hits {
        j_min = j_min.intersection(j);
        j_max = j_max.union(j);
    }
    let interval = JSet::interval(&j_min, &j_max);
    let hit_set: BTreeSet<JSet> = hits.into_iter().collect();
    let int_set: BTreeSet<JSet> = interval.into_iter().collect();
    if hit_set != int_set {
        return Err(Error::TheoremViolation(format!(
            "modular JH indices of {tau:?} do not form an interval: {hit_set:?}"
        )));
    }
    if !int_set.iter().all(|j| tau.in_p_tau(j)) {
        return Err(Error::TheoremViolation(format!(
            "interval [{j_min}, {j_max}] escapes P_tau for {tau:?}"
        )));
    }
    Ok(Some(WeightInterval { j_min, j_max }))
}

/// Candidate types containing `w` among their JH factors, in deterministic
/// order; cuspidal types first when `cusp_first` is set.
fn candidates_with_weight(params: Params, w: &Weight, cusp_first: bool) -> Vec<TameType> {
    let mut ps = Vec::new();
    let mut cusp = Vec::new();
    for j in JSet::all(params.f) {
        ps.extend(ps_types_with_factor(params, w, &j));
        cusp.extend(cuspidal_types_with_factor(params, w, &j));
    }
    let key = |t: &TameType| (t.exponents.clone(),);
    ps.sort_by_key(key);
    ps.dedup();
    cusp.sort_by_key(key);
    cusp.dedup();
    if cusp_first {
        cusp.extend(ps);
        cusp
    } else {
        ps.extend(cusp);
        ps
    }
}

fn modular_jh(tau: &TameType, dset: &BTreeSet<Weight>) -> Vec<Weight> {
    tau.jh_factors().into_iter().map(|(_, w)| w).filter(|w| dset.contains(w)).collect()
}

/// A non-scalar tame type whose JH factors meet the weight set of `rho`
/// exactly in `{w}`.
pub fn find_type_isolating(rho: &RhoBar, w: &Weight) -> Result<TameType> {
    let dset = rho.weight_set();
    if !dset.contains(w) {
        return Err(Error::Precondition(format!("{w:?} is not a modular weight")));
    }
    for tau in candidates_with_weight(rho.params, w, !rho.is_reducible()) {
        let hits = modular_jh(&tau, &dset);
        if hits.len() == 1 && hits[0] == *w {
            return Ok(tau);
        }
    }
    Err(Error::NotFound("no type isolates the given weight".into()))
}

/// A tame type whose JH factors contain the whole weight set of `rho`.
pub fn find_type_covering(rho: &RhoBar) -> Result<TameType> {
    let dset = rho.weight_set();
    let Some(w0) = dset.iter().next().cloned() else {
        return Err(Error::Precondition("empty weight set".into()));
    };
    for tau in candidates_with_weight(rho.params, &w0, !rho.is_reducible()) {
        let jh: BTreeSet<Weight> = tau.jh_factors().into_iter().map(|(_, w)| w).collect();
        if dset.iter().all(|w| jh.contains(w)) {
            return Ok(tau);
        }
    }
    Err(Error::NotFound("no type covers the weight set".into()))
}

/// A tame type whose JH factors meet the weight set of `rho` exactly in the
/// adjacent pair `{w1, w2}`.
pub fn find_type_for_pair(rho: &RhoBar, w1: &Weight, w2: &Weight) -> Result<TameType> {
    let dset = rho.weight_set();
    if !dset.contains(w1) || !dset.contains(w2) {
        return Err(Error::Precondition("both weights must be modular".into()));
    }
    if !ext_exists(&rho.params, w1, w2)? {
        return Err(Error::Precondition("weights admit no extensions".into()));
    }
    for tau in candidates_with_weight(rho.params, w1, !rho.is_reducible()) {
        let mut hits = modular_jh(&tau, &dset);
        hits.sort();
        let mut want = vec![w1.clone(), w2.clone()];
        want.sort();
        if hits == want {
            return Ok(tau);
        }
    }
    Err(Error::NotFound("no type cuts out the given pair".into()))
}

/// All reducible semisimple parameters over `params` (pairs of exponents).
pub fn all_reducible(params: Params) -> impl Iterator<Item = RhoBar> {
    let e = params.e();
    (0..e).flat_map(move |m1| (0..e).map(move |m2| RhoBar::reducible(params, m1, m2)))
}

/// All irreducible parameters over `params` (one per exponent M).
pub fn all_irreducible(params: Params) -> impl Iterator<Item = RhoBar> {
    let q = params.q();
    (0..params.e2())
        .filter(move |m| m % (q + 1) != 0)
        .map(move |m| RhoBar::irreducible(params, m).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::undigits;
    use crate::types::TypeKind;

    fn pf(p: u64, f: usize) -> Params {
        Params::new(p, f).unwrap()
    }

    #[test]
    fn generic_examples() {
        let p51 = pf(5, 1);
        let r = RhoBar::reducible(p51, 2, 0);
        assert_eq!(r.is_generic().unwrap().r, vec![1]);
        assert!(RhoBar::reducible(p51, 1, 0).is_generic().is_none());
        let p3 = Params::new_allowing_p3(3, 1).unwrap();
        for m1 in 0..p3.e() {
            assert!(RhoBar::reducible(p3, m1, 0).is_generic().is_none());
        }
    }

    #[test]
    fn generic_irreducible_example() {
        let p51 = pf(5, 1);
        let r = RhoBar::irreducible(p51, 2).unwrap();
        let w = r.is_generic().unwrap();
        assert!((1..=3).contains(&(w.r[0] + 1)));
        assert!(RhoBar::irreducible(p51, 6).is_err()); // 6 = q + 1
    }

    /// Second, independent enumerator: test every weight directly against
    /// the defining congruences.
    fn weight_set_direct(rho: &RhoBar) -> BTreeSet<Weight> {
        let params = &rho.params;
        let (p, f, e) = (params.p, params.f, params.e());
        let mut out = BTreeSet::new();
        for svec in svectors(p, f) {
            for d in 0..e {
                let w = Weight { s: svec.clone(), d };
                let modular = match rho.shape {
                    RhoShape::ReducibleSS { m1, m2 } => JSet::all(f).any(|k| {
                        let sk: u64 = k
                            .iter()
                            .map(|j| (w.s[j] + 1) * params.ppow(j) % e)
                            .sum::<u64>()
                            % e;
                        let skc: u64 = k
                            .complement()
                            .iter()
                            .map(|j| (w.s[j] + 1) * params.ppow(j) % e)
                            .sum::<u64>()
                            % e;
                        (d + sk) % e == m1 % e && (d + skc) % e == m2 % e
                    }),
                    RhoShape::Irreducible { m } => {
                        let q = params.q();
                        let e2 = params.e2();
                        JSet::all(f).any(|bits| {
                            let k = JSet::from_elems(
                                2 * f,
                                (0..2 * f).filter(|&i| {
                                    if i < f { bits.contains(i) } else { !bits.contains(i - f) }
                                }),
                            );
                            let sk: u64 = k
                                .iter()
                                .map(|i| (w.s[i % f] + 1) * p.pow(i as u32) % e2)
                                .sum::<u64>()
                                % e2;
                            let skc: u64 = k
                                .complement()
                                .iter()
                                .map(|i| (w.s[i % f] + 1) * p.pow(i as u32) % e2)
                                .sum::<u64>()
                                % e2;
                            ((1 + q) * d + sk) % e2 == m % e2
                                && ((1 + q) * d + skc) % e2 == m * q % e2
                        })
                    }
                };
                if modular {
                    out.insert(w);
                }
            }
        }
        out
    }

    #[test]
    fn weight_set_reducible_example() {
        let p51 = pf(5, 1);
        let rho = RhoBar::reducible(p51, 2, 0);
        let ws = rho.weight_set();
        assert_eq!(ws, weight_set_direct(&rho));
        // Sym^1 and its companion Sym^1 x det^2: the split K = {0} puts
        // (d + s + 1, d) = (2, 0), the split K = {} puts (d, d + s + 1) =
        // (2, 0), i.e. d = 2 and s + 1 = -2 = 2 mod 4.
        let expect: BTreeSet<Weight> =
            [Weight { s: vec![1], d: 0 }, Weight { s: vec![1], d: 2 }].into_iter().collect();
        assert_eq!(ws, expect);
        for w in &ws {
            assert!(w.is_regular(&p51));
            assert!(w.s.iter().any(|&x| x != 0));
        }
    }

    #[test]
    fn weight_set_two_enumerators_agree() {
        let p52 = pf(5, 2);
        for rho in [
            RhoBar::reducible(p52, 7, 0),
            RhoBar::reducible(p52, 13, 2),
            RhoBar::irreducible(p52, 2).unwrap(),
            RhoBar::irreducible(p52, 7).unwrap(),
            RhoBar::irreducible(pf(5, 1), 2).unwrap(),
        ] {
            assert_eq!(rho.weight_set(), weight_set_direct(&rho), "{rho:?}");
        }
    }

    #[test]
    fn weight_set_irreducible_nonempty() {
        let rho = RhoBar::irreducible(pf(5, 1), 2).unwrap();
        assert!(rho.is_generic().is_some());
        assert!(!rho.weight_set().is_empty());
    }

    #[test]
    fn restrict_examples() {
        let p51 = pf(5, 1);
        let r = RhoBar::reducible(p51, 2, 0).restrict();
        assert_eq!(r.shape, RhoShape::ReducibleSS { m1: 12, m2: 0 });
        let r = RhoBar::irreducible(p51, 7).unwrap().restrict();
        assert_eq!(r.shape, RhoShape::ReducibleSS { m1: 7, m2: 11 });
    }

    #[test]
    fn bc_weight_equivalence_sample() {
        let p51 = pf(5, 1);
        for m1 in 0..p51.e() {
            let rho = RhoBar::reducible(p51, m1, 0);
            if rho.is_generic().is_none() {
                continue;
            }
            let up = rho.restrict();
            let up_set = up.weight_set();
            for w in rho.weight_set() {
                assert!(up_set.contains(&w.base_change(&p51)));
            }
        }
    }

    #[test]
    fn ext_examples_f1() {
        let p51 = pf(5, 1);
        let w = Weight { s: vec![2], d: 0 };
        // sign +: s' = p-2-s+1 = 2, d'-d = s+1-p = -2 = 2 mod 4;
        // sign -: s' = p-2-s-1 = 0, d'-d = s+1 = 3 mod 4.
        assert!(ext_exists(&p51, &w, &Weight { s: vec![2], d: 2 }).unwrap());
        assert!(ext_exists(&p51, &w, &Weight { s: vec![0], d: 3 }).unwrap());
        assert!(!ext_exists(&p51, &w, &Weight { s: vec![2], d: 1 }).unwrap());
        assert!(!ext_exists(&p51, &w, &Weight { s: vec![1], d: 3 }).unwrap());
        assert!(!ext_exists(&p51, &w, &w).unwrap());
        assert!(ext_exists(&p51, &w, &Weight { s: vec![4], d: 0 }).is_err());
    }

    #[test]
    fn ext_symmetric() {
        for (p, f) in [(5u64, 1usize), (5, 2), (7, 2)] {
            let params = pf(p, f);
            let smax = if f == 1 { p - 1 } else { p };
            let mut weights = Vec::new();
            for svec in svectors(smax, f) {
                for d in 0..params.e() {
                    weights.push(Weight { s: svec.clone(), d });
                }
            }
            for w1 in weights.iter().step_by(3) {
                for w2 in weights.iter().step_by(5) {
                    assert_eq!(
                        ext_exists(&params, w1, w2).unwrap(),
                        ext_exists(&params, w2, w1).unwrap(),
                        "{w1:?} vs {w2:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn interval_example() {
        // At p = 5, f = 1 the generic reducible parameters have difference
        // 2, so their two modular weights both have s = 1; the tame type
        // carrying both as JH factors is the cuspidal one with c = 2.
        // Every (generic rhobar, type) pair must yield an interval.
        let p51 = pf(5, 1);
        let mut full_interval_seen = false;
        for m1 in 0..p51.e() {
            for m2 in 0..p51.e() {
                let rho = RhoBar::reducible(p51, m1, m2);
                if rho.is_generic().is_none() {
                    continue;
                }
                for tau in crate::types::all_ps_types(p51)
                    .chain(crate::types::all_cuspidal_types(p51))
                {
                    if let Some(iv) = weight_interval(&rho, &tau).unwrap() {
                        if iv.j_min == JSet::empty(1) && iv.j_max == JSet::full(1) {
                            assert_eq!(tau.kind, TypeKind::Cuspidal);
                            full_interval_seen = true;
                        }
                    }
                }
            }
        }
        assert!(full_interval_seen, "no two-factor interval found");
    }

    #[test]
    fn type_searches_f1() {
        let p51 = pf(5, 1);
        let rho = RhoBar::reducible(p51, 2, 0);
        let ws: Vec<Weight> = rho.weight_set().into_iter().collect();
        for w in &ws {
            let tau = find_type_isolating(&rho, w).unwrap();
            let hits = modular_jh(&tau, &rho.weight_set());
            assert_eq!(hits, vec![w.clone()]);
        }
        let tau = find_type_covering(&rho).unwrap();
        let jh: BTreeSet<Weight> = tau.jh_factors().into_iter().map(|(_, w)| w).collect();
        assert!(rho.weight_set().iter().all(|w| jh.contains(w)));
    }

    #[test]
    fn pair_search_requires_extension() {
        let p51 = pf(5, 1);
        let rho = RhoBar::reducible(p51, 2, 0);
        let ws: Vec<Weight> = rho.weight_set().into_iter().collect();
        let mut tested_pair = false;
        for w1 in &ws {
            for w2 in &ws {
                if w1 == w2 {
                    continue;
                }
                if ext_exists(&p51, w1, w2).unwrap() {
                    let tau = find_type_for_pair(&rho, w1, w2).unwrap();
                    let mut hits = modular_jh(&tau, &rho.weight_set());
                    hits.sort();
                    let mut want = vec![w1.clone(), w2.clone()];
                    want.sort();
                    assert_eq!(hits, want);
                    tested_pair = true;
                } else {
                    assert!(find_type_for_pair(&rho, w1, w2).is_err());
                }
            }
        }
        assert!(tested_pair);
    }

    #[test]
    fn isolating_prefers_cuspidal_for_irreducible() {
        let p51 = pf(5, 1);
        let rho = RhoBar::irreducible(p51, 2).unwrap();
        let w = rho.weight_set().into_iter().next().unwrap();
        let tau = find_type_isolating(&rho, &w).unwrap();
        assert_eq!(tau.kind, TypeKind::Cuspidal);
    }

    #[test]
    fn undigits_consistency() {
        assert_eq!(undigits(&[2, 1], 5), 7);
    }
}
