//! Gauge calculus of integral lattices in a fixed tame type.
//!
//! A lattice `L` inside the type is recorded (up to homothety) by its
//! *gauge*: for each distinguished cosocle lattice `sigma^o_{i(J)}(tau)` the
//! p-adic valuation `eps_{i(J)}(L)` of the least scalar carrying it into
//! `L`, normalised so that the entry at the relabeled index `J = {}` is
//! zero.  All indices live in the relabeled space: a label `J` stands for
//! the member `i(J) = J xor J_base` of `P_tau`.

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::JSet;
use crate::types::TameType;
use crate::weight::Weight;

/// Exact rational valuation (`val(p) = 1`).
pub type Val = Ratio<i64>;

/// The gauge of a lattice: one valuation per relabeled index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeVector {
    pub tau: TameType,
    pub values: BTreeMap<JSet, Val>,
}

impl GaugeVector {
    /// Checks the two structural requirements on a gauge: the entry at the
    /// empty relabeled index is zero, and subadditivity
    /// `values[J'] <= values[J] + |J' \ J|` holds for every pair.
    pub fn validate(&self) -> Result<()> {
        let f = self.tau.params.f;
        let empty = JSet::empty(f);
        match self.values.get(&empty) {
            Some(v) if v.is_zero() => {}
            Some(v) => {
                return Err(Error::TheoremViolation(format!(
                    "gauge not normalized: value {v} at the empty index"
                )))
            }
            None => {
                return Err(Error::InvalidIndex(
                    "gauge has no entry at the empty relabeled index".into(),
                ))
            }
        }
        for (j, vj) in &self.values {
            if *vj < Val::zero() {
                return Err(Error::TheoremViolation(format!(
                    "negative gauge value {vj} at {j:?}"
                )));
            }
            for (j2, vj2) in &self.values {
                let bound = *vj + Val::from_integer(j2.minus(j).len() as i64);
                if *vj2 > bound {
                    return Err(Error::TheoremViolation(format!(
                        "subadditivity fails: value at {j2:?} is {vj2} > {bound}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The value at a relabeled index.
    pub fn value(&self, j: &JSet) -> Result<Val> {
        self.values
            .get(j)
            .copied()
            .ok_or_else(|| Error::InvalidIndex(format!("{j:?} is not a relabeled index")))
    }

    /// JSON view with bitmask keys, e.g. `{"3": "1/2"}`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (j, v) in &self.values {
            map.insert(j.bits.to_string(), serde_json::json!(format!("{v}")));
        }
        serde_json::Value::Object(map)
    }
}

fn check_relabeled(tau: &TameType, j: &JSet) -> Result<()> {
    let base = tau.j_base()?;
    if tau.in_p_tau(&j.symmetric_difference(&base)) {
        Ok(())
    } else {
        Err(Error::InvalidIndex(format!(
            "{j:?} is not a relabeled admissible index for this type"
        )))
    }
}

/// `eps_{i(J')}(sigma^o_{i(J)}(tau)) = |J' \ J|`: the gauge of the lattice
/// with cosocle at `i(J)`, evaluated at `i(J')`.
pub fn eps_cosocle(tau: &TameType, j: &JSet, j2: &JSet) -> Result<u64> {
    check_relabeled(tau, j)?;
    check_relabeled(tau, j2)?;
    Ok(j2.minus(j).len() as u64)
}

/// `eps_{i(J)}(sigma^{o,i(J')}(tau)) = |J intersect J'|`: the gauge of the
/// lattice with socle at `i(J')`, evaluated at `i(J)`.
pub fn eps_socle(tau: &TameType, j: &JSet, j2: &JSet) -> Result<u64> {
    check_relabeled(tau, j)?;
    check_relabeled(tau, j2)?;
    Ok(j.intersection(j2).len() as u64)
}

/// Gauge of the lattice with cosocle at `i(J)`, as a full vector.
pub fn cosocle_gauge(tau: &TameType, j: &JSet) -> Result<GaugeVector> {
    gauge_sum(tau, &[(Val::zero(), *j)])
}

/// Gauge of the lattice with socle at `i(J)`, as a full vector.
pub fn socle_gauge(tau: &TameType, j: &JSet) -> Result<GaugeVector> {
    check_relabeled(tau, j)?;
    let entries: Vec<(Val, JSet)> = tau
        .relabeled_indices()?
        .into_iter()
        .map(|j2| (Val::from_integer(j.intersection(&j2).len() as i64), j2))
        .collect();
    gauge_sum(tau, &entries)
}

/// The gauge of a sum of scaled cosocle lattices
/// `sum_J p^{v_J} sigma^o_{i(J)}(tau)`: entry at `K` is
/// `min_J (v_J + |K \ J|)`, shifted so the empty index reads zero.
pub fn gauge_sum(tau: &TameType, entries: &[(Val, JSet)]) -> Result<GaugeVector> {
    if entries.is_empty() {
        return Err(Error::InvalidParameter("empty lattice sum".into()));
    }
    for (_, j) in entries {
        check_relabeled(tau, j)?;
    }
    let mut values = BTreeMap::new();
    for k in tau.relabeled_indices()? {
        let v = entries
            .iter()
            .map(|(v, j)| *v + Val::from_integer(k.minus(j).len() as i64))
            .min()
            .expect("nonempty");
        values.insert(k, v);
    }
    let shift = values[&JSet::empty(tau.params.f)];
    for v in values.values_mut() {
        *v -= shift;
    }
    let gauge = GaugeVector {
        tau: tau.clone(),
        values,
    };
    gauge.validate()?;
    Ok(gauge)
}

/// Which cokernel of the two standard inclusions between neighbouring
/// distinguished lattices is described.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CokernelSide {
    /// JH factors of `sigma^{o,i(J u {j})} inside sigma^{o,i(J)}`.
    Upper,
    /// JH factors of `p sigma^{o,i(J)} inside sigma^{o,i(J u {j})}`.
    Lower,
}

/// Which family of distinguished lattices the cokernel statement refers to;
/// the index lists are identical for both, so this is carried as metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeFamily {
    Cosocle,
    Socle,
}

/// The JH factors of the cokernel of the inclusion between the lattices at
/// `i(J)` and `i(J u {j})`: the factors at relabeled `J'` with `j in J'`
/// (upper) resp. `j notin J'` (lower).  The two lists partition the
/// relabeled index set.
pub fn cokernel_weights(
    tau: &TameType,
    j_set: &JSet,
    j: usize,
    side: CokernelSide,
    _family: LatticeFamily,
) -> Result<Vec<(JSet, Weight)>> {
    if j >= tau.params.f || j_set.contains(j) {
        return Err(Error::Precondition(format!(
            "index {j} must lie outside {j_set:?}"
        )));
    }
    check_relabeled(tau, j_set)?;
    check_relabeled(tau, &j_set.insert(j))?;
    let base = tau.j_base()?;
    let mut out = Vec::new();
    for j2 in tau.relabeled_indices()? {
        let keep = match side {
            CokernelSide::Upper => j2.contains(j),
            CokernelSide::Lower => !j2.contains(j),
        };
        if keep {
            let w = tau.jh_factor(&j2.symmetric_difference(&base))?;
            out.push((j2, w));
        }
    }
    Ok(out)
}

/// A saturated chain `J = J_0 subset J_1 subset ... = J'` of relabeled
/// admissible indices, each step adding a single element.  Deterministic:
/// depth-first search preferring the smallest addable index.  The chain
/// always exists; failure is reported as a theorem violation.
pub fn saturated_chain(tau: &TameType, j: &JSet, j2: &JSet) -> Result<Vec<JSet>> {
    check_relabeled(tau, j)?;
    check_relabeled(tau, j2)?;
    if !j.is_subset_of(j2) {
        return Err(Error::Precondition(format!(
            "{j:?} is not contained in {j2:?}"
        )));
    }
    fn dfs(tau: &TameType, base: &JSet, cur: &JSet, target: &JSet, chain: &mut Vec<JSet>) -> bool {
        if cur == target {
            return true;
        }
        for idx in target.minus(cur).iter() {
            let next = cur.insert(idx);
            if tau.in_p_tau(&next.symmetric_difference(base)) {
                chain.push(next);
                if dfs(tau, base, &next, target, chain) {
                    return true;
                }
                chain.pop();
            }
        }
        false
    }
    let base = tau.j_base()?;
    let mut chain = vec![*j];
    if dfs(tau, &base, j, j2, &mut chain) {
        Ok(chain)
    } else {
        Err(Error::TheoremViolation(format!(
            "no saturated admissible chain from {j:?} to {j2:?}"
        )))
    }
}

/// Direction of a predicted radical/socle filtration report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FiltrationDirection {
    Cosocle,
    Socle,
}

/// The predicted layer structure of the reduction of a distinguished
/// lattice: layer `i` holds the factors at distance `i` from the defining
/// index, and every adjacent two-factor subquotient is a nonsplit
/// extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationReport {
    pub direction: FiltrationDirection,
    /// `layers[i]` = the `(J', weight)` with `|J xor J'| = i`, `J'` in `P_tau`.
    pub layers: Vec<Vec<(JSet, Weight)>>,
    /// Pairs in consecutive layers at symmetric-difference distance one;
    /// each such two-factor subquotient is a nonsplit extension.
    pub nonsplit_adjacent: Vec<(JSet, JSet)>,
}

/// Predicted filtration of the reduction of the lattice indexed by
/// `J in P_tau` (plain, not relabeled): layer `i` consists of the factors
/// `J' in P_tau` with `|J xor J'| = i`.
pub fn predicted_filtration(
    tau: &TameType,
    j: &JSet,
    direction: FiltrationDirection,
) -> Result<FiltrationReport> {
    if !tau.in_p_tau(j) {
        return Err(Error::InvalidIndex(format!("{j:?} is not in P_tau")));
    }
    let members = tau.p_tau();
    let max_dist = members
        .iter()
        .map(|j2| j.symmetric_difference(j2).len())
        .max()
        .unwrap_or(0);
    let mut layers = vec![Vec::new(); max_dist + 1];
    for j2 in &members {
        let w = tau.jh_factor(j2)?;
        layers[j.symmetric_difference(j2).len()].push((*j2, w));
    }
    let mut nonsplit_adjacent = Vec::new();
    for i in 0..max_dist {
        for (j1, _) in &layers[i] {
            for (j2, _) in &layers[i + 1] {
                if j1.symmetric_difference(j2).len() == 1 {
                    nonsplit_adjacent.push((*j1, *j2));
                }
            }
        }
    }
    Ok(FiltrationReport {
        direction,
        layers,
        nonsplit_adjacent,
    })
}
