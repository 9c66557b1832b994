//! The lattice predictor: from a tame type, the interval of its modular
//! indices, and the valuations of a point of the deformation space, build
//! the predicted lattice `sum_J varpi_J(lambda) sigma^o_{i(J)}(tau)` as a
//! gauge.  Irregular cuspidal types contribute a single modular weight and
//! the predictor returns the corresponding socle-lattice marker instead.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gauge::{gauge_sum, GaugeVector, Val};
use crate::ideals::RingSpec;
use crate::params::JSet;
use crate::types::{CuspidalClass, TameType, TypeKind};

/// The combinatorial shell of the deformation space attached to a type and
/// the interval `[J_min, J_max]` of its modular indices: the base-twisted
/// window `[J'_min, J'_max]` indexing the formal variables, and the
/// difference set `Delta` carrying the variable pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefSpaceData {
    pub tau: TameType,
    pub j_min: JSet,
    pub j_max: JSet,
    pub j_base: JSet,
    pub j_min_prime: JSet,
    pub j_max_prime: JSet,
}

impl DefSpaceData {
    pub fn new(tau: &TameType, j_min: &JSet, j_max: &JSet) -> Result<Self> {
        if !j_min.is_subset_of(j_max) {
            return Err(Error::Precondition(format!(
                "interval bounds must be nested: {j_min:?}, {j_max:?}"
            )));
        }
        for j in JSet::interval(j_min, j_max) {
            if !tau.in_p_tau(&j) {
                return Err(Error::Precondition(format!(
                    "interval member {j:?} is not in P_tau"
                )));
            }
        }
        let j_base = tau.j_base()?;
        let base_c = j_base.complement();
        let j_min_prime = base_c
            .intersection(j_min)
            .union(&j_base.intersection(&j_max.complement()));
        let j_max_prime = base_c
            .intersection(j_max)
            .union(&j_base.intersection(&j_min.complement()));
        let data = DefSpaceData {
            tau: tau.clone(),
            j_min: *j_min,
            j_max: *j_max,
            j_base,
            j_min_prime,
            j_max_prime,
        };
        debug_assert_eq!(data.delta(), j_max.minus(j_min));
        debug_assert!(JSet::all(tau.params.f).all(|j| {
            let twisted = j.symmetric_difference(&j_base);
            (j_min.is_subset_of(&twisted) && twisted.is_subset_of(j_max))
                == (j_min_prime.is_subset_of(&j) && j.is_subset_of(&j_max_prime))
        }));
        Ok(data)
    }

    /// `Delta = J'_max \ J'_min`, the indices carrying an (X, Y) pair.
    pub fn delta(&self) -> JSet {
        self.j_max_prime.minus(&self.j_min_prime)
    }

    /// The special-fibre ring of this window.
    pub fn ring_spec(&self) -> Result<RingSpec> {
        RingSpec::new(self.j_min_prime, self.j_max_prime)
    }

    /// The window recentred at an arbitrary `J` (instead of the base): the
    /// bounds `J'_min = (J n J_min) u (J^c n J_max^c)` and
    /// `J'_max = (J n J_max) u (J^c n J_min^c)`, so that
    /// `J'_min <= J' <= J'_max` iff `J_min <= J^c xor J' <= J_max`.
    pub fn reindexed_window(&self, j: &JSet) -> (JSet, JSet) {
        let jc = j.complement();
        let lo = j
            .intersection(&self.j_min)
            .union(&jc.intersection(&self.j_max.complement()));
        let hi = j
            .intersection(&self.j_max)
            .union(&jc.intersection(&self.j_min.complement()));
        (lo, hi)
    }
}

/// Valuations of a point of the deformation space: one `x`-coordinate per
/// index of `Delta`, a rational in `[0, 1]`; the `y`-coordinate is `1 - x`
/// (the relation `X_j Y_j = p`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point {
    x: BTreeMap<usize, Val>,
}

impl Point {
    pub fn new(delta: &JSet, coords: &[(usize, Val)]) -> Result<Self> {
        let mut x = BTreeMap::new();
        for &(j, v) in coords {
            if !delta.contains(j) {
                return Err(Error::InvalidIndex(format!("index {j} is not in Delta")));
            }
            if v < Val::zero() || v > Val::from_integer(1) {
                return Err(Error::Range(format!("x-valuation {v} is outside [0, 1]")));
            }
            if x.insert(j, v).is_some() {
                return Err(Error::InvalidParameter(format!("duplicate index {j}")));
            }
        }
        if x.len() != delta.len() {
            return Err(Error::InvalidParameter(format!(
                "expected one coordinate per index of {delta:?}"
            )));
        }
        Ok(Point { x })
    }

    pub fn constant(delta: &JSet, v: Val) -> Result<Self> {
        let coords: Vec<(usize, Val)> = delta.iter().map(|j| (j, v)).collect();
        Point::new(delta, &coords)
    }

    pub fn x_val(&self, j: usize) -> Result<Val> {
        self.x
            .get(&j)
            .copied()
            .ok_or_else(|| Error::InvalidIndex(format!("no coordinate at index {j}")))
    }

    pub fn y_val(&self, j: usize) -> Result<Val> {
        Ok(Val::from_integer(1) - self.x_val(j)?)
    }
}

/// The valuation at `lambda` of the prescribed element `varpi_j` (or
/// `varpi'_j` with `primed`): `p` on `J'_min`, the `Y` (resp. `X`)
/// coordinate on `Delta n J_base`, the `X` (resp. `Y`) coordinate on
/// `Delta n J_base^c`, and `1` (resp. `p`) outside `J'_max`.
pub fn varpi_valuation(data: &DefSpaceData, lambda: &Point, j: usize, primed: bool) -> Result<Val> {
    if j >= data.tau.params.f {
        return Err(Error::InvalidIndex(format!("index {j} out of range")));
    }
    let one = Val::from_integer(1);
    if data.j_min_prime.contains(j) {
        return Ok(if primed { Val::zero() } else { one });
    }
    if !data.j_max_prime.contains(j) {
        return Ok(if primed { one } else { Val::zero() });
    }
    let in_base = data.j_base.contains(j);
    if in_base != primed {
        lambda.y_val(j)
    } else {
        lambda.x_val(j)
    }
}

/// `val(varpi_J(lambda)) = sum_{j in J} val(varpi_j(lambda))`.
pub fn varpi_set_valuation(
    data: &DefSpaceData,
    lambda: &Point,
    j: &JSet,
    primed: bool,
) -> Result<Val> {
    let mut v = Val::zero();
    for idx in j.iter() {
        v += varpi_valuation(data, lambda, idx, primed)?;
    }
    Ok(v)
}

/// Output of the predictor: a gauge for the sum branch, or the index of
/// the socle lattice for an irregular cuspidal type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PredictedLattice {
    Gauge(GaugeVector),
    /// The modular set is the single regular index `j`; the predicted
    /// lattice is the socle lattice there.
    SocleLattice { j: JSet },
}

/// Predicts the lattice attached to `(tau, [j_min, j_max], lambda)`:
/// the gauge of `sum_J p^{v_J} sigma^o_{i(J)}(tau)` with
/// `v_J = val(varpi_J(lambda))`, or the socle-lattice marker for an
/// irregular cuspidal type (whose single modular weight makes the point
/// irrelevant).
pub fn predict_lattice(
    tau: &TameType,
    j_min: &JSet,
    j_max: &JSet,
    lambda: &Point,
) -> Result<PredictedLattice> {
    if tau.kind == TypeKind::Cuspidal {
        if let CuspidalClass::Irregular { unique_regular_j } = tau.classify_cuspidal()? {
            return Ok(PredictedLattice::SocleLattice {
                j: unique_regular_j,
            });
        }
    }
    let data = DefSpaceData::new(tau, j_min, j_max)?;
    let gauge = predict_gauge(&data, lambda)?;
    Ok(PredictedLattice::Gauge(gauge))
}

/// The sum branch of the predictor for a principal series or regular
/// cuspidal type.
pub fn predict_gauge(data: &DefSpaceData, lambda: &Point) -> Result<GaugeVector> {
    let entries: Result<Vec<(Val, JSet)>> = data
        .tau
        .relabeled_indices()?
        .into_iter()
        .map(|j| Ok((varpi_set_valuation(data, lambda, &j, false)?, j)))
        .collect();
    gauge_sum(&data.tau, &entries?)
}

/// Verifies the valuation-level consequence of the annihilation identity:
/// whenever `v_J <= v_{J'} + |J \ J'|` for all `J'`, the predicted gauge
/// takes the value `v_J` at `J` (so the fixed-point fibre reproduces
/// `p^{v_J} = varpi_J(lambda)` up to units).
pub fn annihilation_identity_check(
    data: &DefSpaceData,
    lambda: &Point,
    j: &JSet,
) -> Result<bool> {
    let labels = data.tau.relabeled_indices()?;
    if !labels.contains(j) {
        return Err(Error::InvalidIndex(format!(
            "{j:?} is not a relabeled admissible index"
        )));
    }
    let v_j = varpi_set_valuation(data, lambda, j, false)?;
    let mut minimal = true;
    for j2 in &labels {
        let v2 = varpi_set_valuation(data, lambda, j2, false)?;
        if v_j > v2 + Val::from_integer(j.minus(j2).len() as i64) {
            minimal = false;
        }
    }
    if !minimal {
        // The hypothesis fails (possible only at degenerate points);
        // nothing to verify.
        return Ok(true);
    }
    let gauge = predict_gauge(data, lambda)?;
    Ok(gauge.value(j)? == v_j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Params;
    use crate::types::all_cuspidal_types;

    fn js(width: usize, elems: &[usize]) -> JSet {
        JSet::from_elems(width, elems.iter().copied())
    }

    fn data_f1() -> DefSpaceData {
        let params = Params::new(5, 1).unwrap();
        let tau = TameType::make_ps(params, 2, 0).unwrap();
        DefSpaceData::new(&tau, &js(1, &[]), &js(1, &[0])).unwrap()
    }

    #[test]
    fn window_twisting() {
        // Principal series: the primes coincide with the plain bounds.
        let d = data_f1();
        assert_eq!(d.j_min_prime, d.j_min);
        assert_eq!(d.j_max_prime, d.j_max);

        // Regular cuspidal with a nonempty base: the bounds twist but the
        // difference set is preserved.
        let params = Params::new(5, 2).unwrap();
        let tau = TameType::make_cuspidal(params, 3).unwrap();
        // P_tau = {{}, {1}, {0,1}}; take the interval [{1}, {0,1}].
        let d = DefSpaceData::new(&tau, &js(2, &[1]), &js(2, &[0, 1])).unwrap();
        assert_eq!(d.j_base, js(2, &[0, 1]));
        assert_eq!(d.delta(), d.j_max.minus(&d.j_min));
        assert_eq!(d.delta(), d.j_max_prime.minus(&d.j_min_prime));
    }

    #[test]
    fn reindexed_window_equivalence() {
        let d = data_f1();
        let params = Params::new(5, 2).unwrap();
        let tau = TameType::make_ps(params, 2 + 5, 0).unwrap();
        let d2 = DefSpaceData::new(&tau, &js(2, &[1]), &js(2, &[0, 1])).unwrap();
        for d in [&DefSpaceData::new(&d.tau, &d.j_min, &d.j_max).unwrap(), &d2] {
            let f = d.tau.params.f;
            for j in JSet::all(f) {
                let (lo, hi) = d.reindexed_window(&j);
                for j2 in JSet::all(f) {
                    let twisted = j.complement().symmetric_difference(&j2);
                    let plain = d.j_min.is_subset_of(&twisted) && twisted.is_subset_of(&d.j_max);
                    let primed = lo.is_subset_of(&j2) && j2.is_subset_of(&hi);
                    assert_eq!(plain, primed);
                }
            }
        }
    }

    #[test]
    fn rejects_interval_outside_p_tau() {
        let params = Params::new(5, 2).unwrap();
        let tau = TameType::make_cuspidal(params, 3).unwrap();
        // {0} is not in P_tau.
        assert!(DefSpaceData::new(&tau, &js(2, &[]), &js(2, &[0])).is_err());
    }

    #[test]
    fn varpi_cases() {
        let d = data_f1();
        let lam = Point::new(&d.delta(), &[(0, Val::new(1, 2))]).unwrap();
        // f=1, base empty, Delta = {0}: the X branch.
        assert_eq!(varpi_valuation(&d, &lam, 0, false).unwrap(), Val::new(1, 2));
        assert_eq!(varpi_valuation(&d, &lam, 0, true).unwrap(), Val::new(1, 2));

        // Degenerate windows: inside J'_min the value is 1; outside J'_max
        // it is 0 (with the primed roles swapped).
        let params = Params::new(5, 1).unwrap();
        let tau = TameType::make_ps(params, 2, 0).unwrap();
        let low = DefSpaceData::new(&tau, &js(1, &[0]), &js(1, &[0])).unwrap();
        let empty_pt = Point::new(&low.delta(), &[]).unwrap();
        assert_eq!(varpi_valuation(&low, &empty_pt, 0, false).unwrap(), Val::from_integer(1));
        assert_eq!(varpi_valuation(&low, &empty_pt, 0, true).unwrap(), Val::zero());
        let hi = DefSpaceData::new(&tau, &js(1, &[]), &js(1, &[])).unwrap();
        let empty_pt = Point::new(&hi.delta(), &[]).unwrap();
        assert_eq!(varpi_valuation(&hi, &empty_pt, 0, false).unwrap(), Val::zero());
        assert_eq!(varpi_valuation(&hi, &empty_pt, 0, true).unwrap(), Val::from_integer(1));
    }

    #[test]
    fn varpi_product_valuation() {
        // val(varpi_J) + val(varpi'_J) = |J| for every relabeled J and a
        // spread of points.
        let params = Params::new(5, 2).unwrap();
        let tau = TameType::make_ps(params, 2 + 5, 0).unwrap();
        let d = DefSpaceData::new(&tau, &js(2, &[]), &js(2, &[0, 1])).unwrap();
        for num in 0..=3i64 {
            let lam = Point::constant(&d.delta(), Val::new(num, 3)).unwrap();
            for j in tau.relabeled_indices().unwrap() {
                let a = varpi_set_valuation(&d, &lam, &j, false).unwrap();
                let b = varpi_set_valuation(&d, &lam, &j, true).unwrap();
                assert_eq!(a + b, Val::from_integer(j.len() as i64));
            }
        }
    }

    #[test]
    fn predict_f1_two_lattice_picture() {
        let d = data_f1();
        for (num, den) in [(0i64, 1i64), (1, 3), (1, 2), (1, 1)] {
            let v = Val::new(num, den);
            let lam = Point::new(&d.delta(), &[(0, v)]).unwrap();
            let g = predict_gauge(&d, &lam).unwrap();
            assert_eq!(g.value(&js(1, &[0])).unwrap(), v.min(Val::from_integer(1)));
        }
    }

    #[test]
    fn predict_degenerate_point() {
        // All x = 0: the point sits on the component chain through the
        // Y-side and the output is still a valid gauge.
        let params = Params::new(5, 2).unwrap();
        let tau = TameType::make_ps(params, 2 + 5, 0).unwrap();
        let d = DefSpaceData::new(&tau, &js(2, &[]), &js(2, &[0, 1])).unwrap();
        let lam = Point::constant(&d.delta(), Val::zero()).unwrap();
        let g = predict_gauge(&d, &lam).unwrap();
        g.validate().unwrap();
        // With x = 0 everywhere every varpi valuation vanishes, so the sum
        // collapses onto the base lattice.
        for v in g.values.values() {
            assert!(v.is_zero());
        }
    }

    #[test]
    fn predict_irregular_cuspidal_marker() {
        let params = Params::new(5, 1).unwrap();
        let mut found = false;
        for tau in all_cuspidal_types(params) {
            if let CuspidalClass::Irregular { unique_regular_j } =
                tau.classify_cuspidal().unwrap()
            {
                let lam = Point::new(&JSet::empty(1), &[]).unwrap();
                let out =
                    predict_lattice(&tau, &unique_regular_j, &unique_regular_j, &lam).unwrap();
                assert_eq!(
                    out,
                    PredictedLattice::SocleLattice {
                        j: unique_regular_j
                    }
                );
                found = true;
            }
        }
        assert!(found, "no irregular cuspidal type at p=5, f=1");
    }

    #[test]
    fn annihilation_identity_small_grid() {
        let params = Params::new(5, 2).unwrap();
        let tau = TameType::make_ps(params, 2 + 5, 0).unwrap();
        let d = DefSpaceData::new(&tau, &js(2, &[]), &js(2, &[0, 1])).unwrap();
        for a in 0..=3i64 {
            for b in 0..=3i64 {
                let lam =
                    Point::new(&d.delta(), &[(0, Val::new(a, 3)), (1, Val::new(b, 3))]).unwrap();
                for j in tau.relabeled_indices().unwrap() {
                    assert!(annihilation_identity_check(&d, &lam, &j).unwrap());
                }
            }
        }
    }

    #[test]
    fn homothety_invariance() {
        // Shifting every entry valuation by a constant does not change the
        // normalized gauge.
        let params = Params::new(5, 2).unwrap();
        let tau = TameType::make_ps(params, 2 + 5, 0).unwrap();
        let d = DefSpaceData::new(&tau, &js(2, &[]), &js(2, &[0, 1])).unwrap();
        let lam = Point::constant(&d.delta(), Val::new(1, 2)).unwrap();
        let entries: Vec<(Val, JSet)> = tau
            .relabeled_indices()
            .unwrap()
            .into_iter()
            .map(|j| (varpi_set_valuation(&d, &lam, &j, false).unwrap(), j))
            .collect();
        let base = gauge_sum(&tau, &entries).unwrap();
        let shifted: Vec<(Val, JSet)> = entries
            .iter()
            .map(|(v, j)| (*v + Val::new(7, 3), *j))
            .collect();
        assert_eq!(gauge_sum(&tau, &shifted).unwrap(), base);
    }

    #[test]
    fn point_validation() {
        let delta = js(2, &[0, 1]);
        assert!(Point::new(&delta, &[(0, Val::new(1, 2))]).is_err());
        assert!(Point::new(&delta, &[(0, Val::new(3, 2)), (1, Val::zero())]).is_err());
        assert!(Point::new(&delta, &[(0, Val::zero()), (1, Val::from_integer(1))]).is_ok());
    }
}
