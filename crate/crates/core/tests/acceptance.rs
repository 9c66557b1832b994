//! Acceptance gate: twelve end-to-end checks, one per headline property,
//! each printing a single pass/fail line with its runtime.

use std::collections::BTreeSet;
use std::time::Instant;

use num_rational::Ratio;

use tame_lattices::engine::gmodule;
use tame_lattices::engine::lattice::{cosocle_family, type_simples, LatticeModule};
use tame_lattices::engine::GModule;
use tame_lattices::galois::{
    all_irreducible, all_reducible, ext_exists, find_type_covering, find_type_for_pair,
    find_type_isolating, weight_interval,
};
use tame_lattices::gauge::{cokernel_weights, gauge_sum, CokernelSide, LatticeFamily};
use tame_lattices::ideals::{ideal_of_family, RingSpec};
use tame_lattices::params::{JSet, Params};
use tame_lattices::predictor::{
    annihilation_identity_check, predict_lattice, varpi_set_valuation, DefSpaceData, Point,
    PredictedLattice,
};
use tame_lattices::types::{
    all_cuspidal_types, all_ps_types, cuspidal_digit_classes, ps_digit_classes, CuspidalClass,
    TameType, TypeKind,
};
use tame_lattices::verify::{default_precision, run_suite, Suite};

fn report(n: usize, name: &str, start: Instant, pass: bool) {
    println!(
        "criterion {n:02} {name}: {} ({} ms)",
        if pass { "PASS" } else { "FAIL" },
        start.elapsed().as_millis()
    );
    assert!(pass, "criterion {n:02} {name} failed");
}

fn js(width: usize, elems: &[usize]) -> JSet {
    JSet::from_elems(width, elems.iter().copied())
}

/// 1. The three worked ideal computations, exactly as printed.
#[test]
fn criterion_01_worked_example_ideals() {
    let start = Instant::now();
    let ring = RingSpec::standard(2).unwrap();
    let top = js(2, &[0, 1]);
    let bot = js(2, &[]);
    let triple = |fam1: &[JSet], fam2: &[JSet]| {
        let i1 = ideal_of_family(ring, fam1).unwrap();
        let i2 = ideal_of_family(ring, fam2).unwrap();
        let sum = i1.sum(&i2).unwrap();
        (i1.to_string(), i2.to_string(), sum.to_string())
    };
    let mut pass = true;
    pass &= triple(&[top], &[bot])
        == (
            "(X'_0, X'_1)".to_string(),
            "(Y'_0, Y'_1)".to_string(),
            "(X'_0, X'_1, Y'_0, Y'_1)".to_string(),
        );
    pass &= triple(&[top, js(2, &[0])], &[js(2, &[1]), bot])
        == (
            "(X'_0)".to_string(),
            "(Y'_0)".to_string(),
            "(X'_0, Y'_0)".to_string(),
        );
    pass &= triple(&[top, js(2, &[0])], &[top, bot])
        == (
            "(X'_0)".to_string(),
            "(X'_0*Y'_1, X'_1*Y'_0)".to_string(),
            "(X'_0, X'_1*Y'_0)".to_string(),
        );
    report(1, "worked-example-ideals", start, pass);
}

/// 2. Face and ideal-sum lemmas, exhaustive for ground sets of size 1..3.
#[test]
fn criterion_02_faces_and_ideals_exhaustive() {
    let start = Instant::now();
    let mut pass = true;
    for f in 1..=3 {
        let r = run_suite(Suite::Ideals, 5, f, None, None).unwrap();
        pass &= r.pass() && r.cases > 0;
    }
    report(2, "faces-and-ideals-exhaustive", start, pass);
}

/// 3. Saturated chains between all nested admissible pairs, both kinds.
#[test]
fn criterion_03_saturated_chains() {
    let start = Instant::now();
    let mut pass = true;
    for p in [5u64, 7] {
        for f in 1..=4 {
            let r = run_suite(Suite::Chains, p, f, None, None).unwrap();
            pass &= r.pass() && r.cases > 0;
        }
    }
    report(3, "saturated-chains", start, pass);
}

/// 4. Base change intertwines the JH-factor descriptors for all types.
#[test]
fn criterion_04_base_change_of_jh_factors() {
    let start = Instant::now();
    let mut pass = true;
    for p in [5u64, 7] {
        for f in 1..=3 {
            let r = run_suite(Suite::Bc, p, f, None, None).unwrap();
            pass &= r.pass() && r.cases > 0;
        }
    }
    report(4, "base-change-of-jh-factors", start, pass);
}

/// 5. Engine radical filtrations of every distinguished lattice match the
/// predicted distance layers with nonsplit adjacent extensions.
#[test]
fn criterion_05_socle_filtration_engine() {
    let start = Instant::now();
    let mut pass = true;
    for (p, f) in [(5u64, 1usize), (7, 1), (5, 2)] {
        let r = run_suite(Suite::Filtration, p, f, None, None).unwrap();
        pass &= r.pass() && r.cases > 0;
    }
    report(5, "socle-filtration-engine", start, pass);
}

/// 6. Measured gauges of both distinguished families equal the closed forms.
#[test]
fn criterion_06_gauge_equations_engine() {
    let start = Instant::now();
    let mut pass = true;
    for (p, f) in [(5u64, 1usize), (5, 2)] {
        let r = run_suite(Suite::Gauge, p, f, None, None).unwrap();
        pass &= r.pass() && r.cases > 0;
    }
    report(6, "gauge-equations-engine", start, pass);
}

/// 7. Cokernel JH-factor lists partition the relabeled index set by
/// membership of the added index; checked combinatorially everywhere and
/// against engine subquotients at small parameters.
#[test]
fn criterion_07_cokernel_partition() {
    let start = Instant::now();
    let mut pass = true;
    // Combinatorial part: all types, both kinds.
    for p in [5u64, 7] {
        for f in 1..=3 {
            let params = Params::new(p, f).unwrap();
            let types: Vec<TameType> = all_ps_types(params)
                .chain(all_cuspidal_types(params))
                .collect();
            for t in &types {
                let Ok(labels) = t.relabeled_indices() else {
                    continue;
                };
                let label_set: BTreeSet<JSet> = labels.iter().copied().collect();
                for jset in &labels {
                    for j in 0..f {
                        if jset.contains(j) || !label_set.contains(&jset.insert(j)) {
                            continue;
                        }
                        let upper = cokernel_weights(
                            t,
                            jset,
                            j,
                            CokernelSide::Upper,
                            LatticeFamily::Cosocle,
                        )
                        .unwrap();
                        let lower = cokernel_weights(
                            t,
                            jset,
                            j,
                            CokernelSide::Lower,
                            LatticeFamily::Socle,
                        )
                        .unwrap();
                        pass &= upper.iter().all(|(k, _)| k.contains(j));
                        pass &= lower.iter().all(|(k, _)| !k.contains(j));
                        let mut all: BTreeSet<JSet> =
                            upper.iter().map(|(k, _)| *k).collect();
                        pass &= upper.len() + lower.len() == labels.len();
                        all.extend(lower.iter().map(|(k, _)| *k));
                        pass &= all == label_set;
                        for (k, w) in upper.iter().chain(lower.iter()) {
                            pass &= *w == t.jh_factor(&t.iota(k).unwrap()).unwrap();
                        }
                    }
                }
            }
        }
    }
    // Engine part: subquotient JH multisets of the cosocle family.
    for (p, f) in [(5u64, 1usize), (5, 2)] {
        let params = Params::new(p, f).unwrap();
        for t in ps_digit_classes(params) {
            let m = LatticeModule::induced(&t, default_precision(f)).unwrap();
            let simples = type_simples(&t, &m.field);
            let mods: Vec<GModule> = simples.iter().map(|(_, _, s)| s.clone()).collect();
            let family = cosocle_family(&m, &simples).unwrap();
            for (jset, lat) in &family {
                for j in 0..f {
                    if jset.contains(j) {
                        continue;
                    }
                    let bigger = jset.insert(j);
                    let Some((_, lat2)) = family.iter().find(|(x, _)| *x == bigger) else {
                        continue;
                    };
                    // In the normalized family the lattice at J includes
                    // into the one at J u {j}; on the concrete sublattices
                    // that inclusion is p*T_J into T_{J u {j}}, with the
                    // complementary subquotient T_J / T_{J u {j}}.
                    let upper_q = m
                        .quotient_module(lat2, &m.scale(lat, 1).unwrap())
                        .unwrap();
                    let lower_q = m.quotient_module(lat, lat2).unwrap();
                    let upper_mults = gmodule::jh_multiset(&upper_q, &mods).unwrap();
                    let lower_mults = gmodule::jh_multiset(&lower_q, &mods).unwrap();
                    for (idx, (k, _, _)) in simples.iter().enumerate() {
                        let expected_upper = usize::from(k.contains(j));
                        pass &= upper_mults[idx] == expected_upper;
                        pass &= lower_mults[idx] == 1 - expected_upper;
                    }
                }
            }
        }
    }
    report(7, "cokernel-partition", start, pass);
}

fn generic_rhobars(params: Params) -> Vec<tame_lattices::galois::RhoBar> {
    all_reducible(params)
        .chain(all_irreducible(params))
        .filter(|r| r.is_generic().is_some())
        .collect()
}

/// 8. The modular index set of every (generic parameter, type) pair is
/// empty or an interval inside the admissible set.
#[test]
fn criterion_08_interval_property() {
    let start = Instant::now();
    let mut pass = true;
    for p in [5u64, 7] {
        for f in 1..=2 {
            let params = Params::new(p, f).unwrap();
            let rhos = generic_rhobars(params);
            let types: Vec<TameType> = all_ps_types(params)
                .chain(all_cuspidal_types(params))
                .collect();
            for rho in &rhos {
                let dset = rho.weight_set();
                for t in &types {
                    // weight_interval raises a theorem violation if the
                    // modular set fails to be an interval in P_tau.
                    let interval = weight_interval(rho, t).unwrap();
                    let hits: Vec<JSet> = t
                        .jh_factors()
                        .into_iter()
                        .filter(|(_, w)| dset.contains(w))
                        .map(|(j, _)| j)
                        .collect();
                    match interval {
                        None => pass &= hits.is_empty(),
                        Some(iv) => {
                            let members: BTreeSet<JSet> =
                                JSet::interval(&iv.j_min, &iv.j_max).into_iter().collect();
                            pass &= members == hits.into_iter().collect();
                            pass &= members.iter().all(|j| t.in_p_tau(j));
                        }
                    }
                }
            }
        }
    }
    report(8, "interval-property", start, pass);
}

/// 9. Type searches (isolating, covering, pair) succeed for every generic
/// semisimple parameter and every eligible weight or adjacent pair.
#[test]
fn criterion_09_type_searches() {
    let start = Instant::now();
    let mut pass = true;
    for p in [5u64, 7] {
        for f in 1..=2 {
            let params = Params::new(p, f).unwrap();
            for rho in generic_rhobars(params) {
                let dset = rho.weight_set();
                match find_type_covering(&rho) {
                    Ok(t) => {
                        let jh: BTreeSet<_> =
                            t.jh_factors().into_iter().map(|(_, w)| w).collect();
                        pass &= dset.iter().all(|w| jh.contains(w));
                    }
                    Err(_) => pass = false,
                }
                let weights: Vec<_> = dset.iter().cloned().collect();
                for w in &weights {
                    match find_type_isolating(&rho, w) {
                        Ok(t) => {
                            let hits: Vec<_> = t
                                .jh_factors()
                                .into_iter()
                                .map(|(_, x)| x)
                                .filter(|x| dset.contains(x))
                                .collect();
                            pass &= hits == vec![w.clone()];
                        }
                        Err(_) => pass = false,
                    }
                }
                for w1 in &weights {
                    for w2 in &weights {
                        if w1 >= w2 || !ext_exists(&rho.params, w1, w2).unwrap() {
                            continue;
                        }
                        match find_type_for_pair(&rho, w1, w2) {
                            Ok(t) => {
                                let hits: BTreeSet<_> = t
                                    .jh_factors()
                                    .into_iter()
                                    .map(|(_, x)| x)
                                    .filter(|x| dset.contains(x))
                                    .collect();
                                let want: BTreeSet<_> =
                                    [w1.clone(), w2.clone()].into_iter().collect();
                                pass &= hits == want;
                            }
                            Err(_) => pass = false,
                        }
                    }
                }
            }
        }
    }
    report(9, "type-searches", start, pass);
}

/// 10. Predictor consistency over all windows and a rational grid of
/// points: gauge validity, homothety invariance, the valuation identity
/// per index, and the fixed-point fibre identity.
#[test]
fn criterion_10_predictor_consistency() {
    let start = Instant::now();
    let mut pass = true;
    // Grid of rationals in [0, 1] with denominator at most 6.
    let mut grid: BTreeSet<Ratio<i64>> = BTreeSet::new();
    for d in 1i64..=6 {
        for n in 0..=d {
            grid.insert(Ratio::new(n, d));
        }
    }
    let grid: Vec<Ratio<i64>> = grid.into_iter().collect();
    for f in 1..=3usize {
        let params = Params::new(5, f).unwrap();
        let classes: Vec<TameType> = ps_digit_classes(params)
            .chain(cuspidal_digit_classes(params))
            .collect();
        for t in &classes {
            if t.kind == TypeKind::Cuspidal {
                if let CuspidalClass::Irregular { unique_regular_j } =
                    t.classify_cuspidal().unwrap()
                {
                    // The marker branch: any window, the point is unused.
                    let empty = JSet::empty(f);
                    let point = Point::constant(&empty, Ratio::new(0, 1)).unwrap();
                    match predict_lattice(t, &empty, &empty, &point).unwrap() {
                        PredictedLattice::SocleLattice { j } => {
                            pass &= j == unique_regular_j
                        }
                        PredictedLattice::Gauge(_) => pass = false,
                    }
                    continue;
                }
            }
            let labels = t.relabeled_indices().unwrap();
            for j_min in JSet::all(f) {
                for j_max in JSet::all(f) {
                    if !j_min.is_subset_of(&j_max) {
                        continue;
                    }
                    let Ok(data) = DefSpaceData::new(t, &j_min, &j_max) else {
                        continue;
                    };
                    let delta: Vec<usize> = data.delta().iter().collect();
                    let mut counters = vec![0usize; delta.len()];
                    loop {
                        let coords: Vec<(usize, Ratio<i64>)> = delta
                            .iter()
                            .zip(&counters)
                            .map(|(&j, &c)| (j, grid[c]))
                            .collect();
                        let point = Point::new(&data.delta(), &coords).unwrap();
                        match predict_lattice(t, &j_min, &j_max, &point).unwrap() {
                            PredictedLattice::SocleLattice { .. } => pass = false,
                            PredictedLattice::Gauge(gv) => {
                                pass &= gv.validate().is_ok();
                                // Homothety invariance: shifting every
                                // valuation by a constant leaves the
                                // normalized gauge unchanged.
                                let shifted: Vec<(Ratio<i64>, JSet)> = labels
                                    .iter()
                                    .map(|j| {
                                        let v = varpi_set_valuation(&data, &point, j, false)
                                            .unwrap();
                                        (v + Ratio::new(1, 1), *j)
                                    })
                                    .collect();
                                let gv2 = gauge_sum(t, &shifted).unwrap();
                                pass &= gv2.values == gv.values;
                                for j in &labels {
                                    let x =
                                        varpi_set_valuation(&data, &point, j, false).unwrap();
                                    let y =
                                        varpi_set_valuation(&data, &point, j, true).unwrap();
                                    pass &= x + y == Ratio::new(j.len() as i64, 1);
                                    pass &= annihilation_identity_check(&data, &point, j)
                                        .unwrap();
                                }
                            }
                        }
                        // Advance the mixed-radix counter over the grid.
                        let mut i = 0;
                        while i < counters.len() {
                            counters[i] += 1;
                            if counters[i] < grid.len() {
                                break;
                            }
                            counters[i] = 0;
                            i += 1;
                        }
                        if counters.is_empty() || i == counters.len() {
                            break;
                        }
                    }
                }
            }
        }
    }
    report(10, "predictor-consistency", start, pass);
}

/// 11. Genericity degeneracy at p = 3: no reducible generic parameter
/// exists, and irreducible generic ones have digits r = (1, 0, ..., 0).
#[test]
fn criterion_11_p3_degeneracy() {
    let start = Instant::now();
    let mut pass = true;
    for f in 1..=3usize {
        let params = Params::new_allowing_p3(3, f).unwrap();
        pass &= all_reducible(params).all(|r| r.is_generic().is_none());
        let mut saw_generic = false;
        for rho in all_irreducible(params) {
            if let Some(w) = rho.is_generic() {
                saw_generic = true;
                pass &= w.r[0] == 1 && w.r[1..].iter().all(|&x| x == 0);
            }
        }
        pass &= saw_generic;
    }
    report(11, "p3-degeneracy", start, pass);
}

/// 12. Dual-embedding bound: the socle lattice at the base index sits
/// between the standard lattice and its p^f multiple.
#[test]
fn criterion_12_dual_embedding_bound() {
    let start = Instant::now();
    let mut pass = true;
    for f in 1..=2usize {
        let params = Params::new(5, f).unwrap();
        for t in ps_digit_classes(params) {
            let m = LatticeModule::induced(&t, default_precision(f)).unwrap();
            let simples = type_simples(&t, &m.field);
            let std = m.standard_lattice();
            let dualm = m.dual();
            let dstd = dualm.standard_lattice();
            let dual_mods: Vec<GModule> = simples
                .iter()
                .map(|(_, w, _)| GModule::simple_module(&m.field, &t.params, &w.dual(&t.params)))
                .collect();
            let empty = JSet::empty(f);
            let idx = simples.iter().position(|(j, _, _)| *j == empty).unwrap();
            let dl = dualm
                .sublattice_with_cosocle(&dstd, &dual_mods, idx)
                .unwrap();
            let socle = dualm.dual_lattice(&dl, f as u32).unwrap();
            let (socle, _) = m.renormalize(&socle).unwrap();
            // Primitive representative: contained in the standard lattice
            // with homothety gap at most f.
            pass &= m.raw_exponent(&socle, &std).unwrap() == 0;
            pass &= m.raw_exponent(&std, &socle).unwrap() <= f as u32;
        }
    }
    report(12, "dual-embedding-bound", start, pass);
}
