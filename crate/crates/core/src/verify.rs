//! Named verification suites shared by the command-line `verify`
//! subcommand and the acceptance tests: each runs an exhaustive check at
//! the given parameters and reports pass/fail with witnesses and timing.

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use crate::engine::gmodule::{self, GModule};
use crate::engine::lattice::{cosocle_family, measure_gauge, type_simples, LatticeModule};
use crate::error::Result;
use crate::gauge::{
    cosocle_gauge, predicted_filtration, saturated_chain, socle_gauge, FiltrationDirection,
};
use crate::ideals::{
    capped_intervals, cap_of, check_lemma_faces, check_lemma_ideals, cyclicity_induction_check,
    RingSpec,
};
use crate::params::{JSet, Params};
use crate::types::{all_cuspidal_types, all_ps_types, TameType, TypeKind};
use crate::weight::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Jh,
    Filtration,
    Gauge,
    Chains,
    Bc,
    Ideals,
}

impl Suite {
    pub fn parse(name: &str) -> Option<Suite> {
        Some(match name {
            "jh" => Suite::Jh,
            "filtration" => Suite::Filtration,
            "gauge" => Suite::Gauge,
            "chains" => Suite::Chains,
            "bc" => Suite::Bc,
            "ideals" => Suite::Ideals,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Jh => "jh",
            Suite::Filtration => "filtration",
            Suite::Gauge => "gauge",
            Suite::Chains => "chains",
            Suite::Bc => "bc",
            Suite::Ideals => "ideals",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub p: u64,
    pub f: usize,
    pub precision: u32,
    pub cases: usize,
    pub failures: Vec<String>,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "suite": self.suite,
            "p": self.p,
            "f": self.f,
            "precision": self.precision,
            "cases": self.cases,
            "pass": self.pass(),
            "failures": self.failures,
            "elapsed_ms": self.elapsed_ms as u64,
        })
    }
}

/// Default Witt-ring precision: gauges in scope are at most f, plus guard
/// digits for renormalization.
pub fn default_precision(f: usize) -> u32 {
    f as u32 + 3
}

fn ps_types(params: Params, tau: &Option<TameType>) -> Vec<TameType> {
    match tau {
        Some(t) => {
            if t.kind == TypeKind::PrincipalSeries {
                vec![t.clone()]
            } else {
                vec![]
            }
        }
        None => all_ps_types(params).collect(),
    }
}

fn all_types(params: Params, tau: &Option<TameType>) -> Vec<TameType> {
    match tau {
        Some(t) => vec![t.clone()],
        None => all_ps_types(params)
            .chain(all_cuspidal_types(params))
            .collect(),
    }
}

pub fn run_suite(
    suite: Suite,
    p: u64,
    f: usize,
    tau: Option<TameType>,
    precision: Option<u32>,
) -> Result<SuiteReport> {
    let params = Params::new(p, f)?;
    let precision = precision.unwrap_or_else(|| default_precision(f));
    let start = Instant::now();
    let (cases, failures) = match suite {
        Suite::Jh => jh_suite(params, &tau, precision)?,
        Suite::Filtration => filtration_suite(params, &tau, precision)?,
        Suite::Gauge => gauge_suite(params, &tau, precision)?,
        Suite::Chains => chains_suite(params, &tau)?,
        Suite::Bc => bc_suite(params, &tau)?,
        Suite::Ideals => ideals_suite(f)?,
    };
    Ok(SuiteReport {
        suite: suite.name(),
        p,
        f,
        precision,
        cases,
        failures,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

fn collect_par<T, G>(items: Vec<T>, check: G) -> (usize, Vec<String>)
where
    T: Send + Sync,
    G: Fn(&T) -> Vec<String> + Sync,
{
    let cases = items.len();
    let mut failures: Vec<String> = items.par_iter().flat_map_iter(|t| check(t)).collect();
    failures.sort();
    (cases, failures)
}

/// Sweeps every type in `types`, but runs the check once per digit class
/// of `c` and reuses the verdict: twisting both characters multiplies each
/// generator matrix by a unit scalar, which changes neither the lattice of
/// submodules nor any containment of lattices, and all predicted data is
/// indexed by the digit class alone.
fn collect_by_digit_class<G>(types: Vec<TameType>, check: G) -> (usize, Vec<String>)
where
    G: Fn(&TameType) -> Vec<String>,
{
    let cases = types.len();
    let mut memo: HashMap<(TypeKind, Vec<u64>), Vec<String>> = HashMap::new();
    let mut failures = Vec::new();
    for t in &types {
        let key = (t.kind, t.c_digits.clone());
        let fails = memo.entry(key).or_insert_with(|| check(t));
        failures.extend(fails.iter().cloned());
    }
    failures.sort();
    failures.dedup();
    (cases, failures)
}

fn describe(tau: &TameType) -> String {
    match tau.kind {
        TypeKind::PrincipalSeries => format!(
            "ps:{},{}",
            tau.exponents[0], tau.exponents[1]
        ),
        TypeKind::Cuspidal => format!("cusp:{}", tau.exponents[0]),
    }
}

/// Reduction of the standard induced lattice has exactly the predicted
/// composition factors, each once.
fn jh_suite(
    params: Params,
    tau: &Option<TameType>,
    precision: u32,
) -> Result<(usize, Vec<String>)> {
    let types = ps_types(params, tau);
    Ok(collect_by_digit_class(types, |t| {
        let run = || -> Result<Vec<String>> {
            let m = LatticeModule::induced(t, precision)?;
            let simples = type_simples(t, &m.field);
            let mods: Vec<GModule> = simples.iter().map(|(_, _, s)| s.clone()).collect();
            let red = m.reduction(&m.standard_lattice())?;
            let mults = gmodule::jh_multiset(&red, &mods)?;
            if mults.iter().all(|&x| x == 1) {
                Ok(vec![])
            } else {
                Ok(vec![format!(
                    "{}: multiplicities {mults:?}",
                    describe(t)
                )])
            }
        };
        run().unwrap_or_else(|e| vec![format!("{}: {e}", describe(t))])
    }))
}

/// Radical filtration of the reduction of each distinguished lattice
/// matches the predicted distance layers, and every predicted adjacent
/// pair is a nonsplit extension.
fn filtration_suite(
    params: Params,
    tau: &Option<TameType>,
    precision: u32,
) -> Result<(usize, Vec<String>)> {
    let types = ps_types(params, tau);
    Ok(collect_by_digit_class(types, |t| {
        check_filtrations(t, precision).unwrap_or_else(|e| vec![format!("{}: {e}", describe(t))])
    }))
}

pub fn check_filtrations(t: &TameType, precision: u32) -> Result<Vec<String>> {
    let mut failures = Vec::new();
    let m = LatticeModule::induced(t, precision)?;
    let simples = type_simples(t, &m.field);
    let mods: Vec<GModule> = simples.iter().map(|(_, _, s)| s.clone()).collect();
    let std = m.standard_lattice();
    for (target, (j, _, _)) in simples.iter().enumerate() {
        let lat = m.sublattice_with_cosocle(&std, &mods, target)?;
        let red = m.reduction(&lat)?;
        let layers = gmodule::radical_series(&red, &mods)?;
        let predicted = predicted_filtration(t, j, FiltrationDirection::Cosocle)?;
        // Compare layer multisets.
        let expected: Vec<Vec<usize>> = predicted
            .layers
            .iter()
            .map(|layer| {
                simples
                    .iter()
                    .map(|(j2, _, _)| layer.iter().filter(|(lj, _)| lj == j2).count())
                    .collect()
            })
            .collect();
        if layers != expected {
            failures.push(format!(
                "{} J={j}: layers {layers:?} != predicted {expected:?}",
                describe(t)
            ));
            continue;
        }
        // Nonsplit adjacency on consecutive two-layer subquotients.
        let mut cur = red.clone();
        for i in 0..layers.len().saturating_sub(1) {
            // N = cur / rad^2(cur) spans layers i and i+1.
            let rad1 = gmodule::radical_basis(&cur, &mods);
            let (r1mod, r1basis) = gmodule::submodule_on(&cur, &rad1);
            let rad2 = gmodule::radical_basis(&r1mod, &mods);
            let rad2_in_cur = rad2.mul(&r1basis);
            let n = gmodule::quotient_by(&cur, &rad2_in_cur).0;
            for (j1, j2) in &predicted.nonsplit_adjacent {
                let d1 = j.symmetric_difference(j1).len();
                if d1 != i {
                    continue;
                }
                let top = simples.iter().position(|(x, _, _)| x == j1).unwrap();
                let bot = simples.iter().position(|(x, _, _)| x == j2).unwrap();
                match gmodule::has_nonsplit_ext(&n, &mods, top, bot) {
                    Ok(true) => {}
                    Ok(false) => failures.push(format!(
                        "{} J={j}: split adjacent pair ({j1}, {j2})",
                        describe(t)
                    )),
                    Err(e) => failures.push(format!(
                        "{} J={j}: nonsplit check ({j1}, {j2}): {e}",
                        describe(t)
                    )),
                }
            }
            cur = r1mod;
        }
    }
    Ok(failures)
}

/// Measured gauges of both distinguished families equal the closed forms.
fn gauge_suite(
    params: Params,
    tau: &Option<TameType>,
    precision: u32,
) -> Result<(usize, Vec<String>)> {
    let types = ps_types(params, tau);
    Ok(collect_by_digit_class(types, |t| {
        check_gauges(t, precision).unwrap_or_else(|e| vec![format!("{}: {e}", describe(t))])
    }))
}

pub fn check_gauges(t: &TameType, precision: u32) -> Result<Vec<String>> {
    let mut failures = Vec::new();
    let m = LatticeModule::induced(t, precision)?;
    let simples = type_simples(t, &m.field);
    let family = cosocle_family(&m, &simples)?;
    for (j, lat) in &family {
        let measured = measure_gauge(&m, t, &family, lat)?;
        let expected = cosocle_gauge(t, j)?;
        if measured.values != expected.values {
            failures.push(format!(
                "{} cosocle J={j}: measured {measured:?} != closed form",
                describe(t)
            ));
        }
    }
    // Socle family through scaled duals.
    let dualm = m.dual();
    let dstd = dualm.standard_lattice();
    let dual_mods: Vec<GModule> = simples
        .iter()
        .map(|(_, w, _)| GModule::simple_module(&m.field, &t.params, &w.dual(&t.params)))
        .collect();
    let c = t.params.f as u32;
    for (idx, (j, _, _)) in simples.iter().enumerate() {
        let dl = dualm.sublattice_with_cosocle(&dstd, &dual_mods, idx)?;
        let socle_lat = dualm.dual_lattice(&dl, c)?;
        let (socle_lat, _) = m.renormalize(&socle_lat)?;
        let measured = measure_gauge(&m, t, &family, &socle_lat)?;
        let expected = socle_gauge(t, j)?;
        if measured.values != expected.values {
            failures.push(format!(
                "{} socle J={j}: measured {measured:?} != closed form",
                describe(t)
            ));
        }
    }
    Ok(failures)
}

/// Every nested pair of relabeled admissible indices is joined by a
/// saturated admissible chain.
fn chain_check(t: &TameType) -> Vec<String> {
    let Ok(labels) = t.relabeled_indices() else {
        // Irregular cuspidal types have no distinguished-lattice family.
        return vec![];
    };
    let mut fails = Vec::new();
    for a in &labels {
        for b in &labels {
            if !a.is_subset_of(b) {
                continue;
            }
            match saturated_chain(t, a, b) {
                Ok(chain) => {
                    if chain.len() != b.len() - a.len() + 1 {
                        fails.push(format!(
                            "{}: chain {a} -> {b} has wrong length",
                            describe(t)
                        ));
                    }
                }
                Err(e) => fails.push(format!("{}: {a} -> {b}: {e}", describe(t))),
            }
        }
    }
    fails
}

fn chains_suite(params: Params, tau: &Option<TameType>) -> Result<(usize, Vec<String>)> {
    let types: Box<dyn Iterator<Item = TameType>> = match tau {
        Some(t) => Box::new(std::iter::once(t.clone())),
        None => Box::new(all_ps_types(params).chain(all_cuspidal_types(params))),
    };
    // The admissible-index combinatorics (membership, relabeling, chains)
    // depend only on the kind and the digits of c, so the pair check runs
    // once per digit class and its verdict is reused across twists.
    let mut memo: HashMap<(TypeKind, Vec<u64>), Vec<String>> = HashMap::new();
    let mut failures = Vec::new();
    let mut cases = 0usize;
    for t in types {
        cases += 1;
        let key = (t.kind, t.c_digits.clone());
        let fails = memo.entry(key).or_insert_with(|| chain_check(&t));
        failures.extend(fails.iter().cloned());
    }
    failures.sort();
    failures.dedup();
    Ok((cases, failures))
}

/// Base change intertwines the JH-factor descriptors.
fn bc_suite(params: Params, tau: &Option<TameType>) -> Result<(usize, Vec<String>)> {
    let types = all_types(params, tau);
    Ok(collect_par(types, |t| {
        let run = || -> Result<Vec<String>> {
            let mut fails = Vec::new();
            let t2 = t.bc_type()?;
            for (j, w) in t.jh_factors() {
                let expected: Weight = w.base_change(&t.params);
                let got = t2.jh_factor(&t.bc_jset(&j))?;
                if got != expected {
                    fails.push(format!(
                        "{} J={j}: base change gives {got:?}, expected {expected:?}",
                        describe(t)
                    ));
                }
            }
            Ok(fails)
        };
        run().unwrap_or_else(|e| vec![format!("{}: {e}", describe(t))])
    }))
}

/// The face and capped-interval ideal identities, exhaustively over the
/// standard ring on a ground set of the given size, plus the cyclicity
/// induction on every capped interval.
fn ideals_suite(delta: usize) -> Result<(usize, Vec<String>)> {
    let ring = RingSpec::standard(delta)?;
    let mut failures = Vec::new();
    let mut cases = 0usize;
    for j2 in JSet::all(delta) {
        for j1 in JSet::all(delta) {
            if !j1.is_subset_of(&j2) {
                continue;
            }
            cases += 1;
            let report = check_lemma_faces(ring, &j1, &j2)?;
            if !report.pass {
                failures.extend(report.failures);
            }
        }
    }
    let capped = capped_intervals(ring);
    for fam in &capped {
        cases += 1;
        if let Err(e) = cyclicity_induction_check(ring, fam) {
            failures.push(format!("cyclicity on {fam:?}: {e}"));
        }
    }
    for f1 in &capped {
        for f2 in &capped {
            if cap_of(ring, f1)? != cap_of(ring, f2)? {
                continue;
            }
            cases += 1;
            let report = check_lemma_ideals(ring, f1, f2)?;
            if !report.pass {
                failures.extend(report.failures);
            }
        }
    }
    failures.sort();
    Ok((cases, failures))
}
