//! Command-line front end: enumeration and table commands, the lattice
//! predictor, the monomial-ideal checks, and the verification suites.
//!
//! Exit codes: 0 success, 1 usage error, 2 computation error, 3 theorem
//! violation (including failed verification suites).

use std::io::Write as _;
use std::path::PathBuf;

use clap::{CommandFactory, Parser, Subcommand};
use num_rational::Ratio;
use serde_json::{json, Value};

use tame_lattices::error::Error;
use tame_lattices::galois::{weight_interval, RhoBar};
use tame_lattices::gauge::{cosocle_gauge, socle_gauge};
use tame_lattices::ideals::{
    capped_intervals, cap_of, check_lemma_faces, check_lemma_ideals, cyclicity_induction_check,
    ideal_of_family, RingSpec,
};
use tame_lattices::params::{JSet, Params};
use tame_lattices::predictor::{predict_lattice, varpi_set_valuation, DefSpaceData, Point,
    PredictedLattice};
use tame_lattices::types::{CuspidalClass, TameType, TypeKind};
use tame_lattices::verify::{run_suite, Suite};

#[derive(Parser)]
#[command(
    name = "tame-lattices",
    version,
    about = "Jordan-Holder combinatorics of tame types, gauges of lattices, and monomial models"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format.
    #[arg(long, global = true, value_parser = ["table", "json"], default_value = "table")]
    out: String,
    /// Write the output to a file instead of standard output.
    #[arg(long, global = true)]
    out_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the admissible index set of a tame type.
    Ptau {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        f: usize,
        /// Type spec: ps:<a_eta>,<a_eta'> or cusp:<a_psi>.
        #[arg(long = "type")]
        type_spec: String,
    },
    /// List the Jordan-Holder factor descriptors of a tame type.
    Jh {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        f: usize,
        #[arg(long = "type")]
        type_spec: String,
    },
    /// The Serre-weight set of a generic semisimple parameter.
    Weights {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        f: usize,
        /// Parameter spec: red:<m1>,<m2> or irr:<M>.
        #[arg(long)]
        rhobar: String,
    },
    /// The modular interval of a (parameter, type) pair.
    Interval {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        f: usize,
        #[arg(long)]
        rhobar: String,
        #[arg(long = "type")]
        type_spec: String,
    },
    /// The closed-form gauge tables of both distinguished families.
    Gauge {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        f: usize,
        #[arg(long = "type")]
        type_spec: String,
    },
    /// Monomial-ideal checks over the standard ring on a ground set.
    Ideals {
        #[arg(long)]
        delta: usize,
        /// One of: faces, capped, example.
        #[arg(long, value_parser = ["faces", "capped", "example"])]
        check: String,
    },
    /// Predict the lattice gauge from an interval and a valuation point.
    Predict {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        f: usize,
        #[arg(long = "type")]
        type_spec: String,
        /// Bitmask of J_min.
        #[arg(long)]
        jmin: u32,
        /// Bitmask of J_max.
        #[arg(long)]
        jmax: u32,
        /// Comma list of rationals n/d, one per ground-set index.
        #[arg(long)]
        lambda: String,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(long, value_parser = ["jh", "filtration", "gauge", "chains", "bc", "ideals"])]
        suite: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        f: usize,
        /// Restrict to a single type.
        #[arg(long = "tau")]
        tau: Option<String>,
        /// Witt-ring precision exponent.
        #[arg(long)]
        precision: Option<u32>,
    },
}

enum RunErr {
    Usage(String),
    Lib(Error),
}

impl From<Error> for RunErr {
    fn from(e: Error) -> Self {
        RunErr::Lib(e)
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help and version requests are successes; everything else is
            // a usage error.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let out = cli.out.clone();
    let out_file = cli.out_file.clone();
    match dispatch(cli) {
        Ok((value, code)) => {
            let rendered = if out == "json" {
                serde_json::to_string_pretty(&value).expect("serializable") + "\n"
            } else {
                render_table(&value)
            };
            if let Some(path) = out_file {
                if let Err(e) = std::fs::write(&path, rendered) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    std::process::exit(2);
                }
            } else {
                let mut stdout = std::io::stdout();
                let _ = stdout.write_all(rendered.as_bytes());
            }
            std::process::exit(code);
        }
        Err(RunErr::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            eprintln!();
            let _ = Cli::command().print_help();
            std::process::exit(1);
        }
        Err(RunErr::Lib(e)) => {
            let code = match e {
                Error::TheoremViolation(_) => 3,
                _ => 2,
            };
            eprintln!("error: {e}");
            std::process::exit(code);
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing helpers.
// ---------------------------------------------------------------------------

fn parse_type(params: Params, spec: &str) -> Result<TameType, RunErr> {
    if let Some(rest) = spec.strip_prefix("ps:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 {
            return Err(RunErr::Usage(format!(
                "type spec '{spec}' must be ps:<a_eta>,<a_eta'>"
            )));
        }
        let a: u64 = parts[0]
            .parse()
            .map_err(|_| RunErr::Usage(format!("bad exponent '{}'", parts[0])))?;
        let b: u64 = parts[1]
            .parse()
            .map_err(|_| RunErr::Usage(format!("bad exponent '{}'", parts[1])))?;
        Ok(TameType::make_ps(params, a, b)?)
    } else if let Some(rest) = spec.strip_prefix("cusp:") {
        let a: u64 = rest
            .parse()
            .map_err(|_| RunErr::Usage(format!("bad exponent '{rest}'")))?;
        Ok(TameType::make_cuspidal(params, a)?)
    } else {
        Err(RunErr::Usage(format!(
            "type spec '{spec}' must start with ps: or cusp:"
        )))
    }
}

fn parse_rhobar(params: Params, spec: &str) -> Result<RhoBar, RunErr> {
    if let Some(rest) = spec.strip_prefix("red:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 {
            return Err(RunErr::Usage(format!(
                "parameter spec '{spec}' must be red:<m1>,<m2>"
            )));
        }
        let m1: u64 = parts[0]
            .parse()
            .map_err(|_| RunErr::Usage(format!("bad exponent '{}'", parts[0])))?;
        let m2: u64 = parts[1]
            .parse()
            .map_err(|_| RunErr::Usage(format!("bad exponent '{}'", parts[1])))?;
        Ok(RhoBar::reducible(params, m1, m2))
    } else if let Some(rest) = spec.strip_prefix("irr:") {
        let m: u64 = rest
            .parse()
            .map_err(|_| RunErr::Usage(format!("bad exponent '{rest}'")))?;
        Ok(RhoBar::irreducible(params, m)?)
    } else {
        Err(RunErr::Usage(format!(
            "parameter spec '{spec}' must start with red: or irr:"
        )))
    }
}

fn parse_rational(s: &str) -> Result<Ratio<i64>, RunErr> {
    let bad = || RunErr::Usage(format!("bad rational '{s}' (expected n or n/d)"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        Ok(Ratio::new(n, d))
    } else {
        let n: i64 = s.trim().parse().map_err(|_| bad())?;
        Ok(Ratio::from_integer(n))
    }
}

fn parse_lambda(spec: &str, delta: &JSet) -> Result<Point, RunErr> {
    let parts: Vec<&str> = if spec.is_empty() {
        vec![]
    } else {
        spec.split(',').collect()
    };
    let idx: Vec<usize> = delta.iter().collect();
    if parts.len() != idx.len() {
        return Err(RunErr::Usage(format!(
            "lambda has {} entries but the ground set has {}",
            parts.len(),
            idx.len()
        )));
    }
    let mut coords = Vec::with_capacity(idx.len());
    for (j, s) in idx.into_iter().zip(parts) {
        coords.push((j, parse_rational(s)?));
    }
    Ok(Point::new(delta, &coords)?)
}

fn ratio_str(r: &Ratio<i64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

// ---------------------------------------------------------------------------
// Subcommands.
// ---------------------------------------------------------------------------

fn dispatch(cli: Cli) -> Result<(Value, i32), RunErr> {
    match cli.cmd {
        Cmd::Ptau { p, f, type_spec } => {
            let params = Params::new(p, f)?;
            let tau = parse_type(params, &type_spec)?;
            let masks: Vec<u32> = tau.p_tau().iter().map(|j| j.bits).collect();
            Ok((
                json!({
                    "config": {"command": "ptau", "p": p, "f": f, "type": type_spec},
                    "p_tau": masks,
                }),
                0,
            ))
        }
        Cmd::Jh { p, f, type_spec } => {
            let params = Params::new(p, f)?;
            let tau = parse_type(params, &type_spec)?;
            let factors: Vec<Value> = tau
                .jh_factors()
                .into_iter()
                .map(|(j, w)| json!({"j": j.bits, "weight": w}))
                .collect();
            Ok((
                json!({
                    "config": {"command": "jh", "p": p, "f": f, "type": type_spec},
                    "tau": tau,
                    "factors": factors,
                }),
                0,
            ))
        }
        Cmd::Weights { p, f, rhobar } => {
            let params = Params::new(p, f)?;
            let rho = parse_rhobar(params, &rhobar)?;
            if rho.is_generic().is_none() {
                return Err(RunErr::Lib(Error::Precondition(format!(
                    "parameter '{rhobar}' is not generic"
                ))));
            }
            let weights: Vec<_> = rho.weight_set().into_iter().collect();
            Ok((
                json!({
                    "config": {"command": "weights", "p": p, "f": f, "rhobar": rhobar},
                    "weights": weights,
                }),
                0,
            ))
        }
        Cmd::Interval {
            p,
            f,
            rhobar,
            type_spec,
        } => {
            let params = Params::new(p, f)?;
            let rho = parse_rhobar(params, &rhobar)?;
            let tau = parse_type(params, &type_spec)?;
            if rho.is_generic().is_none() {
                return Err(RunErr::Lib(Error::Precondition(format!(
                    "parameter '{rhobar}' is not generic"
                ))));
            }
            let interval = weight_interval(&rho, &tau)?;
            let result = match interval {
                None => json!({"empty": true}),
                Some(iv) => json!({
                    "empty": false,
                    "j_min": iv.j_min.bits,
                    "j_max": iv.j_max.bits,
                }),
            };
            Ok((
                json!({
                    "config": {"command": "interval", "p": p, "f": f,
                               "rhobar": rhobar, "type": type_spec},
                    "interval": result,
                }),
                0,
            ))
        }
        Cmd::Gauge { p, f, type_spec } => {
            let params = Params::new(p, f)?;
            let tau = parse_type(params, &type_spec)?;
            let labels = tau.relabeled_indices()?;
            let mut cosocle = Vec::new();
            let mut socle = Vec::new();
            for j in &labels {
                cosocle.push(json!({"j": j.bits, "gauge": cosocle_gauge(&tau, j)?.to_json()}));
                socle.push(json!({"j": j.bits, "gauge": socle_gauge(&tau, j)?.to_json()}));
            }
            Ok((
                json!({
                    "config": {"command": "gauge", "p": p, "f": f, "type": type_spec},
                    "tau": tau,
                    "cosocle": cosocle,
                    "socle": socle,
                }),
                0,
            ))
        }
        Cmd::Ideals { delta, check } => {
            let (value, code) = ideals_command(delta, &check)?;
            Ok((
                json!({
                    "config": {"command": "ideals", "delta": delta, "check": check},
                    "report": value,
                }),
                code,
            ))
        }
        Cmd::Predict {
            p,
            f,
            type_spec,
            jmin,
            jmax,
            lambda,
        } => {
            let params = Params::new(p, f)?;
            let tau = parse_type(params, &type_spec)?;
            let j_min = JSet::from_bits(f, jmin)?;
            let j_max = JSet::from_bits(f, jmax)?;
            // An irregular cuspidal type has a single relevant index and no
            // window, so resolve it before any window data is built.
            let result = if tau.kind == TypeKind::Cuspidal
                && matches!(
                    tau.classify_cuspidal()?,
                    CuspidalClass::Irregular { .. }
                ) {
                let point = Point::constant(&JSet::from_elems(f, []), Ratio::from_integer(0))?;
                match predict_lattice(&tau, &j_min, &j_max, &point)? {
                    PredictedLattice::SocleLattice { j } => {
                        json!({"socle_lattice": {"j": j.bits}})
                    }
                    PredictedLattice::Gauge(_) => unreachable!("irregular type"),
                }
            } else {
                let data = DefSpaceData::new(&tau, &j_min, &j_max)?;
                let point = parse_lambda(&lambda, &data.delta())?;
                match predict_lattice(&tau, &j_min, &j_max, &point)? {
                    PredictedLattice::SocleLattice { j } => {
                        json!({"socle_lattice": {"j": j.bits}})
                    }
                    PredictedLattice::Gauge(gv) => {
                        let mut entries = Vec::new();
                        let mut terms = Vec::new();
                        for j in tau.relabeled_indices()? {
                            let v = varpi_set_valuation(&data, &point, &j, false)?;
                            terms.push(format!("p^{} L[{}]", ratio_str(&v), j.bits));
                            entries.push(json!({"j": j.bits, "v": ratio_str(&v)}));
                        }
                        json!({
                            "gauge": gv.to_json(),
                            "entries": entries,
                            "lattice": terms.join(" + "),
                        })
                    }
                }
            };
            Ok((
                json!({
                    "config": {"command": "predict", "p": p, "f": f, "type": type_spec,
                               "jmin": jmin, "jmax": jmax, "lambda": lambda},
                    "prediction": result,
                }),
                0,
            ))
        }
        Cmd::Verify {
            suite,
            p,
            f,
            tau,
            precision,
        } => {
            let params = Params::new(p, f)?;
            let suite = Suite::parse(&suite)
                .ok_or_else(|| RunErr::Usage(format!("unknown suite '{suite}'")))?;
            let tau = match tau {
                Some(s) => Some(parse_type(params, &s)?),
                None => None,
            };
            let precision = precision.or_else(|| {
                std::env::var("TAME_LATTICES_PRECISION")
                    .ok()
                    .and_then(|v| v.parse().ok())
            });
            let report = run_suite(suite, p, f, tau, precision)?;
            let code = if report.pass() { 0 } else { 3 };
            Ok((
                json!({
                    "config": {"command": "verify", "suite": report.suite, "p": p, "f": f,
                               "precision": report.precision},
                    "report": report.to_json(),
                }),
                code,
            ))
        }
    }
}

fn ideals_command(delta: usize, check: &str) -> Result<(Value, i32), RunErr> {
    let ring = RingSpec::standard(delta)?;
    match check {
        "faces" => {
            let mut cases = 0;
            let mut counterexamples = Vec::new();
            for j2 in JSet::all(delta) {
                for j1 in JSet::all(delta) {
                    if !j1.is_subset_of(&j2) {
                        continue;
                    }
                    cases += 1;
                    let r = check_lemma_faces(ring, &j1, &j2)?;
                    if !r.pass {
                        counterexamples.extend(r.failures);
                    }
                }
            }
            let pass = counterexamples.is_empty();
            Ok((
                json!({"pass": pass, "cases": cases, "counterexamples": counterexamples}),
                if pass { 0 } else { 3 },
            ))
        }
        "capped" => {
            let capped = capped_intervals(ring);
            let mut cases = 0;
            let mut counterexamples = Vec::new();
            for fam in &capped {
                cases += 1;
                if let Err(e) = cyclicity_induction_check(ring, fam) {
                    counterexamples.push(format!("cyclicity: {e}"));
                }
            }
            for f1 in &capped {
                for f2 in &capped {
                    if cap_of(ring, f1)? != cap_of(ring, f2)? {
                        continue;
                    }
                    cases += 1;
                    let r = check_lemma_ideals(ring, f1, f2)?;
                    if !r.pass {
                        counterexamples.extend(r.failures);
                    }
                }
            }
            let pass = counterexamples.is_empty();
            Ok((
                json!({"pass": pass, "cases": cases, "counterexamples": counterexamples}),
                if pass { 0 } else { 3 },
            ))
        }
        "example" => {
            if delta != 2 {
                return Err(RunErr::Usage(
                    "the worked example requires --delta 2".into(),
                ));
            }
            let js = |elems: &[usize]| JSet::from_elems(2, elems.iter().copied());
            let (top, bot) = (js(&[0, 1]), js(&[]));
            let mut computations = Vec::new();
            let mut pass = true;
            let mut push = |label: &str,
                            fam1: Vec<JSet>,
                            fam2: Vec<JSet>,
                            exp1: &str,
                            exp2: &str,
                            exp_sum: &str|
             -> Result<(), RunErr> {
                let i1 = ideal_of_family(ring, &fam1)?;
                let i2 = ideal_of_family(ring, &fam2)?;
                let sum = i1.sum(&i2)?;
                let ok =
                    i1.to_string() == exp1 && i2.to_string() == exp2 && sum.to_string() == exp_sum;
                pass &= ok;
                computations.push(json!({
                    "label": label,
                    "i1": i1.to_string(),
                    "i2": i2.to_string(),
                    "sum": sum.to_string(),
                    "matches": ok,
                }));
                Ok(())
            };
            push(
                "corners",
                vec![top],
                vec![bot],
                "(X'_0, X'_1)",
                "(Y'_0, Y'_1)",
                "(X'_0, X'_1, Y'_0, Y'_1)",
            )?;
            push(
                "edges",
                vec![top, js(&[0])],
                vec![js(&[1]), bot],
                "(X'_0)",
                "(Y'_0)",
                "(X'_0, Y'_0)",
            )?;
            push(
                "edge-diagonal",
                vec![top, js(&[0])],
                vec![top, bot],
                "(X'_0)",
                "(X'_0*Y'_1, X'_1*Y'_0)",
                "(X'_0, X'_1*Y'_0)",
            )?;
            Ok((
                json!({"pass": pass, "computations": computations}),
                if pass { 0 } else { 3 },
            ))
        }
        _ => Err(RunErr::Usage(format!("unknown check '{check}'"))),
    }
}

// ---------------------------------------------------------------------------
// Table rendering: a deterministic flat rendering of the same JSON data.
// ---------------------------------------------------------------------------

fn render_table(value: &Value) -> String {
    let mut out = String::new();
    render_into(value, "", &mut out);
    out
}

fn render_into(value: &Value, prefix: &str, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                render_into(v, &key, out);
            }
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str(&format!("{prefix}: []\n"));
            }
            for (i, v) in items.iter().enumerate() {
                render_into(v, &format!("{prefix}[{i}]"), out);
            }
        }
        scalar => {
            out.push_str(&format!("{prefix}: {scalar}\n"));
        }
    }
}
