use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use lienard::cycles::{anchor_census, census, CycleCensus, CycleOptions};
use lienard::flow::integrate;
use lienard::rotate::{certify_rotation_monotonicity, construct_configuration, sweep as run_sweep, Certification, SweepPlan};
use lienard::singular::{analyze, contour_index, find_finite_singularities, poincare_index, Alternation, LedgerStatus};
use lienard::system::{canonical_field, odd_restoring_field};
use lienard::verify;
use lienard::{BivariatePoly, Canonical64, FlowOptions, Sign, System64, SystemSpec, Terminal};
use num_rational::Rational64;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::CliError;

type Outcome = Result<(Value, bool), CliError>;

fn config_json(cfg: &RunConfig) -> Value {
    serde_json::to_value(cfg).expect("config serializes")
}

fn csv_file(dir: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

pub fn singular(cfg: &mut RunConfig) -> Outcome {
    let sys = cfg.system()?;
    let report = analyze(&sys);
    let ok = report.ledger.status != LedgerStatus::Unbalanced && report.alternation != Alternation::Fail;
    Ok((json!({"command": "singular", "config": config_json(cfg), "report": report}), ok))
}

pub fn index(cfg: &mut RunConfig) -> Outcome {
    let sys = cfg.system()?;
    let center = [*cfg.x.get_or_insert(0.0), *cfg.y.get_or_insert(0.0)];
    let radius = *cfg.radius.get_or_insert(0.1);
    let (idx, method) = match cfg.samples {
        Some(n) => (poincare_index(&sys, center, radius, n), "fixed"),
        None => (contour_index(&sys, center, radius), "adaptive"),
    };
    let idx = idx.map_err(|e| CliError::Analysis(format!("index: {e}")))?;
    Ok((json!({"command": "index", "config": config_json(cfg), "method": method, "index": idx}), true))
}

fn write_profiles(sys: &System64, opts: &CycleOptions<f64>, dir: &Path) -> Result<Vec<String>, CliError> {
    let mut files = Vec::new();
    for (i, a) in find_finite_singularities(sys).iter().filter(|p| p.is_anti_saddle()).enumerate() {
        let (_, profile) = anchor_census(sys, a, opts);
        if let Some(p) = profile {
            let name = format!("profile_{i}.csv");
            p.write_csv(csv_file(dir, &name)?)?;
            files.push(name);
        }
    }
    Ok(files)
}

fn census_ok(c: &CycleCensus<f64>) -> bool {
    c.anchors.iter().all(|a| a.ok_samples > 0 || a.note.is_some())
}

pub fn cycles(cfg: &mut RunConfig) -> Outcome {
    let sys = cfg.system()?;
    let opts = cfg.resolve_cycle_options();
    let c = census(&sys, &opts);
    let files = match &cfg.csv_dir {
        Some(dir) => write_profiles(&sys, &opts, dir)?,
        None => Vec::new(),
    };
    let ok = census_ok(&c);
    let report = json!({
        "command": "cycles",
        "config": config_json(cfg),
        "census": c,
        "totals": c.totals,
        "profiles": files,
    });
    Ok((report, ok))
}

pub fn sweep(cfg: &mut RunConfig) -> Outcome {
    let spec = cfg.plan.clone().ok_or_else(|| CliError::Config("sweep needs a plan (--plan or config `plan`)".into()))?;
    let template = spec.template.to_system().map_err(|e| CliError::Config(e.to_string()))?;
    let plan = SweepPlan { template, order: spec.order };
    plan.validate().map_err(|e| CliError::Config(e.to_string()))?;
    let opts = cfg.resolve_cycle_options();
    let log = run_sweep(&plan, &opts).map_err(|e| CliError::Analysis(e.to_string()))?;
    let ok = log.aborted.is_none() && log.parity_violations.is_empty() && log.monotonicity_violations.is_empty();
    let report = json!({
        "command": "sweep",
        "config": config_json(cfg),
        "alternating": plan.is_alternating(),
        "log": log,
    });
    Ok((report, ok))
}

/// `(k, l, beta_odd, even_signs)` from flags/config, with unset pieces
/// filled in and written back.
fn canonical_shape(cfg: &mut RunConfig) -> Result<(usize, usize, Vec<f64>, Vec<Sign>), CliError> {
    let k = cfg.k.ok_or_else(|| CliError::Config("--k is required".into()))?;
    let l = *cfg.l.get_or_insert(cfg.beta_odd.as_ref().map_or(0, |b| b.len()));
    let beta_odd = cfg.beta_odd.get_or_insert_with(|| vec![0.0; l]).clone();
    let signs = cfg.even_signs.get_or_insert_with(|| vec![Sign::Plus; l]).clone();
    if beta_odd.len() != l || signs.len() != l {
        return Err(CliError::Config(format!(
            "l = {l} needs {l} beta_odd values and {l} even signs, got {} and {}",
            beta_odd.len(),
            signs.len()
        )));
    }
    Ok((k, l, beta_odd, signs))
}

pub fn construct(cfg: &mut RunConfig) -> Outcome {
    let (k, l, beta_odd, signs) = canonical_shape(cfg)?;
    let copts = cfg.resolve_construct_options();
    let opts = cfg.resolve_cycle_options();
    let c = construct_configuration(k, l, &beta_odd, &signs, &copts, &opts)
        .map_err(|e| CliError::Analysis(e.to_string()))?;
    let report = json!({
        "command": "construct",
        "config": config_json(cfg),
        "system": SystemSpec::from_canonical(&c.system),
        "alpha_even": c.system.alpha_even,
        "target": c.target,
        "reached": c.reached,
        "totals": c.census.totals,
        "census": c.census,
        "adjustments": c.adjustments,
        "history": c.history,
        "diagnostic": c.diagnostic,
    });
    Ok((report, c.reached))
}

/// Single-term polynomials in the usual notation (`y^2`, `-x^2*y`).
fn monomial_text(p: &BivariatePoly<Rational64>) -> String {
    let terms: Vec<_> = p.terms().collect();
    if terms.len() != 1 {
        return p.to_string();
    }
    let (&(a, b), c) = terms[0];
    let mut factors = Vec::new();
    for (v, e) in [("x", a), ("y", b)] {
        match e {
            0 => {}
            1 => factors.push(v.to_string()),
            _ => factors.push(format!("{v}^{e}")),
        }
    }
    let body = factors.join("*");
    let one = Rational64::from_integer(1);
    if *c == one {
        if body.is_empty() { "1".into() } else { body }
    } else if *c == -one {
        if body.is_empty() { "-1".into() } else { format!("-{body}") }
    } else if body.is_empty() {
        c.to_string()
    } else {
        format!("{c}*{body}")
    }
}

fn exact(v: f64) -> Result<Rational64, CliError> {
    Rational64::approximate_float(v).ok_or_else(|| CliError::Config(format!("{v} has no 64-bit rational approximation")))
}

pub fn certify(cfg: &mut RunConfig) -> Outcome {
    if cfg.k.is_none() {
        if let Some(spec) = &cfg.system {
            let sys = spec.to_system().map_err(|e| CliError::Config(e.to_string()))?;
            let c = Canonical64::from_system(&sys)
                .ok_or_else(|| CliError::Config("system is not in canonical form; pass --k/--l".into()))?;
            cfg.k = Some(c.k);
            cfg.l = Some(c.l);
            cfg.beta_odd = Some(c.beta_odd);
            cfg.even_signs = Some(c.even_signs);
        }
    }
    let (k, _, beta_odd, signs) = canonical_shape(cfg)?;
    let beta_q: Vec<Rational64> = beta_odd.iter().map(|&b| exact(b)).collect::<Result<_, _>>()?;
    let one = Rational64::from_integer(1);
    let mut rows = Vec::new();
    let mut all = true;
    let field = canonical_field(k, &beta_q, &signs).map_err(|e| CliError::Config(e.to_string()))?;
    for i in 0..=k {
        let want = BivariatePoly::monomial(2 * i as u32, 2, one);
        let got = field.rotation_determinant(i).map_err(|e| CliError::Analysis(e.to_string()))?;
        rows.push(delta_row(&field.names[i], got.to_bivariate(), &want, &mut all));
    }
    let field = odd_restoring_field::<Rational64>(k, &signs).map_err(|e| CliError::Config(e.to_string()))?;
    for j in 0..signs.len() {
        let want = BivariatePoly::monomial(2 * j as u32 + 2, 1, -one);
        let got = field.rotation_determinant(j).map_err(|e| CliError::Analysis(e.to_string()))?;
        rows.push(delta_row(&field.names[j], got.to_bivariate(), &want, &mut all));
    }
    let mut report = json!({"command": "certify", "determinants": rows});
    let mut ok = all;
    if let Some(spec) = &cfg.system {
        let sys = spec.to_system().map_err(|e| CliError::Config(e.to_string()))?;
        report["symmetry"] = json!(sys.symmetry_class());
        if let (Some(slot), Some(values)) = (cfg.slot, cfg.values.clone()) {
            let opts = cfg.resolve_cycle_options();
            let m = certify_rotation_monotonicity(&sys, slot, &values, &opts)
                .map_err(|e| CliError::Config(e.to_string()))?;
            ok &= m.result != Certification::Fail;
            report["monotonicity"] = json!(m);
        }
    } else if cfg.slot.is_some() || cfg.values.is_some() {
        return Err(CliError::Config("monotonicity needs a system".into()));
    }
    report["config"] = config_json(cfg);
    Ok((report, ok))
}

fn delta_row(name: &str, got: Option<BivariatePoly<Rational64>>, want: &BivariatePoly<Rational64>, all: &mut bool) -> Value {
    let matched = got.as_ref() == Some(want);
    *all &= matched;
    json!({
        "param": name,
        "determinant": got.as_ref().map(monomial_text),
        "expected": monomial_text(want),
        "exact_match": matched,
    })
}

pub fn portrait(cfg: &mut RunConfig) -> Outcome {
    let sys = cfg.system()?;
    let starts = cfg.starts.clone().ok_or_else(|| CliError::Config("portrait needs --starts".into()))?;
    let dir = cfg.csv_dir.clone().ok_or_else(|| CliError::Config("portrait needs --csv-dir".into()))?;
    let t_max = *cfg.t_max.get_or_insert(50.0);
    let tol = *cfg.tol.get_or_insert(1e-9);
    let mut opts = FlowOptions::for_system(&sys, tol);
    if let Some(r) = cfg.r_escape {
        opts = opts.with_escape(r);
    }
    let mut rows = Vec::new();
    let mut ok = true;
    for (i, s) in starts.iter().enumerate() {
        match integrate(&sys, *s, t_max, opts) {
            Ok(tr) => {
                let name = format!("trajectory_{i}.csv");
                tr.write_csv(csv_file(&dir, &name)?)?;
                rows.push(json!({
                    "start": s,
                    "file": name,
                    "samples": tr.samples.len(),
                    "end": tr.last_state(),
                    "terminal": tr.terminal,
                }));
            }
            Err(e) => {
                ok = false;
                rows.push(json!({"start": s, "error": e.to_string(), "terminal": Option::<Terminal>::None}));
            }
        }
    }
    let points: Vec<_> = find_finite_singularities(&sys).into_iter().map(|p| json!({"x": p.x, "kind": p.kind})).collect();
    let report = json!({
        "command": "portrait",
        "config": config_json(cfg),
        "singular_points": points,
        "trajectories": rows,
    });
    Ok((report, ok))
}

pub fn verify(cfg: &mut RunConfig) -> Outcome {
    let seed = *cfg.seed.get_or_insert(verify::DEFAULT_SEED);
    let results = verify::run_all(seed);
    for c in &results {
        eprintln!("{}", c.line());
    }
    let passed = results.iter().filter(|c| c.passed).count();
    let report = json!({
        "command": "verify",
        "config": config_json(cfg),
        "criteria": results,
        "passed": passed,
        "total": results.len(),
    });
    Ok((report, passed == results.len()))
}
