//! The nine acceptance criteria, each reported on its own line. Lines are
//! written straight to stdout so they show up without `--nocapture`.

use adelic_core::cohomology::{class_range, h_vector, rr_space};
use adelic_core::measures::{class_representative, rr_assemble};
use adelic_core::suites::{bezout_curves, run_suites, RunConfig, RunReport, Suite};
use adelic_core::surface::{ClassVector, Divisor, Model, Surface};
use std::io::Write;
use std::time::Instant;

const FIELDS: [u64; 3] = [2, 3, 5];
const MODELS: [Model; 2] = [Model::P2, Model::P1xP1];

fn config(model: Model, q: u64, suite: Suite, p2: (i64, i64), p1p1: (i64, i64)) -> RunConfig {
    let mut c = RunConfig::new(model, q);
    c.suites = vec![suite];
    c.range = if model == Model::P2 { p2 } else { p1p1 };
    c.seed = 2024 + q;
    c
}

/// Runs one suite on both surfaces over all fields; returns the number of
/// checks and the first failure.
fn sweep(suite: Suite, p2: (i64, i64), p1p1: (i64, i64)) -> (usize, Option<String>, Vec<RunReport>) {
    let mut total = 0;
    let mut first = None;
    let mut reports = Vec::new();
    for model in MODELS {
        for q in FIELDS {
            let r = run_suites(&config(model, q, suite, p2, p1p1)).expect("valid configuration");
            total += r.checks.len();
            if first.is_none() {
                first = r.first_failure().map(|c| {
                    format!(
                        "{model} q={q} {} [{}]: {} vs {}",
                        c.name,
                        c.inputs.join("; "),
                        c.lhs,
                        c.rhs
                    )
                });
            }
            reports.push(r);
        }
    }
    (total, first, reports)
}

struct Gate {
    results: Vec<(usize, bool)>,
}

impl Gate {
    fn record(&mut self, n: usize, title: &str, started: Instant, outcome: Result<String, String>) {
        let secs = started.elapsed().as_secs_f64();
        let (pass, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        let line = format!(
            "acceptance {n}: {} {title} ({detail}; {secs:.1}s)\n",
            if pass { "PASS" } else { "FAIL" }
        );
        std::io::stdout().lock().write_all(line.as_bytes()).unwrap();
        self.results.push((n, pass));
    }
}

fn verdict(total: usize, first: Option<String>, min: usize) -> Result<String, String> {
    match first {
        Some(f) => Err(format!("{total} checks, first failure {f}")),
        None if total < min => Err(format!("only {total} checks, expected at least {min}")),
        None => Ok(format!("{total} checks")),
    }
}

const EQ_P2: (i64, i64) = (-6, 6);
const EQ_P1P1: (i64, i64) = (-4, 4);

fn reciprocity() -> Result<String, String> {
    let (total, first, reports) = sweep(Suite::Reciprocity, (0, 0), (0, 0));
    for r in &reports {
        let checked = r.checks.iter().filter(|c| c.pass).count();
        if checked < 25 {
            return Err(format!("{} q={}: {checked} forms", r.config.surface, r.config.q));
        }
    }
    verdict(total, first, 25 * 6)
}

fn bezout() -> Result<String, String> {
    for model in MODELS {
        for q in FIELDS {
            let s = Surface::new(model, q).unwrap();
            let (curves, _) = bezout_curves(&s);
            if curves.len() != 6 {
                return Err(format!("{model} q={q}: no smooth cubic in the configured list"));
            }
        }
    }
    let (total, first, _) = sweep(Suite::Bezout, (0, 0), (0, 0));
    verdict(total, first, 15 * 6)
}

fn serre() -> Result<String, String> {
    let (total, first, _) = sweep(Suite::Serre, EQ_P2, EQ_P1P1);
    let pairs = 3 * (13 * 13 + 13) + 3 * (81 * 81 + 81);
    verdict(total, first, pairs)
}

fn chi() -> Result<String, String> {
    let (total, first, _) = sweep(Suite::Chi, EQ_P2, EQ_P1P1);
    verdict(total, first, 3 * (13 + 81))
}

fn commutator() -> Result<String, String> {
    let (total, first, _) = sweep(Suite::Commutator, (-3, 3), (-2, 2));
    verdict(total, first, 3 * (7 + 25))
}

fn riemann_roch() -> Result<String, String> {
    let (total, first, _) = sweep(Suite::Rr, EQ_P2, EQ_P1P1);
    let s = Surface::new(Model::P2, 3).unwrap();
    let line = rr_assemble(
        &s,
        &Divisor::single(&s.curve("X").unwrap(), 1),
        &s.omega_divisor(),
    )
    .unwrap();
    if (line.lhs, line.rhs, line.pass) != (3, 3, true) {
        return Err(format!("P2 line: {} = {}", line.lhs, line.rhs));
    }
    let t = Surface::new(Model::P1xP1, 3).unwrap();
    let fiber = rr_assemble(
        &t,
        &class_representative(&t, ClassVector::P1xP1(1, 0)),
        &t.omega_divisor(),
    )
    .unwrap();
    if (fiber.lhs, fiber.rhs, fiber.pass) != (2, 2, true) {
        return Err(format!("P1xP1 (1,0): {} = {}", fiber.lhs, fiber.rhs));
    }
    verdict(total, first, 3 * (13 + 81))
}

fn windows() -> Result<String, String> {
    let (total, first, reports) = sweep(Suite::Windows, (0, 0), (0, 0));
    for r in &reports {
        for c in r.checks.iter().filter(|c| c.name == "window-rank") {
            if c.lhs != c.rhs {
                return Err(format!("rank {} of {} on {:?}", c.lhs, c.rhs, c.inputs));
            }
        }
    }
    verdict(total, first, 6 * 400)
}

fn cech() -> Result<String, String> {
    let (total, first, _) = sweep(Suite::Cech, EQ_P2, EQ_P1P1);
    // independent of the field, but the effective part is also confirmed by
    // Riemann-Roch spaces on one surface per model
    for model in MODELS {
        let s = Surface::new(model, 3).unwrap();
        let (lo, hi) = if model == Model::P2 { EQ_P2 } else { EQ_P1P1 };
        for c in class_range(model, lo, hi) {
            let n = rr_space(&s, &class_representative(&s, c)).unwrap().len() as u64;
            if n != h_vector(c).h0 {
                return Err(format!(
                    "{model} {c}: {n} sections, closed form {}",
                    h_vector(c).h0
                ));
            }
        }
    }
    verdict(total, first, 3 * (13 + 81))
}

fn determinism() -> Result<String, String> {
    let mut bytes = 0;
    for model in MODELS {
        let mut c = RunConfig::new(model, 3);
        c.seed = 99;
        c.range = (-2, 2);
        c.forms = 6;
        c.suites = Suite::ALL.to_vec();
        let a = run_suites(&c).unwrap().to_json();
        let b = run_suites(&c).unwrap().to_json();
        if a != b {
            return Err(format!("{model}: reports differ"));
        }
        bytes += a.len();
    }
    Ok(format!("{bytes} bytes compared"))
}

#[test]
fn acceptance_criteria() {
    let mut gate = Gate { results: Vec::new() };
    let criteria: [(&str, fn() -> Result<String, String>); 9] = [
        ("reciprocity around points and along curves", reciprocity),
        ("intersection numbers from symbols match resultants", bezout),
        ("h0(C) - h0(H) = h2(K - C) - h2(K - H)", serre),
        ("chi(S) = chi(K - S)", chi),
        ("commutator: measure route equals symbol route", commutator),
        ("Riemann-Roch assembly", riemann_roch),
        ("windows: rank, annihilators, section quotients", windows),
        ("closed-form cohomology equals Čech counts", cech),
        ("identical runs give identical reports", determinism),
    ];
    for (i, (title, run)) in criteria.into_iter().enumerate() {
        let started = Instant::now();
        gate.record(i + 1, title, started, run());
    }
    let failed: Vec<usize> = gate.results.iter().filter(|r| !r.1).map(|r| r.0).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
