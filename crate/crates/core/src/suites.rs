//! Verification suites over class ranges and random corpora, collected into
//! a JSON report with a fixed layout.

use crate::cohomology::{cech_h_vector, h_vector};
use crate::error::{Error, Result};
use crate::fields::is_prime;
use crate::measures::{
    central_commutator, class_representative, derive_eq1, derive_eq2, rational_quotient_dimension,
    rr_assemble, window_annihilator_check, window_build,
};
use crate::residues::{check_reciprocity, random_global_form};
use crate::surface::{ClassVector, Divisor, Model, Surface};
use crate::symbols::{intersection_number, intersection_oracle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Reciprocity,
    Bezout,
    Serre,
    Chi,
    Commutator,
    Rr,
    Windows,
    Cech,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Reciprocity,
        Suite::Bezout,
        Suite::Serre,
        Suite::Chi,
        Suite::Commutator,
        Suite::Rr,
        Suite::Windows,
        Suite::Cech,
    ];

    /// Suites that need no curves and so run for any prime power.
    fn class_level(self) -> bool {
        matches!(self, Suite::Chi | Suite::Cech)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = serde_json::to_value(self).expect("unit variants serialize");
        f.write_str(v.as_str().expect("unit variants serialize to strings"))
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| {
                let names: Vec<String> = Suite::ALL.iter().map(|x| x.to_string()).collect();
                Error::Parse(format!(
                    "unknown suite '{s}' (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// Faults injected on purpose to exercise the failure path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Reports `h^0 + 1` for every class with sections.
    ShiftH0,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub surface: Model,
    pub q: u64,
    /// Inclusive class range; the second applies to the other factor of
    /// `P^1 x P^1` and defaults to the first.
    pub range: (i64, i64),
    pub range2: Option<(i64, i64)>,
    pub seed: u64,
    pub suites: Vec<Suite>,
    /// Random 2-forms checked by the reciprocity suite.
    pub forms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
    /// Record wall-clock times; off by default so reports are reproducible.
    pub timing: bool,
}

impl RunConfig {
    pub fn new(surface: Model, q: u64) -> Self {
        RunConfig {
            surface,
            q,
            range: (-2, 2),
            range2: None,
            seed: 0,
            suites: Vec::new(),
            forms: 25,
            fault: None,
            timing: false,
        }
    }

    pub fn classes(&self) -> Vec<ClassVector> {
        let (lo, hi) = self.range;
        match self.surface {
            Model::P2 => (lo..=hi).map(ClassVector::P2).collect(),
            Model::P1xP1 => {
                let (lo2, hi2) = self.range2.unwrap_or(self.range);
                (lo..=hi)
                    .flat_map(|a| (lo2..=hi2).map(move |b| ClassVector::P1xP1(a, b)))
                    .collect()
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.range;
        let (lo2, hi2) = self.range2.unwrap_or(self.range);
        if lo > hi || lo2 > hi2 {
            return Err(Error::Parse(format!("empty class range {lo}:{hi}")));
        }
        if crate::fields::prime_power(self.q).is_none() {
            return Err(Error::Parse(format!("q = {} is not a prime power", self.q)));
        }
        if !is_prime(self.q) {
            if let Some(s) = self.suites.iter().find(|s| !s.class_level()) {
                return Err(Error::Parse(format!(
                    "suite {s} needs curves over a prime field; q = {} only supports class-level suites",
                    self.q
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub inputs: Vec<String>,
    pub lhs: Value,
    pub rhs: Value,
    pub pass: bool,
    pub micros: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

struct Recorder<'a> {
    config: &'a RunConfig,
    checks: Vec<Check>,
}

impl Recorder<'_> {
    fn push(
        &mut self,
        name: &str,
        inputs: Vec<String>,
        started: Instant,
        lhs: Value,
        rhs: Value,
        pass: bool,
    ) {
        let micros = if self.config.timing {
            started.elapsed().as_micros() as u64
        } else {
            0
        };
        self.checks.push(Check {
            name: name.to_string(),
            inputs,
            pass: pass && lhs == rhs,
            lhs,
            rhs,
            micros,
        });
    }

    fn error(&mut self, name: &str, inputs: Vec<String>, e: Error) {
        self.checks.push(Check {
            name: name.to_string(),
            inputs,
            lhs: json!({ "error": e.to_string() }),
            rhs: Value::Null,
            pass: false,
            micros: 0,
        });
    }
}

fn q_exponent(e: i64) -> Value {
    json!({ "q_exponent": e })
}

pub fn run_suites(config: &RunConfig) -> Result<RunReport> {
    config.validate()?;
    let mut rec = Recorder {
        config,
        checks: Vec::new(),
    };
    let surface = if is_prime(config.q) {
        Some(Surface::new(config.surface, config.q)?)
    } else {
        None
    };
    for &suite in &config.suites {
        match (suite, &surface) {
            (Suite::Chi, None) => chi_class_level(&mut rec),
            (Suite::Cech, _) => cech(&mut rec),
            (_, None) => unreachable!("validated above"),
            (Suite::Reciprocity, Some(s)) => reciprocity(&mut rec, s),
            (Suite::Bezout, Some(s)) => bezout(&mut rec, s),
            (Suite::Serre, Some(s)) => serre(&mut rec, s),
            (Suite::Chi, Some(s)) => chi(&mut rec, s),
            (Suite::Commutator, Some(s)) => commutator(&mut rec, s),
            (Suite::Rr, Some(s)) => rr(&mut rec, s),
            (Suite::Windows, Some(s)) => windows(&mut rec, s),
        }
    }
    let failed = rec.checks.iter().filter(|c| !c.pass).count();
    Ok(RunReport {
        config: config.clone(),
        summary: Summary {
            passed: rec.checks.len() - failed,
            failed,
        },
        checks: rec.checks,
    })
}

fn reciprocity(rec: &mut Recorder, s: &Surface) {
    let mut rng = ChaCha8Rng::seed_from_u64(rec.config.seed);
    let mut done = 0;
    let mut tries = 0;
    while done < rec.config.forms && tries < 20 * rec.config.forms.max(1) {
        tries += 1;
        let started = Instant::now();
        let w = match random_global_form(&mut rng, s, 3) {
            Ok(w) => w,
            Err(_) => continue,
        };
        match check_reciprocity(s, &w) {
            Ok(r) => {
                let inputs = vec![
                    w.to_string(),
                    format!("{} point sums, {} curve sums", r.point_sums, r.curve_sums),
                ];
                rec.push(
                    "reciprocity",
                    inputs,
                    started,
                    json!(r.failures.len()),
                    json!(0),
                    r.passed(),
                );
                done += 1;
            }
            // forms whose polar curves are singular at a relevant point are replaced
            Err(Error::Singular { .. } | Error::Unsupported(_)) => {}
            Err(e) => {
                rec.error("reciprocity", vec![w.to_string()], e);
                done += 1;
            }
        }
    }
    if done < rec.config.forms {
        rec.error(
            "reciprocity",
            vec![format!("{done} checkable forms after {tries} draws")],
            Error::Unsupported("corpus exhausted".into()),
        );
    }
}

/// Three lines, two conics and a cubic (or their analogues on `P^1 x P^1`),
/// plus a tangent pair.
pub fn bezout_curves(s: &Surface) -> (Vec<String>, (String, String)) {
    let (base, cubics, tangent): (&[&str], &[&str], (&str, &str)) = match s.model {
        Model::P2 => (
            &["X", "Y", "X + Y + Z", "YZ - X^2", "XY + Z^2"],
            &[
                "Y^2Z - X^3 - XZ^2 - Z^3",
                "Y^2Z + YZ^2 - X^3",
                "Y^2Z + XYZ - X^3 - Z^3",
            ],
            ("Y", "YZ - X^2"),
        ),
        Model::P1xP1 => (
            &["X0", "Y1", "X0 + X1", "X0*Y1 - X1*Y0", "X0*Y0 + X1*Y1 + X1*Y0"],
            &["X0*Y0^2 + X1*Y1^2 + X0*Y0*Y1", "X0^2*Y0 + X1^2*Y1"],
            ("X0*Y1 - X1*Y0", "X0*Y1 - X1*Y0 + X1*Y1"),
        ),
    };
    let mut curves: Vec<String> = base.iter().map(|t| t.to_string()).collect();
    let fits = |c: &str| {
        let Ok(cc) = s.curve(c) else { return false };
        base.iter().all(|b| {
            let cb = s.curve(b).expect("fixed curves are irreducible");
            let (x, y) = (Divisor::single(&cc, 1), Divisor::single(&cb, 1));
            [intersection_number(&x, &y), intersection_number(&y, &x)]
                .iter()
                .all(|r| !matches!(r, Err(Error::Singular { .. })))
        })
    };
    if let Some(c) = cubics.iter().find(|c| fits(c)) {
        curves.push(c.to_string());
    }
    (curves, (tangent.0.to_string(), tangent.1.to_string()))
}

fn bezout(rec: &mut Recorder, s: &Surface) {
    let (curves, tangent) = bezout_curves(s);
    let mut pairs = Vec::new();
    for (i, a) in curves.iter().enumerate() {
        for b in &curves[i + 1..] {
            pairs.push((a.clone(), b.clone()));
        }
    }
    if !pairs.contains(&tangent) {
        pairs.push(tangent);
    }
    for (a, b) in pairs {
        let started = Instant::now();
        let inputs = vec![a.clone(), b.clone()];
        let run = || -> Result<(i64, i64)> {
            let c = Divisor::single(&s.curve(&a)?, 1);
            let h = Divisor::single(&s.curve(&b)?, 1);
            Ok((intersection_number(&c, &h)?, intersection_oracle(&c, &h)?))
        };
        match run() {
            Ok((sym, res)) => rec.push("bezout", inputs, started, json!(sym), json!(res), true),
            Err(e) => rec.error("bezout", inputs, e),
        }
    }
}

fn h0_reported(rec: &Recorder, h0: i64) -> i64 {
    match rec.config.fault {
        Some(Fault::ShiftH0) if h0 > 0 => h0 + 1,
        _ => h0,
    }
}

fn serre(rec: &mut Recorder, s: &Surface) {
    let classes = rec.config.classes();
    for &c in &classes {
        for &h in &classes {
            let started = Instant::now();
            let inputs = vec![format!("C={c}"), format!("H={h}")];
            match derive_eq1(s, c, h) {
                Ok(d) => rec.push("serre", inputs, started, json!(d.lhs), json!(d.rhs), d.equal),
                Err(e) => rec.error("serre", inputs, e),
            }
        }
        let started = Instant::now();
        // Lemma-1 side against the closed form, for effective classes
        let rep = class_representative(s, c);
        match crate::cohomology::rr_space(s, &rep) {
            Ok(b) => {
                let lhs = h0_reported(rec, b.len() as i64);
                rec.push(
                    "serre-sections",
                    vec![format!("C={c}")],
                    started,
                    json!(lhs),
                    json!(h_vector(c).h0),
                    true,
                )
            }
            Err(e) => rec.error("serre-sections", vec![format!("C={c}")], e),
        }
    }
}

fn chi(rec: &mut Recorder, s: &Surface) {
    for c in rec.config.classes() {
        let started = Instant::now();
        let inputs = vec![format!("S={c}")];
        match derive_eq2(s, c) {
            Ok(d) => rec.push("chi", inputs, started, json!(d.lhs), json!(d.rhs), d.equal),
            Err(e) => rec.error("chi", inputs, e),
        }
    }
}

fn chi_class_level(rec: &mut Recorder) {
    let k = rec.config.surface.canonical_class();
    for c in rec.config.classes() {
        let started = Instant::now();
        let (a, b) = (h_vector(c).chi, h_vector(k - c).chi);
        rec.push("chi", vec![format!("S={c}")], started, json!(a), json!(b), true);
    }
}

fn cech(rec: &mut Recorder) {
    for c in rec.config.classes() {
        let started = Instant::now();
        let inputs = vec![format!("C={c}")];
        match cech_h_vector(c) {
            Ok(v) => {
                let closed = h_vector(c);
                let row = |v: crate::cohomology::CohomologyVector| json!([v.h0, v.h1, v.h2]);
                rec.push("cech", inputs, started, row(v), row(closed), true)
            }
            Err(e) => rec.error("cech", inputs, e),
        }
    }
}

fn commutator(rec: &mut Recorder, s: &Surface) {
    let k = s.omega_divisor();
    for c in rec.config.classes() {
        let started = Instant::now();
        let inputs = vec![format!("C={c}")];
        match central_commutator(s, &class_representative(s, c), &k) {
            Ok((m, sym, eq)) => rec.push(
                "commutator",
                inputs,
                started,
                q_exponent(m.exponent),
                q_exponent(sym.exponent),
                eq,
            ),
            Err(e) => rec.error("commutator", inputs, e),
        }
    }
}

fn rr(rec: &mut Recorder, s: &Surface) {
    let k = s.omega_divisor();
    for c in rec.config.classes() {
        let started = Instant::now();
        let inputs = vec![format!("C={c}")];
        match rr_assemble(s, &class_representative(s, c), &k) {
            Ok(r) => {
                let h0 = h_vector(c).h0 as i64;
                let lhs = r.lhs - h0 + h0_reported(rec, h0);
                rec.push("rr", inputs, started, json!(lhs), json!(r.rhs), r.pass)
            }
            Err(e) => rec.error("rr", inputs, e),
        }
    }
}

/// Coordinate curves along which the fixed 2-form has neither zero nor pole.
fn window_curves(s: &Surface) -> Vec<crate::surface::Curve> {
    let k = s.omega_divisor();
    s.coordinate_curves()
        .into_iter()
        .filter(|c| k.multiplicity(c) == 0)
        .collect()
}

fn windows(rec: &mut Recorder, s: &Surface) {
    let k = s.omega_divisor();
    for d in window_curves(s) {
        let started = Instant::now();
        let (lo, hi) = (Divisor::single(&d, -2), Divisor::single(&d, 2));
        let w = match window_build(s, &lo, &hi, 2, 2) {
            Ok(w) => w,
            Err(e) => {
                rec.error("window-rank", vec![d.to_string()], e);
                continue;
            }
        };
        let inputs = vec![
            format!("R={lo}"),
            format!("S={hi}"),
            format!("{} flags", w.flags.len()),
        ];
        rec.push(
            "window-rank",
            inputs,
            started,
            json!(w.gram.rank()),
            json!(w.dimension()),
            w.compatible,
        );
        for m in -2..=2 {
            let started = Instant::now();
            let c = Divisor::single(&d, m);
            let inputs = vec![format!("window {lo} .. {hi}"), format!("C={c}")];
            match window_annihilator_check(&w, &c, &k) {
                Ok(ok) => rec.push(
                    "window-annihilator",
                    inputs,
                    started,
                    json!(ok),
                    json!(true),
                    true,
                ),
                Err(e) => rec.error("window-annihilator", inputs, e),
            }
        }
    }
    lemma1_pairs(rec, s);
}

/// `dim (A0 ∩ A1(C))/(A0 ∩ A1(H)) = h^0(C) - h^0(H)` for `H <= C` supported
/// on coordinate curves with multiplicities in `[-2, 2]`; all pairs on
/// `P^2`, a seeded sample on `P^1 x P^1`.
fn lemma1_pairs(rec: &mut Recorder, s: &Surface) {
    let curves = s.coordinate_curves();
    let n = curves.len();
    let make = |ms: &[i64]| {
        let pairs: Vec<_> = curves.iter().cloned().zip(ms.iter().copied()).collect();
        Divisor::from_pairs(s.model, &pairs)
    };
    let mut pairs: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    match s.model {
        Model::P2 => {
            let all: Vec<Vec<i64>> = (0..125)
                .map(|i| vec![i / 25 - 2, i / 5 % 5 - 2, i % 5 - 2])
                .collect();
            for h in &all {
                for c in &all {
                    if h.iter().zip(c).all(|(a, b)| a <= b) {
                        pairs.push((c.clone(), h.clone()));
                    }
                }
            }
        }
        Model::P1xP1 => {
            let mut rng = ChaCha8Rng::seed_from_u64(rec.config.seed ^ 0x5eed);
            for _ in 0..400 {
                let h: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
                let c: Vec<i64> = h.iter().map(|&x| rng.gen_range(x..=2)).collect();
                pairs.push((c, h));
            }
        }
    }
    for (c, h) in pairs {
        let started = Instant::now();
        let (dc, dh) = (make(&c), make(&h));
        let inputs = vec![format!("C={dc}"), format!("H={dh}")];
        let want = h_vector(dc.class()).h0 as i64 - h_vector(dh.class()).h0 as i64;
        match rational_quotient_dimension(s, &dc, &dh) {
            Ok(dim) => rec.push("window-sections", inputs, started, json!(dim), json!(want), true),
            Err(e) => rec.error("window-sections", inputs, e),
        }
    }
}
