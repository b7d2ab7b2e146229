use adelic_core::cohomology::{cech_h_vector, h_vector};
use adelic_core::error::Error;
use adelic_core::residues::{local_residue, residue_sum_along_curve, with_escalation, GlobalForm};
use adelic_core::suites::{run_suites, Fault, RunConfig, Suite};
use adelic_core::surface::{
    expand_at_flag, flag_make, ClosedPoint, Curve, Divisor, Flag, Model, RationalFunction, Surface, Window2,
};
use adelic_core::symbols::{bisymbol, intersection_number, intersection_oracle};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

/// `println!` that exits quietly when stdout is closed early (e.g. `| head`).
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if let Err(e) = writeln!(std::io::stdout().lock(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            panic!("writing to stdout: {e}");
        }
    }};
}

/// Residues, symbols and Riemann-Roch checks on P2 and P1xP1 over finite fields.
#[derive(Parser, Debug)]
#[command(name = "adelic", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// P2 or P1xP1.
    #[arg(long, default_value = "P2")]
    surface: String,
    /// Order of the base field.
    #[arg(long, default_value_t = 3)]
    q: u64,
    /// Allow q above the soft limit of 9.
    #[arg(long)]
    allow_large_q: bool,
    /// Seed for random corpora.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Starting expansion window as `t,u`.
    #[arg(long, default_value = "4,8")]
    precision: String,
    /// Write a JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand a rational function at a flag.
    Expand {
        #[command(flatten)]
        common: Common,
        /// `NUM/DEN` in the surface's coordinates.
        #[arg(long)]
        function: String,
        /// Rational point, coordinates separated by `:`.
        #[arg(long)]
        point: String,
        #[arg(long)]
        curve: String,
    },
    /// Residue of `f omega` at a flag, or summed along a curve without `--point`.
    Residue {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        form: String,
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        curve: String,
    },
    /// Integer symbol `(f, g)` at a flag.
    Symbol {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        point: String,
        #[arg(long)]
        curve: String,
    },
    /// Intersection number of two curves by the symbol route.
    Intersect {
        #[command(flatten)]
        common: Common,
        /// Two curves as `name:polynomial`, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        curves: Vec<String>,
    },
    /// Cohomology dimensions over a class range.
    Cohomology {
        #[command(flatten)]
        common: Common,
        /// `lo:hi`, or `lo:hi,lo:hi` for the two factors of P1xP1.
        #[arg(long, default_value = "-2:2", allow_hyphen_values = true)]
        range: String,
    },
    /// Run verification suites.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "-2:2", allow_hyphen_values = true)]
        range: String,
        /// Comma-separated subset of reciprocity, bezout, serre, chi,
        /// commutator, rr, windows, cech.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        suites: Vec<String>,
        /// Random 2-forms for the reciprocity suite.
        #[arg(long, default_value_t = 25)]
        forms: usize,
        /// Record timings (makes reports run-dependent).
        #[arg(long)]
        timing: bool,
        /// Deliberately corrupt the h^0 oracle.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

/// Failure classes mapped to exit codes.
enum Failure {
    Config(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Check(e.to_string())
    }
}

fn config_err(e: Error) -> Failure {
    Failure::Config(e.to_string())
}

const Q_SOFT_LIMIT: u64 = 9;

fn model_of(c: &Common) -> Result<Model, Failure> {
    let m = Model::parse(&c.surface).map_err(config_err)?;
    if c.q > Q_SOFT_LIMIT && !c.allow_large_q {
        return Err(Failure::Config(format!(
            "q = {} exceeds {Q_SOFT_LIMIT}; pass --allow-large-q",
            c.q
        )));
    }
    Ok(m)
}

fn surface_of(c: &Common) -> Result<Surface, Failure> {
    Surface::new(model_of(c)?, c.q).map_err(config_err)
}

fn window_of(c: &Common) -> Result<Window2, Failure> {
    let parts: Vec<&str> = c.precision.split(',').collect();
    let bad = || {
        Failure::Config(format!(
            "--precision expects t,u with positive integers, got '{}'",
            c.precision
        ))
    };
    if parts.len() != 2 {
        return Err(bad());
    }
    let t: i64 = parts[0].trim().parse().map_err(|_| bad())?;
    let u: i64 = parts[1].trim().parse().map_err(|_| bad())?;
    if t <= 0 || u <= 0 {
        return Err(bad());
    }
    Ok(Window2::new(t, u))
}

fn parse_interval(text: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Config(format!("range '{text}' should look like lo:hi"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let lo: i64 = a.trim().parse().map_err(|_| bad())?;
    let hi: i64 = b.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(Failure::Config(format!("range '{text}' is empty")));
    }
    Ok((lo, hi))
}

fn parse_range(text: &str) -> Result<((i64, i64), Option<(i64, i64)>), Failure> {
    match text.split_once(',') {
        Some((a, b)) => Ok((parse_interval(a)?, Some(parse_interval(b)?))),
        None => Ok((parse_interval(text)?, None)),
    }
}

fn parse_function(s: &Surface, text: &str) -> Result<RationalFunction, Failure> {
    let (num, den) = text.split_once('/').unwrap_or((text, "1"));
    RationalFunction::parse(s, num.trim(), den.trim()).map_err(|e| {
        Failure::Config(format!(
            "'{text}': {e}; write the function as NUM/DEN of equal degree"
        ))
    })
}

fn parse_point(s: &Surface, text: &str) -> Result<ClosedPoint, Failure> {
    let coords: Result<Vec<u32>, _> = text.split(':').map(|c| s.base.parse(c.trim())).collect();
    let coords = coords.map_err(config_err)?;
    ClosedPoint::rational(s.model, &s.base, &coords)
        .ok_or_else(|| Failure::Config(format!("'{text}' is not a point of {}", s.model)))
}

fn parse_flag(s: &Surface, point: &str, curve: &str) -> Result<(Flag, Curve), Failure> {
    let d = s.curve(curve).map_err(config_err)?;
    let x = parse_point(s, point)?;
    let fl = flag_make(&x, &d).map_err(config_err)?;
    Ok((fl, d))
}

fn parse_named_curve(s: &Surface, text: &str) -> Result<(String, Curve), Failure> {
    let (name, poly) = match text.split_once(':') {
        Some((n, p)) => (n.trim().to_string(), p),
        None => (text.trim().to_string(), text),
    };
    let c = s.curve(poly.trim()).map_err(|e| {
        Failure::Config(format!(
            "curve '{text}': {e} (expected name:polynomial, homogeneous)"
        ))
    })?;
    Ok((name, c))
}

fn write_json(path: &Option<PathBuf>, doc: &str) -> Result<(), Failure> {
    if let Some(p) = path {
        std::fs::write(p, format!("{doc}\n"))
            .map_err(|e| Failure::Check(format!("writing {}: {e}", p.display())))?;
    }
    Ok(())
}

fn single(
    path: &Option<PathBuf>,
    command: &str,
    inputs: Value,
    result: Value,
    pass: bool,
) -> Result<(), Failure> {
    let doc = json!({ "command": command, "inputs": inputs, "result": result, "pass": pass });
    write_json(
        path,
        &serde_json::to_string_pretty(&doc).expect("json values serialize"),
    )
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Expand {
            common,
            function,
            point,
            curve,
        } => {
            let s = surface_of(&common)?;
            let w = window_of(&common)?;
            let f = parse_function(&s, &function)?;
            let (fl, _) = parse_flag(&s, &point, &curve)?;
            let e = expand_at_flag(&f, &fl, w)?;
            out!("{fl}");
            out!("{e}");
            single(
                &common.json,
                "expand",
                json!([function, point, curve]),
                json!(e.to_string()),
                true,
            )
        }
        Command::Residue {
            common,
            form,
            point,
            curve,
        } => {
            let s = surface_of(&common)?;
            let w = window_of(&common)?;
            let omega = GlobalForm::new(parse_function(&s, &form)?);
            let value = match point {
                Some(p) => {
                    let (fl, _) = parse_flag(&s, &p, &curve)?;
                    local_residue(&s, &omega, &fl, w)?
                }
                None => residue_sum_along_curve(&s, &omega, &s.curve(&curve).map_err(config_err)?)?,
            };
            out!("{value}");
            single(
                &common.json,
                "residue",
                json!([form, curve]),
                json!(value.to_string()),
                true,
            )
        }
        Command::Symbol {
            common,
            f,
            g,
            point,
            curve,
        } => {
            let s = surface_of(&common)?;
            let w = window_of(&common)?;
            let (a, b) = (parse_function(&s, &f)?, parse_function(&s, &g)?);
            let (fl, _) = parse_flag(&s, &point, &curve)?;
            let v = with_escalation(w, |w| {
                bisymbol(&expand_at_flag(&a, &fl, w)?, &expand_at_flag(&b, &fl, w)?)
            })?;
            out!("{v}");
            single(
                &common.json,
                "symbol",
                json!([f, g, point, curve]),
                json!(v),
                true,
            )
        }
        Command::Intersect { common, curves } => {
            let s = surface_of(&common)?;
            if curves.len() != 2 {
                return Err(Failure::Config(format!(
                    "--curves needs exactly two curves, got {}",
                    curves.len()
                )));
            }
            let (na, a) = parse_named_curve(&s, &curves[0])?;
            let (nb, b) = parse_named_curve(&s, &curves[1])?;
            let (c, h) = (Divisor::single(&a, 1), Divisor::single(&b, 1));
            let n = intersection_number(&c, &h)?;
            let oracle = intersection_oracle(&c, &h)?;
            out!("{n}");
            single(
                &common.json,
                "intersect",
                json!([na, nb]),
                json!({ "symbol": n, "resultant": oracle }),
                n == oracle,
            )?;
            if n != oracle {
                return Err(Failure::Check(format!(
                    "({na}, {nb}): symbol route {n}, resultants {oracle}"
                )));
            }
            Ok(())
        }
        Command::Cohomology { common, range } => {
            let model = model_of(&common)?;
            let mut config = RunConfig::new(model, common.q);
            (config.range, config.range2) = parse_range(&range)?;
            let mut rows = Vec::new();
            let mut first_bad = None;
            for c in config.classes() {
                let v = h_vector(c);
                let cech = cech_h_vector(c)?;
                out!("{c}: h = ({}, {}, {}), chi = {}", v.h0, v.h1, v.h2, v.chi);
                if cech != v && first_bad.is_none() {
                    first_bad = Some(format!("class {c}: closed form {v}, Čech {cech}"));
                }
                rows.push(json!({ "class": c.to_string(), "h": [v.h0, v.h1, v.h2], "chi": v.chi, "cech_agrees": cech == v }));
            }
            single(
                &common.json,
                "cohomology",
                json!(range),
                Value::Array(rows),
                first_bad.is_none(),
            )?;
            first_bad.map_or(Ok(()), |m| Err(Failure::Check(m)))
        }
        Command::Verify {
            common,
            range,
            suites,
            forms,
            timing,
            inject_fault,
        } => {
            let model = model_of(&common)?;
            let mut config = RunConfig::new(model, common.q);
            (config.range, config.range2) = parse_range(&range)?;
            config.seed = common.seed;
            config.forms = forms;
            config.timing = timing;
            config.fault = inject_fault.then_some(Fault::ShiftH0);
            for name in suites.iter().filter(|s| !s.trim().is_empty()) {
                let suite: Suite = name.parse().map_err(config_err)?;
                if !config.suites.contains(&suite) {
                    config.suites.push(suite);
                }
            }
            config.validate().map_err(config_err)?;
            let report = run_suites(&config)?;
            for c in &report.checks {
                out!(
                    "{} {} [{}]: {} vs {}",
                    if c.pass { "ok  " } else { "FAIL" },
                    c.name,
                    c.inputs.join("; "),
                    c.lhs,
                    c.rhs
                );
            }
            out!(
                "passed {}, failed {}",
                report.summary.passed,
                report.summary.failed
            );
            write_json(&common.json, &report.to_json())?;
            match report.first_failure() {
                Some(c) => Err(Failure::Check(format!(
                    "first counterexample: {} [{}]: {} vs {}",
                    c.name,
                    c.inputs.join("; "),
                    c.lhs,
                    c.rhs
                ))),
                None => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(m)) => {
            eprintln!("{m}");
            ExitCode::from(1)
        }
        Err(Failure::Config(m)) => {
            eprintln!("invalid configuration: {m}");
            ExitCode::from(2)
        }
    }
}
