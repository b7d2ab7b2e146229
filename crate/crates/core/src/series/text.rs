//! Sparse text form of two-variable series.
//!
//! ```text
//! prec: t=4 u=16
//! t^-1*u^2: 3
//! t^0: ~0
//! ```
//! Each nonzero term is one `t^j*u^i: c` line. A t-level known only to vanish
//! modulo the u-precision is written `t^j: ~0`; levels that are not listed are
//! exactly zero. `inf` marks exactly known directions.

use super::{is_inf, LaurentSeries1, LaurentSeries2, INF};
use crate::error::{Error, Result};
use crate::fields::FieldDesc;
use std::fmt;

fn prec_str(p: i64) -> String {
    if is_inf(p) {
        "inf".into()
    } else {
        p.to_string()
    }
}

impl fmt::Display for LaurentSeries2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "prec: t={} u={}",
            prec_str(self.t_prec()),
            prec_str(self.u_prec())
        )?;
        for (j, c) in self.levels() {
            if c.is_zero() {
                write!(f, "\nt^{j}: ~0")?;
            }
            for (i, v) in c.terms() {
                write!(f, "\nt^{j}*u^{i}: {}", self.field().format(v))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentSeries2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_prec(s: &str) -> Result<i64> {
    if s == "inf" {
        return Ok(INF);
    }
    s.parse()
        .map_err(|_| Error::Parse(format!("bad precision '{s}'")))
}

fn parse_exp(s: &str, var: char) -> Result<i64> {
    s.strip_prefix(var)
        .and_then(|r| r.strip_prefix('^'))
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad {var}-exponent '{s}'")))
}

/// Reads the format written by `Display`.
pub fn parse_series(field: &FieldDesc, text: &str) -> Result<LaurentSeries2> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let head = lines.next().ok_or_else(|| Error::Parse("empty series".into()))?;
    let rest = head
        .strip_prefix("prec:")
        .ok_or_else(|| Error::Parse("missing 'prec:' header".into()))?;
    let (mut t_prec, mut u_prec) = (None, None);
    for part in rest.split_whitespace() {
        match part.split_once('=') {
            Some(("t", v)) => t_prec = Some(parse_prec(v)?),
            Some(("u", v)) => u_prec = Some(parse_prec(v)?),
            _ => return Err(Error::Parse(format!("bad header field '{part}'"))),
        }
    }
    let (Some(t_prec), Some(u_prec)) = (t_prec, u_prec) else {
        return Err(Error::Parse("header needs t= and u=".into()));
    };
    let mut terms = Vec::new();
    let mut zero_levels = Vec::new();
    for line in lines {
        let (lhs, rhs) = line
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("bad line '{line}'")))?;
        let rhs = rhs.trim();
        match lhs.trim().split_once('*') {
            Some((tj, ui)) => {
                terms.push((parse_exp(tj, 't')?, parse_exp(ui, 'u')?, field.parse(rhs)?));
            }
            None if rhs == "~0" => zero_levels.push(parse_exp(lhs.trim(), 't')?),
            None => return Err(Error::Parse(format!("bad line '{line}'"))),
        }
    }
    let mut s = LaurentSeries2::from_terms(field, &terms, t_prec, u_prec);
    for j in zero_levels {
        let z = LaurentSeries1::zero_at(field, u_prec);
        s = s.add(&LaurentSeries2::from_ls1(z).shift_t(j).truncate(t_prec, u_prec));
    }
    Ok(s)
}
