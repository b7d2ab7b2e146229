//! JSON fixtures: a surface with named curves, divisors and functions.
//! Polynomials are stored as `[[e_0, .., e_{n-1}, c], ..]` with `c` the raw
//! field element.

use super::{curve_make, Curve, Divisor, Model, RationalFunction, Surface};
use crate::error::{Error, Result};
use crate::poly::{Exps, Poly};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveEntry {
    pub name: String,
    pub coeffs: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorEntry {
    pub name: String,
    pub components: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionEntry {
    pub name: String,
    pub num: Vec<Vec<u32>>,
    pub den: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub model: Model,
    pub q: u64,
    #[serde(default)]
    pub curves: Vec<CurveEntry>,
    #[serde(default)]
    pub divisors: Vec<DivisorEntry>,
    #[serde(default)]
    pub functions: Vec<FunctionEntry>,
}

pub fn encode_poly(f: &Poly) -> Vec<Vec<u32>> {
    f.terms()
        .map(|(e, &c)| {
            let mut row: Vec<u32> = e[..f.nvars()].iter().map(|&x| x as u32).collect();
            row.push(c);
            row
        })
        .collect()
}

pub fn decode_poly(s: &Surface, rows: &[Vec<u32>]) -> Result<Poly> {
    let n = s.model.nvars();
    let mut terms = Vec::with_capacity(rows.len());
    for row in rows {
        if row.len() != n + 1 {
            return Err(Error::Parse(format!("term {row:?} needs {} entries", n + 1)));
        }
        let mut e: Exps = [0; 4];
        for (slot, &x) in e.iter_mut().zip(&row[..n]) {
            *slot = u16::try_from(x).map_err(|_| Error::Parse(format!("exponent {x}")))?;
        }
        if row[n] as u64 >= s.q() {
            return Err(Error::Parse(format!(
                "coefficient {} outside F_{}",
                row[n],
                s.q()
            )));
        }
        terms.push((e, row[n]));
    }
    Ok(Poly::from_terms(&s.base, n, &terms))
}

impl Fixture {
    pub fn new(s: &Surface) -> Fixture {
        Fixture {
            model: s.model,
            q: s.q(),
            curves: Vec::new(),
            divisors: Vec::new(),
            functions: Vec::new(),
        }
    }

    pub fn from_json(text: &str) -> Result<Fixture> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn surface(&self) -> Result<Surface> {
        Surface::new(self.model, self.q)
    }

    pub fn add_curve(&mut self, name: &str, c: &Curve) {
        self.curves.push(CurveEntry {
            name: name.to_string(),
            coeffs: encode_poly(c.poly()),
        });
    }

    /// Adds the divisor, registering unnamed components as curves.
    pub fn add_divisor(&mut self, name: &str, d: &Divisor) {
        let mut components = BTreeMap::new();
        for (c, m) in d.components() {
            let enc = encode_poly(c.poly());
            let cname = match self.curves.iter().find(|e| e.coeffs == enc) {
                Some(e) => e.name.clone(),
                None => {
                    let n = format!("c{}", self.curves.len());
                    self.add_curve(&n, c);
                    n
                }
            };
            components.insert(cname, m);
        }
        self.divisors.push(DivisorEntry {
            name: name.to_string(),
            components,
        });
    }

    pub fn add_function(&mut self, name: &str, f: &RationalFunction) {
        self.functions.push(FunctionEntry {
            name: name.to_string(),
            num: encode_poly(f.num()),
            den: encode_poly(f.den()),
        });
    }

    fn missing(kind: &str, name: &str) -> Error {
        Error::Parse(format!("fixture has no {kind} named {name}"))
    }

    pub fn curve(&self, s: &Surface, name: &str) -> Result<Curve> {
        let e = self
            .curves
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Self::missing("curve", name))?;
        curve_make(s, &decode_poly(s, &e.coeffs)?)
    }

    pub fn divisor(&self, s: &Surface, name: &str) -> Result<Divisor> {
        let e = self
            .divisors
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Self::missing("divisor", name))?;
        let mut d = Divisor::zero(s.model);
        for (c, &m) in &e.components {
            d.add_component(&self.curve(s, c)?, m);
        }
        Ok(d)
    }

    pub fn function(&self, s: &Surface, name: &str) -> Result<RationalFunction> {
        let e = self
            .functions
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Self::missing("function", name))?;
        RationalFunction::new(s.model, decode_poly(s, &e.num)?, decode_poly(s, &e.den)?)
    }
}
