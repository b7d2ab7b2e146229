//! Integer symbols `(f, g)_{x,D}`, the commutator pairing of j-ideles and
//! intersection numbers by the symbol route.

use crate::error::{precision, Error, Result, Var};
use crate::poly::Poly;
use crate::residues::with_escalation;
use crate::series::{LaurentSeries1, LaurentSeries2};
use crate::surface::{
    expand_at_flag, flag_make, intersection_support, points_on_curve, ClassVector, Curve, Divisor, Flag,
    Model, RationalFunction, Window2,
};
use std::fmt;

pub use crate::surface::intersection_oracle;

/// The number `q^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QPower {
    pub exponent: i64,
}

impl QPower {
    pub const ONE: QPower = QPower { exponent: 0 };

    pub fn new(exponent: i64) -> Self {
        QPower { exponent }
    }

    pub fn mul(self, o: QPower) -> QPower {
        QPower::new(self.exponent + o.exponent)
    }

    pub fn inv(self) -> QPower {
        QPower::new(-self.exponent)
    }

    /// Exact value for a concrete `q`, as a reduced fraction.
    pub fn value(self, q: u64) -> (u128, u128) {
        let v = (q as u128).pow(self.exponent.unsigned_abs() as u32);
        if self.exponent >= 0 {
            (v, 1)
        } else {
            (1, v)
        }
    }
}

impl fmt::Display for QPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^{}", self.exponent)
    }
}

fn leading(f: &LaurentSeries2) -> Result<(i64, LaurentSeries1)> {
    let (v, _) = f.valuation()?;
    Ok((v, f.coeff(v).expect("valuation lies inside the window")))
}

/// Tame symbol in `t`: `(-1)^{ab} f^b g^{-a}` modulo `t`, where `a`, `b` are
/// the t-orders of `f`, `g`.
pub fn tame_t(f: &LaurentSeries2, g: &LaurentSeries2) -> Result<LaurentSeries1> {
    tame_t_signed(f, g, true)
}

/// As [`tame_t`], optionally without the sign factor.
pub fn tame_t_signed(f: &LaurentSeries2, g: &LaurentSeries2, sign: bool) -> Result<LaurentSeries1> {
    let (a, cf) = leading(f)?;
    let (b, cg) = leading(g)?;
    let v = cf.powi(b)?.mul(&cg.powi(-a)?);
    Ok(if sign && a * b % 2 != 0 { v.neg() } else { v })
}

/// u-order of the tame symbol.
pub fn bisymbol(f: &LaurentSeries2, g: &LaurentSeries2) -> Result<i64> {
    symbol_order(&tame_t(f, g)?)
}

pub fn bisymbol_unsigned(f: &LaurentSeries2, g: &LaurentSeries2) -> Result<i64> {
    symbol_order(&tame_t_signed(f, g, false)?)
}

fn symbol_order(v: &LaurentSeries1) -> Result<i64> {
    v.valuation()
        .ok_or_else(|| precision(Var::U, "tame symbol vanishes at the current precision"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IdeleKind {
    /// Components along curves: order along `D` equals the multiplicity.
    AlongCurves,
    /// Components at points: a local equation of the divisor germ.
    AtPoints,
}

/// Deterministic choice of the j-idele of a divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdeleRule {
    pub kind: IdeleKind,
    pub divisor: Divisor,
}

pub fn idele_j(e: &Divisor, kind: IdeleKind) -> IdeleRule {
    IdeleRule {
        kind,
        divisor: e.clone(),
    }
}

/// A product of coordinate forms of class `class` not divisible by `d`.
fn unit_form(d: &Curve, class: ClassVector) -> Poly {
    let k = d.field();
    let model = d.model();
    let n = model.nvars();
    let is_d = |i: usize| Poly::var(k, n, i).monic() == d.poly().monic();
    match class {
        ClassVector::P2(m) => {
            let v = [2, 0, 1].into_iter().find(|&i| !is_d(i)).unwrap();
            Poly::var(k, n, v).pow(m as u32)
        }
        ClassVector::P1xP1(a, b) => {
            let x = if is_d(0) { 1 } else { 0 };
            let y = if is_d(2) { 3 } else { 2 };
            Poly::var(k, n, x)
                .pow(a as u32)
                .mul(&Poly::var(k, n, y).pow(b as u32))
        }
    }
}

fn power(model: Model, num: &Poly, den: &Poly, m: i64) -> Result<RationalFunction> {
    RationalFunction::new(model, num.clone(), den.clone())?.pow(m)
}

impl IdeleRule {
    /// Multiplicative structure: the rule of `E1 + E2` from those of `E1`, `E2`.
    pub fn mul(&self, o: &IdeleRule) -> Result<IdeleRule> {
        if self.kind != o.kind {
            return Err(Error::Unsupported(
                "product of j-ideles of different kinds".into(),
            ));
        }
        Ok(idele_j(&self.divisor.add(&o.divisor), self.kind))
    }

    /// The global function representing the idele's component at the flag.
    pub fn at_flag(&self, fl: &Flag) -> Result<RationalFunction> {
        let model = self.divisor.model();
        let d = fl.curve();
        let mut f = RationalFunction::constant_in(model, d.field(), 1);
        match self.kind {
            IdeleKind::AlongCurves => {
                let m = self.divisor.multiplicity(d);
                if m != 0 {
                    f = power(model, d.poly(), &unit_form(d, d.class()), m)?;
                }
            }
            IdeleKind::AtPoints => {
                let x = fl.point();
                let units = fl.chart().unit_vars();
                for (c, m) in self.divisor.components() {
                    if !x.lies_on(c.poly()) {
                        continue;
                    }
                    let k = c.field();
                    let mut den = Poly::constant(k, model.nvars(), 1);
                    for (&v, deg) in units.iter().zip(c.class().components()) {
                        den = den.mul(&Poly::var(k, model.nvars(), v).pow(deg as u32));
                    }
                    f = f.mul(&power(model, c.poly(), &den, m)?);
                }
            }
        }
        Ok(f)
    }
}

/// `(g1, g2)_{x,D}` for the chosen components at the flag.
pub fn flag_symbol(g1: &IdeleRule, g2: &IdeleRule, fl: &Flag) -> Result<i64> {
    let f1 = g1.at_flag(fl)?;
    let f2 = g2.at_flag(fl)?;
    with_escalation(Window2::new(2, 8), |w| {
        bisymbol(&expand_at_flag(&f1, fl, w)?, &expand_at_flag(&f2, fl, w)?)
    })
}

/// Number of rational flags outside the list probed for a nonzero symbol.
const PROBES: usize = 4;

/// `<g1, g2> = prod q^{-[k(x):k] (g1, g2)_{x,D}}` over the given flags.
pub fn commutator_pairing(g1: &IdeleRule, g2: &IdeleRule, flags: &[Flag]) -> Result<QPower> {
    let mut exp = 0;
    for fl in flags {
        exp -= fl.degree() as i64 * flag_symbol(g1, g2, fl)?;
    }
    let mut curves: Vec<Curve> = g1.divisor.support();
    curves.extend(g2.divisor.support());
    for d in curves {
        let probes = points_on_curve(&d, 1)?
            .into_iter()
            .filter_map(|x| flag_make(&x, &d).ok())
            .filter(|fl| !flags.contains(fl))
            .take(PROBES);
        for fl in probes {
            if flag_symbol(g1, g2, &fl)? != 0 {
                return Err(Error::MissingFlags(fl.to_string()));
            }
        }
    }
    Ok(QPower::new(exp))
}

/// Flags `(x, D)` with `D` a component of `h` and `x` on `c`.
pub fn symbol_flags(c: &Divisor, h: &Divisor) -> Result<Vec<Flag>> {
    let mut out = Vec::new();
    for d in h.support() {
        for e in c.support() {
            for x in intersection_support(&d, &e)? {
                let fl = flag_make(&x, &d)?;
                if !out.contains(&fl) {
                    out.push(fl);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `(C, H)` from `<j_{2,C}, j_{1,H}> = q^{-(C,H)}`.
pub fn intersection_number(c: &Divisor, h: &Divisor) -> Result<i64> {
    for d in c.support() {
        if h.multiplicity(&d) != 0 {
            return Err(Error::CommonComponent(d.to_string()));
        }
    }
    let flags = symbol_flags(c, h)?;
    let g1 = idele_j(c, IdeleKind::AtPoints);
    let g2 = idele_j(h, IdeleKind::AlongCurves);
    Ok(-commutator_pairing(&g1, &g2, &flags)?.exponent)
}
