//! The surfaces `P^2` and `P^1 x P^1` over a prime field: curves, divisors,
//! classes, closed points, flags and local expansions.

mod factor;
mod fixture;
mod flags;
mod points;

pub use factor::{class_monomials, factor_form};
pub use fixture::{decode_poly, encode_poly, CurveEntry, DivisorEntry, Fixture, FunctionEntry};
pub use flags::{
    divisor_of_form, expand_at_flag, flag_in_chart, flag_make, form_jacobian, ord_on_curve, Chart, Flag,
    Window2,
};
pub use points::{
    intersection_oracle, intersection_support, points_on_curve, resultant_profile, ClosedPoint,
};

use crate::error::{Error, Result};
use crate::fields::{field_make, prime_power, FieldDesc};
use crate::poly::Poly;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Model {
    P2,
    P1xP1,
}

impl Model {
    pub fn nvars(self) -> usize {
        match self {
            Model::P2 => 3,
            Model::P1xP1 => 4,
        }
    }

    pub fn names(self) -> &'static [&'static str] {
        crate::poly::default_names(self.nvars())
    }

    /// Variable groups in which forms must be homogeneous.
    pub fn groups(self) -> &'static [&'static [usize]] {
        match self {
            Model::P2 => &[&[0, 1, 2]],
            Model::P1xP1 => &[&[0, 1], &[2, 3]],
        }
    }

    pub fn canonical_class(self) -> ClassVector {
        match self {
            Model::P2 => ClassVector::P2(-3),
            Model::P1xP1 => ClassVector::P1xP1(-2, -2),
        }
    }

    pub fn zero_class(self) -> ClassVector {
        match self {
            Model::P2 => ClassVector::P2(0),
            Model::P1xP1 => ClassVector::P1xP1(0, 0),
        }
    }

    pub fn parse(s: &str) -> Result<Model> {
        match s.to_ascii_lowercase().as_str() {
            "p2" => Ok(Model::P2),
            "p1xp1" | "p1p1" => Ok(Model::P1xP1),
            _ => Err(Error::Parse(format!(
                "unknown surface '{s}' (expected P2 or P1xP1)"
            ))),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::P2 => "P2",
            Model::P1xP1 => "P1xP1",
        })
    }
}

/// Divisor class: the degree on `P^2`, the bidegree on `P^1 x P^1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassVector {
    P2(i64),
    P1xP1(i64, i64),
}

impl ClassVector {
    pub fn model(self) -> Model {
        match self {
            ClassVector::P2(_) => Model::P2,
            ClassVector::P1xP1(..) => Model::P1xP1,
        }
    }

    pub fn components(self) -> Vec<i64> {
        match self {
            ClassVector::P2(n) => vec![n],
            ClassVector::P1xP1(a, b) => vec![a, b],
        }
    }

    /// Intersection product of classes.
    pub fn dot(self, o: ClassVector) -> i64 {
        match (self, o) {
            (ClassVector::P2(a), ClassVector::P2(b)) => a * b,
            (ClassVector::P1xP1(a1, b1), ClassVector::P1xP1(a2, b2)) => a1 * b2 + a2 * b1,
            _ => panic!("classes on different surfaces"),
        }
    }
}

impl Add for ClassVector {
    type Output = ClassVector;
    fn add(self, o: ClassVector) -> ClassVector {
        match (self, o) {
            (ClassVector::P2(a), ClassVector::P2(b)) => ClassVector::P2(a + b),
            (ClassVector::P1xP1(a1, b1), ClassVector::P1xP1(a2, b2)) => ClassVector::P1xP1(a1 + a2, b1 + b2),
            _ => panic!("classes on different surfaces"),
        }
    }
}

impl Neg for ClassVector {
    type Output = ClassVector;
    fn neg(self) -> ClassVector {
        self * -1
    }
}

impl Sub for ClassVector {
    type Output = ClassVector;
    fn sub(self, o: ClassVector) -> ClassVector {
        self + (-o)
    }
}

impl Mul<i64> for ClassVector {
    type Output = ClassVector;
    fn mul(self, m: i64) -> ClassVector {
        match self {
            ClassVector::P2(a) => ClassVector::P2(a * m),
            ClassVector::P1xP1(a, b) => ClassVector::P1xP1(a * m, b * m),
        }
    }
}

impl fmt::Display for ClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassVector::P2(n) => write!(f, "{n}"),
            ClassVector::P1xP1(a, b) => write!(f, "({a},{b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surface {
    pub model: Model,
    pub base: FieldDesc,
}

impl Surface {
    /// A surface over the prime field `F_q`.
    pub fn new(model: Model, q: u64) -> Result<Surface> {
        match prime_power(q) {
            Some((p, 1)) => Ok(Surface {
                model,
                base: field_make(p as u64, 1)?,
            }),
            Some(_) => Err(Error::Unsupported(format!(
                "geometry over F_{q}: only prime base fields carry curves and flags"
            ))),
            None => Err(Error::NotPrime(q)),
        }
    }

    pub fn q(&self) -> u64 {
        self.base.order() as u64
    }

    pub fn parse_poly(&self, text: &str) -> Result<Poly> {
        Poly::parse(&self.base, self.model.names(), text)
    }

    pub fn curve(&self, text: &str) -> Result<Curve> {
        curve_make(self, &self.parse_poly(text)?)
    }

    /// The coordinate lines `X, Y, Z` or fibers `X0, X1, Y0, Y1`.
    pub fn coordinate_curves(&self) -> Vec<Curve> {
        (0..self.model.nvars())
            .map(|i| Curve::new_unchecked(self.model, Poly::var(&self.base, self.model.nvars(), i)))
            .collect()
    }

    /// Divisor of the fixed 2-form: `dx∧dy` in the chart `Z != 0` of `P^2`,
    /// `ds∧dr` with `s = X1/X0`, `r = Y1/Y0` on `P^1 x P^1`.
    pub fn omega_divisor(&self) -> Divisor {
        let c = self.coordinate_curves();
        match self.model {
            Model::P2 => Divisor::from_pairs(self.model, &[(c[2].clone(), -3)]),
            Model::P1xP1 => Divisor::from_pairs(self.model, &[(c[0].clone(), -2), (c[2].clone(), -2)]),
        }
    }
}

/// An irreducible curve given by a monic (bi)homogeneous form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Curve {
    model: Model,
    poly: Poly,
}

impl Curve {
    pub(crate) fn new_unchecked(model: Model, poly: Poly) -> Curve {
        Curve {
            model,
            poly: poly.monic(),
        }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn field(&self) -> &FieldDesc {
        self.poly.field()
    }

    pub fn class(&self) -> ClassVector {
        form_class(self.model, &self.poly)
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Curve({})", self.poly)
    }
}

pub(crate) fn form_class(model: Model, p: &Poly) -> ClassVector {
    match model {
        Model::P2 => ClassVector::P2(p.total_degree().unwrap_or(0) as i64),
        Model::P1xP1 => ClassVector::P1xP1(
            p.degree_in(&[0, 1]).unwrap_or(0) as i64,
            p.degree_in(&[2, 3]).unwrap_or(0) as i64,
        ),
    }
}

pub(crate) fn check_form(model: Model, p: &Poly) -> Result<()> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.nvars() != model.nvars() {
        return Err(Error::Parse(format!(
            "{p} has {} variables, {model} needs {}",
            p.nvars(),
            model.nvars()
        )));
    }
    for g in model.groups() {
        if !p.is_homogeneous_in(g) {
            return Err(Error::Parse(format!("{p} is not homogeneous on {model}")));
        }
    }
    Ok(())
}

/// Validates and normalizes an irreducible form.
pub fn curve_make(s: &Surface, poly: &Poly) -> Result<Curve> {
    check_form(s.model, poly)?;
    if poly.is_constant() {
        return Err(Error::Parse("a curve needs a nonconstant form".into()));
    }
    let factors = factor_form(s.model, poly)?;
    if factors.len() > 1 || factors[0].1 > 1 {
        let names = factors
            .iter()
            .flat_map(|(f, m)| std::iter::repeat(f.to_string()).take(*m as usize))
            .collect();
        return Err(Error::Reducible(names));
    }
    Ok(Curve::new_unchecked(s.model, poly.clone()))
}

/// A finite formal sum of curves.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Divisor {
    model: Model,
    components: BTreeMap<Curve, i64>,
}

impl Divisor {
    pub fn zero(model: Model) -> Divisor {
        Divisor {
            model,
            components: BTreeMap::new(),
        }
    }

    pub fn from_pairs(model: Model, pairs: &[(Curve, i64)]) -> Divisor {
        let mut d = Self::zero(model);
        for (c, m) in pairs {
            d.add_component(c, *m);
        }
        d
    }

    pub fn single(c: &Curve, m: i64) -> Divisor {
        Self::from_pairs(c.model, &[(c.clone(), m)])
    }

    pub fn add_component(&mut self, c: &Curve, m: i64) {
        let v = self.components.get(c).copied().unwrap_or(0) + m;
        if v == 0 {
            self.components.remove(c);
        } else {
            self.components.insert(c.clone(), v);
        }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn components(&self) -> impl Iterator<Item = (&Curve, i64)> {
        self.components.iter().map(|(c, m)| (c, *m))
    }

    pub fn multiplicity(&self, c: &Curve) -> i64 {
        self.components.get(c).copied().unwrap_or(0)
    }

    pub fn support(&self) -> Vec<Curve> {
        self.components.keys().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.components.values().all(|&m| m > 0)
    }

    pub fn add(&self, o: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (c, m) in o.components() {
            d.add_component(c, m);
        }
        d
    }

    pub fn scale(&self, k: i64) -> Divisor {
        let mut d = Self::zero(self.model);
        if k != 0 {
            for (c, m) in self.components() {
                d.components.insert(c.clone(), m * k);
            }
        }
        d
    }

    pub fn sub(&self, o: &Divisor) -> Divisor {
        self.add(&o.scale(-1))
    }

    pub fn positive_part(&self) -> Divisor {
        let mut d = Self::zero(self.model);
        for (c, m) in self.components() {
            if m > 0 {
                d.components.insert(c.clone(), m);
            }
        }
        d
    }

    pub fn negative_part(&self) -> Divisor {
        self.scale(-1).positive_part()
    }

    /// Whether `self <= o` componentwise.
    pub fn le(&self, o: &Divisor) -> bool {
        o.sub(self).components().all(|(_, m)| m > 0)
    }

    pub fn class(&self) -> ClassVector {
        self.components()
            .fold(self.model.zero_class(), |acc, (c, m)| acc + c.class() * m)
    }
}

/// Class of a divisor.
pub fn divisor_class(d: &Divisor) -> ClassVector {
    d.class()
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.components().map(|(c, m)| format!("{m}*({c})")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A quotient of forms of equal (bi)degree.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    model: Model,
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    /// `num / den`; the denominator is made monic.
    pub fn new(model: Model, num: Poly, den: Poly) -> Result<RationalFunction> {
        check_form(model, &den)?;
        if !num.is_zero() {
            check_form(model, &num)?;
            if form_class(model, &num) != form_class(model, &den) {
                return Err(Error::Parse(format!(
                    "numerator {num} and denominator {den} have different degrees"
                )));
            }
        }
        let lead = den.leading().unwrap().1;
        let s = num.field().inv(lead).unwrap();
        Ok(RationalFunction {
            model,
            num: num.scale(s),
            den: den.scale(s),
        })
    }

    pub fn constant(s: &Surface, c: u32) -> RationalFunction {
        Self::constant_in(s.model, &s.base, c)
    }

    pub fn constant_in(model: Model, k: &FieldDesc, c: u32) -> RationalFunction {
        let n = model.nvars();
        RationalFunction {
            model,
            num: Poly::constant(k, n, c),
            den: Poly::constant(k, n, 1),
        }
    }

    pub fn parse(s: &Surface, num: &str, den: &str) -> Result<RationalFunction> {
        Self::new(s.model, s.parse_poly(num)?, s.parse_poly(den)?)
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn mul(&self, o: &RationalFunction) -> RationalFunction {
        RationalFunction {
            model: self.model,
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
        .renormalized()
    }

    pub fn add(&self, o: &RationalFunction) -> RationalFunction {
        RationalFunction {
            model: self.model,
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
        .renormalized()
    }

    pub fn inv(&self) -> Result<RationalFunction> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.model, self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, n: i64) -> Result<RationalFunction> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let k = n.unsigned_abs() as u32;
        Ok(RationalFunction {
            model: self.model,
            num: base.num.pow(k),
            den: base.den.pow(k),
        }
        .renormalized())
    }

    fn renormalized(self) -> RationalFunction {
        let lead = self.den.leading().unwrap().1;
        let s = self.den.field().inv(lead).unwrap();
        RationalFunction {
            model: self.model,
            num: self.num.scale(s),
            den: self.den.scale(s),
        }
    }

    /// Cancels the common factors of numerator and denominator.
    pub fn reduced(&self) -> Result<RationalFunction> {
        if self.num.is_zero() {
            return Ok(self.clone());
        }
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        for (f, _) in factor_form(self.model, &self.den)? {
            while let (Some(a), Some(b)) = (num.div_exact(&f), den.div_exact(&f)) {
                num = a;
                den = b;
            }
        }
        Self::new(self.model, num, den)
    }

    /// Principal divisor `div(f)`.
    pub fn divisor(&self) -> Result<Divisor> {
        if self.num.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut d = Divisor::zero(self.model);
        for (f, m) in factor_form(self.model, &self.num)? {
            d.add_component(&Curve::new_unchecked(self.model, f), m as i64);
        }
        for (f, m) in factor_form(self.model, &self.den)? {
            d.add_component(&Curve::new_unchecked(self.model, f), -(m as i64));
        }
        Ok(d)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
