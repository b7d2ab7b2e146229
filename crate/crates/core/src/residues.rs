//! Residues of rational 2-forms at flags, the reciprocity sums and the
//! pairing of finite adele fragments.

use crate::error::{Error, Result};
use crate::fields::{ff_trace, FieldElem};
use crate::poly::{Exps, Poly};
use crate::series::{res2, LaurentSeries2, LocalForm2};
use crate::surface::{
    class_monomials, expand_at_flag, flag_make, form_jacobian, intersection_support, ord_on_curve,
    points_on_curve, ClassVector, ClosedPoint, Curve, Divisor, Flag, Model, RationalFunction, Surface,
    Window2,
};
use std::collections::BTreeMap;
use std::fmt;

/// Default starting window; escalation doubles it.
pub const DEFAULT_WINDOW: Window2 = Window2 { t: 4, u: 8 };
const ESCALATIONS: usize = 4;

/// The form `coefficient · omega`, `omega` the fixed chart form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalForm {
    pub coefficient: RationalFunction,
}

impl GlobalForm {
    pub fn new(coefficient: RationalFunction) -> Self {
        GlobalForm { coefficient }
    }

    pub fn omega(s: &Surface) -> Self {
        GlobalForm::new(RationalFunction::constant(s, 1))
    }

    pub fn times(&self, f: &RationalFunction) -> Self {
        GlobalForm::new(self.coefficient.mul(f))
    }

    /// `div(coefficient) + (omega)`.
    pub fn divisor(&self, s: &Surface) -> Result<Divisor> {
        Ok(self.coefficient.divisor()?.add(&s.omega_divisor()))
    }

    /// Curves along which the form has a pole.
    pub fn polar_curves(&self, s: &Surface) -> Result<Vec<Curve>> {
        Ok(self.divisor(s)?.negative_part().support())
    }

    /// Order of the form along `d`.
    pub fn order_along(&self, s: &Surface, d: &Curve) -> i64 {
        ord_on_curve(&self.coefficient, d) + s.omega_divisor().multiplicity(d)
    }

    /// The form at a flag as a series `g` with `form = g du∧dt`.
    pub fn local_integrand(&self, s: &Surface, fl: &Flag, w: Window2) -> Result<LaurentSeries2> {
        let f = expand_at_flag(&self.coefficient, fl, w)?;
        Ok(f.mul(&form_jacobian(s.model, fl, w)?))
    }
}

impl fmt::Display for GlobalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) omega", self.coefficient)
    }
}

/// Runs `attempt` on growing windows until it stops reporting missing
/// precision. The u-window doubles each round; the t-window grows by one,
/// since the t-order needed is known up front and inverting a series whose
/// leading coefficient has a u-pole costs u-precision on every t-level.
pub fn with_escalation<T>(start: Window2, mut attempt: impl FnMut(Window2) -> Result<T>) -> Result<T> {
    let mut w = start;
    let mut last = None;
    for _ in 0..=ESCALATIONS {
        match attempt(w) {
            Err(e @ Error::InsufficientPrecision { .. }) => last = Some(e),
            other => return other,
        }
        w = Window2::new(w.t + 1, w.u * 2);
    }
    Err(last.unwrap())
}

/// `res_{x,D}` of the form, in `k(x)`.
pub fn local_residue(s: &Surface, w: &GlobalForm, fl: &Flag, prec: Window2) -> Result<FieldElem> {
    let order = w.order_along(s, fl.curve());
    if order >= 0 || w.coefficient.is_zero() {
        return Ok(fl.field().zero());
    }
    let start = Window2::new(prec.t.max(3 - order), prec.u);
    with_escalation(start, |win| {
        res2(&LocalForm2::new(w.local_integrand(s, fl, win)?))
    })
}

/// `sum_D res_{x,D}` over the given curves through `x`. Every polar curve of
/// the form passing through `x` must be listed.
pub fn residue_sum_around_point(
    s: &Surface,
    w: &GlobalForm,
    x: &ClosedPoint,
    curves: &[Curve],
) -> Result<FieldElem> {
    for c in w.polar_curves(s)? {
        if x.lies_on(c.poly()) && !curves.contains(&c) {
            return Err(Error::IncompleteCurves(c.to_string()));
        }
    }
    let k = x.field();
    let mut acc = 0;
    for d in curves {
        let fl = flag_make(x, d)?;
        let r = local_residue(s, w, &fl, DEFAULT_WINDOW)?;
        acc = k.add(acc, r.value());
    }
    Ok(k.elem(acc))
}

/// Points of `d` where the residue of the form along `d` can be nonzero:
/// the intersections with the other components of the form's divisor.
pub fn residue_candidates(s: &Surface, w: &GlobalForm, d: &Curve) -> Result<Vec<ClosedPoint>> {
    let mut pts = Vec::new();
    for c in w.divisor(s)?.support() {
        if &c != d {
            for x in intersection_support(d, &c)? {
                if !pts.contains(&x) {
                    pts.push(x);
                }
            }
        }
    }
    pts.sort();
    Ok(pts)
}

/// Number of additional points checked to have residue zero.
const SAMPLE_POINTS: usize = 3;

/// `sum_x tr_{k(x)/k} res_{x,D}` over the points of `d`, in the prime field.
pub fn residue_sum_along_curve(s: &Surface, w: &GlobalForm, d: &Curve) -> Result<FieldElem> {
    let k = s.base.prime_field();
    if w.order_along(s, d) >= 0 {
        return Ok(k.zero());
    }
    let candidates = residue_candidates(s, w, d)?;
    let mut acc = 0;
    for x in &candidates {
        let r = local_residue(s, w, &flag_make(x, d)?, DEFAULT_WINDOW)?;
        acc = k.add(acc, ff_trace(&r).value());
    }
    let others = points_on_curve(d, 1)?
        .into_iter()
        .filter(|x| !candidates.contains(x))
        .take(SAMPLE_POINTS);
    for x in others {
        let Ok(fl) = flag_make(&x, d) else { continue };
        let r = local_residue(s, w, &fl, DEFAULT_WINDOW)?;
        if !r.is_zero() {
            return Err(Error::UnexpectedResidue {
                point: x.to_string(),
                value: r.to_string(),
            });
        }
    }
    Ok(k.elem(acc))
}

/// Finitely many components `f_{x,D}` of an adele; zero elsewhere. Entries
/// are coefficients of `du∧dt` in the flag's parameters.
#[derive(Clone, Debug, Default)]
pub struct AdeleFragment {
    pub entries: BTreeMap<Flag, LaurentSeries2>,
}

impl AdeleFragment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(fl: &Flag, v: LaurentSeries2) -> Self {
        let mut a = Self::new();
        a.insert(fl, v);
        a
    }

    pub fn insert(&mut self, fl: &Flag, v: LaurentSeries2) {
        self.entries.insert(fl.clone(), v);
    }

    pub fn add(&self, o: &AdeleFragment) -> AdeleFragment {
        let mut out = self.clone();
        for (fl, v) in &o.entries {
            let sum = match out.entries.get(fl) {
                Some(a) => a.add(v),
                None => v.clone(),
            };
            out.entries.insert(fl.clone(), sum);
        }
        out
    }

    pub fn scale(&self, c: u32) -> AdeleFragment {
        AdeleFragment {
            entries: self
                .entries
                .iter()
                .map(|(f, v)| (f.clone(), v.scale(c)))
                .collect(),
        }
    }

    /// Multiplies every entry by the local integrand of `w`, so that pairing
    /// against the result pairs against `w` instead of `du∧dt`.
    pub fn twist(&self, s: &Surface, w: &GlobalForm, prec: Window2) -> Result<AdeleFragment> {
        let mut out = AdeleFragment::new();
        for (fl, v) in &self.entries {
            out.insert(fl, v.mul(&w.local_integrand(s, fl, prec)?));
        }
        Ok(out)
    }
}

/// `sum_flags tr res(a · b du∧dt)`, in the prime field of the flags.
pub fn adelic_pairing(a: &AdeleFragment, b: &AdeleFragment) -> Result<FieldElem> {
    let mut k = None;
    let mut acc = 0;
    for (fl, x) in &a.entries {
        let kp = fl.field().prime_field();
        if let Some(y) = b.entries.get(fl) {
            let r = res2(&LocalForm2::new(x.mul(y)))?;
            acc = kp.add(acc, ff_trace(&r).value());
        }
        k = Some(kp);
    }
    let k = match (k, b.entries.keys().next()) {
        (Some(k), _) => k,
        (None, Some(fl)) => fl.field().prime_field(),
        (None, None) => return Err(Error::Unsupported("pairing of empty fragments".into())),
    };
    Ok(k.elem(acc))
}

/// Outcome of checking both reciprocity laws for one form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReciprocityCheck {
    pub point_sums: usize,
    pub curve_sums: usize,
    /// Local residues found nonzero while forming the point sums.
    pub nonzero_terms: usize,
    pub failures: Vec<String>,
}

impl ReciprocityCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates the sum around every point where a polar curve meets another
/// component of the form's divisor, and the sum along every polar curve.
/// Points where a polar curve is singular are outside the supported range
/// and surface as `Singular` errors.
pub fn check_reciprocity(s: &Surface, w: &GlobalForm) -> Result<ReciprocityCheck> {
    let polar = w.polar_curves(s)?;
    let mut out = ReciprocityCheck::default();
    let mut points: Vec<ClosedPoint> = Vec::new();
    for d in &polar {
        for x in residue_candidates(s, w, d)? {
            if !points.contains(&x) {
                points.push(x);
            }
        }
    }
    points.sort();
    for x in &points {
        let through: Vec<Curve> = polar.iter().filter(|c| x.lies_on(c.poly())).cloned().collect();
        for d in &through {
            if !local_residue(s, w, &flag_make(x, d)?, DEFAULT_WINDOW)?.is_zero() {
                out.nonzero_terms += 1;
            }
        }
        let r = residue_sum_around_point(s, w, x, &through)?;
        out.point_sums += 1;
        if !r.is_zero() {
            out.failures.push(format!("sum around {x} is {r}"));
        }
    }
    for d in &polar {
        let r = residue_sum_along_curve(s, w, d)?;
        out.curve_sums += 1;
        if !r.is_zero() {
            out.failures.push(format!("sum along {d} is {r}"));
        }
    }
    Ok(out)
}

/// Random nonzero form of the given class.
pub fn random_poly<R: rand::Rng>(rng: &mut R, s: &Surface, class: ClassVector) -> Poly {
    let monos = class_monomials(s.model, class);
    let q = s.q() as u32;
    loop {
        let terms: Vec<(Exps, u32)> = monos.iter().map(|&e| (e, rng.gen_range(0..q))).collect();
        let f = Poly::from_terms(&s.base, s.model.nvars(), &terms);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Random form `(N/M) omega` with `N`, `M` of total degree at most `max_deg`.
pub fn random_global_form<R: rand::Rng>(rng: &mut R, s: &Surface, max_deg: u16) -> Result<GlobalForm> {
    let d = rng.gen_range(1..=max_deg as i64);
    let class = match s.model {
        Model::P2 => ClassVector::P2(d),
        Model::P1xP1 => {
            let a = rng.gen_range(0..=d);
            ClassVector::P1xP1(a, d - a)
        }
    };
    let num = random_poly(rng, s, class);
    let den = random_poly(rng, s, class);
    Ok(GlobalForm::new(
        RationalFunction::new(s.model, num, den)?.reduced()?,
    ))
}
