use super::{ClosedPoint, Curve, Divisor, Model, RationalFunction, Surface};
use crate::error::{precision, Error, Result, Var};
use crate::fields::FieldDesc;
use crate::poly::Poly;
use crate::series::{LaurentSeries2 as S, DEFAULT_PREC};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

/// Affine chart: the index of the coordinate set to 1 on `P^2`; the indices
/// `(i, j)` of `X_i`, `Y_j` set to 1 on `P^1 x P^1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Chart {
    P2(usize),
    P1xP1(usize, usize),
}

impl Chart {
    /// First chart containing the point, preferring `Z`, then `X`, then `Y`
    /// on `P^2` and `X0`, `Y0` on `P^1 x P^1`.
    pub fn containing(model: Model, coords: &[u32]) -> Chart {
        match model {
            Model::P2 => Chart::P2(*[2, 0, 1].iter().find(|&&i| coords[i] != 0).unwrap()),
            Model::P1xP1 => Chart::P1xP1(
                if coords[0] != 0 { 0 } else { 1 },
                if coords[2] != 0 { 0 } else { 1 },
            ),
        }
    }

    /// The chart in which the fixed 2-form is `da∧db`.
    pub fn standard(model: Model) -> Chart {
        match model {
            Model::P2 => Chart::P2(2),
            Model::P1xP1 => Chart::P1xP1(0, 0),
        }
    }

    fn model(self) -> Model {
        match self {
            Chart::P2(_) => Model::P2,
            Chart::P1xP1(..) => Model::P1xP1,
        }
    }

    /// Homogeneous variables set to 1.
    pub fn unit_vars(self) -> Vec<usize> {
        match self {
            Chart::P2(c) => vec![c],
            Chart::P1xP1(i, j) => vec![i, 2 + j],
        }
    }

    /// The homogeneous variables becoming the affine coordinates `(a, b)`.
    fn affine_vars(self) -> (usize, usize) {
        match self {
            Chart::P2(c) => {
                let v: Vec<usize> = (0..3).filter(|&i| i != c).collect();
                (v[0], v[1])
            }
            Chart::P1xP1(i, j) => (1 - i, 3 - j),
        }
    }

    /// Denominator variable of each affine coordinate.
    fn denominators(self) -> (usize, usize) {
        match self {
            Chart::P2(c) => (c, c),
            Chart::P1xP1(i, j) => (i, 2 + j),
        }
    }

    pub fn coordinate_names(self) -> (String, String) {
        let n = self.model().names();
        let (a, b) = self.affine_vars();
        let (da, db) = self.denominators();
        (format!("({}/{})", n[a], n[da]), format!("({}/{})", n[b], n[db]))
    }

    /// The form as a polynomial in the affine coordinates `(a, b)`.
    pub fn dehomogenize(self, f: &Poly) -> Poly {
        let k = f.field();
        let mut imgs = vec![Poly::constant(k, 2, 1); f.nvars()];
        let (a, b) = self.affine_vars();
        imgs[a] = Poly::var(k, 2, 0);
        imgs[b] = Poly::var(k, 2, 1);
        for u in self.unit_vars() {
            imgs[u] = Poly::constant(k, 2, 1);
        }
        f.compose(&imgs)
    }

    fn affine_point(self, k: &FieldDesc, coords: &[u32]) -> (u32, u32) {
        let (a, b) = self.affine_vars();
        let (da, db) = self.denominators();
        (
            k.mul(coords[a], k.inv(coords[da]).unwrap()),
            k.mul(coords[b], k.inv(coords[db]).unwrap()),
        )
    }
}

/// Precision window `(t, u)` for expansions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window2 {
    pub t: i64,
    pub u: i64,
}

impl Default for Window2 {
    fn default() -> Self {
        Window2 {
            t: DEFAULT_PREC,
            u: DEFAULT_PREC,
        }
    }
}

impl Window2 {
    pub fn new(t: i64, u: i64) -> Window2 {
        Window2 { t, u }
    }

    pub fn doubled(self) -> Window2 {
        Window2::new(self.t * 2, self.u * 2)
    }
}

/// A point on a curve smooth there, with local parameters: `t` is the
/// curve's affine equation, `u` an affine coordinate minus its value at the
/// point whose restriction to the curve is a uniformizer.
#[derive(Clone)]
pub struct Flag {
    point: ClosedPoint,
    curve: Curve,
    chart: Chart,
    origin: (u32, u32),
    u_is_a: bool,
    local_eq: Poly,
}

pub fn flag_make(x: &ClosedPoint, d: &Curve) -> Result<Flag> {
    flag_in_chart(x, d, Chart::containing(x.model(), x.coords()))
}

/// As [`flag_make`], with an explicit chart that must contain the point.
pub fn flag_in_chart(x: &ClosedPoint, d: &Curve, chart: Chart) -> Result<Flag> {
    if chart.unit_vars().iter().any(|&i| x.coords()[i] == 0) {
        return Err(Error::Unsupported(format!("{x} is outside the chart {chart:?}")));
    }
    if !x.lies_on(d.poly()) {
        return Err(Error::NotOnCurve {
            curve: d.to_string(),
            point: x.to_string(),
        });
    }
    let k = x.field();
    let origin = chart.affine_point(k, x.coords());
    let g = chart.dehomogenize(d.poly());
    let at = [origin.0, origin.1];
    let ga = g.derivative(0).eval(k, &at);
    let gb = g.derivative(1).eval(k, &at);
    let u_is_a = if gb != 0 {
        true
    } else if ga != 0 {
        false
    } else {
        return Err(Error::Singular {
            curve: d.to_string(),
            point: x.to_string(),
        });
    };
    Ok(Flag {
        point: x.clone(),
        curve: d.clone(),
        chart,
        origin,
        u_is_a,
        local_eq: g,
    })
}

static COORD_CACHE: Lazy<Mutex<HashMap<(String, Window2), (S, S)>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

impl Flag {
    pub fn point(&self) -> &ClosedPoint {
        &self.point
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    /// The residue field `k(x)` over which expansions live.
    pub fn field(&self) -> &FieldDesc {
        self.point.field()
    }

    pub fn degree(&self) -> u32 {
        self.point.degree()
    }

    /// The affine equation of the curve in the flag's chart.
    pub fn local_equation(&self) -> &Poly {
        &self.local_eq
    }

    pub fn u_param(&self) -> String {
        let (a, b) = self.chart.coordinate_names();
        let (name, v) = if self.u_is_a {
            (a, self.origin.0)
        } else {
            (b, self.origin.1)
        };
        if v == 0 {
            name
        } else {
            format!("{name} - {}", self.field().format(v))
        }
    }

    pub fn t_param(&self) -> String {
        let (a, b) = self.chart.coordinate_names();
        self.local_eq.format_with(&[&a, &b])
    }

    /// `u` and `t` as rational functions on the surface; rational points only.
    pub fn parameters(&self) -> Result<(RationalFunction, RationalFunction)> {
        if self.degree() != 1 {
            return Err(Error::Unsupported(
                "parameters of a flag at a non-rational point".into(),
            ));
        }
        let model = self.curve.model();
        let k0 = self.curve.field();
        let n = model.nvars();
        let (a, b) = self.chart.affine_vars();
        let (da, db) = self.chart.denominators();
        let (num, den, v) = if self.u_is_a {
            (a, da, self.origin.0)
        } else {
            (b, db, self.origin.1)
        };
        let dv = Poly::var(k0, n, den);
        let u = RationalFunction::new(model, Poly::var(k0, n, num).sub(&dv.scale(v)), dv)?;
        let mut unit = Poly::constant(k0, n, 1);
        for (var, deg) in self
            .chart
            .unit_vars()
            .into_iter()
            .zip(self.curve.class().components())
        {
            unit = unit.mul(&Poly::var(k0, n, var).pow(deg as u32));
        }
        let t = RationalFunction::new(model, self.curve.poly().clone(), unit)?;
        Ok((u, t))
    }

    fn key(&self) -> String {
        format!(
            "{}|{}|{:?}|{}^{}",
            self.curve,
            self.point,
            self.chart,
            self.field().p(),
            self.degree()
        )
    }

    /// Expansions of the affine chart coordinates `(a, b)` in `k(x)[[u, t]]`.
    pub fn coordinate_series(&self, w: Window2) -> Result<(S, S)> {
        let key = (self.key(), w);
        if let Some(v) = COORD_CACHE.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = self.solve_coordinates(w)?;
        COORD_CACHE.lock().unwrap().insert(key, v.clone());
        Ok(v)
    }

    /// Solves `g(v0 + u, w0 + beta) = t` for `beta` by Newton iteration in
    /// `k(x)[[u, t]] / (u^U, t^T)`.
    fn solve_coordinates(&self, w: Window2) -> Result<(S, S)> {
        let k = self.field();
        let u = S::monomial(k, 1, 0, 1, w.t, w.u);
        let t = S::monomial(k, 1, 1, 0, w.t, w.u);
        let (v0, w0) = if self.u_is_a {
            self.origin
        } else {
            (self.origin.1, self.origin.0)
        };
        let v_s = S::constant(k, v0).add(&u);
        let gw = self.local_eq.derivative(if self.u_is_a { 1 } else { 0 });
        let order = |vs: &S, ws: &S| -> [S; 2] {
            if self.u_is_a {
                [vs.clone(), ws.clone()]
            } else {
                [ws.clone(), vs.clone()]
            }
        };
        let mut beta = S::exact_zero(k).truncate(w.t, w.u);
        let rounds = 64 - ((w.t + w.u) as u64).leading_zeros() + 2;
        for _ in 0..=rounds {
            let w_s = S::constant(k, w0).add(&beta);
            let args = order(&v_s, &w_s);
            let r = self.local_eq.eval_series(&args).sub(&t).truncate(w.t, w.u);
            if r.is_zero() {
                let [a, b] = args;
                return Ok((a.truncate(w.t, w.u), b.truncate(w.t, w.u)));
            }
            let d = gw.eval_series(&args).truncate(w.t, w.u).inv()?;
            beta = beta.sub(&r.mul(&d)).truncate(w.t, w.u);
        }
        Err(precision(Var::T, "local coordinate iteration did not settle"))
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} on {}: u = {}, t = {}]",
            self.point,
            self.curve,
            self.u_param(),
            self.t_param()
        )
    }
}

impl fmt::Debug for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl PartialEq for Flag {
    fn eq(&self, o: &Self) -> bool {
        self.curve == o.curve && self.point == o.point
    }
}

impl Eq for Flag {}

impl PartialOrd for Flag {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Flag {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (&self.curve, &self.point).cmp(&(&o.curve, &o.point))
    }
}

/// Multiplicity of `d` in `div(f)`, by exact division.
pub fn ord_on_curve(f: &RationalFunction, d: &Curve) -> i64 {
    let (a, _) = f.num().split_power(d.poly());
    let (b, _) = f.den().split_power(d.poly());
    a as i64 - b as i64
}

/// Image of `f` in `k(x)((u))((t))`, known modulo `u^{w.u}` and to relative
/// t-precision `w.t`. Powers of the curve equation are split off exactly,
/// since the equation expands to `t` itself.
pub fn expand_at_flag(f: &RationalFunction, fl: &Flag, w: Window2) -> Result<S> {
    let k = fl.field();
    if f.is_zero() {
        return Ok(S::exact_zero(k));
    }
    let (e1, num) = f.num().split_power(fl.curve.poly());
    let (e2, den) = f.den().split_power(fl.curve.poly());
    let num = fl.chart.dehomogenize(&num);
    let den = fl.chart.dehomogenize(&den);
    // A pole of the denominator at the point costs twice its order in u.
    let mut inner = w;
    for _ in 0..12 {
        let args: [S; 2] = fl.coordinate_series(inner)?.into();
        let ns = num.eval_series(&args).truncate(inner.t, inner.u);
        let ds = den.eval_series(&args).truncate(inner.t, inner.u);
        match ds.inv() {
            Ok(d) => {
                let r = ns.mul(&d);
                if r.u_prec() >= w.u {
                    return Ok(r.truncate(r.t_prec(), w.u).shift_t(e1 as i64 - e2 as i64));
                }
            }
            Err(Error::InsufficientPrecision { .. }) => {}
            Err(e) => return Err(e),
        }
        inner.u += w.u.max(4);
    }
    Err(precision(Var::U, format!("expansion of {f} at {}", fl.point)))
}

/// The factor `J` with `omega = J du∧dt` at the flag.
pub fn form_jacobian(model: Model, fl: &Flag, w: Window2) -> Result<S> {
    let k0 = fl.curve.field();
    let n = model.nvars();
    let var = |i| Poly::var(k0, n, i);
    let (x, y) = match model {
        Model::P2 => (
            RationalFunction::new(model, var(0), var(2))?,
            RationalFunction::new(model, var(1), var(2))?,
        ),
        Model::P1xP1 => (
            RationalFunction::new(model, var(1), var(0))?,
            RationalFunction::new(model, var(3), var(2))?,
        ),
    };
    let xs = expand_at_flag(&x, fl, w)?;
    let ys = expand_at_flag(&y, fl, w)?;
    Ok(xs
        .derive(Var::U)
        .mul(&ys.derive(Var::T))
        .sub(&xs.derive(Var::T).mul(&ys.derive(Var::U))))
}

/// Orders of the fixed 2-form along the candidate curves, and whether their
/// sum has the canonical class.
pub fn divisor_of_form(s: &Surface, candidates: &[Curve]) -> Result<(Divisor, bool)> {
    let mut div = Divisor::zero(s.model);
    for d in candidates {
        let fl = super::points_on_curve(d, 3)?
            .iter()
            .find_map(|x| flag_make(x, d).ok())
            .ok_or_else(|| Error::Unsupported(format!("no smooth point found on {d}")))?;
        let mut w = Window2::new(6, 6);
        let mut last = None;
        for _ in 0..4 {
            match form_jacobian(s.model, &fl, w).and_then(|j| j.valuation()) {
                Ok((vt, _)) => {
                    last = Some(vt);
                    break;
                }
                Err(Error::InsufficientPrecision { .. }) => w = w.doubled(),
                Err(e) => return Err(e),
            }
        }
        let vt = last.ok_or_else(|| precision(Var::T, format!("order of the form along {d}")))?;
        div.add_component(d, vt);
    }
    let checked = div.class() == s.model.canonical_class();
    Ok((div, checked))
}
