use super::{Curve, Divisor, Model};
use crate::error::{Error, Result};
use crate::fields::{field_make, FieldDesc, UPoly};
use crate::poly::Poly;
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

/// A Galois orbit of geometric points, stored as its lexicographically least
/// member with coordinates in the residue field `F_{p^degree}`.
#[derive(Clone)]
pub struct ClosedPoint {
    model: Model,
    field: FieldDesc,
    coords: Vec<u32>,
}

impl ClosedPoint {
    /// The orbit through `coords` (entries of `field`), provided the point
    /// generates `field`; `None` for the zero vector or a smaller orbit.
    pub fn from_coords(model: Model, field: &FieldDesc, coords: &[u32]) -> Option<ClosedPoint> {
        let start = normalize(model, field, coords)?;
        let mut orbit = vec![start.clone()];
        loop {
            let next: Vec<u32> = orbit
                .last()
                .unwrap()
                .iter()
                .map(|&c| field.frobenius(c))
                .collect();
            if next == start {
                break;
            }
            orbit.push(next);
        }
        if orbit.len() as u32 != field.degree() {
            return None;
        }
        Some(ClosedPoint {
            model,
            field: field.clone(),
            coords: orbit.into_iter().min().unwrap(),
        })
    }

    /// A point with coordinates in the prime field.
    pub fn rational(model: Model, base: &FieldDesc, coords: &[u32]) -> Option<ClosedPoint> {
        Self::from_coords(model, &base.prime_field(), coords)
    }

    pub fn model(&self) -> Model {
        self.model
    }

    /// The residue field `k(x)`.
    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn degree(&self) -> u32 {
        self.field.degree()
    }

    pub fn lies_on(&self, poly: &Poly) -> bool {
        poly.eval(&self.field, &self.coords) == 0
    }

    /// All members of the orbit, starting with the representative.
    pub fn conjugates(&self) -> Vec<Vec<u32>> {
        let mut out = vec![self.coords.clone()];
        for _ in 1..self.degree() {
            let next = out
                .last()
                .unwrap()
                .iter()
                .map(|&c| self.field.frobenius(c))
                .collect();
            out.push(next);
        }
        out
    }
}

fn normalize(model: Model, k: &FieldDesc, c: &[u32]) -> Option<Vec<u32>> {
    let mut out = c.to_vec();
    let groups: &[std::ops::Range<usize>] = match model {
        Model::P2 => &[0..3],
        Model::P1xP1 => &[0..2, 2..4],
    };
    for g in groups {
        let lead = out[g.clone()].iter().copied().find(|&x| x != 0)?;
        let inv = k.inv(lead).unwrap();
        for x in &mut out[g.clone()] {
            *x = k.mul(*x, inv);
        }
    }
    Some(out)
}

impl PartialEq for ClosedPoint {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for ClosedPoint {}

impl PartialOrd for ClosedPoint {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for ClosedPoint {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.model, self.degree(), &self.coords).cmp(&(o.model, o.degree(), &o.coords))
    }
}

impl fmt::Display for ClosedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.coords.iter().map(|&c| self.field.format(c)).collect();
        match self.model {
            Model::P2 => write!(f, "({})", s.join(":"))?,
            Model::P1xP1 => write!(f, "({}:{})x({}:{})", s[0], s[1], s[2], s[3])?,
        }
        if self.degree() > 1 {
            write!(f, "[deg {}]", self.degree())?;
        }
        Ok(())
    }
}

impl fmt::Debug for ClosedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Normalized projective points of the ambient surface over `k`.
fn ambient_points(model: Model, k: &FieldDesc) -> Vec<Vec<u32>> {
    let q = k.order();
    let line: Vec<[u32; 2]> = (0..q).map(|x| [1, x]).chain([[0, 1]]).collect();
    let mut v = Vec::new();
    match model {
        Model::P2 => {
            for y in 0..q {
                for z in 0..q {
                    v.push(vec![1, y, z]);
                }
                v.push(vec![0, 1, y]);
            }
            v.push(vec![0, 0, 1]);
        }
        Model::P1xP1 => {
            for a in &line {
                for b in &line {
                    v.push(vec![a[0], a[1], b[0], b[1]]);
                }
            }
        }
    }
    v
}

/// All closed points of `d` of degree at most `max_degree`, once per orbit,
/// sorted by degree and coordinates.
pub fn points_on_curve(d: &Curve, max_degree: u32) -> Result<Vec<ClosedPoint>> {
    let p = d.field().p() as u64;
    let mut out = BTreeSet::new();
    for e in 1..=max_degree {
        let k = field_make(p, e)?;
        for pt in ambient_points(d.model(), &k) {
            if d.poly().eval(&k, &pt) != 0 {
                continue;
            }
            if let Some(cp) = ClosedPoint::from_coords(d.model(), &k, &pt) {
                out.insert(cp);
            }
        }
    }
    Ok(out.into_iter().collect())
}

fn sylvester_det(f: &[UPoly], g: &[UPoly], k: &FieldDesc) -> UPoly {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let zero = UPoly::zero(k);
    let mut a = vec![vec![zero.clone(); size]; size];
    for r in 0..n {
        for i in 0..=m {
            a[r][r + i] = f[m - i].clone();
        }
    }
    for r in 0..m {
        for i in 0..=n {
            a[n + r][r + i] = g[n - i].clone();
        }
    }
    bareiss(a, k)
}

/// Fraction-free determinant over `F_p[x]`.
fn bareiss(mut a: Vec<Vec<UPoly>>, k: &FieldDesc) -> UPoly {
    let n = a.len();
    if n == 0 {
        return UPoly::constant(k, 1);
    }
    let mut prev = UPoly::constant(k, 1);
    let mut negate = false;
    for c in 0..n {
        if a[c][c].is_zero() {
            match (c + 1..n).find(|&r| !a[r][c].is_zero()) {
                Some(r) => {
                    a.swap(c, r);
                    negate = !negate;
                }
                None => return UPoly::zero(k),
            }
        }
        for i in c + 1..n {
            for j in c + 1..n {
                let v = a[i][j].mul(&a[c][c]).sub(&a[i][c].mul(&a[c][j]));
                a[i][j] = v.exact_div(&prev);
            }
        }
        prev = a[c][c].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        d.scale(k.neg(1))
    } else {
        d
    }
}

/// Projection data for eliminating the fiber coordinate.
struct Elimination {
    model: Model,
    /// Shift applied on `P^2` so that `(0:1:0)` is not a common point.
    shift: (u32, u32),
    c: Poly,
    h: Poly,
    /// Formal fiber degrees.
    dc: usize,
    dh: usize,
    bezout: u32,
}

impl Elimination {
    fn new(c: &Curve, h: &Curve) -> Result<Elimination> {
        if c == h {
            return Err(Error::CommonComponent(c.to_string()));
        }
        let model = c.model();
        let k = c.field().clone();
        let bezout = c.class().dot(h.class()) as u32;
        match model {
            Model::P2 => {
                let p = k.p();
                let shift = (0..p)
                    .flat_map(|a| (0..p).map(move |b| (a, b)))
                    .find(|&(a, b)| {
                        let pt = [a, 1, b];
                        c.poly().eval(&k, &pt) != 0 || h.poly().eval(&k, &pt) != 0
                    })
                    .ok_or_else(|| {
                        Error::Unsupported(format!(
                            "{c} and {h} share every rational point; no elimination centre"
                        ))
                    })?;
                let (a, b) = shift;
                let x = Poly::var(&k, 3, 0);
                let y = Poly::var(&k, 3, 1);
                let z = Poly::var(&k, 3, 2);
                let imgs = [x.add(&y.scale(a)), y.clone(), z.add(&y.scale(b))];
                Ok(Elimination {
                    model,
                    shift,
                    c: c.poly().compose(&imgs),
                    h: h.poly().compose(&imgs),
                    dc: c.class().components()[0] as usize,
                    dh: h.class().components()[0] as usize,
                    bezout,
                })
            }
            Model::P1xP1 => Ok(Elimination {
                model,
                shift: (0, 0),
                c: c.poly().clone(),
                h: h.poly().clone(),
                dc: c.class().components()[1] as usize,
                dh: h.class().components()[1] as usize,
                bezout,
            }),
        }
    }

    /// Index of the fiber variable whose powers are eliminated.
    fn fiber_var(&self) -> usize {
        match self.model {
            Model::P2 => 1,
            Model::P1xP1 => 3,
        }
    }

    /// Formal fiber coefficients of a form, each a form on the base.
    fn fiber_coeffs(&self, f: &Poly, deg: usize) -> Vec<Poly> {
        let mut cs = f.coeffs_in(self.fiber_var());
        cs.resize(deg + 1, Poly::zero(f.field(), f.nvars()));
        if self.model == Model::P1xP1 {
            // Remove the Y0 powers: the coefficient of Y1^i carries Y0^(deg-i).
            cs = cs
                .into_iter()
                .map(|q| {
                    q.coeffs_in(2)
                        .into_iter()
                        .fold(Poly::zero(f.field(), 4), |a, b| a.add(&b))
                })
                .collect();
        }
        cs
    }

    /// Base coordinate index that is set to 1 in the affine base chart, and
    /// the index of the remaining base coordinate.
    fn base_vars(&self) -> (usize, usize) {
        match self.model {
            Model::P2 => (2, 0),
            Model::P1xP1 => (0, 1),
        }
    }

    fn to_upoly(&self, q: &Poly) -> UPoly {
        let (_, free) = self.base_vars();
        let mut cs = Vec::new();
        for (e, c) in q.terms() {
            let i = e[free] as usize;
            if cs.len() <= i {
                cs.resize(i + 1, 0);
            }
            cs[i] = *c;
        }
        UPoly::new(q.field(), cs)
    }

    fn resultant(&self) -> Result<UPoly> {
        let k = self.c.field();
        let f: Vec<UPoly> = self
            .fiber_coeffs(&self.c, self.dc)
            .iter()
            .map(|q| self.to_upoly(q))
            .collect();
        let g: Vec<UPoly> = self
            .fiber_coeffs(&self.h, self.dh)
            .iter()
            .map(|q| self.to_upoly(q))
            .collect();
        let r = sylvester_det(&f, &g, k);
        if r.is_zero() {
            return Err(Error::CommonComponent("resultant vanishes".into()));
        }
        Ok(r)
    }

    /// Irreducible factors of the resultant with multiplicities; `None`
    /// stands for the base point at infinity.
    fn profile(&self) -> Result<Vec<(Option<UPoly>, u32)>> {
        let r = self.resultant()?;
        let deficit = self.bezout - r.degree().unwrap() as u32;
        let mut out: Vec<(Option<UPoly>, u32)> = Vec::new();
        if r.degree().unwrap() > 0 {
            out.extend(r.factor()?.into_iter().map(|(f, m)| (Some(f), m)));
        }
        if deficit > 0 {
            out.push((None, deficit));
        }
        Ok(out)
    }

    /// Base point coordinates over `k` in the full ambient variable order.
    fn base_point(&self, root: Option<u32>) -> Vec<u32> {
        let (one, free) = self.base_vars();
        let mut pt = vec![0u32; self.model.nvars()];
        match root {
            Some(x) => {
                pt[one] = 1;
                pt[free] = x;
            }
            None => pt[free] = 1,
        }
        pt
    }

    fn fiber_points(&self, k: &FieldDesc, base: &[u32]) -> Result<Vec<Vec<u32>>> {
        let eval_all = |f: &Poly, d: usize| -> Vec<u32> {
            self.fiber_coeffs(f, d).iter().map(|q| q.eval(k, base)).collect()
        };
        let cv = eval_all(&self.c, self.dc);
        let hv = eval_all(&self.h, self.dh);
        let cu = UPoly::new(k, cv.clone());
        let hu = UPoly::new(k, hv.clone());
        if cu.is_zero() && hu.is_zero() {
            return Err(Error::CommonComponent("a whole fiber".into()));
        }
        let g = cu.gcd(&hu);
        let mut out = Vec::new();
        let fv = self.fiber_var();
        for y in g.roots()? {
            let mut pt = base.to_vec();
            match self.model {
                Model::P2 => pt[fv] = y,
                Model::P1xP1 => {
                    pt[2] = 1;
                    pt[3] = y;
                }
            }
            out.push(pt);
        }
        if self.model == Model::P1xP1 && cv[self.dc] == 0 && hv[self.dh] == 0 {
            let mut pt = base.to_vec();
            pt[2] = 0;
            pt[3] = 1;
            out.push(pt);
        }
        Ok(out)
    }

    fn unshift(&self, k: &FieldDesc, pt: &[u32]) -> Vec<u32> {
        match self.model {
            Model::P2 => {
                let (a, b) = self.shift;
                vec![
                    k.add(pt[0], k.mul(a, pt[1])),
                    pt[1],
                    k.add(pt[2], k.mul(b, pt[1])),
                ]
            }
            Model::P1xP1 => pt.to_vec(),
        }
    }
}

/// Closed points common to two distinct irreducible curves.
pub fn intersection_support(c: &Curve, h: &Curve) -> Result<Vec<ClosedPoint>> {
    let el = Elimination::new(c, h)?;
    let p = c.field().p() as u64;
    let mut out = BTreeSet::new();
    for (factor, mult) in el.profile()? {
        let a = factor.as_ref().map_or(1, |f| f.degree().unwrap() as u32);
        for m in 1..=mult {
            let n = a * m;
            if n > el.bezout.max(1) {
                break;
            }
            let k = field_make(p, n)?;
            let root = match &factor {
                Some(f) => Some(f.lift(&k).roots()?[0]),
                None => None,
            };
            let base = el.base_point(root);
            for pt in el.fiber_points(&k, &base)? {
                let orig = el.unshift(&k, &pt);
                if let Some(cp) = ClosedPoint::from_coords(c.model(), &k, &orig) {
                    debug_assert!(cp.lies_on(c.poly()) && cp.lies_on(h.poly()));
                    out.insert(cp);
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Factored resultant of the fiber elimination: `(factor, multiplicity)`,
/// with `None` for the base point at infinity.
pub fn resultant_profile(c: &Curve, h: &Curve) -> Result<Vec<(Option<UPoly>, u32)>> {
    Elimination::new(c, h)?.profile()
}

/// Intersection number from resultant multiplicities, extended bilinearly
/// to divisors. Pairs sharing a component use the class-level product.
pub fn intersection_oracle(c: &Divisor, h: &Divisor) -> Result<i64> {
    if c.components().any(|(x, _)| h.multiplicity(x) != 0) {
        return Ok(c.class().dot(h.class()));
    }
    let mut total = 0i64;
    for (ci, mi) in c.components() {
        for (hj, nj) in h.components() {
            let local: u32 = resultant_profile(ci, hj)?
                .iter()
                .map(|(f, m)| f.as_ref().map_or(1, |f| f.degree().unwrap() as u32) * m)
                .sum();
            total += mi * nj * local as i64;
        }
    }
    Ok(total)
}
