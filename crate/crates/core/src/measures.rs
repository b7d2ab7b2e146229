//! Virtual measures and characteristic elements as formal objects, the
//! Fourier rewrites between them, the Riemann-Roch derivation built on
//! top, and finite windows of `A_{12,S}/A_{12,R}` with the residue pairing.

use crate::cohomology::{h_vector, rr_space};
use crate::error::{Error, Result};
use crate::linalg::{same_span, Matrix};
use crate::poly::{Exps, Poly};
use crate::residues::{adelic_pairing, with_escalation, AdeleFragment, GlobalForm};
use crate::series::LaurentSeries2;
use crate::surface::{
    flag_make, points_on_curve, ClassVector, Curve, Divisor, Flag, Model, Surface, Window2,
};
use crate::symbols::{intersection_number, QPower};
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeSymbol {
    A0,
    A01,
    A02,
    A1(Divisor),
    A2(Divisor),
    A12(Divisor),
}

impl LatticeSymbol {
    pub fn divisor(&self) -> Option<&Divisor> {
        match self {
            LatticeSymbol::A1(d) | LatticeSymbol::A2(d) | LatticeSymbol::A12(d) => Some(d),
            _ => None,
        }
    }

    /// The same kind of lattice for another divisor.
    fn rebuild(&self, d: Divisor) -> Result<LatticeSymbol> {
        Ok(match self {
            LatticeSymbol::A1(_) => LatticeSymbol::A1(d),
            LatticeSymbol::A2(_) => LatticeSymbol::A2(d),
            LatticeSymbol::A12(_) => LatticeSymbol::A12(d),
            other => return Err(Error::Unsupported(format!("{other} has no divisor"))),
        })
    }
}

impl fmt::Display for LatticeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeSymbol::A0 => write!(f, "A0"),
            LatticeSymbol::A01 => write!(f, "A01"),
            LatticeSymbol::A02 => write!(f, "A02"),
            LatticeSymbol::A1(d) => write!(f, "A1({d})"),
            LatticeSymbol::A2(d) => write!(f, "A2({d})"),
            LatticeSymbol::A12(d) => write!(f, "A12({d})"),
        }
    }
}

/// Space in which characteristic elements live.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Ambient {
    /// `A01`, with reference lattices `A1(C)` and discrete `A0`.
    Rational01,
    /// `A / A01`, with reference lattices `A12(C)/A1(C)` and discrete `A02/A0`.
    Quotient01,
    /// All of `A`, with reference lattices `A12(C)` and discrete `A02`.
    Full,
}

impl Ambient {
    /// Reference lattices are written as `A1(C)` or `A12(C)`.
    fn reference_ok(self, l: &LatticeSymbol) -> bool {
        matches!(
            (self, l),
            (Ambient::Rational01, LatticeSymbol::A1(_))
                | (Ambient::Quotient01, LatticeSymbol::A12(_))
                | (Ambient::Full, LatticeSymbol::A12(_))
        )
    }

    /// The discrete lattice of the ambient: `A0`, `A02/A0` or `A02`.
    fn discrete(self) -> LatticeSymbol {
        match self {
            Ambient::Rational01 => LatticeSymbol::A0,
            Ambient::Quotient01 | Ambient::Full => LatticeSymbol::A02,
        }
    }
}

/// `q^value` times the canonical element of `mu(from | to)`: `delta_{H,C}`
/// on `A01`, `1_{P,Q}` on `A/A01` and `nu_{R,S}` on `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureTag {
    pub from: LatticeSymbol,
    pub to: LatticeSymbol,
    pub value: QPower,
}

impl MeasureTag {
    pub fn canonical(from: LatticeSymbol, to: LatticeSymbol) -> Self {
        MeasureTag {
            from,
            to,
            value: QPower::ONE,
        }
    }

    pub fn identity(i: LatticeSymbol) -> Self {
        Self::canonical(i.clone(), i)
    }

    /// `tag(i, j) ⊗ tag(j, k) = tag(i, k)`.
    pub fn compose(&self, o: &MeasureTag) -> Result<MeasureTag> {
        if self.to != o.from {
            return Err(Error::Unsupported(format!(
                "cannot compose through {} and {}",
                self.to, o.from
            )));
        }
        Ok(MeasureTag {
            from: self.from.clone(),
            to: o.to.clone(),
            value: self.value.mul(o.value),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// In `D`: carries no measure.
    Function,
    /// In `D'`: carries one measure tag.
    Distribution,
}

/// A characteristic element `delta_L` or `delta_{A, eta}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharElem {
    pub ambient: Ambient,
    pub lattice: LatticeSymbol,
    pub measure: Option<MeasureTag>,
    pub side: Side,
}

impl CharElem {
    pub fn function(ambient: Ambient, lattice: LatticeSymbol) -> Self {
        CharElem {
            ambient,
            lattice,
            measure: None,
            side: Side::Function,
        }
    }

    /// `delta_{A, eta}` with `A = eta.to`.
    pub fn distribution(ambient: Ambient, eta: MeasureTag) -> Result<Self> {
        if !ambient.reference_ok(&eta.from) || !ambient.reference_ok(&eta.to) {
            return Err(Error::Unsupported(format!(
                "{} -> {} in {ambient:?}",
                eta.from, eta.to
            )));
        }
        Ok(CharElem {
            ambient,
            lattice: eta.to.clone(),
            measure: Some(eta),
            side: Side::Distribution,
        })
    }
}

impl fmt::Display for CharElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.measure {
            None => write!(f, "delta[{}] in {:?}", self.lattice, self.ambient),
            Some(m) => write!(
                f,
                "delta[{}, {} -> {} x {}] in {:?}",
                self.lattice, m.from, m.to, m.value, self.ambient
            ),
        }
    }
}

/// Exponent of the volume of a reference lattice measured by the measure
/// adapted to the ambient's discrete lattice, relative to the canonical one;
/// defined up to a constant, which cancels in every difference.
fn volume_exponent(s: &Surface, ambient: Ambient, lattice: &LatticeSymbol) -> Result<i64> {
    let d = lattice.divisor().expect("reference lattices carry a divisor");
    Ok(match ambient {
        Ambient::Rational01 => rr_space(s, d)?.len() as i64,
        Ambient::Quotient01 => h_vector(d.class()).h2 as i64,
        Ambient::Full => h_vector(d.class()).chi,
    })
}

/// The measure in `mu(i | j)` adapted to the discrete lattice `l`. Computed
/// against two auxiliary lattices, which must agree.
pub fn adapted_measure(
    s: &Surface,
    ambient: Ambient,
    l: &LatticeSymbol,
    i: &LatticeSymbol,
    j: &LatticeSymbol,
) -> Result<MeasureTag> {
    if *l != ambient.discrete() || !ambient.reference_ok(i) || !ambient.reference_ok(j) {
        return Err(Error::Unsupported(format!(
            "unsupported lattice pair {i}, {j} for {l}"
        )));
    }
    let di = i.divisor().expect("checked above");
    let shift = Divisor::single(&s.coordinate_curves()[0], 1);
    let aux = [i.rebuild(Divisor::zero(s.model))?, i.rebuild(di.sub(&shift))?];
    let mut values = Vec::new();
    for a in &aux {
        let base = volume_exponent(s, ambient, a)?;
        let vj = volume_exponent(s, ambient, j)? - base;
        let vi = volume_exponent(s, ambient, i)? - base;
        values.push(-(vj - vi));
    }
    if values[0] != values[1] {
        return Err(Error::Unsupported(format!(
            "adapted measure on {i} -> {j} depends on the auxiliary lattice"
        )));
    }
    Ok(MeasureTag {
        from: i.clone(),
        to: j.clone(),
        value: QPower::new(values[0]),
    })
}

/// `<delta_L, delta_{A, eta}> = eta / mu_{L, F(o), A}`.
pub fn char_pairing(s: &Surface, dl: &CharElem, da: &CharElem) -> Result<QPower> {
    if dl.side != Side::Function || da.side != Side::Distribution {
        return Err(Error::Unsupported(
            "pairing needs a function-like and a distribution-like element".into(),
        ));
    }
    if dl.ambient != da.ambient {
        return Err(Error::Unsupported(format!(
            "{dl} and {da} live in different spaces"
        )));
    }
    let eta = da
        .measure
        .as_ref()
        .expect("distribution-like elements carry a measure");
    let mu = adapted_measure(s, da.ambient, &dl.lattice, &eta.from, &eta.to)?;
    Ok(eta.value.mul(mu.value.inv()))
}

/// Fourier transform on the four shapes: lattices go to their annihilators
/// `A12(C) -> A12(K - C)`, `A1(C) <-> A12(K - C)/A1(K - C)`, and measure
/// tags are transported along.
pub fn fourier_char(e: &CharElem, omega: &Divisor) -> Result<CharElem> {
    let dual = |l: &LatticeSymbol, to_kind: &LatticeSymbol| -> Result<LatticeSymbol> {
        to_kind.rebuild(omega.sub(l.divisor().expect("reference lattice")))
    };
    let zero = Divisor::zero(omega.model());
    let (ambient, kind) = match (e.ambient, &e.lattice, e.side) {
        (Ambient::Rational01, LatticeSymbol::A0, Side::Function) => {
            return Ok(CharElem::function(Ambient::Quotient01, LatticeSymbol::A02))
        }
        (Ambient::Quotient01, LatticeSymbol::A02, Side::Function) => {
            return Ok(CharElem::function(Ambient::Rational01, LatticeSymbol::A0))
        }
        (Ambient::Full, LatticeSymbol::A02, Side::Function) => return Ok(e.clone()),
        (Ambient::Rational01, LatticeSymbol::A1(_), Side::Distribution) => {
            (Ambient::Quotient01, LatticeSymbol::A12(zero))
        }
        (Ambient::Quotient01, LatticeSymbol::A12(_), Side::Distribution) => {
            (Ambient::Rational01, LatticeSymbol::A1(zero))
        }
        (Ambient::Full, LatticeSymbol::A12(_), Side::Distribution) => {
            (Ambient::Full, LatticeSymbol::A12(zero))
        }
        _ => return Err(Error::Unsupported(format!("no Fourier rule for {e}"))),
    };
    let eta = e
        .measure
        .as_ref()
        .expect("distribution-like elements carry a measure");
    CharElem::distribution(
        ambient,
        MeasureTag {
            from: dual(&eta.from, &kind)?,
            to: dual(&eta.to, &kind)?,
            value: eta.value,
        },
    )
}

/// A divisor of the given class supported on coordinate curves.
pub fn class_representative(s: &Surface, c: ClassVector) -> Divisor {
    let lines = s.coordinate_curves();
    match c {
        ClassVector::P2(n) => Divisor::from_pairs(s.model, &[(lines[2].clone(), n)]),
        ClassVector::P1xP1(a, b) => {
            Divisor::from_pairs(s.model, &[(lines[0].clone(), a), (lines[2].clone(), b)])
        }
    }
}

/// Both sides of one derived identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub lhs: i64,
    pub rhs: i64,
    pub equal: bool,
}

impl Derivation {
    fn new(lhs: i64, rhs: i64) -> Self {
        Derivation {
            lhs,
            rhs,
            equal: lhs == rhs,
        }
    }
}

/// `h^0(C) - h^0(H) = h^2(K - C) - h^2(K - H)`: the pairing of `delta_{A0}`
/// with `delta_{A1(C), delta_{H,C}}` against that of their transforms.
pub fn derive_eq1(s: &Surface, c: ClassVector, h: ClassVector) -> Result<Derivation> {
    let omega = s.omega_divisor();
    let (c, h) = (class_representative(s, c), class_representative(s, h));
    let a = CharElem::function(Ambient::Rational01, LatticeSymbol::A0);
    let b = CharElem::distribution(
        Ambient::Rational01,
        MeasureTag::canonical(LatticeSymbol::A1(h), LatticeSymbol::A1(c)),
    )?;
    let lhs = char_pairing(s, &a, &b)?;
    let rhs = char_pairing(s, &fourier_char(&a, &omega)?, &fourier_char(&b, &omega)?)?;
    Ok(Derivation::new(lhs.exponent, rhs.exponent))
}

/// `chi(S) = chi(K - S)`: with `R = K - S` the pairing of `delta_{A02}` with
/// `delta_{A12(S), nu_{R,S}}` is `q^{chi(S) - chi(K - S)}` and that of the
/// transforms is its inverse. Returns `chi(S)` and the dual value implied by
/// the first pairing.
pub fn derive_eq2(s: &Surface, class: ClassVector) -> Result<Derivation> {
    let omega = s.omega_divisor();
    let upper = class_representative(s, class);
    let lower = omega.sub(&upper);
    let a = CharElem::function(Ambient::Full, LatticeSymbol::A02);
    let b = CharElem::distribution(
        Ambient::Full,
        MeasureTag::canonical(LatticeSymbol::A12(lower), LatticeSymbol::A12(upper)),
    )?;
    let direct = char_pairing(s, &a, &b)?;
    let dual = char_pairing(s, &fourier_char(&a, &omega)?, &fourier_char(&b, &omega)?)?;
    let chi = h_vector(class).chi;
    let chi_dual = chi - direct.exponent;
    Ok(Derivation {
        lhs: chi,
        rhs: chi_dual,
        equal: direct == dual && chi == chi_dual,
    })
}

/// `q^{chi(S) - chi(R)}`, the ratio `nu_{R,S} / mu_{R,S}`.
fn nu_over_mu(s: &Surface, lower: &Divisor, upper: &Divisor) -> Result<QPower> {
    let a = CharElem::function(Ambient::Full, LatticeSymbol::A02);
    let b = CharElem::distribution(
        Ambient::Full,
        MeasureTag::canonical(
            LatticeSymbol::A12(lower.clone()),
            LatticeSymbol::A12(upper.clone()),
        ),
    )?;
    char_pairing(s, &a, &b)
}

fn candidate_curves(s: &Surface, class: ClassVector) -> Vec<Curve> {
    let texts: &[&str] = match class {
        ClassVector::P2(_) => &[
            "X + Y + Z",
            "X + Y + 2Z",
            "X + 2Y + Z",
            "X + Y",
            "X + Z",
            "Y + Z",
            "X",
            "Y",
            "Z",
        ],
        ClassVector::P1xP1(1, 0) => &["X0 + X1", "X0 + 2X1", "X0", "X1"],
        ClassVector::P1xP1(..) => &["Y0 + Y1", "Y0 + 2Y1", "Y0", "Y1"],
    };
    texts.iter().filter_map(|t| s.curve(t).ok()).collect()
}

/// A divisor of class `class` sharing no component with `avoid`.
pub fn general_representative(s: &Surface, class: ClassVector, avoid: &Divisor) -> Result<Divisor> {
    let mut out = Divisor::zero(s.model);
    let pieces: Vec<(ClassVector, i64)> = match class {
        ClassVector::P2(n) => vec![(ClassVector::P2(1), n)],
        ClassVector::P1xP1(a, b) => vec![(ClassVector::P1xP1(1, 0), a), (ClassVector::P1xP1(0, 1), b)],
    };
    for (unit, m) in pieces {
        if m == 0 {
            continue;
        }
        let curve = candidate_curves(s, unit)
            .into_iter()
            .find(|c| avoid.multiplicity(c) == 0)
            .ok_or_else(|| Error::Unsupported(format!("no curve of class {unit} avoids {avoid}")))?;
        out.add_component(&curve, m);
    }
    Ok(out)
}

/// Commutator of the central extension at `(j_{2,C}, j_{1,K-C})` by the
/// measure route, `(nu_{0,C}/mu_{0,C}) (mu_{K-C,K}/nu_{K-C,K})`, and by the
/// symbol route, `q^{-(C, K-C)}` with `K - C` moved off `C`.
pub fn central_commutator(s: &Surface, c: &Divisor, omega: &Divisor) -> Result<(QPower, QPower, bool)> {
    let zero = Divisor::zero(s.model);
    let dual = omega.sub(c);
    let measure = nu_over_mu(s, &zero, c)?.mul(nu_over_mu(s, &dual, omega)?.inv());
    let h = general_representative(s, dual.class(), c)?;
    let symbol = QPower::new(-intersection_number(c, &h)?);
    Ok((measure, symbol, measure == symbol))
}

/// Both sides of Riemann-Roch for one divisor with the sub-derivations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub divisor: String,
    pub class: ClassVector,
    /// `h^0(C) - h^1(C) + h^0(K - C)`.
    pub lhs: i64,
    /// `h^0(0) - h^1(0) + h^0(K) - (C, K - C)/2`, rounded down when odd.
    pub rhs: i64,
    pub intersection: i64,
    pub eq1: Derivation,
    pub eq2: Derivation,
    pub commutator: Derivation,
    pub pass: bool,
}

/// The intersection on the right comes from the symbol route with `K - C`
/// moved off `C`, and must also match the class-level product.
pub fn rr_assemble(s: &Surface, c: &Divisor, omega: &Divisor) -> Result<Report> {
    let zero = Divisor::zero(s.model);
    let h0 = |d: &Divisor| -> Result<i64> { Ok(rr_space(s, d)?.len() as i64) };
    let h1 = |d: &Divisor| h_vector(d.class()).h1 as i64;
    let dual = omega.sub(c);
    let lhs = h0(c)? - h1(c) + h0(&dual)?;
    let (m, sym, _) = central_commutator(s, c, omega)?;
    let commutator = Derivation::new(m.exponent, sym.exponent);
    let intersection = -sym.exponent;
    let twice = 2 * (h0(&zero)? - h1(&zero) + h0(omega)?) - intersection;
    let rhs = twice.div_euclid(2);
    let eq1 = derive_eq1(s, c.class(), zero.class())?;
    let eq2 = derive_eq2(s, c.class())?;
    let pass = twice % 2 == 0
        && lhs == rhs
        && intersection == c.class().dot(dual.class())
        && eq1.equal
        && eq2.equal
        && commutator.equal;
    Ok(Report {
        divisor: c.to_string(),
        class: c.class(),
        lhs,
        rhs,
        intersection,
        eq1,
        eq2,
        commutator,
        pass,
    })
}

/// One basis vector `theta^scalar u^u t^t` at `flags[flag]`, where `theta`
/// runs over a basis of the residue field of the point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WindowVector {
    pub flag: usize,
    pub scalar: u32,
    pub u: i64,
    pub t: i64,
}

/// Truncation of `A_{12,S}/A_{12,R}` to finitely many flags and u-exponents,
/// with the pairing `(a, b) -> sum tr res(a b omega)`.
#[derive(Clone, Debug)]
pub struct Window {
    pub lower: Divisor,
    pub upper: Divisor,
    pub flags: Vec<Flag>,
    /// Inclusive u-exponent range per flag.
    pub u_window: Vec<(i64, i64)>,
    pub basis: Vec<WindowVector>,
    pub gram: Matrix,
    pub omega: GlobalForm,
    /// Whether `R + S = div(omega)` on the window curves and every u-range is
    /// centred for the pairing; the gram matrix is then invertible.
    pub compatible: bool,
}

impl Window {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    fn curves(&self) -> Vec<Curve> {
        let mut out = self.upper.support();
        for c in self.lower.support() {
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out.sort();
        out
    }

    /// Image of `A_{12,C}`: vectors whose t-exponent is at least `-c_D`.
    pub fn image(&self, c: &Divisor) -> Vec<Vec<u32>> {
        let n = self.basis.len();
        self.basis
            .iter()
            .enumerate()
            .filter(|(_, v)| v.t >= -c.multiplicity(self.flags[v.flag].curve()))
            .map(|(i, _)| {
                let mut row = vec![0; n];
                row[i] = 1;
                row
            })
            .collect()
    }

    /// Vectors orthogonal to every row of `rows` under the gram pairing.
    pub fn annihilator(&self, rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let n = self.basis.len();
        if rows.is_empty() {
            return (0..n)
                .map(|i| {
                    let mut v = vec![0; n];
                    v[i] = 1;
                    v
                })
                .collect();
        }
        Matrix::from_rows(self.gram.field(), n, rows)
            .mul(&self.gram)
            .kernel()
    }
}

fn unit_vector_in(fl: &Flag, e: u32) -> u32 {
    let k = fl.field();
    let mut cs = vec![0; k.degree() as usize];
    cs[e as usize] = 1;
    k.from_coeffs(&cs)
}

/// Finite window between `lower <= upper` over all flags on their support
/// curves at points of degree `<= max_point_degree` lying on no other window
/// curve and off `div(omega)` elsewhere. Each flag gets `u_size` consecutive
/// u-exponents, centred for the pairing when possible.
pub fn window_build(
    s: &Surface,
    lower: &Divisor,
    upper: &Divisor,
    max_point_degree: u32,
    u_size: usize,
) -> Result<Window> {
    if !lower.le(upper) {
        return Err(Error::Window(format!("{lower} is not below {upper}")));
    }
    let omega = GlobalForm::omega(s);
    let omega_div = s.omega_divisor();
    let mut w = Window {
        lower: lower.clone(),
        upper: upper.clone(),
        flags: Vec::new(),
        u_window: Vec::new(),
        basis: Vec::new(),
        gram: Matrix::zeros(&s.base, 0, 0),
        omega,
        compatible: true,
    };
    let curves = w.curves();
    let mut avoid = curves.clone();
    avoid.extend(omega_div.support().into_iter().filter(|c| !curves.contains(c)));
    for d in &curves {
        let (r, top) = (lower.multiplicity(d), upper.multiplicity(d));
        w.compatible &= r + top == omega_div.multiplicity(d);
        for x in points_on_curve(d, max_point_degree)? {
            if avoid.iter().any(|c| c != d && x.lies_on(c.poly())) {
                continue;
            }
            let Ok(fl) = flag_make(&x, d) else { continue };
            let (_, u_order) = with_escalation(Window2::new(2, 8), |win| {
                w.omega.local_integrand(s, &fl, win)?.valuation()
            })?;
            let n = u_size as i64;
            w.compatible &= (u_order + n) % 2 == 0;
            let lo = (-u_order - n).div_euclid(2);
            for scalar in 0..fl.degree() {
                for t in -top..-r {
                    for u in lo..lo + n {
                        w.basis.push(WindowVector {
                            flag: w.flags.len(),
                            scalar,
                            u,
                            t,
                        });
                    }
                }
            }
            w.u_window.push((lo, lo + n - 1));
            w.flags.push(fl);
        }
    }
    if w.flags.is_empty() && !curves.is_empty() {
        return Err(Error::Window(format!(
            "no admissible flags between {lower} and {upper}"
        )));
    }
    w.gram = window_gram(s, &w)?;
    if w.compatible && w.gram.rank() < w.basis.len() {
        return Err(Error::Window(format!(
            "gram matrix has rank {} < {} on a compatible window",
            w.gram.rank(),
            w.basis.len()
        )));
    }
    Ok(w)
}

fn window_gram(s: &Surface, w: &Window) -> Result<Matrix> {
    let n = w.basis.len();
    let depth = w.basis.iter().map(|v| -v.t).max().unwrap_or(0);
    let spread = w.basis.iter().map(|v| v.u.abs()).max().unwrap_or(0);
    let fragment = |v: &WindowVector, prec: Window2| {
        let fl = &w.flags[v.flag];
        let c = unit_vector_in(fl, v.scalar);
        AdeleFragment::single(
            fl,
            LaurentSeries2::monomial(fl.field(), c, v.t, v.u, prec.t, prec.u),
        )
    };
    with_escalation(Window2::new(2 * depth + 2, 2 * spread + 8), |prec| {
        let mut g = Matrix::zeros(&s.base, n, n);
        for (j, vj) in w.basis.iter().enumerate() {
            let twisted = fragment(vj, prec).twist(s, &w.omega, prec)?;
            for (i, vi) in w.basis.iter().enumerate() {
                if vi.flag == vj.flag {
                    g.set(i, j, adelic_pairing(&fragment(vi, prec), &twisted)?.value());
                }
            }
        }
        Ok(g)
    })
}

/// Whether the annihilator of the `A_{12,C}` image is the `A_{12,K-C}` image.
pub fn window_annihilator_check(w: &Window, c: &Divisor, omega: &Divisor) -> Result<bool> {
    let dual = omega.sub(c);
    for d in w.curves() {
        let (r, top) = (w.lower.multiplicity(&d), w.upper.multiplicity(&d));
        for m in [c.multiplicity(&d), dual.multiplicity(&d)] {
            if m < r || m > top {
                return Err(Error::Window(format!(
                    "{c} or its dual leaves the window along {d}"
                )));
            }
        }
    }
    let n = w.basis.len();
    Ok(same_span(
        w.gram.field(),
        n,
        &w.annihilator(&w.image(c)),
        &w.image(&dual),
    ))
}

fn equation(model: Model, s: &Surface, d: &Divisor) -> Poly {
    d.components()
        .fold(Poly::constant(&s.base, model.nvars(), 1), |acc, (c, m)| {
            acc.mul(&c.poly().pow(m as u32))
        })
}

/// `dim (A0 ∩ A1(C)) / (A0 ∩ A1(H))` for `H <= C`, from Riemann-Roch spaces
/// brought to the common denominator of `C`.
pub fn rational_quotient_dimension(s: &Surface, c: &Divisor, h: &Divisor) -> Result<i64> {
    if !h.le(c) {
        return Err(Error::Window(format!("{h} is not below {c}")));
    }
    let model = s.model;
    let top = c.positive_part();
    let mut index: HashMap<Exps, usize> = HashMap::new();
    let mut vectors = |d: &Divisor| -> Result<Vec<Vec<(usize, u32)>>> {
        let lift = equation(model, s, &top.sub(&d.positive_part()));
        Ok(rr_space(s, d)?
            .iter()
            .map(|f| {
                f.num()
                    .mul(&lift)
                    .terms()
                    .map(|(e, &v)| {
                        let k = index.len();
                        (*index.entry(*e).or_insert(k), v)
                    })
                    .collect()
            })
            .collect())
    };
    let big = vectors(c)?;
    let small = vectors(h)?;
    let n = index.len();
    let dense = |vs: &[Vec<(usize, u32)>]| -> Vec<Vec<u32>> {
        vs.iter()
            .map(|v| {
                let mut row = vec![0; n];
                for &(i, x) in v {
                    row[i] = x;
                }
                row
            })
            .collect()
    };
    let rank = |rows: Vec<Vec<u32>>| {
        if rows.is_empty() {
            0
        } else {
            Matrix::from_rows(&s.base, n, &rows).rank()
        }
    };
    let both: Vec<Vec<u32>> = dense(&big).into_iter().chain(dense(&small)).collect();
    Ok(rank(both) as i64 - rank(dense(&small)) as i64)
}
