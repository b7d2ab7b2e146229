use super::{is_inf, LaurentSeries1 as S1, DEFAULT_PREC, INF};
use crate::error::{precision, Error, Result, Var};
use crate::fields::{FieldDesc, FieldElem};

/// Truncated iterated Laurent series `sum_j f_j(u) t^j`.
///
/// The t-coefficient `f_j` is stored for `t_lo <= j < t_lo + len`; every other
/// `j < t_prec` has an exactly zero coefficient. All coefficients that are not
/// exactly zero are known modulo `u^u_prec`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries2 {
    field: FieldDesc,
    t_lo: i64,
    coeffs: Vec<S1>,
    t_prec: i64,
    u_prec: i64,
}

impl LaurentSeries2 {
    fn build(field: &FieldDesc, t_lo: i64, coeffs: Vec<S1>, t_prec: i64, u_prec: i64) -> Self {
        let mut s = LaurentSeries2 {
            field: field.clone(),
            t_lo,
            coeffs,
            t_prec,
            u_prec,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if is_inf(self.t_prec) {
            self.t_prec = INF;
        }
        if is_inf(self.u_prec) {
            self.u_prec = INF;
        }
        let keep = (self.t_prec - self.t_lo).clamp(0, self.coeffs.len() as i64) as usize;
        self.coeffs.truncate(keep);
        for c in self.coeffs.iter_mut() {
            *c = c.truncate(self.u_prec);
        }
        while self.coeffs.last().is_some_and(S1::is_exact_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_exact_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.t_lo += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.t_lo = if is_inf(self.t_prec) { 0 } else { self.t_prec };
        }
    }

    pub fn exact_zero(field: &FieldDesc) -> Self {
        Self::build(field, 0, Vec::new(), INF, INF)
    }

    /// Series from `(t_exp, u_exp, coeff)` terms. Every t-level without terms
    /// is exactly zero; levels with terms are known modulo `u^u_prec`.
    pub fn from_terms(field: &FieldDesc, terms: &[(i64, i64, u32)], t_prec: i64, u_prec: i64) -> Self {
        let kept: Vec<_> = terms.iter().filter(|x| x.0 < t_prec).collect();
        if kept.is_empty() {
            return Self::build(field, t_prec, Vec::new(), t_prec, u_prec);
        }
        let lo = kept.iter().map(|x| x.0).min().unwrap();
        let hi = kept.iter().map(|x| x.0).max().unwrap();
        let mut levels: Vec<Vec<(i64, u32)>> = vec![Vec::new(); (hi - lo + 1) as usize];
        for &&(j, i, c) in &kept {
            levels[(j - lo) as usize].push((i, c));
        }
        let coeffs = levels
            .into_iter()
            .map(|ts| {
                if ts.is_empty() {
                    S1::exact_zero(field)
                } else {
                    S1::from_terms(field, &ts, u_prec)
                }
            })
            .collect();
        Self::build(field, lo, coeffs, t_prec, u_prec)
    }

    /// The series `c u^i t^j`.
    pub fn monomial(field: &FieldDesc, c: u32, j: i64, i: i64, t_prec: i64, u_prec: i64) -> Self {
        Self::from_terms(field, &[(j, i, c)], t_prec, u_prec)
    }

    /// An exactly known constant.
    pub fn constant(field: &FieldDesc, c: u32) -> Self {
        if c == 0 {
            return Self::exact_zero(field);
        }
        Self::from_terms(field, &[(0, 0, c)], INF, INF)
    }

    /// The series whose only t-coefficient is `c` at `t^0`.
    pub fn from_ls1(c: S1) -> Self {
        let field = c.field().clone();
        let u_prec = c.prec();
        Self::build(&field, 0, vec![c], INF, u_prec)
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn t_lo(&self) -> i64 {
        self.t_lo
    }

    pub fn t_prec(&self) -> i64 {
        self.t_prec
    }

    pub fn u_prec(&self) -> i64 {
        self.u_prec
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && is_inf(self.t_prec)
    }

    /// True when no known coefficient is nonzero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(S1::is_zero)
    }

    /// Coefficient of `t^j`, or `None` beyond the t-window.
    pub fn coeff(&self, j: i64) -> Option<S1> {
        if j >= self.t_prec {
            return None;
        }
        Some(self.level(j))
    }

    fn level(&self, j: i64) -> S1 {
        let i = j - self.t_lo;
        if i >= 0 && (i as usize) < self.coeffs.len() {
            self.coeffs[i as usize].clone()
        } else {
            S1::exact_zero(&self.field)
        }
    }

    fn level_ref(&self, j: i64) -> Option<&S1> {
        let i = j - self.t_lo;
        (i >= 0 && (i as usize) < self.coeffs.len()).then(|| &self.coeffs[i as usize])
    }

    /// Coefficient of `u^i t^j`, or `None` outside the window.
    pub fn coeff_at(&self, j: i64, i: i64) -> Option<u32> {
        let c = self.coeff(j)?;
        if c.is_exact_zero() {
            return Some(0);
        }
        c.coeff(i)
    }

    /// Stored t-levels as `(j, f_j)`, skipping exact zeros.
    pub fn levels(&self) -> impl Iterator<Item = (i64, &S1)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_exact_zero())
            .map(move |(k, c)| (self.t_lo + k as i64, c))
    }

    /// All nonzero known terms as `(t_exp, u_exp, coeff)`.
    pub fn terms(&self) -> Vec<(i64, i64, u32)> {
        self.levels()
            .flat_map(|(j, c)| c.terms().map(move |(i, v)| (j, i, v)))
            .collect()
    }

    /// Lowers either precision.
    pub fn truncate(&self, t_prec: i64, u_prec: i64) -> Self {
        Self::build(
            &self.field,
            self.t_lo,
            self.coeffs.clone(),
            self.t_prec.min(t_prec),
            self.u_prec.min(u_prec),
        )
    }

    /// Multiplication by `t^k`.
    pub fn shift_t(&self, k: i64) -> Self {
        if self.is_exact_zero() {
            return self.clone();
        }
        Self::build(
            &self.field,
            self.t_lo + k,
            self.coeffs.clone(),
            self.t_prec + k,
            self.u_prec,
        )
    }

    /// Multiplication by `u^k`.
    pub fn shift_u(&self, k: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.shift(k)).collect();
        Self::build(&self.field, self.t_lo, coeffs, self.t_prec, self.u_prec + k)
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(S1::neg).collect();
        Self::build(&self.field, self.t_lo, coeffs, self.t_prec, self.u_prec)
    }

    pub fn scale(&self, c: u32) -> Self {
        if c == 0 {
            return Self::exact_zero(&self.field);
        }
        let coeffs = self.coeffs.iter().map(|x| x.scale(c)).collect();
        Self::build(&self.field, self.t_lo, coeffs, self.t_prec, self.u_prec)
    }

    /// Multiplication by a series in `u` alone.
    pub fn mul_ls1(&self, c: &S1) -> Self {
        self.mul(&Self::from_ls1(c.clone()))
    }

    fn end(&self) -> i64 {
        self.t_lo + self.coeffs.len() as i64
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert!(self.field == o.field);
        if self.is_exact_zero() {
            return o.clone();
        }
        if o.is_exact_zero() {
            return self.clone();
        }
        let t_prec = self.t_prec.min(o.t_prec);
        let u_prec = self.u_prec.min(o.u_prec);
        let lo = self.t_lo.min(o.t_lo).min(t_prec);
        let hi = self.end().max(o.end()).min(t_prec);
        let coeffs = (lo..hi).map(|j| self.level(j).add(&o.level(j))).collect();
        Self::build(&self.field, lo, coeffs, t_prec, u_prec)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Product. The t-window is `min(T_a + lo_b, T_b + lo_a)`; the u-window is
    /// the least precision among the coefficient products.
    pub fn mul(&self, o: &Self) -> Self {
        debug_assert!(self.field == o.field);
        if self.is_exact_zero() || o.is_exact_zero() {
            return Self::exact_zero(&self.field);
        }
        let t_lo = self.t_lo + o.t_lo;
        let t_prec = (self.t_prec + o.t_lo).min(o.t_prec + self.t_lo);
        let hi = t_prec.min(self.end() + o.end() - 1);
        let mut coeffs = Vec::with_capacity((hi - t_lo).max(0) as usize);
        let mut u_prec = INF;
        for j in t_lo..hi {
            let mut acc = S1::exact_zero(&self.field);
            for (i, a) in self.coeffs.iter().enumerate() {
                let ja = self.t_lo + i as i64;
                if a.is_exact_zero() {
                    continue;
                }
                if let Some(b) = o.level_ref(j - ja) {
                    acc = acc.add(&a.mul(b));
                }
            }
            if !acc.is_exact_zero() {
                u_prec = u_prec.min(acc.prec());
            }
            coeffs.push(acc);
        }
        if is_inf(u_prec) {
            u_prec = u_prec.min(self.u_prec).min(o.u_prec);
        }
        Self::build(&self.field, t_lo, coeffs, t_prec, u_prec)
    }

    /// Multiplicative inverse, computed by the recurrence
    /// `g_0 = c^{-1}`, `g_n = -c^{-1} sum_{i >= 1} a_i g_{n-i}` on the
    /// t-coefficients, so each coefficient carries its own proven precision.
    pub fn inv(&self) -> Result<Self> {
        if self.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.coeffs.is_empty() {
            return Err(precision(
                Var::T,
                format!("series vanishes modulo t^{}", self.t_prec),
            ));
        }
        let m = self.t_lo;
        let c = &self.coeffs[0];
        if c.valuation().is_none() {
            return Err(precision(
                Var::U,
                format!("leading t-coefficient vanishes modulo u^{}", c.prec()),
            ));
        }
        let ci = c.inv()?;
        if is_inf(self.t_prec) && self.coeffs.len() == 1 {
            let u_prec = ci.prec();
            return Ok(Self::build(&self.field, -m, vec![ci], INF, u_prec));
        }
        let t_prec = if is_inf(self.t_prec) {
            m + DEFAULT_PREC
        } else {
            self.t_prec
        };
        let n = (t_prec - m) as usize;
        let mut out: Vec<S1> = Vec::with_capacity(n);
        out.push(ci.clone());
        let mut u_prec = ci.prec();
        for k in 1..n {
            let mut acc = S1::exact_zero(&self.field);
            for i in 1..=k {
                if let Some(a) = self.level_ref(m + i as i64) {
                    if !a.is_exact_zero() && !out[k - i].is_exact_zero() {
                        acc = acc.add(&a.mul(&out[k - i]));
                    }
                }
            }
            let g = acc.mul(&ci).neg();
            if !g.is_exact_zero() {
                u_prec = u_prec.min(g.prec());
            }
            out.push(g);
        }
        Ok(Self::build(&self.field, -m, out, t_prec - 2 * m, u_prec))
    }

    /// Integer power; negative exponents invert first.
    pub fn powi(&self, n: i64) -> Result<Self> {
        let mut b = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::constant(&self.field, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// Termwise derivative; the window shrinks by one in `var`.
    pub fn derive(&self, var: Var) -> Self {
        if self.is_exact_zero() {
            return self.clone();
        }
        let k = &self.field;
        match var {
            Var::U => {
                let coeffs = self.coeffs.iter().map(S1::derive).collect();
                Self::build(k, self.t_lo, coeffs, self.t_prec, self.u_prec - 1)
            }
            Var::T => {
                let coeffs = (self.t_lo..self.end())
                    .map(|j| self.level(j).scale(k.from_int(j)))
                    .collect();
                Self::build(k, self.t_lo - 1, coeffs, self.t_prec - 1, self.u_prec)
            }
        }
    }

    /// `(v_t, v_u)`: the least t-exponent with a nonzero coefficient and the
    /// u-valuation of that coefficient.
    pub fn valuation(&self) -> Result<(i64, i64)> {
        let Some(c) = self.coeffs.first() else {
            return Err(precision(
                Var::T,
                format!("all coefficients below t^{} vanish", self.t_prec),
            ));
        };
        match c.valuation() {
            Some(v) => Ok((self.t_lo, v)),
            None => Err(precision(
                Var::U,
                format!("coefficient of t^{} vanishes modulo u^{}", self.t_lo, c.prec()),
            )),
        }
    }

    /// Coefficient of `u^-1 t^-1`.
    pub fn residue(&self) -> Result<FieldElem> {
        if self.t_prec <= -1 {
            return Err(precision(Var::T, "residue slot t^-1 outside the window"));
        }
        match self.coeff_at(-1, -1) {
            Some(v) => Ok(self.field.elem(v)),
            None => Err(precision(Var::U, "residue slot u^-1 outside the window")),
        }
    }

    /// Composition `f(U, T)` for new local parameters `U`, `T`.
    ///
    /// Requires `U = u·(unit) + O(t)` and `T = t·(unit) + O(t^2)` with all
    /// coefficients in `k[[u]]`, and `T` having no `t^0` term.
    pub fn substitute(&self, u_img: &Self, t_img: &Self) -> Result<Self> {
        if self.field != u_img.field || self.field != t_img.field {
            return Err(Error::FieldMismatch);
        }
        check_images(u_img, t_img)?;
        if self.is_exact_zero() {
            return Ok(self.clone());
        }
        let u_has_t_part = u_img.coeffs.len() > 1 || !is_inf(u_img.t_prec);
        let mut t_res = self.t_prec;
        if is_inf(t_res) && u_has_t_part && !is_inf(self.u_prec) {
            t_res = self.end() + DEFAULT_PREC;
        }
        let (uu, tt) = if is_inf(t_res) {
            (u_img.clone(), t_img.clone())
        } else {
            (
                u_img.truncate(t_res - self.t_lo, INF),
                t_img.truncate(t_res - self.t_lo + 1, INF),
            )
        };
        let mut u_inv: Option<Self> = None;
        let mut acc = Self::exact_zero(&self.field);
        for j in (self.t_lo..self.end()).rev() {
            let fj = eval_in_u(&self.level(j), &uu, &mut u_inv)?;
            acc = acc.mul(&tt).add(&fj);
        }
        let out = acc.mul(&tt.powi(self.t_lo)?);
        let t_final = out.t_prec.min(t_res);
        let u_cap = if is_inf(self.u_prec) {
            INF
        } else if u_has_t_part {
            self.u_prec - (t_final - 1 - self.t_lo).max(0)
        } else {
            self.u_prec
        };
        Ok(out.truncate(t_final, u_cap))
    }
}

fn check_images(u_img: &LaurentSeries2, t_img: &LaurentSeries2) -> Result<()> {
    let bad = |m: &str| Err(Error::InvalidSubstitution(m.to_string()));
    for (name, s) in [("u", u_img), ("t", t_img)] {
        if s.t_lo < 0 || s.levels().any(|(_, c)| c.valuation_bound() < 0) {
            return bad(&format!("{name}-image must lie in k[[u]][[t]]"));
        }
    }
    if u_img.coeff(0).and_then(|c| c.valuation()) != Some(1) {
        return bad("u-image must have u-valuation 1 at t^0");
    }
    if t_img.t_lo < 1 {
        return bad("t-image must have no t^0 term");
    }
    if t_img.coeff(1).and_then(|c| c.valuation()) != Some(0) {
        return bad("t-image must have a unit coefficient at t^1");
    }
    Ok(())
}

/// `c(U)` for a series `c` in `u`, ignoring its truncation tail.
fn eval_in_u(c: &S1, uu: &LaurentSeries2, u_inv: &mut Option<LaurentSeries2>) -> Result<LaurentSeries2> {
    let k = c.field();
    let terms: Vec<(i64, u32)> = c.terms().collect();
    let (Some(&(lo, _)), Some(&(hi, _))) = (terms.first(), terms.last()) else {
        return Ok(LaurentSeries2::exact_zero(k));
    };
    let mut acc = LaurentSeries2::exact_zero(k);
    for e in (lo..=hi).rev() {
        acc = acc
            .mul(uu)
            .add(&LaurentSeries2::constant(k, c.coeff(e).unwrap_or(0)));
    }
    if lo < 0 {
        if u_inv.is_none() {
            *u_inv = Some(uu.inv()?);
        }
        let p = u_inv.as_ref().unwrap().powi(-lo)?;
        Ok(acc.mul(&p))
    } else {
        Ok(acc.mul(&uu.powi(lo)?))
    }
}

/// The coefficient `f` of a 2-form `f du∧dt`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalForm2 {
    pub body: LaurentSeries2,
}

impl LocalForm2 {
    pub fn new(body: LaurentSeries2) -> Self {
        LocalForm2 { body }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ls2Op {
    Add,
    Sub,
    Mul,
    InvOfA,
}

pub fn ls2_arith(a: &LaurentSeries2, b: &LaurentSeries2, op: Ls2Op) -> Result<LaurentSeries2> {
    if op != Ls2Op::InvOfA && a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    Ok(match op {
        Ls2Op::Add => a.add(b),
        Ls2Op::Sub => a.sub(b),
        Ls2Op::Mul => a.mul(b),
        Ls2Op::InvOfA => a.inv()?,
    })
}

pub fn ls2_substitute(
    f: &LaurentSeries2,
    u_image: &LaurentSeries2,
    t_image: &LaurentSeries2,
) -> Result<LaurentSeries2> {
    f.substitute(u_image, t_image)
}

pub fn ls2_derive(f: &LaurentSeries2, var: Var) -> LaurentSeries2 {
    f.derive(var)
}

pub fn ls2_valuation(f: &LaurentSeries2) -> Result<(i64, i64)> {
    f.valuation()
}

pub fn res2(w: &LocalForm2) -> Result<FieldElem> {
    w.body.residue()
}
