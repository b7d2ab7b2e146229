//! Sparse multivariate polynomials over a prime field.

use crate::error::{Error, Result};
use crate::fields::{FieldDesc, UPoly};
use crate::series::LaurentSeries2;
use std::collections::BTreeMap;
use std::fmt;

pub const MAX_VARS: usize = 4;
pub type Exps = [u16; MAX_VARS];

/// A polynomial in `nvars` variables. Terms are keyed by exponent vectors in
/// lexicographic order, so the last key is the lex-leading monomial.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FieldDesc,
    nvars: usize,
    terms: BTreeMap<Exps, u32>,
}

impl Poly {
    pub fn zero(field: &FieldDesc, nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS);
        Poly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &FieldDesc, nvars: usize, c: u32) -> Self {
        Self::monomial(field, nvars, [0; MAX_VARS], c)
    }

    pub fn monomial(field: &FieldDesc, nvars: usize, e: Exps, c: u32) -> Self {
        let mut p = Self::zero(field, nvars);
        if c != 0 {
            p.terms.insert(e, c);
        }
        p
    }

    pub fn var(field: &FieldDesc, nvars: usize, i: usize) -> Self {
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        Self::monomial(field, nvars, e, 1)
    }

    pub fn from_terms(field: &FieldDesc, nvars: usize, terms: &[(Exps, u32)]) -> Self {
        let mut p = Self::zero(field, nvars);
        for &(e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exps, c: u32) {
        let k = &self.field;
        let v = k.add(self.terms.get(&e).copied().unwrap_or(0), c);
        if v == 0 {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exps, &u32)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exps) -> u32 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn leading(&self) -> Option<(Exps, u32)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, *c))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().map(|&x| x as u32).sum()).max()
    }

    /// Largest total degree in the given group of variables.
    pub fn degree_in(&self, vars: &[usize]) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| vars.iter().map(|&i| e[i] as u32).sum())
            .max()
    }

    /// Whether every term has the same total degree in `vars`.
    pub fn is_homogeneous_in(&self, vars: &[usize]) -> bool {
        let mut degs = self
            .terms
            .keys()
            .map(|e| vars.iter().map(|&i| e[i] as u32).sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, *c);
        }
        r
    }

    pub fn neg(&self) -> Poly {
        self.scale(self.field.neg(1))
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: u32) -> Poly {
        let mut r = Self::zero(&self.field, self.nvars);
        if s == 0 {
            return r;
        }
        for (e, c) in &self.terms {
            r.terms.insert(*e, self.field.mul(*c, s));
        }
        r
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let k = &self.field;
        let mut r = Self::zero(k, self.nvars.max(o.nvars));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let mut e = *ea;
                for i in 0..MAX_VARS {
                    e[i] += eb[i];
                }
                r.add_term(e, k.mul(*ca, *cb));
            }
        }
        r
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Self::constant(&self.field, self.nvars, 1);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Scales so the lex-leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(self.field.inv(c).unwrap()),
        }
    }

    /// `self / d` when the division is exact.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let k = &self.field;
        let (de, dc) = d.leading()?;
        let dinv = k.inv(dc).unwrap();
        let mut rem = self.clone();
        let mut q = Self::zero(k, self.nvars);
        while let Some((e, c)) = rem.leading() {
            if (0..MAX_VARS).any(|i| e[i] < de[i]) {
                return None;
            }
            let mut m = [0; MAX_VARS];
            for i in 0..MAX_VARS {
                m[i] = e[i] - de[i];
            }
            let f = k.mul(c, dinv);
            q.add_term(m, f);
            rem = rem.sub(&Self::monomial(k, self.nvars, m, f).mul(d));
        }
        Some(q)
    }

    /// Largest `e` with `d^e | self`, and the cofactor.
    pub fn split_power(&self, d: &Poly) -> (u32, Poly) {
        let mut e = 0;
        let mut cur = self.clone();
        if d.is_constant() || cur.is_zero() {
            return (0, cur);
        }
        while let Some(q) = cur.div_exact(d) {
            cur = q;
            e += 1;
        }
        (e, cur)
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let k = &self.field;
        let mut r = Self::zero(k, self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut m = *e;
            m[i] -= 1;
            r.add_term(m, k.mul(*c, k.from_int(e[i] as i64)));
        }
        r
    }

    /// Value at a point with coordinates in `ext`, an extension of the
    /// coefficient field (prime-field values embed unchanged).
    pub fn eval(&self, ext: &FieldDesc, pt: &[u32]) -> u32 {
        let mut acc = 0;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (i, &x) in pt.iter().enumerate().take(self.nvars) {
                if e[i] > 0 {
                    t = ext.mul(t, ext.pow(x, e[i] as u64));
                }
            }
            acc = ext.add(acc, t);
        }
        acc
    }

    /// Value at series arguments; all series share one coefficient field.
    pub fn eval_series(&self, args: &[LaurentSeries2]) -> LaurentSeries2 {
        let k = args[0].field();
        let mut powers: Vec<Vec<LaurentSeries2>> = Vec::new();
        for (i, a) in args.iter().enumerate().take(self.nvars) {
            let top = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
            let mut v = vec![LaurentSeries2::constant(k, 1)];
            for _ in 0..top {
                let next = v.last().unwrap().mul(a);
                v.push(next);
            }
            powers.push(v);
        }
        let mut acc = LaurentSeries2::exact_zero(k);
        for (e, c) in &self.terms {
            let mut t = LaurentSeries2::constant(k, *c);
            for (i, pw) in powers.iter().enumerate() {
                if e[i] > 0 {
                    t = t.mul(&pw[e[i] as usize]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Substitutes `images[i]` for variable `i`; the result lives in the
    /// ring of the images.
    pub fn compose(&self, images: &[Poly]) -> Poly {
        let k = &self.field;
        let nv = images[0].nvars;
        let mut acc = Self::zero(k, nv);
        for (e, c) in &self.terms {
            let mut t = Self::constant(k, nv, *c);
            for (i, img) in images.iter().enumerate().take(self.nvars) {
                if e[i] > 0 {
                    t = t.mul(&img.pow(e[i] as u32));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Univariate view in variable `i`; other variables must be absent.
    pub fn to_upoly(&self, i: usize) -> UPoly {
        let n = self.terms.keys().map(|e| e[i] as usize).max().unwrap_or(0);
        let mut cs = vec![0u32; n + 1];
        for (e, c) in &self.terms {
            debug_assert!((0..self.nvars).all(|j| j == i || e[j] == 0));
            cs[e[i] as usize] = *c;
        }
        UPoly::new(&self.field, cs)
    }

    /// Coefficients of powers of variable `i`, as polynomials in the rest.
    pub fn coeffs_in(&self, i: usize) -> Vec<Poly> {
        let n = self.terms.keys().map(|e| e[i] as usize).max().unwrap_or(0);
        let mut out = vec![Self::zero(&self.field, self.nvars); n + 1];
        for (e, c) in &self.terms {
            let mut m = *e;
            m[i] = 0;
            out[e[i] as usize].add_term(m, *c);
        }
        out
    }

    /// Parses text such as `YZ - X^2` or `X0*Y1 + 2X1^2Y0` using `names`
    /// for the variables.
    pub fn parse(field: &FieldDesc, names: &[&str], text: &str) -> Result<Poly> {
        let bad = |m: &str| Error::Parse(format!("{m} in polynomial '{text}'"));
        let s: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad("empty input"));
        }
        let mut order: Vec<(usize, &str)> = names.iter().copied().enumerate().collect();
        order.sort_by_key(|(_, n)| std::cmp::Reverse(n.len()));
        let mut p = Self::zero(field, names.len());
        let mut pos = 0;
        let read_int = |pos: &mut usize| -> Option<i64> {
            let st = *pos;
            while *pos < s.len() && s[*pos].is_ascii_digit() {
                *pos += 1;
            }
            (st < *pos).then(|| s[st..*pos].iter().collect::<String>().parse().ok())?
        };
        while pos < s.len() {
            let mut sign = 1i64;
            while pos < s.len() && (s[pos] == '+' || s[pos] == '-') {
                if s[pos] == '-' {
                    sign = -sign;
                }
                pos += 1;
            }
            let mut coef = read_int(&mut pos).unwrap_or(1) * sign;
            let mut e = [0u16; MAX_VARS];
            let mut any = false;
            loop {
                if pos < s.len() && s[pos] == '*' {
                    pos += 1;
                }
                let rest: String = s[pos..].iter().collect();
                let Some(&(i, name)) = order.iter().find(|(_, n)| rest.starts_with(n)) else {
                    break;
                };
                pos += name.chars().count();
                let mut k = 1;
                if pos < s.len() && s[pos] == '^' {
                    pos += 1;
                    k = read_int(&mut pos).ok_or_else(|| bad("missing exponent"))?;
                }
                e[i] += k as u16;
                any = true;
            }
            if !any && pos < s.len() && s[pos] != '+' && s[pos] != '-' {
                return Err(bad(&format!("unexpected '{}'", s[pos])));
            }
            if pos < s.len() && s[pos] == '*' {
                pos += 1;
                coef *= read_int(&mut pos).ok_or_else(|| bad("dangling '*'"))?;
            }
            if pos < s.len() && s[pos] != '+' && s[pos] != '-' {
                return Err(bad(&format!("unexpected '{}'", s[pos])));
            }
            p.add_term(e, field.from_int(coef));
        }
        Ok(p)
    }

    pub fn format_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let mut mono = String::new();
            for i in 0..self.nvars {
                match e[i] {
                    0 => {}
                    1 => mono.push_str(names[i]),
                    k => mono.push_str(&format!("{}^{}", names[i], k)),
                }
            }
            let coef = self.field.format(*c);
            if n > 0 {
                out.push_str(" + ");
            }
            if mono.is_empty() {
                out.push_str(&coef);
            } else if *c == 1 {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{coef}{mono}"));
            }
        }
        out
    }
}

pub fn default_names(nvars: usize) -> &'static [&'static str] {
    match nvars {
        1 => &["x"],
        2 => &["a", "b"],
        3 => &["X", "Y", "Z"],
        _ => &["X0", "X1", "Y0", "Y1"],
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(default_names(self.nvars)))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

/// Orders by total degree, then by terms from the leading monomial down.
impl Ord for Poly {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&o.total_degree())
            .then_with(|| self.terms.iter().rev().cmp(o.terms.iter().rev()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::field_make;

    #[test]
    fn parse_and_print() {
        let k = field_make(5, 1).unwrap();
        let p = Poly::parse(&k, &["X", "Y", "Z"], "YZ - X^2").unwrap();
        assert_eq!(p.to_string(), "4X^2 + YZ");
        let q = Poly::parse(&k, &["X0", "X1", "Y0", "Y1"], "X0*Y1 + 2X1^2Y0").unwrap();
        assert_eq!(q.total_degree(), Some(3));
        assert!(Poly::parse(&k, &["X", "Y", "Z"], "X+W").is_err());
        assert_eq!(Poly::parse(&k, &["X", "Y", "Z"], "3").unwrap().coeff(&[0; 4]), 3);
    }

    #[test]
    fn exact_division() {
        let k = field_make(3, 1).unwrap();
        let n = ["X", "Y", "Z"];
        let a = Poly::parse(&k, &n, "X+Y").unwrap();
        let b = Poly::parse(&k, &n, "X^2+YZ+2Z^2").unwrap();
        let ab = a.mul(&b);
        assert_eq!(ab.div_exact(&a), Some(b.clone()));
        assert_eq!(ab.mul(&a).split_power(&a), (2, b.clone()));
        assert!(b.div_exact(&a).is_none());
    }
}
