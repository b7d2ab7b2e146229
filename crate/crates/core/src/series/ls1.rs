use crate::error::{precision, Result, Var};
use crate::fields::{FieldDesc, FieldElem};

/// Truncated Laurent series in `u` over a finite field.
///
/// Coefficients of `u^e` are known exactly for every `e < prec`: the stored
/// vector covers `lo .. lo + coeffs.len()`, all other exponents below `prec`
/// are zero. A series whose known coefficients all vanish is either *zero at
/// this precision* or, when `exact_zero` is set, exactly zero.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries1 {
    field: FieldDesc,
    lo: i64,
    coeffs: Vec<u32>,
    prec: i64,
    exact_zero: bool,
}

impl LaurentSeries1 {
    pub fn exact_zero(field: &FieldDesc) -> Self {
        LaurentSeries1 {
            field: field.clone(),
            lo: 0,
            coeffs: Vec::new(),
            prec: super::INF,
            exact_zero: true,
        }
    }

    pub fn zero_at(field: &FieldDesc, prec: i64) -> Self {
        LaurentSeries1 {
            field: field.clone(),
            lo: prec,
            coeffs: Vec::new(),
            prec,
            exact_zero: false,
        }
    }

    /// Series from `(exponent, coefficient)` terms known modulo `u^prec`.
    /// Terms at or beyond `prec` are dropped; repeated exponents add up.
    pub fn from_terms(field: &FieldDesc, terms: &[(i64, u32)], prec: i64) -> Self {
        let kept: Vec<_> = terms.iter().filter(|(e, _)| *e < prec).collect();
        if kept.is_empty() {
            return Self::zero_at(field, prec);
        }
        let lo = kept.iter().map(|(e, _)| *e).min().unwrap();
        let hi = kept.iter().map(|(e, _)| *e).max().unwrap();
        let mut coeffs = vec![0u32; (hi - lo + 1) as usize];
        for &&(e, c) in &kept {
            let slot = &mut coeffs[(e - lo) as usize];
            *slot = field.add(*slot, c);
        }
        let mut s = LaurentSeries1 {
            field: field.clone(),
            lo,
            coeffs,
            prec,
            exact_zero: false,
        };
        s.normalize();
        s
    }

    pub fn constant(field: &FieldDesc, c: u32, prec: i64) -> Self {
        Self::from_terms(field, &[(0, c)], prec)
    }

    fn normalize(&mut self) {
        if super::is_inf(self.prec) {
            self.prec = super::INF;
            if self.coeffs.iter().all(|&c| c == 0) {
                self.exact_zero = true;
            }
        }
        if self.exact_zero {
            self.lo = 0;
            self.prec = super::INF;
            self.coeffs.clear();
            return;
        }
        let cut = self.prec - self.lo;
        if cut < self.coeffs.len() as i64 {
            self.coeffs.truncate(cut.max(0) as usize);
        }
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.lo += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.lo = self.prec;
        }
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact_zero
    }

    /// True when every known coefficient vanishes (exactly or at precision).
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Least exponent with a nonzero coefficient; `None` if none is known.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.lo)
    }

    /// A lower bound for the true valuation.
    pub fn valuation_bound(&self) -> i64 {
        if self.exact_zero {
            super::INF
        } else {
            self.lo
        }
    }

    /// Coefficient of `u^e`, or `None` when `e` is beyond the precision.
    pub fn coeff(&self, e: i64) -> Option<u32> {
        if e >= self.prec {
            return None;
        }
        let i = e - self.lo;
        Some(if i >= 0 && (i as usize) < self.coeffs.len() {
            self.coeffs[i as usize]
        } else {
            0
        })
    }

    pub fn coeff_elem(&self, e: i64) -> Option<FieldElem> {
        self.coeff(e).map(|v| self.field.elem(v))
    }

    /// Nonzero known terms as `(exponent, value)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.lo + i as i64, c))
    }

    /// Lowers the precision to `prec` (never raises it).
    pub fn truncate(&self, prec: i64) -> Self {
        if self.exact_zero || prec >= self.prec {
            return self.clone();
        }
        let mut s = self.clone();
        s.prec = prec;
        s.normalize();
        s
    }

    /// Multiplication by `u^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.exact_zero {
            return self.clone();
        }
        let mut s = self.clone();
        s.lo += k;
        s.prec += k;
        s.normalize();
        s
    }

    pub fn scale(&self, c: u32) -> Self {
        if self.exact_zero {
            return self.clone();
        }
        if c == 0 {
            return Self::exact_zero(&self.field);
        }
        let k = &self.field;
        let mut s = self.clone();
        for x in s.coeffs.iter_mut() {
            *x = k.mul(*x, c);
        }
        s
    }

    pub fn neg(&self) -> Self {
        let k = &self.field;
        let mut s = self.clone();
        for x in s.coeffs.iter_mut() {
            *x = k.neg(*x);
        }
        s
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert!(self.field == o.field);
        if self.exact_zero {
            return o.clone();
        }
        if o.exact_zero {
            return self.clone();
        }
        let k = &self.field;
        let prec = self.prec.min(o.prec);
        let lo = self.lo.min(o.lo).min(prec);
        let hi = (self.lo + self.coeffs.len() as i64)
            .max(o.lo + o.coeffs.len() as i64)
            .min(prec);
        let mut coeffs = vec![0u32; (hi - lo).max(0) as usize];
        for (e, c) in self.terms().chain(o.terms()) {
            if e < hi {
                let slot = &mut coeffs[(e - lo) as usize];
                *slot = k.add(*slot, c);
            }
        }
        let mut s = LaurentSeries1 {
            field: k.clone(),
            lo,
            coeffs,
            prec,
            exact_zero: false,
        };
        s.normalize();
        s
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Product; the precision is `min(prec_a + v_b, prec_b + v_a)` with
    /// valuations replaced by their proven lower bounds.
    pub fn mul(&self, o: &Self) -> Self {
        debug_assert!(self.field == o.field);
        if self.exact_zero || o.exact_zero {
            return Self::exact_zero(&self.field);
        }
        let k = &self.field;
        let prec = (self.prec + o.lo).min(o.prec + self.lo);
        let lo = self.lo + o.lo;
        let len = (prec - lo).max(0) as usize;
        let mut coeffs = vec![0u32; len.min(self.coeffs.len() + o.coeffs.len())];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                if i + j >= coeffs.len() {
                    break;
                }
                coeffs[i + j] = k.add(coeffs[i + j], k.mul(a, b));
            }
        }
        let mut s = LaurentSeries1 {
            field: k.clone(),
            lo,
            coeffs,
            prec,
            exact_zero: false,
        };
        s.normalize();
        s
    }

    /// Multiplicative inverse. A series `c u^v (1 + ...)` known modulo
    /// `u^prec` has an inverse known modulo `u^{prec - 2v}`.
    pub fn inv(&self) -> Result<Self> {
        let v = self.valuation().ok_or_else(|| {
            precision(
                Var::U,
                format!("cannot invert a series that is zero modulo u^{}", self.prec),
            )
        })?;
        let k = &self.field;
        let c0_inv = k.inv(self.coeffs[0]).expect("leading coefficient is nonzero");
        if super::is_inf(self.prec) {
            if self.coeffs.len() == 1 {
                return Ok(Self::from_terms(k, &[(-v, c0_inv)], super::INF));
            }
            return self.truncate(v + super::DEFAULT_PREC).inv();
        }
        let rel = (self.prec - v) as usize;
        let mut out = vec![0u32; rel];
        for n in 0..rel {
            let mut acc = if n == 0 { 1 } else { 0 };
            for i in 1..=n.min(self.coeffs.len().saturating_sub(1)) {
                acc = k.sub(acc, k.mul(self.coeffs[i], out[n - i]));
            }
            out[n] = k.mul(acc, c0_inv);
        }
        let mut s = LaurentSeries1 {
            field: k.clone(),
            lo: -v,
            coeffs: out,
            prec: self.prec - 2 * v,
            exact_zero: false,
        };
        s.normalize();
        Ok(s)
    }

    /// Integer power (negative powers invert first).
    pub fn powi(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::constant(&self.field, 1, super::INF);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Formal derivative; exponents divisible by the characteristic vanish.
    pub fn derive(&self) -> Self {
        if self.exact_zero {
            return self.clone();
        }
        let k = &self.field;
        let terms: Vec<(i64, u32)> = self
            .terms()
            .map(|(e, c)| (e - 1, k.mul(k.from_int(e), c)))
            .collect();
        Self::from_terms(k, &terms, self.prec - 1)
    }
}

impl std::fmt::Debug for LaurentSeries1 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.exact_zero {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(e, c)| format!("{}*u^{}", self.field.format(c), e))
            .collect();
        write!(f, "{} + O(u^{})", parts.join(" + "), self.prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::field_make;

    #[test]
    fn inverse_of_one_plus_u() {
        let k = field_make(3, 1).unwrap();
        let s = LaurentSeries1::from_terms(&k, &[(0, 1), (1, 1)], 5);
        let inv = s.inv().unwrap();
        // 1 - u + u^2 - u^3 + u^4 over F_3.
        let want: Vec<u32> = vec![1, 2, 1, 2, 1];
        let got: Vec<u32> = (0..5).map(|e| inv.coeff(e).unwrap()).collect();
        assert_eq!(got, want);
        assert_eq!(inv.prec(), 5);
        let one = s.mul(&inv);
        assert_eq!(one.valuation(), Some(0));
        assert_eq!(one.terms().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn precision_of_pole_inverse() {
        let k = field_make(5, 1).unwrap();
        // u^2 (1 + u) mod u^6 has inverse u^-2 (1 - u + ...) mod u^2.
        let s = LaurentSeries1::from_terms(&k, &[(2, 1), (3, 1)], 6);
        let inv = s.inv().unwrap();
        assert_eq!(inv.prec(), 2);
        assert_eq!(inv.valuation(), Some(-2));
    }

    #[test]
    fn zero_states_are_distinct() {
        let k = field_make(2, 1).unwrap();
        let z = LaurentSeries1::zero_at(&k, 4);
        assert!(z.is_zero() && !z.is_exact_zero());
        assert!(z.inv().is_err());
        let e = LaurentSeries1::exact_zero(&k);
        assert!(e.is_exact_zero());
        assert_ne!(z, e);
        assert_eq!(z.mul(&e), e);
    }

    #[test]
    fn derivative_kills_multiples_of_p() {
        let k = field_make(3, 1).unwrap();
        let s = LaurentSeries1::from_terms(&k, &[(3, 1), (2, 1)], 8);
        let d = s.derive();
        assert_eq!(d.terms().collect::<Vec<_>>(), vec![(1, 2)]);
        assert_eq!(d.prec(), 7);
    }
}
