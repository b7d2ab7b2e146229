use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FieldDesc;
use crate::error::{Error, Result};

/// Seed of the random splitting in equal-degree factorization. The factor
/// list is sorted afterwards, so the seed only affects running time.
pub const FACTOR_SEED: u64 = 0x5eed_0f_1e1d;

/// Dense univariate polynomial over a finite field, lowest degree first.
/// The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct UPoly {
    field: FieldDesc,
    coeffs: Vec<u32>,
}

impl UPoly {
    pub fn new(field: &FieldDesc, coeffs: Vec<u32>) -> Self {
        let mut p = UPoly {
            field: field.clone(),
            coeffs,
        };
        p.trim();
        p
    }

    pub fn zero(field: &FieldDesc) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn constant(field: &FieldDesc, c: u32) -> Self {
        Self::new(field, vec![c])
    }

    /// `x^n`.
    pub fn monomial(field: &FieldDesc, n: usize) -> Self {
        let mut c = vec![0; n + 1];
        c[n] = 1;
        Self::new(field, c)
    }

    /// `x - r`.
    pub fn linear_root(field: &FieldDesc, r: u32) -> Self {
        Self::new(field, vec![field.neg(r), 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let k = &self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| k.add(self.coeff(i), o.coeff(i))).collect();
        UPoly::new(k, c)
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let k = &self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| k.sub(self.coeff(i), o.coeff(i))).collect();
        UPoly::new(k, c)
    }

    pub fn scale(&self, s: u32) -> UPoly {
        let k = &self.field;
        UPoly::new(k, self.coeffs.iter().map(|&c| k.mul(c, s)).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero(&self.field);
        }
        let k = &self.field;
        let mut c = vec![0u32; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                c[i + j] = k.add(c[i + j], k.mul(a, b));
            }
        }
        UPoly::new(k, c)
    }

    pub fn pow(&self, mut e: u64) -> UPoly {
        let mut base = self.clone();
        let mut acc = UPoly::constant(&self.field, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn divrem(&self, d: &UPoly) -> Result<(UPoly, UPoly)> {
        let k = &self.field;
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let inv_lead = k.inv(d.lead()).ok_or(Error::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((UPoly::zero(k), self.clone()));
        }
        let mut quo = vec![0u32; rem.len() - dd];
        for i in (0..quo.len()).rev() {
            let c = k.mul(rem[i + dd], inv_lead);
            quo[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in d.coeffs.iter().enumerate() {
                rem[i + j] = k.sub(rem[i + j], k.mul(c, b));
            }
        }
        rem.truncate(dd);
        Ok((UPoly::new(k, quo), UPoly::new(k, rem)))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.divrem(d).expect("nonzero divisor").1
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn exact_div(&self, d: &UPoly) -> UPoly {
        let (q, r) = self.divrem(d).expect("nonzero divisor");
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).expect("nonzero lead");
        self.scale(inv)
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UPoly {
        let k = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| k.mul(k.from_int(i as i64), a))
            .collect();
        UPoly::new(k, c)
    }

    pub fn eval(&self, x: u32) -> u32 {
        let k = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| k.add(k.mul(acc, x), c))
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: u128, m: &UPoly) -> UPoly {
        let mut base = self.rem(m);
        let mut acc = UPoly::constant(&self.field, 1).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Maps the coefficients into a field extending this one. Only prime-field
    /// polynomials can be mapped this way, since the encoding of `F_p` is shared
    /// by every `F_{p^d}`.
    pub fn lift(&self, to: &FieldDesc) -> UPoly {
        assert!(self.field.is_prime_field() && to.p() == self.field.p());
        UPoly::new(to, self.coeffs.clone())
    }

    /// `g` with `g(x^p) = self`, assuming only exponents divisible by `p` occur.
    fn pth_root(&self) -> UPoly {
        let k = &self.field;
        let p = k.p() as usize;
        let root_exp = (k.order() / k.p()) as u64;
        let c = self
            .coeffs
            .iter()
            .step_by(p)
            .map(|&a| k.pow(a, root_exp))
            .collect();
        UPoly::new(k, c)
    }

    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else {
            return false;
        };
        if n == 0 {
            return false;
        }
        let f = self.monic();
        let q = self.field.order() as u128;
        let x = UPoly::monomial(&self.field, 1);
        let mut h = x.clone();
        for _ in 1..=n / 2 {
            h = h.powmod(q, &f);
            if !h.sub(&x).gcd(&f).is_one() {
                return false;
            }
        }
        true
    }

    fn squarefree(&self) -> Vec<(UPoly, u32)> {
        let k = &self.field;
        let mut out = Vec::new();
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return out;
        }
        let df = f.derivative();
        let mut c = f.gcd(&df);
        let mut w = f.exact_div(&c);
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let z = w.exact_div(&y);
            if !z.is_one() {
                out.push((z, i));
            }
            i += 1;
            w = y;
            c = c.exact_div(&w);
        }
        if !c.is_one() {
            let root = c.pth_root();
            for (g, m) in root.squarefree() {
                out.push((g, m * k.p()));
            }
        }
        out
    }

    fn distinct_degree(&self) -> Vec<(UPoly, usize)> {
        let q = self.field.order() as u128;
        let x = UPoly::monomial(&self.field, 1);
        let mut out = Vec::new();
        let mut f = self.clone();
        let mut h = x.clone();
        let mut i = 1;
        while f.degree().unwrap_or(0) >= 2 * i {
            h = h.powmod(q, &f);
            let g = h.sub(&x).gcd(&f);
            if !g.is_one() {
                f = f.exact_div(&g);
                h = h.rem(&f);
                out.push((g, i));
            }
            i += 1;
        }
        if f.degree().unwrap_or(0) > 0 {
            let d = f.degree().unwrap();
            out.push((f, d));
        }
        out
    }

    fn equal_degree(&self, d: usize, rng: &mut ChaCha8Rng) -> Vec<UPoly> {
        let n = self.degree().unwrap();
        if n == d {
            return vec![self.clone()];
        }
        let k = &self.field;
        let q = k.order() as u128;
        loop {
            let a = UPoly::new(k, (0..n).map(|_| rng.gen_range(0..k.order())).collect());
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let b = if k.p() == 2 {
                // Trace map to F_2 of F_{q^d}: Σ_{i < log2(q^d)} a^{2^i}.
                let bits = k.degree() as usize * d;
                let mut acc = UPoly::zero(k);
                let mut t = a.rem(self);
                for _ in 0..bits {
                    acc = acc.add(&t);
                    t = t.mul(&t).rem(self);
                }
                acc
            } else {
                // a^{(q^d - 1)/2} = (Π_{i<d} a^{q^i})^{(q-1)/2}.
                let mut norm = UPoly::constant(k, 1);
                let mut t = a.rem(self);
                for _ in 0..d {
                    norm = norm.mul(&t).rem(self);
                    t = t.powmod(q, self);
                }
                norm.powmod((q - 1) / 2, self).sub(&UPoly::constant(k, 1))
            };
            let g = b.gcd(self);
            let gd = g.degree().unwrap_or(0);
            if gd > 0 && gd < n {
                let mut out = g.equal_degree(d, rng);
                out.extend(self.exact_div(&g).equal_degree(d, rng));
                return out;
            }
        }
    }

    /// Factorization into monic irreducibles with multiplicities, sorted by
    /// degree and then lexicographically (highest coefficient first). The
    /// leading coefficient of `self` is discarded.
    pub fn factor(&self) -> Result<Vec<(UPoly, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(FACTOR_SEED);
        let mut out: Vec<(UPoly, u32)> = Vec::new();
        for (sf, m) in self.squarefree() {
            for (block, d) in sf.distinct_degree() {
                for g in block.equal_degree(d, &mut rng) {
                    let g = g.monic();
                    if let Some(slot) = out.iter_mut().find(|(h, _)| *h == g) {
                        slot.1 += m;
                    } else {
                        out.push((g, m));
                    }
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp_canonical(&b.0));
        Ok(out)
    }

    /// Distinct roots in the coefficient field, ascending by encoded value.
    pub fn roots(&self) -> Result<Vec<u32>> {
        let mut r: Vec<u32> = self
            .factor()?
            .into_iter()
            .filter(|(g, _)| g.degree() == Some(1))
            .map(|(g, _)| self.field.neg(g.coeff(0)))
            .collect();
        r.sort_unstable();
        Ok(r)
    }

    fn cmp_canonical(&self, o: &UPoly) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| self.coeffs.iter().rev().cmp(o.coeffs.iter().rev()))
    }
}

/// Factorization as a free function, mirroring the other module entry points.
pub fn poly_factor(f: &UPoly) -> Result<Vec<(UPoly, u32)>> {
    f.factor()
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let cs = self.field.format(c);
            let cs = if self.field.is_prime_field() || !cs.contains('+') {
                cs
            } else {
                format!("({cs})")
            };
            match (i, c) {
                (0, _) => write!(f, "{cs}")?,
                (1, 1) => f.write_str("x")?,
                (1, _) => write!(f, "{cs}*x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{cs}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::field_make;

    fn up(p: u64, c: &[u32]) -> UPoly {
        UPoly::new(&field_make(p, 1).unwrap(), c.to_vec())
    }

    #[test]
    fn factor_examples() {
        // x^2 + 1 over F_5 = (x + 2)(x + 3).
        let f = up(5, &[1, 0, 1]).factor().unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].0.coeffs(), &[2, 1]);
        assert_eq!(f[1].0.coeffs(), &[3, 1]);
        // x^2 + x + 1 over F_2 is irreducible.
        let f = up(2, &[1, 1, 1]).factor().unwrap();
        assert_eq!(f, vec![(up(2, &[1, 1, 1]), 1)]);
        // x^2 over F_3.
        let f = up(3, &[0, 0, 1]).factor().unwrap();
        assert_eq!(f, vec![(up(3, &[0, 1]), 2)]);
        assert!(matches!(up(3, &[]).factor(), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn pth_power_factors() {
        // (x + 1)^4 (x^2 + x + 1)^2 over F_2.
        let a = up(2, &[1, 1]).pow(4).mul(&up(2, &[1, 1, 1]).pow(2));
        let f = a.factor().unwrap();
        assert_eq!(f, vec![(up(2, &[1, 1]), 4), (up(2, &[1, 1, 1]), 2)]);
        // x^3 + 2 = (x + 2)^3 over F_3.
        let f = up(3, &[2, 0, 0, 1]).factor().unwrap();
        assert_eq!(f, vec![(up(3, &[2, 1]), 3)]);
    }

    #[test]
    fn roots_over_extension() {
        let k = field_make(2, 2).unwrap();
        // x^2 + x + 1 splits over F_4 with roots α and α + 1.
        let r = up(2, &[1, 1, 1]).lift(&k).roots().unwrap();
        assert_eq!(r, vec![2, 3]);
    }

    #[test]
    fn irreducibility_counts() {
        // Number of monic irreducible quadratics over F_p is (p^2 - p)/2.
        for p in [2u32, 3, 5] {
            let k = field_make(p as u64, 1).unwrap();
            let mut n = 0;
            for a in 0..p {
                for b in 0..p {
                    if UPoly::new(&k, vec![b, a, 1]).is_irreducible() {
                        n += 1;
                    }
                }
            }
            assert_eq!(n, (p * p - p) / 2);
        }
    }
}
