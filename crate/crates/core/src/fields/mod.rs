//! Finite fields `F_p` and `F_{p^d}`.
//!
//! Elements are stored as a single integer `Σ c_i p^i` encoding the
//! coefficient vector of the polynomial representative modulo the field's
//! defining polynomial. Extension fields carry exp/log tables built from a
//! primitive element, so multiplication is two table lookups.

mod upoly;

pub use upoly::{poly_factor, UPoly, FACTOR_SEED};

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// Largest field order for which tables are built.
pub const MAX_TABLE_ORDER: u64 = 1 << 22;

static FIELDS: Lazy<Mutex<HashMap<(u32, u32), FieldDesc>>> = Lazy::new(|| Mutex::new(HashMap::new()));

struct FieldInner {
    p: u32,
    d: u32,
    q: u32,
    /// Monic defining polynomial, low degree first, length `d + 1`.
    modulus: Vec<u32>,
    /// `p^i` for `i < d`.
    place: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A finite field `F_{p^d}` with its deterministically chosen modulus.
///
/// Cheap to clone. Two descriptors compare equal iff they describe the same
/// `(p, d, modulus)`.
#[derive(Clone)]
pub struct FieldDesc(Arc<FieldInner>);

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.d == other.0.d && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldDesc {}

impl Hash for FieldDesc {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.d.hash(state);
    }
}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.d == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}[{}]", self.0.p, self.0.d, self.modulus_string())
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a prime power `q` into `(p, d)`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = prime_factors(q)[0];
    if prime_factors(q).len() != 1 {
        return None;
    }
    let mut d = 0;
    let mut m = q;
    while m > 1 {
        m /= p;
        d += 1;
    }
    Some((p as u32, d))
}

/// Builds (or fetches from the process-wide cache) the field `F_{p^d}`.
///
/// The modulus is the lexicographically least monic irreducible polynomial
/// of degree `d`, comparing coefficients from `x^{d-1}` down to `x^0`.
pub fn field_make(p: u64, d: u32) -> Result<FieldDesc> {
    if !is_prime(p) || p > u32::MAX as u64 {
        return Err(Error::NotPrime(p));
    }
    if d == 0 {
        return Err(Error::Unsupported("extension degree 0".into()));
    }
    let order = (p as u128).checked_pow(d).unwrap_or(u128::MAX);
    if d > 1 && order > MAX_TABLE_ORDER as u128 {
        return Err(Error::FieldTooLarge(order.min(u64::MAX as u128) as u64));
    }
    let key = (p as u32, d);
    if let Some(f) = FIELDS.lock().unwrap().get(&key) {
        return Ok(f.clone());
    }
    let desc = if d == 1 {
        prime_field(p as u32)
    } else {
        let base = field_make(p, 1)?;
        let modulus = least_irreducible(&base, d as usize);
        extension_field(p as u32, d, modulus)
    };
    FIELDS.lock().unwrap().entry(key).or_insert(desc.clone());
    Ok(desc)
}

fn prime_field(p: u32) -> FieldDesc {
    FieldDesc(Arc::new(FieldInner {
        p,
        d: 1,
        q: p,
        modulus: vec![0, 1],
        place: vec![1],
        exp: Vec::new(),
        log: Vec::new(),
    }))
}

fn least_irreducible(base: &FieldDesc, d: usize) -> Vec<u32> {
    let p = base.p();
    let count = (p as u64).pow(d as u32);
    for idx in 0..count {
        // idx enumerates (c_{d-1}, ..., c_0) in lexicographic order.
        let mut coeffs = vec![0u32; d + 1];
        let mut rest = idx;
        for i in 0..d {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[d] = 1;
        if coeffs[0] == 0 {
            continue;
        }
        let f = UPoly::new(base, coeffs.clone());
        if f.is_irreducible() {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn extension_field(p: u32, d: u32, modulus: Vec<u32>) -> FieldDesc {
    let q = p.pow(d);
    let mut place = vec![1u32; d as usize];
    for i in 1..d as usize {
        place[i] = place[i - 1] * p;
    }
    let mut inner = FieldInner {
        p,
        d,
        q,
        modulus,
        place,
        exp: Vec::new(),
        log: Vec::new(),
    };
    let order = (q - 1) as u64;
    let factors = prime_factors(order);
    let mut generator = 0;
    for g in p..q {
        if factors.iter().all(|r| slow_pow(&inner, g, order / r) != 1) {
            generator = g;
            break;
        }
    }
    assert!(generator != 0, "multiplicative group is cyclic");
    let mut exp = vec![0u32; (q - 1) as usize];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u32;
    for (i, e) in exp.iter_mut().enumerate() {
        *e = x;
        log[x as usize] = i as u32;
        x = slow_mul(&inner, x, generator);
    }
    inner.exp = exp;
    inner.log = log;
    FieldDesc(Arc::new(inner))
}

fn digits(inner: &FieldInner, mut v: u32) -> Vec<u32> {
    let mut out = vec![0u32; inner.d as usize];
    for c in out.iter_mut() {
        *c = v % inner.p;
        v /= inner.p;
    }
    out
}

fn undigits(inner: &FieldInner, ds: &[u32]) -> u32 {
    ds.iter().rev().fold(0, |acc, &c| acc * inner.p + c)
}

fn slow_mul(inner: &FieldInner, a: u32, b: u32) -> u32 {
    let p = inner.p as u64;
    let d = inner.d as usize;
    let (da, db) = (digits(inner, a), digits(inner, b));
    let mut prod = vec![0u64; 2 * d - 1];
    for i in 0..d {
        for j in 0..d {
            prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
        }
    }
    for k in (d..2 * d - 1).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for i in 0..d {
            let sub = c * inner.modulus[i] as u64 % p;
            prod[k - d + i] = (prod[k - d + i] + p - sub) % p;
        }
        prod[k] = 0;
    }
    let out: Vec<u32> = prod[..d].iter().map(|&c| c as u32).collect();
    undigits(inner, &out)
}

fn slow_pow(inner: &FieldInner, a: u32, mut e: u64) -> u32 {
    let mut base = a;
    let mut acc = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = slow_mul(inner, acc, base);
        }
        base = slow_mul(inner, base, base);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    s0.rem_euclid(p as i64) as u32
}

/// Raw arithmetic on encoded values. Callers guarantee values lie in `[0, q)`.
impl FieldDesc {
    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.d
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.d == 1
    }

    fn modulus_string(&self) -> String {
        let base = field_make(self.0.p as u64, 1).expect("prime field");
        UPoly::new(&base, self.0.modulus.clone()).to_string()
    }

    /// The prime subfield.
    pub fn prime_field(&self) -> FieldDesc {
        field_make(self.0.p as u64, 1).expect("characteristic is prime")
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let i = &self.0;
        if i.d == 1 {
            let s = a + b;
            return if s >= i.p { s - i.p } else { s };
        }
        if i.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for &pl in &i.place {
            let s = a % i.p + b % i.p;
            out += (if s >= i.p { s - i.p } else { s }) * pl;
            a /= i.p;
            b /= i.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let i = &self.0;
        if i.d == 1 {
            return if a == 0 { 0 } else { i.p - a };
        }
        if i.p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        for &pl in &i.place {
            let c = a % i.p;
            out += (if c == 0 { 0 } else { i.p - c }) * pl;
            a /= i.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let i = &self.0;
        if i.d == 1 {
            return ((a as u64 * b as u64) % i.p as u64) as u32;
        }
        let s = i.log[a as usize] as u64 + i.log[b as usize] as u64;
        i.exp[(s % (i.q as u64 - 1)) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let i = &self.0;
        if i.d == 1 {
            return Some(inv_mod(a, i.p));
        }
        let l = i.log[a as usize];
        Some(i.exp[((i.q - 1 - l) % (i.q - 1)) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let i = &self.0;
        if i.d > 1 {
            let l = i.log[a as usize] as u128 * e as u128 % (i.q as u128 - 1);
            return i.exp[l as usize];
        }
        let mut base = a;
        let mut acc = 1;
        let mut e = e % (i.p as u64 - 1).max(1);
        if e == 0 {
            return 1;
        }
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Signed power; `None` for negative powers of zero.
    pub fn pow_i(&self, a: u32, e: i64) -> Option<u32> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            self.inv(a).map(|x| self.pow(x, e.unsigned_abs()))
        }
    }

    /// Image of an integer under `Z → F_p ⊂ F_q`.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.p as i64) as u32
    }

    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.0.p as u64)
    }

    /// Absolute trace `Σ_{i<d} a^{p^i}`, returned as a value of the prime field.
    pub fn trace(&self, a: u32) -> u32 {
        self.partial_trace(a, self.0.d)
    }

    /// `Σ_{i<e} a^{p^i}`: the absolute trace of `a` viewed in the subfield
    /// `F_{p^e}`, when `a` lies there.
    pub fn partial_trace(&self, a: u32, e: u32) -> u32 {
        let mut acc = 0;
        let mut x = a;
        for _ in 0..e {
            acc = self.add(acc, x);
            x = self.frobenius(x);
        }
        acc
    }

    /// Coefficient vector (length `d`) of the polynomial representative.
    pub fn coeffs(&self, a: u32) -> Vec<u32> {
        digits(&self.0, a)
    }

    pub fn from_coeffs(&self, cs: &[u32]) -> u32 {
        let mut ds = vec![0u32; self.0.d as usize];
        for (slot, &c) in ds.iter_mut().zip(cs) {
            *slot = c % self.0.p;
        }
        undigits(&self.0, &ds)
    }

    /// The class of `x` in `F_p[x]/(modulus)`.
    pub fn generator(&self) -> u32 {
        if self.0.d == 1 {
            // The prime field has no proper generator; the modulus is `x`.
            0
        } else {
            self.0.p
        }
    }

    pub fn elem(&self, v: u32) -> FieldElem {
        FieldElem {
            desc: self.clone(),
            value: v % self.0.q,
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElem {
        self.elem(1)
    }

    pub fn format(&self, v: u32) -> String {
        if self.0.d == 1 {
            return v.to_string();
        }
        let ds = self.coeffs(v);
        let mut parts = Vec::new();
        for (i, &c) in ds.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    /// Inverse of [`FieldDesc::format`]; also accepts plain integers.
    pub fn parse(&self, s: &str) -> Result<u32> {
        let bad = || Error::Parse(format!("bad field element '{s}'"));
        let mut ds = vec![0u32; self.0.d as usize];
        for part in s.trim().split('+') {
            let part = part.trim();
            let (c, i) = match part.find('a') {
                None => (part, 0usize),
                Some(pos) => {
                    let exp = match &part[pos + 1..] {
                        "" => 1,
                        e => e.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?,
                    };
                    (&part[..pos], exp)
                }
            };
            let c: i64 = if c.is_empty() {
                1
            } else {
                c.parse().map_err(|_| bad())?
            };
            if i >= ds.len() || (i > 0 && self.0.d == 1) {
                return Err(bad());
            }
            ds[i] = ((ds[i] as i64 + c).rem_euclid(self.0.p as i64)) as u32;
        }
        Ok(self.from_coeffs(&ds))
    }
}

/// An element of a finite field together with its descriptor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    desc: FieldDesc,
    value: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic.
pub fn ff_arith(a: &FieldElem, b: &FieldElem, op: ArithOp) -> Result<FieldElem> {
    if a.desc != b.desc {
        return Err(Error::FieldMismatch);
    }
    let f = &a.desc;
    let v = match op {
        ArithOp::Add => f.add(a.value, b.value),
        ArithOp::Sub => f.sub(a.value, b.value),
        ArithOp::Mul => f.mul(a.value, b.value),
        ArithOp::Div => f.mul(a.value, f.inv(b.value).ok_or(Error::DivisionByZero)?),
    };
    Ok(f.elem(v))
}

/// Absolute trace to the prime field.
pub fn ff_trace(a: &FieldElem) -> FieldElem {
    let t = a.desc.trace(a.value);
    a.desc.prime_field().elem(t)
}

impl FieldElem {
    pub fn desc(&self) -> &FieldDesc {
        &self.desc
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.desc.coeffs(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Result<FieldElem> {
        self.desc
            .inv(self.value)
            .map(|v| self.desc.elem(v))
            .ok_or(Error::DivisionByZero)
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        self.desc.elem(self.desc.pow(self.value, e))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.desc.format(self.value))
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {:?}", self, self.desc)
    }
}

macro_rules! elem_op {
    ($tr:ident, $m:ident, $op:expr) => {
        impl std::ops::$tr for &FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: &FieldElem) -> FieldElem {
                ff_arith(self, rhs, $op).expect("field operands must match")
            }
        }
        impl std::ops::$tr for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                ff_arith(&self, &rhs, $op).expect("field operands must match")
            }
        }
    };
}

elem_op!(Add, add, ArithOp::Add);
elem_op!(Sub, sub, ArithOp::Sub);
elem_op!(Mul, mul, ArithOp::Mul);

impl std::ops::Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.desc.elem(self.desc.neg(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64, d: u32) -> FieldDesc {
        field_make(p, d).unwrap()
    }

    #[test]
    fn prime_and_extension_construction() {
        assert_eq!(f(2, 1).order(), 2);
        assert_eq!(f(5, 1).order(), 5);
        // x^2 + x + 1 is the only irreducible quadratic over F_2.
        assert_eq!(f(2, 2).modulus(), &[1, 1, 1]);
        // Over F_3 the least candidate x^2 + 1 is irreducible (no roots).
        assert_eq!(f(3, 2).modulus(), &[1, 0, 1]);
        assert!(matches!(field_make(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(field_make(1, 1), Err(Error::NotPrime(1))));
    }

    #[test]
    fn division_examples() {
        let k = f(5, 1);
        let two = k.elem(2);
        let one = k.one();
        assert_eq!(ff_arith(&two, &one, ArithOp::Div).unwrap().value(), 2);
        assert_eq!(ff_arith(&one, &two, ArithOp::Div).unwrap().value(), 3);
        assert!(matches!(
            ff_arith(&one, &k.zero(), ArithOp::Div),
            Err(Error::DivisionByZero)
        ));
        let other = f(3, 1).one();
        assert!(matches!(
            ff_arith(&one, &other, ArithOp::Add),
            Err(Error::FieldMismatch)
        ));
    }

    #[test]
    fn f4_reduction_and_trace() {
        let k = f(2, 2);
        let alpha = k.elem(k.generator());
        // α·α = α + 1 under α^2 = α + 1.
        assert_eq!((&alpha * &alpha).coeffs(), vec![1, 1]);
        assert_eq!(ff_trace(&k.one()).value(), 0);
        assert_eq!(ff_trace(&alpha).value(), 1);
        assert_eq!(ff_trace(&f(5, 1).elem(3)).value(), 3);
    }

    #[test]
    fn exhaustive_field_axioms_small() {
        for (p, d) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1)] {
            let k = f(p, d);
            let q = k.order();
            for a in 0..q {
                if a != 0 {
                    let ai = k.inv(a).unwrap();
                    assert_eq!(k.mul(a, ai), 1);
                }
                assert_eq!(k.add(a, k.neg(a)), 0);
                for b in 0..q {
                    // Frobenius is additive.
                    assert_eq!(k.frobenius(k.add(a, b)), k.add(k.frobenius(a), k.frobenius(b)));
                    assert_eq!(k.mul(a, b), k.mul(b, a));
                }
            }
        }
    }

    #[test]
    fn trace_is_linear_and_onto() {
        for (p, d) in [
            (2, 2),
            (2, 3),
            (2, 4),
            (3, 2),
            (3, 3),
            (3, 4),
            (5, 2),
            (5, 3),
            (7, 2),
        ] {
            let k = f(p, d);
            let mut image = vec![false; p as usize];
            for a in 0..k.order() {
                let t = k.trace(a);
                assert!((t as u64) < p, "trace lands in the prime field");
                image[t as usize] = true;
                let b = (a * 7 + 3) % k.order();
                assert_eq!(k.trace(k.add(a, b)), k.add(t, k.trace(b)));
                let two = 2 % k.p();
                assert_eq!(k.trace(k.mul(two, a)), k.mul(two, t));
            }
            assert!(image.iter().all(|&x| x));
        }
    }

    #[test]
    fn extension_mul_matches_schoolbook() {
        for (p, d) in [(2, 3), (3, 2), (5, 2), (3, 3)] {
            let k = f(p, d);
            for a in 0..k.order() {
                for b in 0..k.order() {
                    assert_eq!(k.mul(a, b), slow_mul(&k.0, a, b));
                }
            }
        }
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(4), Some((2, 2)));
        assert_eq!(prime_power(5), Some((5, 1)));
        assert_eq!(prime_power(6), None);
    }
}
