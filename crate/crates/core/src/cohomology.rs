//! Line-bundle cohomology of `P^2` and `P^1 x P^1`: closed forms, a Čech
//! count over Laurent monomials, and Riemann-Roch spaces by linear algebra.

use crate::error::{Error, Result};
use crate::fields::field_make;
use crate::linalg::Matrix;
use crate::poly::{Exps, Poly};
use crate::surface::{class_monomials, ord_on_curve, ClassVector, Divisor, Model, RationalFunction};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CohomologyVector {
    pub h0: u64,
    pub h1: u64,
    pub h2: u64,
    pub chi: i64,
}

impl CohomologyVector {
    pub fn new(h0: u64, h1: u64, h2: u64) -> Self {
        CohomologyVector {
            h0,
            h1,
            h2,
            chi: h0 as i64 - h1 as i64 + h2 as i64,
        }
    }
}

impl fmt::Display for CohomologyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}; chi = {})", self.h0, self.h1, self.h2, self.chi)
    }
}

fn binom2(n: i64) -> u64 {
    if n < 2 {
        0
    } else {
        (n * (n - 1) / 2) as u64
    }
}

/// `(h^0, h^1)` of `O(a)` on `P^1`.
fn line_h(a: i64) -> [u64; 2] {
    [
        if a >= 0 { (a + 1) as u64 } else { 0 },
        if a <= -2 { (-a - 1) as u64 } else { 0 },
    ]
}

/// Closed-form cohomology of `O(c)`.
pub fn h_vector(c: ClassVector) -> CohomologyVector {
    match c {
        ClassVector::P2(n) => {
            let h0 = if n >= 0 { binom2(n + 2) } else { 0 };
            let h2 = if n <= -3 { binom2(-n - 1) } else { 0 };
            CohomologyVector::new(h0, 0, h2)
        }
        ClassVector::P1xP1(a, b) => {
            let (x, y) = (line_h(a), line_h(b));
            CohomologyVector::new(x[0] * y[0], x[0] * y[1] + x[1] * y[0], x[1] * y[1])
        }
    }
}

/// Čech cover: for each chart, the variables inverted on it.
fn charts(model: Model) -> Vec<u32> {
    match model {
        Model::P2 => vec![0b001, 0b010, 0b100],
        Model::P1xP1 => vec![0b0101, 0b1001, 0b0110, 0b1010],
    }
}

/// Cohomology of the Čech complex restricted to Laurent monomials whose
/// negative exponents sit exactly on `neg`.
fn local_cech(model: Model, neg: u32) -> Vec<u64> {
    let cover = charts(model);
    let k = field_make(7, 1).expect("7 is prime");
    let m = cover.len();
    let admissible = |set: u32| {
        let inverted = (0..m).filter(|i| set >> i & 1 == 1).fold(0, |a, i| a | cover[i]);
        neg & !inverted == 0
    };
    let by_size: Vec<Vec<u32>> = (1..=m)
        .map(|sz| {
            (1u32..1 << m)
                .filter(|s| s.count_ones() as usize == sz && admissible(*s))
                .collect()
        })
        .collect();
    let mut ranks = vec![0usize; m + 1];
    for deg in 0..m - 1 {
        let (src, dst) = (&by_size[deg], &by_size[deg + 1]);
        if src.is_empty() || dst.is_empty() {
            continue;
        }
        let rows: Vec<Vec<u32>> = src
            .iter()
            .map(|&i| {
                dst.iter()
                    .map(|&j| {
                        if i & j != i {
                            return 0;
                        }
                        let added = (j & !i).trailing_zeros();
                        let pos = (j & ((1 << added) - 1)).count_ones();
                        if pos % 2 == 0 {
                            1
                        } else {
                            k.neg(1)
                        }
                    })
                    .collect()
            })
            .collect();
        ranks[deg + 1] = Matrix::from_rows(&k, dst.len(), &rows).rank();
    }
    (0..m)
        .map(|deg| (by_size[deg].len() - ranks[deg + 1] - ranks[deg]) as u64)
        .collect()
}

/// Number of exponent vectors on `vars` with total `d`, negative exactly on
/// `neg`; `None` when infinite.
fn count_exponents(vars: &[usize], neg: u32, d: i64) -> Option<u64> {
    let negs = vars.iter().filter(|&&v| neg >> v & 1 == 1).count();
    if negs != 0 && negs != vars.len() {
        return None;
    }
    fn walk(left: usize, d: i64, negative: bool) -> u64 {
        if left == 1 {
            return u64::from(if negative { d <= -1 } else { d >= 0 });
        }
        let range: Box<dyn Iterator<Item = i64>> = if negative {
            Box::new((d + left as i64 - 1).min(-1)..=-1)
        } else {
            Box::new(0..=d.max(-1))
        };
        range.map(|e| walk(left - 1, d - e, negative)).sum()
    }
    Some(walk(vars.len(), d, negs != 0))
}

/// Cohomology of `O(c)` summed over Laurent monomials from the Čech complex
/// of the standard affine cover.
pub fn cech_h_vector(c: ClassVector) -> Result<CohomologyVector> {
    let model = c.model();
    let n = model.nvars();
    let groups: Vec<(Vec<usize>, i64)> = match c {
        ClassVector::P2(d) => vec![(vec![0, 1, 2], d)],
        ClassVector::P1xP1(a, b) => vec![(vec![0, 1], a), (vec![2, 3], b)],
    };
    let mut h = [0u64; 3];
    for neg in 0u32..1 << n {
        let local = local_cech(model, neg);
        if local.iter().all(|&x| x == 0) {
            continue;
        }
        let mut count = 1u64;
        for (vars, d) in &groups {
            count *= count_exponents(vars, neg, *d).ok_or_else(|| {
                Error::Unsupported(format!(
                    "infinite monomial family with cohomology, pattern {neg:b}"
                ))
            })?;
        }
        for (deg, &x) in local.iter().enumerate() {
            if deg > 2 && x * count != 0 {
                return Err(Error::Unsupported(format!("Čech degree {deg} is nonzero")));
            }
            if deg <= 2 {
                h[deg] += x * count;
            }
        }
    }
    Ok(CohomologyVector::new(h[0], h[1], h[2]))
}

fn product(model: Model, k: &crate::fields::FieldDesc, d: &Divisor) -> Poly {
    d.components()
        .fold(Poly::constant(k, model.nvars(), 1), |acc, (c, m)| {
            acc.mul(&c.poly().pow(m as u32))
        })
}

/// Basis of `{f : div(f) + D >= 0}`. With `D = P - N` split into effective
/// parts, `f · eq(P)` is a form of the class of `P` divisible by `eq(N)`.
pub fn rr_space(s: &crate::surface::Surface, d: &Divisor) -> Result<Vec<RationalFunction>> {
    let model = d.model();
    let k = &s.base;
    let (pos, neg) = (d.positive_part(), d.negative_part());
    let g = product(model, k, &pos);
    let np = product(model, k, &neg);
    let target = class_monomials(model, pos.class());
    let index: HashMap<Exps, usize> = target.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let rows: Vec<Vec<u32>> = class_monomials(model, d.class())
        .into_iter()
        .map(|e| {
            let f = np.mul(&Poly::monomial(k, model.nvars(), e, 1));
            let mut row = vec![0; target.len()];
            for (e, &c) in f.terms() {
                row[index[e]] = c;
            }
            row
        })
        .collect();
    if rows.is_empty() {
        return Ok(Vec::new());
    }
    let basis = Matrix::from_rows(k, target.len(), &rows).row_space();
    let mut out = Vec::with_capacity(basis.len());
    for v in basis {
        let terms: Vec<(Exps, u32)> = target.iter().zip(&v).map(|(e, &c)| (*e, c)).collect();
        let f = RationalFunction::new(model, Poly::from_terms(k, model.nvars(), &terms), g.clone())?;
        for (c, m) in d.components() {
            if ord_on_curve(&f, c) + m < 0 {
                return Err(Error::Unsupported(format!(
                    "basis element {f} has a pole beyond {d}"
                )));
            }
        }
        out.push(f);
    }
    Ok(out)
}

/// `h^0(C) - h^0(H) = h^2(K - C) - h^2(K - H)`.
pub fn serre_residual_check(c: ClassVector, h: ClassVector, omega: ClassVector) -> bool {
    let lhs = h_vector(c).h0 as i64 - h_vector(h).h0 as i64;
    let rhs = h_vector(omega - c).h2 as i64 - h_vector(omega - h).h2 as i64;
    lhs == rhs
}

/// `chi(S) = chi(K - S)`.
pub fn chi_symmetry_check(s: ClassVector, omega: ClassVector) -> bool {
    h_vector(s).chi == h_vector(omega - s).chi
}

/// All classes with entries in `lo..=hi`.
pub fn class_range(model: Model, lo: i64, hi: i64) -> Vec<ClassVector> {
    match model {
        Model::P2 => (lo..=hi).map(ClassVector::P2).collect(),
        Model::P1xP1 => (lo..=hi)
            .flat_map(|a| (lo..=hi).map(move |b| ClassVector::P1xP1(a, b)))
            .collect(),
    }
}
