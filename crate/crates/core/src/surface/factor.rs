//! Factorization of (bi)homogeneous forms by exhaustive factor search.

use super::{check_form, form_class, ClassVector, Model};
use crate::error::{Error, Result};
use crate::poly::{Exps, Poly, MAX_VARS};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::Mutex;

/// Largest number of candidate factors tried for a single shape.
const SEARCH_LIMIT: u64 = 400_000;

type Factors = Vec<(Poly, u32)>;

static CACHE: Lazy<Mutex<HashMap<(Model, u32, String), Factors>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Exponent vectors of the monomials of a class, sorted; empty for
/// non-effective classes.
pub fn class_monomials(model: Model, shape: ClassVector) -> Vec<Exps> {
    if shape.components().iter().any(|&c| c < 0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    match (model, shape) {
        (Model::P2, ClassVector::P2(d)) => {
            let d = d as u16;
            for i in 0..=d {
                for j in 0..=d - i {
                    out.push([i, j, d - i - j, 0]);
                }
            }
        }
        (Model::P1xP1, ClassVector::P1xP1(a, b)) => {
            let (a, b) = (a as u16, b as u16);
            for i in 0..=a {
                for j in 0..=b {
                    out.push([i, a - i, j, b - j]);
                }
            }
        }
        _ => unreachable!(),
    }
    out.sort();
    out
}

fn shapes(model: Model, total: ClassVector) -> Vec<ClassVector> {
    let mut v = match total {
        ClassVector::P2(d) => (1..=d / 2).map(ClassVector::P2).collect::<Vec<_>>(),
        ClassVector::P1xP1(a, b) => {
            let mut v = Vec::new();
            for i in 0..=a {
                for j in 0..=b {
                    if (i, j) != (0, 0) && 2 * (i + j) <= a + b {
                        v.push(ClassVector::P1xP1(i, j));
                    }
                }
            }
            v
        }
    };
    v.sort_by_key(|c| {
        let cs = c.components();
        (cs.iter().sum::<i64>(), cs)
    });
    debug_assert!(v.iter().all(|c| c.model() == model));
    v
}

fn fits(shape: ClassVector, rest: ClassVector) -> bool {
    let (s, r) = (shape.components(), rest.components());
    s.iter().zip(&r).all(|(a, b)| a <= b) && 2 * s.iter().sum::<i64>() <= r.iter().sum::<i64>()
}

/// Points of `P(F_p)` (or `P^1 x P^1 (F_p)`) used to discard candidates.
fn rational_points(model: Model, p: u32) -> Vec<Vec<u32>> {
    let line: Vec<[u32; 2]> = (0..p).map(|x| [1, x]).chain([[0, 1]]).collect();
    match model {
        Model::P2 => {
            let mut v = Vec::new();
            for y in 0..p {
                for z in 0..p {
                    v.push(vec![1, y, z]);
                }
                v.push(vec![0, 1, y]);
            }
            v.push(vec![0, 0, 1]);
            v
        }
        Model::P1xP1 => {
            let mut v = Vec::new();
            for a in &line {
                for b in &line {
                    v.push(vec![a[0], a[1], b[0], b[1]]);
                }
            }
            v
        }
    }
}

/// Monic irreducible factors with multiplicities, ordered by degree and then
/// by coefficients. The scalar content is dropped.
pub fn factor_form(model: Model, f: &Poly) -> Result<Vec<(Poly, u32)>> {
    check_form(model, f)?;
    let k = f.field().clone();
    let p = k.p();
    let key = (model, p, f.monic().to_string());
    if let Some(v) = CACHE.lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let mut rest = f.monic();
    let mut out: Factors = Vec::new();
    let pts = rational_points(model, p);
    for shape in shapes(model, form_class(model, f)) {
        if !fits(shape, form_class(model, &rest)) {
            continue;
        }
        let monos = class_monomials(model, shape);
        let n = monos.len() as u32;
        let count = (p as u64).saturating_pow(n) / (p as u64 - 1).max(1);
        if count > SEARCH_LIMIT {
            return Err(Error::Unsupported(format!(
                "factor search for {f} needs {count} candidates of class {shape}"
            )));
        }
        let live: Vec<&Vec<u32>> = pts.iter().filter(|x| rest.eval(&k, x) != 0).collect();
        for lead in 0..monos.len() {
            let lower = lead as u32;
            let mut digits = vec![0u32; lead];
            'cand: loop {
                let mut terms: Vec<(Exps, u32)> = vec![(monos[lead], 1)];
                for (i, &d) in digits.iter().enumerate() {
                    if d != 0 {
                        terms.push((monos[i], d));
                    }
                }
                let g = Poly::from_terms(&k, model.nvars(), &terms);
                let ok = !live.iter().any(|x| g.eval(&k, x) == 0);
                if ok && fits(shape, form_class(model, &rest)) {
                    let (e, q) = rest.split_power(&g);
                    if e > 0 {
                        out.push((g, e));
                        rest = q;
                    }
                }
                let mut i = 0;
                loop {
                    if i as u32 == lower {
                        break 'cand;
                    }
                    digits[i] += 1;
                    if digits[i] < p {
                        break;
                    }
                    digits[i] = 0;
                    i += 1;
                }
            }
        }
    }
    if !rest.is_constant() {
        out.push((rest.monic(), 1));
    }
    out.sort();
    debug_assert!(out.iter().all(|(g, _)| g.nvars() <= MAX_VARS));
    CACHE.lock().unwrap().insert(key, out.clone());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::field_make;

    fn poly(p: u64, model: Model, s: &str) -> Poly {
        Poly::parse(&field_make(p, 1).unwrap(), model.names(), s).unwrap()
    }

    #[test]
    fn splits_products_of_lines_and_conics() {
        let f = poly(2, Model::P2, "X^2+XY");
        let fs = factor_form(Model::P2, &f).unwrap();
        let names: Vec<String> = fs.iter().map(|(g, _)| g.to_string()).collect();
        assert_eq!(names, vec!["X", "X + Y"]);
        let conic = poly(5, Model::P2, "YZ-X^2");
        assert_eq!(factor_form(Model::P2, &conic).unwrap().len(), 1);
        let prod = conic
            .mul(&poly(5, Model::P2, "X+2Z"))
            .mul(&poly(5, Model::P2, "X+2Z"));
        let fs = factor_form(Model::P2, &prod).unwrap();
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0].1, 2);
        assert_eq!(fs[1].0, conic.monic());
    }

    #[test]
    fn bihomogeneous_factors() {
        let f = poly(3, Model::P1xP1, "X0*Y0*Y1 + X1*Y0^2");
        let fs = factor_form(Model::P1xP1, &f).unwrap();
        assert_eq!(fs.len(), 2);
        let diag = poly(3, Model::P1xP1, "X0*Y1 - X1*Y0");
        assert_eq!(factor_form(Model::P1xP1, &diag).unwrap(), vec![(diag.monic(), 1)]);
    }
}
