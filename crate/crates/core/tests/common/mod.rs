#![allow(dead_code)]

use adelic_core::poly::{Exps, Poly};
use adelic_core::series::LaurentSeries2 as S;
use adelic_core::surface::{Model, RationalFunction, Surface};
use rand::Rng;

/// Every coefficient inside both windows agrees.
pub fn agree(a: &S, b: &S) -> bool {
    let tp = a.t_prec().min(b.t_prec()).min(40);
    let up = a.u_prec().min(b.u_prec()).min(60);
    let lo_t = a.t_lo().min(b.t_lo());
    let mut lo_u = 0;
    for (_, c) in a.levels().chain(b.levels()) {
        if let Some(v) = c.valuation() {
            lo_u = lo_u.min(v);
        }
    }
    for j in lo_t..tp {
        for i in lo_u..up {
            if a.coeff_at(j, i) != b.coeff_at(j, i) {
                return false;
            }
        }
    }
    true
}

/// Exponent vectors of all monomials of the given degree (`P^2`) or
/// bidegree (`P^1 x P^1`, both entries equal to `d`).
pub fn monomials(model: Model, d: u16) -> Vec<Exps> {
    let mut out = Vec::new();
    match model {
        Model::P2 => {
            for i in 0..=d {
                for j in 0..=d - i {
                    out.push([i, j, d - i - j, 0]);
                }
            }
        }
        Model::P1xP1 => {
            for i in 0..=d {
                for j in 0..=d {
                    out.push([i, d - i, j, d - j]);
                }
            }
        }
    }
    out
}

pub fn random_form<R: Rng>(rng: &mut R, s: &Surface, d: u16) -> Poly {
    let q = s.q() as u32;
    loop {
        let terms: Vec<(Exps, u32)> = monomials(s.model, d)
            .into_iter()
            .map(|e| (e, rng.gen_range(0..q)))
            .collect();
        let f = Poly::from_terms(&s.base, s.model.nvars(), &terms);
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn random_function<R: Rng>(rng: &mut R, s: &Surface, max_deg: u16) -> RationalFunction {
    let d = rng.gen_range(1..=max_deg);
    let num = random_form(rng, s, d);
    let den = random_form(rng, s, d);
    RationalFunction::new(s.model, num, den).unwrap()
}

pub fn surfaces() -> Vec<Surface> {
    let mut v = Vec::new();
    for model in [Model::P2, Model::P1xP1] {
        for q in [2, 3, 5] {
            v.push(Surface::new(model, q).unwrap());
        }
    }
    v
}
