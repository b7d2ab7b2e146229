mod common;

use adelic_core::cohomology::{
    cech_h_vector, chi_symmetry_check, class_range, h_vector, rr_space, serre_residual_check,
    CohomologyVector,
};
use adelic_core::surface::{ord_on_curve, ClassVector, Curve, Divisor, Model, RationalFunction, Surface};
use common::random_function;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Counts monomials of degree `n` in three variables by enumeration.
fn monomial_count(n: i64) -> u64 {
    let mut c = 0;
    for a in 0..=n.max(0) {
        for b in 0..=n.max(0) {
            if n - a - b >= 0 {
                c += 1;
            }
        }
    }
    if n < 0 {
        0
    } else {
        c
    }
}

#[test]
fn closed_form_examples() {
    assert_eq!(h_vector(ClassVector::P2(2)), CohomologyVector::new(6, 0, 0));
    assert_eq!(h_vector(ClassVector::P2(2)).chi, 6);
    assert_eq!(h_vector(ClassVector::P2(-4)), CohomologyVector::new(0, 0, 3));
    let v = h_vector(ClassVector::P1xP1(1, -2));
    assert_eq!((v.h0, v.h1, v.h2, v.chi), (0, 2, 0, -2));
    for n in -8..=8 {
        assert_eq!(h_vector(ClassVector::P2(n)).h0, monomial_count(n));
    }
}

#[test]
fn cech_count_agrees_with_closed_form() {
    for model in [Model::P2, Model::P1xP1] {
        for c in class_range(model, -8, 8) {
            assert_eq!(cech_h_vector(c).unwrap(), h_vector(c), "{c}");
        }
    }
    assert_eq!(cech_h_vector(ClassVector::P2(-4)).unwrap().h2, 3);
}

#[test]
fn serre_and_chi_identities() {
    assert!(serre_residual_check(
        ClassVector::P2(2),
        ClassVector::P2(0),
        ClassVector::P2(-3)
    ));
    assert_eq!(h_vector(ClassVector::P2(-5)).h2, 6);
    assert!(serre_residual_check(
        ClassVector::P2(1),
        ClassVector::P2(1),
        ClassVector::P2(-3)
    ));
    let k = ClassVector::P1xP1(-2, -2);
    assert!(serre_residual_check(
        ClassVector::P1xP1(1, 1),
        ClassVector::P1xP1(0, 0),
        k
    ));
    assert_eq!(h_vector(ClassVector::P1xP1(-3, -3)).h2, 4);
    assert!(chi_symmetry_check(ClassVector::P2(0), ClassVector::P2(-3)));
    assert_eq!(h_vector(ClassVector::P2(-1)).chi, 0);
    assert!(chi_symmetry_check(ClassVector::P2(-1), ClassVector::P2(-3)));
    assert!(chi_symmetry_check(ClassVector::P1xP1(-1, -1), k));
    for model in [Model::P2, Model::P1xP1] {
        let k = model.canonical_class();
        let range = class_range(model, -6, 6);
        for &c in &range {
            assert!(chi_symmetry_check(c, k), "{c}");
            for &h in &range {
                assert!(serre_residual_check(c, h, k), "{c} {h}");
            }
        }
    }
}

#[test]
fn riemann_roch_space_examples() {
    let s = Surface::new(Model::P2, 3).unwrap();
    let z = s.curve("Z").unwrap();
    let basis = rr_space(&s, &Divisor::single(&z, 2)).unwrap();
    assert_eq!(basis.len(), 6);
    assert!(basis.iter().all(|f| f.den().to_string() == "Z^2"));
    assert!(rr_space(&s, &Divisor::single(&s.curve("X + Y").unwrap(), -1))
        .unwrap()
        .is_empty());
    let conic = s.curve("YZ - X^2").unwrap();
    let d = Divisor::from_pairs(Model::P2, &[(conic, 1), (z, -2)]);
    let basis = rr_space(&s, &d).unwrap();
    assert_eq!(basis.len(), 1);
    assert!(basis[0].divisor().unwrap().add(&d).is_effective());
}

fn fixture_divisors(s: &Surface) -> Vec<Divisor> {
    let texts: &[&str] = match s.model {
        Model::P2 => &["X", "Y", "Z", "X + Y + Z", "YZ - X^2", "Y^2Z - X^3 - XZ^2 - Z^3"],
        Model::P1xP1 => &[
            "X0",
            "X1",
            "Y0",
            "Y1",
            "X0*Y1 - X1*Y0",
            "X0*Y0^2 + X1*Y1^2 + X0*Y0*Y1",
        ],
    };
    let curves: Vec<Curve> = texts.iter().filter_map(|t| s.curve(t).ok()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(s.q() + 100);
    let mut out = Vec::new();
    for _ in 0..60 {
        let mut d = Divisor::zero(s.model);
        for c in &curves {
            if rng.gen_bool(0.4) {
                d.add_component(c, rng.gen_range(-3..=3));
            }
        }
        out.push(d);
    }
    out
}

/// `div(f) + D >= 0`, checked without factoring the numerator: poles of
/// `f` lie on components of `D` and are bounded by their multiplicities.
fn within_bound(f: &RationalFunction, d: &Divisor) -> bool {
    let mut den = f.den().clone();
    for (c, m) in d.components() {
        if ord_on_curve(f, c) + m < 0 {
            return false;
        }
        den = den.split_power(c.poly()).1;
    }
    den.is_constant()
}

fn in_range(c: ClassVector) -> bool {
    match c {
        ClassVector::P2(n) => (-6..=6).contains(&n),
        ClassVector::P1xP1(a, b) => (-4..=4).contains(&a) && (-4..=4).contains(&b),
    }
}

#[test]
fn riemann_roch_dimension_matches_h0() {
    let mut checked = 0;
    for s in common::surfaces() {
        for d in fixture_divisors(&s) {
            if !in_range(d.class()) {
                continue;
            }
            let basis = rr_space(&s, &d).unwrap();
            assert_eq!(basis.len() as u64, h_vector(d.class()).h0, "{d}");
            for f in &basis {
                assert!(within_bound(f, &d), "{f} for {d}");
            }
            checked += 1;
        }
    }
    assert!(checked > 150, "{checked}");
}

#[test]
fn principal_shifts_preserve_h0() {
    for s in common::surfaces() {
        let mut rng = ChaCha8Rng::seed_from_u64(s.q() + 200);
        for d in fixture_divisors(&s)
            .into_iter()
            .filter(|d| in_range(d.class()))
            .take(12)
        {
            let f = random_function(&mut rng, &s, 1);
            let moved = d.add(&f.divisor().unwrap());
            let a = rr_space(&s, &d).unwrap().len();
            let b = rr_space(&s, &moved).unwrap().len();
            assert_eq!(a, b, "{d} vs {moved}");
        }
    }
}
