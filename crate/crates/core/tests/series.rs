use adelic_core::error::Var;
use adelic_core::fields::{field_make, FieldDesc};
use adelic_core::series::{
    ls2_arith, ls2_derive, ls2_substitute, ls2_valuation, parse_series, res2, LaurentSeries2 as S,
    LocalForm2, Ls2Op, INF,
};
use proptest::prelude::*;

fn k(p: u64) -> FieldDesc {
    field_make(p, 1).unwrap()
}

/// Every coefficient inside both windows agrees.
fn agree(a: &S, b: &S) -> bool {
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

#[test]
fn geometric_series() {
    let f = k(3);
    let a = S::from_terms(&f, &[(0, 0, 1), (1, 0, 2)], 4, INF);
    let inv = ls2_arith(&a, &a, Ls2Op::InvOfA).unwrap();
    assert_eq!(inv.t_prec(), 4);
    for j in 0..4 {
        assert_eq!(inv.coeff_at(j, 0), Some(1));
    }
}

#[test]
fn monomials_cancel() {
    let f = k(5);
    let a = S::monomial(&f, 1, -1, 1, INF, INF);
    let b = S::monomial(&f, 1, 1, -1, INF, INF);
    let p = a.mul(&b);
    assert_eq!(p, S::constant(&f, 1));
    assert!(!p.is_exact_zero());
}

#[test]
fn inverse_of_t_times_unit() {
    let f = k(5);
    let a = S::from_terms(&f, &[(1, 0, 1), (1, 1, 1)], 4, 3);
    let inv = a.inv().unwrap();
    assert_eq!(inv.valuation().unwrap(), (-1, 0));
    assert_eq!(inv.coeff_at(-1, 0), Some(1));
    assert_eq!(inv.coeff_at(-1, 1), Some(4));
    assert_eq!(inv.coeff_at(-1, 2), Some(1));
    let back = inv.mul(&a);
    assert!(agree(&back, &S::constant(&f, 1)));
    assert!(back.u_prec() >= 3 && back.t_prec() >= 2);
}

#[test]
fn substitution_examples() {
    let f = k(7);
    let t_inv = S::monomial(&f, 1, -1, 0, 4, 6);
    let u = S::monomial(&f, 1, 0, 1, INF, INF);
    let t = S::monomial(&f, 1, 1, 0, INF, INF);
    let t_img = S::from_terms(&f, &[(1, 0, 1), (1, 1, 1)], INF, INF);
    let g = ls2_substitute(&t_inv, &u, &t_img).unwrap();
    // t^-1 (1 - u + u^2 - ...)
    for i in 0..5 {
        let want = if i % 2 == 0 { 1 } else { 6 };
        assert_eq!(g.coeff_at(-1, i), Some(want));
    }
    assert_eq!(g.coeff_at(0, 0), Some(0));

    let h = S::from_terms(&f, &[(-2, 3, 2), (0, -1, 5), (1, 2, 1)], 3, 5);
    assert_eq!(ls2_substitute(&h, &u, &t).unwrap(), h);

    let u_plus_t = S::from_terms(&f, &[(0, 1, 1), (1, 0, 1)], INF, INF);
    assert_eq!(ls2_substitute(&u, &u_plus_t, &t).unwrap(), u_plus_t);
}

#[test]
fn bad_parameter_images_are_rejected() {
    let f = k(3);
    let u = S::monomial(&f, 1, 0, 1, INF, INF);
    let t = S::monomial(&f, 1, 1, 0, INF, INF);
    let x = S::monomial(&f, 1, -1, 0, 4, 4);
    assert!(ls2_substitute(&x, &t, &t).is_err());
    assert!(ls2_substitute(&x, &u, &u).is_err());
    assert!(ls2_substitute(&x, &u, &S::constant(&f, 1)).is_err());
}

#[test]
fn derivative_examples() {
    let f = k(5);
    let t2 = S::monomial(&f, 1, 2, 0, INF, INF);
    assert_eq!(ls2_derive(&t2, Var::T), S::monomial(&f, 2, 1, 0, INF, INF));
    let up = S::monomial(&f, 1, 0, 5, INF, INF);
    assert!(ls2_derive(&up, Var::U).is_exact_zero());
    let x = S::monomial(&f, 1, -1, 1, 6, 6);
    let d = ls2_derive(&x, Var::T);
    assert_eq!(d.coeff_at(-2, 1), Some(4));
    assert_eq!(d.t_prec(), 5);
}

#[test]
fn valuation_examples() {
    let f = k(3);
    let a = S::from_terms(&f, &[(-3, 2, 1), (0, 0, 1)], 4, 8);
    assert_eq!(ls2_valuation(&a).unwrap(), (-3, 2));
    assert_eq!(ls2_valuation(&S::constant(&f, 1)).unwrap(), (0, 0));
    let b = S::from_terms(&f, &[(1, -1, 1), (1, 0, 1)], 4, 8);
    assert_eq!(ls2_valuation(&b).unwrap(), (1, -1));
    assert!(ls2_valuation(&S::from_terms(&f, &[], 3, 3)).is_err());
}

#[test]
fn residue_examples() {
    let f = k(3);
    let w = S::monomial(&f, 1, -1, -1, INF, INF);
    assert_eq!(res2(&LocalForm2::new(w)).unwrap().value(), 1);
    for (a, b) in [(0, -1), (-1, 0), (-2, -1), (3, 2)] {
        let m = S::monomial(&f, 1, b, a, INF, INF);
        assert_eq!(res2(&LocalForm2::new(m)).unwrap().value(), 0);
    }
    let one_plus_u = S::from_terms(&f, &[(0, 0, 1), (0, 1, 1)], INF, 8);
    let w = one_plus_u
        .inv()
        .unwrap()
        .mul(&S::monomial(&f, 1, -1, -1, INF, INF));
    assert_eq!(res2(&LocalForm2::new(w)).unwrap().value(), 1);
    let short = S::monomial(&f, 1, -2, 0, -1, 4);
    assert!(res2(&LocalForm2::new(short)).is_err());
}

#[test]
fn text_round_trip_with_zero_levels() {
    let f = field_make(3, 2).unwrap();
    let a = S::from_terms(&f, &[(-1, 2, 3), (2, 0, 7)], 5, 6);
    let z = S::from_terms(&f, &[(1, 6, 1)], 5, 6);
    let s = a.add(&z.truncate(5, 6).add(&S::from_terms(&f, &[(1, 9, 1)], 5, 6)));
    let text = s.to_string();
    assert!(text.contains("t^-1*u^2: a"));
    assert_eq!(parse_series(&f, &text).unwrap(), s);
}

fn series_strategy(
    p: u64,
    t: std::ops::Range<i64>,
    u: std::ops::Range<i64>,
) -> impl Strategy<Value = Vec<(i64, i64, u32)>> {
    prop::collection::vec((t, u, 1..p as u32), 1..8)
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms_within_windows(
        p in prime(),
        (x, y, z) in (0u64..1).prop_flat_map(|_| {
            (series_strategy(5, -2..3, -2..4),
             series_strategy(5, -2..3, -2..4),
             series_strategy(5, -2..3, -2..4))
        }),
        tp in 3i64..6,
        up in 4i64..8,
    ) {
        let f = k(p);
        let red = |v: &Vec<(i64, i64, u32)>| -> Vec<(i64, i64, u32)> {
            v.iter().map(|&(j, i, c)| (j, i, c % p as u32)).collect()
        };
        let a = S::from_terms(&f, &red(&x), tp, up);
        let b = S::from_terms(&f, &red(&y), tp + 1, up - 1);
        let c = S::from_terms(&f, &red(&z), tp, up + 1);
        prop_assert!(agree(&a.mul(&b), &b.mul(&a)));
        prop_assert!(agree(&a.add(&b), &b.add(&a)));
        prop_assert!(agree(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c))));
        prop_assert!(agree(&a.mul(&b.add(&c)), &a.mul(&b).add(&a.mul(&c))));
        prop_assert!(agree(&a.sub(&a), &S::exact_zero(&f).truncate(tp, up)));
        if let Ok(ai) = a.inv() {
            prop_assert!(agree(&a.mul(&ai), &S::constant(&f, 1)));
        }
    }

    #[test]
    fn residue_of_derivatives_vanishes(
        p in prime(),
        x in series_strategy(5, -3..3, -4..4),
    ) {
        let f = k(p);
        let terms: Vec<_> = x.iter().map(|&(j, i, c)| (j, i, c % p as u32)).collect();
        let g = S::from_terms(&f, &terms, 4, 6);
        for var in [Var::U, Var::T] {
            let d = ls2_derive(&g, var);
            prop_assert_eq!(res2(&LocalForm2::new(d)).unwrap().value(), 0);
        }
    }

    #[test]
    fn residue_is_invariant_under_parameter_change(
        p in prime(),
        x in series_strategy(5, -2..2, -3..3),
        a in prop::collection::vec(0u32..5, 4),
        b in prop::collection::vec(0u32..5, 4),
        lead in 1u32..5,
    ) {
        let f = k(p);
        let pp = p as u32;
        let lead = lead % pp;
        prop_assume!(lead != 0);
        let terms: Vec<_> = x.iter().map(|&(j, i, c)| (j, i, c % pp)).collect();
        let g = S::from_terms(&f, &terms, 2, 6);
        // u = U (lead + a0 U) + a1 T + a2 U T,  t = T (1 + b0 U + b1 T) + b2 U T^2
        let u_img = S::from_terms(
            &f,
            &[(0, 1, lead), (0, 2, a[0] % pp), (1, 0, a[1] % pp), (1, 1, a[2] % pp), (2, 0, a[3] % pp)],
            INF,
            INF,
        );
        let t_img = S::from_terms(
            &f,
            &[(1, 0, 1), (1, 1, b[0] % pp), (2, 0, b[1] % pp), (2, 1, b[2] % pp), (3, 2, b[3] % pp)],
            INF,
            INF,
        );
        let h = ls2_substitute(&g, &u_img, &t_img).unwrap();
        let jac = ls2_derive(&u_img, Var::U)
            .mul(&ls2_derive(&t_img, Var::T))
            .sub(&ls2_derive(&u_img, Var::T).mul(&ls2_derive(&t_img, Var::U)));
        let before = res2(&LocalForm2::new(g.clone())).unwrap();
        let after = res2(&LocalForm2::new(h.mul(&jac))).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn larger_windows_never_change_reported_coefficients(
        p in prime(),
        x in series_strategy(5, -2..3, -2..4),
        y in series_strategy(5, -2..3, -2..4),
        extra in series_strategy(5, 3..6, 4..9),
    ) {
        let f = k(p);
        let pp = p as u32;
        let red = |v: &Vec<(i64, i64, u32)>| -> Vec<(i64, i64, u32)> {
            v.iter().map(|&(j, i, c)| (j, i, c % pp)).collect()
        };
        let mut xl = red(&x);
        xl.extend(red(&extra));
        let small = S::from_terms(&f, &red(&x), 3, 4);
        let large = S::from_terms(&f, &xl, 6, 9);
        prop_assert!(agree(&small, &large));
        let b = S::from_terms(&f, &red(&y), 5, 8);
        prop_assert!(agree(&small.mul(&b), &large.mul(&b)));
        if let (Ok(si), Ok(li)) = (small.inv(), large.inv()) {
            prop_assert!(agree(&si, &li));
        }
        let u_img = S::from_terms(&f, &[(0, 1, 1), (1, 0, 1)], INF, INF);
        let t_img = S::from_terms(&f, &[(1, 0, 1), (1, 1, 1)], INF, INF);
        let s1 = ls2_substitute(&small, &u_img, &t_img).unwrap();
        let s2 = ls2_substitute(&large, &u_img, &t_img).unwrap();
        prop_assert!(agree(&s1, &s2));
    }

    #[test]
    fn text_form_round_trips(
        p in prime(),
        x in series_strategy(5, -3..3, -3..5),
        tp in 1i64..5,
        up in 0i64..6,
    ) {
        let f = k(p);
        let terms: Vec<_> = x.iter().map(|&(j, i, c)| (j, i, c % p as u32)).collect();
        let s = S::from_terms(&f, &terms, tp, up);
        prop_assert_eq!(parse_series(&f, &s.to_string()).unwrap(), s);
    }
}
