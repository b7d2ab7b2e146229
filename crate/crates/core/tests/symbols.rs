mod common;

use adelic_core::error::Error;
use adelic_core::fields::FieldDesc;
use adelic_core::series::{LaurentSeries2 as S, INF};
use adelic_core::surface::{flag_make, ClassVector, ClosedPoint, Divisor, Model, RationalFunction, Surface};
use adelic_core::symbols::{
    bisymbol, bisymbol_unsigned, commutator_pairing, idele_j, intersection_number, intersection_oracle,
    symbol_flags, tame_t, IdeleKind, QPower,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field(p: u64) -> FieldDesc {
    adelic_core::fields::field_make(p, 1).unwrap()
}

#[test]
fn tame_symbol_examples() {
    let k = field(3);
    let t = S::monomial(&k, 1, 1, 0, INF, INF);
    let u = S::monomial(&k, 1, 0, 1, INF, INF);
    let r = tame_t(&t, &u).unwrap();
    assert_eq!(r.valuation(), Some(-1));
    assert_eq!(r.coeff(-1), Some(1));
    let r = tame_t(&t, &t).unwrap();
    assert_eq!(r.coeff(0), Some(2));
    assert_eq!(r.valuation(), Some(0));
    let a = S::from_terms(&k, &[(0, 0, 1), (1, 1, 2)], 4, 4);
    let b = S::from_terms(&k, &[(0, 0, 2), (2, 0, 1)], 4, 4);
    let r = tame_t(&a, &b).unwrap();
    assert_eq!(r.coeff(0), Some(1));
    assert_eq!(r.valuation(), Some(0));

    assert_eq!(bisymbol(&t, &u).unwrap(), -1);
    assert_eq!(bisymbol(&u, &t).unwrap(), 1);
    assert_eq!(bisymbol(&t, &t).unwrap(), 0);
}

fn random_unit_series(rng: &mut ChaCha8Rng, k: &FieldDesc) -> S {
    let q = k.order();
    let j = rng.gen_range(-3..4);
    let i = rng.gen_range(-3..4);
    let mut terms = vec![(j, i, rng.gen_range(1..q))];
    for _ in 0..5 {
        terms.push((
            j + rng.gen_range(0..3),
            i + rng.gen_range(1..4),
            rng.gen_range(0..q),
        ));
        terms.push((
            j + rng.gen_range(1..3),
            i + rng.gen_range(-3..4),
            rng.gen_range(0..q),
        ));
    }
    S::from_terms(k, &terms, j + 4, i + 12)
}

#[test]
fn bisymbol_is_antisymmetric_and_bimultiplicative() {
    for p in [2, 3, 5] {
        let k = field(p);
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        for _ in 0..100 {
            let f = random_unit_series(&mut rng, &k);
            let g = random_unit_series(&mut rng, &k);
            let h = random_unit_series(&mut rng, &k);
            let fh = bisymbol(&f, &h).unwrap();
            assert_eq!(fh, -bisymbol(&h, &f).unwrap());
            assert_eq!(bisymbol(&f, &f).unwrap(), 0);
            let lhs = bisymbol(&f.mul(&g), &h).unwrap();
            assert_eq!(lhs, fh + bisymbol(&g, &h).unwrap());
            let rhs = bisymbol(&f, &g.mul(&h)).unwrap();
            assert_eq!(rhs, bisymbol(&f, &g).unwrap() + fh);
            assert_eq!(bisymbol_unsigned(&f, &g).unwrap(), bisymbol(&f, &g).unwrap());
            // u- and t-orders of the leading terms determine the symbol
            let (a, va) = f.valuation().unwrap();
            let (b, vb) = g.valuation().unwrap();
            assert_eq!(bisymbol(&f, &g).unwrap(), b * va - a * vb);
        }
    }
}

fn p2(q: u64) -> Surface {
    Surface::new(Model::P2, q).unwrap()
}

fn div(s: &Surface, parts: &[(&str, i64)]) -> Divisor {
    let pairs: Vec<_> = parts.iter().map(|(t, m)| (s.curve(t).unwrap(), *m)).collect();
    Divisor::from_pairs(s.model, &pairs)
}

#[test]
fn idele_choices() {
    let s = p2(3);
    let y = s.curve("Y").unwrap();
    let fl = flag_make(&ClosedPoint::rational(s.model, &s.base, &[0, 0, 1]).unwrap(), &y).unwrap();
    let e = div(&s, &[("Y", 1)]);
    let rule = idele_j(&e, IdeleKind::AlongCurves);
    assert_eq!(
        rule.at_flag(&fl).unwrap(),
        RationalFunction::parse(&s, "Y", "Z").unwrap()
    );
    let zero = idele_j(&Divisor::zero(s.model), IdeleKind::AlongCurves);
    assert_eq!(zero.at_flag(&fl).unwrap(), RationalFunction::constant(&s, 1));
    let twice = rule.mul(&rule).unwrap();
    assert_eq!(twice.divisor, div(&s, &[("Y", 2)]));
    assert_eq!(
        twice.at_flag(&fl).unwrap(),
        RationalFunction::parse(&s, "Y^2", "Z^2").unwrap()
    );
}

#[test]
fn commutator_examples() {
    let s = p2(5);
    let c = div(&s, &[("X", 1)]);
    let h = div(&s, &[("Y", 1)]);
    let g1 = idele_j(&c, IdeleKind::AtPoints);
    let g2 = idele_j(&h, IdeleKind::AlongCurves);
    let flags = symbol_flags(&c, &h).unwrap();
    assert_eq!(commutator_pairing(&g1, &g2, &flags).unwrap(), QPower::new(-1));
    let g0 = idele_j(&Divisor::zero(s.model), IdeleKind::AlongCurves);
    assert_eq!(commutator_pairing(&g1, &g0, &flags).unwrap(), QPower::ONE);
    assert!(matches!(
        commutator_pairing(&g1, &g2, &[]),
        Err(Error::MissingFlags(_))
    ));
    let conic = div(&s, &[("YZ - X^2", 1)]);
    for line in ["Y - Z", "Y"] {
        let l = div(&s, &[(line, 1)]);
        let flags = symbol_flags(&conic, &l).unwrap();
        let pair = commutator_pairing(
            &idele_j(&conic, IdeleKind::AtPoints),
            &idele_j(&l, IdeleKind::AlongCurves),
            &flags,
        );
        assert_eq!(pair.unwrap(), QPower::new(-2));
    }
    let g = idele_j(&c.add(&h), IdeleKind::AlongCurves);
    let mut flags = symbol_flags(&c, &h).unwrap();
    flags.extend(symbol_flags(&h, &c).unwrap());
    assert_eq!(commutator_pairing(&g, &g, &flags).unwrap(), QPower::ONE);
}

#[test]
fn intersection_examples() {
    let s = p2(5);
    let cases = [
        (vec![("X", 1)], vec![("Y", 1)], 1),
        (vec![("Y - Z", 1)], vec![("YZ - X^2", 1)], 2),
        (vec![("Y", 1)], vec![("YZ - X^2", 1)], 2),
        (vec![("YZ - X^2", 1)], vec![("Y^2Z - X^3 - XZ^2 - Z^3", 1)], 6),
    ];
    for (c, h, want) in cases {
        let (c, h) = (div(&s, &c), div(&s, &h));
        assert_eq!(intersection_oracle(&c, &h).unwrap(), want);
        assert_eq!(intersection_number(&c, &h).unwrap(), want);
        assert_eq!(intersection_number(&h, &c).unwrap(), want);
    }
    let x = div(&s, &[("X", 1)]);
    assert!(matches!(
        intersection_number(&x, &x),
        Err(Error::CommonComponent(_))
    ));
    assert_eq!(ClassVector::P1xP1(1, 0).dot(ClassVector::P1xP1(0, 1)), 1);
    assert_eq!(ClassVector::P1xP1(1, 0).dot(ClassVector::P1xP1(1, 0)), 0);
}

fn desk_curves(s: &Surface) -> Vec<&'static str> {
    match s.model {
        Model::P2 => vec![
            "X",
            "Y",
            "X + Y + Z",
            "YZ - X^2",
            "XY + Z^2",
            "X^2 + XY + YZ + Z^2",
            "Y^2Z - X^3 - XZ^2 - Z^3",
            "Y^2Z + XYZ - X^3 - Z^3",
        ],
        Model::P1xP1 => vec![
            "X0",
            "Y1",
            "X0*Y1 - X1*Y0",
            "X0*Y0 + X1*Y1 + X1*Y0",
            "X0^2*Y0 + X1^2*Y1",
            "X0*Y0^2 + X1*Y1^2 + X0*Y0*Y1",
        ],
    }
}

#[test]
fn symbol_route_matches_resultants() {
    let mut compared = 0;
    for s in common::surfaces() {
        let curves: Vec<_> = desk_curves(&s)
            .into_iter()
            .filter_map(|t| s.curve(t).ok())
            .collect();
        for (i, a) in curves.iter().enumerate() {
            for b in &curves[i + 1..] {
                let c = Divisor::single(a, 1);
                let h = Divisor::single(b, 1);
                let oracle = intersection_oracle(&c, &h).unwrap();
                assert_eq!(oracle, a.class().dot(b.class()), "{a} . {b}");
                match intersection_number(&c, &h) {
                    Ok(n) => {
                        assert_eq!(n, oracle, "{a} . {b} over F_{}", s.q());
                        compared += 1;
                    }
                    Err(Error::Singular { .. }) => {}
                    Err(e) => panic!("{a} . {b}: {e}"),
                }
            }
        }
    }
    assert!(compared > 60, "{compared}");
}

#[test]
fn bilinear_in_divisors() {
    let s = p2(3);
    let c1 = div(&s, &[("X", 1)]);
    let c2 = div(&s, &[("X + Y + Z", 2)]);
    let h = div(&s, &[("YZ - X^2", 1)]);
    let sum = intersection_number(&c1.add(&c2), &h).unwrap();
    assert_eq!(
        sum,
        intersection_number(&c1, &h).unwrap() + intersection_number(&c2, &h).unwrap()
    );
    assert_eq!(sum, c1.add(&c2).class().dot(h.class()));
}
