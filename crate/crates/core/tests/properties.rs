use std::collections::BTreeSet;

use num_traits::{One, Zero};
use proptest::prelude::*;

use shimura_genus1::arith::{rat, rat_int};
use shimura_genus1::classfield::{
    self, hilbert_symbol, quaternion_discriminant, DihedralGaloisModel, GaloisElement, Place, QuadOrder, BQF,
};
use shimura_genus1::fields::{self, FieldSpec};
use shimura_genus1::models::{self, CurvePoint, EllipticCurve, MoebiusMap};
use shimura_genus1::shimura::{self, Level};
use shimura_genus1::{QPoly, Rational};

fn quartic() -> impl Strategy<Value = QPoly> {
    prop::collection::vec(-30i64..=30, 5)
        .prop_filter("degree four", |c| c[4] != 0)
        .prop_map(|c| QPoly::from_i64(&c))
        .prop_filter("squarefree", |g| !g.discriminant().unwrap().is_zero())
}

fn moebius() -> impl Strategy<Value = MoebiusMap> {
    (-7i64..=7, -7i64..=7, -7i64..=7, -7i64..=7)
        .prop_filter("invertible", |(a, b, c, d)| a * d - b * c != 0)
        .prop_map(|(a, b, c, d)| MoebiusMap::from_i64(a, b, c, d, rat_int(1)).unwrap())
}

fn fundamental_disc() -> impl Strategy<Value = i64> {
    (3i64..3000).prop_map(|n| -n).prop_filter("discriminant", |d| d.rem_euclid(4) <= 1)
}

fn prime_factors(n: u64) -> Vec<u64> {
    let mut n = n;
    let mut ps = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            ps.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        ps.push(n);
    }
    ps
}

/// Kronecker symbol `(d / n)` for `n > 0`, computed by factoring `n`.
fn kronecker_oracle(d: i64, n: u64) -> i64 {
    let mut out = 1;
    let mut m = n;
    for p in prime_factors(n) {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        let s = if p == 2 {
            match d.rem_euclid(8) {
                1 | 7 => 1,
                3 | 5 => -1,
                _ => 0,
            }
        } else {
            let r = d.rem_euclid(p as i64) as u64;
            if r == 0 {
                0
            } else {
                let mut acc = 1u64;
                let mut base = r;
                let mut k = (p - 1) / 2;
                while k > 0 {
                    if k & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    k >>= 1;
                }
                if acc == 1 {
                    1
                } else {
                    -1
                }
            }
        };
        for _ in 0..e {
            out *= s;
        }
    }
    out
}

/// Class number from `h = w / (2 |d|) * |sum_{n < |d|} (d/n) n|`.
fn analytic_class_number(d: i64) -> i64 {
    let w = match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    let n = d.unsigned_abs();
    let s: i64 = (1..n).map(|k| kronecker_oracle(d, k) * k as i64).sum();
    (w * s.abs()) / (2 * n as i64)
}

fn is_fundamental(d: i64) -> bool {
    let squarefree = |n: u64| prime_factors(n).into_iter().all(|p| !n.is_multiple_of(p * p));
    let n = d.unsigned_abs();
    match d.rem_euclid(4) {
        1 => squarefree(n),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

fn curve_with_point() -> impl Strategy<Value = (EllipticCurve, CurvePoint)> {
    (-20i64..=20, -20i64..=20, -20i64..=20).prop_filter_map("nonsingular", |(a, x, y)| {
        let (a, x, y) = (rat_int(a), rat_int(x), rat_int(y));
        let b = &y * &y - &x * &x * &x - &a * &x;
        let e = EllipticCurve::new(a, b).ok()?;
        Some((e, CurvePoint::affine(x, y)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn invariants_are_covariant(g in quartic(), t in moebius(), ln in 1i64..6, ld in 1i64..6) {
        let lambda = rat(ln, ld);
        let h = models::apply_transform(&g, &t, &lambda).unwrap();
        let (i1, j1) = models::invariants_of(&g);
        let (i2, j2) = models::invariants_of(&h);
        let s = &lambda * &lambda * t.det() * t.det();
        prop_assert_eq!(i2, &i1 * &s * &s);
        prop_assert_eq!(j2, &j1 * &s * &s * &s);
    }

    #[test]
    fn splitting_field_is_transform_invariant(g in quartic(), t in moebius()) {
        let h = models::apply_transform(&g, &t, &Rational::one()).unwrap();
        prop_assume!(h.degree() == Some(4));
        prop_assert_eq!(fields::splitting_fingerprint(&h).unwrap(), fields::splitting_fingerprint(&g).unwrap());
    }

    #[test]
    fn nested_radical_matches_its_minimal_polynomial(a in -40i64..=40, b in -400i64..=400) {
        prop_assume!(b < 0 || (b as f64).sqrt().round().powi(2) as i64 != b);
        let (ra, rb) = (rat_int(a), rat_int(b));
        let f = QPoly::new(vec![&ra * &ra - &rb, Rational::zero(), rat_int(-2 * a), Rational::zero(), Rational::one()]);
        prop_assume!(!f.discriminant().unwrap().is_zero());
        let spec = fields::fingerprint_of_spec_lenient(&FieldSpec::NestedRadical { a: ra, b: rb }).unwrap();
        prop_assert_eq!(spec, fields::splitting_fingerprint(&f).unwrap());
    }

    #[test]
    fn form_composition_is_a_group_law(d in fundamental_disc(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), k in any::<prop::sample::Index>()) {
        let forms = classfield::reduced_forms(d).unwrap();
        let (f, g, h) = (*i.get(&forms), *j.get(&forms), *k.get(&forms));
        let c = |x: &BQF, y: &BQF| classfield::compose(x, y).unwrap();
        let one = BQF::principal(d);
        prop_assert_eq!(c(&f, &one), f);
        prop_assert_eq!(c(&f, &f.inverse()), one);
        prop_assert_eq!(c(&c(&f, &g), &h), c(&f, &c(&g, &h)));
        prop_assert_eq!(c(&f, &g), c(&g, &f));
        prop_assert!(c(&f, &g).is_reduced());
    }

    #[test]
    fn class_number_matches_analytic_formula(d in fundamental_disc()) {
        prop_assume!(is_fundamental(d));
        prop_assert_eq!(classfield::class_group(d).unwrap().h() as i64, analytic_class_number(d));
    }

    #[test]
    fn hilbert_product_formula(a in -20000i64..20000, b in -20000i64..20000) {
        prop_assume!(a != 0 && b != 0);
        let (ra, rb) = (rat_int(a), rat_int(b));
        let mut primes: BTreeSet<u64> = prime_factors(a.unsigned_abs()).into_iter().collect();
        primes.extend(prime_factors(b.unsigned_abs()));
        primes.insert(2);
        let mut prod = hilbert_symbol(&ra, &rb, Place::Infinity) as i32;
        for p in &primes {
            prod *= hilbert_symbol(&ra, &rb, Place::Prime(*p)) as i32;
        }
        prop_assert_eq!(prod, 1);
        for p in [3u64, 5, 7, 11, 13] {
            if !primes.contains(&p) {
                prop_assert_eq!(hilbert_symbol(&ra, &rb, Place::Prime(p)), 1);
            }
        }
    }

    #[test]
    fn quaternion_discriminant_depends_on_square_classes(a in -500i64..500, b in -500i64..500, n in 1i64..30, m in 1i64..30) {
        prop_assume!(a != 0 && b != 0);
        let base = quaternion_discriminant(&rat_int(a), &rat_int(b)).unwrap();
        let scaled = quaternion_discriminant(&rat(a * n * n, m * m), &rat_int(b * m * m)).unwrap();
        prop_assert_eq!(&base, &scaled);
        prop_assert_eq!(base.ramified_primes.len() % 2 == 1, base.infinite_ramified);
    }

    #[test]
    fn genus_is_integral(d in 1u64..200, n in 1u64..200) {
        prop_assume!(d * n <= 3000);
        if let Ok(level) = Level::new(d, n) {
            prop_assert!(shimura::genus(&level).is_ok());
        }
    }

    #[test]
    fn assigned_characters_count_genera(d in fundamental_disc()) {
        let g = classfield::class_group(d).unwrap();
        prop_assert_eq!(g.two_torsion_rank as usize + 1, classfield::assigned_characters(d).unwrap().len());
    }

    #[test]
    fn reflections_are_involutions(d in fundamental_disc(), i in any::<prop::sample::Index>()) {
        let dm = DihedralGaloisModel::new(classfield::class_group(d).unwrap()).unwrap();
        let class = i.index(dm.base.h());
        let t = dm.mul(GaloisElement::c(), GaloisElement::sigma(class));
        prop_assert_eq!(dm.mul(t, t), dm.identity());
        prop_assert_eq!(dm.elements().len(), dm.order());
    }

    #[test]
    fn curve_group_law((e, p) in curve_with_point(), k in -6i64..6, l in -6i64..6) {
        prop_assert!(e.contains(&p));
        let q = e.mul(2, &p);
        prop_assert!(e.contains(&q));
        prop_assert_eq!(e.add(&p, &q), e.add(&q, &p));
        prop_assert_eq!(e.add(&e.add(&p, &q), &p), e.add(&p, &e.add(&q, &p)));
        prop_assert_eq!(e.add(&p, &e.neg(&p)), CurvePoint::Infinity);
        prop_assert_eq!(e.add(&e.mul(k, &p), &e.mul(l, &p)), e.mul(k + l, &p));
    }

    #[test]
    fn twists_by_squares_are_isomorphic((e, _) in curve_with_point(), n in 1i64..10) {
        let t = e.twist(&rat_int(n * n));
        let u = t.is_isomorphic(&e);
        prop_assert!(u.is_some());
        let u = u.unwrap();
        prop_assert_eq!(&u * &u, rat(1, n * n));
    }
}

/// The two expressions for `m_r` agree unless a prime of `N` divides the conductor.
#[test]
fn m_r_expressions_agree_away_from_conductor() {
    let mut disagreements = 0;
    for level in shimura::scan_genus_one(1000) {
        for disc in (-1000i64..=-3).filter(|d| d.rem_euclid(4) <= 1) {
            let Ok(r) = QuadOrder::new(disc) else { continue };
            if !shimura::cm_locus(&level, &r).unwrap().nonempty {
                continue;
            }
            let inv = shimura::cm_invariants(&level, &r);
            let coprime = num_integer::gcd(level.n, r.conductor) == 1;
            for m in shimura::atkin_lehner_group(&level).unwrap() {
                let by_group = num_integer::gcd(m, level.dn() / (inv.dr * inv.nr));
                let by_disc = shimura::m_r_from_discriminant(&level, &r, m);
                if by_group != by_disc {
                    disagreements += 1;
                    assert!(!coprime, "({},{}) disc {disc} m {m}", level.d, level.n);
                }
            }
        }
    }
    assert!(disagreements > 0);
}
