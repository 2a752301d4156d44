use proptest::prelude::*;

use kstab::exact::{format_rational, int, integrate_polygon, parse_rational, rat, AffineForm, Polygon, Polynomial2, Rational};
use kstab::invariants::delta_min_combinator;
use kstab::lattice::{CurveLattice, DivisorClass};

fn small_rat() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(p, q)| rat(p, q))
}

fn poly() -> impl Strategy<Value = Polynomial2> {
    prop::collection::vec(((0u32..=3), (0u32..=3), small_rat()), 1..6).prop_map(|terms| {
        let mut p = Polynomial2::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    })
}

/// `[a, a + w] × [c, c + h]` with positive width and height.
fn rect() -> impl Strategy<Value = (Rational, Rational, Rational, Rational)> {
    (small_rat(), 1i64..=20, small_rat(), 1i64..=20).prop_map(|(a, w, c, h)| {
        let b = &a + rat(w, 4);
        let d = &c + rat(h, 4);
        (a, b, c, d)
    })
}

/// Closed form of `∬ u^i v^j` over a rectangle, term by term.
fn rectangle_moment(p: &Polynomial2, a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Rational {
    let pow = |x: &Rational, k: u32| -> Rational { (0..k).fold(int(1), |acc, _| acc * x) };
    p.terms()
        .map(|(&(i, j), coeff)| {
            let iu = (pow(b, i + 1) - pow(a, i + 1)) / int(i as i64 + 1);
            let iv = (pow(d, j + 1) - pow(c, j + 1)) / int(j as i64 + 1);
            coeff * iu * iv
        })
        .sum()
}

fn symmetric(n: usize, entries: &[i64]) -> Vec<Vec<Rational>> {
    let mut g = vec![vec![int(0); n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            g[i][j] = int(entries[k]);
            g[j][i] = int(entries[k]);
            k += 1;
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polygon_integral_matches_fubini((a, b, c, d) in rect(), p in poly()) {
        let r = Polygon::rectangle(a.clone(), b.clone(), c.clone(), d.clone());
        prop_assert_eq!(integrate_polygon(&p, &r), rectangle_moment(&p, &a, &b, &c, &d));
    }

    #[test]
    fn polygon_integral_is_additive_under_cuts(
        (a, b, c, d) in rect(),
        p in poly(),
        (k0, ku, kv) in (small_rat(), small_rat(), small_rat()),
    ) {
        let r = Polygon::rectangle(a, b, c, d);
        let h = AffineForm::new(k0, ku, kv);
        let left = r.clip(&h);
        let right = r.clip(&h.scale(&int(-1)));
        prop_assert_eq!(
            integrate_polygon(&p, &r),
            integrate_polygon(&p, &left) + integrate_polygon(&p, &right)
        );
    }

    #[test]
    fn pairing_is_symmetric_and_bilinear(
        entries in prop::collection::vec(-4i64..=4, 6),
        x in prop::collection::vec(small_rat(), 3),
        y in prop::collection::vec(small_rat(), 3),
        z in prop::collection::vec(small_rat(), 3),
        k in small_rat(),
    ) {
        let lat = CurveLattice::new(vec!["a".into(), "b".into(), "c".into()], symmetric(3, &entries)).unwrap();
        let (x, y, z) = (DivisorClass(x), DivisorClass(y), DivisorClass(z));
        prop_assert_eq!(lat.pair(&x, &y).unwrap(), lat.pair(&y, &x).unwrap());
        let mut ykz = y.clone();
        ykz.add_scaled(&z, &k);
        prop_assert_eq!(
            lat.pair(&x, &ykz).unwrap(),
            lat.pair(&x, &y).unwrap() + &k * lat.pair(&x, &z).unwrap()
        );
    }

    #[test]
    fn negative_definiteness_passes_to_subsets(entries in prop::collection::vec(-3i64..=3, 10)) {
        let names = (0..4).map(|i| format!("c{i}")).collect();
        let lat = CurveLattice::new(names, symmetric(4, &entries)).unwrap();
        for mask in 1u32..16 {
            let set: Vec<usize> = (0..4).filter(|i| mask & (1 << i) != 0).collect();
            if !lat.is_negative_definite(&set) {
                continue;
            }
            for &i in &set {
                prop_assert!(lat.curve_pair(i, i) < &int(0));
            }
            for sub in 1u32..16 {
                if sub & !mask == 0 {
                    let s: Vec<usize> = (0..4).filter(|i| sub & (1 << i) != 0).collect();
                    prop_assert!(lat.is_negative_definite(&s), "{:?} inside {:?}", s, set);
                }
            }
        }
    }

    #[test]
    fn delta_min_scales_inversely(
        terms in prop::collection::vec((1i64..=20, 1i64..=20, 1i64..=20), 1..5),
        c in 1i64..=9,
    ) {
        let base: Vec<(Rational, Rational)> = terms.iter().map(|&(a, p, q)| (int(a), rat(p, q))).collect();
        let scaled: Vec<(Rational, Rational)> = base.iter().map(|(a, s)| (a.clone(), s * int(c))).collect();
        prop_assert_eq!(
            delta_min_combinator(&scaled).unwrap() * int(c),
            delta_min_combinator(&base).unwrap()
        );
    }

    #[test]
    fn rational_text_round_trips(p in -100000i64..=100000, q in 1i64..=100000) {
        let r = rat(p, q);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
}
