use num_traits::Zero;
use proptest::prelude::*;

use hk4_core::blowup::{self, BlowupCenter, Combination, Correspondence, FourfoldH4};
use hk4_core::deform::{self, FixInstance};
use hk4_core::h4::{fujiki_pair, fujiki_with_product, sym2_embed};
use hk4_core::hodge::{self, PicardData};
use hk4_core::linalg::rat;
use hk4_core::report::{Check, SuiteReport};
use hk4_core::{bb, sample, H2Class, H4Model, Mat, Rat};

fn small_class() -> impl Strategy<Value = H2Class> {
    prop::collection::vec(-3i64..=3, bb::RANK).prop_map(|v| H2Class::new(&v).unwrap())
}

fn b(a: &H2Class, c: &H2Class) -> Rat {
    rat(bb::bb_form(a, c))
}

/// Swap the first two hyperbolic planes; an isometry of Λ fixing δ0.
fn swap_planes(a: &H2Class) -> H2Class {
    let mut v = *a.coords();
    v.swap(0, 2);
    v.swap(1, 3);
    H2Class::new(&v).unwrap()
}

/// Negate the first hyperbolic plane; also an isometry fixing δ0.
fn flip_plane(a: &H2Class) -> H2Class {
    let mut v = *a.coords();
    v[0] = -v[0];
    v[1] = -v[1];
    H2Class::new(&v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fujiki_polarization(a in small_class(), c in small_class(), d in small_class(), e in small_class()) {
        let lhs = fujiki_with_product(&sym2_embed(&a, &c), &d, &e);
        let rhs = b(&a, &c) * b(&d, &e) + b(&a, &d) * b(&c, &e) + b(&a, &e) * b(&c, &d);
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(fujiki_pair(&sym2_embed(&a, &c), &sym2_embed(&d, &e)), rhs);
    }

    #[test]
    fn fourth_power_is_three_squares(a in small_class()) {
        let s = sym2_embed(&a, &a);
        let sq = rat(a.square());
        prop_assert_eq!(fujiki_pair(&s, &s), rat(3) * &sq * &sq);
    }

    #[test]
    fn isometry_preserves_pairing(a in small_class(), c in small_class()) {
        prop_assert_eq!(bb::bb_form(&swap_planes(&a), &swap_planes(&c)), bb::bb_form(&a, &c));
        prop_assert_eq!(bb::bb_form(&flip_plane(&a), &flip_plane(&c)), bb::bb_form(&a, &c));
    }

    #[test]
    fn squares_lie_in_l(a in small_class()) {
        let l = H4Model::get().l();
        prop_assert!(l.contains(&sym2_embed(&a, &a)));
    }

    #[test]
    fn combine_pairing_symmetries(
        terms in prop::collection::vec((-6i64..=6, -9i64..=9), 1..=5),
        rot in 0usize..5,
    ) {
        let build = |ts: &[(i64, i64)]| {
            let items = ts
                .iter()
                .enumerate()
                .map(|(i, &(k, e))| (k, Correspondence::new(format!("S{i}"), e)))
                .collect();
            Combination::new(items).unwrap()
        };
        let base = blowup::combine_pairing(&build(&terms));
        let mut rotated = terms.clone();
        rotated.rotate_left(rot % terms.len());
        prop_assert_eq!(blowup::combine_pairing(&build(&rotated)), base);
        let negated: Vec<_> = terms.iter().map(|&(k, e)| (-k, e)).collect();
        prop_assert_eq!(blowup::combine_pairing(&build(&negated)), base);
        if terms.iter().all(|&(_, e)| e % 2 == 0) {
            prop_assert!(base % 2 == 0);
        }
    }

    #[test]
    fn search_agrees_with_certificate(es in prop::collection::vec(-6i64..=6, 1..=3), bound in 1i64..=3) {
        let r = blowup::potential_jacobian_search(&es, bound).unwrap();
        for s in &r.solutions {
            let t: i64 = s.iter().zip(&es).map(|(c, e)| c * c * e).sum();
            prop_assert_eq!(t, 1);
        }
        if r.parity.certificate.is_some() {
            prop_assert!(r.solutions.is_empty());
        }
        // any e_i = 1 gives the unit vector as a solution
        if let Some(i) = es.iter().position(|&e| e == 1) {
            let mut unit = vec![0; es.len()];
            unit[i] = 1;
            prop_assert!(r.solutions.contains(&unit));
        }
    }

    #[test]
    fn blowup_adds_orthogonal_block(ds in prop::collection::vec(prop::option::of(-4i64..=4), 1..=4)) {
        let y = FourfoldH4::new(
            Mat::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 2]]),
            &[vec![rat(0), rat(0), rat(1)]],
        )
        .unwrap();
        let t0 = y.transcendental_gram();
        let mut cur = y.clone();
        let mut rank = y.rank();
        for d in &ds {
            let c = match d {
                None => BlowupCenter::Point,
                Some(d) => BlowupCenter::Curve { d: *d },
            };
            rank += c.new_block().unwrap().nrows();
            cur = blowup::blowup_h4(&cur, &c).unwrap();
        }
        prop_assert_eq!(cur.rank(), rank);
        prop_assert_eq!(cur.transcendental_gram(), t0);
        // determinant picks up a factor -1 from each block
        let sign = if ds.len() % 2 == 0 { rat(1) } else { rat(-1) };
        prop_assert_eq!(cur.gram().determinant().unwrap(), y.gram().determinant().unwrap() * sign);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn even_conditions_agree(seed in any::<u64>(), even in any::<bool>()) {
        let mut rng = sample::rng(seed);
        let l0 = if even {
            sample::random_even_polarization(&mut rng, None)
        } else {
            sample::random_odd_polarization(&mut rng)
        };
        let d = sample::random_exceptional(&mut rng);
        let c = hodge::even_conditions(&l0, &d).unwrap();
        prop_assert!(c.agree(), "{:?}", c);
        prop_assert_eq!(c.is_even, even);
    }

    #[test]
    fn minimal_search_is_isometry_invariant(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let l0 = sample::random_odd_polarization(&mut rng);
        let base = hodge::minimal_class_search(&PicardData::rank_one(l0.clone()).unwrap()).unwrap();
        prop_assert!(!base.feasible);
        for moved in [swap_planes(&l0), flip_plane(&l0)] {
            let r = hodge::minimal_class_search(&PicardData::rank_one(moved).unwrap()).unwrap();
            prop_assert_eq!(&r.image_generator, &base.image_generator);
            prop_assert_eq!(r.feasible, base.feasible);
        }
    }

    #[test]
    fn hodge_image_order_by_parity(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let odd = sample::random_odd_polarization(&mut rng);
        let even = sample::random_even_polarization(&mut rng, None);
        prop_assert_eq!(hodge::hodge_image_in_t4(&odd).unwrap().order(), 5.into());
        prop_assert_eq!(hodge::hodge_image_in_t4(&even).unwrap().order(), 10.into());
    }

    #[test]
    fn fix_space_is_two_dimensional(seed in any::<u64>(), n in 2usize..=5, k in 2i64..=5) {
        let mut rng = sample::rng(seed);
        let inst = FixInstance::random(&mut rng, n);
        let sol = deform::solve_fix(&inst).unwrap();
        prop_assert_eq!(sol.dimension(), 2);
        prop_assert!(deform::verify_generators(&sol, &inst).unwrap());
        // rescaling s leaves s^⊥ and hence the solution space unchanged
        let scaled: Vec<Rat> = inst.s().iter().map(|x| x * rat(k)).collect();
        let sol2 = deform::solve_fix(&inst.with_s(scaled).unwrap()).unwrap();
        prop_assert!(deform::same_span(&sol.basis, &sol2.basis).unwrap());
        for p in &sol.basis {
            prop_assert!(deform::satisfies(p, &inst).unwrap());
        }
    }
}

proptest! {
    #[test]
    fn check_status_is_string_equality(e in "[a-z0-9/]{0,6}", a in "[a-z0-9/]{0,6}") {
        let c = Check::new("x", &e, &a, "anchor");
        prop_assert_eq!(c.passed(), e == a);
    }

    #[test]
    fn suite_report_is_order_independent(names in prop::collection::btree_set("[a-z]{1,6}", 1..8), rot in 0usize..8) {
        let checks: Vec<Check> = names.iter().map(|n| Check::new(n.clone(), "1", "1", "a")).collect();
        let mut shuffled = checks.clone();
        shuffled.rotate_left(rot % checks.len());
        shuffled.reverse();
        let r1 = SuiteReport::new("s", 1, checks, 5);
        let r2 = SuiteReport::new("s", 1, shuffled, 99);
        prop_assert_eq!(r1.canonical_json(), r2.canonical_json());
        prop_assert!(r1.passed());
    }
}

#[test]
fn q_is_nonzero_in_l() {
    let m = H4Model::get();
    assert!(!m.q().is_zero());
    assert!(m.l().contains(&m.two_fifths_q()));
    assert!(!fujiki_pair(&m.q(), &m.q()).is_zero());
}
