use locpos::checks::{declared_points, infinitesimal_polygons, seshadri_equals_xi, triangle_criteria};
use locpos::infinitesimal::{blow_up, generic_infinitesimal_polygon, mu_prime, BlowupSpec};
use locpos::lattice::{DivisorClass, SurfaceModel};
use locpos::models::builtin;
use locpos::scalars::{rat, ExactScalar, Rational};
use locpos::seshadri::seshadri_direct;
use locpos::zariski::{is_ample, is_nef};
use num_traits::Zero;
use proptest::prelude::*;

mod common;
use common::{model_and_big_class, small_rational, MODELS};

fn with_point() -> impl Strategy<Value = (SurfaceModel, DivisorClass, BlowupSpec)> {
    (model_and_big_class(), any::<prop::sample::Index>()).prop_map(|((m, d), i)| {
        let pts = declared_points(&m);
        let x = pts[i.index(pts.len())].clone();
        (m, d, x)
    })
}

/// Membership statements (1)–(5) for `ε(A; x) ≥ q`.
fn lower_bound_statements(m: &SurfaceModel, a: &DivisorClass, x: &BlowupSpec, q: &Rational) -> [bool; 4] {
    let polys = infinitesimal_polygons(m, a, x).unwrap();
    let q = ExactScalar::from(q.clone());
    let z = ExactScalar::zero();
    let h = |i: usize| polys[i].contains(&q, &z);
    let d = |i: usize| polys[i].contains(&q, &q);
    let two = polys.len() >= 2 && d(0) && d(1);
    [
        (0..polys.len()).all(h),
        (0..polys.len()).all(d),
        if polys.len() >= 2 { two } else { d(0) },
        (0..polys.len()).any(|i| h(i) && d(i)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn triangle_criteria_hold((m, d, x) in with_point()) {
        triangle_criteria(&m, &d, &x).unwrap();
    }

    #[test]
    fn generic_base_is_flat((m, d) in model_and_big_class()) {
        let x = BlowupSpec::generic();
        let p = generic_infinitesimal_polygon(&m, &d, &x).unwrap();
        prop_assert_eq!(&p.mu, &mu_prime(&m, &d, &x).unwrap());
        for piece in &p.pieces {
            prop_assert!(piece.alpha.c0.is_zero() && piece.alpha.c1.is_zero());
        }
    }

    #[test]
    fn pullback_preserves_pairing(i in 0..MODELS.len(), xs in proptest::collection::vec(small_rational(), 8), j in any::<prop::sample::Index>()) {
        let m = builtin(MODELS[i]).unwrap();
        let pts = declared_points(&m);
        let bl = blow_up(&m, &pts[j.index(pts.len())]).unwrap();
        let r = m.rank();
        let a = DivisorClass::new(xs[..r].to_vec());
        let b = DivisorClass::new(xs[4..4 + r].to_vec());
        let (pa, pb) = (bl.pullback(&a).unwrap(), bl.pullback(&b).unwrap());
        prop_assert_eq!(bl.model.pair(&pa, &pb), m.pair(&a, &b));
        prop_assert!(bl.model.pair(&pa, &bl.exceptional_class()).is_zero());
    }

    #[test]
    fn seshadri_constant_is_xi_for_nef_classes((m, d, x) in with_point()) {
        prop_assume!(is_nef(&m, &d));
        seshadri_equals_xi(&m, &d, &x).unwrap();
    }

    #[test]
    fn seshadri_lower_bound_statements((m, d, x) in with_point(), k in 1i64..=16) {
        prop_assume!(is_ample(&m, &d));
        let eps = seshadri_direct(&m, &d, &x).unwrap();
        let q = rat(k, 4);
        let expected = ExactScalar::from(q.clone()) <= eps;
        let got = lower_bound_statements(&m, &d, &x, &q);
        prop_assert!(got.iter().all(|&g| g == expected), "q = {}, ε = {}, got {:?}", q, eps, got);
    }
}
