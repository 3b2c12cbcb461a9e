use locpos::checks::{declared_flags, declared_points};
use locpos::lattice::{nef_cone, DivisorClass};
use locpos::models::builtin;
use locpos::scalars::{int, rat, ExactScalar, Rational};
use locpos::seshadri::{free_multiple, generic_seshadri_bound, largest_simplex_flag, seshadri_direct, GenericBoundQuery};
use locpos::zariski::is_ample;
use num_bigint::BigInt;
use proptest::prelude::*;

mod common;
use common::{model_and_big_class, MODELS};

/// Every `(p, q)` with `p/q < τ` and `p² ≥ d·q(q−1)`. Once
/// `τ²q² < d·q(q−1)` no `p` qualifies for this or any larger `q`.
fn brute_force_witnesses(d: i64, tau: &Rational, exclude_q1: bool) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    for q in 1i64.. {
        if q > 1 && tau * tau * int(q * q) < int(d * q * (q - 1)) {
            break;
        }
        if q == 1 && exclude_q1 {
            continue;
        }
        let mut p = 1;
        while rat(p, q) < *tau {
            if p * p >= d * q * (q - 1) {
                out.push((BigInt::from(p), BigInt::from(q)));
            }
            p += 1;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn seshadri_bounds_simplex_constants((m, d) in model_and_big_class(), i in any::<prop::sample::Index>()) {
        prop_assume!(is_ample(&m, &d));
        let flags = declared_flags(&m);
        let f = &flags[i.index(flags.len())];
        let mut x = locpos::infinitesimal::BlowupSpec::generic();
        x.base_mults.insert(f.curve.clone(), 1);
        for (name, &k) in &f.point.local_mults {
            if k > 0 {
                x.base_mults.insert(name.clone(), 1);
            }
        }
        let lambda = largest_simplex_flag(&m, &d, f).unwrap();
        let eps = seshadri_direct(&m, &d, &x).unwrap();
        prop_assert!(eps >= lambda, "ε = {}, λ = {}", eps, lambda);
    }

    #[test]
    fn seshadri_is_homogeneous((m, d) in model_and_big_class(), j in any::<prop::sample::Index>(), k in prop::sample::select(vec![rat(1, 2), int(2), int(3), rat(5, 3)])) {
        prop_assume!(is_ample(&m, &d));
        let pts = declared_points(&m);
        let x = &pts[j.index(pts.len())];
        let e1 = seshadri_direct(&m, &d, x).unwrap();
        let ek = seshadri_direct(&m, &d.scale(&k), x).unwrap();
        prop_assert_eq!(ek, &e1 * &ExactScalar::from(k));
    }

    #[test]
    fn free_multiple_is_monotone(i in 0..MODELS.len(), v in proptest::collection::vec(0i64..4, 8), b in proptest::collection::vec(-5i64..=5, 4)) {
        let m = builtin(MODELS[i]).unwrap();
        let nef = nef_cone(&m).unwrap();
        let b = DivisorClass::from_ints(&b[..m.rank()]);
        let mut step = DivisorClass::zero(m.rank());
        for (g, k) in nef.generators.iter().zip(&v) {
            step = step.add_scaled(&int(*k), g);
        }
        let bigger = &b + &step;
        prop_assert!(free_multiple(&m, &nef, &bigger).unwrap() >= free_multiple(&m, &nef, &b).unwrap());
    }

    #[test]
    fn generic_bound_matches_brute_force(d in 1i64..=12, num in 1i64..200, exclude in any::<bool>()) {
        let tau = rat(num, 20);
        prop_assume!(&tau * &tau < int(d));
        let q = GenericBoundQuery { degree: int(d), target: tau.clone(), exclude_q1: exclude };
        let r = generic_seshadri_bound(&q).unwrap();
        for (p, q) in &r.witnesses {
            let (p, q) = (Rational::from_integer(p.clone()), Rational::from_integer(q.clone()));
            prop_assert!(&p * &p >= int(d) * &q * (&q - int(1)));
            prop_assert!(&p / &q < tau);
        }
        let mut got = r.witnesses.clone();
        got.sort();
        let mut want = brute_force_witnesses(d, &tau, exclude);
        want.sort();
        prop_assert_eq!(got, want);
        prop_assert_eq!(r.holds, r.witnesses.is_empty());
    }
}
