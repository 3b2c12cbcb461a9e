use std::cmp::Ordering;

use locpos::scalars::{rat, solve_linear, ExactScalar, Rational, RationalMatrix};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

mod common;
use common::small_rational;

/// Sign of `a + b√d` by bracketing `√d` between consecutive multiples of
/// `10⁻ᵏ`, refining until the bracket excludes zero.
fn interval_sign(a: &Rational, b: &Rational, d: &Rational) -> Ordering {
    if b.is_zero() || d.is_zero() {
        return a.cmp(&Rational::zero());
    }
    // √(u/v) = √(u·v)/v
    let w = d.numer() * d.denom();
    let bv = b / Rational::from_integer(d.denom().clone());
    for k in 1..200u32 {
        let scale = BigInt::from(10).pow(k);
        let m = (&w * &scale * &scale).sqrt();
        let lo_root = Rational::new(m.clone(), scale.clone());
        let hi_root = Rational::new(m + 1, scale);
        let (x, y) = (a + &bv * &lo_root, a + &bv * &hi_root);
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        if lo.is_positive() {
            return Ordering::Greater;
        }
        if hi.is_negative() {
            return Ordering::Less;
        }
        if lo.is_zero() && hi.is_zero() {
            return Ordering::Equal;
        }
    }
    Ordering::Equal
}

proptest! {
    #[test]
    fn normalize_is_idempotent(a in small_rational(), b in small_rational(), d in (0i64..50, 1i64..5)) {
        let s = ExactScalar::quad(a, b, rat(d.0, d.1)).unwrap();
        prop_assert_eq!(s.normalize().normalize(), s.normalize());
        prop_assert_eq!(s.normalize(), s);
    }

    #[test]
    fn sign_matches_interval_oracle(a in small_rational(), b in small_rational(), d in (1i64..60, 1i64..5)) {
        let dr = rat(d.0, d.1);
        let s = ExactScalar::quad(a.clone(), b.clone(), dr.clone()).unwrap();
        prop_assert_eq!(s.signum(), interval_sign(&a, &b, &dr));
    }

    #[test]
    fn order_matches_difference_sign(
        x in (small_rational(), small_rational()),
        y in (small_rational(), small_rational()),
        d in 2i64..30,
    ) {
        let dr = rat(d, 1);
        let s = ExactScalar::quad(x.0.clone(), x.1.clone(), dr.clone()).unwrap();
        let t = ExactScalar::quad(y.0.clone(), y.1.clone(), dr.clone()).unwrap();
        prop_assert_eq!(s.cmp(&t), interval_sign(&(&x.0 - &y.0), &(&x.1 - &y.1), &dr));
    }

    #[test]
    fn mixed_radicands_order_like_reals(a in small_rational(), b in 1i64..30, c in small_rational(), e in 1i64..30) {
        let s = &ExactScalar::sqrt(&rat(b, 1)).unwrap() + &ExactScalar::from(a);
        let t = &ExactScalar::sqrt(&rat(e, 1)).unwrap() + &ExactScalar::from(c);
        let (fs, ft) = (s.to_f64(), t.to_f64());
        if (fs - ft).abs() > 1e-9 {
            prop_assert_eq!(s.cmp(&t), fs.partial_cmp(&ft).unwrap());
        }
        prop_assert_eq!(s.cmp(&t), t.cmp(&s).reverse());
    }

    #[test]
    fn solve_recovers_solution(entries in proptest::collection::vec(-9i64..=9, 16), x in proptest::collection::vec(small_rational(), 4)) {
        let rows: Vec<Vec<Rational>> = entries.chunks(4).map(|r| r.iter().map(|&v| rat(v, 1)).collect()).collect();
        let g = RationalMatrix::from_rows(rows).unwrap();
        prop_assume!(!g.determinant().unwrap().is_zero());
        let rhs = g.mul_vec(&x).unwrap();
        prop_assert_eq!(solve_linear(&g, &rhs).unwrap(), x);
    }
}
