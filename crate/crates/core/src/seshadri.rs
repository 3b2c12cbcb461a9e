//! Seshadri constants at a point, largest simplex constants, the
//! very-general-point lower bound search and free multiples.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::infinitesimal::{blow_up, BlowupSpec};
use crate::lattice::{DivisorClass, PolyCone, SurfaceModel};
use crate::okounkov::{check_flag, criterion_at_point, Flag, PointSpec};
use crate::scalars::{int, ExactScalar, Rational};
use crate::zariski;

/// `max{ε : π*A − εE nef}`, as the minimum of `π*A·C̄ / C̄·E` over listed
/// curves meeting `E`, capped by `√(A²)`.
pub fn seshadri_direct(model: &SurfaceModel, a: &DivisorClass, x: &BlowupSpec) -> Result<ExactScalar> {
    model.check_dim(a)?;
    if !zariski::is_nef(model, a) {
        return Err(Error::NotNef);
    }
    let bl = blow_up(model, x)?;
    let pa = bl.pullback(a)?;
    let e = bl.exceptional_class();
    let mut best = ExactScalar::sqrt(&model.pair(a, a))?;
    for c in &bl.model.curves {
        let ce = bl.model.pair(&c.class, &e);
        if ce.is_positive() {
            let v = ExactScalar::from(bl.model.pair(&pa, &c.class) / ce);
            if v < best {
                best = v;
            }
        }
    }
    Ok(best)
}

/// `λ(A; C, x)`.
pub fn largest_simplex_flag(model: &SurfaceModel, a: &DivisorClass, flag: &Flag) -> Result<ExactScalar> {
    model.check_dim(a)?;
    if !zariski::is_ample(model, a) {
        return Err(Error::NotAmple);
    }
    Ok(criterion_at_point(model, a, flag)?.lambda)
}

/// Flags `(C, x)` through the point that the model can describe: listed
/// curves smooth at `x`, and moving curves whose general member through
/// `x` is smooth there and transverse to every listed branch.
pub fn flags_at_point(model: &SurfaceModel, x: &BlowupSpec) -> Vec<Flag> {
    let mut out = Vec::new();
    for c in &model.curves {
        let m = x.mult(&c.name);
        let moving = m == 0 && !c.self_int.is_negative();
        if m != 1 && !moving {
            continue;
        }
        let mut local = std::collections::BTreeMap::new();
        let mut tangent_clash = false;
        for (other, &mo) in &x.base_mults {
            if other == &c.name || mo == 0 {
                continue;
            }
            if m == 1 && x.direction(other) == x.direction(&c.name) {
                tangent_clash = true;
            }
            local.insert(other.clone(), mo);
        }
        if tangent_clash {
            continue;
        }
        let flag = Flag::new(&c.name, PointSpec { local_mults: local });
        if check_flag(model, &flag).is_ok() {
            out.push(flag);
        }
    }
    out
}

/// The best `λ` over the flags of [`flags_at_point`]; a lower bound for
/// the largest simplex constant at `x`.
pub fn largest_simplex_search(model: &SurfaceModel, a: &DivisorClass, x: &BlowupSpec) -> Result<ExactScalar> {
    model.check_dim(a)?;
    if !zariski::is_ample(model, a) {
        return Err(Error::NotAmple);
    }
    let mut best = ExactScalar::zero();
    for flag in flags_at_point(model, x) {
        let l = criterion_at_point(model, a, &flag)?.lambda;
        if l > best {
            best = l;
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericBoundQuery {
    /// `(A²)`
    pub degree: Rational,
    pub target: Rational,
    /// Assume no curve of multiplicity one at `x` obstructs the bound.
    pub exclude_q1: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericBound {
    pub holds: bool,
    pub witnesses: Vec<(BigInt, BigInt)>,
}

fn ceil_sqrt(n: &BigInt) -> BigInt {
    let r = n.sqrt();
    if &r * &r == *n {
        r
    } else {
        r + 1
    }
}

/// Searches the pairs `(p, q)` that could bound `ε(A; x)` below `τ` at a
/// very general point: `q ≥ 2`, `p/q < τ` and `p² ≥ (A²)·q(q−1)`. These
/// force `q < d/(d − τ²)`, so the search is finite.
pub fn generic_seshadri_bound(query: &GenericBoundQuery) -> Result<GenericBound> {
    let d = &query.degree;
    let tau = &query.target;
    if !d.is_positive() || !tau.is_positive() {
        return Err(Error::InvalidQuery("degree and target must be positive".into()));
    }
    if tau * tau >= *d {
        return Err(Error::InvalidQuery(format!(
            "target {tau} is not below the square root of the degree {d}"
        )));
    }
    let mut witnesses = Vec::new();
    if !query.exclude_q1 {
        // p < τ with q = 1: the area inequality holds trivially.
        let top = (tau.ceil() - int(1)).to_integer();
        let mut p = BigInt::from(1);
        while p <= top {
            witnesses.push((p.clone(), BigInt::from(1)));
            p += 1;
        }
    }
    let bound = d / (d - tau * tau);
    let mut q = BigInt::from(2);
    while Rational::from_integer(q.clone()) < bound {
        let qr = Rational::from_integer(q.clone());
        let p_max = (tau * &qr).ceil().to_integer() - 1;
        let need = d * &qr * (&qr - int(1));
        let p_min = ceil_sqrt(&need.ceil().to_integer()).max(BigInt::from(1));
        let mut p = p_min;
        while p <= p_max {
            if Rational::from_integer(&p * &p) >= need {
                witnesses.push((p.clone(), q.clone()));
            }
            p += 1;
        }
        q += 1;
    }
    Ok(GenericBound {
        holds: witnesses.is_empty(),
        witnesses,
    })
}

/// Smallest `m ≥ 0` with `⟨b, u⟩ ≤ m` for every facet normal `u`, so that
/// `m·A − b` is nef for every integral ample `A`.
pub fn free_multiple(model: &SurfaceModel, nef: &PolyCone, b: &DivisorClass) -> Result<BigInt> {
    model.check_dim(b)?;
    if !b.is_integral() {
        return Err(Error::NonIntegralInput);
    }
    let mut m = BigInt::zero();
    for u in &nef.facet_normals {
        let v = model.pair(b, u).ceil().to_integer();
        if v > m {
            m = v;
        }
    }
    Ok(m)
}

/// `K + 4A`.
pub fn default_free_bundle(model: &SurfaceModel, a: &DivisorClass) -> Result<DivisorClass> {
    let k = model.canonical.as_ref().ok_or(Error::MissingCanonical)?;
    model.check_dim(a)?;
    if !zariski::is_ample(model, a) {
        return Err(Error::NotAmple);
    }
    Ok(k.add_scaled(&int(4), a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::nef_cone;
    use crate::models::builtin;
    use crate::scalars::rat;

    fn query(d: Rational, t: Rational, ex: bool) -> GenericBoundQuery {
        GenericBoundQuery {
            degree: d,
            target: t,
            exclude_q1: ex,
        }
    }

    #[test]
    fn direct_seshadri_examples() {
        let p2 = builtin("p2").unwrap();
        let g = BlowupSpec::generic();
        assert_eq!(seshadri_direct(&p2, &DivisorClass::from_ints(&[1]), &g).unwrap(), ExactScalar::from(1));
        assert_eq!(seshadri_direct(&p2, &DivisorClass::from_ints(&[2]), &g).unwrap(), ExactScalar::from(2));
        let bl1 = builtin("bl1p2").unwrap();
        assert_eq!(seshadri_direct(&bl1, &DivisorClass::from_ints(&[2, -1]), &g).unwrap(), ExactScalar::from(1));
        assert_eq!(seshadri_direct(&bl1, &DivisorClass::from_ints(&[0, -1]), &g), Err(Error::NotNef));
    }

    #[test]
    fn simplex_constants() {
        let p2 = builtin("p2").unwrap();
        let h = DivisorClass::from_ints(&[1]);
        assert_eq!(largest_simplex_flag(&p2, &h, &Flag::generic("L")).unwrap(), ExactScalar::from(1));
        let bl1 = builtin("bl1p2").unwrap();
        let a = DivisorClass::from_ints(&[2, -1]);
        assert_eq!(largest_simplex_flag(&bl1, &a, &Flag::generic("E1")).unwrap(), ExactScalar::from(1));
        assert_eq!(
            largest_simplex_flag(&bl1, &DivisorClass::from_ints(&[1, 0]), &Flag::generic("E1")),
            Err(Error::NotAmple)
        );
        assert_eq!(largest_simplex_search(&p2, &h, &BlowupSpec::generic()).unwrap(), ExactScalar::from(1));
    }

    #[test]
    fn quintic_bound() {
        let r = generic_seshadri_bound(&query(int(5), int(2), true)).unwrap();
        assert!(r.holds && r.witnesses.is_empty());
        let r = generic_seshadri_bound(&query(int(5), rat(21, 10), true)).unwrap();
        assert!(r.witnesses.contains(&(BigInt::from(10), BigInt::from(5))));
        assert!(matches!(generic_seshadri_bound(&query(int(1), int(1), true)), Err(Error::InvalidQuery(_))));
        assert!(generic_seshadri_bound(&query(int(2), int(1), true)).unwrap().holds);
        let r = generic_seshadri_bound(&query(int(5), int(2), false)).unwrap();
        assert_eq!(r.witnesses, vec![(BigInt::from(1), BigInt::from(1))]);
    }

    #[test]
    fn free_multiples() {
        let p2 = builtin("p2").unwrap();
        let nef = nef_cone(&p2).unwrap();
        assert_eq!(free_multiple(&p2, &nef, &DivisorClass::from_ints(&[3])).unwrap(), BigInt::from(3));
        assert_eq!(free_multiple(&p2, &nef, &DivisorClass::from_ints(&[0])).unwrap(), BigInt::from(0));
        let bl1 = builtin("bl1p2").unwrap();
        let nef = nef_cone(&bl1).unwrap();
        assert_eq!(free_multiple(&bl1, &nef, &DivisorClass::from_ints(&[3, -1])).unwrap(), BigInt::from(2));
        assert_eq!(
            free_multiple(&bl1, &nef, &DivisorClass::new(vec![rat(1, 2), int(0)])),
            Err(Error::NonIntegralInput)
        );
    }

    #[test]
    fn free_bundles() {
        let p2 = builtin("p2").unwrap();
        assert_eq!(default_free_bundle(&p2, &DivisorClass::from_ints(&[1])).unwrap(), DivisorClass::from_ints(&[1]));
        let bl1 = builtin("bl1p2").unwrap();
        assert_eq!(
            default_free_bundle(&bl1, &DivisorClass::from_ints(&[2, -1])).unwrap(),
            DivisorClass::from_ints(&[5, -3])
        );
        assert_eq!(default_free_bundle(&bl1, &DivisorClass::from_ints(&[0, 0])), Err(Error::NotAmple));
        let ex = builtin("hirzebruch-1").unwrap();
        assert!(default_free_bundle(&ex, &ex.ample_ref).is_ok());
    }
}
