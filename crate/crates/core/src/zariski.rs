//! Zariski decompositions, positivity predicates, Null and Neg loci, volume
//! and small ample perturbations of big and nef classes.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::infinitesimal::Blowup;
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::scalars::{int, Rational, RationalMatrix};

/// `D = P + N` with `P` nef and `N` supported on a negative definite
/// configuration orthogonal to `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZariskiPair {
    pub positive: DivisorClass,
    pub negative: BTreeMap<String, Rational>,
    /// Support curves in model order.
    pub support: Vec<String>,
    /// Set when the model does not declare its curve list complete.
    pub relative: bool,
}

impl ZariskiPair {
    pub fn negative_class(&self, model: &SurfaceModel) -> Result<DivisorClass> {
        let mut n = DivisorClass::zero(model.rank());
        for (name, a) in &self.negative {
            let c = &model.curves[model.curve_index(name)?];
            n = n.add_scaled(a, &c.class);
        }
        Ok(n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocusReport {
    pub null_curves: BTreeSet<String>,
    pub neg_curves: BTreeSet<String>,
    pub relative: bool,
}

/// Zariski data of `D(t) = d0 + t·d1` on the chamber to the right of `t0`:
/// the support and the coefficients `aᵢ(t) = c0 + c1·t`, and `P(t) = p0 + t·p1`.
#[derive(Clone, Debug)]
pub(crate) struct Chamber {
    pub support: Vec<usize>,
    pub coeffs: Vec<(Rational, Rational)>,
    pub p0: DivisorClass,
    pub p1: DivisorClass,
}

/// Sign of `v0 + v1·t` for `t → t0⁺`.
fn germ_sign(v: &(Rational, Rational), t0: &Rational) -> Ordering {
    let at = &v.0 + &v.1 * t0;
    match at.cmp(&Rational::zero()) {
        Ordering::Equal => v.1.cmp(&Rational::zero()),
        o => o,
    }
}

/// The decomposition fixpoint run on germs of the affine family `d0 + t·d1`
/// at `t0⁺`; with `d1 = 0` it is the plain decomposition of `d0`.
pub(crate) fn chamber_at(
    model: &SurfaceModel,
    d0: &DivisorClass,
    d1: &DivisorClass,
    t0: &Rational,
) -> Result<Chamber> {
    let n = model.curves.len();
    let g0 = model.gram_apply(d0);
    let g1 = model.gram_apply(d1);
    let dot = |g: &[Rational], c: &DivisorClass| -> Rational { g.iter().zip(&c.0).map(|(a, b)| a * b).sum() };
    let base: Vec<(Rational, Rational)> = model
        .curves
        .iter()
        .map(|c| (dot(&g0, &c.class), dot(&g1, &c.class)))
        .collect();
    let cc = model.curve_gram();

    let mut support: Vec<usize> = (0..n).filter(|&j| germ_sign(&base[j], t0) == Ordering::Less).collect();
    let mut coeffs: Vec<(Rational, Rational)> = Vec::new();
    loop {
        coeffs.clear();
        if !support.is_empty() {
            let names = || -> String {
                support.iter().map(|&i| model.curves[i].name.as_str()).collect::<Vec<_>>().join(", ")
            };
            let gram = RationalMatrix::from_rows(
                support.iter().map(|&i| support.iter().map(|&j| cc[i][j].clone()).collect()).collect(),
            )?;
            if !gram.is_negative_definite()? {
                return Err(Error::ModelInconsistency(format!(
                    "intersection matrix of {{{}}} is not negative definite",
                    names()
                )));
            }
            let rhs0: Vec<Rational> = support.iter().map(|&i| base[i].0.clone()).collect();
            let rhs1: Vec<Rational> = support.iter().map(|&i| base[i].1.clone()).collect();
            let sol = gram.solve_columns(&[rhs0, rhs1])?;
            coeffs = sol[0].iter().cloned().zip(sol[1].iter().cloned()).collect();
            if coeffs.iter().any(|c| germ_sign(c, t0) != Ordering::Greater) {
                return Err(Error::ModelInconsistency(format!(
                    "non-positive negative-part coefficient on {{{}}}",
                    names()
                )));
            }
        }
        let mut entering = Vec::new();
        for j in 0..n {
            if support.contains(&j) {
                continue;
            }
            let mut v = base[j].clone();
            for (k, &i) in support.iter().enumerate() {
                v.0 -= &coeffs[k].0 * &cc[i][j];
                v.1 -= &coeffs[k].1 * &cc[i][j];
            }
            if germ_sign(&v, t0) == Ordering::Less {
                entering.push(j);
            }
        }
        if entering.is_empty() {
            break;
        }
        support.extend(entering);
        support.sort_unstable();
    }
    let mut p0 = d0.clone();
    let mut p1 = d1.clone();
    for (k, &i) in support.iter().enumerate() {
        p0 = p0.add_scaled(&-&coeffs[k].0, &model.curves[i].class);
        p1 = p1.add_scaled(&-&coeffs[k].1, &model.curves[i].class);
    }
    Ok(Chamber {
        support,
        coeffs,
        p0,
        p1,
    })
}

/// The Zariski decomposition of a pseudo-effective class.
pub fn zariski_decompose(model: &SurfaceModel, d: &DivisorClass) -> Result<ZariskiPair> {
    model.check_dim(d)?;
    if !model.is_pseudo_effective(d) {
        return Err(Error::NotPseudoEffective);
    }
    let ch = chamber_at(model, d, &DivisorClass::zero(model.rank()), &Rational::zero())?;
    let p = ch.p0;
    if model.pair(&p, &p).is_negative() || model.pair(&p, &model.ample_ref).is_negative() {
        return Err(Error::ModelInconsistency(
            "positive part fails the positive-cone test".into(),
        ));
    }
    let mut negative = BTreeMap::new();
    let mut support = Vec::new();
    for (k, &i) in ch.support.iter().enumerate() {
        let name = model.curves[i].name.clone();
        negative.insert(name.clone(), ch.coeffs[k].0.clone());
        support.push(name);
    }
    Ok(ZariskiPair {
        positive: p,
        negative,
        support,
        relative: !model.completeness_declared,
    })
}

pub fn loci(model: &SurfaceModel, d: &DivisorClass) -> Result<LocusReport> {
    let zp = zariski_decompose(model, d)?;
    let null_curves = model
        .curves
        .iter()
        .filter(|c| model.pair(&zp.positive, &c.class).is_zero())
        .map(|c| c.name.clone())
        .collect();
    Ok(LocusReport {
        null_curves,
        neg_curves: zp.support.into_iter().collect(),
        relative: zp.relative,
    })
}

fn test_classes(model: &SurfaceModel) -> Vec<DivisorClass> {
    let mut v: Vec<DivisorClass> = model.curves.iter().map(|c| c.class.clone()).collect();
    if let Some(g) = &model.effective_generators {
        v.extend(g.iter().cloned());
    }
    v.push(model.ample_ref.clone());
    v
}

pub fn is_nef(model: &SurfaceModel, d: &DivisorClass) -> bool {
    model.check_dim(d).is_ok()
        && test_classes(model).iter().all(|c| !model.pair(d, c).is_negative())
        && !model.pair(d, d).is_negative()
}

/// Nakai–Moishezon against the declared curves.
pub fn is_ample(model: &SurfaceModel, d: &DivisorClass) -> bool {
    model.check_dim(d).is_ok()
        && test_classes(model).iter().all(|c| model.pair(d, c).is_positive())
        && model.pair(d, d).is_positive()
}

pub fn volume(model: &SurfaceModel, d: &DivisorClass) -> Result<Rational> {
    let zp = zariski_decompose(model, d)?;
    Ok(model.pair(&zp.positive, &zp.positive))
}

pub fn is_big(model: &SurfaceModel, d: &DivisorClass) -> bool {
    matches!(volume(model, d), Ok(v) if v.is_positive())
}

/// For big and nef `P`, coefficients `a = −A⁻¹·𝟙` on the null curves
/// (`A` their intersection matrix) and a scale `s` with `P − s·Σ aᵢEᵢ`
/// ample. An ample input gives the empty map and scale 0.
pub fn ample_perturbation(
    model: &SurfaceModel,
    p: &DivisorClass,
) -> Result<(BTreeMap<String, Rational>, Rational)> {
    model.check_dim(p)?;
    if !is_nef(model, p) || !is_big(model, p) {
        return Err(Error::NotBigNef);
    }
    if is_ample(model, p) {
        return Ok((BTreeMap::new(), Rational::zero()));
    }
    let null: Vec<usize> = (0..model.curves.len())
        .filter(|&i| model.pair(p, &model.curves[i].class).is_zero())
        .collect();
    let gram = RationalMatrix::from_rows(
        null.iter()
            .map(|&i| null.iter().map(|&j| model.pair(&model.curves[i].class, &model.curves[j].class)).collect())
            .collect(),
    )?;
    if null.is_empty() || !gram.is_negative_definite()? {
        return Err(Error::ModelInconsistency(
            "null curves of a big and nef class are not negative definite".into(),
        ));
    }
    let a = gram.solve(&vec![int(-1); null.len()])?;
    let mut shift = DivisorClass::zero(model.rank());
    for (k, &i) in null.iter().enumerate() {
        shift = shift.add_scaled(&a[k], &model.curves[i].class);
    }
    let mut s = Rational::one();
    for _ in 0..64 {
        if is_ample(model, &p.add_scaled(&-&s, &shift)) {
            let map = null.iter().zip(a).map(|(&i, v)| (model.curves[i].name.clone(), v)).collect();
            return Ok((map, s));
        }
        s /= int(2);
    }
    Err(Error::ModelInconsistency("no ample perturbation found".into()))
}

/// Whether the decomposition of `π*D` on the blow-up is `π*P + π*N`.
pub fn pullback_zariski_check(model: &SurfaceModel, blowup: &Blowup, d: &DivisorClass) -> Result<bool> {
    let zp = zariski_decompose(model, d)?;
    for name in &zp.support {
        if blowup.spec.base_mults.get(name).copied().unwrap_or(0) > 0 {
            return Err(Error::PointInNegLocus(name.clone()));
        }
    }
    let up = zariski_decompose(&blowup.model, &blowup.pullback(d)?)?;
    Ok(up.positive == blowup.pullback(&zp.positive)? && up.negative == zp.negative)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::builtin;
    use crate::scalars::rat;

    fn dc(v: &[Rational]) -> DivisorClass {
        DivisorClass::new(v.to_vec())
    }

    #[test]
    fn decomposition_examples() {
        let p2 = builtin("p2").unwrap();
        let zp = zariski_decompose(&p2, &DivisorClass::from_ints(&[3])).unwrap();
        assert_eq!(zp.positive, DivisorClass::from_ints(&[3]));
        assert!(zp.negative.is_empty());

        let ex = builtin("example-interesting").unwrap();
        let d = dc(&[rat(3, 2), int(1), int(1)]);
        let zp = zariski_decompose(&ex, &d).unwrap();
        assert_eq!(zp.support, vec!["E2".to_string()]);
        assert_eq!(zp.negative["E2"], rat(1, 4));
        assert_eq!(zp.positive, dc(&[rat(3, 2), rat(3, 4), int(1)]));

        let bl1 = builtin("bl1p2").unwrap();
        let zp = zariski_decompose(&bl1, &DivisorClass::from_ints(&[1, 0])).unwrap();
        assert!(zp.negative.is_empty());
    }

    #[test]
    fn non_pseudo_effective_is_rejected() {
        let bl1 = builtin("bl1p2").unwrap();
        assert_eq!(
            zariski_decompose(&bl1, &DivisorClass::from_ints(&[0, -1])),
            Err(Error::NotPseudoEffective)
        );
        assert_eq!(
            zariski_decompose(&bl1, &DivisorClass::from_ints(&[-1, 0])),
            Err(Error::NotPseudoEffective)
        );
    }

    #[test]
    fn loci_examples() {
        let bl1 = builtin("bl1p2").unwrap();
        let r = loci(&bl1, &DivisorClass::from_ints(&[1, 0])).unwrap();
        assert_eq!(r.null_curves, ["E1".to_string()].into());
        assert!(r.neg_curves.is_empty());
        let r = loci(&bl1, &DivisorClass::from_ints(&[2, -1])).unwrap();
        assert!(r.null_curves.is_empty() && r.neg_curves.is_empty());
        let ex = builtin("example-interesting").unwrap();
        let r = loci(&ex, &dc(&[rat(3, 2), int(1), int(1)])).unwrap();
        assert_eq!(r.neg_curves, ["E2".to_string()].into());
        assert!(r.null_curves.contains("E2"));
    }

    #[test]
    fn positivity_examples() {
        let p2 = builtin("p2").unwrap();
        let h = DivisorClass::from_ints(&[1]);
        assert!(is_nef(&p2, &h) && is_ample(&p2, &h) && is_big(&p2, &h));
        assert_eq!(volume(&p2, &h).unwrap(), int(1));

        let bl1 = builtin("bl1p2").unwrap();
        let h = DivisorClass::from_ints(&[1, 0]);
        assert!(is_nef(&bl1, &h) && !is_ample(&bl1, &h) && is_big(&bl1, &h));
        assert_eq!(volume(&bl1, &h).unwrap(), int(1));

        let ex = builtin("example-interesting").unwrap();
        let d = DivisorClass::from_ints(&[1, 0, 1]);
        assert!(is_nef(&ex, &d) && !is_ample(&ex, &d) && !is_big(&ex, &d));
        assert_eq!(volume(&ex, &d).unwrap(), int(0));
    }

    #[test]
    fn ample_perturbation_examples() {
        let bl1 = builtin("bl1p2").unwrap();
        let (a, s) = ample_perturbation(&bl1, &DivisorClass::from_ints(&[1, 0])).unwrap();
        assert_eq!(a, [("E1".to_string(), int(1))].into());
        assert_eq!(s, rat(1, 2));

        let p2 = builtin("p2").unwrap();
        let (a, s) = ample_perturbation(&p2, &DivisorClass::from_ints(&[1])).unwrap();
        assert!(a.is_empty());
        assert_eq!(s, int(0));

        let ex = builtin("example-interesting").unwrap();
        assert_eq!(
            ample_perturbation(&ex, &DivisorClass::from_ints(&[1, 0, 1])),
            Err(Error::NotBigNef)
        );
    }

    #[test]
    fn relative_marker_follows_completeness() {
        let mut bl1 = builtin("bl1p2").unwrap();
        bl1.completeness_declared = false;
        assert!(zariski_decompose(&bl1, &DivisorClass::from_ints(&[1, 0])).unwrap().relative);
    }
}
