//! The standard test matrix (models, classes, flags, points) and the
//! invariant checks run over it.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::infinitesimal::{blow_up, xi_of_polygon, BlowupSpec, InfFlagSpec};
use crate::lattice::{dual_cone, nef_cone, DivisorClass, SurfaceModel};
use crate::models::builtin;
use crate::okounkov::{criterion_at_point, okounkov_polygon, polygon_area, Flag, NOPolygon, PointSpec};
use crate::scalars::{int, rat, ExactScalar, Rational};
use crate::seshadri::seshadri_direct;
use crate::zariski::{self, is_ample, is_big, loci, volume, zariski_decompose};

pub const MATRIX_MODELS: [&str; 6] = ["p2", "bl1p2", "bl2p2", "bl3p2", "hirzebruch-2", "example-interesting"];

pub struct MatrixEntry {
    pub model: SurfaceModel,
    pub name: String,
    pub classes: Vec<DivisorClass>,
    pub flags: Vec<Flag>,
    pub points: Vec<BlowupSpec>,
}

pub fn test_matrix() -> Result<Vec<MatrixEntry>> {
    MATRIX_MODELS
        .iter()
        .map(|name| {
            let model = builtin(name)?;
            Ok(MatrixEntry {
                name: name.to_string(),
                classes: sample_classes(&model)?,
                flags: declared_flags(&model),
                points: declared_points(&model),
                model,
            })
        })
        .collect()
}

/// Big classes built from the ample reference, the nef cone rays and the
/// negative curves, so that every negative curve occurs in some `Neg(D)`.
pub fn sample_classes(model: &SurfaceModel) -> Result<Vec<DivisorClass>> {
    let a = &model.ample_ref;
    let mut out = vec![a.clone()];
    for g in nef_cone(model)?.generators {
        out.push(g);
    }
    for c in model.negative_curves() {
        out.push(a + &c.class);
        out.push(a.add_scaled(&rat(5, 2), &c.class));
    }
    let mut seen = BTreeSet::new();
    out.retain(|d| is_big(model, d) && seen.insert(d.clone()));
    Ok(out)
}

/// A generic flag on every curve, and `(C, C ∩ C′)` whenever `C·C′ = 1`
/// and one of the two curves is negative.
pub fn declared_flags(model: &SurfaceModel) -> Vec<Flag> {
    let mut out: Vec<Flag> = model.curves.iter().map(|c| Flag::generic(&c.name)).collect();
    for c in &model.curves {
        for o in &model.curves {
            if c.name != o.name
                && (c.is_negative() || o.is_negative())
                && model.pair(&c.class, &o.class) == int(1)
            {
                out.push(Flag::new(&c.name, PointSpec::with(&[(&o.name, 1)])));
            }
        }
    }
    out
}

/// The generic point, a point on each negative curve, and the transverse
/// intersection points of pairs of negative curves.
pub fn declared_points(model: &SurfaceModel) -> Vec<BlowupSpec> {
    let mut out = vec![BlowupSpec::generic()];
    let negs: Vec<_> = model.negative_curves().collect();
    for c in &negs {
        out.push(BlowupSpec::on_curves(&[&c.name]));
    }
    for (i, c) in negs.iter().enumerate() {
        for o in &negs[i + 1..] {
            if model.pair(&c.class, &o.class) == int(1) {
                out.push(BlowupSpec::on_curves(&[&c.name, &o.name]));
            }
        }
    }
    out
}

fn violation(msg: String) -> Error {
    Error::InvariantViolation(msg)
}

/// `α(t), β(t)` from an independent decomposition of `D − tC`.
pub fn oracle_at(model: &SurfaceModel, d: &DivisorClass, flag: &Flag, t: &Rational) -> Result<(Rational, Rational)> {
    let c = model
        .curve(&flag.curve)
        .ok_or_else(|| Error::UnknownCurve(flag.curve.clone()))?
        .class
        .clone();
    let zp = zariski_decompose(model, &d.add_scaled(&-t, &c))?;
    let mut alpha = Rational::zero();
    for (name, a) in &zp.negative {
        if name != &flag.curve {
            alpha += a * Rational::from_integer(flag.point.local_mults.get(name).copied().unwrap_or(0).into());
        }
    }
    let beta = &alpha + model.pair(&zp.positive, &c);
    Ok((alpha, beta))
}

/// Compares the walk with [`oracle_at`] at every `k/denom` in `[ν, μ]`.
pub fn grid_oracle(model: &SurfaceModel, d: &DivisorClass, flag: &Flag, denom: i64) -> Result<usize> {
    let poly = okounkov_polygon(model, d, flag)?;
    let step = rat(1, denom);
    let mut t = (&poly.nu / &step).ceil() * &step;
    let mut n = 0;
    while ExactScalar::from(&t) <= poly.mu {
        let te = ExactScalar::from(&t);
        let (a, b) = oracle_at(model, d, flag, &t)?;
        let (wa, wb) = (poly.alpha_at(&te), poly.beta_at(&te));
        if wa != Some(ExactScalar::from(&a)) || wb != Some(ExactScalar::from(&b)) {
            return Err(violation(format!(
                "grid oracle: {d} flag {} at t = {t}: walk ({wa:?}, {wb:?}) vs oracle ({a}, {b})",
                flag.curve
            )));
        }
        n += 1;
        t += &step;
    }
    Ok(n)
}

pub fn area_law(model: &SurfaceModel, d: &DivisorClass, flag: &Flag) -> Result<()> {
    let poly = okounkov_polygon(model, d, flag)?;
    let area = polygon_area(&poly);
    let half = ExactScalar::from(volume(model, d)? / int(2));
    if area != half {
        return Err(violation(format!("area {area} ≠ vol/2 = {half} for {d}, flag {}", flag.curve)));
    }
    Ok(())
}

fn curves_through_flag_point(flag: &Flag) -> BTreeSet<String> {
    let mut s: BTreeSet<String> =
        flag.point.local_mults.iter().filter(|(_, &m)| m > 0).map(|(n, _)| n.clone()).collect();
    s.insert(flag.curve.clone());
    s
}

/// Origin in the polygon iff no Neg curve passes through the flag point,
/// and `λ > 0` iff no Null curve does.
pub fn main_criteria(model: &SurfaceModel, d: &DivisorClass, flag: &Flag) -> Result<()> {
    let crit = criterion_at_point(model, d, flag)?;
    let rep = loci(model, d)?;
    let through = curves_through_flag_point(flag);
    let in_neg = rep.neg_curves.iter().any(|c| through.contains(c));
    let in_null = rep.null_curves.iter().any(|c| through.contains(c));
    if crit.origin_in == in_neg || crit.lambda.is_positive() == in_null {
        return Err(violation(format!(
            "criteria at {d}, flag {} {:?}: origin_in {}, λ = {}, Neg hit {in_neg}, Null hit {in_null}",
            flag.curve, flag.point.local_mults, crit.origin_in, crit.lambda
        )));
    }
    Ok(())
}

/// The infinitesimal polygons at the generic and every special point of `E`.
pub fn infinitesimal_polygons(model: &SurfaceModel, d: &DivisorClass, x: &BlowupSpec) -> Result<Vec<NOPolygon>> {
    let bl = blow_up(model, x)?;
    let mut ys = vec![InfFlagSpec::Generic];
    ys.extend(bl.special_points());
    ys.iter().map(|y| bl.polygon(d, y)).collect()
}

/// Containment in `Δ_{μ′}⁻¹`, `y`-independence of `ξ` and of the vertex
/// `t`-coordinates, and the two loci equivalences for infinitesimal polygons.
pub fn triangle_criteria(model: &SurfaceModel, d: &DivisorClass, x: &BlowupSpec) -> Result<()> {
    let polys = infinitesimal_polygons(model, d, x)?;
    let rep = loci(model, d)?;
    let through = x.curves_through();
    let in_neg = rep.neg_curves.iter().any(|c| through.contains(c));
    let in_null = rep.null_curves.iter().any(|c| through.contains(c));
    let zero = ExactScalar::zero();
    let mu = polys[0].mu.clone();
    let xi0 = xi_of_polygon(&polys[0]);
    let ts = crate::infinitesimal::vertex_t_coordinates(&polys[0]);
    for p in &polys {
        for (t, y) in &p.vertices {
            if y > t || t > &mu || y.is_negative() {
                return Err(violation(format!("vertex ({t}, {y}) outside the inverted simplex of size {mu}")));
            }
        }
        if p.mu != mu || xi_of_polygon(p) != xi0 || crate::infinitesimal::vertex_t_coordinates(p) != ts {
            return Err(violation(format!("infinitesimal data depend on y for {d}")));
        }
    }
    let origin_all = polys.iter().all(|p| p.contains(&zero, &zero));
    if origin_all == in_neg || xi0.is_positive() == in_null {
        return Err(violation(format!(
            "triangle criteria at {d}, point {:?}: origin {origin_all}, ξ = {xi0}, Neg hit {in_neg}, Null hit {in_null}",
            x.base_mults
        )));
    }
    Ok(())
}

/// `ε = ξ` for an ample class at a point.
pub fn seshadri_equals_xi(model: &SurfaceModel, a: &DivisorClass, x: &BlowupSpec) -> Result<ExactScalar> {
    let eps = seshadri_direct(model, a, x)?;
    let xi = crate::infinitesimal::xi(model, a, x)?;
    if eps != xi {
        return Err(violation(format!("ε = {eps} but ξ = {xi} for {a}")));
    }
    Ok(eps)
}

/// Decomposition invariants: `P` nef, `P·N = 0`, support negative definite
/// with positive coefficients, idempotence and `Neg ⊆ Null`.
pub fn zariski_invariants(model: &SurfaceModel, d: &DivisorClass) -> Result<()> {
    let zp = zariski_decompose(model, d)?;
    let n = zp.negative_class(model)?;
    if &zp.positive + &n != *d {
        return Err(violation(format!("P + N ≠ D for {d}")));
    }
    if !zariski::is_nef(model, &zp.positive) {
        return Err(violation(format!("P not nef for {d}")));
    }
    for name in &zp.support {
        let c = &model.curves[model.curve_index(name)?];
        if !model.pair(&zp.positive, &c.class).is_zero() || !zp.negative[name].is_positive() {
            return Err(violation(format!("support curve {name} of {d} fails orthogonality")));
        }
    }
    let gram = crate::scalars::RationalMatrix::from_rows(
        zp.support
            .iter()
            .map(|a| {
                let ca = &model.curve(a).expect("listed").class;
                zp.support.iter().map(|b| model.pair(ca, &model.curve(b).expect("listed").class)).collect()
            })
            .collect(),
    )?;
    if !zp.support.is_empty() && !gram.is_negative_definite()? {
        return Err(violation(format!("support of {d} not negative definite")));
    }
    let again = zariski_decompose(model, &zp.positive)?;
    if again.positive != zp.positive || !again.negative.is_empty() {
        return Err(violation(format!("decomposition of P is not (P, 0) for {d}")));
    }
    let rep = loci(model, d)?;
    if !rep.neg_curves.is_subset(&rep.null_curves) {
        return Err(violation(format!("Neg ⊄ Null for {d}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
}

fn run_check(name: &str, f: impl FnOnce() -> Result<usize>) -> CheckReport {
    match f() {
        Ok(cases) => CheckReport {
            name: name.into(),
            passed: true,
            cases,
            detail: String::new(),
        },
        Err(e) => CheckReport {
            name: name.into(),
            passed: false,
            cases: 0,
            detail: e.to_string(),
        },
    }
}

/// The invariant suite on one model, over its sample classes, declared
/// flags and declared points.
pub fn run_suite(model: &SurfaceModel) -> Vec<CheckReport> {
    let mut out = vec![run_check("lattice invariants", || model.validate().map(|_| 1))];
    out.push(run_check("dual cone round trip", || {
        let nef = nef_cone(model)?;
        let back = dual_cone(&nef.generators, model)?;
        let mut normals = nef.facet_normals.clone();
        normals.sort();
        if back.generators != normals {
            return Err(violation("dual of the nef cone differs from the facet normals".into()));
        }
        Ok(nef.generators.len())
    }));
    out.push(run_check("ample reference positive", || {
        for g in model.mori_generators() {
            if !model.pair(&model.ample_ref, &g).is_positive() {
                return Err(violation(format!("ample_ref · {g} ≤ 0")));
            }
        }
        Ok(model.mori_generators().len())
    }));
    let classes = match sample_classes(model) {
        Ok(c) => c,
        Err(e) => {
            out.push(CheckReport {
                name: "sample classes".into(),
                passed: false,
                cases: 0,
                detail: e.to_string(),
            });
            return out;
        }
    };
    let flags = declared_flags(model);
    let points = declared_points(model);
    out.push(run_check("zariski invariants", || {
        classes.iter().try_for_each(|d| zariski_invariants(model, d)).map(|_| classes.len())
    }));
    let each_flag = |f: &dyn Fn(&DivisorClass, &Flag) -> Result<()>| -> Result<usize> {
        let mut n = 0;
        for d in &classes {
            for fl in &flags {
                f(d, fl)?;
                n += 1;
            }
        }
        Ok(n)
    };
    out.push(run_check("area equals half volume", || each_flag(&|d, fl| area_law(model, d, fl))));
    out.push(run_check("grid oracle", || each_flag(&|d, fl| grid_oracle(model, d, fl, 16).map(|_| ()))));
    out.push(run_check("origin and simplex criteria", || each_flag(&|d, fl| main_criteria(model, d, fl))));
    out.push(run_check("infinitesimal criteria", || {
        let mut n = 0;
        for d in &classes {
            for x in &points {
                triangle_criteria(model, d, x)?;
                n += 1;
            }
        }
        Ok(n)
    }));
    out.push(run_check("seshadri equals xi", || {
        let mut n = 0;
        for a in classes.iter().filter(|a| is_ample(model, a)) {
            for x in &points {
                seshadri_equals_xi(model, a, x)?;
                n += 1;
            }
        }
        Ok(n)
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_shape() {
        let m = test_matrix().unwrap();
        assert_eq!(m.len(), 6);
        for e in &m {
            assert!(!e.classes.is_empty() && !e.flags.is_empty(), "{}", e.name);
        }
        let ex = &m[5];
        assert!(ex.flags.contains(&Flag::new("E1", PointSpec::with(&[("E2", 1)]))));
        assert!(ex.points.contains(&BlowupSpec::on_curves(&["E1", "E3"])));
    }

    #[test]
    fn suite_passes_on_small_models() {
        for name in ["p2", "bl1p2", "example-interesting"] {
            for r in run_suite(&builtin(name).unwrap()) {
                assert!(r.passed, "{name}: {} {}", r.name, r.detail);
            }
        }
    }
}
