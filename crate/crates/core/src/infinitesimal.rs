//! Blow-ups at a point and the invariants read off infinitesimal polygons:
//! `μ′`, `ξ`, moving Seshadri constants and generic infinitesimal polygons.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{CurveRecord, DivisorClass, ModelFamily, SurfaceModel};
use crate::models;
use crate::okounkov::{alpha_zero_until, okounkov_polygon, Flag, NOPolygon, PointSpec};
use crate::scalars::{int, ExactScalar, Rational};
use crate::zariski;

/// A new curve on a blow-up, given in the blown-up basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtraCurve {
    pub name: String,
    pub class: Vec<BigInt>,
    pub is_rational: Option<bool>,
    /// Direction label of the point where the curve meets the exceptional curve.
    pub tangent: Option<String>,
}

/// A point `x` of a model, described by the multiplicities of listed curves at `x`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlowupSpec {
    pub base_mults: BTreeMap<String, u32>,
    /// Tangent direction labels; curves sharing a label are tangent at `x`.
    /// A curve without a label has its own direction.
    pub tangents: BTreeMap<String, String>,
    pub extra_curves: Vec<ExtraCurve>,
    /// Whether `extra_curves` lists every new negative curve.
    pub extras_complete: bool,
    pub exceptional_name: Option<String>,
}

impl BlowupSpec {
    pub fn generic() -> Self {
        BlowupSpec::default()
    }

    /// A point lying on the listed curves with multiplicity one each, in
    /// pairwise distinct directions.
    pub fn on_curves(names: &[&str]) -> Self {
        BlowupSpec {
            base_mults: names.iter().map(|n| (n.to_string(), 1)).collect(),
            ..Default::default()
        }
    }

    pub fn is_generic(&self) -> bool {
        self.base_mults.values().all(|&m| m == 0) && self.extra_curves.is_empty()
    }

    pub fn mult(&self, curve: &str) -> u32 {
        self.base_mults.get(curve).copied().unwrap_or(0)
    }

    pub fn direction(&self, curve: &str) -> String {
        self.tangents.get(curve).cloned().unwrap_or_else(|| curve.to_string())
    }

    /// Curves passing through the point.
    pub fn curves_through(&self) -> BTreeSet<String> {
        self.base_mults.iter().filter(|(_, &m)| m > 0).map(|(n, _)| n.clone()).collect()
    }
}

/// Choice of the point `y` on the exceptional curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfFlagSpec {
    Generic,
    /// The point where the strict transform of the named curve meets `E`.
    On(String),
}

/// The blow-up `π: X′ → X` at a point together with its exceptional curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blowup {
    pub model: SurfaceModel,
    pub exceptional: String,
    pub base_rank: usize,
    pub spec: BlowupSpec,
    directions: BTreeMap<String, String>,
}

impl Blowup {
    pub fn pullback(&self, d: &DivisorClass) -> Result<DivisorClass> {
        if d.dim() != self.base_rank {
            return Err(Error::DimensionMismatch {
                expected: self.base_rank,
                found: d.dim(),
            });
        }
        Ok(d.extended(Rational::zero()))
    }

    pub fn exceptional_class(&self) -> DivisorClass {
        DivisorClass::basis(self.base_rank + 1, self.base_rank)
    }

    /// Curves meeting `E`, keyed by name, with their direction labels.
    pub fn directions(&self) -> &BTreeMap<String, String> {
        &self.directions
    }

    /// Distinct special points of `E` cut out by listed curves.
    pub fn special_points(&self) -> Vec<InfFlagSpec> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (name, dir) in &self.directions {
            if seen.insert(dir.clone()) {
                out.push(InfFlagSpec::On(name.clone()));
            }
        }
        out
    }

    pub fn flag(&self, y: &InfFlagSpec) -> Result<Flag> {
        match y {
            InfFlagSpec::Generic => Ok(Flag::generic(&self.exceptional)),
            InfFlagSpec::On(name) => {
                let dir = self
                    .directions
                    .get(name)
                    .ok_or_else(|| Error::InvalidFlag(format!("{name} does not meet {}", self.exceptional)))?;
                let e = self.exceptional_class();
                let mut local = BTreeMap::new();
                for (other, d) in &self.directions {
                    if d == dir {
                        let c = &self.model.curves[self.model.curve_index(other)?];
                        let m = self.model.pair(&c.class, &e).to_integer();
                        local.insert(other.clone(), u32::try_from(m).unwrap_or(u32::MAX));
                    }
                }
                Ok(Flag::new(&self.exceptional, PointSpec { local_mults: local }))
            }
        }
    }

    pub fn polygon(&self, d: &DivisorClass, y: &InfFlagSpec) -> Result<NOPolygon> {
        okounkov_polygon(&self.model, &self.pullback(d)?, &self.flag(y)?)
    }
}

fn fresh_label(model: &SurfaceModel) -> String {
    let taken = |s: &str| model.basis_labels.iter().any(|l| l == s) || model.curve(s).is_some();
    (1..).map(|k| format!("E{k}")).find(|s| !taken(s)).expect("unbounded search")
}

/// New curves through a general point, for families where they are known.
fn generic_extras(family: &ModelFamily) -> Option<Vec<(String, Vec<BigInt>)>> {
    let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    match family {
        ModelFamily::ProjectivePlaneBlowup { r: 0 } => Some(vec![("F1".into(), ints(&[1, -1]))]),
        ModelFamily::ProjectivePlaneBlowup { r } if *r < 8 => {
            let curves = models::enumerate_minus_one_curves(r + 1).ok()?;
            let last = *r as usize + 1;
            Some(
                curves
                    .into_iter()
                    .filter(|c| !c.0[last].is_zero() && !c.0[0].is_zero())
                    .map(|c| {
                        let v: Vec<BigInt> = c.0.iter().map(|x| x.to_integer()).collect();
                        (models::minus_one_curve_name(&v), v)
                    })
                    .collect(),
            )
        }
        ModelFamily::Hirzebruch { n } => {
            let mut v = vec![("f_x".to_string(), ints(&[0, 1, -1]))];
            if *n == 0 {
                v.push(("C0_x".to_string(), ints(&[1, 0, -1])));
            }
            Some(v)
        }
        _ => None,
    }
}

/// Blows up the point described by `spec`.
pub fn blow_up(model: &SurfaceModel, spec: &BlowupSpec) -> Result<Blowup> {
    let rho = model.rank();
    for name in spec.base_mults.keys().chain(spec.tangents.keys()) {
        model.curve_index(name)?;
    }
    let through: Vec<(&CurveRecord, u32)> = model
        .curves
        .iter()
        .map(|c| (c, spec.mult(&c.name)))
        .filter(|(_, m)| *m > 0)
        .collect();
    for (i, (a, ma)) in through.iter().enumerate() {
        for (b, mb) in &through[i + 1..] {
            let tangent = u32::from(spec.direction(&a.name) == spec.direction(&b.name));
            let need = Rational::from_integer((ma * mb + tangent).into());
            if model.pair(&a.class, &b.class) < need {
                return Err(Error::InconsistentMultiplicities(format!(
                    "{} and {} meet less than their multiplicities allow",
                    a.name, b.name
                )));
            }
        }
    }
    for (name, dir) in &spec.tangents {
        if spec.mult(name) == 0 && dir != name {
            return Err(Error::InconsistentMultiplicities(format!(
                "{name} has a tangent direction but does not pass through the point"
            )));
        }
    }

    let label = match &spec.exceptional_name {
        Some(n) => n.clone(),
        None => fresh_label(model),
    };
    let mut basis_labels = model.basis_labels.clone();
    basis_labels.push(label.clone());
    let mut gram: Vec<Vec<BigInt>> = model
        .gram
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.push(BigInt::zero());
            r
        })
        .collect();
    let mut last = vec![BigInt::zero(); rho];
    last.push(-BigInt::one());
    gram.push(last);

    let mut curves = Vec::new();
    let mut directions = BTreeMap::new();
    for c in &model.curves {
        let m = spec.mult(&c.name);
        curves.push(CurveRecord {
            name: c.name.clone(),
            class: c.class.extended(-int(m.into())),
            self_int: &c.self_int - BigInt::from(m) * BigInt::from(m),
            is_rational: c.is_rational,
        });
        if m > 0 {
            directions.insert(c.name.clone(), spec.direction(&c.name));
        }
    }
    curves.push(CurveRecord {
        name: label.clone(),
        class: DivisorClass::basis(rho + 1, rho),
        self_int: -BigInt::one(),
        is_rational: Some(true),
    });

    let generic = spec.is_generic();
    let auto = if generic { generic_extras(&model.family) } else { None };
    let auto_filled = auto.is_some();
    let mut extras: Vec<ExtraCurve> = spec.extra_curves.clone();
    for (name, class) in auto.unwrap_or_default() {
        extras.push(ExtraCurve {
            name,
            class,
            is_rational: Some(true),
            tangent: None,
        });
    }
    let e_class = DivisorClass::basis(rho + 1, rho);
    let mut partial = SurfaceModel {
        basis_labels,
        gram,
        curves: Vec::new(),
        ample_ref: DivisorClass::zero(rho + 1),
        canonical: model.canonical.as_ref().map(|k| k.extended(Rational::one())),
        effective_generators: None,
        completeness_declared: model.completeness_declared
            && model.effective_generators.is_none()
            && (spec.extras_complete || (generic && auto_filled)),
        family: match model.family {
            ModelFamily::ProjectivePlaneBlowup { r } if generic => ModelFamily::ProjectivePlaneBlowup { r: r + 1 },
            _ => ModelFamily::Other,
        },
        marked_point: None,
        metadata: model.metadata.clone(),
    };
    for x in extras {
        if x.class.len() != rho + 1 {
            return Err(Error::DimensionMismatch {
                expected: rho + 1,
                found: x.class.len(),
            });
        }
        let class = DivisorClass::from_bigints(&x.class);
        let self_int = partial.pair(&class, &class).to_integer();
        if partial.pair(&class, &e_class).is_positive() {
            directions.insert(x.name.clone(), x.tangent.clone().unwrap_or_else(|| x.name.clone()));
        }
        curves.push(CurveRecord {
            name: x.name,
            class,
            self_int,
            is_rational: x.is_rational,
        });
    }
    partial.curves = curves;

    let pulled = model.ample_ref.extended(Rational::zero());
    let mut k = Rational::one();
    let mut found = None;
    for _ in 0..40 {
        let cand = pulled.scale(&k).add_scaled(&-Rational::one(), &e_class);
        if partial.pair(&cand, &cand).is_positive()
            && partial.curves.iter().all(|c| partial.pair(&cand, &c.class).is_positive())
        {
            found = Some(cand);
            break;
        }
        k *= int(2);
    }
    partial.ample_ref = found.ok_or_else(|| {
        Error::InconsistentMultiplicities("no ample class of the form kπ*A − E".into())
    })?;
    partial.validate()?;
    Ok(Blowup {
        model: partial,
        exceptional: label,
        base_rank: rho,
        spec: spec.clone(),
        directions,
    })
}

pub fn infinitesimal_polygon(
    model: &SurfaceModel,
    d: &DivisorClass,
    x: &BlowupSpec,
    y: &InfFlagSpec,
) -> Result<NOPolygon> {
    blow_up(model, x)?.polygon(d, y)
}

pub fn generic_infinitesimal_polygon(model: &SurfaceModel, d: &DivisorClass, x: &BlowupSpec) -> Result<NOPolygon> {
    infinitesimal_polygon(model, d, x, &InfFlagSpec::Generic)
}

/// `μ(π*D; E)`, the asymptotic multiplicity of `D` at the point.
pub fn mu_prime(model: &SurfaceModel, d: &DivisorClass, x: &BlowupSpec) -> Result<ExactScalar> {
    Ok(generic_infinitesimal_polygon(model, d, x)?.mu)
}

/// Largest `ξ` with `Δ_ξ⁻¹` inside the polygon.
pub fn xi_of_polygon(poly: &NOPolygon) -> ExactScalar {
    let zero = ExactScalar::zero();
    if !poly.nu.is_zero() || poly.alpha_at(&zero) != Some(zero.clone()) {
        return zero;
    }
    let mut t_beta = poly.mu.clone();
    for p in &poly.pieces {
        // g(t) = β(t) − t is concave; find where it first turns negative
        let g1 = &p.beta.c1 - int(1);
        let g_hi = &p.beta.eval(&p.t_hi) - &p.t_hi;
        if g_hi.is_negative() {
            let g_lo = &p.beta.eval(&p.t_lo) - &p.t_lo;
            t_beta = if g_lo.is_negative() || g1.is_zero() {
                p.t_lo.clone()
            } else {
                ExactScalar::from(-&p.beta.c0 / g1)
            };
            break;
        }
    }
    alpha_zero_until(poly).min(t_beta)
}

/// `ξ(π*D)`, checked to be the same at the generic point and at every
/// special point of `E`.
pub fn xi(model: &SurfaceModel, d: &DivisorClass, x: &BlowupSpec) -> Result<ExactScalar> {
    let zp = zariski::zariski_decompose(model, d)?;
    for name in &zp.support {
        if x.mult(name) > 0 {
            return Err(Error::PointInNegLocus(name.clone()));
        }
    }
    let bl = blow_up(model, x)?;
    let generic = xi_of_polygon(&bl.polygon(d, &InfFlagSpec::Generic)?);
    for y in bl.special_points() {
        let v = xi_of_polygon(&bl.polygon(d, &y)?);
        if v != generic {
            return Err(Error::ModelInconsistency(format!(
                "ξ differs between the generic point ({generic}) and {y:?} ({v})"
            )));
        }
    }
    Ok(generic)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MovingSeshadri {
    InNeg,
    InNullNotNeg,
    Positive(ExactScalar),
}

pub fn moving_seshadri(model: &SurfaceModel, d: &DivisorClass, x: &BlowupSpec) -> Result<MovingSeshadri> {
    model.check_dim(d)?;
    if !zariski::is_big(model, d) {
        return Err(Error::NotBig);
    }
    let report = zariski::loci(model, d)?;
    let through = x.curves_through();
    if report.neg_curves.iter().any(|c| through.contains(c)) {
        return Ok(MovingSeshadri::InNeg);
    }
    if report.null_curves.iter().any(|c| through.contains(c)) {
        return Ok(MovingSeshadri::InNullNotNeg);
    }
    Ok(MovingSeshadri::Positive(xi(model, d, x)?))
}

/// Sorted distinct `t`-coordinates of the vertices.
pub fn vertex_t_coordinates(poly: &NOPolygon) -> Vec<ExactScalar> {
    let mut v: Vec<ExactScalar> = poly.vertices.iter().map(|p| p.0.clone()).collect();
    v.sort();
    v.dedup();
    v
}
