//! Newton–Okounkov polygons of big classes with respect to flags `(C, x)`,
//! computed by walking the Zariski chambers of `D − tC`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::scalars::{int, positive_quadratic_root, ExactScalar, Rational};
use crate::zariski::{self, chamber_at};

/// The point `x` of a flag curve `C`, given by the local intersection
/// numbers `(E·C)_x` of the other listed curves through `x`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PointSpec {
    pub local_mults: BTreeMap<String, u32>,
}

impl PointSpec {
    pub fn generic() -> Self {
        PointSpec::default()
    }

    pub fn with(entries: &[(&str, u32)]) -> Self {
        PointSpec {
            local_mults: entries.iter().map(|(n, m)| (n.to_string(), *m)).collect(),
        }
    }

    pub fn is_generic(&self) -> bool {
        self.local_mults.values().all(|&m| m == 0)
    }
}

/// An admissible flag: a curve and a smooth point on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    pub curve: String,
    pub point: PointSpec,
}

impl Flag {
    pub fn new(curve: &str, point: PointSpec) -> Self {
        Flag {
            curve: curve.to_string(),
            point,
        }
    }

    pub fn generic(curve: &str) -> Self {
        Self::new(curve, PointSpec::generic())
    }
}

/// `c0 + c1·t`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    pub c0: Rational,
    pub c1: Rational,
}

impl Affine {
    pub fn eval(&self, t: &ExactScalar) -> ExactScalar {
        &(t * &self.c1) + &self.c0
    }

    pub fn eval_rational(&self, t: &Rational) -> Rational {
        &self.c0 + &self.c1 * t
    }
}

/// One chamber of the walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub t_lo: ExactScalar,
    pub t_hi: ExactScalar,
    pub alpha: Affine,
    pub beta: Affine,
    pub support: Vec<String>,
    /// Coefficients of `N_t` on this chamber.
    pub negative: BTreeMap<String, Affine>,
}

/// `{ν ≤ t ≤ μ, α(t) ≤ y ≤ β(t)}`, with vertices listed counterclockwise
/// starting from the lexicographically smallest one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NOPolygon {
    pub flag_curve: String,
    pub nu: Rational,
    pub mu: ExactScalar,
    pub pieces: Vec<Piece>,
    pub vertices: Vec<(ExactScalar, ExactScalar)>,
    pub relative: bool,
}

impl NOPolygon {
    fn piece_at(&self, t: &ExactScalar) -> Option<&Piece> {
        self.pieces.iter().find(|p| &p.t_lo <= t && t <= &p.t_hi)
    }

    pub fn alpha_at(&self, t: &ExactScalar) -> Option<ExactScalar> {
        self.piece_at(t).map(|p| p.alpha.eval(t))
    }

    pub fn beta_at(&self, t: &ExactScalar) -> Option<ExactScalar> {
        self.piece_at(t).map(|p| p.beta.eval(t))
    }

    pub fn contains(&self, t: &ExactScalar, y: &ExactScalar) -> bool {
        match self.piece_at(t) {
            Some(p) => &p.alpha.eval(t) <= y && y <= &p.beta.eval(t),
            None => false,
        }
    }

    /// Breakpoints `ν = t₀ < t₁ < … < μ` of the walk.
    pub fn breakpoints(&self) -> Vec<ExactScalar> {
        let mut v: Vec<ExactScalar> = self.pieces.iter().map(|p| p.t_lo.clone()).collect();
        if let Some(last) = self.pieces.last() {
            v.push(last.t_hi.clone());
        }
        v
    }
}

fn cross(o: &(ExactScalar, ExactScalar), a: &(ExactScalar, ExactScalar), b: &(ExactScalar, ExactScalar)) -> ExactScalar {
    &(&(&a.0 - &o.0) * &(&b.1 - &o.1)) - &(&(&a.1 - &o.1) * &(&b.0 - &o.0))
}

/// Removes repeated and collinear points and rotates the smallest point first.
pub(crate) fn canonical_vertices(mut pts: Vec<(ExactScalar, ExactScalar)>) -> Vec<(ExactScalar, ExactScalar)> {
    pts.dedup();
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    loop {
        let n = pts.len();
        if n < 3 {
            break;
        }
        let mut removed = false;
        for i in 0..n {
            let prev = &pts[(i + n - 1) % n];
            let next = &pts[(i + 1) % n];
            let cur = &pts[i];
            if cross(prev, cur, next).is_zero() {
                let forward = &(&(&cur.0 - &prev.0) * &(&next.0 - &cur.0))
                    + &(&(&cur.1 - &prev.1) * &(&next.1 - &cur.1));
                if forward.is_positive() || cur == prev || cur == next {
                    pts.remove(i);
                    removed = true;
                    break;
                }
            }
        }
        if !removed {
            break;
        }
    }
    if let Some(k) = (0..pts.len()).min_by(|&a, &b| pts[a].cmp(&pts[b])) {
        pts.rotate_left(k);
    }
    pts
}

fn vertices_of(pieces: &[Piece]) -> Vec<(ExactScalar, ExactScalar)> {
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for p in pieces {
        lower.push((p.t_lo.clone(), p.alpha.eval(&p.t_lo)));
        upper.push((p.t_lo.clone(), p.beta.eval(&p.t_lo)));
    }
    if let Some(p) = pieces.last() {
        lower.push((p.t_hi.clone(), p.alpha.eval(&p.t_hi)));
        upper.push((p.t_hi.clone(), p.beta.eval(&p.t_hi)));
    }
    upper.reverse();
    lower.extend(upper);
    canonical_vertices(lower)
}

pub(crate) fn check_flag(model: &SurfaceModel, flag: &Flag) -> Result<usize> {
    let c = model.curve_index(&flag.curve)?;
    for (name, &m) in &flag.point.local_mults {
        if name == &flag.curve {
            return Err(Error::InvalidFlag(format!("{name} is the flag curve itself")));
        }
        let e = model.curve_index(name)?;
        if m > 0 && Rational::from_integer(m.into()) > model.pair(&model.curves[e].class, &model.curves[c].class) {
            return Err(Error::InvalidFlag(format!(
                "local intersection of {name} with {} exceeds the global one",
                flag.curve
            )));
        }
    }
    Ok(c)
}

/// The polygon `Δ_{(C,x)}(D)` of a big class.
pub fn okounkov_polygon(model: &SurfaceModel, d: &DivisorClass, flag: &Flag) -> Result<NOPolygon> {
    model.check_dim(d)?;
    let ci = check_flag(model, flag)?;
    if !zariski::is_big(model, d) {
        return Err(Error::NotBig);
    }
    let c_class = model.curves[ci].class.clone();
    let zp = zariski::zariski_decompose(model, d)?;
    let nu = zp.negative.get(&flag.curve).cloned().unwrap_or_else(Rational::zero);
    let d1 = -&c_class;
    let local = |i: usize| -> Rational {
        Rational::from_integer(flag.point.local_mults.get(&model.curves[i].name).copied().unwrap_or(0).into())
    };

    let mut pieces = Vec::new();
    let mut t = nu.clone();
    for _ in 0..model.curves.len() + 2 {
        let ch = chamber_at(model, d, &d1, &t)?;
        if ch.support.contains(&ci) {
            return Err(Error::FlagCurveReenters(flag.curve.clone()));
        }
        let mut alpha = Affine {
            c0: Rational::zero(),
            c1: Rational::zero(),
        };
        let mut negative = BTreeMap::new();
        for (k, &i) in ch.support.iter().enumerate() {
            let (a0, a1) = &ch.coeffs[k];
            alpha.c0 += a0 * local(i);
            alpha.c1 += a1 * local(i);
            negative.insert(
                model.curves[i].name.clone(),
                Affine {
                    c0: a0.clone(),
                    c1: a1.clone(),
                },
            );
        }
        let beta = Affine {
            c0: &alpha.c0 + model.pair(&ch.p0, &c_class),
            c1: &alpha.c1 + model.pair(&ch.p1, &c_class),
        };
        let support: Vec<String> = ch.support.iter().map(|&i| model.curves[i].name.clone()).collect();

        let end = positive_quadratic_root(
            &model.pair(&ch.p1, &ch.p1),
            &(int(2) * model.pair(&ch.p0, &ch.p1)),
            &model.pair(&ch.p0, &ch.p0),
            &ExactScalar::from(&t),
        );
        let mut wall: Option<Rational> = None;
        for (j, cur) in model.curves.iter().enumerate() {
            if ch.support.contains(&j) {
                continue;
            }
            let u0 = model.pair(&ch.p0, &cur.class);
            let u1 = model.pair(&ch.p1, &cur.class);
            if u1.is_negative() {
                let r = -u0 / u1;
                if r > t && wall.as_ref().is_none_or(|w| &r < w) {
                    wall = Some(r);
                }
            }
        }
        let stop = match (&end, &wall) {
            (Ok(e), Some(w)) => e <= &ExactScalar::from(w),
            (Ok(_), None) => true,
            (Err(_), Some(_)) => false,
            (Err(_), None) => {
                return Err(Error::ModelInconsistency(format!(
                    "{} − t·{} stays big for all t",
                    d, flag.curve
                )))
            }
        };
        let t_lo = ExactScalar::from(&t);
        if stop {
            let mu = end.expect("root exists when stopping");
            pieces.push(Piece {
                t_lo,
                t_hi: mu.clone(),
                alpha,
                beta,
                support,
                negative,
            });
            let vertices = vertices_of(&pieces);
            return Ok(NOPolygon {
                flag_curve: flag.curve.clone(),
                nu,
                mu,
                pieces,
                vertices,
                relative: !model.completeness_declared,
            });
        }
        let w = wall.expect("wall exists when not stopping");
        pieces.push(Piece {
            t_lo,
            t_hi: ExactScalar::from(&w),
            alpha,
            beta,
            support,
            negative,
        });
        t = w;
    }
    Err(Error::ModelInconsistency("chamber walk does not terminate".into()))
}

/// `sup{t > 0 : D − tC big}`.
pub fn mu_sup(model: &SurfaceModel, d: &DivisorClass, curve: &str) -> Result<ExactScalar> {
    Ok(okounkov_polygon(model, d, &Flag::generic(curve))?.mu)
}

/// Shoelace area of the vertex list.
pub fn polygon_area(poly: &NOPolygon) -> ExactScalar {
    let v = &poly.vertices;
    let n = v.len();
    let mut twice = ExactScalar::zero();
    for i in 0..n {
        let (a, b) = (&v[i], &v[(i + 1) % n]);
        twice = &twice + &(&(&a.0 * &b.1) - &(&b.0 * &a.1));
    }
    &twice / &ExactScalar::from(2)
}

/// The segment `[α(t), β(t)]`.
pub fn vertical_slice(poly: &NOPolygon, t: &ExactScalar) -> Result<(ExactScalar, ExactScalar)> {
    let p = poly
        .piece_at(t)
        .ok_or_else(|| Error::OutOfRange(format!("t = {t} outside [{}, {}]", poly.nu, poly.mu)))?;
    Ok((p.alpha.eval(t), p.beta.eval(t)))
}

/// The part of the polygon with `t ≥ t0`.
pub fn truncate(poly: &NOPolygon, t0: &Rational) -> Result<NOPolygon> {
    let t0s = ExactScalar::from(t0);
    if t0s > poly.mu {
        return Err(Error::OutOfRange(format!("t = {t0} beyond μ = {}", poly.mu)));
    }
    let mut pieces: Vec<Piece> = poly.pieces.iter().filter(|p| p.t_hi > t0s).cloned().collect();
    if let Some(first) = pieces.first_mut() {
        if first.t_lo < t0s {
            first.t_lo = t0s.clone();
        }
    }
    let vertices = vertices_of(&pieces);
    Ok(NOPolygon {
        nu: poly.nu.clone().max(t0.clone()),
        pieces,
        vertices,
        ..poly.clone()
    })
}

/// Translates by `(s, 0)`.
pub fn translate(poly: &NOPolygon, s: &Rational) -> NOPolygon {
    let shift = |a: &Affine| Affine {
        c0: &a.c0 - &a.c1 * s,
        c1: a.c1.clone(),
    };
    let ss = ExactScalar::from(s);
    let pieces: Vec<Piece> = poly
        .pieces
        .iter()
        .map(|p| Piece {
            t_lo: &p.t_lo + &ss,
            t_hi: &p.t_hi + &ss,
            alpha: shift(&p.alpha),
            beta: shift(&p.beta),
            support: p.support.clone(),
            negative: p.negative.iter().map(|(k, v)| (k.clone(), shift(v))).collect(),
        })
        .collect();
    let vertices = vertices_of(&pieces);
    NOPolygon {
        nu: &poly.nu + s,
        mu: &poly.mu + &ss,
        pieces,
        vertices,
        ..poly.clone()
    }
}

/// `Δ(D)_{t ≥ t0} = Δ(D − t0·C) + (t0, 0)`, compared on vertices.
pub fn shift_check(model: &SurfaceModel, d: &DivisorClass, flag: &Flag, t0: &Rational) -> Result<bool> {
    let c = model.curves[check_flag(model, flag)?].class.clone();
    let full = okounkov_polygon(model, d, flag)?;
    let shifted = okounkov_polygon(model, &d.add_scaled(&-t0, &c), flag)?;
    let lhs = if t0.is_negative() { full } else { truncate(&full, t0)? };
    Ok(lhs.vertices == translate(&shifted, t0).vertices)
}

/// The simplex `Δ_λ` data at the flag point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Criterion {
    pub origin_in: bool,
    pub lambda: ExactScalar,
}

/// `sup{t : α ≡ 0 on [ν, t]}`, assuming `α(ν) = 0`.
pub(crate) fn alpha_zero_until(poly: &NOPolygon) -> ExactScalar {
    for p in &poly.pieces {
        if !p.alpha.c1.is_zero() || !p.alpha.eval(&p.t_lo).is_zero() {
            return p.t_lo.clone();
        }
    }
    poly.mu.clone()
}

/// Largest `λ` with `Δ_λ` inside the polygon; 0 when the origin is outside.
pub fn largest_simplex(poly: &NOPolygon) -> ExactScalar {
    let zero = ExactScalar::zero();
    if !poly.nu.is_zero() || poly.alpha_at(&zero) != Some(zero.clone()) {
        return zero;
    }
    let beta0 = poly.beta_at(&zero).expect("0 lies in [ν, μ]");
    alpha_zero_until(poly).min(beta0).min(poly.mu.clone())
}

pub fn criterion_at_point(model: &SurfaceModel, d: &DivisorClass, flag: &Flag) -> Result<Criterion> {
    let poly = okounkov_polygon(model, d, flag)?;
    let zero = ExactScalar::zero();
    let origin_in = poly.nu.is_zero() && poly.alpha_at(&zero) == Some(zero);
    Ok(Criterion {
        origin_in,
        lambda: largest_simplex(&poly),
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValuativeContext {
    /// `(λ, λ′)` with `Δ_{λ,λ′}` inside the polygon.
    pub lambda: Option<(ExactScalar, ExactScalar)>,
    /// `ξ` with `Δ_ξ⁻¹` inside an infinitesimal polygon.
    pub xi: Option<ExactScalar>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValuativeClass {
    CertifiedInterior,
    CertifiedHorizontal,
    CertifiedVertical,
    CertifiedDiagonal,
    BoundaryUnknown,
    Outside,
}

pub fn classify_valuative(poly: &NOPolygon, point: (&Rational, &Rational), ctx: &ValuativeContext) -> ValuativeClass {
    let t = ExactScalar::from(point.0);
    let y = ExactScalar::from(point.1);
    if !poly.contains(&t, &y) {
        return ValuativeClass::Outside;
    }
    let strictly = ExactScalar::from(&poly.nu) < t
        && t < poly.mu
        && poly.alpha_at(&t).is_some_and(|a| a < y)
        && poly.beta_at(&t).is_some_and(|b| y < b);
    if strictly {
        return ValuativeClass::CertifiedInterior;
    }
    let zero = ExactScalar::zero();
    if let Some((l, lp)) = &ctx.lambda {
        let inside = poly.contains(&zero, &zero) && poly.contains(l, &zero) && poly.contains(&zero, lp);
        if inside {
            if y.is_zero() && !t.is_negative() && &t < l {
                return ValuativeClass::CertifiedHorizontal;
            }
            if t.is_zero() && !y.is_negative() && &y < lp {
                return ValuativeClass::CertifiedVertical;
            }
        }
    }
    if let Some(xi) = &ctx.xi {
        let inside = poly.contains(&zero, &zero) && poly.contains(xi, &zero) && poly.contains(xi, xi);
        if inside && !t.is_negative() && &t < xi {
            if y == t {
                return ValuativeClass::CertifiedDiagonal;
            }
            if y.is_zero() {
                return ValuativeClass::CertifiedHorizontal;
            }
        }
    }
    ValuativeClass::BoundaryUnknown
}
