//! JSON, CSV and SVG renderings of results. JSON objects go through
//! `serde_json::Map`, which keeps keys sorted.

use std::collections::BTreeMap;

use locpos::lattice::DivisorClass;
use locpos::okounkov::{Affine, NOPolygon};
use locpos::scalars::{format_rational, ExactScalar, Rational};
use serde_json::{json, Value};

pub fn rational(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

/// Rationals as strings; `a + b√d` as an object with a non-authoritative
/// decimal approximation.
pub fn scalar(s: &ExactScalar) -> Value {
    match s {
        ExactScalar::Rational(r) => rational(r),
        ExactScalar::QuadExt { a, b, d } => json!({
            "a": rational(a),
            "b": rational(b),
            "d": d.to_string(),
            "approx": format!("{:.12}", s.to_f64()),
        }),
    }
}

pub fn class(d: &DivisorClass) -> Value {
    Value::Array(d.coords().iter().map(rational).collect())
}

pub fn coefficients(m: &BTreeMap<String, Rational>) -> Value {
    Value::Object(m.iter().map(|(k, v)| (k.clone(), rational(v))).collect())
}

fn affine(a: &Affine) -> Value {
    json!([rational(&a.c0), rational(&a.c1)])
}

pub fn point(p: &(ExactScalar, ExactScalar)) -> Value {
    json!([scalar(&p.0), scalar(&p.1)])
}

pub fn polygon(p: &NOPolygon, area: &ExactScalar) -> Value {
    let pieces: Vec<Value> = p
        .pieces
        .iter()
        .map(|piece| {
            json!({
                "t_lo": scalar(&piece.t_lo),
                "t_hi": scalar(&piece.t_hi),
                "alpha": affine(&piece.alpha),
                "beta": affine(&piece.beta),
                "support": piece.support,
                "negative": Value::Object(piece.negative.iter().map(|(k, v)| (k.clone(), affine(v))).collect()),
            })
        })
        .collect();
    json!({
        "flag_curve": p.flag_curve,
        "nu": rational(&p.nu),
        "mu": scalar(&p.mu),
        "vertices": p.vertices.iter().map(point).collect::<Vec<_>>(),
        "area": scalar(area),
        "pieces": pieces,
        "relative": p.relative,
    })
}

pub fn to_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// One row per chamber: `t_lo, t_hi, alpha0, alpha1, beta0, beta1, support`.
pub fn csv(p: &NOPolygon) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t_lo", "t_hi", "alpha0", "alpha1", "beta0", "beta1", "support"])
        .expect("in-memory write");
    for piece in &p.pieces {
        w.write_record([
            piece.t_lo.to_string(),
            piece.t_hi.to_string(),
            format_rational(&piece.alpha.c0),
            format_rational(&piece.alpha.c1),
            format_rational(&piece.beta.c0),
            format_rational(&piece.beta.c1),
            piece.support.join(";"),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// The polygon with the diagonal `y = t` and the simplices `Δ_λ` and
/// `Δ_ξ⁻¹` drawn over it. Coordinates are converted to floats here only.
pub fn svg(p: &NOPolygon, lambda: Option<&ExactScalar>, xi: Option<&ExactScalar>) -> String {
    let pts: Vec<(f64, f64)> = p.vertices.iter().map(|(t, y)| (t.to_f64(), y.to_f64())).collect();
    let max = pts.iter().fold(1e-9f64, |m, (t, y)| m.max(*t).max(*y));
    let (size, pad) = (400.0, 20.0);
    let scale = (size - 2.0 * pad) / max;
    let xy = |t: f64, y: f64| format!("{:.3},{:.3}", pad + t * scale, size - pad - y * scale);
    let poly = |v: &[(f64, f64)], style: &str| {
        let ps: Vec<String> = v.iter().map(|(t, y)| xy(*t, *y)).collect();
        format!("  <polygon points=\"{}\" {style}/>\n", ps.join(" "))
    };
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n"
    );
    out += &poly(&pts, "fill=\"#cfe3f5\" stroke=\"#1f4e79\" stroke-width=\"2\"");
    out += &format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n",
        pad,
        size - pad,
        pad + max * scale,
        size - pad - max * scale
    );
    if let Some(l) = lambda.map(ExactScalar::to_f64).filter(|l| *l > 0.0) {
        out += &poly(&[(0.0, 0.0), (l, 0.0), (0.0, l)], "fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\"");
    }
    if let Some(x) = xi.map(ExactScalar::to_f64).filter(|x| *x > 0.0) {
        out += &poly(&[(0.0, 0.0), (x, 0.0), (x, x)], "fill=\"none\" stroke=\"#27ae60\" stroke-width=\"1.5\"");
    }
    out += "</svg>\n";
    out
}
