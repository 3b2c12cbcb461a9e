//! Builtin surface models, (−1)-curves on del Pezzo surfaces and the JSON
//! model file format.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infinitesimal::{BlowupSpec, ExtraCurve};
use crate::lattice::{CurveRecord, DivisorClass, ModelFamily, SurfaceModel};
use crate::scalars::{format_rational, parse_rational, Rational};

pub const SCHEMA_VERSION: u32 = 1;

/// All `aH − Σ bᵢEᵢ` with `a² − Σbᵢ² = −1` and `3a − Σbᵢ = 1` on `P²`
/// blown up at `r` general points, in the basis `H, E1, …, Er`.
pub fn enumerate_minus_one_curves(r: u32) -> Result<Vec<DivisorClass>> {
    if !(1..=8).contains(&r) {
        return Err(Error::OutOfRange(format!("r = {r} is outside 1..=8")));
    }
    let r = r as usize;
    let mut out: Vec<DivisorClass> = (0..r)
        .map(|i| {
            let mut v = vec![0i64; r + 1];
            v[i + 1] = 1;
            DivisorClass::from_ints(&v)
        })
        .collect();
    let mut b = vec![0i64; r];
    for a in 1..=6i64 {
        b.iter_mut().for_each(|x| *x = 0);
        loop {
            let sum: i64 = b.iter().sum();
            let sq: i64 = b.iter().map(|x| x * x).sum();
            if a * a - sq == -1 && 3 * a - sum == 1 {
                let mut v = vec![a];
                v.extend(b.iter().map(|x| -x));
                out.push(DivisorClass::from_ints(&v));
            }
            // odometer over bᵢ ∈ 0..=3
            let mut k = 0;
            while k < r && b[k] == 3 {
                b[k] = 0;
                k += 1;
            }
            if k == r {
                break;
            }
            b[k] += 1;
        }
    }
    Ok(out)
}

/// `E3`, `L12`, `Q12345`, or `D3_2111111` for `3H − 2E1 − E2 − … − E7`.
pub fn minus_one_curve_name(coords: &[BigInt]) -> String {
    let a = &coords[0];
    let b: Vec<BigInt> = coords[1..].iter().map(|x| -x).collect();
    if a == &BigInt::from(0) {
        let i = b.iter().position(|x| x == &BigInt::from(-1)).unwrap_or(0);
        return format!("E{}", i + 1);
    }
    let idx: String = b
        .iter()
        .enumerate()
        .filter(|(_, x)| *x == &BigInt::from(1))
        .map(|(i, _)| (i + 1).to_string())
        .collect();
    if a == &BigInt::from(1) {
        format!("L{idx}")
    } else if a == &BigInt::from(2) {
        format!("Q{idx}")
    } else {
        let digits: String = b.iter().map(|x| x.to_string()).collect();
        format!("D{a}_{digits}")
    }
}

fn ints(v: &[i64]) -> Vec<Vec<BigInt>> {
    let n = (v.len() as f64).sqrt() as usize;
    v.chunks(n).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn record(model_gram: &[Vec<BigInt>], name: &str, class: DivisorClass) -> CurveRecord {
    let mut s = Rational::from_integer(0.into());
    for (i, row) in model_gram.iter().enumerate() {
        for (j, g) in row.iter().enumerate() {
            s += &class.0[i] * &class.0[j] * Rational::from_integer(g.clone());
        }
    }
    CurveRecord {
        name: name.to_string(),
        class,
        self_int: s.to_integer(),
        is_rational: Some(true),
    }
}

/// `P²` blown up at `r ≤ 8` general points.
pub fn plane_blowup(r: u32) -> Result<SurfaceModel> {
    if r > 8 {
        return Err(Error::OutOfRange(format!("r = {r} is outside 0..=8")));
    }
    let n = r as usize + 1;
    let mut gram = vec![vec![BigInt::from(0); n]; n];
    gram[0][0] = BigInt::from(1);
    for (i, row) in gram.iter_mut().enumerate().skip(1) {
        row[i] = BigInt::from(-1);
    }
    let mut labels = vec!["H".to_string()];
    labels.extend((1..=r).map(|i| format!("E{i}")));
    let h = DivisorClass::basis(n, 0);
    let mut curves = vec![record(&gram, "L", h.clone())];
    if r >= 1 {
        for c in enumerate_minus_one_curves(r)? {
            let v = c.to_integers().expect("integral");
            curves.push(record(&gram, &minus_one_curve_name(&v), c));
        }
    }
    if r == 1 {
        curves.push(record(&gram, "F1", DivisorClass::from_ints(&[1, -1])));
    }
    let mut anti = vec![3i64];
    anti.extend(std::iter::repeat_n(-1, r as usize));
    let anti = DivisorClass::from_ints(&anti);
    let name = if r == 0 { "p2".to_string() } else { format!("bl{r}p2") };
    let m = SurfaceModel {
        basis_labels: labels,
        gram,
        curves,
        ample_ref: if r == 0 { h } else { anti.clone() },
        canonical: Some(-&anti),
        effective_generators: None,
        completeness_declared: true,
        family: ModelFamily::ProjectivePlaneBlowup { r },
        marked_point: None,
        metadata: [("name".to_string(), name)].into(),
    };
    m.validate()?;
    Ok(m)
}

/// The Hirzebruch surface `F_n` with basis `C0` (the section with
/// `C0² = −n`) and the fibre `f`.
pub fn hirzebruch(n: u32) -> Result<SurfaceModel> {
    let ni = i64::from(n);
    let gram = ints(&[-ni, 1, 1, 0]);
    let curves = vec![
        record(&gram, "C0", DivisorClass::from_ints(&[1, 0])),
        record(&gram, "f", DivisorClass::from_ints(&[0, 1])),
        record(&gram, "Cinf", DivisorClass::from_ints(&[1, ni])),
    ];
    let m = SurfaceModel {
        basis_labels: vec!["C0".into(), "f".into()],
        gram,
        curves,
        ample_ref: DivisorClass::from_ints(&[1, ni + 1]),
        canonical: Some(DivisorClass::from_ints(&[-2, -ni - 2])),
        effective_generators: None,
        completeness_declared: true,
        family: ModelFamily::Hirzebruch { n },
        marked_point: None,
        metadata: [("name".to_string(), format!("hirzebruch-{n}"))].into(),
    };
    m.validate()?;
    Ok(m)
}

/// `P²` blown up at a point and then at a point of the exceptional curve,
/// written in the basis of its three negative curves.
fn example_interesting() -> Result<SurfaceModel> {
    let gram = ints(&[-1, 1, 1, 1, -2, 0, 1, 0, -1]);
    let curves = vec![
        record(&gram, "E1", DivisorClass::from_ints(&[1, 0, 0])),
        record(&gram, "E2", DivisorClass::from_ints(&[0, 1, 0])),
        record(&gram, "E3", DivisorClass::from_ints(&[0, 0, 1])),
    ];
    let m = SurfaceModel {
        basis_labels: vec!["E1".into(), "E2".into(), "E3".into()],
        gram,
        curves,
        ample_ref: DivisorClass::from_ints(&[5, 2, 4]),
        canonical: Some(DivisorClass::from_ints(&[-4, -2, -3])),
        effective_generators: None,
        completeness_declared: true,
        family: ModelFamily::Other,
        marked_point: None,
        metadata: [
            ("name".to_string(), "example-interesting".to_string()),
            ("pullback_of_line".to_string(), "2E1 + E2 + E3".to_string()),
        ]
        .into(),
    };
    m.validate()?;
    Ok(m)
}

/// The one-point blow-up of `P²` with the point where the exceptional
/// curve meets the strict transform of a line through the centre marked.
fn example_interesting_base() -> Result<SurfaceModel> {
    let gram = ints(&[1, 0, 0, -1]);
    let curves = vec![
        record(&gram, "L", DivisorClass::from_ints(&[1, 0])),
        record(&gram, "E2", DivisorClass::from_ints(&[0, 1])),
        record(&gram, "E3", DivisorClass::from_ints(&[1, -1])),
    ];
    let m = SurfaceModel {
        basis_labels: vec!["H".into(), "E".into()],
        gram,
        curves,
        ample_ref: DivisorClass::from_ints(&[3, -1]),
        canonical: Some(DivisorClass::from_ints(&[-3, 1])),
        effective_generators: None,
        completeness_declared: true,
        family: ModelFamily::Other,
        marked_point: Some(BlowupSpec {
            base_mults: [("E2".to_string(), 1), ("E3".to_string(), 1)].into(),
            tangents: BTreeMap::new(),
            extra_curves: Vec::new(),
            extras_complete: true,
            exceptional_name: Some("E1".into()),
        }),
        metadata: [("name".to_string(), "example-interesting-base".to_string())].into(),
    };
    m.validate()?;
    Ok(m)
}

pub fn builtin_names() -> Vec<String> {
    let mut v = vec!["p2".to_string()];
    v.extend((1..=8).map(|r| format!("bl{r}p2")));
    v.extend((0..=3).map(|n| format!("hirzebruch-{n}")));
    v.push("example-interesting".into());
    v.push("example-interesting-base".into());
    v
}

/// Looks up a builtin model; `hirzebruch-<n>` accepts any `n ≤ 1000`.
pub fn builtin(name: &str) -> Result<SurfaceModel> {
    let unknown = || Error::UnknownModel(name.to_string());
    match name {
        "p2" => plane_blowup(0),
        "example-interesting" => example_interesting(),
        "example-interesting-base" => example_interesting_base(),
        _ => {
            if let Some(r) = name.strip_prefix("bl").and_then(|s| s.strip_suffix("p2")) {
                let r: u32 = r.parse().map_err(|_| unknown())?;
                if (1..=8).contains(&r) {
                    return plane_blowup(r);
                }
            }
            if let Some(n) = name.strip_prefix("hirzebruch-") {
                let n: u32 = n.parse().map_err(|_| unknown())?;
                if n <= 1000 {
                    return hirzebruch(n);
                }
            }
            Err(unknown())
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveFile {
    name: String,
    class: Vec<String>,
    self_int: String,
    is_rational: Option<bool>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExtraCurveFile {
    name: String,
    class: Vec<String>,
    is_rational: Option<bool>,
    tangent: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointFile {
    base_mults: BTreeMap<String, String>,
    #[serde(default)]
    tangents: BTreeMap<String, String>,
    #[serde(default)]
    extra_curves: Vec<ExtraCurveFile>,
    #[serde(default)]
    extras_complete: bool,
    exceptional_name: Option<String>,
}

/// On-disk model: integers as decimal strings, rationals as `"p/q"`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    schema_version: u32,
    rank: usize,
    basis: Vec<String>,
    gram: Vec<Vec<String>>,
    curves: Vec<CurveFile>,
    ample_ref: Vec<String>,
    canonical: Option<Vec<String>>,
    effective_generators: Option<Vec<Vec<String>>>,
    completeness_declared: bool,
    family: String,
    marked_point: Option<PointFile>,
    #[serde(default)]
    metadata: BTreeMap<String, String>,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::SchemaError(msg.into())
}

fn class_out(d: &DivisorClass) -> Vec<String> {
    d.0.iter().map(format_rational).collect()
}

fn class_in(v: &[String]) -> Result<DivisorClass> {
    v.iter()
        .map(|s| parse_rational(s).ok_or_else(|| schema(format!("bad rational {s:?}"))))
        .collect::<Result<Vec<_>>>()
        .map(DivisorClass::new)
}

fn int_in(s: &str) -> Result<BigInt> {
    s.parse().map_err(|_| schema(format!("bad integer {s:?}")))
}

fn ints_in(v: &[String]) -> Result<Vec<BigInt>> {
    v.iter().map(|s| int_in(s)).collect()
}

fn family_out(f: &ModelFamily) -> String {
    match f {
        ModelFamily::ProjectivePlaneBlowup { r } => format!("p2-blowup:{r}"),
        ModelFamily::Hirzebruch { n } => format!("hirzebruch:{n}"),
        ModelFamily::Other => "other".into(),
    }
}

fn family_in(s: &str) -> Result<ModelFamily> {
    let num = |t: &str| t.parse::<u32>().map_err(|_| schema(format!("bad family {s:?}")));
    if s == "other" {
        Ok(ModelFamily::Other)
    } else if let Some(r) = s.strip_prefix("p2-blowup:") {
        Ok(ModelFamily::ProjectivePlaneBlowup { r: num(r)? })
    } else if let Some(n) = s.strip_prefix("hirzebruch:") {
        Ok(ModelFamily::Hirzebruch { n: num(n)? })
    } else {
        Err(schema(format!("bad family {s:?}")))
    }
}

fn point_out(p: &BlowupSpec) -> PointFile {
    PointFile {
        base_mults: p.base_mults.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
        tangents: p.tangents.clone(),
        extra_curves: p
            .extra_curves
            .iter()
            .map(|x| ExtraCurveFile {
                name: x.name.clone(),
                class: x.class.iter().map(|c| c.to_string()).collect(),
                is_rational: x.is_rational,
                tangent: x.tangent.clone(),
            })
            .collect(),
        extras_complete: p.extras_complete,
        exceptional_name: p.exceptional_name.clone(),
    }
}

fn point_in(p: PointFile) -> Result<BlowupSpec> {
    Ok(BlowupSpec {
        base_mults: p
            .base_mults
            .into_iter()
            .map(|(k, v)| v.parse::<u32>().map(|m| (k, m)).map_err(|_| schema(format!("bad multiplicity {v:?}"))))
            .collect::<Result<_>>()?,
        tangents: p.tangents,
        extra_curves: p
            .extra_curves
            .into_iter()
            .map(|x| {
                Ok(ExtraCurve {
                    name: x.name,
                    class: ints_in(&x.class)?,
                    is_rational: x.is_rational,
                    tangent: x.tangent,
                })
            })
            .collect::<Result<_>>()?,
        extras_complete: p.extras_complete,
        exceptional_name: p.exceptional_name,
    })
}

/// Pointwise parse of a standalone point file (the `marked_point` schema).
pub fn point_from_json(text: &str) -> Result<BlowupSpec> {
    let p: PointFile = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    point_in(p)
}

pub fn point_to_json(p: &BlowupSpec) -> String {
    let v = serde_json::to_value(point_out(p)).expect("serializable");
    serde_json::to_string_pretty(&v).expect("serializable") + "\n"
}

pub fn to_json(m: &SurfaceModel) -> String {
    let file = ModelFile {
        schema_version: SCHEMA_VERSION,
        rank: m.rank(),
        basis: m.basis_labels.clone(),
        gram: m.gram.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
        curves: m
            .curves
            .iter()
            .map(|c| CurveFile {
                name: c.name.clone(),
                class: class_out(&c.class),
                self_int: c.self_int.to_string(),
                is_rational: c.is_rational,
            })
            .collect(),
        ample_ref: class_out(&m.ample_ref),
        canonical: m.canonical.as_ref().map(class_out),
        effective_generators: m.effective_generators.as_ref().map(|g| g.iter().map(class_out).collect()),
        completeness_declared: m.completeness_declared,
        family: family_out(&m.family),
        marked_point: m.marked_point.as_ref().map(point_out),
        metadata: m.metadata.clone(),
    };
    // Going through a Value sorts object keys.
    let v = serde_json::to_value(file).expect("serializable");
    serde_json::to_string_pretty(&v).expect("serializable") + "\n"
}

pub fn from_json(text: &str) -> Result<SurfaceModel> {
    let f: ModelFile = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    if f.schema_version != SCHEMA_VERSION {
        return Err(schema(format!("unsupported schema_version {}", f.schema_version)));
    }
    if f.basis.len() != f.rank {
        return Err(schema("basis length differs from rank"));
    }
    let m = SurfaceModel {
        basis_labels: f.basis,
        gram: f.gram.iter().map(|r| ints_in(r)).collect::<Result<_>>()?,
        curves: f
            .curves
            .into_iter()
            .map(|c| {
                Ok(CurveRecord {
                    name: c.name,
                    class: class_in(&c.class)?,
                    self_int: int_in(&c.self_int)?,
                    is_rational: c.is_rational,
                })
            })
            .collect::<Result<_>>()?,
        ample_ref: class_in(&f.ample_ref)?,
        canonical: f.canonical.as_deref().map(class_in).transpose()?,
        effective_generators: f
            .effective_generators
            .map(|g| g.iter().map(|c| class_in(c)).collect::<Result<Vec<_>>>())
            .transpose()?,
        completeness_declared: f.completeness_declared,
        family: family_in(&f.family)?,
        marked_point: f.marked_point.map(point_in).transpose()?,
        metadata: f.metadata,
    };
    m.validate()?;
    Ok(m)
}

pub fn load(path: &Path) -> Result<SurfaceModel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    from_json(&text)
}

pub fn save(model: &SurfaceModel, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(model)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{dual_cone, nef_cone};

    /// Independent count: solve the two equations directly for each `a`.
    fn brute_force_count(r: usize) -> usize {
        let mut count = r;
        for a in 1..=6i64 {
            let mut b = vec![0i64; r];
            loop {
                if b.iter().sum::<i64>() == 3 * a - 1 && b.iter().map(|x| x * x).sum::<i64>() == a * a + 1 {
                    count += 1;
                }
                let mut k = 0;
                while k < r && b[k] == 3 {
                    b[k] = 0;
                    k += 1;
                }
                if k == r {
                    break;
                }
                b[k] += 1;
            }
        }
        count
    }

    #[test]
    fn minus_one_counts() {
        let expected = [1, 3, 6, 10, 16, 27, 56, 240];
        for r in 1..=8u32 {
            let n = enumerate_minus_one_curves(r).unwrap().len();
            assert_eq!(n, expected[r as usize - 1], "r = {r}");
            assert_eq!(n, brute_force_count(r as usize));
        }
        assert!(enumerate_minus_one_curves(0).is_err());
        assert!(enumerate_minus_one_curves(9).is_err());
    }

    #[test]
    fn names() {
        let n = |v: &[i64]| minus_one_curve_name(&v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        assert_eq!(n(&[0, 0, 1]), "E2");
        assert_eq!(n(&[1, -1, -1, 0]), "L12");
        assert_eq!(n(&[2, -1, -1, -1, -1, -1]), "Q12345");
        assert_eq!(n(&[3, -2, -1, -1, -1, -1, -1, -1]), "D3_2111111");
    }

    #[test]
    fn builtins_validate() {
        for name in builtin_names() {
            let m = builtin(&name).unwrap();
            m.validate().unwrap();
            for g in m.mori_generators() {
                assert!(m.pair(&m.ample_ref, &g) > Rational::from_integer(0.into()), "{name}");
            }
        }
        assert_eq!(builtin("bl3p2").unwrap().negative_curves().count(), 6);
        assert_eq!(builtin("p2").unwrap().rank(), 1);
        assert!(matches!(builtin("bl9p2"), Err(Error::UnknownModel(_))));
        assert!(matches!(builtin("k3"), Err(Error::UnknownModel(_))));
    }

    #[test]
    fn dual_round_trip_small_models() {
        for name in ["p2", "bl1p2", "bl2p2", "bl3p2", "bl4p2", "hirzebruch-0", "hirzebruch-2", "example-interesting"] {
            let m = builtin(name).unwrap();
            let nef = nef_cone(&m).unwrap();
            let back = dual_cone(&nef.generators, &m).unwrap();
            assert_eq!(back.generators, {
                let mut v = nef.facet_normals.clone();
                v.sort();
                v
            }, "{name}");
            for g in &nef.generators {
                for u in &nef.facet_normals {
                    assert!(m.pair(g, u) >= Rational::from_integer(0.into()));
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        for name in builtin_names() {
            let m = builtin(&name).unwrap();
            let text = to_json(&m);
            let back = from_json(&text).unwrap();
            assert_eq!(back, m, "{name}");
            assert_eq!(to_json(&back), text);
        }
    }

    #[test]
    fn tampered_files() {
        let m = builtin("bl1p2").unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&to_json(&m)).unwrap();
        v["gram"][0][1] = "1".into();
        assert_eq!(from_json(&v.to_string()), Err(Error::InvariantViolation("gram symmetric".into())));
        let mut v: serde_json::Value = serde_json::from_str(&to_json(&m)).unwrap();
        v["gram"][1][1] = "1".into();
        assert_eq!(from_json(&v.to_string()), Err(Error::InvariantViolation("Hodge signature".into())));
        assert!(matches!(from_json("{\"rank\": 1}"), Err(Error::SchemaError(_))));
    }
}
