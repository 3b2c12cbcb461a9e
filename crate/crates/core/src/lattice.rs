//! Surface models given by intersection data, divisor classes, the
//! intersection pairing and cone computations in the Néron–Severi space.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::cone;
use crate::error::{Error, Result};
use crate::infinitesimal::BlowupSpec;
use crate::scalars::{format_rational, Rational, RationalMatrix};

/// A class in `N¹(X)_ℚ`, written in the model basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass(pub Vec<Rational>);

impl DivisorClass {
    pub fn new(coords: Vec<Rational>) -> Self {
        DivisorClass(coords)
    }

    pub fn zero(dim: usize) -> Self {
        DivisorClass(vec![Rational::zero(); dim])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        DivisorClass(coords.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn from_bigints(coords: &[BigInt]) -> Self {
        DivisorClass(coords.iter().cloned().map(Rational::from_integer).collect())
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut c = Self::zero(dim);
        c.0[i] = Rational::from_integer(1.into());
        c
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.is_integral().then(|| self.0.iter().map(|c| c.to_integer()).collect())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        DivisorClass(self.0.iter().map(|c| c * s).collect())
    }

    /// `self + s·other`
    pub fn add_scaled(&self, s: &Rational, other: &DivisorClass) -> Self {
        assert_eq!(self.dim(), other.dim(), "divisor dimensions differ");
        DivisorClass(self.0.iter().zip(&other.0).map(|(a, b)| a + s * b).collect())
    }

    /// Appends a coordinate, e.g. the exceptional coefficient after a blow-up.
    pub fn extended(&self, last: Rational) -> Self {
        let mut v = self.0.clone();
        v.push(last);
        DivisorClass(v)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.dim(), rhs.dim(), "divisor dimensions differ");
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.dim(), rhs.dim(), "divisor dimensions differ");
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&DivisorClass> for &Rational {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

/// An irreducible curve known to the model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveRecord {
    pub name: String,
    pub class: DivisorClass,
    pub self_int: BigInt,
    pub is_rational: Option<bool>,
}

impl CurveRecord {
    pub fn is_negative(&self) -> bool {
        self.self_int.is_negative()
    }
}

/// Where a model comes from, used to fill in new curves after blowing up a
/// general point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelFamily {
    /// `P²` blown up at `r` general points, basis `H, E1, …, Er`.
    ProjectivePlaneBlowup { r: u32 },
    /// The Hirzebruch surface `F_n`, basis `C0, f`.
    Hirzebruch { n: u32 },
    Other,
}

/// A smooth projective surface presented by its intersection lattice and a
/// list of curves declared to generate the Mori cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceModel {
    pub basis_labels: Vec<String>,
    pub gram: Vec<Vec<BigInt>>,
    pub curves: Vec<CurveRecord>,
    pub ample_ref: DivisorClass,
    pub canonical: Option<DivisorClass>,
    pub effective_generators: Option<Vec<DivisorClass>>,
    pub completeness_declared: bool,
    pub family: ModelFamily,
    /// A distinguished point, used by default for infinitesimal queries.
    pub marked_point: Option<BlowupSpec>,
    pub metadata: BTreeMap<String, String>,
}

impl SurfaceModel {
    pub fn rank(&self) -> usize {
        self.basis_labels.len()
    }

    pub fn gram_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_rows(
            self.gram
                .iter()
                .map(|r| r.iter().cloned().map(Rational::from_integer).collect())
                .collect(),
        )
        .expect("gram is rectangular")
    }

    /// `G·d`, the functional `⟨·, d⟩` in coordinates.
    pub fn gram_apply(&self, d: &DivisorClass) -> Vec<Rational> {
        self.gram
            .iter()
            .map(|row| row.iter().zip(&d.0).map(|(g, x)| x * g).sum())
            .collect()
    }

    /// Intersection number; panics on a dimension mismatch.
    pub fn pair(&self, a: &DivisorClass, b: &DivisorClass) -> Rational {
        assert_eq!(a.dim(), self.rank(), "divisor dimension differs from model rank");
        assert_eq!(b.dim(), self.rank(), "divisor dimension differs from model rank");
        self.gram_apply(b).iter().zip(&a.0).map(|(x, y)| x * y).sum()
    }

    pub fn pairing(&self, a: &DivisorClass, b: &DivisorClass) -> Result<Rational> {
        for d in [a, b] {
            if d.dim() != self.rank() {
                return Err(Error::DimensionMismatch {
                    expected: self.rank(),
                    found: d.dim(),
                });
            }
        }
        Ok(self.pair(a, b))
    }

    /// `(Cᵢ·Cⱼ)` over the listed curves, computed in integers.
    pub fn curve_gram(&self) -> Vec<Vec<Rational>> {
        let ints: Vec<Vec<BigInt>> = self.curves.iter().map(|c| c.class.0.iter().map(|x| x.to_integer()).collect()).collect();
        let applied: Vec<Vec<BigInt>> = ints
            .iter()
            .map(|v| self.gram.iter().map(|row| row.iter().zip(v).map(|(g, x)| g * x).sum()).collect())
            .collect();
        ints.iter()
            .map(|a| {
                applied
                    .iter()
                    .map(|gb| Rational::from_integer(a.iter().zip(gb).map(|(x, y)| x * y).sum()))
                    .collect()
            })
            .collect()
    }

    pub fn self_intersection(&self, d: &DivisorClass) -> Rational {
        self.pair(d, d)
    }

    pub fn curve(&self, name: &str) -> Option<&CurveRecord> {
        self.curves.iter().find(|c| c.name == name)
    }

    pub fn curve_index(&self, name: &str) -> Result<usize> {
        self.curves
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::UnknownCurve(name.to_string()))
    }

    pub fn basis_index(&self, label: &str) -> Option<usize> {
        self.basis_labels.iter().position(|l| l == label)
    }

    pub fn negative_curves(&self) -> impl Iterator<Item = &CurveRecord> {
        self.curves.iter().filter(|c| c.is_negative())
    }

    /// Generators of the effective cone: the declared ones, else the curve classes.
    pub fn mori_generators(&self) -> Vec<DivisorClass> {
        match &self.effective_generators {
            Some(g) => g.clone(),
            None => self.curves.iter().map(|c| c.class.clone()).collect(),
        }
    }

    pub fn check_dim(&self, d: &DivisorClass) -> Result<()> {
        if d.dim() == self.rank() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: d.dim(),
            })
        }
    }

    /// Re-verifies every structural invariant, naming the first failure.
    pub fn validate(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::InvariantViolation(what.to_string()));
        let rho = self.rank();
        if rho == 0 {
            return fail("positive rank");
        }
        if self.gram.len() != rho || self.gram.iter().any(|r| r.len() != rho) {
            return fail("gram dimensions");
        }
        let g = self.gram_matrix();
        if !g.is_symmetric() {
            return fail("gram symmetric");
        }
        let inertia = g.inertia()?;
        if inertia.positive != 1 || inertia.negative != rho - 1 || inertia.zero != 0 {
            return fail("Hodge signature");
        }
        let labels: BTreeSet<&String> = self.basis_labels.iter().collect();
        if labels.len() != rho {
            return fail("basis labels unique");
        }
        let mut names = BTreeSet::new();
        for c in &self.curves {
            if c.class.dim() != rho {
                return fail("curve dimension");
            }
            if !c.class.is_integral() {
                return fail("curve class integral");
            }
            if Rational::from_integer(c.self_int.clone()) != self.pair(&c.class, &c.class) {
                return fail("self-intersection cache");
            }
            if !names.insert(c.name.as_str()) {
                return fail("curve names unique");
            }
        }
        let negs: Vec<&CurveRecord> = self.negative_curves().collect();
        for (i, a) in negs.iter().enumerate() {
            if negs[i + 1..].iter().any(|b| b.class == a.class) {
                return fail("negative curve listed once");
            }
        }
        if self.ample_ref.dim() != rho {
            return fail("ample_ref dimension");
        }
        if !self.pair(&self.ample_ref, &self.ample_ref).is_positive()
            || self
                .curves
                .iter()
                .any(|c| !self.pair(&self.ample_ref, &c.class).is_positive())
        {
            return fail("ample_ref positive");
        }
        if let Some(k) = &self.canonical {
            if k.dim() != rho {
                return fail("canonical dimension");
            }
        }
        if let Some(gens) = &self.effective_generators {
            if gens.iter().any(|g| g.dim() != rho) {
                return fail("effective generator dimension");
            }
            if gens.iter().any(|g| !self.pair(&self.ample_ref, g).is_positive()) {
                return fail("ample_ref positive");
            }
        }
        Ok(())
    }

    /// Membership in the closed effective cone: the cone spanned by the
    /// Mori generators, together with the closure of the positive cone.
    pub fn is_pseudo_effective(&self, d: &DivisorClass) -> bool {
        (!self.pair(d, d).is_negative() && !self.pair(d, &self.ample_ref).is_negative())
            || cone_contains(&self.mori_generators(), d)
    }
}

pub fn pairing(model: &SurfaceModel, d1: &DivisorClass, d2: &DivisorClass) -> Result<Rational> {
    model.pairing(d1, d2)
}

/// Whether `v` is a non-negative rational combination of `generators`.
pub fn cone_contains(generators: &[DivisorClass], v: &DivisorClass) -> bool {
    if generators.iter().any(|g| g.dim() != v.dim()) {
        return false;
    }
    let gens: Vec<Vec<Rational>> = generators.iter().map(|g| g.0.clone()).collect();
    cone::nonneg_combination_exists(&gens, &v.0)
}

/// A rational polyhedral cone together with the facet functionals of its
/// dual, both as primitive integral classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyCone {
    /// Extremal rays of the dual cone `{w : w·g ≥ 0}`.
    pub generators: Vec<DivisorClass>,
    /// The extremal input generators; each cuts out the facet `⟨·, u⟩ ≥ 0`.
    pub facet_normals: Vec<DivisorClass>,
}

/// Pairing-dual of the cone spanned by `generators`, by double description.
pub fn dual_cone(generators: &[DivisorClass], model: &SurfaceModel) -> Result<PolyCone> {
    let rho = model.rank();
    for g in generators {
        model.check_dim(g)?;
    }
    let prim: Vec<Vec<BigInt>> = generators
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| cone::primitive(&g.0))
        .collect();
    let rows: Vec<Vec<BigInt>> = prim
        .iter()
        .map(|g| {
            model
                .gram
                .iter()
                .map(|row| row.iter().zip(g).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();
    let rays = cone::extreme_rays(&rows, rho)?;

    let mut normals: Vec<Vec<BigInt>> = Vec::new();
    for (g, row) in prim.iter().zip(&rows) {
        if normals.contains(g) {
            continue;
        }
        let on_facet: Vec<Vec<Rational>> = rays
            .iter()
            .filter(|r| r.iter().zip(row).map(|(a, b)| a * b).sum::<BigInt>().is_zero())
            .map(|r| r.iter().cloned().map(Rational::from_integer).collect())
            .collect();
        let rank = if on_facet.is_empty() {
            0
        } else {
            RationalMatrix::from_rows(on_facet)?.rank()
        };
        if rank + 1 == rho {
            normals.push(g.clone());
        }
    }
    normals.sort();
    Ok(PolyCone {
        generators: rays.iter().map(|r| DivisorClass::from_bigints(r)).collect(),
        facet_normals: normals.iter().map(|r| DivisorClass::from_bigints(r)).collect(),
    })
}

/// The nef cone as the dual of the Mori cone.
pub fn nef_cone(model: &SurfaceModel) -> Result<PolyCone> {
    dual_cone(&model.mori_generators(), model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat};
    use proptest::prelude::*;

    pub(crate) fn bl1() -> SurfaceModel {
        SurfaceModel {
            basis_labels: vec!["H".into(), "E".into()],
            gram: vec![vec![1.into(), 0.into()], vec![0.into(), (-1).into()]],
            curves: vec![
                CurveRecord {
                    name: "E".into(),
                    class: DivisorClass::from_ints(&[0, 1]),
                    self_int: (-1).into(),
                    is_rational: Some(true),
                },
                CurveRecord {
                    name: "F".into(),
                    class: DivisorClass::from_ints(&[1, -1]),
                    self_int: 0.into(),
                    is_rational: Some(true),
                },
            ],
            ample_ref: DivisorClass::from_ints(&[3, -1]),
            canonical: None,
            effective_generators: None,
            completeness_declared: true,
            family: ModelFamily::Other,
            marked_point: None,
            metadata: BTreeMap::new(),
        }
    }

    #[test]
    fn pairing_examples() {
        let m = bl1();
        let f = DivisorClass::from_ints(&[1, -1]);
        assert_eq!(pairing(&m, &f, &f).unwrap(), int(0));
        assert!(matches!(
            pairing(&m, &f, &DivisorClass::from_ints(&[1])),
            Err(Error::DimensionMismatch { .. })
        ));
        m.validate().unwrap();
    }

    #[test]
    fn cone_membership() {
        let gens = vec![DivisorClass::from_ints(&[0, 1]), DivisorClass::from_ints(&[1, -1])];
        assert!(cone_contains(&gens, &DivisorClass::from_ints(&[1, 0])));
        assert!(!cone_contains(&gens, &DivisorClass::from_ints(&[1, -2])));
        assert!(!cone_contains(&[DivisorClass::from_ints(&[1])], &DivisorClass::from_ints(&[-1])));
    }

    #[test]
    fn dual_of_bl1_mori_cone() {
        let m = bl1();
        let pc = dual_cone(&m.mori_generators(), &m).unwrap();
        assert_eq!(
            pc.generators,
            vec![DivisorClass::from_ints(&[1, -1]), DivisorClass::from_ints(&[1, 0])]
        );
        assert_eq!(pc.facet_normals.len(), 2);
    }

    #[test]
    fn validation_names_failures() {
        let mut m = bl1();
        m.gram[0][1] = 1.into();
        assert_eq!(m.validate(), Err(Error::InvariantViolation("gram symmetric".into())));
        let mut m = bl1();
        m.gram = vec![vec![1.into(), 0.into()], vec![0.into(), 1.into()]];
        m.curves.clear();
        assert_eq!(m.validate(), Err(Error::InvariantViolation("Hodge signature".into())));
        let mut m = bl1();
        m.ample_ref = DivisorClass::from_ints(&[1, 0]);
        assert_eq!(m.validate(), Err(Error::InvariantViolation("ample_ref positive".into())));
        let mut m = bl1();
        let dup = m.curves[0].clone();
        m.curves.push(CurveRecord { name: "E'".into(), ..dup });
        assert_eq!(m.validate(), Err(Error::InvariantViolation("negative curve listed once".into())));
    }

    fn small_class() -> impl Strategy<Value = DivisorClass> {
        proptest::collection::vec((-9i64..10, 1i64..5), 2)
            .prop_map(|v| DivisorClass::new(v.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn pairing_symmetric_bilinear(a in small_class(), b in small_class(), c in small_class(), s in -5i64..6) {
            let m = bl1();
            prop_assert_eq!(m.pair(&a, &b), m.pair(&b, &a));
            let lhs = m.pair(&a.add_scaled(&int(s), &b), &c);
            prop_assert_eq!(lhs, m.pair(&a, &c) + int(s) * m.pair(&b, &c));
        }
    }
}
