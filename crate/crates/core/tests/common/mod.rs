#![allow(dead_code)]

use locpos::lattice::{nef_cone, DivisorClass, SurfaceModel};
use locpos::models::builtin;
use locpos::scalars::{rat, Rational};
use locpos::zariski::is_big;
use proptest::prelude::*;

pub const MODELS: [&str; 6] = ["p2", "bl1p2", "bl2p2", "bl3p2", "hirzebruch-2", "example-interesting"];

/// Positive combinations of the ample reference, nef rays and negative curves.
pub fn class_from_weights(model: &SurfaceModel, w: &[u8]) -> DivisorClass {
    let mut gens = vec![model.ample_ref.clone()];
    gens.extend(nef_cone(model).unwrap().generators);
    gens.extend(model.negative_curves().map(|c| c.class.clone()));
    let mut d = DivisorClass::zero(model.rank());
    for (i, g) in gens.iter().enumerate() {
        let k = i64::from(w.get(i).copied().unwrap_or(0) % 9);
        let coeff = if i == 0 { rat(k + 1, 4) } else { rat(k, 4) };
        d = d.add_scaled(&coeff, g);
    }
    d
}

/// A builtin from the test matrix together with a big class on it.
pub fn model_and_big_class() -> impl Strategy<Value = (SurfaceModel, DivisorClass)> {
    (0..MODELS.len(), proptest::collection::vec(any::<u8>(), 16)).prop_map(|(i, w)| {
        let m = builtin(MODELS[i]).unwrap();
        let d = class_from_weights(&m, &w);
        assert!(is_big(&m, &d));
        (m, d)
    })
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}
