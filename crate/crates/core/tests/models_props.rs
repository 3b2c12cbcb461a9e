use std::collections::BTreeSet;

use locpos::infinitesimal::{blow_up, BlowupSpec};
use locpos::lattice::{ModelFamily, SurfaceModel};
use locpos::models::{builtin, builtin_names, enumerate_minus_one_curves, from_json, load, save, to_json};
use locpos::Error;

/// Negative curve classes; names of strict transforms keep the base labels.
fn negative_curves(m: &SurfaceModel) -> BTreeSet<String> {
    m.negative_curves().map(|c| c.class.to_string()).collect()
}

#[test]
fn minus_one_counts_match_brute_force() {
    let expected = [1usize, 3, 6, 10, 16, 27, 56, 240];
    for r in 1..=8u32 {
        let curves = enumerate_minus_one_curves(r).unwrap();
        assert_eq!(curves.len(), expected[r as usize - 1]);
        let m = builtin(&format!("bl{r}p2")).unwrap();
        for c in &curves {
            assert_eq!(m.pair(c, c), locpos::scalars::int(-1));
            let k = m.canonical.as_ref().unwrap();
            assert_eq!(m.pair(k, c), locpos::scalars::int(-1));
        }
    }
}

#[test]
fn generic_blowups_of_del_pezzos_match_the_catalog() {
    for r in 0..=7u32 {
        let base = builtin(&if r == 0 { "p2".to_string() } else { format!("bl{r}p2") }).unwrap();
        let up = blow_up(&base, &BlowupSpec::generic()).unwrap();
        let target = builtin(&format!("bl{}p2", r + 1)).unwrap();
        assert_eq!(up.model.basis_labels, target.basis_labels, "r = {r}");
        assert_eq!(up.model.gram, target.gram, "r = {r}");
        assert!(negative_curves(&up.model) == negative_curves(&target), "r = {r}");
        assert_eq!(up.model.canonical, target.canonical, "r = {r}");
        assert!(up.model.completeness_declared);
        assert_eq!(up.model.family, ModelFamily::ProjectivePlaneBlowup { r: r + 1 });
    }
}

#[test]
fn files_round_trip_bit_exactly() {
    let dir = std::env::temp_dir().join(format!("locpos-models-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for name in builtin_names() {
        let m = builtin(&name).unwrap();
        let path = dir.join(format!("{name}.json"));
        save(&m, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let back = load(&path).unwrap();
        assert_eq!(back, m);
        assert_eq!(to_json(&back), text);
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn blown_up_models_round_trip() {
    let base = builtin("example-interesting-base").unwrap();
    let up = blow_up(&base, base.marked_point.as_ref().unwrap()).unwrap();
    assert_eq!(from_json(&to_json(&up.model)).unwrap(), up.model);
}

#[test]
fn load_reports_io_and_schema_errors() {
    assert!(matches!(load(std::path::Path::new("/nonexistent/model.json")), Err(Error::Io(_))));
    assert!(matches!(from_json("[]"), Err(Error::SchemaError(_))));
    let mut v: serde_json::Value = serde_json::from_str(&to_json(&builtin("p2").unwrap())).unwrap();
    v["schema_version"] = 7.into();
    assert!(matches!(from_json(&v.to_string()), Err(Error::SchemaError(_))));
}
