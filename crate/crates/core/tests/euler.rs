use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use tdirac_core::euler::*;

#[test]
fn z4_torus_lefschetz_and_strata_agree() {
    let act = LinearTorusAction::z4_rotation().unwrap();
    assert_eq!(act.lefschetz_numbers(), vec![0, 2, 4, 2]);
    let ds = load_strata_dataset("z4_torus.json").unwrap();
    let mut got = Vec::new();
    for rho in irreducible_characters(act.group()).unwrap() {
        let l = lefschetz_euler(&act, &rho).unwrap();
        assert_eq!(ds.euler(&rho.label).unwrap(), l, "{}", rho.label);
        got.push(l);
    }
    assert_eq!(got, vec![2, -1, 0, -1]);
}

#[test]
fn characters_are_orthonormal() {
    for group in [FiniteGroup::cyclic(4).unwrap(), FiniteGroup::cyclic(6).unwrap(), FiniteGroup::product(&[2, 2]).unwrap(), FiniteGroup::product(&[3, 4]).unwrap()] {
        let ch = irreducible_characters(&group).unwrap();
        assert_eq!(ch.len(), group.order());
        for (i, a) in ch.iter().enumerate() {
            for (j, b) in ch.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((character_inner(&group, a, b) - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn character_sum_recovers_the_torus_euler_characteristic() {
    let b = DMatrix::from_row_slice(3, 3, &[0, 0, 1, 1, 0, 0, 0, 1, 0]);
    let actions = [
        LinearTorusAction::z4_rotation().unwrap(),
        LinearTorusAction::negation(2).unwrap(),
        LinearTorusAction::negation(3).unwrap(),
        LinearTorusAction::from_generators(FiniteGroup::cyclic(3).unwrap(), &[b]).unwrap(),
    ];
    for act in &actions {
        let total: i64 = irreducible_characters(act.group())
            .unwrap()
            .iter()
            .map(|rho| lefschetz_euler(act, rho).unwrap())
            .sum();
        assert_eq!(total, 0);
    }
}

#[test]
fn trivial_group_gives_the_torus_euler_characteristic() {
    for n in 1..=4 {
        let act = LinearTorusAction::trivial(n).unwrap();
        let rho = &irreducible_characters(act.group()).unwrap()[0];
        assert_eq!(lefschetz_euler(&act, rho).unwrap(), 0);
    }
}

#[test]
fn orthogonal_sphere_datasets() {
    for n in 2..=5 {
        let ds = load_strata_dataset(&format!("orthogonal_s{n}.json")).unwrap();
        assert_eq!(ds.euler("1").unwrap(), 1);
        assert_eq!(ds.euler("xi").unwrap(), if n % 2 == 0 { 1 } else { -1 });
    }
}

#[test]
fn antipodal_datasets_match_the_sphere_oracle() {
    for n in 2..=5 {
        let ds = load_strata_dataset(&format!("antipodal_s{n}.json")).unwrap();
        let act = LinearSphereAction::antipodal(n).unwrap();
        for rho in irreducible_characters(act.group()).unwrap() {
            let want = if n % 2 == 0 { 1 } else { 0 };
            assert_eq!(sphere_lefschetz_euler(&act, &rho).unwrap(), want);
            assert_eq!(ds.euler(&rho.label).unwrap(), want, "n={n} {}", rho.label);
        }
    }
}

#[test]
fn z2xz2_dataset_matches_the_sphere_oracle() {
    let ds = load_strata_dataset("z2xz2_s2.json").unwrap();
    let act = LinearSphereAction::z2xz2_reflections().unwrap();
    let mut got = Vec::new();
    for rho in irreducible_characters(act.group()).unwrap() {
        let l = sphere_lefschetz_euler(&act, &rho).unwrap();
        assert_eq!(ds.euler(&rho.label).unwrap(), l, "{}", rho.label);
        got.push(l);
    }
    assert_eq!(got, vec![1, 0, 0, 1]);
}

#[test]
fn single_principal_stratum_reduces_to_the_quotient() {
    let rec = StratumRecord {
        label: "free".into(),
        principal: true,
        chi_rel: 7,
        chi_rho_orbit: BTreeMap::from([("1".to_string(), 1), ("xi".to_string(), 0)]),
    };
    assert_eq!(strata_euler(std::slice::from_ref(&rec), "1").unwrap(), 7);
    assert_eq!(strata_euler(&[rec], "xi").unwrap(), 0);
}

#[test]
fn basic_gauss_bonnet_datasets() {
    for (name, want) in [
        ("rotation_suspension.json", 2),
        ("carriere.json", 0),
        ("klein_suspension.json", 2),
        ("codim3_suspension.json", 0),
    ] {
        assert_eq!(load_foliation_dataset(name).unwrap().euler().unwrap(), want, "{name}");
    }
}

#[test]
fn dataset_schema_is_strict() {
    let extra = r#"{"group": {"cyclic": 2}, "strata": [], "bogus": 1}"#;
    assert!(StrataDataset::from_json(extra).is_err());
    let unknown_rep = r#"{"group": {"cyclic": 2}, "strata": [
        {"label": "p", "principal": true, "chi_rel": 1, "chi_rho_orbit": {"rho7": 1}}]}"#;
    assert!(StrataDataset::from_json(unknown_rep).is_err());
    let inconsistent = r#"{"foliation": "f", "codimension": 2, "strata": [
        {"label": "s", "chi_quotient": 3, "chi_leaf_closure": 1, "quotient": {"compactified": 2, "open": true}}]}"#;
    assert!(FoliationDataset::from_json(inconsistent).is_err());
}

#[test]
fn datasets_round_trip_through_json() {
    let ds = load_strata_dataset("z2xz2_s2.json").unwrap();
    let text = serde_json::to_string(&ds).unwrap();
    assert_eq!(StrataDataset::from_json(&text).unwrap(), ds);
    let fol = load_foliation_dataset("klein_suspension.json").unwrap();
    let text = serde_json::to_string(&fol).unwrap();
    assert_eq!(FoliationDataset::from_json(&text).unwrap(), fol);
}
