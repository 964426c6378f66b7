use std::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tdirac_core::cohomology::*;
use tdirac_core::linalg::{hermitian_eigenvalues, hermitian_part, max_abs};
use tdirac_core::transversal::TrigPoly;

fn golden() -> f64 {
    // expanding eigenvalue of [[2,1],[1,1]]
    (3.0 + 5f64.sqrt()) / 2.0
}

#[test]
fn carriere_betti_and_tautness() {
    let cx = carriere_model(golden(), 32).unwrap();
    let tw = cohomology_dims(&cx, true).unwrap();
    let un = cohomology_dims(&cx, false).unwrap();
    assert_eq!(tw.betti, vec![0, 0, 0]);
    assert_eq!(un.betti, vec![1, 1, 0]);
    assert_eq!(tw.euler, 0);
    assert!(!tw.rank_unstable && !un.rank_unstable);
    assert_eq!(tw.laplacian_kernel, tw.betti);
    let t = tautness(&cx).unwrap();
    assert!(!t.taut);
    assert_eq!((t.twisted_h0, t.untwisted_top), (0, 0));
}

#[test]
fn carriere_laplacians_in_dual_degrees_share_eigenvalues() {
    let lambda = golden();
    let ell = lambda.ln();
    let n = 16;
    let cx = carriere_model(lambda, n).unwrap();
    let laps = laplacians(&cx, true).unwrap();
    let mut oracle: Vec<f64> = (-(n as i64)..=n as i64)
        .map(|k| 4.0 * PI * PI * (k * k) as f64 + ell * ell / 4.0)
        .collect();
    oracle.sort_by(f64::total_cmp);
    for deg in [0, 2] {
        let ev = hermitian_eigenvalues(&hermitian_part(&laps[deg]));
        for (a, b) in ev.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-8 * b.max(1.0), "degree {deg}: {a} vs {b}");
        }
    }
    let p = poincare_check(&cx).unwrap();
    assert!(p.spectral_compared);
    assert!(p.max_spectral_mismatch < 1e-8);
}

#[test]
fn conformal_shift_preserves_betti_and_converges() {
    let h = TrigPoly::sine(0.3, 1);
    let mut residuals = Vec::new();
    for n in [16, 32, 64] {
        let cx = carriere_model(golden(), n).unwrap();
        let s = conformal_shift(&cx, &h).unwrap();
        validate_complex(&s.shifted).unwrap();
        assert_eq!(cohomology_dims(&s.shifted, true).unwrap().betti, vec![0, 0, 0]);
        assert_eq!(cohomology_dims(&s.shifted, false).unwrap().betti, vec![1, 1, 0]);
        residuals.push(s.residual);
    }
    assert!(residuals[0] > residuals[1] && residuals[1] > residuals[2], "{residuals:?}");
}

#[test]
fn conformal_shift_rejects_unrepresentable_h() {
    let cx = carriere_model(golden(), 8).unwrap();
    assert!(conformal_shift(&cx, &TrigPoly::sine(0.1, 9)).is_err());
    assert!(conformal_shift(&taut_suspension_model().unwrap(), &TrigPoly::sine(0.1, 1)).is_err());
}

#[test]
fn truncated_multiplication_by_a_trig_polynomial_is_exact_away_from_the_edge() {
    // cos(2πt) has coefficients 1/2 at ±1
    let m = truncated_multiplication(|t| (2.0 * PI * t).cos(), 4);
    for i in 0..9usize {
        for j in 0..9 {
            let want = if i.abs_diff(j) == 1 { 0.5 } else { 0.0 };
            assert!((m[(i, j)].re - want).abs() < 1e-14 && m[(i, j)].im.abs() < 1e-14);
        }
    }
}

#[test]
fn taut_suspension_duality() {
    let cx = taut_suspension_model().unwrap();
    let p = poincare_check(&cx).unwrap();
    assert_eq!(p.betti, vec![1, 0, 1]);
    assert_eq!(p.euler, 2);
    assert!(tautness(&cx).unwrap().taut);
}

#[test]
fn odd_codimension_torus_models_have_zero_euler() {
    for (q, kappa) in [(1, vec![0.7]), (3, vec![0.2, -0.4, 0.9]), (3, vec![0.0, 0.0, 0.0])] {
        let cx = torus_model(q, 1, &kappa).unwrap();
        let p = poincare_check(&cx).unwrap();
        assert_eq!(p.euler, 0, "q={q} kappa={kappa:?}");
    }
    let flat = torus_model(3, 1, &[0.0; 3]).unwrap();
    assert_eq!(cohomology_dims(&flat, true).unwrap().betti, vec![1, 3, 3, 1]);
}

#[test]
fn built_models_have_exactly_nilpotent_twisted_differential() {
    let models = vec![
        carriere_model(golden(), 16).unwrap(),
        conformal_shift(&carriere_model(golden(), 16).unwrap(), &TrigPoly::sine(0.3, 1)).unwrap().shifted,
        taut_suspension_model().unwrap(),
        torus_model(2, 2, &[0.5, 0.25]).unwrap(),
        torus_model(3, 1, &[0.5, 0.25, 1.0]).unwrap(),
    ];
    for cx in models {
        let dt = twisted_differential(&cx);
        for k in 0..dt.len().saturating_sub(1) {
            assert_eq!(max_abs(&(&dt[k + 1] * &dt[k])), 0.0, "{}", cx.label());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_complexes_obey_hodge_and_duality(q in 1usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cx = random_valid_complex(q, &mut rng).unwrap();
        let v = validate_complex(&cx).unwrap();
        prop_assert_eq!(v.d_squared, 0.0);
        prop_assert_eq!(v.anticommutator, 0.0);
        let dt = twisted_differential(&cx);
        for k in 0..q.saturating_sub(1) {
            prop_assert_eq!(max_abs(&(&dt[k + 1] * &dt[k])), 0.0);
        }
        for twisted in [true, false] {
            let r = cohomology_dims(&cx, twisted).unwrap();
            prop_assert_eq!(&r.laplacian_kernel, &r.betti);
        }
        let p = poincare_check(&cx).unwrap();
        if q % 2 == 1 {
            prop_assert_eq!(p.euler, 0);
        }
    }
}
