use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use tdirac_core::clifford::build_clifford;
use tdirac_core::exterior::*;
use tdirac_core::linalg::{identity, max_abs};

fn metric_from(n: usize, entries: &[f64]) -> MetricPoint {
    let a = DMatrix::from_fn(n, n, |i, j| entries[i * n + j]);
    let g = &a * a.transpose() + DMatrix::identity(n, n) * 0.5;
    let g = (&g + g.transpose()) * 0.5;
    MetricPoint::new(g, 1).unwrap()
}

fn form_from(n: usize, r: usize, re: &[f64], im: &[f64]) -> Form {
    let len = multi_indices(n, r).len();
    let coeffs = (0..len).map(|k| Complex64::new(re[k], im[k])).collect();
    Form::from_coeffs(n, r, coeffs).unwrap()
}

fn metric_and_form() -> impl Strategy<Value = (MetricPoint, Form)> {
    (1usize..=6)
        .prop_flat_map(|n| (Just(n), 0..=n, prop::collection::vec(-1.0f64..1.0, n * n)))
        .prop_flat_map(|(n, r, entries)| {
            let len = multi_indices(n, r).len();
            (
                Just((n, r, entries)),
                prop::collection::vec(-2.0f64..2.0, len),
                prop::collection::vec(-2.0f64..2.0, len),
            )
        })
        .prop_map(|((n, r, entries), re, im)| (metric_from(n, &entries), form_from(n, r, &re, &im)))
}

/// `∗dx_I = ε(I, I^c) √det g Π_{i∈I} g^{ii} dx_{I^c}` for diagonal `g`.
fn diagonal_star_oracle(diag: &[f64], idx: &[usize]) -> (f64, Vec<usize>) {
    let n = diag.len();
    let comp: Vec<usize> = (0..n).filter(|i| !idx.contains(i)).collect();
    let mut perm: Vec<usize> = idx.to_vec();
    perm.extend(&comp);
    let mut inversions = 0;
    for i in 0..n {
        for j in i + 1..n {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
    let sqrt_det = diag.iter().product::<f64>().sqrt();
    let inv: f64 = idx.iter().map(|&i| 1.0 / diag[i]).product();
    (sign * sqrt_det * inv, comp)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn star_squared_sign_law((m, a) in metric_and_form()) {
        let n = m.dim();
        let r = a.grade();
        let twice = hodge_star(&m, &hodge_star(&m, &a).unwrap()).unwrap();
        let sign = if (r * (n - r)) % 2 == 0 { 1.0 } else { -1.0 };
        let want = a.scale(Complex64::new(sign, 0.0));
        prop_assert!(twice.distance(&want).unwrap() <= 1e-11 * a.max_abs().max(1.0));
    }

    #[test]
    fn bigstar_is_an_involution((m, a) in metric_and_form()) {
        prop_assume!(m.dim() % 2 == 0);
        let twice = bigstar(&m, &bigstar(&m, &a).unwrap()).unwrap();
        prop_assert!(twice.distance(&a).unwrap() <= 1e-11 * a.max_abs().max(1.0));
    }

    #[test]
    fn star_satisfies_its_defining_identity((m, a) in metric_and_form()) {
        let n = m.dim();
        let star = hodge_star(&m, &a).unwrap();
        let vol = volume_form(&m).top_coeff();
        for idx in multi_indices(n, a.grade()) {
            let b = Form::basis(n, &idx, Complex64::new(1.0, 0.0)).unwrap();
            let lhs = wedge(&b, &star).unwrap().top_coeff();
            let rhs = form_pairing(&m, &b, &a).unwrap() * vol;
            prop_assert!((lhs - rhs).norm() <= 1e-11 * a.max_abs().max(1.0) * vol.norm().max(1.0));
        }
    }

    #[test]
    fn flat_then_sharp_is_identity(entries in prop::collection::vec(-1.0f64..1.0, 16), v in prop::collection::vec(-3.0f64..3.0, 4)) {
        let m = metric_from(4, &entries);
        let back = sharp(&m, &flat(&m, &v).unwrap()).unwrap();
        for (b, x) in back.iter().zip(&v) {
            prop_assert!((b - Complex64::new(*x, 0.0)).norm() < 1e-11);
        }
    }

    #[test]
    fn clifford_action_on_forms_squares_to_minus_norm(v in prop::collection::vec(-2.0f64..2.0, 3)) {
        let m = MetricPoint::euclidean(3);
        let op = full_operator(3, |a| clifford_form_action(&m, &v, a)).unwrap();
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        let want = identity(8).scale(-norm2);
        prop_assert!(max_abs(&(&op * &op - want)) < 1e-12);
    }

    #[test]
    fn spinor_clifford_relations(n in 1usize..=8, seed in prop::collection::vec(-1.0f64..1.0, 16)) {
        let rep = build_clifford(n).unwrap();
        let v = &seed[..n];
        let w = &seed[8..8 + n];
        let cv = rep.clifford_vector(v).unwrap();
        let cw = rep.clifford_vector(w).unwrap();
        let dot: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
        let want = identity(rep.k()).scale(-2.0 * dot);
        prop_assert!(max_abs(&(&cv * &cw + &cw * &cv - want)) < 1e-12);
    }
}

#[test]
fn diagonal_metrics_match_closed_form() {
    let diags: [&[f64]; 3] = [&[1.0, 4.0, 1.0, 9.0], &[2.0, 0.5, 3.0], &[1.5, 2.5, 0.25, 4.0, 1.0, 7.0]];
    for diag in diags {
        let n = diag.len();
        let m = MetricPoint::diagonal(diag).unwrap();
        for r in 0..=n {
            for idx in multi_indices(n, r) {
                let star = hodge_star(&m, &Form::basis(n, &idx, Complex64::new(1.0, 0.0)).unwrap()).unwrap();
                let (coef, comp) = diagonal_star_oracle(diag, &idx);
                let want = Form::basis(n, &comp, Complex64::new(coef, 0.0)).unwrap();
                assert!(star.distance(&want).unwrap() < 1e-12, "n={n} idx={idx:?}");
            }
        }
    }
}

#[test]
fn r4_star_at_sample_point() {
    // ω = x₁² x₂ dx₂∧dx₄ with g = diag(1, 4, 1, (1 + e^{x₁})²) at (x₁, x₂) = (1, 1)
    let e = 1f64.exp();
    let m = MetricPoint::diagonal(&[1.0, 4.0, 1.0, (1.0 + e).powi(2)]).unwrap();
    let omega = Form::basis(4, &[1, 3], Complex64::new(1.0, 0.0)).unwrap();
    let star = hodge_star(&m, &omega).unwrap();
    let want = Form::basis(4, &[0, 2], Complex64::new(-1.0 / (2.0 * (1.0 + e)), 0.0)).unwrap();
    assert!(star.distance(&want).unwrap() < 1e-14);
    // n = 4, r = 2: ★ = i^{2+2} ∗ = ∗
    assert!(bigstar(&m, &omega).unwrap().distance(&want).unwrap() < 1e-14);
    assert!((volume_form(&m).top_coeff().re - 2.0 * (1.0 + e)).abs() < 1e-12);
}

#[test]
fn orientation_flips_star() {
    let m = MetricPoint::diagonal(&[2.0, 3.0, 5.0]).unwrap();
    let flipped = m.clone().with_orientation(-1).unwrap();
    let a = Form::basis(3, &[1], Complex64::new(1.0, 0.5)).unwrap();
    let s1 = hodge_star(&m, &a).unwrap();
    let s2 = hodge_star(&flipped, &a).unwrap();
    assert!(s1.add(&s2).unwrap().max_abs() < 1e-14);
}
