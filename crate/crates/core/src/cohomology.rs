//! Finite twisted cochain complexes `d̃ = d - ½ κ∧` and their cohomology.
//!
//! A complex stores the differentials `d_k`, the wedge-by-`κ` maps `K_k` and
//! an inner product per degree. Cohomology is computed from SVD ranks and
//! cross-checked against the kernels of the twisted Laplacians.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{graded_operator, wedge, Form};
use crate::linalg::{
    binomial, c, hermitian_eigenvalues, hermitian_part, identity, kron, max_abs, numerical_rank, real, zeros,
    CMat, RANK_TOL,
};
use crate::torus::{exterior_d, lattice_modes};
use crate::transversal::TrigPoly;

/// Absolute tolerance for the structural identities of float-valued models.
pub const STRUCTURE_TOL: f64 = 1e-12;
pub const SPECTRAL_TOL: f64 = 1e-8;
pub const MIN_CARRIERE_N: usize = 8;

#[derive(Debug, Clone, PartialEq)]
enum ModelKind {
    Generic,
    Carriere { lambda: f64, n: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwistedComplex {
    label: String,
    dims: Vec<usize>,
    d: Vec<CMat>,
    kappa: Vec<CMat>,
    inner: Vec<CMat>,
    labels: Vec<Vec<String>>,
    oriented: bool,
    spectral: bool,
    truncation: Option<usize>,
    kind: ModelKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidationReport {
    pub d_squared: f64,
    pub kappa_squared: f64,
    pub anticommutator: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CohomologyReport {
    pub label: String,
    pub betti: Vec<usize>,
    pub twisted: bool,
    pub euler: i64,
    pub truncation: Option<usize>,
    /// Kernel dimensions of the Laplacians, equal to `betti` unless flagged.
    pub laplacian_kernel: Vec<usize>,
    /// Some singular value sat within 10x of the rank cutoff.
    pub rank_unstable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoincareReport {
    pub betti: Vec<usize>,
    pub euler: i64,
    pub spectral_compared: bool,
    pub max_spectral_mismatch: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TautnessReport {
    pub taut: bool,
    pub twisted_h0: usize,
    pub untwisted_top: usize,
}

impl TwistedComplex {
    /// Checks shapes only; call [`validate_complex`] for the identities.
    /// Inner products default to the identity.
    pub fn new(label: impl Into<String>, dims: Vec<usize>, d: Vec<CMat>, kappa: Vec<CMat>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidArgument("complex needs at least one degree".into()));
        }
        let q = dims.len() - 1;
        for (name, maps) in [("d", &d), ("K", &kappa)] {
            if maps.len() != q {
                return Err(Error::InvalidArgument(format!("{name} has {} maps, expected {q}", maps.len())));
            }
            for (k, m) in maps.iter().enumerate() {
                if m.ncols() != dims[k] || m.nrows() != dims[k + 1] {
                    return Err(Error::InvalidArgument(format!(
                        "{name}_{k} is {}x{}, expected {}x{}",
                        m.nrows(),
                        m.ncols(),
                        dims[k + 1],
                        dims[k]
                    )));
                }
            }
        }
        let inner = dims.iter().map(|&n| identity(n)).collect();
        let labels = dims.iter().enumerate().map(|(k, &n)| (0..n).map(|i| format!("e{k}_{i}")).collect()).collect();
        Ok(TwistedComplex {
            label: label.into(),
            dims,
            d,
            kappa,
            inner,
            labels,
            oriented: true,
            spectral: true,
            truncation: None,
            kind: ModelKind::Generic,
        })
    }

    pub fn with_inner(mut self, inner: Vec<CMat>) -> Result<Self> {
        if inner.len() != self.dims.len() || inner.iter().zip(&self.dims).any(|(g, &n)| g.shape() != (n, n)) {
            return Err(Error::InvalidArgument("inner products do not match the degree dimensions".into()));
        }
        for (k, g) in inner.iter().enumerate() {
            let herm = max_abs(&(g - g.adjoint()));
            if herm > STRUCTURE_TOL * max_abs(g).max(1.0) {
                return Err(Error::invariant(format!("inner product {k} Hermitian"), herm));
            }
            if g.nrows() > 0 && g.clone().cholesky().is_none() {
                return Err(Error::InvalidArgument(format!("inner product {k} not positive definite")));
            }
        }
        self.inner = inner;
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.dims.len() || labels.iter().zip(&self.dims).any(|(l, &n)| l.len() != n) {
            return Err(Error::InvalidArgument("labels do not match the degree dimensions".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn oriented(mut self, oriented: bool) -> Self {
        self.oriented = oriented;
        self
    }

    /// Whether Laplacian spectra in degrees `k` and `q - k` should coincide.
    pub fn spectral(mut self, spectral: bool) -> Self {
        self.spectral = spectral;
        self
    }

    pub fn with_truncation(mut self, n: usize) -> Self {
        self.truncation = Some(n);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn q(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn d(&self) -> &[CMat] {
        &self.d
    }

    pub fn kappa(&self) -> &[CMat] {
        &self.kappa
    }

    pub fn inner(&self) -> &[CMat] {
        &self.inner
    }

    pub fn labels(&self) -> &[Vec<String>] {
        &self.labels
    }

    pub fn is_oriented(&self) -> bool {
        self.oriented
    }

    pub fn is_spectral(&self) -> bool {
        self.spectral
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }
}

fn composed_residual(a: &[CMat], b: &[CMat]) -> f64 {
    // max over k of |a_{k+1} b_k|
    (0..a.len().saturating_sub(1)).map(|k| max_abs(&(&a[k + 1] * &b[k]))).fold(0.0, f64::max)
}

pub fn validate_complex(cx: &TwistedComplex) -> Result<ValidationReport> {
    let q = cx.q();
    let d_squared = composed_residual(&cx.d, &cx.d);
    let kappa_squared = composed_residual(&cx.kappa, &cx.kappa);
    let anticommutator = (0..q.saturating_sub(1))
        .map(|k| max_abs(&(&cx.d[k + 1] * &cx.kappa[k] + &cx.kappa[k + 1] * &cx.d[k])))
        .fold(0.0, f64::max);
    let scale = cx.d.iter().chain(&cx.kappa).map(max_abs).fold(1.0, f64::max);
    let tol = STRUCTURE_TOL * scale * scale;
    let report = ValidationReport { d_squared, kappa_squared, anticommutator };
    for (name, r) in [
        ("d_{k+1} d_k", d_squared),
        ("K_{k+1} K_k", kappa_squared),
        ("anticommutator d_{k+1} K_k + K_{k+1} d_k", anticommutator),
    ] {
        if r > tol {
            return Err(Error::invariant(name, r));
        }
    }
    Ok(report)
}

/// `d̃_k = d_k - ½ K_k`.
pub fn twisted_differential(cx: &TwistedComplex) -> Vec<CMat> {
    cx.d.iter().zip(&cx.kappa).map(|(d, k)| d - k.scale(0.5)).collect()
}

fn differentials(cx: &TwistedComplex, twisted: bool) -> Vec<CMat> {
    if twisted {
        twisted_differential(cx)
    } else {
        cx.d.clone()
    }
}

/// Adjoints `δ_k : C^{k+1} -> C^k` with respect to the complex's inner
/// products, `δ_k = G_k^{-1} D_k† G_{k+1}`.
pub fn adjoint_differentials(cx: &TwistedComplex, maps: &[CMat]) -> Result<Vec<CMat>> {
    maps.iter()
        .enumerate()
        .map(|(k, m)| {
            let g_inv = cx.inner[k]
                .clone()
                .try_inverse()
                .ok_or_else(|| Error::InvalidArgument(format!("inner product {k} singular")))?;
            Ok(g_inv * m.adjoint() * &cx.inner[k + 1])
        })
        .collect()
}

/// `Δ_k = δ_k D_k + D_{k-1} δ_{k-1}` in every degree.
pub fn laplacians(cx: &TwistedComplex, twisted: bool) -> Result<Vec<CMat>> {
    let maps = differentials(cx, twisted);
    let adj = adjoint_differentials(cx, &maps)?;
    let q = cx.q();
    Ok((0..=q)
        .map(|k| {
            let mut lap = zeros(cx.dims[k], cx.dims[k]);
            if k < q {
                lap += &adj[k] * &maps[k];
            }
            if k > 0 {
                lap += &maps[k - 1] * &adj[k - 1];
            }
            lap
        })
        .collect())
}

pub fn cohomology_dims(cx: &TwistedComplex, twisted: bool) -> Result<CohomologyReport> {
    validate_complex(cx)?;
    let q = cx.q();
    let maps = differentials(cx, twisted);
    let mut unstable = false;
    let ranks: Vec<usize> = maps
        .iter()
        .map(|m| {
            let info = numerical_rank(m, RANK_TOL);
            unstable |= info.unstable;
            info.rank
        })
        .collect();
    let betti: Vec<usize> = (0..=q)
        .map(|k| {
            let out = if k < q { ranks[k] } else { 0 };
            let inc = if k > 0 { ranks[k - 1] } else { 0 };
            cx.dims[k] - out - inc
        })
        .collect();
    let laplacian_kernel: Vec<usize> = laplacians(cx, twisted)?
        .iter()
        .map(|lap| {
            let info = numerical_rank(lap, RANK_TOL);
            unstable |= info.unstable;
            lap.nrows() - info.rank
        })
        .collect();
    if laplacian_kernel != betti && !unstable {
        let worst = betti.iter().zip(&laplacian_kernel).map(|(a, b)| a.abs_diff(*b)).max().unwrap_or(0);
        return Err(Error::invariant("Hodge: dim ker Laplacian = betti", worst as f64));
    }
    Ok(CohomologyReport {
        label: cx.label.clone(),
        euler: euler_of(&betti),
        betti,
        twisted,
        truncation: cx.truncation,
        laplacian_kernel,
        rank_unstable: unstable,
    })
}

pub fn euler_of(betti: &[usize]) -> i64 {
    betti.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
}

/// Eigenvalues of the `G`-self-adjoint Laplacian via `L† Δ L^{-†}` with
/// `G = L L†`.
fn laplacian_spectrum(lap: &CMat, g: &CMat) -> Result<Vec<f64>> {
    if lap.nrows() == 0 {
        return Ok(Vec::new());
    }
    let l = g.clone().cholesky().ok_or_else(|| Error::InvalidArgument("inner product not positive definite".into()))?.l();
    let l_adj_inv = l.adjoint().try_inverse().ok_or_else(|| Error::InvalidArgument("singular inner product".into()))?;
    let h = l.adjoint() * lap * l_adj_inv;
    Ok(hermitian_eigenvalues(&hermitian_part(&h)))
}

fn nonzero(values: Vec<f64>, cutoff: f64) -> Vec<f64> {
    values.into_iter().filter(|v| v.abs() > cutoff).collect()
}

pub fn poincare_check(cx: &TwistedComplex) -> Result<PoincareReport> {
    if !cx.oriented {
        return Err(Error::InvalidArgument(format!("model {} is not transversally oriented", cx.label)));
    }
    let report = cohomology_dims(cx, true)?;
    let q = cx.q();
    for k in 0..=q {
        if report.betti[k] != report.betti[q - k] {
            return Err(Error::invariant(
                format!("betti_{k} = betti_{}", q - k),
                report.betti[k].abs_diff(report.betti[q - k]) as f64,
            ));
        }
    }
    if q % 2 == 1 && report.euler != 0 {
        return Err(Error::invariant("odd codimension twisted euler = 0", report.euler as f64));
    }
    let mut worst: f64 = 0.0;
    if cx.spectral {
        let laps = laplacians(cx, true)?;
        let spectra: Vec<Vec<f64>> =
            laps.iter().zip(&cx.inner).map(|(l, g)| laplacian_spectrum(l, g)).collect::<Result<_>>()?;
        let top = spectra.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        let cutoff = RANK_TOL * top;
        for k in 0..=q / 2 {
            let a = nonzero(spectra[k].clone(), cutoff);
            let b = nonzero(spectra[q - k].clone(), cutoff);
            if a.len() != b.len() {
                return Err(Error::invariant(
                    format!("nonzero Laplacian spectra in degrees {k} and {}", q - k),
                    a.len().abs_diff(b.len()) as f64,
                ));
            }
            let diff = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            worst = worst.max(diff);
        }
        if worst > SPECTRAL_TOL {
            return Err(Error::invariant("Laplacian spectra in dual degrees", worst));
        }
    }
    Ok(PoincareReport {
        betti: report.betti,
        euler: report.euler,
        spectral_compared: cx.spectral,
        max_spectral_mismatch: worst,
    })
}

/// Taut exactly when `H̃⁰ ≠ 0`; a taut model must also have nonzero untwisted
/// top-degree cohomology, and a disagreement is reported as an error.
pub fn tautness(cx: &TwistedComplex) -> Result<TautnessReport> {
    let tw = cohomology_dims(cx, true)?;
    let un = cohomology_dims(cx, false)?;
    let twisted_h0 = tw.betti[0];
    let untwisted_top = un.betti[cx.q()];
    let taut = twisted_h0 != 0;
    if taut != (untwisted_top != 0) {
        return Err(Error::invariant("tautness: H̃⁰ ≠ 0 iff untwisted H^q ≠ 0", 1.0));
    }
    Ok(TautnessReport { taut, twisted_h0, untwisted_top })
}

fn fourier_modes(n: usize) -> Vec<i64> {
    (-(n as i64)..=n as i64).collect()
}

/// Truncated multiplication by `u(t)` (period 1) on Fourier modes
/// `-n..=n`, from pointwise products on an oversampled grid.
pub fn truncated_multiplication(u: impl Fn(f64) -> f64, n: usize) -> CMat {
    let modes = fourier_modes(n);
    let len = modes.len();
    let grid = 8 * len;
    let samples: Vec<f64> = (0..grid).map(|l| u(l as f64 / grid as f64)).collect();
    // û(m) for |m| <= 2n
    let coef = |m: i64| {
        let mut acc = c(0.0, 0.0);
        for (l, s) in samples.iter().enumerate() {
            let phase = -2.0 * PI * ((m * l as i64).rem_euclid(grid as i64)) as f64 / grid as f64;
            acc += c(phase.cos(), phase.sin()) * *s;
        }
        acc / grid as f64
    };
    let table: Vec<_> = (-2 * n as i64..=2 * n as i64).map(coef).collect();
    CMat::from_fn(len, len, |i, j| table[(modes[i] - modes[j] + 2 * n as i64) as usize])
}

/// `h(t)` with period 1 given by the coefficients of `h(2πt)`.
fn eval_periodic(h: &TrigPoly, t: f64) -> f64 {
    h.eval(2.0 * PI * t)
}

fn carriere_blocks(lambda: f64, n: usize, h: Option<&TrigPoly>) -> Result<TwistedComplex> {
    if !(lambda > 1.0) {
        return Err(Error::InvalidArgument(format!("Carrière model needs lambda > 1, got {lambda}")));
    }
    if n < MIN_CARRIERE_N {
        return Err(Error::InvalidArgument(format!("Fourier truncation {n} below {MIN_CARRIERE_N}")));
    }
    let ell = lambda.ln();
    let modes = fourier_modes(n);
    let m = modes.len();
    let deriv = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        m,
        modes.iter().map(|&k| c(0.0, 2.0 * PI * k as f64)),
    ));
    let id = identity(m);
    // multiplication by the coefficient of dt in κ
    let kappa_dt = match h {
        None => id.scale(ell),
        Some(h) => {
            let dh = h.derivative();
            &id.scale(ell) + truncated_multiplication(|t| 2.0 * PI * eval_periodic(&dh, t), n)
        }
    };
    // degree 1 = [dt block ; eta block]
    let mut d0 = zeros(2 * m, m);
    d0.view_mut((0, 0), (m, m)).copy_from(&deriv);
    let mut d1 = zeros(m, 2 * m);
    d1.view_mut((0, m), (m, m)).copy_from(&(&deriv + id.scale(ell)));
    let mut k0 = zeros(2 * m, m);
    k0.view_mut((0, 0), (m, m)).copy_from(&kappa_dt);
    let mut k1 = zeros(m, 2 * m);
    k1.view_mut((0, m), (m, m)).copy_from(&kappa_dt);
    let lab = |tag: &str| modes.iter().map(|k| format!("k={k}:{tag}")).collect::<Vec<_>>();
    let mut deg1 = lab("dt");
    deg1.extend(lab("eta"));
    let label = if h.is_some() { "carriere_shifted" } else { "carriere" };
    let mut cx = TwistedComplex::new(label, vec![m, 2 * m, m], vec![d0, d1], vec![k0, k1])?
        .with_labels(vec![lab("1"), deg1, lab("dt^eta")])?
        .with_truncation(n);
    cx.kind = ModelKind::Carriere { lambda, n };
    Ok(cx)
}

/// Basic complex of the Carrière flow on the mapping torus of a hyperbolic
/// toral automorphism with expanding eigenvalue `lambda`, on Fourier modes
/// `|k| <= n` of the base circle.
pub fn carriere_model(lambda: f64, n: usize) -> Result<TwistedComplex> {
    carriere_blocks(lambda, n, None)
}

#[derive(Debug, Clone)]
pub struct ConformalShift {
    pub shifted: TwistedComplex,
    /// Truncated multiplication by `e^{h/2}` in every degree.
    pub intertwiner: Vec<CMat>,
    /// `‖d̃′E − Ed̃‖_F / ‖d̃‖_F` over all degrees.
    pub residual: f64,
}

fn frobenius_sq(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Replaces `κ` by `κ + dh` and returns the intertwiner `E = e^{h/2}` with
/// its relative residual. Only Fourier models over the circle accept `h`.
pub fn conformal_shift(cx: &TwistedComplex, h: &TrigPoly) -> Result<ConformalShift> {
    let ModelKind::Carriere { lambda, n } = cx.kind else {
        return Err(Error::Unsupported(format!("model {} has no function space for h", cx.label)));
    };
    if h.bandwidth() > n {
        return Err(Error::InvalidArgument(format!(
            "h has bandwidth {} beyond the truncation {n}",
            h.bandwidth()
        )));
    }
    let shifted = carriere_blocks(lambda, n, Some(h))?;
    let e = truncated_multiplication(|t| (eval_periodic(h, t) / 2.0).exp(), n);
    let intertwiner = vec![e.clone(), crate::linalg::block_diag(&[e.clone(), e.clone()]), e];
    let before = twisted_differential(cx);
    let after = twisted_differential(&shifted);
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..before.len() {
        num += frobenius_sq(&(&after[k] * &intertwiner[k] - &intertwiner[k + 1] * &before[k]));
        den += frobenius_sq(&before[k]);
    }
    let residual = if den > 0.0 { (num / den).sqrt() } else { 0.0 };
    Ok(ConformalShift { shifted, intertwiner, residual })
}

/// Rotation-invariant cellular cochains of `S^2` with two polar vertices,
/// one meridian edge class and one face class; `κ = 0`.
pub fn taut_suspension_model() -> Result<TwistedComplex> {
    let d0 = CMat::from_row_slice(1, 2, &[real(1.0), real(-1.0)]);
    let d1 = zeros(1, 1);
    let labels = vec![
        vec!["north".to_string(), "south".to_string()],
        vec!["meridian".to_string()],
        vec!["face".to_string()],
    ];
    Ok(TwistedComplex::new("taut_suspension", vec![2, 1, 1], vec![d0, d1], vec![zeros(1, 2), zeros(1, 1)])?
        .with_labels(labels)?
        .spectral(false))
}

/// Fourier de Rham complex of `T^q` on modes `|m|_∞ <= truncation`, twisted
/// by the constant one-form `kappa`.
pub fn torus_model(q: usize, truncation: usize, kappa: &[f64]) -> Result<TwistedComplex> {
    if kappa.len() != q {
        return Err(Error::DimensionMismatch { expected: q, got: kappa.len() });
    }
    let modes = lattice_modes(q, truncation).len();
    let k1 = Form::one_form(kappa);
    let mut d = Vec::with_capacity(q);
    let mut kap = Vec::with_capacity(q);
    for r in 0..q {
        d.push(exterior_d(q, truncation, r)?.to_dense());
        let w = graded_operator(q, r, |f| wedge(&k1, f))?;
        kap.push(kron(&identity(modes), &w));
    }
    let dims = (0..=q).map(|r| modes * binomial(q, r)).collect();
    Ok(TwistedComplex::new(format!("torus_q{q}"), dims, d, kap)?.with_truncation(truncation))
}

/// Integer matrix with determinant 1 and an integer inverse, built from
/// random elementary row operations.
fn unimodular(n: usize, rng: &mut impl Rng) -> (CMat, CMat) {
    let mut t = identity(n);
    let mut t_inv = identity(n);
    if n < 2 {
        return (t, t_inv);
    }
    for _ in 0..2 * n {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let s = real(rng.random_range(-1i32..=1) as f64);
        // row_i += s row_j, inverse applies column_j -= s column_i
        let row = t.row(j).clone_owned() * s;
        let mut ri = t.row_mut(i);
        ri += row;
        let col = t_inv.column(i).clone_owned() * s;
        let mut cj = t_inv.column_mut(j);
        cj -= col;
    }
    (t, t_inv)
}

/// Koszul-type complex `d = a∧`, `K = b∧` on `Λ R^q` with small integer
/// vectors `a`, `b`, conjugated by integer unimodular matrices. All entries
/// stay integral, so the structural identities hold exactly.
pub fn random_valid_complex(q: usize, rng: &mut impl Rng) -> Result<TwistedComplex> {
    if q == 0 {
        return Err(Error::InvalidArgument("random complex needs q >= 1".into()));
    }
    let a: Vec<f64> = (0..q).map(|_| rng.random_range(-2i32..=2) as f64).collect();
    let b: Vec<f64> = (0..q).map(|_| 2.0 * rng.random_range(-1i32..=1) as f64).collect();
    let (fa, fb) = (Form::one_form(&a), Form::one_form(&b));
    let conj: Vec<(CMat, CMat)> = (0..=q).map(|r| unimodular(binomial(q, r), rng)).collect();
    let mut d = Vec::with_capacity(q);
    let mut kap = Vec::with_capacity(q);
    for r in 0..q {
        let da = graded_operator(q, r, |f| wedge(&fa, f))?;
        let kb = graded_operator(q, r, |f| wedge(&fb, f))?;
        d.push(&conj[r + 1].0 * da * &conj[r].1);
        kap.push(&conj[r + 1].0 * kb * &conj[r].1);
    }
    // pull back the Euclidean product: G = T^{-†} T^{-1}
    let inner = conj.iter().map(|(_, ti)| ti.adjoint() * ti).collect();
    let dims = (0..=q).map(|r| binomial(q, r)).collect();
    TwistedComplex::new(format!("random_q{q}"), dims, d, kap)?.with_inner(inner)
}
