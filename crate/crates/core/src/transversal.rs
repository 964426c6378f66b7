//! Transversal Dirac operators `A_Q = Σ c(f_j) ∇_{f_j}` and their symmetrized
//! form `D_Q = A_Q - ½ c(H^L)` on explicit distributions.
//!
//! Mean curvatures are computed numerically from an orthonormal frame: the
//! Levi-Civita connection comes from finite differences of the metric
//! (Christoffel symbols) plus finite differences of the frame fields.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{c, eigenvalues, max_abs, real, CMat, I};
use crate::spectrum::{SpectrumReport, MERGE_TOL};

pub const DEFAULT_STEP: f64 = 1e-5;
pub const MAX_STEP: f64 = 1e-2;
pub const FRAME_TOL: f64 = 1e-8;
pub const TANGENCY_TOL: f64 = 1e-6;
pub const MIN_GRID: usize = 64;

type FrameFn = dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync;
type MetricFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;

/// Orthonormal frame `f_1..f_n` adapted to `TM = Q ⊕ L`: the first `q`
/// vectors span `Q`, the rest span `L = Q^⊥`.
#[derive(Clone)]
pub struct DistributionFrame {
    pub label: String,
    dim: usize,
    q: usize,
    frame: Arc<FrameFn>,
    metric: Arc<MetricFn>,
}

impl std::fmt::Debug for DistributionFrame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DistributionFrame")
            .field("label", &self.label)
            .field("dim", &self.dim)
            .field("q", &self.q)
            .finish()
    }
}

/// Finite-difference stencil for directional derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    Central2,
    Central4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curvature {
    /// `H^L = Σ_{j>q} π_Q ∇_{f_j} f_j`, lies in `Q`.
    OfL,
    /// `H^Q = Σ_{j<=q} π_L ∇_{f_j} f_j`, lies in `L`.
    OfQ,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanCurvatureField {
    pub label: String,
    pub which: Curvature,
    pub points: Vec<Vec<f64>>,
    pub values: Vec<Vec<f64>>,
}

impl DistributionFrame {
    pub fn new(
        label: impl Into<String>,
        dim: usize,
        q: usize,
        frame: impl Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync + 'static,
        metric: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        if q > dim || dim == 0 {
            return Err(Error::InvalidArgument(format!("rank {q} distribution in dimension {dim}")));
        }
        Ok(DistributionFrame { label: label.into(), dim, q, frame: Arc::new(frame), metric: Arc::new(metric) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn frame_at(&self, p: &[f64]) -> Vec<Vec<f64>> {
        (self.frame)(p)
    }

    pub fn metric_at(&self, p: &[f64]) -> DMatrix<f64> {
        (self.metric)(p)
    }

    /// Constant coordinate frame of Euclidean space; `Q` is spanned by the
    /// first `q` axes.
    pub fn coordinate_axes(dim: usize, q: usize) -> Result<Self> {
        DistributionFrame::new(
            format!("axes_r{dim}_q{q}"),
            dim,
            q,
            move |_| (0..dim).map(|j| (0..dim).map(|i| if i == j { 1.0 } else { 0.0 }).collect()).collect(),
            move |_| DMatrix::identity(dim, dim),
        )
    }

    /// Torus `(R/2πZ)^2` with metric `e^{2g(y)} dx² + dy²`, `Q = span{e^{-g} ∂_x}`
    /// and `L = span{∂_y}`. Coordinates are `(x, y)`.
    pub fn warped_torus(g: TrigPoly) -> Result<Self> {
        let g_frame = g.clone();
        DistributionFrame::new(
            "warped_torus",
            2,
            1,
            move |p| vec![vec![(-g_frame.eval(p[1])).exp(), 0.0], vec![0.0, 1.0]],
            move |p| DMatrix::from_row_slice(2, 2, &[(2.0 * g.eval(p[1])).exp(), 0.0, 0.0, 1.0]),
        )
    }

    /// Same torus with the roles swapped: `Q = span{∂_y}`, `L = span{e^{-g} ∂_x}`.
    pub fn warped_torus_swapped(g: TrigPoly) -> Result<Self> {
        let g_frame = g.clone();
        DistributionFrame::new(
            "warped_torus_swapped",
            2,
            1,
            move |p| vec![vec![0.0, 1.0], vec![(-g_frame.eval(p[1])).exp(), 0.0]],
            move |p| DMatrix::from_row_slice(2, 2, &[(2.0 * g.eval(p[1])).exp(), 0.0, 0.0, 1.0]),
        )
    }

    /// Flat `T^2` with `Q` spanned by the unit vector along `(1, r)`.
    pub fn slope(r: f64) -> Result<Self> {
        let s = (1.0 + r * r).sqrt();
        DistributionFrame::new(
            "slope",
            2,
            1,
            move |_| vec![vec![1.0 / s, r / s], vec![-r / s, 1.0 / s]],
            |_| DMatrix::identity(2, 2),
        )
    }

    /// `Q = ker(dz - ½(x dy - y dx))` in Euclidean `R^3`, with the
    /// Gram-Schmidt frame of `∂_x - (y/2)∂_z`, `∂_y + (x/2)∂_z` and the unit
    /// normal along `(y/2, -x/2, 1)`.
    pub fn heisenberg() -> Result<Self> {
        DistributionFrame::new(
            "heisenberg",
            3,
            2,
            |p| {
                let (x, y) = (p[0], p[1]);
                let u = [1.0, 0.0, -y / 2.0];
                let v = [0.0, 1.0, x / 2.0];
                let f1 = normalize(&u);
                let proj = dot(&v, &f1);
                let f2 = normalize(&[v[0] - proj * f1[0], v[1] - proj * f1[1], v[2] - proj * f1[2]]);
                let f3 = normalize(&[y / 2.0, -x / 2.0, 1.0]);
                vec![f1, f2, f3]
            },
            |_| DMatrix::identity(3, 3),
        )
    }

    /// Largest deviation of `g(f_i, f_j)` from `δ_ij` at `p`.
    pub fn orthonormality_residual(&self, p: &[f64]) -> f64 {
        let g = self.metric_at(p);
        let f = self.frame_at(p);
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((inner(&g, &f[i], &f[j]) - want).abs());
            }
        }
        worst
    }

    fn validate_at(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: p.len() });
        }
        let f = self.frame_at(p);
        if f.len() != self.dim || f.iter().any(|v| v.len() != self.dim) {
            return Err(Error::InvalidArgument("frame evaluator returned the wrong shape".into()));
        }
        let res = self.orthonormality_residual(p);
        if res > FRAME_TOL {
            return Err(Error::invariant(format!("frame orthonormal at {p:?}"), res));
        }
        Ok(())
    }

    /// Orthogonal projection onto `Q` (or `L` when `onto_q` is false).
    pub fn project(&self, p: &[f64], v: &[f64], onto_q: bool) -> Vec<f64> {
        let g = self.metric_at(p);
        let f = self.frame_at(p);
        let range = if onto_q { 0..self.q } else { self.q..self.dim };
        let mut out = vec![0.0; self.dim];
        for j in range {
            let coef = inner(&g, v, &f[j]);
            for (o, fj) in out.iter_mut().zip(&f[j]) {
                *o += coef * fj;
            }
        }
        out
    }

    /// Christoffel symbols `Γ^k_ij` at `p` from differences of the metric.
    fn christoffel(&self, p: &[f64], h: f64, stencil: Stencil) -> Vec<DMatrix<f64>> {
        let n = self.dim;
        let dg: Vec<DMatrix<f64>> = (0..n)
            .map(|l| {
                let mut e = vec![0.0; n];
                e[l] = 1.0;
                derivative(|q| self.metric_at(q), p, &e, h, stencil)
            })
            .collect();
        let g_inv = self.metric_at(p).try_inverse().expect("metric invertible");
        (0..n)
            .map(|k| {
                DMatrix::from_fn(n, n, |i, j| {
                    0.5 * (0..n)
                        .map(|l| g_inv[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]))
                        .sum::<f64>()
                })
            })
            .collect()
    }

    /// `∇_{f_j} f_j` at `p`.
    fn self_derivative(&self, p: &[f64], j: usize, h: f64, stencil: Stencil, gamma: &[DMatrix<f64>]) -> Vec<f64> {
        let f = self.frame_at(p);
        let x = &f[j];
        let field = |q: &[f64]| DMatrix::from_row_slice(1, self.dim, &self.frame_at(q)[j]);
        let dy = derivative(field, p, x, h, stencil);
        (0..self.dim)
            .map(|k| {
                let conn: f64 = (0..self.dim)
                    .flat_map(|a| (0..self.dim).map(move |b| (a, b)))
                    .map(|(a, b)| gamma[k][(a, b)] * x[a] * x[b])
                    .sum();
                dy[(0, k)] + conn
            })
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &[f64]) -> Vec<f64> {
    let n = dot(v, v).sqrt();
    v.iter().map(|x| x / n).collect()
}

fn inner(g: &DMatrix<f64>, a: &[f64], b: &[f64]) -> f64 {
    (DVector::from_column_slice(a).transpose() * g * DVector::from_column_slice(b))[(0, 0)]
}

fn shifted(p: &[f64], dir: &[f64], t: f64) -> Vec<f64> {
    p.iter().zip(dir).map(|(a, d)| a + t * d).collect()
}

/// Directional derivative of a matrix-valued function along `dir`.
fn derivative(f: impl Fn(&[f64]) -> DMatrix<f64>, p: &[f64], dir: &[f64], h: f64, stencil: Stencil) -> DMatrix<f64> {
    match stencil {
        Stencil::Central2 => (f(&shifted(p, dir, h)) - f(&shifted(p, dir, -h))) / (2.0 * h),
        Stencil::Central4 => {
            (f(&shifted(p, dir, -2.0 * h)) - f(&shifted(p, dir, -h)) * 8.0 + f(&shifted(p, dir, h)) * 8.0
                - f(&shifted(p, dir, 2.0 * h)))
                / (12.0 * h)
        }
    }
}

pub fn mean_curvature(frame: &DistributionFrame, which: Curvature, points: &[Vec<f64>]) -> Result<MeanCurvatureField> {
    mean_curvature_with(frame, which, points, DEFAULT_STEP, Stencil::Central2)
}

pub fn mean_curvature_with(
    frame: &DistributionFrame,
    which: Curvature,
    points: &[Vec<f64>],
    h: f64,
    stencil: Stencil,
) -> Result<MeanCurvatureField> {
    if !(h > 0.0 && h <= MAX_STEP) {
        return Err(Error::InvalidArgument(format!("finite-difference step {h} outside (0, {MAX_STEP}]")));
    }
    let mut values = Vec::with_capacity(points.len());
    for p in points {
        frame.validate_at(p)?;
        let gamma = frame.christoffel(p, h, stencil);
        let (range, onto_q) = match which {
            Curvature::OfL => (frame.q..frame.dim, true),
            Curvature::OfQ => (0..frame.q, false),
        };
        let mut acc = vec![0.0; frame.dim];
        for j in range {
            let nab = frame.self_derivative(p, j, h, stencil, &gamma);
            for (a, b) in acc.iter_mut().zip(frame.project(p, &nab, onto_q)) {
                *a += b;
            }
        }
        values.push(acc);
    }
    let label = match which {
        Curvature::OfL => "H^L",
        Curvature::OfQ => "H^Q",
    };
    Ok(MeanCurvatureField { label: label.into(), which, points: points.to_vec(), values })
}

impl MeanCurvatureField {
    /// Largest metric norm of the component outside the subbundle the field
    /// should lie in (`Q` for `H^L`, `L` for `H^Q`).
    pub fn tangency_residual(&self, frame: &DistributionFrame) -> f64 {
        let onto_q = self.which == Curvature::OfQ;
        self.points
            .iter()
            .zip(&self.values)
            .map(|(p, v)| {
                let off = frame.project(p, v, onto_q);
                inner(&frame.metric_at(p), &off, &off).sqrt()
            })
            .fold(0.0, f64::max)
    }

    pub fn check_tangency(&self, frame: &DistributionFrame) -> Result<()> {
        let r = self.tangency_residual(frame);
        if r > TANGENCY_TOL {
            return Err(Error::invariant(format!("{} tangent to its subbundle", self.label), r));
        }
        Ok(())
    }

    /// Largest Euclidean coordinate norm over the sample points.
    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(|v| dot(v, v).sqrt()).fold(0.0, f64::max)
    }
}

/// Real trigonometric polynomial on `R/2πZ`:
/// `a_0 + Σ_k (a_k cos ky + b_k sin ky)`.
#[derive(Debug, Clone, PartialEq, Default, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigPoly {
    /// `a_0, a_1, ...`
    #[serde(default)]
    pub cos: Vec<f64>,
    /// `b_1, b_2, ...` (no constant term).
    #[serde(default)]
    pub sin: Vec<f64>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        TrigPoly::default()
    }

    /// `amp · sin(k y)`.
    pub fn sine(amp: f64, k: usize) -> Self {
        let mut sin = vec![0.0; k];
        sin[k - 1] = amp;
        TrigPoly { cos: Vec::new(), sin }
    }

    pub fn eval(&self, y: f64) -> f64 {
        let a: f64 = self.cos.iter().enumerate().map(|(k, a)| a * (k as f64 * y).cos()).sum();
        let b: f64 = self.sin.iter().enumerate().map(|(k, b)| b * ((k + 1) as f64 * y).sin()).sum();
        a + b
    }

    pub fn derivative(&self) -> TrigPoly {
        // d/dy (a cos ky) = -k a sin ky, d/dy (b sin ky) = k b cos ky
        let top = self.bandwidth();
        let mut cos = vec![0.0; top + 1];
        let mut sin = vec![0.0; top];
        for (k, a) in self.cos.iter().enumerate().skip(1) {
            sin[k - 1] -= k as f64 * a;
        }
        for (k, b) in self.sin.iter().enumerate() {
            cos[k + 1] += (k + 1) as f64 * b;
        }
        TrigPoly { cos, sin }
    }

    /// Highest frequency with a nonzero coefficient.
    pub fn bandwidth(&self) -> usize {
        let c = self.cos.iter().rposition(|&a| a != 0.0).unwrap_or(0);
        let s = self.sin.iter().rposition(|&b| b != 0.0).map(|k| k + 1).unwrap_or(0);
        c.max(s)
    }

    pub fn is_zero(&self) -> bool {
        self.cos.iter().chain(&self.sin).all(|&x| x == 0.0)
    }
}

/// Equispaced grid `y_j = 2πj/N`.
pub fn periodic_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}

/// Wavenumbers in DFT order; the Nyquist mode is `+N/2`.
fn wavenumbers(n: usize) -> Vec<f64> {
    (0..n).map(|j| if j <= n / 2 { j as f64 } else { j as f64 - n as f64 }).collect()
}

/// Unitary DFT matrix `F_{jk} = e^{-2πi jk/N}/√N`.
pub fn dft_matrix(n: usize) -> CMat {
    let s = 1.0 / (n as f64).sqrt();
    CMat::from_fn(n, n, |j, k| {
        let phase = -2.0 * PI * ((j * k) % n) as f64 / n as f64;
        c(phase.cos() * s, phase.sin() * s)
    })
}

/// Fourier-collocation matrix of `i d/dy` on `N` grid points.
pub fn i_d_dy(n: usize) -> CMat {
    let f = dft_matrix(n);
    let diag = CMat::from_diagonal(&nalgebra::DVector::from_iterator(n, wavenumbers(n).into_iter().map(|k| real(-k))));
    f.adjoint() * diag * f
}

fn diag_from(values: impl Iterator<Item = num_complex::Complex64>, n: usize) -> CMat {
    CMat::from_diagonal(&nalgebra::DVector::from_iterator(n, values))
}

fn validate_grid(g: &TrigPoly, n: usize) -> Result<()> {
    if n < MIN_GRID {
        return Err(Error::InvalidArgument(format!("grid size {n} below minimum {MIN_GRID}")));
    }
    let band = g.derivative().bandwidth();
    if n < 4 * band {
        return Err(Error::InvalidArgument(format!(
            "aliasing guard: grid size {n} is less than 4x the bandwidth {band} of g'"
        )));
    }
    Ok(())
}

/// Largest wavenumber treated as resolved on an `N`-point grid.
pub fn resolved_band(n: usize) -> usize {
    n / 4
}

/// Eigenvalue cutoff for the resolved band, halfway to the next integer.
fn band_cutoff(n: usize) -> f64 {
    resolved_band(n) as f64 + 0.5
}

/// Compresses an operator on grid values to the Fourier modes `|k| <= band`.
pub fn compress_to_band(op: &CMat, band: usize) -> CMat {
    let n = op.nrows();
    let f = dft_matrix(n);
    let ks = wavenumbers(n);
    let keep: Vec<usize> = (0..n).filter(|&j| ks[j].abs() <= band as f64).collect();
    let modal = &f * op * f.adjoint();
    CMat::from_fn(keep.len(), keep.len(), |i, j| modal[(keep[i], keep[j])])
}

/// Pieces of the warped-torus operators on one `x`-Fourier mode, on the grid.
#[derive(Debug, Clone)]
pub struct WarpedTorusOperators {
    pub grid: Vec<f64>,
    /// `A_L = i ∂_y`.
    pub a_l: CMat,
    /// `D_L = A_L - ½ c(H^Q)` with `c(∂_y) = i`.
    pub d_l: CMat,
    /// Volume weight `√det g = e^{g(y)}` on the grid.
    pub weight: Vec<f64>,
    /// `c(H^Q)` as a multiplication operator.
    pub c_hq: CMat,
}

/// Assembles the `L`-direction operators of the warped torus with the mean
/// curvature `H^Q` taken from [`mean_curvature`].
pub fn warped_torus_operators(g: &TrigPoly, n: usize) -> Result<WarpedTorusOperators> {
    validate_grid(g, n)?;
    let grid = periodic_grid(n);
    let frame = DistributionFrame::warped_torus_swapped(g.clone())?;
    let points: Vec<Vec<f64>> = grid.iter().map(|&y| vec![0.0, y]).collect();
    // With Q and L swapped, the "H^L" of the swapped frame is the H^Q of the
    // original splitting; it points along ∂_y.
    let hq = mean_curvature(&frame, Curvature::OfL, &points)?;
    hq.check_tangency(&frame)?;
    let c_hq = diag_from(hq.values.iter().map(|v| I * v[1]), n);
    let a_l = i_d_dy(n);
    let d_l = &a_l - c_hq.scale(0.5);
    let weight = grid.iter().map(|&y| g.eval(y).exp()).collect();
    Ok(WarpedTorusOperators { grid, a_l, d_l, weight, c_hq })
}

/// `D_L = i(∂_y + ½ g'(y))` on the warped torus. Only eigenvalues with
/// `|λ| < N/4 + ½` are reported; the rest are counted in the `discarded`
/// diagnostic. `D_L` does not involve `x`, so each of the `2·x_modes + 1`
/// `x`-modes contributes the same spectrum and multiplicities scale by that count.
pub fn warped_torus_dl(g: &TrigPoly, n: usize, x_modes: usize) -> Result<SpectrumReport> {
    let ops = warped_torus_operators(g, n)?;
    let band = band_cutoff(n);
    let ev = eigenvalues(&ops.d_l);
    let max_imag = ev.iter().filter(|z| z.re.abs() <= band).map(|z| z.im.abs()).fold(0.0, f64::max);
    let kept: Vec<f64> = ev.iter().filter(|z| z.re.abs() <= band).map(|z| z.re).collect();
    let discarded = ev.len() - kept.len();
    let copies = 2 * x_modes + 1;
    let all: Vec<f64> = kept.iter().flat_map(|&v| std::iter::repeat_n(v, copies)).collect();
    let max_int_dev = kept.iter().map(|v| (v - v.round()).abs()).fold(0.0, f64::max);
    Ok(SpectrumReport::from_values("warped_torus_D_L", n, all, 1e-6)
        .with_diagnostic("discarded", discarded as f64)
        .with_diagnostic("max_imag", max_imag)
        .with_diagnostic("max_integer_deviation", max_int_dev)
        .with_diagnostic("x_modes", copies as f64))
}

/// Per-`x`-mode spectra of `D_L`, one per mode in `-x_modes..=x_modes`.
/// They coincide because the operator ignores `x`.
pub fn warped_torus_dl_per_mode(g: &TrigPoly, n: usize, x_modes: usize) -> Result<Vec<(i64, Vec<f64>)>> {
    let ops = warped_torus_operators(g, n)?;
    let band = band_cutoff(n);
    let m = x_modes as i64;
    // e^{ikx} commutes with D_L, so every x-mode sees the same y-operator.
    (-m..=m)
        .map(|k| {
            let mut ev: Vec<f64> =
                eigenvalues(&ops.d_l).iter().filter(|z| z.re.abs() <= band).map(|z| z.re).collect();
            ev.sort_by(f64::total_cmp);
            Ok((k, ev))
        })
        .collect()
}

/// `max |e^{-g/2} (i∂_y) e^{g/2} - D_L|` compressed to the resolved band.
pub fn conjugation_residual(g: &TrigPoly, n: usize) -> Result<f64> {
    let ops = warped_torus_operators(g, n)?;
    let e_plus = diag_from(ops.grid.iter().map(|&y| real((g.eval(y) / 2.0).exp())), n);
    let e_minus = diag_from(ops.grid.iter().map(|&y| real((-g.eval(y) / 2.0).exp())), n);
    let conj = e_minus * &ops.a_l * e_plus;
    Ok(max_abs(&compress_to_band(&(conj - &ops.d_l), resolved_band(n))))
}

/// Adjoint in the weighted inner product `<u, v> = Σ conj(u) w v`.
pub fn weighted_adjoint(op: &CMat, weight: &[f64]) -> CMat {
    let n = op.nrows();
    let w = diag_from(weight.iter().map(|&x| real(x)), n);
    let w_inv = diag_from(weight.iter().map(|&x| real(1.0 / x)), n);
    w_inv * op.adjoint() * w
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdjointDefect {
    pub grid: usize,
    /// `|A_L* - (A_L - c(H^Q))|` on the resolved band.
    pub defect: f64,
    /// `|D_L - D_L*|` on the resolved band.
    pub hermiticity: f64,
}

/// Checks the adjoint formula `A* = A - c(H)` for the `L`-direction operator
/// of the warped torus in the weighted `L²` product, and the symmetry of `D_L`.
pub fn adjoint_defect(g: &TrigPoly, n: usize) -> Result<AdjointDefect> {
    let ops = warped_torus_operators(g, n)?;
    let band = resolved_band(n);
    let a_star = weighted_adjoint(&ops.a_l, &ops.weight);
    let predicted = &ops.a_l - &ops.c_hq;
    let defect = max_abs(&compress_to_band(&(a_star - predicted), band));
    let d_star = weighted_adjoint(&ops.d_l, &ops.weight);
    let hermiticity = max_abs(&compress_to_band(&(&ops.d_l - d_star), band));
    Ok(AdjointDefect { grid: n, defect, hermiticity })
}

/// `D_Q = i e^{-g(y)} ∂_x` on the `x`-mode `e^{i n x}`, i.e. multiplication
/// by `-n e^{-g(y)}`, assembled as `A_Q - ½ c(H^L)` with `H^L` computed.
pub fn warped_torus_dq_operator(g: &TrigPoly, x_mode: i64, n: usize) -> Result<CMat> {
    validate_grid(g, n)?;
    let grid = periodic_grid(n);
    let frame = DistributionFrame::warped_torus(g.clone())?;
    let points: Vec<Vec<f64>> = grid.iter().map(|&y| vec![0.0, y]).collect();
    let hl = mean_curvature(&frame, Curvature::OfL, &points)?;
    hl.check_tangency(&frame)?;
    // c(e^{-g} ∂_x) = i, so c(H^L) = i e^{g} H^L_x.
    let a_q = diag_from(grid.iter().map(|&y| I * (-g.eval(y)).exp() * (I * x_mode as f64)), n);
    let c_hl = diag_from(
        grid.iter().zip(&hl.values).map(|(&y, v)| I * g.eval(y).exp() * v[0]),
        n,
    );
    Ok(a_q - c_hl.scale(0.5))
}

pub fn warped_torus_dq(g: &TrigPoly, x_mode: i64, n: usize) -> Result<SpectrumReport> {
    let op = warped_torus_dq_operator(g, x_mode, n)?;
    let ev = eigenvalues(&op);
    let max_imag = ev.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let values: Vec<f64> = ev.iter().map(|z| z.re).collect();
    let (lo, hi) = band_range(g, n);
    Ok(SpectrumReport::from_values(format!("warped_torus_D_Q_n{x_mode}"), n, values, MERGE_TOL)
        .with_diagnostic("max_imag", max_imag)
        .with_diagnostic("exp_neg_g_min", lo)
        .with_diagnostic("exp_neg_g_max", hi))
}

/// Range `[min e^{-g}, max e^{-g}]` sampled on the grid.
pub fn band_range(g: &TrigPoly, n: usize) -> (f64, f64) {
    periodic_grid(n)
        .iter()
        .map(|&y| (-g.eval(y)).exp())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Union of the `D_Q` spectra over `x`-modes `|n| <= max_mode`.
pub fn warped_torus_dq_bands(g: &TrigPoly, max_mode: usize, n: usize) -> Result<SpectrumReport> {
    let m = max_mode as i64;
    let mut values = Vec::new();
    for k in -m..=m {
        values.extend(warped_torus_dq(g, k, n)?.expanded());
    }
    Ok(SpectrumReport::from_values("warped_torus_D_Q_bands", n, values, MERGE_TOL))
}

/// `D_Q = i(∂_x + r ∂_y)/√(1+r²)` on scalar Fourier modes of `T^2`; the
/// eigenvalue on `e^{2πi(mx + ny)}` is `-2π(m + rn)/√(1+r²)`.
pub fn slope_distribution_dq(r: f64, truncation: usize) -> Result<SpectrumReport> {
    if truncation == 0 {
        return Err(Error::InvalidArgument("slope spectrum needs truncation M >= 1".into()));
    }
    let frame = DistributionFrame::slope(r)?;
    let f1 = frame.frame_at(&[0.0, 0.0])[0].clone();
    let m = truncation as i64;
    let mut values = Vec::with_capacity(((2 * m + 1) * (2 * m + 1)) as usize);
    for a in -m..=m {
        for b in -m..=m {
            // c(f_1) = i, ∇_{f_1} e^{2πi(ax+by)} = 2πi(f_1·(a, b)) e^{...}
            let d = I * (I * 2.0 * PI * (f1[0] * a as f64 + f1[1] * b as f64));
            values.push(d.re);
        }
    }
    let report = SpectrumReport::from_values(format!("slope_D_Q_r{r}"), truncation, values, MERGE_TOL);
    let gap = report.min_gap().unwrap_or(f64::INFINITY);
    Ok(report.with_diagnostic("min_gap", gap))
}

/// Sample points for the Heisenberg distribution: a square grid in the
/// `(x, y)` plane at height `z`.
pub fn heisenberg_points(side: usize, half_width: f64, z: f64) -> Vec<Vec<f64>> {
    let step = if side > 1 { 2.0 * half_width / (side - 1) as f64 } else { 0.0 };
    let mut pts = Vec::with_capacity(side * side);
    for i in 0..side {
        for j in 0..side {
            pts.push(vec![-half_width + i as f64 * step, -half_width + j as f64 * step, z]);
        }
    }
    pts
}

/// Largest coordinate difference between two samplings of a field.
pub fn field_distance(a: &MeanCurvatureField, b: &MeanCurvatureField) -> f64 {
    a.values
        .iter()
        .zip(&b.values)
        .flat_map(|(u, v)| u.iter().zip(v).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_axes_have_zero_curvature() {
        let frame = DistributionFrame::coordinate_axes(3, 2).unwrap();
        let pts = vec![vec![0.1, 0.2, 0.3], vec![-1.0, 2.0, 0.5]];
        let hl = mean_curvature(&frame, Curvature::OfL, &pts).unwrap();
        assert_eq!(hl.max_norm(), 0.0);
        let hq = mean_curvature(&frame, Curvature::OfQ, &pts).unwrap();
        assert_eq!(hq.max_norm(), 0.0);
    }

    #[test]
    fn rejects_bad_step_and_frame() {
        let frame = DistributionFrame::coordinate_axes(2, 1).unwrap();
        let pts = vec![vec![0.0, 0.0]];
        assert!(mean_curvature_with(&frame, Curvature::OfL, &pts, 0.1, Stencil::Central2).is_err());
        assert!(mean_curvature_with(&frame, Curvature::OfL, &pts, 0.0, Stencil::Central2).is_err());
        let skew = DistributionFrame::new(
            "skew",
            2,
            1,
            |_| vec![vec![1.0, 0.0], vec![1.0, 1.0]],
            |_| DMatrix::identity(2, 2),
        )
        .unwrap();
        assert!(matches!(
            mean_curvature(&skew, Curvature::OfL, &pts),
            Err(Error::InvariantViolated { .. })
        ));
    }

    #[test]
    fn warped_torus_curvatures() {
        let g = TrigPoly::sine(1.0, 1);
        let frame = DistributionFrame::warped_torus(g.clone()).unwrap();
        let pts: Vec<Vec<f64>> = (0..7).map(|j| vec![0.3, j as f64]).collect();
        let hq = mean_curvature(&frame, Curvature::OfQ, &pts).unwrap();
        for (p, v) in pts.iter().zip(&hq.values) {
            assert!(v[0].abs() < 1e-6);
            assert!((v[1] + p[1].cos()).abs() < 1e-6, "H^Q_y at {p:?} = {}", v[1]);
        }
        let hl = mean_curvature(&frame, Curvature::OfL, &pts).unwrap();
        assert!(hl.max_norm() < 1e-6);
        hl.check_tangency(&frame).unwrap();
    }

    #[test]
    fn trig_poly_derivative() {
        let g = TrigPoly { cos: vec![0.5, 2.0], sin: vec![0.0, 3.0] };
        let d = g.derivative();
        for y in [0.0f64, 0.7, 2.1] {
            let want = -2.0 * y.sin() + 6.0 * (2.0 * y).cos();
            assert!((d.eval(y) - want).abs() < 1e-12);
        }
        assert_eq!(g.bandwidth(), 2);
        assert_eq!(TrigPoly::zero().bandwidth(), 0);
    }

    #[test]
    fn flat_dl_is_circle_dirac() {
        let r = warped_torus_dl(&TrigPoly::zero(), 64, 0).unwrap();
        let want: Vec<f64> = (-16..=16).map(|k| k as f64).collect();
        assert_eq!(r.eigenvalues.len(), want.len());
        for (a, b) in r.eigenvalues.iter().zip(&want) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn grid_guards() {
        assert!(warped_torus_dl(&TrigPoly::zero(), 32, 0).is_err());
        assert!(warped_torus_dl(&TrigPoly::sine(1.0, 20), 64, 0).is_err());
    }

    #[test]
    fn dq_zero_mode_is_zero() {
        let r = warped_torus_dq(&TrigPoly::sine(1.0, 1), 0, 64).unwrap();
        assert_eq!(r.eigenvalues.len(), 1);
        assert!(r.eigenvalues[0].abs() < 1e-9);
    }

    #[test]
    fn slope_zero_is_axis_aligned() {
        let r = slope_distribution_dq(0.0, 2).unwrap();
        assert_eq!(r.eigenvalues.len(), 5);
        assert!(r.multiplicities.iter().all(|&m| m == 5));
        assert!((r.eigenvalues[4] - 4.0 * PI).abs() < 1e-12);
    }
}
