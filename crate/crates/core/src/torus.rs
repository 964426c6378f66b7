//! Fourier-spectral operators on flat tori `T^n = R^n / Z^n`.
//!
//! A field is truncated to the lattice modes `m` with `|m|_∞ <= M`. Every
//! constant-coefficient operator is block diagonal in that basis: on the mode
//! `e^{2πi m·x}` it acts by its symbol at the frequency `2πm`. Spectra are
//! therefore exact per block; the truncation only limits which modes appear.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::clifford::{build_clifford, CliffordRep};
use crate::error::{Error, Result};
use crate::exterior::{
    graded_operator, hodge_star, interior, multi_indices, wedge, Form, MetricPoint,
};
use crate::linalg::{
    self, hermitian_eigen, hermitian_eigenvalues, identity, max_abs, numerical_rank, real,
    singular_values, zeros, CMat, I, RANK_TOL, ZERO,
};
use crate::spectrum::{SpectrumReport, MERGE_TOL};

/// Agreement required between the two codifferential constructions.
pub const CODIFFERENTIAL_TOL: f64 = 1e-10;

/// Lattice modes with `|m|_∞ <= truncation`, lexicographic.
pub fn lattice_modes(n: usize, truncation: usize) -> Vec<Vec<i64>> {
    let side = 2 * truncation as i64 + 1;
    let count = (side as usize).pow(n as u32);
    (0..count)
        .map(|mut flat| {
            let mut m = vec![0i64; n];
            for slot in m.iter_mut().rev() {
                *slot = (flat % side as usize) as i64 - truncation as i64;
                flat /= side as usize;
            }
            m
        })
        .collect()
}

fn frequency(m: &[i64]) -> Vec<f64> {
    m.iter().map(|&k| 2.0 * PI * k as f64).collect()
}

/// Block-diagonal operator, one dense block per lattice mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeOperator {
    pub n: usize,
    pub truncation: usize,
    pub modes: Vec<Vec<i64>>,
    pub blocks: Vec<CMat>,
}

impl ModeOperator {
    pub fn from_fn(n: usize, truncation: usize, f: impl Fn(&[i64]) -> Result<CMat> + Sync + Send) -> Result<Self> {
        let modes = lattice_modes(n, truncation);
        let blocks = modes.par_iter().map(|m| f(m)).collect::<Result<Vec<_>>>()?;
        Ok(ModeOperator { n, truncation, modes, blocks })
    }

    pub fn block_shape(&self) -> (usize, usize) {
        self.blocks.first().map(|b| b.shape()).unwrap_or((0, 0))
    }

    pub fn block(&self, m: &[i64]) -> Option<&CMat> {
        self.modes.iter().position(|x| x == m).map(|p| &self.blocks[p])
    }

    pub fn to_dense(&self) -> CMat {
        linalg::block_diag(&self.blocks)
    }

    /// L² adjoint; with volume one and orthonormal `dx_I` this is the
    /// blockwise conjugate transpose.
    pub fn adjoint(&self) -> ModeOperator {
        self.map_blocks(|b| b.adjoint())
    }

    pub fn map_blocks(&self, f: impl Fn(&CMat) -> CMat + Sync + Send) -> ModeOperator {
        ModeOperator {
            n: self.n,
            truncation: self.truncation,
            modes: self.modes.clone(),
            blocks: self.blocks.par_iter().map(f).collect(),
        }
    }

    fn zip_blocks(&self, other: &ModeOperator, f: impl Fn(&CMat, &CMat) -> CMat + Sync + Send) -> Result<ModeOperator> {
        if self.modes != other.modes {
            return Err(Error::InvalidArgument("mode sets differ".into()));
        }
        let blocks = self.blocks.par_iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect();
        Ok(ModeOperator { n: self.n, truncation: self.truncation, modes: self.modes.clone(), blocks })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModeOperator) -> Result<ModeOperator> {
        self.zip_blocks(other, |a, b| a * b)
    }

    pub fn add(&self, other: &ModeOperator) -> Result<ModeOperator> {
        self.zip_blocks(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ModeOperator) -> Result<ModeOperator> {
        self.zip_blocks(other, |a, b| a - b)
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(max_abs).fold(0.0, f64::max)
    }

    pub fn max_singular_value(&self) -> f64 {
        self.blocks
            .iter()
            .filter_map(|b| singular_values(b).first().copied())
            .fold(0.0, f64::max)
    }

    /// Kernel dimension with the cutoff taken relative to the largest
    /// singular value over all blocks.
    pub fn kernel_dim(&self, rel_tol: f64) -> usize {
        let cutoff = rel_tol * self.max_singular_value();
        self.blocks
            .iter()
            .map(|b| b.ncols() - linalg::rank_with_cutoff(b, cutoff).rank)
            .sum()
    }

    pub fn apply(&self, field: &FourierFormField) -> Result<FourierFormField> {
        if field.modes != self.modes {
            return Err(Error::InvalidArgument("field and operator truncations differ".into()));
        }
        let (rows, cols) = self.block_shape();
        if field.coeffs.first().map(|c| c.coeffs().len()) != Some(cols) {
            return Err(Error::DimensionMismatch { expected: cols, got: field.grade_dim() });
        }
        let grade = self
            .output_grade(field.grade)
            .ok_or_else(|| Error::InvalidArgument(format!("cannot infer output grade from {rows}x{cols} blocks")))?;
        let coeffs = self
            .blocks
            .iter()
            .zip(&field.coeffs)
            .map(|(b, f)| {
                let v = b * f.as_column();
                Form::from_coeffs(self.n, grade, v.iter().copied().collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FourierFormField { n: self.n, truncation: self.truncation, grade, modes: self.modes.clone(), coeffs })
    }

    fn output_grade(&self, input: usize) -> Option<usize> {
        let (rows, cols) = self.block_shape();
        if rows == cols {
            return Some(input);
        }
        let up = input + 1;
        let down = input.checked_sub(1);
        if up <= self.n && linalg::binomial(self.n, up) == rows && linalg::binomial(self.n, input) == cols {
            return Some(up);
        }
        down.filter(|&d| linalg::binomial(self.n, d) == rows)
    }
}

/// Truncated Fourier series of `r`-forms on `T^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierFormField {
    pub n: usize,
    pub truncation: usize,
    pub grade: usize,
    modes: Vec<Vec<i64>>,
    coeffs: Vec<Form>,
}

impl FourierFormField {
    pub fn zero(n: usize, truncation: usize, grade: usize) -> Result<Self> {
        let modes = lattice_modes(n, truncation);
        let coeffs = modes.iter().map(|_| Form::zero(n, grade)).collect::<Result<Vec<_>>>()?;
        Ok(FourierFormField { n, truncation, grade, modes, coeffs })
    }

    fn grade_dim(&self) -> usize {
        linalg::binomial(self.n, self.grade)
    }

    pub fn modes(&self) -> &[Vec<i64>] {
        &self.modes
    }

    pub fn coeff(&self, m: &[i64]) -> Result<&Form> {
        let p = self.position(m)?;
        Ok(&self.coeffs[p])
    }

    fn position(&self, m: &[i64]) -> Result<usize> {
        self.modes
            .iter()
            .position(|x| x == m)
            .ok_or_else(|| Error::InvalidArgument(format!("mode {m:?} outside truncation {}", self.truncation)))
    }

    pub fn set(&mut self, m: &[i64], form: Form) -> Result<()> {
        if form.n() != self.n || form.grade() != self.grade {
            return Err(Error::InvalidArgument("coefficient form has the wrong shape".into()));
        }
        let p = self.position(m)?;
        self.coeffs[p] = form;
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(Form::max_abs).fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &FourierFormField) -> Result<f64> {
        if self.modes != other.modes || self.grade != other.grade {
            return Err(Error::InvalidArgument("fields have different shapes".into()));
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.distance(b))
            .try_fold(0.0f64, |acc, d| d.map(|d| acc.max(d)))
    }
}

fn check_grade(n: usize, r: usize) -> Result<()> {
    if r > n {
        Err(Error::GradeOutOfRange { grade: r, n })
    } else {
        Ok(())
    }
}

/// Per-mode matrix of `d = 2πi m ∧` from `r`-forms to `(r+1)`-forms.
fn d_block(n: usize, r: usize, m: &[i64]) -> Result<CMat> {
    if r == n {
        return Ok(zeros(0, linalg::binomial(n, n)));
    }
    let xi = Form::one_form(&frequency(m)).scale(I);
    graded_operator(n, r, |f| wedge(&xi, f))
}

/// Exterior derivative `Ω^r → Ω^{r+1}` on the truncated torus.
pub fn exterior_d(n: usize, truncation: usize, r: usize) -> Result<ModeOperator> {
    check_grade(n, r)?;
    ModeOperator::from_fn(n, truncation, |m| d_block(n, r, m))
}

/// Codifferential `δ^r : Ω^r → Ω^{r-1}` as the L² adjoint of `d`. The star
/// formula `(-1)^{nr+n+1} ∗ d ∗` is evaluated alongside and the two must agree.
pub fn codifferential(n: usize, truncation: usize, r: usize) -> Result<ModeOperator> {
    let adjoint = codifferential_adjoint(n, truncation, r)?;
    let starred = codifferential_via_star(n, truncation, r)?;
    let defect = adjoint.sub(&starred)?.max_abs();
    if defect > CODIFFERENTIAL_TOL * adjoint.max_abs().max(1.0) {
        return Err(Error::invariant("δ = d† versus (-1)^{nr+n+1} ∗d∗", defect));
    }
    Ok(adjoint)
}

pub fn codifferential_adjoint(n: usize, truncation: usize, r: usize) -> Result<ModeOperator> {
    check_grade(n, r)?;
    if r == 0 {
        return ModeOperator::from_fn(n, truncation, |_| Ok(zeros(0, 1)));
    }
    Ok(exterior_d(n, truncation, r - 1)?.adjoint())
}

pub fn codifferential_via_star(n: usize, truncation: usize, r: usize) -> Result<ModeOperator> {
    check_grade(n, r)?;
    if r == 0 {
        return ModeOperator::from_fn(n, truncation, |_| Ok(zeros(0, 1)));
    }
    let metric = MetricPoint::euclidean(n);
    let star_in = graded_operator(n, r, |f| hodge_star(&metric, f))?;
    let star_out = graded_operator(n, n - r + 1, |f| hodge_star(&metric, f))?;
    let sign = if (n * r + n + 1) % 2 == 0 { 1.0 } else { -1.0 };
    ModeOperator::from_fn(n, truncation, |m| {
        let d = d_block(n, n - r, m)?;
        Ok((&star_out * d * &star_in).scale(sign))
    })
}

/// Hodge Laplacian `δd + dδ` on `r`-forms.
pub fn laplacian(n: usize, truncation: usize, r: usize) -> Result<ModeOperator> {
    check_grade(n, r)?;
    let up = codifferential(n, truncation, (r + 1).min(n))?;
    let d = exterior_d(n, truncation, r)?;
    let mut out = if r < n {
        up.compose(&d)?
    } else {
        ModeOperator::from_fn(n, truncation, |_| Ok(zeros(1, 1)))?
    };
    if r > 0 {
        let down = exterior_d(n, truncation, r - 1)?.compose(&codifferential(n, truncation, r)?)?;
        out = out.add(&down)?;
    }
    Ok(out)
}

/// Dimension of the harmonic `r`-forms at truncation `M >= 1`.
pub fn harmonic_dims(n: usize, truncation: usize, r: usize) -> Result<usize> {
    if truncation == 0 {
        return Err(Error::InvalidArgument("harmonic_dims needs truncation M >= 1".into()));
    }
    Ok(laplacian(n, truncation, r)?.kernel_dim(RANK_TOL))
}

/// Orthonormal basis (columns, dense coordinates) of the harmonic `r`-forms.
pub fn harmonic_basis(n: usize, truncation: usize, r: usize) -> Result<CMat> {
    let lap = laplacian(n, truncation, r)?.to_dense();
    let (values, vectors) = hermitian_eigen(&lap);
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let keep: Vec<usize> = (0..values.len()).filter(|&k| values[k].abs() <= RANK_TOL * scale.max(1.0)).collect();
    Ok(CMat::from_fn(lap.nrows(), keep.len(), |i, j| vectors[(i, keep[j])]))
}

/// Constant-coefficient differential operator on a flat torus, described by
/// its full symbol: the matrix by which it acts on `e^{i k·x} v`.
pub trait SymbolOperator: Sync {
    fn dim(&self) -> usize;
    fn fiber(&self) -> usize;
    fn order(&self) -> i32;
    fn label(&self) -> String;
    fn symbol_at(&self, k: &[f64]) -> CMat;
    /// Top-order homogeneous part, written out independently of `symbol_at`.
    fn principal_symbol(&self, xi: &[f64]) -> CMat;

    fn mode_block(&self, m: &[i64]) -> CMat {
        self.symbol_at(&frequency(m))
    }

    fn assemble(&self, truncation: usize) -> Result<ModeOperator> {
        ModeOperator::from_fn(self.dim(), truncation, |m| Ok(self.mode_block(m)))
    }
}

/// `D = Σ c_j ∂_j` on the trivial spinor bundle.
#[derive(Debug, Clone)]
pub struct FlatDirac {
    rep: CliffordRep,
}

impl FlatDirac {
    pub fn new(n: usize) -> Result<Self> {
        Ok(FlatDirac { rep: build_clifford(n)? })
    }

    pub fn rep(&self) -> &CliffordRep {
        &self.rep
    }
}

impl SymbolOperator for FlatDirac {
    fn dim(&self) -> usize {
        self.rep.n()
    }
    fn fiber(&self) -> usize {
        self.rep.k()
    }
    fn order(&self) -> i32 {
        1
    }
    fn label(&self) -> String {
        format!("dirac_t{}", self.rep.n())
    }
    fn symbol_at(&self, k: &[f64]) -> CMat {
        let mut out = zeros(self.fiber(), self.fiber());
        for (c, &kj) in self.rep.generators().iter().zip(k) {
            out += c.map(|z| z * I * kj);
        }
        out
    }
    fn principal_symbol(&self, xi: &[f64]) -> CMat {
        self.rep.clifford_vector(xi).expect("dimension checked by caller").map(|z| z * I)
    }
}

/// `Δ = -Σ ∂_j²` acting diagonally on a trivial bundle of rank `fiber`.
#[derive(Debug, Clone, Copy)]
pub struct FlatLaplacian {
    pub n: usize,
    pub fiber: usize,
}

impl SymbolOperator for FlatLaplacian {
    fn dim(&self) -> usize {
        self.n
    }
    fn fiber(&self) -> usize {
        self.fiber
    }
    fn order(&self) -> i32 {
        2
    }
    fn label(&self) -> String {
        format!("laplacian_t{}", self.n)
    }
    fn symbol_at(&self, k: &[f64]) -> CMat {
        identity(self.fiber).scale(k.iter().map(|x| x * x).sum())
    }
    fn principal_symbol(&self, xi: &[f64]) -> CMat {
        let norm2: f64 = xi.iter().map(|x| x * x).sum();
        identity(self.fiber).scale(norm2)
    }
}

/// `t^{-order} e^{-itf} P e^{itf}` on the Fourier mode `mode`, where
/// `df = xi` is constant.
pub fn principal_symbol_limit(op: &dyn SymbolOperator, xi: &[f64], t: f64, mode: &[i64]) -> Result<CMat> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("t must be positive, got {t}")));
    }
    if xi.len() != op.dim() || mode.len() != op.dim() {
        return Err(Error::DimensionMismatch { expected: op.dim(), got: xi.len().min(mode.len()) });
    }
    if xi.iter().all(|&x| x == 0.0) {
        return Err(Error::InvalidArgument("symbol limit needs a nonzero covector".into()));
    }
    let k: Vec<f64> = frequency(mode).iter().zip(xi).map(|(a, b)| a + t * b).collect();
    Ok(op.symbol_at(&k).scale(t.powi(-op.order())))
}

/// Distance from the conjugation limit at `t` to the principal symbol.
pub fn principal_symbol_residual(op: &dyn SymbolOperator, xi: &[f64], t: f64, mode: &[i64]) -> Result<f64> {
    let lim = principal_symbol_limit(op, xi, t, mode)?;
    Ok(max_abs(&(lim - op.principal_symbol(xi))))
}

#[derive(Debug, Clone)]
pub struct DiracT2 {
    pub spectrum: SpectrumReport,
    /// Harmonic spinors in the `+1` / `-1` eigenspaces of `γ = i c1 c2`.
    pub kernel_plus: usize,
    pub kernel_minus: usize,
    pub operator: ModeOperator,
}

/// Dirac operator on `T^2` built from the first two Pauli generators.
pub fn dirac_t2(truncation: usize) -> Result<DiracT2> {
    let dirac = FlatDirac::new(2)?;
    let operator = dirac.assemble(truncation)?;
    let values: Vec<f64> = operator.blocks.par_iter().flat_map(hermitian_eigenvalues).collect();
    let spectrum = SpectrumReport::from_values("dirac_t2", truncation, values, MERGE_TOL);
    let grading = dirac.rep().chirality_grading()?;
    let (kernel_plus, kernel_minus) = chiral_kernel_dims(&operator, &grading.projector_plus, &grading.projector_minus);
    Ok(DiracT2 { spectrum, kernel_plus, kernel_minus, operator })
}

fn chiral_kernel_dims(op: &ModeOperator, plus: &CMat, minus: &CMat) -> (usize, usize) {
    let cutoff = RANK_TOL * op.max_singular_value();
    let half = |p: &CMat| -> usize {
        let dim = p.trace().re.round() as usize;
        op.blocks
            .iter()
            .map(|b| dim - linalg::rank_with_cutoff(&(b * p), cutoff).rank)
            .sum()
    };
    (half(plus), half(minus))
}

#[derive(Debug, Clone)]
pub struct CircleDirac {
    pub spectrum: SpectrumReport,
    /// Fourier index of each basis function `e^{inθ}`, matching the
    /// operator's rows.
    pub modes: Vec<i64>,
    pub operator: CMat,
}

/// `-i d/dθ` on `span{e^{inθ} : |n| <= M}`.
pub fn circle_dirac(truncation: usize) -> CircleDirac {
    let modes: Vec<i64> = (-(truncation as i64)..=truncation as i64).collect();
    let operator = CMat::from_fn(modes.len(), modes.len(), |i, j| if i == j { real(modes[i] as f64) } else { ZERO });
    let values = modes.iter().map(|&n| n as f64).collect();
    let spectrum = SpectrumReport::from_values("circle_dirac", truncation, values, MERGE_TOL);
    CircleDirac { spectrum, modes, operator }
}

/// `tr e^{-t D†D} - tr e^{-t DD†}`.
pub fn heat_supertrace_index(d: &CMat, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("t must be positive, got {t}")));
    }
    let dd = d.adjoint() * d;
    let ddt = d * d.adjoint();
    Ok(linalg::heat_trace(&dd, t) - linalg::heat_trace(&ddt, t))
}

/// `dim ker D - dim ker D†` from the numerical rank.
pub fn analytic_index(d: &CMat) -> i64 {
    let rank = numerical_rank(d, RANK_TOL).rank as i64;
    (d.ncols() as i64 - rank) - (d.nrows() as i64 - rank)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlipReport {
    pub anticommutator_residual: f64,
    /// Largest component of `T E_λ` outside `E_{-λ}` over all eigenvalues.
    pub max_residual: f64,
    pub distinct_eigenvalues: usize,
}

/// For Hermitian `S` anticommuting with `T`, checks that `T` carries every
/// `λ`-eigenspace of `S` into the `(-λ)`-eigenspace.
pub fn anticommuting_flip_check(s: &CMat, t: &CMat, tol: f64) -> Result<FlipReport> {
    if !s.is_square() || s.shape() != t.shape() {
        return Err(Error::InvalidArgument("S and T must be square of equal size".into()));
    }
    let scale = max_abs(s).max(max_abs(t)).max(1.0);
    let anti = max_abs(&(s * t + t * s));
    if anti > tol * scale * scale {
        return Err(Error::invariant("ST + TS = 0", anti));
    }
    if linalg::hermiticity_residual(s) > tol * scale {
        return Err(Error::Unsupported("flip check needs Hermitian S".into()));
    }
    let (values, vectors) = hermitian_eigen(s);
    let merge = tol.sqrt().max(1e-8) * scale;
    let mut clusters: Vec<(f64, Vec<usize>)> = Vec::new();
    for (k, &v) in values.iter().enumerate() {
        match clusters.last_mut() {
            Some((c, idx)) if (v - *c).abs() <= merge => idx.push(k),
            _ => clusters.push((v, vec![k])),
        }
    }
    let columns = |idx: &[usize]| CMat::from_fn(s.nrows(), idx.len(), |i, j| vectors[(i, idx[j])]);
    let mut worst: f64 = 0.0;
    for (lambda, idx) in &clusters {
        let image = t * columns(idx);
        let partner: Vec<usize> = clusters
            .iter()
            .filter(|(mu, _)| (mu + lambda).abs() <= merge)
            .flat_map(|(_, i)| i.iter().copied())
            .collect();
        let p = columns(&partner);
        let outside = &image - &p * (p.adjoint() * &image);
        worst = worst.max(max_abs(&outside));
    }
    Ok(FlipReport { anticommutator_residual: anti, max_residual: worst, distinct_eigenvalues: clusters.len() })
}

/// Interior-product matrix `i(v)` from `r`-forms to `(r-1)`-forms.
pub fn interior_matrix(v: &[f64], r: usize) -> Result<CMat> {
    let n = v.len();
    if r == 0 {
        return Ok(zeros(0, 1));
    }
    graded_operator(n, r, |f| interior(v, f))
}

/// Number of basis forms in each grade, `binomial(n, r)`.
pub fn grade_sizes(n: usize) -> Vec<usize> {
    (0..=n).map(|r| multi_indices(n, r).len()).collect()
}
