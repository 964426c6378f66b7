//! Pointwise exterior algebra over a metric vector space.
//!
//! Forms are stored densely over the lexicographic basis of strictly
//! increasing multi-indices (0-based, so `[0, 1]` is `dx1 ∧ dx2`). The
//! orientation sign says whether `dx1 ∧ … ∧ dxn` is positively oriented.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{binomial, i_pow, real, zeros, CMat, ZERO};

pub const DEFAULT_TOL: f64 = 1e-12;

/// All strictly increasing multi-indices of length `r` in `0..n`, in
/// lexicographic order.
pub fn multi_indices(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(binomial(n, r));
    if r <= n {
        rec(0, n, r, &mut Vec::with_capacity(r), &mut out);
    }
    out
}

fn position(basis: &[Vec<usize>], idx: &[usize]) -> Option<usize> {
    basis.binary_search_by(|b| b.as_slice().cmp(idx)).ok()
}

/// Sign of `dx_I ∧ dx_J` relative to the sorted union, or `None` if the
/// indices overlap.
pub fn merge_sign(a: &[usize], b: &[usize]) -> Option<(f64, Vec<usize>)> {
    let mut inversions = 0usize;
    for &i in a {
        for &j in b {
            if i == j {
                return None;
            }
            if i > j {
                inversions += 1;
            }
        }
    }
    let mut merged: Vec<usize> = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
    Some((sign, merged))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricPoint {
    g: DMatrix<f64>,
    g_inv: DMatrix<f64>,
    orientation: f64,
}

impl MetricPoint {
    pub fn new(g: DMatrix<f64>, orientation: i8) -> Result<Self> {
        let n = g.nrows();
        if n == 0 || g.ncols() != n {
            return Err(Error::InvalidMetric(format!("metric must be square, got {:?}", g.shape())));
        }
        if orientation != 1 && orientation != -1 {
            return Err(Error::InvalidArgument(format!("orientation must be ±1, got {orientation}")));
        }
        let scale = g.amax().max(1.0);
        let asym = (&g - g.transpose()).amax();
        if asym > DEFAULT_TOL * scale {
            return Err(Error::InvalidMetric(format!("asymmetry {asym:e}")));
        }
        let chol = g
            .clone()
            .cholesky()
            .ok_or_else(|| Error::InvalidMetric("not positive definite".into()))?;
        let g_inv = chol.inverse();
        Ok(MetricPoint { g, g_inv, orientation: orientation as f64 })
    }

    pub fn euclidean(n: usize) -> Self {
        MetricPoint::new(DMatrix::identity(n, n), 1).expect("identity is a metric")
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        MetricPoint::new(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(entries)), 1)
    }

    pub fn with_orientation(mut self, orientation: i8) -> Result<Self> {
        if orientation != 1 && orientation != -1 {
            return Err(Error::InvalidArgument(format!("orientation must be ±1, got {orientation}")));
        }
        self.orientation = orientation as f64;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn g(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    pub fn sqrt_det(&self) -> f64 {
        self.g.determinant().sqrt()
    }

    /// Induced bilinear pairing matrix on `r`-forms: Gram determinants of the
    /// `g^{ij}` sub-blocks, indexed by [`multi_indices`].
    pub fn form_gram(&self, r: usize) -> DMatrix<f64> {
        let basis = multi_indices(self.dim(), r);
        let m = basis.len();
        DMatrix::from_fn(m, m, |a, b| {
            let (ia, ib) = (&basis[a], &basis[b]);
            DMatrix::from_fn(r, r, |i, j| self.g_inv[(ia[i], ib[j])]).determinant()
        })
    }
}

pub fn inverse_metric(m: &MetricPoint) -> DMatrix<f64> {
    m.g_inv.clone()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Form {
    n: usize,
    grade: usize,
    coeffs: Vec<Complex64>,
}

impl Form {
    pub fn zero(n: usize, grade: usize) -> Result<Self> {
        if grade > n {
            return Err(Error::GradeOutOfRange { grade, n });
        }
        Ok(Form { n, grade, coeffs: vec![ZERO; binomial(n, grade)] })
    }

    pub fn scalar(n: usize, value: Complex64) -> Self {
        Form { n, grade: 0, coeffs: vec![value] }
    }

    /// `value · dx_idx`; the multi-index must be strictly increasing.
    pub fn basis(n: usize, idx: &[usize], value: Complex64) -> Result<Self> {
        let mut f = Form::zero(n, idx.len())?;
        f.set(idx, value)?;
        Ok(f)
    }

    /// Grade-`grade` form from coefficients in [`multi_indices`] order.
    pub fn from_coeffs(n: usize, grade: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if grade > n {
            return Err(Error::GradeOutOfRange { grade, n });
        }
        let expected = binomial(n, grade);
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: coeffs.len() });
        }
        Ok(Form { n, grade, coeffs })
    }

    /// One-form `Σ a_j dx_j` with real coefficients.
    pub fn one_form(coeffs: &[f64]) -> Self {
        Form { n: coeffs.len(), grade: 1, coeffs: coeffs.iter().map(|&x| real(x)).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn basis_indices(&self) -> Vec<Vec<usize>> {
        multi_indices(self.n, self.grade)
    }

    fn check_index(&self, idx: &[usize]) -> Result<()> {
        if idx.len() != self.grade {
            return Err(Error::GradeOutOfRange { grade: idx.len(), n: self.n });
        }
        if idx.windows(2).any(|w| w[0] >= w[1]) || idx.iter().any(|&i| i >= self.n) {
            return Err(Error::InvalidArgument(format!("bad multi-index {idx:?} for n = {}", self.n)));
        }
        Ok(())
    }

    pub fn coeff(&self, idx: &[usize]) -> Result<Complex64> {
        self.check_index(idx)?;
        Ok(self.coeffs[position(&multi_indices(self.n, self.grade), idx).expect("validated")])
    }

    pub fn set(&mut self, idx: &[usize], value: Complex64) -> Result<()> {
        self.check_index(idx)?;
        let pos = position(&multi_indices(self.n, self.grade), idx).expect("validated");
        self.coeffs[pos] = value;
        Ok(())
    }

    /// Nonzero terms as `(multi-index, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, Complex64)> + '_ {
        multi_indices(self.n, self.grade)
            .into_iter()
            .zip(self.coeffs.iter().copied())
            .filter(|(_, z)| *z != ZERO)
    }

    pub fn scale(&self, s: Complex64) -> Form {
        Form { n: self.n, grade: self.grade, coeffs: self.coeffs.iter().map(|z| z * s).collect() }
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.same_shape(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Form { n: self.n, grade: self.grade, coeffs })
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.add(&other.scale(real(-1.0)))
    }

    fn same_shape(&self, other: &Form) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        if self.grade != other.grade {
            return Err(Error::InvalidArgument(format!(
                "grade mismatch: {} vs {}",
                self.grade, other.grade
            )));
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference; shapes must agree.
    pub fn distance(&self, other: &Form) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// Top-degree coefficient of an `n`-form.
    pub fn top_coeff(&self) -> Complex64 {
        debug_assert_eq!(self.grade, self.n);
        self.coeffs[0]
    }

    pub fn as_column(&self) -> CMat {
        CMat::from_column_slice(self.coeffs.len(), 1, &self.coeffs)
    }
}

/// JSON shape `{"n": .., "grade": .., "coefficients": {"0,1": [re, im]}}`.
/// Keys are comma-separated 0-based indices; the empty key is the scalar part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormJson {
    pub n: usize,
    pub grade: usize,
    pub coefficients: BTreeMap<String, [f64; 2]>,
}

impl From<&Form> for FormJson {
    fn from(f: &Form) -> Self {
        let coefficients = multi_indices(f.n, f.grade)
            .into_iter()
            .zip(&f.coeffs)
            .map(|(idx, z)| {
                let key = idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
                (key, [z.re, z.im])
            })
            .collect();
        FormJson { n: f.n, grade: f.grade, coefficients }
    }
}

impl TryFrom<FormJson> for Form {
    type Error = Error;

    fn try_from(j: FormJson) -> Result<Form> {
        let mut f = Form::zero(j.n, j.grade)?;
        for (key, [re, im]) in j.coefficients {
            let idx: Vec<usize> = if key.is_empty() {
                Vec::new()
            } else {
                key.split(',')
                    .map(|s| s.trim().parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Error::InvalidArgument(format!("bad multi-index key {key:?}: {e}")))?
            };
            f.set(&idx, Complex64::new(re, im))?;
        }
        Ok(f)
    }
}

pub fn wedge(a: &Form, b: &Form) -> Result<Form> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch { expected: a.n, got: b.n });
    }
    let n = a.n;
    let grade = a.grade + b.grade;
    if grade > n {
        return Err(Error::GradeOutOfRange { grade, n });
    }
    let mut out = Form::zero(n, grade)?;
    let target = multi_indices(n, grade);
    for (ia, za) in a.terms() {
        for (ib, zb) in b.terms() {
            if let Some((sign, merged)) = merge_sign(&ia, &ib) {
                let pos = position(&target, &merged).expect("sorted union is a basis index");
                out.coeffs[pos] += za * zb * sign;
            }
        }
    }
    Ok(out)
}

/// Contraction `i(v)a` into the first slot; metric independent.
pub fn interior(v: &[f64], a: &Form) -> Result<Form> {
    if v.len() != a.n {
        return Err(Error::DimensionMismatch { expected: a.n, got: v.len() });
    }
    if a.grade == 0 {
        return Form::zero(a.n, 0);
    }
    let mut out = Form::zero(a.n, a.grade - 1)?;
    let target = multi_indices(a.n, a.grade - 1);
    for (idx, z) in a.terms() {
        for (p, &slot) in idx.iter().enumerate() {
            if v[slot] == 0.0 {
                continue;
            }
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            let mut rest = idx.clone();
            rest.remove(p);
            let pos = position(&target, &rest).expect("sub-index is a basis index");
            out.coeffs[pos] += z * (sign * v[slot]);
        }
    }
    Ok(out)
}

/// `v♭`, the one-form `w ↦ (v, w)`.
pub fn flat(m: &MetricPoint, v: &[f64]) -> Result<Form> {
    if v.len() != m.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), got: v.len() });
    }
    let gv = m.g() * nalgebra::DVector::from_column_slice(v);
    Ok(Form::one_form(gv.as_slice()))
}

/// `a♯`, the inverse of [`flat`]. Complex coefficients give a complex vector.
pub fn sharp(m: &MetricPoint, a: &Form) -> Result<Vec<Complex64>> {
    if a.grade != 1 {
        return Err(Error::InvalidArgument(format!("sharp needs a one-form, got grade {}", a.grade)));
    }
    if a.n != m.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), got: a.n });
    }
    let n = m.dim();
    Ok((0..n)
        .map(|i| (0..n).map(|j| a.coeffs[j] * m.g_inv[(i, j)]).sum())
        .collect())
}

pub fn volume_form(m: &MetricPoint) -> Form {
    let n = m.dim();
    let idx: Vec<usize> = (0..n).collect();
    Form::basis(n, &idx, real(m.orientation * m.sqrt_det())).expect("top form")
}

/// Bilinear induced pairing `(b, a)` of two forms of the same grade.
pub fn form_pairing(m: &MetricPoint, b: &Form, a: &Form) -> Result<Complex64> {
    b.same_shape(a)?;
    if a.n != m.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), got: a.n });
    }
    let gram = m.form_gram(a.grade);
    let mut acc = ZERO;
    for (i, bi) in b.coeffs.iter().enumerate() {
        for (j, aj) in a.coeffs.iter().enumerate() {
            acc += bi * aj * gram[(i, j)];
        }
    }
    Ok(acc)
}

/// Hodge star, the unique `(n - r)`-form with `b ∧ ∗a = (b, a) dvol` for every
/// `r`-form `b`, obtained by solving that linear system over the basis.
pub fn hodge_star(m: &MetricPoint, a: &Form) -> Result<Form> {
    let n = m.dim();
    if a.n != n {
        return Err(Error::DimensionMismatch { expected: n, got: a.n });
    }
    let r = a.grade;
    let rows = multi_indices(n, r);
    let cols = multi_indices(n, n - r);
    let system = CMat::from_fn(rows.len(), cols.len(), |i, j| match merge_sign(&rows[i], &cols[j]) {
        Some((s, _)) => real(s),
        None => ZERO,
    });
    let gram = m.form_gram(r);
    let vol = m.orientation * m.sqrt_det();
    let rhs = CMat::from_fn(rows.len(), 1, |i, _| {
        let mut acc = ZERO;
        for (j, aj) in a.coeffs.iter().enumerate() {
            acc += aj * gram[(i, j)];
        }
        acc * vol
    });
    let sol = system
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Contract("Hodge star defining system is singular".into()))?;
    Form::from_coeffs(n, n - r, sol.iter().copied().collect())
}

/// Normalized star `★ = i^{r(r-1) + n/2} ∗`, an involution in even dimension.
pub fn bigstar(m: &MetricPoint, a: &Form) -> Result<Form> {
    let n = m.dim();
    if n % 2 == 1 {
        return Err(Error::Unsupported(format!("★ is only defined in even dimension, got n = {n}")));
    }
    let r = a.grade as i64;
    let phase = i_pow(r * (r - 1) + (n / 2) as i64);
    Ok(hodge_star(m, a)?.scale(phase))
}

/// `c(v)a = v♭ ∧ a - i(v)a`.
pub fn clifford_form_action(m: &MetricPoint, v: &[f64], a: &Form) -> Result<FormSum> {
    let v_flat = flat(m, v)?;
    let up = if a.grade < a.n { Some(wedge(&v_flat, a)?) } else { None };
    let down = if a.grade > 0 { Some(interior(v, a)?.scale(real(-1.0))) } else { None };
    Ok(FormSum::from_parts(a.n, [up, down].into_iter().flatten()))
}

/// Mixed-degree form, one component per grade.
#[derive(Debug, Clone, PartialEq)]
pub struct FormSum {
    n: usize,
    parts: Vec<Form>,
}

impl FormSum {
    pub fn zero(n: usize) -> Self {
        FormSum { n, parts: (0..=n).map(|r| Form::zero(n, r).expect("r <= n")).collect() }
    }

    pub fn from_parts(n: usize, parts: impl IntoIterator<Item = Form>) -> Self {
        let mut out = FormSum::zero(n);
        for p in parts {
            let r = p.grade;
            out.parts[r] = out.parts[r].add(&p).expect("same shape");
        }
        out
    }

    pub fn grade(&self, r: usize) -> &Form {
        &self.parts[r]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Coefficients stacked grade by grade, `2^n` entries.
    pub fn to_vector(&self) -> Vec<Complex64> {
        self.parts.iter().flat_map(|p| p.coeffs.iter().copied()).collect()
    }

    pub fn from_vector(n: usize, v: &[Complex64]) -> Result<Self> {
        if v.len() != 1 << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, got: v.len() });
        }
        let mut parts = Vec::with_capacity(n + 1);
        let mut off = 0;
        for r in 0..=n {
            let len = binomial(n, r);
            parts.push(Form::from_coeffs(n, r, v[off..off + len].to_vec())?);
            off += len;
        }
        Ok(FormSum { n, parts })
    }
}

/// Matrix of a linear map on the full `2^n`-dimensional exterior algebra,
/// given its action on homogeneous basis forms.
pub fn full_operator(n: usize, op: impl Fn(&Form) -> Result<FormSum>) -> Result<CMat> {
    let dim = 1 << n;
    let mut out = zeros(dim, dim);
    let mut col = 0;
    for r in 0..=n {
        for idx in multi_indices(n, r) {
            let image = op(&Form::basis(n, &idx, real(1.0))?)?;
            for (row, z) in image.to_vector().into_iter().enumerate() {
                out[(row, col)] = z;
            }
            col += 1;
        }
    }
    Ok(out)
}

/// Matrix of a grade-`r` to grade-`s` linear map in the basis order of
/// [`multi_indices`].
pub fn graded_operator(n: usize, r: usize, op: impl Fn(&Form) -> Result<Form>) -> Result<CMat> {
    let cols = multi_indices(n, r);
    let mut columns = Vec::with_capacity(cols.len());
    for idx in &cols {
        columns.push(op(&Form::basis(n, idx, real(1.0))?)?);
    }
    let rows = columns.first().map(|f| f.coeffs.len()).unwrap_or(0);
    Ok(CMat::from_fn(rows, cols.len(), |i, j| columns[j].coeffs[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c1() -> Complex64 {
        real(1.0)
    }

    #[test]
    fn inverse_metric_diagonal() {
        let e = 1f64.exp();
        let m = MetricPoint::diagonal(&[1.0, 4.0, 1.0, (1.0 + e).powi(2)]).unwrap();
        let inv = inverse_metric(&m);
        let want = [1.0, 0.25, 1.0, (1.0 + e).powi(-2)];
        for i in 0..4 {
            for j in 0..4 {
                let w = if i == j { want[i] } else { 0.0 };
                assert!((inv[(i, j)] - w).abs() < 1e-12);
            }
        }
        assert_eq!(inverse_metric(&MetricPoint::euclidean(3)), DMatrix::identity(3, 3));
    }

    #[test]
    fn metric_rejects_bad_input() {
        assert!(MetricPoint::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0]), 1).is_err());
        assert!(MetricPoint::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]), 1).is_err());
        assert!(MetricPoint::new(DMatrix::identity(2, 2), 0).is_err());
    }

    #[test]
    fn wedge_antisymmetry() {
        let dx1 = Form::basis(3, &[0], c1()).unwrap();
        let dx2 = Form::basis(3, &[1], c1()).unwrap();
        assert_eq!(wedge(&dx1, &dx2).unwrap(), Form::basis(3, &[0, 1], c1()).unwrap());
        assert_eq!(wedge(&dx2, &dx1).unwrap(), Form::basis(3, &[0, 1], -c1()).unwrap());
        assert_eq!(wedge(&dx1, &dx1).unwrap(), Form::zero(3, 2).unwrap());
        let top = Form::basis(3, &[0, 1, 2], c1()).unwrap();
        assert!(matches!(wedge(&top, &dx1), Err(Error::GradeOutOfRange { .. })));
    }

    #[test]
    fn interior_basic() {
        let a = Form::basis(2, &[0, 1], c1()).unwrap();
        assert_eq!(interior(&[1.0, 0.0], &a).unwrap(), Form::basis(2, &[1], c1()).unwrap());
        assert_eq!(interior(&[0.0, 1.0], &a).unwrap(), Form::basis(2, &[0], -c1()).unwrap());
    }

    #[test]
    fn volume_forms() {
        assert_eq!(volume_form(&MetricPoint::euclidean(2)), Form::basis(2, &[0, 1], c1()).unwrap());
        let e = 1f64.exp();
        let m = MetricPoint::diagonal(&[1.0, 4.0, 1.0, (1.0 + e).powi(2)]).unwrap();
        let v = volume_form(&m).top_coeff();
        assert!((v.re - 2.0 * (1.0 + e)).abs() < 1e-12);
        let flipped = MetricPoint::euclidean(2).with_orientation(-1).unwrap();
        assert_eq!(volume_form(&flipped).top_coeff(), -c1());
    }

    #[test]
    fn star_in_the_plane() {
        let m = MetricPoint::euclidean(2);
        let dx1 = Form::basis(2, &[0], c1()).unwrap();
        let dx2 = Form::basis(2, &[1], c1()).unwrap();
        assert_eq!(hodge_star(&m, &dx1).unwrap(), dx2);
        assert_eq!(hodge_star(&m, &dx2).unwrap(), dx1.scale(-c1()));
        assert_eq!(hodge_star(&m, &Form::scalar(2, c1())).unwrap(), volume_form(&m));
    }

    #[test]
    fn bigstar_examples() {
        let m = MetricPoint::euclidean(2);
        let one = Form::scalar(2, c1());
        assert_eq!(bigstar(&m, &one).unwrap(), Form::basis(2, &[0, 1], crate::linalg::I).unwrap());
        let m4 = MetricPoint::euclidean(4);
        let a = Form::basis(4, &[0, 1], c1()).unwrap();
        let want = Form::basis(4, &[2, 3], c1()).unwrap();
        assert_eq!(hodge_star(&m4, &a).unwrap(), want);
        assert_eq!(bigstar(&m4, &a).unwrap(), want);
        assert!(bigstar(&MetricPoint::euclidean(3), &Form::scalar(3, c1())).is_err());
    }

    #[test]
    fn clifford_action_examples() {
        let m = MetricPoint::euclidean(3);
        let e1 = [1.0, 0.0, 0.0];
        let one = Form::scalar(3, c1());
        let got = clifford_form_action(&m, &e1, &one).unwrap();
        assert_eq!(got.grade(1), &Form::basis(3, &[0], c1()).unwrap());
        let dx1 = Form::basis(3, &[0], c1()).unwrap();
        let got = clifford_form_action(&m, &e1, &dx1).unwrap();
        assert_eq!(got.grade(0), &Form::scalar(3, -c1()));
        assert_eq!(got.grade(2).max_abs(), 0.0);
    }

    #[test]
    fn form_json_round_trip() {
        let f = Form::from_coeffs(3, 2, vec![c1(), real(-2.0), Complex64::new(0.5, 1.5)]).unwrap();
        let j = FormJson::from(&f);
        assert_eq!(j.coefficients["0,2"], [-2.0, 0.0]);
        let text = serde_json::to_string(&j).unwrap();
        let back: FormJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Form::try_from(back).unwrap(), f);
    }

    #[test]
    fn bad_indices_rejected() {
        let mut f = Form::zero(3, 2).unwrap();
        assert!(f.set(&[1, 0], c1()).is_err());
        assert!(f.set(&[0, 3], c1()).is_err());
        assert!(f.set(&[0], c1()).is_err());
        assert!(Form::zero(2, 3).is_err());
    }
}
