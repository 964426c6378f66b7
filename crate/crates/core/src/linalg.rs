//! Dense complex linear algebra shared by the spectral and cohomology code.
//!
//! Everything here is a thin layer over nalgebra: numerical rank with a
//! relative singular-value cutoff, sorted Hermitian spectra, general
//! eigenvalues through the complex Schur form, and a few assembly helpers.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default relative cutoff for kernel and rank computations.
pub const RANK_TOL: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Integer powers of `i`, exact.
pub fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> CMat {
    CMat::zeros(r, c)
}

/// Singular values in descending order; empty matrices have none.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankInfo {
    pub rank: usize,
    /// Largest singular value.
    pub scale: f64,
    /// Absolute cutoff that was applied.
    pub cutoff: f64,
    /// Some singular value sits within a factor of ten of the cutoff.
    pub unstable: bool,
}

/// Numerical rank counting singular values above `cutoff` (absolute).
pub fn rank_with_cutoff(m: &CMat, cutoff: f64) -> RankInfo {
    let sv = singular_values(m);
    let scale = sv.first().copied().unwrap_or(0.0);
    rank_from_singular_values(&sv, scale, cutoff)
}

/// Numerical rank with a cutoff relative to the largest singular value.
pub fn numerical_rank(m: &CMat, rel_tol: f64) -> RankInfo {
    let sv = singular_values(m);
    let scale = sv.first().copied().unwrap_or(0.0);
    rank_from_singular_values(&sv, scale, rel_tol * scale)
}

pub(crate) fn rank_from_singular_values(sv: &[f64], scale: f64, cutoff: f64) -> RankInfo {
    if scale == 0.0 {
        return RankInfo { rank: 0, scale, cutoff, unstable: false };
    }
    let rank = sv.iter().filter(|&&s| s > cutoff).count();
    let unstable = sv.iter().any(|&s| s > cutoff / 10.0 && s < cutoff * 10.0);
    RankInfo { rank, scale, cutoff, unstable }
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let h = hermitian_part(m);
    let mut ev: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues ascending and
/// eigenvectors as matching columns.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), zeros(0, 0));
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMat::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Eigenvalues of an arbitrary square complex matrix via the Schur form,
/// sorted by real part then imaginary part.
pub fn eigenvalues(m: &CMat) -> Vec<Complex64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let schur = m.clone().schur();
    let (_, t) = schur.unpack();
    let mut ev: Vec<Complex64> = (0..t.nrows()).map(|k| t[(k, k)]).collect();
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    ev
}

/// `(m + m†)/2`; removes roundoff asymmetry before a Hermitian solve.
pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// `max |m - m†|` entrywise.
pub fn hermiticity_residual(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `tr exp(-t H)` for Hermitian `H`, via the eigendecomposition.
pub fn heat_trace(h: &CMat, t: f64) -> f64 {
    hermitian_eigenvalues(h).iter().map(|&l| (-t * l).exp()).sum()
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMat::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Block-diagonal assembly of rectangular blocks.
pub fn block_diag(blocks: &[CMat]) -> CMat {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for b in blocks {
        out.view_mut((r0, c0), b.shape()).copy_from(b);
        r0 += b.nrows();
        c0 += b.ncols();
    }
    out
}

/// Lift a real matrix to complex.
pub fn complexify(m: &DMatrix<f64>) -> CMat {
    m.map(real)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_zero_and_identity() {
        assert_eq!(numerical_rank(&zeros(3, 2), RANK_TOL).rank, 0);
        assert_eq!(numerical_rank(&identity(4), RANK_TOL).rank, 4);
        assert_eq!(numerical_rank(&zeros(0, 5), RANK_TOL).rank, 0);
    }

    #[test]
    fn rank_flags_values_near_cutoff() {
        let m = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![real(1.0), real(5e-10)]));
        let info = numerical_rank(&m, RANK_TOL);
        assert_eq!(info.rank, 1);
        assert!(info.unstable);
    }

    #[test]
    fn kron_shapes_and_values() {
        let a = CMat::from_row_slice(1, 2, &[ONE, I]);
        let b = identity(2);
        let k = kron(&a, &b);
        assert_eq!(k.shape(), (2, 4));
        assert_eq!(k[(1, 3)], I);
        assert_eq!(k[(0, 1)], ZERO);
    }

    #[test]
    fn general_eigenvalues_of_triangular() {
        let m = CMat::from_row_slice(2, 2, &[real(2.0), ONE, ZERO, I]);
        let ev = eigenvalues(&m);
        assert!((ev[0] - I).norm() < 1e-12);
        assert!((ev[1] - real(2.0)).norm() < 1e-12);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(6, 0), 1);
        assert_eq!(binomial(3, 4), 0);
    }

    #[test]
    fn i_powers_cycle() {
        assert_eq!(i_pow(0), ONE);
        assert_eq!(i_pow(5), I);
        assert_eq!(i_pow(-1), -I);
        assert_eq!(i_pow(2), -ONE);
    }
}
