//! Complex Clifford algebra representations.
//!
//! Generators for `R^3` are the Pauli-type triple
//!
//! ```text
//! c1 = [[0, i], [i, 0]],  c2 = [[0, 1], [-1, 0]],  c3 = [[i, 0], [0, -i]]
//! ```
//!
//! and every odd dimension `n + 2` is obtained from `n` by
//!
//! ```text
//! c'_j = c_j ⊗ diag(-1, 1)   (j <= n)
//! c'_{n+1} = I ⊗ c1,  c'_{n+2} = I ⊗ c2
//! ```
//!
//! Even dimensions drop the last generator of the next odd one. All entries
//! stay in `{0, ±1, ±i}`, so the relations hold exactly in floating point.

use crate::error::{Error, Result};
use crate::linalg::{c, i_pow, identity, kron, zeros, CMat, ONE, ZERO};

pub const DEFAULT_MAX_DIM: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct CliffordRep {
    n: usize,
    k: usize,
    generators: Vec<CMat>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiralityGrading {
    pub gamma: CMat,
    pub projector_plus: CMat,
    pub projector_minus: CMat,
}

fn pauli() -> [CMat; 3] {
    let i = c(0.0, 1.0);
    [
        CMat::from_row_slice(2, 2, &[ZERO, i, i, ZERO]),
        CMat::from_row_slice(2, 2, &[ZERO, ONE, -ONE, ZERO]),
        CMat::from_row_slice(2, 2, &[i, ZERO, ZERO, -i]),
    ]
}

fn odd_generators(n: usize) -> Vec<CMat> {
    debug_assert!(n % 2 == 1);
    if n == 1 {
        return vec![CMat::from_element(1, 1, c(0.0, 1.0))];
    }
    let p = pauli();
    if n == 3 {
        return p.to_vec();
    }
    let prev = odd_generators(n - 2);
    let k = prev[0].nrows();
    let tau = CMat::from_row_slice(2, 2, &[-ONE, ZERO, ZERO, ONE]);
    let id = identity(k);
    let mut out: Vec<CMat> = prev.iter().map(|g| kron(g, &tau)).collect();
    out.push(kron(&id, &p[0]));
    out.push(kron(&id, &p[1]));
    out
}

/// `k = 2^⌊n/2⌋`.
pub fn spinor_dimension(n: usize) -> usize {
    1usize << (n / 2)
}

pub fn build_clifford(n: usize) -> Result<CliffordRep> {
    build_clifford_with_limit(n, DEFAULT_MAX_DIM)
}

pub fn build_clifford_with_limit(n: usize, max_dim: usize) -> Result<CliffordRep> {
    if n == 0 {
        return Err(Error::InvalidArgument("Clifford dimension must be at least 1".into()));
    }
    if n > max_dim {
        return Err(Error::InvalidArgument(format!(
            "Clifford dimension {n} exceeds the configured maximum {max_dim}"
        )));
    }
    let mut generators = odd_generators(if n % 2 == 1 { n } else { n + 1 });
    generators.truncate(n);
    let k = generators[0].nrows();
    debug_assert_eq!(k, spinor_dimension(n));
    Ok(CliffordRep { n, k, generators })
}

impl CliffordRep {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generators(&self) -> &[CMat] {
        &self.generators
    }

    pub fn generator(&self, j: usize) -> &CMat {
        &self.generators[j]
    }

    /// Clifford multiplication by `v = Σ v_j e_j`.
    pub fn clifford_vector(&self, v: &[f64]) -> Result<CMat> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: v.len() });
        }
        let mut out = zeros(self.k, self.k);
        for (g, &vj) in self.generators.iter().zip(v) {
            out += g.scale(vj);
        }
        Ok(out)
    }

    /// Largest entrywise deviation from `c_i c_j + c_j c_i = -2 δ_ij I`.
    /// Zero for the built-in construction.
    pub fn relation_residual(&self) -> f64 {
        let id = identity(self.k);
        let mut worst: f64 = 0.0;
        for (i, a) in self.generators.iter().enumerate() {
            for (j, b) in self.generators.iter().enumerate() {
                let mut anti = a * b + b * a;
                if i == j {
                    anti += id.scale(2.0);
                }
                worst = worst.max(crate::linalg::max_abs(&anti));
            }
        }
        worst
    }

    /// Largest entrywise deviation from `c_i† = -c_i`.
    pub fn skew_residual(&self) -> f64 {
        self.generators
            .iter()
            .map(|g| crate::linalg::max_abs(&(g.adjoint() + g)))
            .fold(0.0, f64::max)
    }

    pub fn chirality_grading(&self) -> Result<ChiralityGrading> {
        if self.n % 2 == 1 {
            return Err(Error::InvalidArgument(format!(
                "chirality grading needs even dimension, got {}",
                self.n
            )));
        }
        let phase = i_pow((self.n / 2) as i64);
        let mut gamma = identity(self.k).map(|z| z * phase);
        for g in &self.generators {
            gamma *= g;
        }
        let id = identity(self.k);
        let projector_plus = (&id + &gamma).scale(0.5);
        let projector_minus = (&id - &gamma).scale(0.5);
        Ok(ChiralityGrading { gamma, projector_plus, projector_minus })
    }
}

impl ChiralityGrading {
    /// Dimensions of the `+1` and `-1` eigenspaces of `gamma`.
    pub fn half_dims(&self) -> (usize, usize) {
        let tr = self.projector_plus.trace();
        let k = self.gamma.nrows();
        let plus = tr.re.round() as usize;
        (plus, k - plus)
    }
}
