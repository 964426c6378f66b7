//! Equivariant Euler characteristics of finite abelian group actions and the
//! stratified sums for `χ^ρ(M)` and the basic Euler characteristic `χ(M,F)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const INTEGRALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroup {
    label: String,
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    /// Orders of the cyclic factors for abelian presets.
    moduli: Option<Vec<usize>>,
}

impl FiniteGroup {
    pub fn cyclic(n: usize) -> Result<Self> {
        let mut g = FiniteGroup::product(&[n])?;
        g.label = format!("Z{n}");
        g.elements = (0..n).map(|k| k.to_string()).collect();
        Ok(g)
    }

    /// `Z_{n_1} × ... × Z_{n_r}`, elements ordered with the last factor
    /// varying fastest.
    pub fn product(moduli: &[usize]) -> Result<Self> {
        if moduli.is_empty() || moduli.contains(&0) {
            return Err(Error::InvalidArgument(format!("bad cyclic factors {moduli:?}")));
        }
        let order: usize = moduli.iter().product();
        let tuples: Vec<Vec<usize>> = (0..order).map(|i| digits(i, moduli)).collect();
        let table = tuples
            .iter()
            .map(|a| {
                tuples
                    .iter()
                    .map(|b| {
                        let sum: Vec<usize> = a.iter().zip(b).zip(moduli).map(|((x, y), m)| (x + y) % m).collect();
                        undigits(&sum, moduli)
                    })
                    .collect()
            })
            .collect();
        let label = moduli.iter().map(|m| format!("Z{m}")).collect::<Vec<_>>().join("xZ");
        let elements = tuples
            .iter()
            .map(|t| format!("({})", t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        Ok(FiniteGroup { label, elements, table, identity: 0, moduli: Some(moduli.to_vec()) })
    }

    /// Arbitrary multiplication table; characters are not available.
    pub fn from_table(label: impl Into<String>, elements: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = elements.len();
        if n == 0 || table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidArgument("multiplication table has the wrong shape".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::InvalidArgument("table has no identity".into()))?;
        let g = FiniteGroup { label: label.into(), elements, table, identity, moduli: None };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.order();
        for g in 0..n {
            if !(0..n).any(|h| self.table[g][h] == self.identity) {
                return Err(Error::InvalidArgument(format!("element {} has no inverse", self.elements[g])));
            }
        }
        // every triple for small groups, a fixed stride sample otherwise
        let stride = if n <= 32 { 1 } else { n / 16 };
        for a in (0..n).step_by(stride) {
            for b in (0..n).step_by(stride) {
                for c in (0..n).step_by(stride) {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::InvalidArgument("multiplication is not associative".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn moduli(&self) -> Option<&[usize]> {
        self.moduli.as_deref()
    }

    /// Coordinates of an element of an abelian preset.
    pub fn coordinates(&self, g: usize) -> Option<Vec<usize>> {
        self.moduli.as_ref().map(|m| digits(g, m))
    }
}

fn digits(mut i: usize, moduli: &[usize]) -> Vec<usize> {
    let mut out = vec![0; moduli.len()];
    for (slot, m) in out.iter_mut().zip(moduli).rev() {
        *slot = i % m;
        i /= m;
    }
    out
}

fn undigits(d: &[usize], moduli: &[usize]) -> usize {
    d.iter().zip(moduli).fold(0, |acc, (x, m)| acc * m + x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    pub label: String,
    /// Exponent vector `j` with `χ(g) = exp(2πi Σ j_i g_i / n_i)`.
    pub exponents: Vec<usize>,
    pub values: Vec<Complex64>,
}

impl Character {
    pub fn at(&self, g: usize) -> Complex64 {
        self.values[g]
    }
}

fn root_of_unity(num: usize, den: usize) -> Complex64 {
    // exact values at quarter turns keep small cases free of roundoff
    let r = num % den;
    if (4 * r) % den == 0 {
        return match 4 * r / den {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let a = 2.0 * PI * r as f64 / den as f64;
    Complex64::new(a.cos(), a.sin())
}

fn character_label(exponents: &[usize]) -> String {
    let parts: Vec<String> = exponents.iter().map(|j| j.to_string()).collect();
    format!("rho{}", parts.join("_"))
}

pub fn irreducible_characters(group: &FiniteGroup) -> Result<Vec<Character>> {
    let moduli = group
        .moduli()
        .ok_or_else(|| Error::Unsupported(format!("characters of {} need an abelian preset", group.label())))?;
    let lcm = moduli.iter().fold(1, |a, &b| lcm(a, b));
    Ok((0..group.order())
        .map(|j| {
            let exponents = digits(j, moduli);
            let values = (0..group.order())
                .map(|g| {
                    let coords = digits(g, moduli);
                    let num: usize =
                        exponents.iter().zip(&coords).zip(moduli).map(|((e, x), m)| e * x * (lcm / m)).sum();
                    root_of_unity(num, lcm)
                })
                .collect();
            Character { label: character_label(&exponents), exponents, values }
        })
        .collect())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub fn character_by_label(group: &FiniteGroup, label: &str) -> Result<Character> {
    irreducible_characters(group)?
        .into_iter()
        .find(|c| c.label == label)
        .ok_or_else(|| Error::InvalidArgument(format!("{} has no character {label:?}", group.label())))
}

/// `(1/|G|) Σ_g a(g) conj(b(g))`.
pub fn character_inner(group: &FiniteGroup, a: &Character, b: &Character) -> Complex64 {
    let s: Complex64 = (0..group.order()).map(|g| a.at(g) * b.at(g).conj()).sum();
    s / group.order() as f64
}

/// Determinant of an integer matrix by fraction-free elimination.
pub fn int_det(m: &DMatrix<i64>) -> i64 {
    let n = m.nrows();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)] as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

/// Integer matrices `A_g` for every group element, forming a homomorphism
/// into `GL(n, Z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearTorusAction {
    group: FiniteGroup,
    matrices: Vec<DMatrix<i64>>,
}

impl LinearTorusAction {
    pub fn new(group: FiniteGroup, matrices: Vec<DMatrix<i64>>) -> Result<Self> {
        if matrices.len() != group.order() {
            return Err(Error::DimensionMismatch { expected: group.order(), got: matrices.len() });
        }
        let n = matrices[0].nrows();
        if matrices.iter().any(|m| m.shape() != (n, n)) {
            return Err(Error::InvalidArgument("action matrices must share one square shape".into()));
        }
        for (g, m) in matrices.iter().enumerate() {
            if int_det(m).abs() != 1 {
                return Err(Error::InvalidArgument(format!("A_{} is not invertible over Z", group.elements()[g])));
            }
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                if &matrices[a] * &matrices[b] != matrices[group.mul(a, b)] {
                    return Err(Error::InvalidArgument(format!(
                        "A_g A_h != A_gh for g = {}, h = {}",
                        group.elements()[a],
                        group.elements()[b]
                    )));
                }
            }
        }
        Ok(LinearTorusAction { group, matrices })
    }

    /// One generator per cyclic factor of an abelian preset.
    pub fn from_generators(group: FiniteGroup, generators: &[DMatrix<i64>]) -> Result<Self> {
        let moduli = group
            .moduli()
            .ok_or_else(|| Error::Unsupported("generators need an abelian preset".into()))?
            .to_vec();
        if generators.len() != moduli.len() || generators.is_empty() {
            return Err(Error::DimensionMismatch { expected: moduli.len(), got: generators.len() });
        }
        let n = generators[0].nrows();
        let matrices = (0..group.order())
            .map(|g| {
                let coords = digits(g, &moduli);
                coords.iter().zip(generators).fold(DMatrix::<i64>::identity(n, n), |acc, (&e, a)| {
                    (0..e).fold(acc, |m, _| m * a)
                })
            })
            .collect();
        LinearTorusAction::new(group, matrices)
    }

    /// `Z_4` acting on `T^2` by the quarter turn `(x, y) ↦ (-y, x)`.
    pub fn z4_rotation() -> Result<Self> {
        let a = DMatrix::from_row_slice(2, 2, &[0, -1, 1, 0]);
        LinearTorusAction::from_generators(FiniteGroup::cyclic(4)?, &[a])
    }

    /// `Z_2` acting on `T^n` by `-I`.
    pub fn negation(n: usize) -> Result<Self> {
        let a = DMatrix::<i64>::identity(n, n) * -1;
        LinearTorusAction::from_generators(FiniteGroup::cyclic(2)?, &[a])
    }

    /// Trivial group on `T^n`.
    pub fn trivial(n: usize) -> Result<Self> {
        LinearTorusAction::from_generators(FiniteGroup::cyclic(1)?, &[DMatrix::identity(n, n)])
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn matrices(&self) -> &[DMatrix<i64>] {
        &self.matrices
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    /// `det(I - A_g)`, the Lefschetz number of `g` on `T^n`.
    pub fn lefschetz_numbers(&self) -> Vec<i64> {
        let n = self.dim();
        self.matrices.iter().map(|a| int_det(&(DMatrix::identity(n, n) - a))).collect()
    }
}

/// Rounds `(1/|G|) Σ_g L(g) conj(χ(g))`, failing with a contract violation
/// when the average is not within tolerance of an integer.
pub fn average_against(group: &FiniteGroup, lefschetz: &[i64], rho: &Character) -> Result<i64> {
    let s: Complex64 = lefschetz.iter().enumerate().map(|(g, &l)| rho.at(g).conj() * l as f64).sum();
    let v = s / group.order() as f64;
    let rounded = v.re.round();
    let err = (v.re - rounded).abs().max(v.im.abs());
    if err > INTEGRALITY_TOL {
        return Err(Error::Contract(format!(
            "character average for {} is {v}, {err:e} away from an integer",
            rho.label
        )));
    }
    Ok(rounded as i64)
}

pub fn lefschetz_euler(action: &LinearTorusAction, rho: &Character) -> Result<i64> {
    if rho.values.len() != action.group().order() {
        return Err(Error::DimensionMismatch { expected: action.group().order(), got: rho.values.len() });
    }
    average_against(action.group(), &action.lefschetz_numbers(), rho)
}

/// Finite group acting linearly on `S^n ⊂ R^{n+1}` through signed
/// permutation (or other orthogonal integer) matrices. Used as an independent
/// oracle: the Lefschetz number of `g` is `1 + (-1)^n det A_g`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSphereAction {
    group: FiniteGroup,
    sphere_dim: usize,
    matrices: Vec<DMatrix<i64>>,
}

impl LinearSphereAction {
    pub fn from_generators(group: FiniteGroup, sphere_dim: usize, generators: &[DMatrix<i64>]) -> Result<Self> {
        let torus_like = LinearTorusAction::from_generators(group, generators)?;
        if torus_like.dim() != sphere_dim + 1 {
            return Err(Error::DimensionMismatch { expected: sphere_dim + 1, got: torus_like.dim() });
        }
        for m in torus_like.matrices() {
            if m.transpose() * m != DMatrix::identity(sphere_dim + 1, sphere_dim + 1) {
                return Err(Error::InvalidArgument("sphere action matrices must be orthogonal".into()));
            }
        }
        Ok(LinearSphereAction { group: torus_like.group, sphere_dim, matrices: torus_like.matrices })
    }

    /// `Z_2` acting by `-I` on `S^n`.
    pub fn antipodal(n: usize) -> Result<Self> {
        LinearSphereAction::from_generators(FiniteGroup::cyclic(2)?, n, &[DMatrix::<i64>::identity(n + 1, n + 1) * -1])
    }

    /// `Z_2 × Z_2` on `S^2` generated by `x ↦ -x` and `y ↦ -y`.
    pub fn z2xz2_reflections() -> Result<Self> {
        let rx = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-1i64, 1, 1]));
        let ry = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1i64, -1, 1]));
        LinearSphereAction::from_generators(FiniteGroup::product(&[2, 2])?, 2, &[rx, ry])
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn lefschetz_numbers(&self) -> Vec<i64> {
        let sign = if self.sphere_dim % 2 == 0 { 1 } else { -1 };
        self.matrices.iter().map(|a| 1 + sign * int_det(a)).collect()
    }
}

pub fn sphere_lefschetz_euler(action: &LinearSphereAction, rho: &Character) -> Result<i64> {
    average_against(action.group(), &action.lefschetz_numbers(), rho)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedGroup {
    pub label: String,
    pub reps: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic(usize),
    Product(Vec<usize>),
    /// A group given only by the labels of the representations used.
    Named(NamedGroup),
}

impl GroupSpec {
    pub fn rep_labels(&self) -> Result<Vec<String>> {
        match self {
            GroupSpec::Named(g) => Ok(g.reps.clone()),
            GroupSpec::Cyclic(n) => Ok(irreducible_characters(&FiniteGroup::cyclic(*n)?)?.into_iter().map(|c| c.label).collect()),
            GroupSpec::Product(m) => Ok(irreducible_characters(&FiniteGroup::product(m)?)?.into_iter().map(|c| c.label).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumRecord {
    pub label: String,
    pub principal: bool,
    /// Relative Euler characteristic of the stratum closure's quotient
    /// modulo the more singular strata.
    pub chi_rel: i64,
    /// `χ^ρ` of the orbit type (with orientation-line coefficients).
    pub chi_rho_orbit: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrataDataset {
    pub group: GroupSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub strata: Vec<StratumRecord>,
}

impl StrataDataset {
    pub fn from_json(text: &str) -> Result<Self> {
        let ds: StrataDataset = serde_json::from_str(text).map_err(|e| Error::Dataset(e.to_string()))?;
        ds.validate()?;
        Ok(ds)
    }

    pub fn validate(&self) -> Result<()> {
        let principal = self.strata.iter().filter(|s| s.principal).count();
        if principal != 1 {
            return Err(Error::Dataset(format!("expected exactly one principal stratum, found {principal}")));
        }
        let reps = self.group.rep_labels()?;
        for s in &self.strata {
            if let Some(bad) = s.chi_rho_orbit.keys().find(|k| !reps.contains(k)) {
                return Err(Error::Dataset(format!("stratum {} names unknown representation {bad:?}", s.label)));
            }
        }
        Ok(())
    }

    pub fn euler(&self, rho: &str) -> Result<i64> {
        strata_euler(&self.strata, rho)
    }
}

pub fn strata_euler(records: &[StratumRecord], rho: &str) -> Result<i64> {
    let principal = records.iter().filter(|s| s.principal).count();
    if principal != 1 {
        return Err(Error::Dataset(format!("expected exactly one principal stratum, found {principal}")));
    }
    records.iter().try_fold(0i64, |acc, s| {
        let orbit = s
            .chi_rho_orbit
            .get(rho)
            .ok_or_else(|| Error::Dataset(format!("stratum {} has no entry for {rho:?}", s.label)))?;
        Ok(acc + orbit * s.chi_rel)
    })
}

/// `χ(Y)` for closed `Y`, `χ(Y⁺) - 1` for open `Y` with one-point
/// compactification `Y⁺`.
pub fn open_euler(chi_compactified: i64, open: bool) -> i64 {
    if open {
        chi_compactified - 1
    } else {
        chi_compactified
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientEuler {
    pub compactified: i64,
    pub open: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoliationStratumRecord {
    pub label: String,
    pub chi_quotient: i64,
    pub chi_leaf_closure: i64,
    /// Optional derivation of `chi_quotient` from a compactification.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<QuotientEuler>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoliationDataset {
    pub foliation: String,
    pub codimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub strata: Vec<FoliationStratumRecord>,
}

impl FoliationDataset {
    pub fn from_json(text: &str) -> Result<Self> {
        let ds: FoliationDataset = serde_json::from_str(text).map_err(|e| Error::Dataset(e.to_string()))?;
        ds.validate()?;
        Ok(ds)
    }

    pub fn validate(&self) -> Result<()> {
        if self.strata.is_empty() {
            return Err(Error::Dataset("foliation dataset has no strata".into()));
        }
        for s in &self.strata {
            if let Some(q) = &s.quotient {
                let want = open_euler(q.compactified, q.open);
                if want != s.chi_quotient {
                    return Err(Error::Dataset(format!(
                        "stratum {}: chi_quotient {} disagrees with its compactification ({want})",
                        s.label, s.chi_quotient
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn euler(&self) -> Result<i64> {
        basic_gauss_bonnet(&self.strata)
    }
}

/// `χ(M,F) = Σ_j χ(M_j / F̄) χ(L_j, F, O)`.
pub fn basic_gauss_bonnet(records: &[FoliationStratumRecord]) -> Result<i64> {
    if records.is_empty() {
        return Err(Error::Dataset("basic Gauss-Bonnet needs at least one stratum".into()));
    }
    Ok(records.iter().map(|s| s.chi_quotient * s.chi_leaf_closure).sum())
}

/// Datasets compiled into the library, by file name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("z4_torus.json", include_str!("../datasets/z4_torus.json")),
    ("orthogonal_s2.json", include_str!("../datasets/orthogonal_s2.json")),
    ("orthogonal_s3.json", include_str!("../datasets/orthogonal_s3.json")),
    ("orthogonal_s4.json", include_str!("../datasets/orthogonal_s4.json")),
    ("orthogonal_s5.json", include_str!("../datasets/orthogonal_s5.json")),
    ("antipodal_s2.json", include_str!("../datasets/antipodal_s2.json")),
    ("antipodal_s3.json", include_str!("../datasets/antipodal_s3.json")),
    ("antipodal_s4.json", include_str!("../datasets/antipodal_s4.json")),
    ("antipodal_s5.json", include_str!("../datasets/antipodal_s5.json")),
    ("z2xz2_s2.json", include_str!("../datasets/z2xz2_s2.json")),
    ("rotation_suspension.json", include_str!("../datasets/rotation_suspension.json")),
    ("carriere.json", include_str!("../datasets/carriere.json")),
    ("klein_suspension.json", include_str!("../datasets/klein_suspension.json")),
    ("codim3_suspension.json", include_str!("../datasets/codim3_suspension.json")),
];

/// Text of a bundled dataset, or of the file at `name` otherwise.
pub fn dataset_text(name: &str) -> Result<String> {
    if let Some((_, text)) = BUNDLED.iter().find(|(n, _)| *n == name) {
        return Ok((*text).to_string());
    }
    std::fs::read_to_string(Path::new(name)).map_err(|e| Error::Dataset(format!("cannot read dataset {name:?}: {e}")))
}

pub fn load_strata_dataset(name: &str) -> Result<StrataDataset> {
    StrataDataset::from_json(&dataset_text(name)?)
}

pub fn load_foliation_dataset(name: &str) -> Result<FoliationDataset> {
    FoliationDataset::from_json(&dataset_text(name)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_characters() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let ch = irreducible_characters(&g).unwrap();
        assert_eq!(ch[0].values, vec![Complex64::new(1.0, 0.0); 2]);
        assert_eq!(ch[1].values, vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);
        assert_eq!(ch[1].label, "rho1");
    }

    #[test]
    fn z4_characters_are_powers_of_i() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let ch = irreducible_characters(&g).unwrap();
        let i = Complex64::new(0.0, 1.0);
        for (j, c) in ch.iter().enumerate() {
            for k in 0..4 {
                assert_eq!(c.at(k), i.powu((j * k) as u32));
            }
        }
    }

    #[test]
    fn product_labels() {
        let g = FiniteGroup::product(&[2, 3]).unwrap();
        assert_eq!(g.order(), 6);
        let labels: Vec<String> = irreducible_characters(&g).unwrap().into_iter().map(|c| c.label).collect();
        assert_eq!(labels[..3], ["rho0_0", "rho0_1", "rho0_2"]);
        assert_eq!(g.elements()[4], "(1,1)");
    }

    #[test]
    fn table_validation() {
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteGroup::from_table("bad", vec!["e".into(), "a".into()], bad).is_err());
        let z2 = vec![vec![0, 1], vec![1, 0]];
        let g = FiniteGroup::from_table("z2", vec!["e".into(), "a".into()], z2).unwrap();
        assert!(irreducible_characters(&g).is_err());
    }

    #[test]
    fn determinants() {
        assert_eq!(int_det(&DMatrix::from_row_slice(2, 2, &[1, 1, -1, 1])), 2);
        assert_eq!(int_det(&DMatrix::from_row_slice(3, 3, &[0, 1, 0, 1, 0, 0, 0, 0, 1])), -1);
        assert_eq!(int_det(&DMatrix::from_row_slice(3, 3, &[2, 0, 1, 1, 3, 2, 1, 1, 2])), 6);
        assert_eq!(int_det(&DMatrix::<i64>::zeros(2, 2)), 0);
    }

    #[test]
    fn action_checks() {
        let g = FiniteGroup::cyclic(3).unwrap();
        let a = DMatrix::from_row_slice(2, 2, &[0, -1, 1, 0]);
        assert!(LinearTorusAction::from_generators(g, &[a]).is_err());
        let g = FiniteGroup::cyclic(2).unwrap();
        let doubling = DMatrix::from_row_slice(1, 1, &[2]);
        assert!(LinearTorusAction::new(g, vec![DMatrix::identity(1, 1), doubling]).is_err());
    }

    #[test]
    fn negation_on_t2() {
        let act = LinearTorusAction::negation(2).unwrap();
        let ch = irreducible_characters(act.group()).unwrap();
        assert_eq!(lefschetz_euler(&act, &ch[0]).unwrap(), 2);
        assert_eq!(lefschetz_euler(&act, &ch[1]).unwrap(), -2);
    }

    #[test]
    fn non_integer_average_is_contract_violation() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let ch = irreducible_characters(&g).unwrap();
        let err = average_against(&g, &[1, 0], &ch[0]).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
        assert!(!err.is_validation());
    }

    #[test]
    fn open_euler_examples() {
        assert_eq!(open_euler(0, true), -1);
        assert_eq!(open_euler(2, true), 1);
        assert_eq!(open_euler(2, false), 2);
    }

    #[test]
    fn strata_errors() {
        let rec = |principal| StratumRecord {
            label: "s".into(),
            principal,
            chi_rel: 1,
            chi_rho_orbit: BTreeMap::from([("rho0".to_string(), 1)]),
        };
        assert!(strata_euler(&[rec(false)], "rho0").is_err());
        assert!(strata_euler(&[rec(true), rec(true)], "rho0").is_err());
        assert!(strata_euler(&[rec(true)], "rho1").is_err());
        assert_eq!(strata_euler(&[rec(true)], "rho0").unwrap(), 1);
        assert!(basic_gauss_bonnet(&[]).is_err());
    }

    #[test]
    fn all_bundled_datasets_parse() {
        for (name, _) in BUNDLED {
            let ok = load_strata_dataset(name).is_ok() || load_foliation_dataset(name).is_ok();
            assert!(ok, "{name}");
        }
        assert!(dataset_text("no_such_dataset.json").is_err());
    }
}
