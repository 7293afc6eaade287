//! Hyperplanes through sample points, the side test used for partitioning,
//! a Jacobi eigensolver for small symmetric matrices, and Householder
//! reflections.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

const SYMMETRY_TOLERANCE: f64 = 1e-9;
const UNIT_NORM_TOLERANCE: f64 = 1e-9;
const JACOBI_OFF_DIAGONAL_TOLERANCE: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;
/// Relative slack under which a sample counts as lying on a hyperplane.
pub const ON_PLANE_TOLERANCE: f64 = 1e-9;
/// Largest matrix accepted by [`symmetric_eigen`].
pub const MAX_EIGEN_DIM: usize = 32;

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    /// Zero matrix.
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            out.data[i * dim + i] = 1.0;
        }
        out
    }

    /// Wraps a row-major buffer of `dim * dim` entries.
    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::contract("matrix buffer is not dim x dim"));
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::contract("matrix is not square"));
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    /// Side length.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Sets entry `(i, j)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SquareMatrix) -> SquareMatrix {
        let n = self.dim;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    out.data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Transpose.
    pub fn transpose(&self) -> SquareMatrix {
        let n = self.dim;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.get(i, j);
            }
        }
        out
    }

    /// Largest absolute entry-wise difference to `other`.
    pub fn max_abs_diff(&self, other: &SquareMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| libm::fabs(a - b))
            .fold(0.0, f64::max)
    }
}

/// Eigendecomposition of a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unit eigenvectors, `vectors[k]` belonging to `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

impl SymmetricEigen {
    /// `V * diag(values) * V^T`.
    pub fn reconstruct(&self) -> SquareMatrix {
        let n = self.values.len();
        let mut out = SquareMatrix::zeros(n);
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            for i in 0..n {
                for j in 0..n {
                    out.data[i * n + j] += lambda * v[i] * v[j];
                }
            }
        }
        out
    }
}

/// Eigendecomposition by cyclic Jacobi rotations.
///
/// Sweeps visit `(p, q)` pairs with `p < q` in row order until the
/// off-diagonal Frobenius norm drops below `1e-12` (relative to the matrix
/// norm when that exceeds one). Eigenpairs are sorted by ascending eigenvalue
/// with a stable sort, so equal eigenvalues keep the order of the starting
/// identity basis. Each eigenvector is signed so its first non-zero entry is
/// positive.
pub fn symmetric_eigen(matrix: &SquareMatrix) -> Result<SymmetricEigen> {
    let n = matrix.dim();
    if n == 0 || n > MAX_EIGEN_DIM {
        return Err(Error::contract(alloc::format!(
            "eigensolver supports 1..={MAX_EIGEN_DIM} rows, got {n}"
        )));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if libm::fabs(matrix.get(i, j) - matrix.get(j, i)) > SYMMETRY_TOLERANCE {
                return Err(Error::contract("matrix is not symmetric"));
            }
        }
    }

    let mut a = matrix.clone();
    let mut v = SquareMatrix::identity(n);
    let scale = libm::sqrt(a.data.iter().map(|x| x * x).sum::<f64>()).max(1.0);
    let threshold = JACOBI_OFF_DIAGONAL_TOLERANCE * scale;

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a.get(x, x).total_cmp(&a.get(y, y)));
    let values = order.iter().map(|&k| a.get(k, k)).collect();
    let vectors = order
        .iter()
        .map(|&k| {
            let mut col = v.column(k);
            canonical_sign(&mut col);
            col
        })
        .collect();
    Ok(SymmetricEigen { values, vectors })
}

fn off_diagonal_norm(a: &SquareMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a.get(i, j) * a.get(i, j);
            }
        }
    }
    libm::sqrt(sum)
}

// Annihilates a[p][q] with a plane rotation and accumulates it into v.
fn rotate(a: &mut SquareMatrix, v: &mut SquareMatrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    if apq == 0.0 {
        return;
    }
    let n = a.dim();
    let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
    let t = if theta >= 0.0 {
        1.0 / (theta + libm::sqrt(theta * theta + 1.0))
    } else {
        -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
    };
    let c = 1.0 / libm::sqrt(t * t + 1.0);
    let s = t * c;

    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, c * akp - s * akq);
        a.set(k, q, s * akp + c * akq);
    }
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, c * apk - s * aqk);
        a.set(q, k, s * apk + c * aqk);
    }
    a.set(p, q, 0.0);
    a.set(q, p, 0.0);
    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, c * vkp - s * vkq);
        v.set(k, q, s * vkp + c * vkq);
    }
}

// First non-zero entry made positive.
fn canonical_sign(v: &mut [f64]) {
    if let Some(first) = v.iter().find(|x| **x != 0.0) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Which partition a sample falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// On or above the hyperplane: `w·x >= b`.
    Left,
    /// Strictly below, or missing an active feature.
    Right,
}

/// Split boundary `w·x = b`.
///
/// Invariants: `coefficients` has unit Euclidean norm, `active` lists exactly
/// the indices of the non-zero coefficients in increasing order, and the
/// first non-zero coefficient is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    coefficients: Vec<f64>,
    bias: f64,
    active: Vec<usize>,
}

impl Hyperplane {
    /// Canonicalized plane from unit-norm coefficients.
    pub fn new(coefficients: Vec<f64>, bias: f64) -> Result<Self> {
        if coefficients.iter().any(|c| !c.is_finite()) || !bias.is_finite() {
            return Err(Error::contract("hyperplane has non-finite entries"));
        }
        let norm = libm::sqrt(coefficients.iter().map(|c| c * c).sum::<f64>());
        if libm::fabs(norm - 1.0) > UNIT_NORM_TOLERANCE {
            return Err(Error::contract(alloc::format!(
                "hyperplane normal has norm {norm}, expected 1"
            )));
        }
        Ok(Self::canonical(coefficients, bias))
    }

    /// Canonicalized plane `w·x = b` after scaling `(w, b)` to a unit normal.
    pub fn from_unnormalized(coefficients: Vec<f64>, bias: f64) -> Result<Self> {
        let norm = libm::sqrt(coefficients.iter().map(|c| c * c).sum::<f64>());
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::contract("hyperplane normal is zero"));
        }
        Self::new(
            coefficients.into_iter().map(|c| c / norm).collect(),
            bias / norm,
        )
    }

    /// The axis-aligned plane `x[feature] = threshold` in `m` dimensions.
    pub fn axis(feature: usize, threshold: f64, m: usize) -> Self {
        let mut coefficients = vec![0.0; m];
        coefficients[feature] = 1.0;
        Self {
            coefficients,
            bias: threshold,
            active: vec![feature],
        }
    }

    fn canonical(coefficients: Vec<f64>, bias: f64) -> Self {
        let active = coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(i, _)| i)
            .collect();
        let mut plane = Self {
            coefficients,
            bias,
            active,
        };
        plane.canonicalize();
        plane
    }

    /// Negates `(w, b)` if the first non-zero coefficient is negative.
    pub fn canonicalize(&mut self) {
        if let Some(&first) = self.active.first() {
            if self.coefficients[first] < 0.0 {
                self.coefficients.iter_mut().for_each(|c| *c = -*c);
                self.bias = -self.bias;
            }
        }
    }

    /// Normal vector.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Offset `b`.
    pub fn bias(&self) -> f64 {
        self.bias
    }

    /// Indices of the non-zero coefficients, ascending.
    pub fn active_features(&self) -> &[usize] {
        &self.active
    }

    /// Dimension `m`.
    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    /// `w·x` accumulated over the active features in index order. `NaN` if
    /// an active feature is missing.
    pub fn project(&self, sample: &[f64]) -> f64 {
        self.active
            .iter()
            .fold(0.0, |acc, &j| acc + self.coefficients[j] * sample[j])
    }

    /// Left when `w·x >= b` (up to [`ON_PLANE_TOLERANCE`]); Right when below
    /// or when an active feature is missing (`NaN`).
    pub fn side_of(&self, sample: &[f64]) -> Side {
        if self.project(sample) >= left_threshold(self.bias) {
            Side::Left
        } else {
            Side::Right
        }
    }

    /// [`Hyperplane::side_of`] for rows of optional cells.
    pub fn side_of_optional(&self, sample: &[Option<f64>]) -> Side {
        let row: Vec<f64> = sample.iter().map(|c| c.unwrap_or(f64::NAN)).collect();
        self.side_of(&row)
    }
}

/// Smallest projection routed Left by a plane with offset `bias`: points
/// within `1e-9 * max(1, |bias|)` below the plane count as on it, so the
/// samples a plane was fitted through land Left despite rounding.
pub fn left_threshold(bias: f64) -> f64 {
    bias - ON_PLANE_TOLERANCE * libm::fabs(bias).max(1.0)
}

/// Normal and offset of the hyperplane through `r` points in `r` dimensions,
/// in local coordinates. `points` is row-major `r x r`.
///
/// The points are centered on their column means; the normal is the
/// eigenvector of the smallest eigenvalue of their covariance and the offset
/// is `normal·mean`. The normal is signed so its first non-zero entry is
/// positive.
pub(crate) fn fit_local(points: &[f64], r: usize) -> Result<(Vec<f64>, f64)> {
    debug_assert_eq!(points.len(), r * r);
    if points.iter().any(|v| v.is_nan()) {
        return Err(Error::preprocessing(
            "hyperplane point is missing a selected coordinate",
        ));
    }
    if r == 1 {
        return Ok((vec![1.0], points[0]));
    }
    let mut mean = vec![0.0; r];
    for i in 0..r {
        for j in 0..r {
            mean[j] += points[i * r + j];
        }
    }
    mean.iter_mut().for_each(|x| *x /= r as f64);
    let centered: Vec<f64> = (0..r * r).map(|k| points[k] - mean[k % r]).collect();
    let mut cov = SquareMatrix::zeros(r);
    let denom = (r - 1) as f64;
    for a in 0..r {
        for b in a..r {
            let s: f64 = (0..r).map(|i| centered[i * r + a] * centered[i * r + b]).sum();
            cov.set(a, b, s / denom);
            cov.set(b, a, s / denom);
        }
    }
    let eig = symmetric_eigen(&cov)?;
    let normal = eig.vectors.into_iter().next().expect("r >= 1");
    let bias = normal.iter().zip(&mean).map(|(w, mu)| w * mu).sum();
    Ok((normal, bias))
}

/// Hyperplane through `r` points restricted to the sorted `selected_features`,
/// embedded in `m` dimensions with zero coefficients elsewhere.
///
/// `points` holds one row per point with the `r` selected coordinates.
pub fn fit_hyperplane(points: &[Vec<f64>], selected_features: &[usize], m: usize) -> Result<Hyperplane> {
    let r = selected_features.len();
    if r == 0 || r > m || points.len() != r || points.iter().any(|p| p.len() != r) {
        return Err(Error::config(alloc::format!(
            "need r points of r coordinates with 1 <= r <= m (r = {r}, m = {m})"
        )));
    }
    if selected_features.windows(2).any(|w| w[0] >= w[1]) || selected_features[r - 1] >= m {
        return Err(Error::config("selected features must be sorted, unique, and < m"));
    }
    let flat: Vec<f64> = points.iter().flatten().copied().collect();
    let (normal, bias) = fit_local(&flat, r)?;
    Ok(embed(&normal, bias, selected_features, m))
}

pub(crate) fn embed(normal: &[f64], bias: f64, selected: &[usize], m: usize) -> Hyperplane {
    let mut coefficients = vec![0.0; m];
    for (&j, &w) in selected.iter().zip(normal) {
        coefficients[j] = w;
    }
    Hyperplane::canonical(coefficients, bias)
}

/// `H = I - 2uu^T/(u^T u)` with `u = direction - e_axis`, the reflection that
/// maps the unit vector `direction` onto `e_axis`. Returns the identity when
/// `direction` already equals `e_axis` within `1e-12`.
pub fn householder_reflection(direction: &[f64], axis_index: usize) -> Result<SquareMatrix> {
    let m = direction.len();
    if axis_index >= m {
        return Err(Error::contract("axis index out of range"));
    }
    let norm = libm::sqrt(direction.iter().map(|x| x * x).sum::<f64>());
    if libm::fabs(norm - 1.0) > UNIT_NORM_TOLERANCE {
        return Err(Error::contract(alloc::format!(
            "reflection direction has norm {norm}, expected 1"
        )));
    }
    let mut u = direction.to_vec();
    u[axis_index] -= 1.0;
    if u.iter().all(|x| libm::fabs(*x) <= 1e-12) {
        return Ok(SquareMatrix::identity(m));
    }
    let uu: f64 = u.iter().map(|x| x * x).sum();
    let mut h = SquareMatrix::identity(m);
    for i in 0..m {
        for j in 0..m {
            h.data[i * m + j] -= 2.0 * u[i] * u[j] / uu;
        }
    }
    Ok(h)
}
