//! Dense complex linear algebra for small multipartite operators.
//!
//! Everything downstream (states, bound observables, tomography, the
//! coincidence simulator) is built from the pieces here: a row-major complex
//! matrix, a subsystem shape, Kronecker products, partial traces, tensor-factor
//! permutation, and Hermitian spectral routines.
//!
//! Conventions used throughout the crate:
//! - entries are stored in row-major order;
//! - subsystem indexing is big-endian: the first subsystem in a
//!   [`SystemShape`] is the most significant factor of a basis index, so on
//!   `[2,2]` the basis order is |00⟩, |01⟩, |10⟩, |11⟩.

use crate::error::{Error, Result};
use crate::tol;
use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;

pub const C_ZERO: C64 = C64::new(0.0, 0.0);
pub const C_ONE: C64 = C64::new(1.0, 0.0);
pub const C_I: C64 = C64::new(0.0, 1.0);

/// Dense complex matrix with row-major storage.
///
/// Equality is always tolerance-based and explicit; the type deliberately does
/// not implement `PartialEq`.
#[derive(Debug, Clone)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::dim(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C_ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C_ONE);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from rows of real numbers; convenient in tests.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r > 0 { rows[0].len() } else { 0 };
        Self::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    /// Rank-1 outer product |u⟩⟨v|.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn trace(&self) -> C64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == C_ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Re(Tr[self · other]); the standard pairing for expectation values.
    pub fn trace_product(&self, other: &Self) -> f64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = C_ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self.get(i, k) * other.get(k, i);
            }
        }
        acc.re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Entrywise equality within an explicit absolute tolerance.
    pub fn approx_eq(&self, other: &Self, tolerance: f64) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols)
            && self.max_abs_diff(other) <= tolerance
    }

    /// Max entry of |A − A†|.
    pub fn hermiticity_deviation(&self) -> f64 {
        debug_assert!(self.is_square());
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        self.is_square() && self.hermiticity_deviation() <= tolerance
    }

    fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j))
    }

}

/// Ordered list of subsystem dimensions attached to a multipartite operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemShape {
    dims: Vec<usize>,
}

impl SystemShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::arg("SystemShape needs at least one subsystem"));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::arg(format!("subsystem dimension {d} < 2")));
        }
        Ok(Self { dims })
    }

    /// `n` qubit subsystems.
    pub fn qubits(n: usize) -> Self {
        Self {
            dims: vec![2; n.max(1)],
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Big-endian strides: `stride[i]` = product of dims after `i`.
    fn strides(&self) -> Vec<usize> {
        let n = self.dims.len();
        let mut s = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.dims[i + 1];
        }
        s
    }

    pub fn check_matrix(&self, m: &ComplexMatrix) -> Result<()> {
        if !m.is_square() || m.rows() != self.total_dim() {
            return Err(Error::dim(format!(
                "matrix is {}x{} but shape {:?} implies side {}",
                m.rows(),
                m.cols(),
                self.dims,
                self.total_dim()
            )));
        }
        Ok(())
    }
}

/// Trace-1 positive-semidefinite Hermitian matrix over a subsystem shape.
///
/// Construction validates all three invariants (within the [`tol`] slacks);
/// the value is immutable afterwards.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    shape: SystemShape,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, shape: SystemShape) -> Result<Self> {
        shape.check_matrix(&matrix)?;
        let dev = matrix.hermiticity_deviation();
        if dev > tol::HERMITICITY {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol::UNIT_TRACE || tr.im.abs() > tol::UNIT_TRACE {
            return Err(Error::TraceOutOfRange { trace: tr.re });
        }
        let (eigenvalues, _) = herm_eig(&matrix)?;
        let min_eig = eigenvalues.last().copied().unwrap_or(0.0);
        if min_eig < -tol::PSD_SLACK {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min_eig,
            });
        }
        Ok(Self { matrix, shape })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Tr ρ².
    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix)
    }

    /// Re(Tr[ρ O]) for a Hermitian observable matrix.
    pub fn expectation(&self, observable: &ComplexMatrix) -> f64 {
        self.matrix.trace_product(observable)
    }

    /// Reduced state on the kept subsystems.
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let reduced = partial_trace(&self.matrix, &self.shape, keep)?;
        let dims = keep.iter().map(|&k| self.shape.dims()[k]).collect();
        DensityMatrix::new(reduced, SystemShape::new(dims)?)
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let scale = a.get(i, j);
            if scale == C_ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out.set(i * br + k, j * bc + l, scale * b.get(k, l));
                }
            }
        }
    }
    out
}

/// Trace out every subsystem not listed in `keep`; kept subsystems stay in
/// their original relative order.
pub fn partial_trace(
    m: &ComplexMatrix,
    shape: &SystemShape,
    keep: &[usize],
) -> Result<ComplexMatrix> {
    shape.check_matrix(m)?;
    let n = shape.len();
    if keep.is_empty() {
        return Err(Error::arg("partial_trace: keep set is empty"));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() || *keep_sorted.last().unwrap() >= n {
        return Err(Error::arg(format!(
            "partial_trace: keep set {keep:?} invalid for {n} subsystems"
        )));
    }

    let dims = shape.dims();
    let strides = shape.strides();
    let traced: Vec<usize> = (0..n).filter(|i| !keep_sorted.contains(i)).collect();

    let keep_dim: usize = keep_sorted.iter().map(|&i| dims[i]).product();
    let trace_dim: usize = traced.iter().map(|&i| dims[i]).product();

    // Flat offset of a multi-index restricted to `subs`, enumerated by rank.
    let offset = |subs: &[usize], mut rank: usize| -> usize {
        let mut off = 0;
        for &s in subs.iter().rev() {
            off += (rank % dims[s]) * strides[s];
            rank /= dims[s];
        }
        off
    };

    let mut out = ComplexMatrix::zeros(keep_dim, keep_dim);
    for kr in 0..keep_dim {
        let row_base = offset(&keep_sorted, kr);
        for kc in 0..keep_dim {
            let col_base = offset(&keep_sorted, kc);
            let mut acc = C_ZERO;
            for t in 0..trace_dim {
                let t_off = offset(&traced, t);
                acc += m.get(row_base + t_off, col_base + t_off);
            }
            out.set(kr, kc, acc);
        }
    }
    Ok(out)
}

/// Relabel tensor factors: output slot `t` holds what input slot `perm[t]` held.
///
/// This is a unitary similarity, so trace, eigenvalues, Hermiticity and
/// positivity are all preserved.
pub fn permute_systems(
    m: &ComplexMatrix,
    shape: &SystemShape,
    perm: &[usize],
) -> Result<ComplexMatrix> {
    shape.check_matrix(m)?;
    let n = shape.len();
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if perm.len() != n || sorted != (0..n).collect::<Vec<_>>() {
        return Err(Error::arg(format!(
            "invalid permutation {perm:?} for {n} subsystems"
        )));
    }

    let dims = shape.dims();
    let strides = shape.strides();
    let side = shape.total_dim();

    // flat_map[new_index] = old flat index carrying the same basis labels.
    let mut flat_map = vec![0usize; side];
    for (new_flat, slot) in flat_map.iter_mut().enumerate() {
        let mut rem = new_flat;
        let mut old_flat = 0;
        for t in (0..n).rev() {
            let digit = rem % dims[perm[t]];
            rem /= dims[perm[t]];
            old_flat += digit * strides[perm[t]];
        }
        *slot = old_flat;
    }

    let mut out = ComplexMatrix::zeros(side, side);
    for r in 0..side {
        for c in 0..side {
            out.set(r, c, m.get(flat_map[r], flat_map[c]));
        }
    }
    Ok(out)
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in descending order and the matching orthonormal
/// eigenvectors as columns, so that `h = U diag(λ) U†`.
pub fn herm_eig(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !h.is_square() {
        return Err(Error::dim("herm_eig needs a square matrix"));
    }
    let dev = h.hermiticity_deviation();
    if dev > tol::EIG_INPUT {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let n = h.rows();
    // Symmetrize exactly before handing off; removes ~1e-16 asymmetry noise.
    let sym = h.add(&h.adjoint()).scale(C64::new(0.5, 0.0));
    let eig = sym.to_nalgebra().symmetric_eigen();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((eigenvalues, eigenvectors))
}

/// Rebuild `U diag(f(λ)) U†` from an eigendecomposition.
fn assemble_spectral(eigenvalues: &[f64], vectors: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let n = vectors.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &lambda) in eigenvalues.iter().enumerate() {
        let v = f(lambda);
        if v == 0.0 {
            continue;
        }
        for i in 0..n {
            let vi = vectors.get(i, k);
            for j in 0..n {
                let val = out.get(i, j) + vi * vectors.get(j, k).conj() * v;
                out.set(i, j, val);
            }
        }
    }
    out
}

/// Positive-semidefinite square root of a Hermitian PSD matrix.
///
/// Eigenvalues in `[−PSD_SLACK, 0)` are clamped to zero; anything lower is an
/// error.
pub fn herm_sqrt(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (eigenvalues, vectors) = herm_eig(h)?;
    if let Some(&min) = eigenvalues.last() {
        if min < -tol::PSD_SLACK {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min,
            });
        }
    }
    Ok(assemble_spectral(&eigenvalues, &vectors, |l| l.max(0.0).sqrt()))
}

/// Nearest trace-1 PSD matrix in Frobenius distance.
///
/// The minimizer shares the eigenbasis of the (Hermitian) input, so the
/// problem reduces to projecting the eigenvalue vector onto the probability
/// simplex: clip below a level θ and redistribute so the total is 1.
pub fn project_to_density(h: &ComplexMatrix, shape: &SystemShape) -> Result<DensityMatrix> {
    shape.check_matrix(h)?;
    let dev = h.hermiticity_deviation();
    if dev > tol::EIG_INPUT {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let tr = h.trace().re;
    if (tr - 1.0).abs() > tol::TRACE_SANITY {
        return Err(Error::TraceOutOfRange { trace: tr });
    }

    let (eigenvalues, vectors) = herm_eig(h)?;

    // Simplex projection of the (descending) eigenvalue vector.
    let mut theta = 0.0;
    let mut cumulative = 0.0;
    for (k, &lambda) in eigenvalues.iter().enumerate() {
        cumulative += lambda;
        let candidate = (cumulative - 1.0) / (k + 1) as f64;
        if lambda - candidate > 0.0 {
            theta = candidate;
        }
    }
    let clipped: Vec<f64> = eigenvalues.iter().map(|&l| (l - theta).max(0.0)).collect();

    let mut projected = assemble_spectral(&clipped, &vectors, |l| l);
    // Exact re-symmetrization and trace touch-up keep the constructor happy.
    projected = projected.add(&projected.adjoint()).scale(C64::new(0.5, 0.0));
    let tr_p = projected.trace().re;
    if tr_p > 0.0 {
        projected = projected.scale(C64::new(1.0 / tr_p, 0.0));
    }
    DensityMatrix::new(projected, shape.clone())
}

/// Uhlmann fidelity `F(ρ,σ) = (Tr √(√ρ σ √ρ))²`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::dim("fidelity: dimension mismatch"));
    }
    let sqrt_rho = herm_sqrt(rho.matrix())?;
    let inner = sqrt_rho.matmul(sigma.matrix()).matmul(&sqrt_rho);
    let (eigenvalues, _) = herm_eig(&inner)?;
    let root_sum: f64 = eigenvalues
        .iter()
        .map(|&l| if l < tol::SPECTRAL_NOISE_FLOOR { 0.0 } else { l.sqrt() })
        .sum();
    Ok((root_sum * root_sum).min(1.0 + 1e-9))
}

/// Trace distance `½ Tr|ρ − σ|`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::dim("trace_distance: dimension mismatch"));
    }
    let diff = rho.matrix().sub(sigma.matrix());
    let (eigenvalues, _) = herm_eig(&diff)?;
    Ok(0.5 * eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
}
