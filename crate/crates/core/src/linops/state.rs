use num_complex::Complex;
use num_traits::{One, Zero};

use super::eigen::{canonical_eigenvectors, hermitian_eigen, hermitian_eigenvalues};
use super::shape::{permutation_index_map, SubsystemShape};
use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Density matrix over labeled subsystems.
///
/// Construction through [`QuantumState::new`] checks Hermiticity, unit trace
/// and positivity at `T::STATE_TOL`. States produced by the library's own
/// maps (partial traces, channel outputs) are valid by construction and skip
/// the eigensolve.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState<T> {
    matrix: ComplexMatrix<T>,
    shape: SubsystemShape,
}

impl<T: Real> QuantumState<T> {
    pub fn new(matrix: ComplexMatrix<T>, shape: SubsystemShape) -> Result<Self> {
        let tol = T::state_tol();
        check_square(&matrix, &shape)?;
        let drift = matrix.hermitian_drift();
        if !(drift <= tol) {
            return Err(Error::invalid(format!("state is not Hermitian (max |m - m†| = {drift:e})")));
        }
        let matrix = matrix.hermitian_part();
        let trace = matrix.trace().re;
        if !((trace - T::one()).abs() <= tol) {
            return Err(Error::invalid(format!("state trace is {trace}, expected 1")));
        }
        let min = hermitian_eigenvalues(&matrix)?[0];
        if min < -tol {
            return Err(Error::invalid(format!("state is not positive semidefinite (min eigenvalue {min:e})")));
        }
        Ok(Self { matrix, shape })
    }

    /// Wraps a matrix known to be a density matrix; only symmetrizes.
    pub(crate) fn trusted(matrix: ComplexMatrix<T>, shape: SubsystemShape) -> Self {
        debug_assert_eq!(matrix.rows(), shape.total_dim());
        Self { matrix: matrix.hermitian_part(), shape }
    }

    /// Normalizes a positive semidefinite matrix to unit trace.
    pub fn from_unnormalized(matrix: ComplexMatrix<T>, shape: SubsystemShape) -> Result<Self> {
        let trace = matrix.trace().re;
        if !(trace > T::zero()) {
            return Err(Error::invalid("cannot normalize a matrix with non-positive trace"));
        }
        Self::new(matrix.scale_real(T::one() / trace), shape)
    }

    pub fn maximally_mixed(shape: SubsystemShape) -> Self {
        let d = shape.total_dim();
        let m = ComplexMatrix::identity(d).scale_real(T::one() / T::lit(d as f64));
        Self { matrix: m, shape }
    }

    /// |k⟩⟨k| in the computational basis.
    pub fn basis(shape: SubsystemShape, k: usize) -> Result<Self> {
        let d = shape.total_dim();
        if k >= d {
            return Err(Error::dim(format!("basis index {k} in dimension {d}")));
        }
        let mut m = ComplexMatrix::zeros(d, d);
        m[(k, k)] = Complex::one();
        Ok(Self { matrix: m, shape })
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn shape(&self) -> &SubsystemShape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Number of eigenvalues above `T::RANK_TOL`.
    pub fn rank(&self) -> Result<usize> {
        let tol = T::rank_tol();
        Ok(self.eigenvalues()?.into_iter().filter(|&l| l > tol).count())
    }

    pub fn relabel(&self, labels: &[&str]) -> Result<Self> {
        Ok(Self { matrix: self.matrix.clone(), shape: self.shape.relabel(labels)? })
    }

    /// ρ ⊗ σ with the shapes concatenated.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let shape = self.shape.concat(&other.shape)?;
        Ok(Self { matrix: self.matrix.kron(&other.matrix), shape })
    }

    /// Reorders the subsystems so they appear in the order `labels`.
    pub fn permute(&self, labels: &[&str]) -> Result<Self> {
        let order = self.shape.order_of(labels)?;
        let matrix = permute_matrix(&self.matrix, self.shape.dims(), &order);
        Ok(Self { matrix, shape: self.shape.select(&order) })
    }

    pub fn partial_trace(&self, keep: &[&str]) -> Result<Self> {
        partial_trace(self, keep)
    }

    pub fn partial_transpose(&self, transpose_on: &[&str]) -> Result<ComplexMatrix<T>> {
        partial_transpose(self, transpose_on)
    }

    pub fn cast<U: Real>(&self) -> QuantumState<U> {
        QuantumState {
            matrix: self.matrix.map(|z| Complex::new(U::lit(z.re.to_f64().unwrap()), U::lit(z.im.to_f64().unwrap()))),
            shape: self.shape.clone(),
        }
    }
}

fn check_square<T: Real>(m: &ComplexMatrix<T>, shape: &SubsystemShape) -> Result<()> {
    if !m.is_square() || m.rows() != shape.total_dim() {
        return Err(Error::dim(format!(
            "{}x{} matrix for subsystems {:?} of total dimension {}",
            m.rows(),
            m.cols(),
            shape.labels(),
            shape.total_dim()
        )));
    }
    Ok(())
}

/// Normalized state vector over labeled subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateVector<T> {
    amplitudes: Vec<Complex<T>>,
    shape: SubsystemShape,
}

impl<T: Real> PureStateVector<T> {
    pub fn new(amplitudes: Vec<Complex<T>>, shape: SubsystemShape) -> Result<Self> {
        if amplitudes.len() != shape.total_dim() {
            return Err(Error::dim(format!(
                "{} amplitudes for total dimension {}",
                amplitudes.len(),
                shape.total_dim()
            )));
        }
        let norm = norm(&amplitudes);
        if !((norm - T::one()).abs() <= T::state_tol()) {
            return Err(Error::invalid(format!("state vector has norm {norm}, expected 1")));
        }
        Ok(Self { amplitudes, shape })
    }

    pub(crate) fn trusted(amplitudes: Vec<Complex<T>>, shape: SubsystemShape) -> Self {
        debug_assert_eq!(amplitudes.len(), shape.total_dim());
        Self { amplitudes, shape }
    }

    /// Computational basis vector |k⟩.
    pub fn basis(shape: SubsystemShape, k: usize) -> Result<Self> {
        let mut amps = vec![Complex::zero(); shape.total_dim()];
        *amps.get_mut(k).ok_or_else(|| Error::dim(format!("basis index {k} out of range")))? = Complex::one();
        Ok(Self { amplitudes: amps, shape })
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn shape(&self) -> &SubsystemShape {
        &self.shape
    }

    pub fn density(&self) -> QuantumState<T> {
        QuantumState::trusted(ComplexMatrix::outer(&self.amplitudes, &self.amplitudes), self.shape.clone())
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let shape = self.shape.concat(&other.shape)?;
        let amps = self.amplitudes.iter().flat_map(|&a| other.amplitudes.iter().map(move |&b| a * b)).collect();
        Ok(Self { amplitudes: amps, shape })
    }

    pub fn permute(&self, labels: &[&str]) -> Result<Self> {
        let order = self.shape.order_of(labels)?;
        let map = permutation_index_map(self.shape.dims(), &order);
        let amps = map.iter().map(|&old| self.amplitudes[old]).collect();
        Ok(Self { amplitudes: amps, shape: self.shape.select(&order) })
    }

    /// Reduced density matrix on `keep`, formed as ΨΨ† from the reshaped
    /// amplitudes so the full projector is never built.
    pub fn reduced_state(&self, keep: &[&str]) -> Result<QuantumState<T>> {
        let keep_pos = nonempty_positions(&self.shape, keep)?;
        let (order, dk, dt) = keep_first_order(&self.shape, &keep_pos);
        let map = permutation_index_map(self.shape.dims(), &order);
        let psi = |i: usize, t: usize| self.amplitudes[map[i * dt + t]];
        let mut rho = ComplexMatrix::zeros(dk, dk);
        for i in 0..dk {
            for j in i..dk {
                let mut acc = Complex::zero();
                for t in 0..dt {
                    acc = acc + psi(i, t) * psi(j, t).conj();
                }
                rho[(i, j)] = acc;
                rho[(j, i)] = acc.conj();
            }
        }
        Ok(QuantumState::trusted(rho, self.shape.select(&keep_pos)))
    }

    /// Applies an isometry to subsystem `label`, replacing it in place by the
    /// factors `out` (whose dimensions multiply to the isometry's row count).
    pub fn apply_isometry(&self, label: &str, v: &ComplexMatrix<T>, out: &[(&str, usize)]) -> Result<Self> {
        let pos = self.shape.position(label)?;
        let din = self.shape.dims()[pos];
        let dout: usize = out.iter().map(|&(_, d)| d).product();
        if v.cols() != din || v.rows() != dout {
            return Err(Error::dim(format!(
                "{}x{} map on subsystem `{label}` of dimension {din} with outputs {out:?}",
                v.rows(),
                v.cols()
            )));
        }
        let pre: usize = self.shape.dims()[..pos].iter().product();
        let post: usize = self.shape.dims()[pos + 1..].iter().product();
        let mut amps = vec![Complex::zero(); pre * dout * post];
        for a in 0..pre {
            for i in 0..din {
                for c in 0..post {
                    let x = self.amplitudes[(a * din + i) * post + c];
                    if x.is_zero() {
                        continue;
                    }
                    for o in 0..dout {
                        let vi = v[(o, i)];
                        amps[(a * dout + o) * post + c] = amps[(a * dout + o) * post + c] + vi * x;
                    }
                }
            }
        }
        Ok(Self { amplitudes: amps, shape: self.shape.replace(pos, out)? })
    }
}

fn norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

fn nonempty_positions(shape: &SubsystemShape, keep: &[&str]) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::Labeling("partial trace must keep at least one subsystem".into()));
    }
    shape.positions(keep)
}

/// Kept positions first (original order), traced ones after; returns the
/// order with the kept and traced dimensions.
fn keep_first_order(shape: &SubsystemShape, keep_pos: &[usize]) -> (Vec<usize>, usize, usize) {
    let traced: Vec<usize> = (0..shape.len()).filter(|p| !keep_pos.contains(p)).collect();
    let dk = shape.dim_at(keep_pos);
    let dt = shape.dim_at(&traced);
    let order = keep_pos.iter().chain(&traced).copied().collect();
    (order, dk, dt)
}

/// Reorders tensor factors of a square matrix; see [`permutation_index_map`].
pub fn permute_matrix<T: Real>(m: &ComplexMatrix<T>, dims: &[usize], order: &[usize]) -> ComplexMatrix<T> {
    let map = permutation_index_map(dims, order);
    ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(map[i], map[j])])
}

/// Kronecker product of two matrices.
pub fn tensor_product<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    a.kron(b)
}

/// Reduced state on `keep`, which stays in the original subsystem order.
pub fn partial_trace<T: Real>(s: &QuantumState<T>, keep: &[&str]) -> Result<QuantumState<T>> {
    let keep_pos = nonempty_positions(s.shape(), keep)?;
    let (order, dk, dt) = keep_first_order(s.shape(), &keep_pos);
    let map = permutation_index_map(s.shape().dims(), &order);
    let m = s.matrix();
    let mut out = ComplexMatrix::zeros(dk, dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = Complex::zero();
            for t in 0..dt {
                acc = acc + m[(map[i * dt + t], map[j * dt + t])];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(QuantumState::trusted(out, s.shape().select(&keep_pos)))
}

/// Transposes the indices of the listed subsystems only. The result is
/// Hermitian but need not be positive.
pub fn partial_transpose<T: Real>(s: &QuantumState<T>, transpose_on: &[&str]) -> Result<ComplexMatrix<T>> {
    let shape = s.shape();
    let pos = shape.positions(transpose_on)?;
    let dims = shape.dims();
    let n = dims.len();
    let mut strides = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let digit = |idx: usize, k: usize| (idx / strides[k]) % dims[k];
    let m = s.matrix();
    Ok(ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        let (mut si, mut sj) = (i, j);
        for &k in &pos {
            let (di, dj) = (digit(i, k), digit(j, k));
            si = si - di * strides[k] + dj * strides[k];
            sj = sj - dj * strides[k] + di * strides[k];
        }
        m[(si, sj)]
    }))
}

/// Purification with a reference system named `R`; see [`purify_with_label`].
pub fn purify<T: Real>(s: &QuantumState<T>) -> Result<PureStateVector<T>> {
    purify_with_label(s, "R")
}

/// Σ_j √λ_j |v_j⟩ ⊗ |j⟩_ref over eigenvalues above `T::RANK_TOL`, so the
/// reference dimension equals the numerical rank. Eigenvectors are taken in
/// descending eigenvalue order with degenerate eigenspaces expressed in the
/// canonical basis of [`canonical_eigenvectors`].
pub fn purify_with_label<T: Real>(s: &QuantumState<T>, reference: &str) -> Result<PureStateVector<T>> {
    let eig = canonical_eigenvectors(&hermitian_eigen(s.matrix())?, T::state_tol());
    let tol = T::rank_tol();
    // Clusters of equal eigenvalues in descending order, index order inside.
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for k in 0..eig.values.len() {
        match clusters.last_mut() {
            Some(c) if eig.values[k] - eig.values[k - 1] <= T::state_tol() => c.push(k),
            _ => clusters.push(vec![k]),
        }
    }
    let kept: Vec<usize> = clusters.into_iter().rev().flatten().filter(|&k| eig.values[k] > tol).collect();
    let rank = kept.len();
    let d = s.dim();
    let mut amps = vec![Complex::zero(); d * rank];
    // Renormalize over the kept spectrum so clamped eigenvalues do not leak norm.
    let total: T = kept.iter().map(|&k| eig.values[k]).sum();
    for (j, &k) in kept.iter().enumerate() {
        let w = (eig.values[k] / total).sqrt();
        for a in 0..d {
            amps[a * rank + j] = eig.vectors[(a, k)].scale(w);
        }
    }
    let shape = s.shape().concat(&SubsystemShape::single(reference, rank))?;
    Ok(PureStateVector::trusted(amps, shape))
}
