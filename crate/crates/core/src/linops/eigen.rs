//! Hermitian eigensolvers.
//!
//! Spectra alone come from Householder tridiagonalization plus implicit QL.
//! Eigenvectors come from cyclic complex Jacobi rotations, which are slower
//! but keep nearly degenerate eigenvectors orthonormal to working precision.

use num_complex::Complex;
use num_traits::Zero;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in ascending order with matching unit eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// V diag(λ) V†.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.values.len();
        let scaled = ComplexMatrix::from_fn(n, n, |i, j| self.vectors[(i, j)].scale(self.values[j]));
        &scaled * &self.vectors.adjoint()
    }

    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        self.vectors.col_vec(k)
    }
}

/// Validates Hermiticity and returns the symmetrized matrix.
///
/// Drift up to `T::HERMITIAN_DRIFT_TOL` is accumulated rounding from Kraus
/// sums and is removed by `(m + m†)/2`; anything larger is an error.
pub fn hermitize<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if !m.is_square() {
        return Err(Error::dim(format!("eigendecomposition of a {}x{} matrix", m.rows(), m.cols())));
    }
    let drift = m.hermitian_drift();
    if !(drift <= T::hermitian_drift_tol()) {
        return Err(Error::invalid(format!("matrix is not Hermitian (max |m - m†| = {drift:e})")));
    }
    Ok(m.hermitian_part())
}

/// Real eigenvalues of a Hermitian matrix, ascending.
///
/// Householder reduction to a real tridiagonal matrix followed by implicit
/// QL; much cheaper than Jacobi when no eigenvectors are needed.
pub fn hermitian_eigenvalues<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<T>> {
    let mut a = hermitize(m)?;
    let (mut d, mut e) = tridiagonalize(&mut a);
    tridiagonal_ql(&mut d, &mut e);
    d.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(d)
}

/// Eigenvalues by Jacobi rotations only; slower, kept as a cross-check.
pub fn hermitian_eigenvalues_jacobi<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<T>> {
    let mut a = hermitize(m)?;
    jacobi(&mut a, None);
    let mut values: Vec<T> = (0..a.rows()).map(|i| a[(i, i)].re).collect();
    values.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(values)
}

/// Reduces Hermitian `a` (destroyed) to tridiagonal form. Returns the real
/// diagonal and the moduli of the off-diagonal, with `e[k]` coupling `k`
/// and `k + 1`; a diagonal phase similarity makes the off-diagonal real
/// without changing the spectrum.
fn tridiagonalize<T: Real>(a: &mut ComplexMatrix<T>) -> (Vec<T>, Vec<T>) {
    let n = a.rows();
    let mut e = vec![T::zero(); n];
    let mut v = vec![Complex::zero(); n];
    let mut p = vec![Complex::zero(); n];
    for k in 0..n.saturating_sub(2) {
        let alpha = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<T>().sqrt();
        e[k] = alpha;
        let x0 = a[(k + 1, k)];
        let tail = alpha * alpha - x0.norm_sqr();
        if tail <= T::epsilon() * T::epsilon() * alpha * alpha || alpha.is_zero() {
            // already tridiagonal in this column
            continue;
        }
        let phase = if x0.is_zero() { Complex::new(T::one(), T::zero()) } else { x0.unscale(x0.norm()) };
        for i in k + 1..n {
            v[i] = a[(i, k)];
        }
        v[k + 1] = x0 + phase.scale(alpha);
        let vv: T = (k + 1..n).map(|i| v[i].norm_sqr()).sum();
        let tau = T::lit(2.0) / vv;
        // p = tau B v over the trailing block
        for i in k + 1..n {
            let mut acc = Complex::zero();
            for j in k + 1..n {
                acc = acc + a[(i, j)] * v[j];
            }
            p[i] = acc.scale(tau);
        }
        let vp: Complex<T> = (k + 1..n).fold(Complex::zero(), |acc, i| acc + v[i].conj() * p[i]);
        let kk = vp.scale(tau / T::lit(2.0));
        for i in k + 1..n {
            p[i] = p[i] - v[i] * kk;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[(i, j)] = a[(i, j)] - v[i] * p[j].conj() - p[i] * v[j].conj();
            }
        }
    }
    if n >= 2 {
        e[n - 2] = a[(n - 1, n - 2)].norm();
    }
    let d = (0..n).map(|i| a[(i, i)].re).collect();
    (d, e)
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix;
/// eigenvalues are left in `d`, `e` is destroyed.
fn tridiagonal_ql<T: Real>(d: &mut [T], e: &mut [T]) {
    let n = d.len();
    let two = T::lit(2.0);
    for l in 0..n {
        for _ in 0..(30 * n.max(1)) {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r.is_zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn hermitian_eigen<T: Real>(m: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    let mut a = hermitize(m)?;
    let n = a.rows();
    let mut v = ComplexMatrix::identity(n);
    jacobi(&mut a, Some(&mut v));
    let raw: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable: equal eigenvalues keep their index order.
    order.sort_by(|&i, &j| raw[i].partial_cmp(&raw[j]).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| raw[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, k| v[(r, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

/// Re-expresses each cluster of (numerically) equal eigenvalues in a
/// canonical orthonormal basis: Gram-Schmidt over the cluster projector
/// applied to the standard basis vectors in index order.
///
/// The result no longer depends on how the solver happened to rotate inside
/// a degenerate eigenspace, and for non-degenerate eigenvalues it fixes the
/// phase so the first non-negligible component is real and positive.
pub fn canonical_eigenvectors<T: Real>(e: &HermitianEigen<T>, cluster_tol: T) -> HermitianEigen<T> {
    let n = e.values.len();
    let accept = T::lit(1e-4);
    let mut vectors = ComplexMatrix::zeros(n, n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && e.values[end] - e.values[end - 1] <= cluster_tol {
            end += 1;
        }
        let cluster: Vec<Vec<Complex<T>>> = (start..end).map(|k| e.vector(k)).collect();
        let mut basis: Vec<Vec<Complex<T>>> = Vec::with_capacity(end - start);
        for k in 0..n {
            if basis.len() == cluster.len() {
                break;
            }
            // P e_k = Σ_c v_c conj(v_c[k])
            let mut w = vec![Complex::zero(); n];
            for v in &cluster {
                let coef = v[k].conj();
                for (wi, &vi) in w.iter_mut().zip(v) {
                    *wi = *wi + vi * coef;
                }
            }
            for u in &basis {
                let proj = u.iter().zip(&w).fold(Complex::zero(), |acc: Complex<T>, (&ui, &wi)| acc + ui.conj() * wi);
                for (wi, &ui) in w.iter_mut().zip(u) {
                    *wi = *wi - ui * proj;
                }
            }
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
            if norm > accept {
                basis.push(w.into_iter().map(|z| z.unscale(norm)).collect());
            }
        }
        debug_assert_eq!(basis.len(), cluster.len());
        for (offset, u) in basis.iter().enumerate() {
            for (r, &z) in u.iter().enumerate() {
                vectors[(r, start + offset)] = z;
            }
        }
        start = end;
    }
    HermitianEigen { values: e.values.clone(), vectors }
}

fn jacobi<T: Real>(a: &mut ComplexMatrix<T>, mut v: Option<&mut ComplexMatrix<T>>) {
    let n = a.rows();
    if n < 2 {
        return;
    }
    let scale = a.frobenius_norm();
    if scale.is_zero() {
        return;
    }
    let threshold = T::epsilon() * scale;
    let hundred = T::lit(100.0);
    for sweep in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off + a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= threshold {
            return;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g.is_zero() {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Once the sweep count is large, drop elements below the
                // precision of both diagonal entries.
                if sweep > 3 && app.abs() + hundred * g == app.abs() && aqq.abs() + hundred * g == aqq.abs() {
                    a[(p, q)] = Complex::zero();
                    a[(q, p)] = Complex::zero();
                    continue;
                }
                let phase = apq.unscale(g);
                let tau = (aqq - app) / (g + g);
                let t =
                    if tau.is_zero() { T::one() } else { tau.signum() / (tau.abs() + (T::one() + tau * tau).sqrt()) };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                // U = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
                let u_pp = Complex::new(c, T::zero());
                let u_pq = Complex::new(s, T::zero());
                let u_qp = phase.conj().scale(-s);
                let u_qq = phase.conj().scale(c);
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * u_pp + akq * u_qp;
                    a[(k, q)] = akp * u_pq + akq * u_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[(p, q)] = Complex::zero();
                a[(q, p)] = Complex::zero();
                a[(p, p)].im = T::zero();
                a[(q, q)].im = T::zero();
                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * u_pp + vkq * u_qp;
                        v[(k, q)] = vkp * u_pq + vkq * u_qq;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    #[test]
    fn ql_and_jacobi_spectra_agree() {
        let m = M::from_fn(7, 7, |i, j| {
            let (a, b) = (i.min(j) as f64, i.max(j) as f64);
            let im = if i < j {
                0.3 * (a - b)
            } else if i > j {
                -0.3 * (a - b)
            } else {
                0.0
            };
            Complex::new(1.0 / (1.0 + a + b), im)
        });
        let ql = hermitian_eigenvalues(&m).unwrap();
        let jac = hermitian_eigenvalues_jacobi(&m).unwrap();
        for (x, y) in ql.iter().zip(&jac) {
            assert!((x - y).abs() < 1e-13, "{ql:?} vs {jac:?}");
        }
    }

    #[test]
    fn ql_handles_block_diagonal_input() {
        let ev = hermitian_eigenvalues(&M::diagonal(&[0.0, 0.5, 0.0, 0.5])).unwrap();
        assert_eq!(ev, vec![0.0, 0.0, 0.5, 0.5]);
        assert!(hermitian_eigenvalues(&M::zeros(0, 0)).unwrap().is_empty());
        assert_eq!(hermitian_eigenvalues(&M::diagonal(&[3.0])).unwrap(), vec![3.0]);
    }

    #[test]
    fn identity_spectrum() {
        assert_eq!(hermitian_eigenvalues(&M::identity(4)).unwrap(), vec![1.0; 4]);
    }

    #[test]
    fn binary_diagonal_spectrum() {
        let q = 2f64.sqrt() / (1.0 + 2f64.sqrt());
        let ev = hermitian_eigenvalues(&M::diagonal(&[q, 1.0 - q])).unwrap();
        assert!((ev[0] - 0.414_213_562_373_095).abs() < 1e-12);
        assert!((ev[1] - 0.585_786_437_626_905).abs() < 1e-12);
    }

    #[test]
    fn pauli_y_has_plus_minus_one() {
        let y = M::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => Complex::new(0.0, -1.0),
            (1, 0) => Complex::new(0.0, 1.0),
            _ => Complex::zero(),
        });
        let e = hermitian_eigen(&y).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        assert!(e.reconstruct().max_abs_diff(&y) < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let m = M::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::Validation(_))));
        assert!(matches!(hermitian_eigenvalues(&M::zeros(2, 3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn small_drift_is_symmetrized() {
        let mut m = M::identity(3);
        m[(0, 1)] = Complex::new(1e-9, 0.0);
        assert!(hermitian_eigenvalues(&m).is_ok());
    }

    #[test]
    fn diagonal_input_keeps_standard_basis() {
        let e = hermitian_eigen(&M::diagonal(&[0.5, 0.5, 0.0, 0.0])).unwrap();
        // zeros first (indices 2, 3), then halves (indices 0, 1), index order kept
        assert_eq!(e.vectors[(2, 0)].re, 1.0);
        assert_eq!(e.vectors[(3, 1)].re, 1.0);
        assert_eq!(e.vectors[(0, 2)].re, 1.0);
        assert_eq!(e.vectors[(1, 3)].re, 1.0);
    }

    #[test]
    fn canonical_basis_undoes_rotation_inside_degenerate_space() {
        // diag(1, 1, 0): columns 1 and 2 span the degenerate block; mix them
        let (c, s) = (0.6f64, 0.8f64);
        let u = M::from_fn(3, 3, |i, j| match (i, j) {
            (0, 0) => Complex::new(1.0, 0.0),
            (1, 1) => Complex::new(c, 0.0),
            (1, 2) => Complex::new(0.0, s),
            (2, 1) => Complex::new(0.0, s),
            (2, 2) => Complex::new(c, 0.0),
            _ => Complex::zero(),
        });
        let e = hermitian_eigen(&M::diagonal(&[1.0, 1.0, 0.0])).unwrap();
        let rotated = HermitianEigen { values: e.values.clone(), vectors: &e.vectors * &u.adjoint() };
        let canon = canonical_eigenvectors(&rotated, 1e-10);
        for k in 0..3 {
            for r in 0..3 {
                assert!((canon.vectors[(r, k)] - e.vectors[(r, k)]).norm() < 1e-12, "({r},{k})");
            }
        }
    }
}
