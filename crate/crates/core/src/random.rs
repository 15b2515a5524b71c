//! Seeded random states, unitaries and channels.
//!
//! Everything draws from SplitMix64 so a seed reproduces the same sequence
//! on every platform; Gaussian entries come from `rand_distr::StandardNormal`.

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::SplitMix64;

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linops::{ComplexMatrix, PureStateVector, QuantumState, SubsystemShape};
use crate::scalar::Real;

pub fn rng_from_seed(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

/// Matrix of i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Orthonormalizes the columns of `m` in place by modified Gram-Schmidt.
fn orthonormalize_columns<T: Real>(m: &mut ComplexMatrix<T>) -> Result<()> {
    let (rows, cols) = (m.rows(), m.cols());
    for j in 0..cols {
        for k in 0..j {
            let mut proj = Complex::zero();
            for r in 0..rows {
                proj = proj + m[(r, k)].conj() * m[(r, j)];
            }
            for r in 0..rows {
                let v = m[(r, k)];
                m[(r, j)] = m[(r, j)] - v * proj;
            }
        }
        let norm = (0..rows).map(|r| m[(r, j)].norm_sqr()).sum::<T>().sqrt();
        if !(norm > T::epsilon()) {
            return Err(Error::invalid("random columns are linearly dependent"));
        }
        for r in 0..rows {
            m[(r, j)] = m[(r, j)].unscale(norm);
        }
    }
    Ok(())
}

/// `rows x cols` isometry (V†V = I) drawn from the Haar measure.
pub fn random_isometry<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Result<ComplexMatrix<T>> {
    if cols > rows {
        return Err(Error::dim(format!("no {rows}x{cols} isometry exists")));
    }
    let mut m = gaussian_matrix(rows, cols, rng);
    orthonormalize_columns(&mut m)?;
    Ok(m)
}

pub fn random_unitary<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<ComplexMatrix<T>> {
    random_isometry(d, d, rng)
}

/// Haar-random pure state.
pub fn random_pure_state<T: Real, R: Rng + ?Sized>(shape: SubsystemShape, rng: &mut R) -> PureStateVector<T> {
    let d = shape.total_dim();
    let mut v: Vec<Complex<T>> = (0..d).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    v.iter_mut().for_each(|z| *z = z.unscale(norm));
    PureStateVector::trusted(v, shape)
}

/// Density matrix GG†/tr(GG†) with G a `d x rank` Gaussian matrix.
pub fn random_state_of_rank<T: Real, R: Rng + ?Sized>(
    shape: SubsystemShape,
    rank: usize,
    rng: &mut R,
) -> QuantumState<T> {
    let d = shape.total_dim();
    let g = gaussian_matrix::<T, R>(d, rank.max(1), rng);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    QuantumState::trusted(m.scale_real(T::one() / tr), shape)
}

/// Full-rank random density matrix (Hilbert-Schmidt measure).
pub fn random_state<T: Real, R: Rng + ?Sized>(shape: SubsystemShape, rng: &mut R) -> QuantumState<T> {
    let d = shape.total_dim();
    random_state_of_rank(shape, d, rng)
}

/// Channel whose Stinespring isometry is Haar random, with `nkraus`
/// Kraus operators of size `dout x din`.
pub fn random_channel<T: Real, R: Rng + ?Sized>(
    din: usize,
    dout: usize,
    nkraus: usize,
    rng: &mut R,
) -> Result<KrausChannel<T>> {
    let v = random_isometry::<T, R>(dout * nkraus, din, rng)?;
    let kraus = (0..nkraus).map(|k| ComplexMatrix::from_fn(dout, din, |b, a| v[(b * nkraus + k, a)])).collect();
    KrausChannel::new(kraus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isometry_and_unitary_are_orthonormal() {
        let mut rng = rng_from_seed(7);
        let v = random_isometry::<f64, _>(6, 3, &mut rng).unwrap();
        assert!((&v.adjoint() * &v).max_abs_diff(&ComplexMatrix::identity(3)) < 1e-13);
        let u = random_unitary::<f64, _>(4, &mut rng).unwrap();
        assert!((&u * &u.adjoint()).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-13);
        assert!(random_isometry::<f64, _>(2, 3, &mut rng).is_err());
    }

    #[test]
    fn random_states_are_valid() {
        let mut rng = rng_from_seed(1);
        let shape = SubsystemShape::new([("A", 2), ("B", 3)]).unwrap();
        let s = random_state::<f64, _>(shape.clone(), &mut rng);
        assert!(QuantumState::new(s.matrix().clone(), shape.clone()).is_ok());
        assert_eq!(random_state_of_rank::<f64, _>(shape.clone(), 2, &mut rng).rank().unwrap(), 2);
        let p = random_pure_state::<f64, _>(shape.clone(), &mut rng);
        assert!(PureStateVector::new(p.amplitudes().to_vec(), shape).is_ok());
    }

    #[test]
    fn random_channel_is_complete() {
        let mut rng = rng_from_seed(3);
        let ch = random_channel::<f64, _>(3, 2, 4, &mut rng).unwrap();
        assert_eq!((ch.din(), ch.dout(), ch.denv()), (3, 2, 4));
        assert!(ch.completeness_deviation() < 1e-12);
    }

    #[test]
    fn same_seed_same_draws() {
        let a = gaussian_matrix::<f64, _>(3, 3, &mut rng_from_seed(42));
        let b = gaussian_matrix::<f64, _>(3, 3, &mut rng_from_seed(42));
        assert_eq!(a, b);
    }
}
