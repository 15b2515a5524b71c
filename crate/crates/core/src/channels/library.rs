use num_complex::Complex;

use super::{embed_rows, scaled, KrausChannel};
use crate::error::{Error, Result};
use crate::linops::{pauli, ComplexMatrix};
use crate::scalar::Real;

pub fn identity_channel<T: Real>(d: usize) -> KrausChannel<T> {
    KrausChannel::new(vec![ComplexMatrix::identity(d)]).expect("identity is complete")
}

/// ρ ↦ tr(ρ) I/d, with Kraus operators |i⟩⟨j|/√d.
pub fn completely_depolarizing<T: Real>(d: usize) -> KrausChannel<T> {
    let w = T::one() / T::lit(d as f64).sqrt();
    let kraus = (0..d * d)
        .map(|k| {
            let mut m = ComplexMatrix::zeros(d, d);
            m[(k / d, k % d)] = Complex::new(w, T::zero());
            m
        })
        .collect();
    KrausChannel::new(kraus).expect("depolarizing is complete")
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Probability(p));
    }
    Ok(())
}

/// Erasure channel on a `d`-level input: with probability `1 - p` the state
/// passes into the first `d` output levels, otherwise the output is the
/// flag state, the last basis vector `|d⟩`.
///
/// Kraus operators: `√(1-p)·embed`, then `√p·|d⟩⟨i|` for `i = 0..d`, so the
/// environment's index 0 records "no erasure". At `p = 1/2` the channel is
/// symmetric: its complement is the same map up to relabeling.
pub fn erasure_channel<T: Real>(d: usize, p: f64) -> Result<KrausChannel<T>> {
    check_probability(p)?;
    let keep = T::lit(1.0 - p).sqrt();
    let erase = T::lit(p).sqrt();
    let mut kraus = Vec::with_capacity(d + 1);
    let mut embed = ComplexMatrix::zeros(d + 1, d);
    for i in 0..d {
        embed[(i, i)] = Complex::new(keep, T::zero());
    }
    kraus.push(embed);
    for i in 0..d {
        let mut k = ComplexMatrix::zeros(d + 1, d);
        k[(d, i)] = Complex::new(erase, T::zero());
        kraus.push(k);
    }
    KrausChannel::new(kraus)
}

/// q = √2 / (1 + √2).
pub fn horodecki_q<T: Real>() -> T {
    let r2 = T::lit(2.0).sqrt();
    r2 / (T::one() + r2)
}

/// Four-dimensional entanglement-binding channel with positive private
/// information, on input `A = A1 ⊗ A2` (key qubit, shield qubit).
///
/// Kraus operators, with q = √2/(1+√2), a = ½√(2+√2), b = ½√(2−√2):
///
/// ```text
/// √(q/2) I⊗|0⟩⟨0|   √(q/2) Z⊗|1⟩⟨1|   √(q/4) Z⊗Y   √(q/4) I⊗X
/// √(1−q) X⊗diag(a, b)                √(1−q) Y⊗diag(b, −a)
/// ```
///
/// The minus sign in the last shield operator matters. Without it the
/// bit-flip branch leaves a |00⟩⟨11| coherence on the shield, the Choi
/// matrix has a partial-transpose eigenvalue of about −0.073, and the
/// environment learns the key bit. With it the Choi matrix is PPT (exactly
/// at the boundary for this q) and I(X;E) = 0 for the key ensemble.
pub fn horodecki_channel_4<T: Real>() -> KrausChannel<T> {
    horodecki_channel_4_with_q(horodecki_q::<T>())
}

/// The same Kraus structure with an arbitrary mixing weight `q` in [0, 1].
/// Completeness holds for every such `q`; the entanglement-binding and
/// private-key properties are specific to q = √2/(1+√2).
pub fn horodecki_channel_4_with_q<T: Real>(q: T) -> KrausChannel<T> {
    let (i, x, y, z) = (pauli::i2(), pauli::x(), pauli::y(), pauli::z());
    let (p0, p1) = (pauli::proj(0), pauli::proj(1));
    let r2 = T::lit(2.0).sqrt();
    let half = T::lit(0.5);
    let a = half * (T::lit(2.0) + r2).sqrt();
    let b = half * (T::lit(2.0) - r2).sqrt();
    let m0 = ComplexMatrix::diagonal(&[a, b]);
    let m1 = ComplexMatrix::diagonal(&[b, -a]);
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let kraus = vec![
        scaled(&i.kron(&p0), q / two),
        scaled(&z.kron(&p1), q / two),
        scaled(&z.kron(&y), q / four),
        scaled(&i.kron(&x), q / four),
        scaled(&x.kron(&m0), T::one() - q),
        scaled(&y.kron(&m1), T::one() - q),
    ];
    KrausChannel::new(kraus).expect("Horodecki Kraus set is complete")
}

/// M_p = p·N₁ ⊗ |0⟩⟨0| + (1−p)·N₂ ⊗ |1⟩⟨1|: applies one of two channels at
/// random and tells the receiver which.
///
/// Branch outputs are zero-padded into the larger of the two output spaces
/// and the flag qubit is the last output factor, so
/// `dout = 2·max(dout₁, dout₂)` and `denv = denv₁ + denv₂`.
pub fn flagged_mixture<T: Real>(c1: &KrausChannel<T>, c2: &KrausChannel<T>, p: f64) -> Result<KrausChannel<T>> {
    check_probability(p)?;
    if c1.din() != c2.din() {
        return Err(Error::dim(format!("branch input dimensions {} and {} differ", c1.din(), c2.din())));
    }
    let dmax = c1.dout().max(c2.dout());
    let (f0, f1) = (pauli::ket::<T>(0), pauli::ket::<T>(1));
    let w1 = T::lit(p);
    let w2 = T::lit(1.0 - p);
    let kraus = c1
        .kraus()
        .iter()
        .map(|k| scaled(&embed_rows(k, dmax).kron(&f0), w1))
        .chain(c2.kraus().iter().map(|l| scaled(&embed_rows(l, dmax).kron(&f1), w2)))
        .collect();
    KrausChannel::new(kraus)
}

/// Measures a control qubit `A1` in the computational basis and applies
/// `c1` (outcome 0) or `c2` (outcome 1) to `A2`, revealing the outcome in
/// a flag qubit appended as the last output factor.
pub fn switch_channel<T: Real>(c1: &KrausChannel<T>, c2: &KrausChannel<T>) -> Result<KrausChannel<T>> {
    if c1.din() != c2.din() {
        return Err(Error::dim(format!("branch input dimensions {} and {} differ", c1.din(), c2.din())));
    }
    let d = c1.din();
    let dmax = c1.dout().max(c2.dout());
    let id = ComplexMatrix::identity(d);
    let select0 = pauli::ket::<T>(0).adjoint().kron(&id);
    let select1 = pauli::ket::<T>(1).adjoint().kron(&id);
    let (f0, f1) = (pauli::ket::<T>(0), pauli::ket::<T>(1));
    let kraus = c1
        .kraus()
        .iter()
        .map(|k| embed_rows(&(k * &select0), dmax).kron(&f0))
        .chain(c2.kraus().iter().map(|l| embed_rows(&(l * &select1), dmax).kron(&f1)))
        .collect();
    KrausChannel::new(kraus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::is_ppt;

    #[test]
    fn q_value() {
        assert!((horodecki_q::<f64>() - 0.585_786_437_6).abs() < 1e-10);
    }

    #[test]
    fn horodecki_completeness() {
        let ch = horodecki_channel_4::<f64>();
        assert_eq!((ch.din(), ch.dout(), ch.denv()), (4, 4, 6));
        assert!(ch.completeness_deviation() < 1e-12);
    }

    #[test]
    fn horodecki_choi_is_ppt() {
        let (ok, min) = is_ppt(&horodecki_channel_4::<f64>().choi_matrix(), &["R"]).unwrap();
        assert!(ok, "min PT eigenvalue {min:e}");
        assert!(min.abs() < 1e-12, "PPT boundary expected, got {min:e}");
    }

    #[test]
    fn unsigned_shield_operator_is_not_ppt() {
        // Same Kraus list with diag(b, a) in the last operator.
        let ch = horodecki_channel_4::<f64>();
        let mut kraus = ch.kraus().to_vec();
        let q = horodecki_q::<f64>();
        let half = 0.5f64;
        let m1 = ComplexMatrix::diagonal(&[half * (2.0 - 2f64.sqrt()).sqrt(), half * (2.0 + 2f64.sqrt()).sqrt()]);
        kraus[5] = scaled(&pauli::y().kron(&m1), 1.0 - q);
        let literal = KrausChannel::new(kraus).unwrap();
        let (ok, min) = is_ppt(&literal.choi_matrix(), &["R"]).unwrap();
        assert!(!ok);
        // −(1−q)·√2/8
        assert!((min + (1.0 - q) * 2f64.sqrt() / 8.0).abs() < 1e-12, "{min}");
    }

    #[test]
    fn erasure_dimensions_and_bounds() {
        let e = erasure_channel::<f64>(4, 0.5).unwrap();
        assert_eq!((e.din(), e.dout(), e.denv()), (4, 5, 5));
        assert!(matches!(erasure_channel::<f64>(2, 1.5), Err(Error::Probability(_))));
        assert!(matches!(erasure_channel::<f64>(2, -0.1), Err(Error::Probability(_))));
    }

    #[test]
    fn flagged_mixture_dimensions() {
        let m = flagged_mixture(&horodecki_channel_4::<f64>(), &erasure_channel(4, 0.5).unwrap(), 0.3).unwrap();
        assert_eq!((m.din(), m.dout(), m.denv()), (4, 10, 11));
        assert!(m.completeness_deviation() < 1e-12);
    }

    #[test]
    fn switch_dimensions() {
        let m = switch_channel(&horodecki_channel_4::<f64>(), &erasure_channel(4, 0.5).unwrap()).unwrap();
        assert_eq!((m.din(), m.dout(), m.denv()), (8, 10, 11));
        assert!(m.completeness_deviation() < 1e-10);
    }

    #[test]
    fn branch_input_mismatch() {
        let a = identity_channel::<f64>(2);
        let b = identity_channel::<f64>(3);
        assert!(matches!(flagged_mixture(&a, &b, 0.5), Err(Error::Dimension(_))));
        assert!(matches!(switch_channel(&a, &b), Err(Error::Dimension(_))));
        assert!(matches!(flagged_mixture(&a, &a, 2.0), Err(Error::Probability(_))));
    }

    #[test]
    fn kron_x_m0_layout() {
        // X ⊗ M0 puts M0 blocks on the anti-diagonal.
        let a = 0.5 * (2.0 + 2f64.sqrt()).sqrt();
        let b = 0.5 * (2.0 - 2f64.sqrt()).sqrt();
        let k = pauli::x::<f64>().kron(&ComplexMatrix::diagonal(&[a, b]));
        let expect = ComplexMatrix::from_real(&[
            &[0.0, 0.0, a, 0.0],
            &[0.0, 0.0, 0.0, b],
            &[a, 0.0, 0.0, 0.0],
            &[0.0, b, 0.0, 0.0],
        ]);
        assert_eq!(k, expect);
    }
}
