//! Kraus-form channels, their Stinespring dilations and complementary
//! outputs, and the channel constructors used by the constructions module.

mod json;
mod library;

pub use json::{channel_from_json, channel_to_json, ChannelJsonError};
pub use library::{
    completely_depolarizing, erasure_channel, flagged_mixture, horodecki_channel_4, horodecki_channel_4_with_q,
    horodecki_q, identity_channel, switch_channel,
};

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linops::{hermitian_eigenvalues, ComplexMatrix, QuantumState, SubsystemShape};
use crate::scalar::Real;

/// Completely positive trace-preserving map ρ ↦ Σ_k K_k ρ K_k†.
///
/// The environment of the dilation has one basis state per Kraus operator,
/// so `denv() == kraus().len()`; no attempt is made to minimize it.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel<T> {
    kraus: Vec<ComplexMatrix<T>>,
    din: usize,
    dout: usize,
}

/// V = Σ_k K_k ⊗ |k⟩_E, a `(dout * denv) x din` isometry with the output
/// factor before the environment factor.
#[derive(Debug, Clone, PartialEq)]
pub struct StinespringIsometry<T> {
    pub matrix: ComplexMatrix<T>,
    pub dout: usize,
    pub denv: usize,
}

impl<T: Real> KrausChannel<T> {
    /// Validates shapes and completeness Σ K†K = I at `T::STATE_TOL`.
    pub fn new(kraus: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let channel = Self::from_parts(kraus)?;
        let deviation = channel.completeness_deviation();
        if !(deviation <= T::state_tol()) {
            return Err(Error::invalid(format!("Kraus operators are not complete: max |Σ K†K - I| = {deviation:e}")));
        }
        Ok(channel)
    }

    /// Shape checks only. Used for deliberately broken channels in tests and
    /// the self-test fault hook.
    pub fn new_unchecked(kraus: Vec<ComplexMatrix<T>>) -> Result<Self> {
        Self::from_parts(kraus)
    }

    fn from_parts(kraus: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::invalid("channel needs at least one Kraus operator"))?;
        let (dout, din) = (first.rows(), first.cols());
        if let Some(k) = kraus.iter().position(|m| m.rows() != dout || m.cols() != din) {
            return Err(Error::dim(format!(
                "Kraus operator {k} is {}x{}, expected {dout}x{din}",
                kraus[k].rows(),
                kraus[k].cols()
            )));
        }
        Ok(Self { kraus, din, dout })
    }

    pub fn kraus(&self) -> &[ComplexMatrix<T>] {
        &self.kraus
    }

    pub fn din(&self) -> usize {
        self.din
    }

    pub fn dout(&self) -> usize {
        self.dout
    }

    pub fn denv(&self) -> usize {
        self.kraus.len()
    }

    /// max |Σ_k K_k†K_k − I|.
    pub fn completeness_deviation(&self) -> T {
        let mut sum = ComplexMatrix::zeros(self.din, self.din);
        for k in &self.kraus {
            sum = &sum + &(&k.adjoint() * k);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(self.din))
    }

    fn check_input(&self, rho: &QuantumState<T>) -> Result<()> {
        if rho.dim() != self.din {
            return Err(Error::dim(format!("channel input dimension {} but state dimension {}", self.din, rho.dim())));
        }
        Ok(())
    }

    pub fn stinespring(&self) -> Result<StinespringIsometry<T>> {
        let deviation = self.completeness_deviation();
        if !(deviation <= T::state_tol()) {
            return Err(Error::invalid(format!("Kraus operators are not complete: max |Σ K†K - I| = {deviation:e}")));
        }
        let denv = self.denv();
        let matrix = ComplexMatrix::from_fn(self.dout * denv, self.din, |r, a| {
            let (b, k) = (r / denv, r % denv);
            self.kraus[k][(b, a)]
        });
        Ok(StinespringIsometry { matrix, dout: self.dout, denv })
    }

    /// Σ_k K_k ρ K_k† on a single output system labeled `B`.
    pub fn output_state(&self, rho: &QuantumState<T>) -> Result<QuantumState<T>> {
        self.check_input(rho)?;
        let mut out = ComplexMatrix::zeros(self.dout, self.dout);
        for k in &self.kraus {
            out = &out + &k.conjugate(rho.matrix());
        }
        Ok(QuantumState::trusted(out, SubsystemShape::single("B", self.dout)))
    }

    /// Complementary output E_kl = tr(K_k ρ K_l†) on a system labeled `E`.
    pub fn environment_state(&self, rho: &QuantumState<T>) -> Result<QuantumState<T>> {
        self.check_input(rho)?;
        let n = self.denv();
        let applied: Vec<ComplexMatrix<T>> = self.kraus.iter().map(|k| k.matmul(rho.matrix())).collect();
        let mut env = ComplexMatrix::zeros(n, n);
        for a in 0..n {
            for b in a..n {
                let v = applied[a].inner(&self.kraus[b]);
                env[(a, b)] = v;
                env[(b, a)] = v.conj();
            }
        }
        Ok(QuantumState::trusted(env, SubsystemShape::single("E", n)))
    }

    /// Applies the dilation to subsystem `act_on` of `s`, replacing it in
    /// place by the output `b_label` followed by the environment `e_label`.
    pub fn extend_and_apply(
        &self,
        s: &QuantumState<T>,
        act_on: &str,
        b_label: &str,
        e_label: &str,
    ) -> Result<QuantumState<T>> {
        let shape = s.shape();
        let pos = shape.position(act_on)?;
        if shape.dims()[pos] != self.din {
            return Err(Error::dim(format!(
                "subsystem `{act_on}` has dimension {} but the channel input is {}",
                shape.dims()[pos],
                self.din
            )));
        }
        let v = self.stinespring()?.matrix;
        let pre: usize = shape.dims()[..pos].iter().product();
        let post: usize = shape.dims()[pos + 1..].iter().product();
        let lift = ComplexMatrix::identity(pre).kron(&v).kron(&ComplexMatrix::identity(post));
        let out_shape = shape.replace(pos, &[(b_label, self.dout), (e_label, self.denv())])?;
        Ok(QuantumState::trusted(lift.conjugate(s.matrix()), out_shape))
    }

    /// Parallel use: Kraus set {K_i ⊗ L_j}, ordered with `i` major.
    pub fn tensor(&self, other: &Self) -> Self {
        let kraus = self.kraus.iter().flat_map(|k| other.kraus.iter().map(move |l| k.kron(l))).collect();
        Self { kraus, din: self.din * other.din, dout: self.dout * other.dout }
    }

    /// (N ⊗ id)(Φ) with Φ maximally entangled on `din ⊗ din`; subsystems
    /// are labeled `B` (channel output) and `R` (untouched reference).
    pub fn choi_matrix(&self) -> QuantumState<T> {
        let d = self.din;
        let norm = T::one() / T::lit(d as f64);
        let mut choi = ComplexMatrix::zeros(self.dout * d, self.dout * d);
        for k in &self.kraus {
            for i in 0..d {
                for j in 0..d {
                    // K|i⟩⟨j|K† ⊗ |i⟩⟨j|
                    for b in 0..self.dout {
                        let kbi = k[(b, i)];
                        if kbi.is_zero() {
                            continue;
                        }
                        for c in 0..self.dout {
                            let v = kbi * k[(c, j)].conj();
                            let r = b * d + i;
                            let col = c * d + j;
                            choi[(r, col)] = choi[(r, col)] + v.scale(norm);
                        }
                    }
                }
            }
        }
        let shape = SubsystemShape::new([("B", self.dout), ("R", d)]).expect("distinct labels");
        QuantumState::trusted(choi, shape)
    }

    /// Converts the Kraus operators to another scalar type.
    pub fn cast<U: Real>(&self) -> KrausChannel<U> {
        KrausChannel {
            kraus: self
                .kraus
                .iter()
                .map(|k| k.map(|z| Complex::new(U::lit(z.re.to_f64().unwrap()), U::lit(z.im.to_f64().unwrap()))))
                .collect(),
            din: self.din,
            dout: self.dout,
        }
    }
}

/// Positive-partial-transpose test across `cut`.
///
/// Returns whether the smallest eigenvalue of the partial transpose is at
/// least `-T::STATE_TOL`, together with that eigenvalue.
pub fn is_ppt<T: Real>(s: &QuantumState<T>, cut: &[&str]) -> Result<(bool, T)> {
    if cut.is_empty() || cut.len() >= s.shape().len() {
        return Err(Error::Labeling(format!("cut {cut:?} does not split {:?}", s.shape().labels())));
    }
    let pt = s.partial_transpose(cut)?;
    let min = hermitian_eigenvalues(&pt)?[0];
    Ok((min >= -T::state_tol(), min))
}

/// Embeds `m` (rows ≤ `rows`) with zero padding.
pub(crate) fn embed_rows<T: Real>(m: &ComplexMatrix<T>, rows: usize) -> ComplexMatrix<T> {
    m.pad_rows(rows)
}

pub(crate) fn scaled<T: Real>(m: &ComplexMatrix<T>, w: T) -> ComplexMatrix<T> {
    m.scale(Complex::new(w.sqrt(), T::zero()))
}
