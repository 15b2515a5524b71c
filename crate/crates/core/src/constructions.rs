//! Superactivation of two zero-capacity channels: the assisted-input state,
//! the identity that halves the private value, the flagged-mixture
//! nonconvexity threshold and the switch-channel single-letter gap.

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use crate::channels::{erasure_channel, flagged_mixture, horodecki_channel_4, switch_channel, KrausChannel};
use crate::error::{Error, Result};
use crate::information::{coherent_information, private_information_value, pure_marginal_entropy, Ensemble};
use crate::linops::{purify, ComplexMatrix, PureStateVector, QuantumState, SubsystemShape};
use crate::optimizer::{maximize_coherent_information, OptimizerConfig};
use crate::parallel::thread_pool;
use crate::scalar::Real;

/// Equiprobable ρ_x = |x⟩⟨x| ⊗ I/2 on the four-dimensional input `A`
/// (key qubit first, shield qubit second).
pub fn horodecki_ensemble_h4<T: Real>() -> Ensemble<T> {
    let half = T::lit(0.5);
    let states = (0..2)
        .map(|x| {
            let mut diag = [T::zero(); 4];
            diag[2 * x] = half;
            diag[2 * x + 1] = half;
            QuantumState::trusted(ComplexMatrix::diagonal(&diag), SubsystemShape::single("A", 4))
        })
        .collect();
    Ensemble::new(vec![half, half], states).expect("valid ensemble")
}

/// Pure state |ρ⟩ = Σ_x √p_x |x⟩_X |ρ_x⟩_AC and its AC marginal.
#[derive(Debug, Clone)]
pub struct SuperactivationInput<T> {
    pub pure: PureStateVector<T>,
    pub rho_ac: QuantumState<T>,
    /// Dimension of `C`, the sum of the ensemble ranks.
    pub c_dim: usize,
}

/// Purifies each ensemble member into its own block of `C`, so the C
/// supports are disjoint. Blocks follow ensemble order; inside a block the
/// columns follow [`purify`] (descending eigenvalue, ties by index).
pub fn superactivation_input<T: Real>(e: &Ensemble<T>) -> Result<SuperactivationInput<T>> {
    let purifications = e.states().iter().map(purify).collect::<Result<Vec<_>>>()?;
    let d = e.states()[0].dim();
    let ranks: Vec<usize> = purifications.iter().map(|p| p.amplitudes().len() / d).collect();
    let c_dim: usize = ranks.iter().sum();
    let n = e.len();
    let mut amps = vec![Complex::zero(); n * d * c_dim];
    let mut offset = 0;
    for (x, (psi, &p)) in purifications.iter().zip(e.probabilities()).enumerate() {
        let rank = ranks[x];
        let w = p.sqrt();
        for a in 0..d {
            for j in 0..rank {
                amps[(x * d + a) * c_dim + offset + j] = psi.amplitudes()[a * rank + j].scale(w);
            }
        }
        offset += rank;
    }
    let shape = SubsystemShape::new([("X", n), ("A", d), ("C", c_dim)])?;
    let pure = PureStateVector::new(amps, shape)?;
    let rho_ac = pure.reduced_state(&["A", "C"])?;
    Ok(SuperactivationInput { pure, rho_ac, c_dim })
}

/// ½(|00⟩⟨00| + |11⟩⟨11|)^{A₁C₁} ⊗ φ₊^{A₂C₂}, returned on `A = A₁A₂` and
/// `C = C₁C₂` (dimension 4 each). Swapping A and C leaves it unchanged.
pub fn rho_ac_symmetric<T: Real>() -> QuantumState<T> {
    let half = T::lit(0.5);
    let correlated = ComplexMatrix::diagonal(&[half, T::zero(), T::zero(), half]);
    let phi = ComplexMatrix::from_fn(4, 4, |i, j| {
        if (i == 0 || i == 3) && (j == 0 || j == 3) {
            Complex::new(half, T::zero())
        } else {
            Complex::zero()
        }
    });
    let shape = SubsystemShape::new([("A1", 2), ("C1", 2), ("A2", 2), ("C2", 2)]).expect("distinct labels");
    let joint =
        QuantumState::trusted(correlated.kron(&phi), shape).permute(&["A1", "A2", "C1", "C2"]).expect("labels present");
    QuantumState::trusted(joint.matrix().clone(), SubsystemShape::new([("A", 4), ("C", 4)]).expect("distinct labels"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalvingReport<T> {
    /// I_c(N ⊗ A_e, ρ^AC) from the joint pure state.
    pub lhs: T,
    /// ½(I(X;B) − I(X;E)) from the ensemble.
    pub rhs: T,
    pub abs_diff: T,
    /// Input dimension of the 50% erasure channel (sum of ensemble ranks).
    pub erasure_input_dim: usize,
}

/// Evaluates both sides of I_c(N ⊗ A_e, ρ^AC) = ½(I(X;B) − I(X;E)), where
/// A_e is the 50% erasure channel on `C`.
///
/// The left side dilates N on `A` (into B, E) and A_e on `C` (into D, F)
/// and reads H(BD) − H(EF) off the resulting pure vector; the right side
/// uses the Holevo formula on the ensemble directly.
pub fn verify_halving_identity<T: Real>(c: &KrausChannel<T>, e: &Ensemble<T>) -> Result<HalvingReport<T>> {
    if e.states()[0].dim() != c.din() {
        return Err(Error::dim(format!(
            "ensemble states have dimension {} but the channel input is {}",
            e.states()[0].dim(),
            c.din()
        )));
    }
    let input = superactivation_input(e)?;
    let erasure = erasure_channel::<T>(input.c_dim, 0.5)?;
    let vn = c.stinespring()?;
    let ve = erasure.stinespring()?;
    let joint = input.pure.apply_isometry("A", &vn.matrix, &[("B", vn.dout), ("E", vn.denv)])?.apply_isometry(
        "C",
        &ve.matrix,
        &[("D", ve.dout), ("F", ve.denv)],
    )?;
    let lhs = pure_marginal_entropy(&joint, &["B", "D"])? - pure_marginal_entropy(&joint, &["E", "F"])?;
    let rhs = T::lit(0.5) * private_information_value(c, e)?;
    Ok(HalvingReport { lhs, rhs, abs_diff: (lhs - rhs).abs(), erasure_input_dim: input.c_dim })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonconvexitySample<T> {
    pub p: f64,
    /// I_c(M_p ⊗ M_p, ρ^AC) from the tensor-product channel.
    pub direct: T,
    /// The same value assembled from the four branch pairs.
    pub decomposition: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonconvexityReport<T> {
    /// I_c(N_H ⊗ A_e, ρ^AC).
    pub i1: T,
    /// I_c(N_H ⊗ N_H, ρ^AC).
    pub i_hh: T,
    /// I_c(A_e ⊗ A_e, ρ^AC); zero for the symmetric pair.
    pub i_ee: T,
    /// log₂ of the Horodecki environment dimension.
    pub c_bound: T,
    /// i1 / (c_bound + i1): below it the flagged mixture has I_c > 0.
    pub p_star: T,
    pub samples: Vec<NonconvexitySample<T>>,
}

/// Coherent information of M_p ⊗ M_p at ρ^AC for each `p`, where
/// M_p mixes the Horodecki channel (weight p) with 50% erasure and flags the
/// branch. Each value is computed on the 100 x 121 dilation directly and
/// from p²·I_hh + p(1−p)·(I_he + I_eh) + (1−p)²·I_ee.
pub fn nonconvexity_analysis<T: Real>(p_samples: &[f64]) -> Result<NonconvexityReport<T>> {
    if let Some(&p) = p_samples.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::Probability(p));
    }
    let nh = horodecki_channel_4::<T>();
    let ae = erasure_channel::<T>(4, 0.5)?;
    let rho = rho_ac_symmetric::<T>();
    let pair = |a: &KrausChannel<T>, b: &KrausChannel<T>| coherent_information(&a.tensor(b), &rho);
    let i_hh = pair(&nh, &nh)?;
    let i_he = pair(&nh, &ae)?;
    let i_eh = pair(&ae, &nh)?;
    let i_ee = pair(&ae, &ae)?;
    let c_bound = T::lit(nh.denv() as f64).log2();
    let p_star = i_he / (c_bound + i_he);
    let samples = thread_pool().install(|| {
        p_samples
            .par_iter()
            .map(|&p| {
                let m = flagged_mixture(&nh, &ae, p)?;
                let direct = coherent_information(&m.tensor(&m), &rho)?;
                let (pp, qq) = (T::lit(p), T::lit(1.0 - p));
                let decomposition = pp * pp * i_hh + pp * qq * (i_he + i_eh) + qq * qq * i_ee;
                Ok(NonconvexitySample { p, direct, decomposition })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(NonconvexityReport { i1: i_he, i_hh, i_ee, c_bound, p_star, samples })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport<T> {
    /// Best I_c found for the switch channel alone.
    pub q1_single_bound: T,
    /// I_c(M ⊗ M, σ) at the routed input σ.
    pub q1_pair_value: T,
    pub din: usize,
    pub dout: usize,
    pub denv: usize,
    pub iterations_used: usize,
    pub converged: bool,
}

/// The switch channel M (control qubit picks Horodecki or 50% erasure) and
/// two uses of it. The pair is fed σ = |0⟩⟨0|^{A₁} ⊗ |1⟩⟨1|^{A₁'} ⊗ ρ^AC
/// ordered (A₁, A, A₁', C), so the first use runs the Horodecki branch on A
/// and the second runs erasure on C.
pub fn gap_analysis<T: Real>(cfg: &OptimizerConfig) -> Result<GapReport<T>> {
    let m = switch_channel(&horodecki_channel_4::<T>(), &erasure_channel(4, 0.5)?)?;
    let single = maximize_coherent_information(&m, cfg)?;
    let q1_pair_value = coherent_information(&m.tensor(&m), &routed_pair_input::<T>())?;
    Ok(GapReport {
        q1_single_bound: single.best_value,
        q1_pair_value,
        din: m.din(),
        dout: m.dout(),
        denv: m.denv(),
        iterations_used: single.iterations_used,
        converged: single.converged,
    })
}

/// σ on (A₁, A, A₁', C) with dimensions (2, 4, 2, 4).
pub fn routed_pair_input<T: Real>() -> QuantumState<T> {
    let flag0 = QuantumState::basis(SubsystemShape::single("A1", 2), 0).expect("in range");
    let flag1 = QuantumState::basis(SubsystemShape::single("A1'", 2), 1).expect("in range");
    flag0
        .tensor(&flag1)
        .and_then(|f| f.tensor(&rho_ac_symmetric()))
        .and_then(|s| s.permute(&["A1", "A", "A1'", "C"]))
        .expect("distinct labels")
}
