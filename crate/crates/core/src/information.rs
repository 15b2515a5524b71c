//! Entropic quantities in bits.

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linops::{hermitian_eigenvalues, ComplexMatrix, PureStateVector, QuantumState, SubsystemShape};
use crate::scalar::Real;

/// Classical-quantum ensemble {p_x, ρ_x} over a common system.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble<T> {
    probabilities: Vec<T>,
    states: Vec<QuantumState<T>>,
}

impl<T: Real> Ensemble<T> {
    pub fn new(probabilities: Vec<T>, states: Vec<QuantumState<T>>) -> Result<Self> {
        if probabilities.len() != states.len() || states.is_empty() {
            return Err(Error::invalid(format!(
                "ensemble has {} probabilities and {} states",
                probabilities.len(),
                states.len()
            )));
        }
        if let Some(p) = probabilities.iter().find(|p| !(**p >= T::zero())) {
            return Err(Error::Probability(p.to_f64().unwrap_or(f64::NAN)));
        }
        let total: T = probabilities.iter().copied().sum();
        if !((total - T::one()).abs() <= T::state_tol()) {
            return Err(Error::invalid(format!("ensemble probabilities sum to {total}")));
        }
        let shape = states[0].shape();
        if let Some(i) = states.iter().position(|s| s.shape() != shape) {
            return Err(Error::dim(format!(
                "ensemble state {i} has shape {:?}, expected {:?}",
                states[i].shape(),
                shape
            )));
        }
        Ok(Self { probabilities, states })
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    pub fn states(&self) -> &[QuantumState<T>] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Σ_x p_x ρ_x.
    pub fn average(&self) -> QuantumState<T> {
        let d = self.states[0].dim();
        let mut m = ComplexMatrix::zeros(d, d);
        for (p, s) in self.probabilities.iter().zip(&self.states) {
            m = &m + &s.matrix().scale_real(*p);
        }
        QuantumState::trusted(m, self.states[0].shape().clone())
    }
}

/// −Σ λ log₂ λ of a spectrum. Eigenvalues in (−STATE_TOL, RANK_TOL] count
/// as zero; anything more negative is reported as a positivity violation.
pub fn entropy_of_spectrum<T: Real>(values: &[T]) -> Result<T> {
    let floor = T::rank_tol();
    let mut h = T::zero();
    for &l in values {
        if l < -T::state_tol() {
            return Err(Error::invalid(format!("negative eigenvalue {l:e} in entropy")));
        }
        if l > floor {
            h = h - l * l.log2();
        }
    }
    Ok(h.max(T::zero()))
}

pub fn von_neumann_entropy<T: Real>(s: &QuantumState<T>) -> Result<T> {
    entropy_of_spectrum(&s.eigenvalues()?)
}

/// Entropy of an arbitrary Hermitian matrix treated as a density matrix.
pub(crate) fn matrix_entropy<T: Real>(m: &ComplexMatrix<T>) -> Result<T> {
    entropy_of_spectrum(&hermitian_eigenvalues(m)?)
}

/// H of the reduced state of a pure vector on `keep`; 0 for an empty set.
pub fn pure_marginal_entropy<T: Real>(psi: &PureStateVector<T>, keep: &[&str]) -> Result<T> {
    if keep.is_empty() {
        return Ok(T::zero());
    }
    von_neumann_entropy(&psi.reduced_state(keep)?)
}

/// H(B) − H(E) for input ρ.
pub fn coherent_information<T: Real>(c: &KrausChannel<T>, rho: &QuantumState<T>) -> Result<T> {
    let hb = von_neumann_entropy(&c.output_state(rho)?)?;
    let he = von_neumann_entropy(&c.environment_state(rho)?)?;
    Ok(hb - he)
}

/// χ = H(Σ p_x σ_x) − Σ p_x H(σ_x) with σ_x = map(ρ_x).
pub fn holevo_information<T, F>(e: &Ensemble<T>, map: F) -> Result<T>
where
    T: Real,
    F: Fn(&QuantumState<T>) -> Result<QuantumState<T>>,
{
    let images = e.states().iter().map(&map).collect::<Result<Vec<_>>>()?;
    let d = images[0].dim();
    let mut avg = ComplexMatrix::zeros(d, d);
    let mut conditional = T::zero();
    for (p, s) in e.probabilities().iter().zip(&images) {
        if s.dim() != d {
            return Err(Error::dim("ensemble images have different dimensions"));
        }
        avg = &avg + &s.matrix().scale_real(*p);
        conditional = conditional + *p * von_neumann_entropy(s)?;
    }
    Ok(matrix_entropy(&avg)? - conditional)
}

/// I(X;B) − I(X;E) for one ensemble: a lower bound on the one-shot private
/// information of `c`.
pub fn private_information_value<T: Real>(c: &KrausChannel<T>, e: &Ensemble<T>) -> Result<T> {
    let ixb = holevo_information(e, |s| c.output_state(s))?;
    let ixe = holevo_information(e, |s| c.environment_state(s))?;
    Ok(ixb - ixe)
}

/// Σ_x p_x |x⟩⟨x| ⊗ map(ρ_x) on subsystems `X` and the map's output.
pub fn cq_state<T, F>(e: &Ensemble<T>, map: F) -> Result<QuantumState<T>>
where
    T: Real,
    F: Fn(&QuantumState<T>) -> Result<QuantumState<T>>,
{
    let images = e.states().iter().map(&map).collect::<Result<Vec<_>>>()?;
    let n = e.len();
    let d = images[0].dim();
    let mut m = ComplexMatrix::zeros(n * d, n * d);
    for (x, (p, s)) in e.probabilities().iter().zip(&images).enumerate() {
        for i in 0..d {
            for j in 0..d {
                m[(x * d + i, x * d + j)] = s.matrix()[(i, j)].scale(*p);
            }
        }
    }
    let shape = SubsystemShape::single("X", n).concat(images[0].shape())?;
    Ok(QuantumState::trusted(m, shape))
}

fn subset_entropy<T: Real>(s: &QuantumState<T>, labels: &[&str]) -> Result<T> {
    if labels.is_empty() {
        return Ok(T::zero());
    }
    von_neumann_entropy(&s.partial_trace(labels)?)
}

/// I(X;B|C) = H(XC) + H(BC) − H(XBC) − H(C). `c` may be empty.
pub fn conditional_mutual_information<T: Real>(s: &QuantumState<T>, x: &[&str], b: &[&str], c: &[&str]) -> Result<T> {
    let all: Vec<&str> = x.iter().chain(b).chain(c).copied().collect();
    // positions() rejects repeats, so this catches overlap between the sets.
    s.shape().positions(&all)?;
    if x.is_empty() || b.is_empty() {
        return Err(Error::Labeling("conditional mutual information needs non-empty X and B".into()));
    }
    let hxc = subset_entropy(s, &cat(x, c))?;
    let hbc = subset_entropy(s, &cat(b, c))?;
    let hxbc = subset_entropy(s, &all)?;
    let hc = subset_entropy(s, c)?;
    Ok(hxc + hbc - hxbc - hc)
}

fn cat<'a>(a: &[&'a str], b: &[&'a str]) -> Vec<&'a str> {
    a.iter().chain(b).copied().collect()
}

/// I(X;B) = H(X) + H(B) − H(XB).
pub fn mutual_information<T: Real>(s: &QuantumState<T>, x: &[&str], b: &[&str]) -> Result<T> {
    conditional_mutual_information(s, x, b, &[])
}

/// ½(I(X;B|C) − I(X;E|C)) after sending subsystem `A` of `s` (labels `X`,
/// `A`, `C`) through `c`.
pub fn assisted_rate_lower_bound<T: Real>(c: &KrausChannel<T>, s: &QuantumState<T>) -> Result<T> {
    let shape = s.shape();
    for l in ["X", "A", "C"] {
        shape.position(l)?;
    }
    if shape.len() != 3 {
        return Err(Error::Labeling(format!("expected subsystems X, A, C, got {:?}", shape.labels())));
    }
    let out = c.extend_and_apply(s, "A", "B", "E")?;
    let ib = conditional_mutual_information(&out, &["X"], &["B"], &["C"])?;
    let ie = conditional_mutual_information(&out, &["X"], &["E"], &["C"])?;
    Ok(T::lit(0.5) * (ib - ie))
}

/// Binary entropy h₂(p) in bits.
pub fn binary_entropy<T: Real>(p: T) -> T {
    entropy_of_spectrum(&[p, T::one() - p]).unwrap_or_else(|_| T::nan())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{erasure_channel, horodecki_channel_4, identity_channel};

    fn basis(d: usize, k: usize) -> QuantumState<f64> {
        QuantumState::basis(SubsystemShape::single("A", d), k).unwrap()
    }

    #[test]
    fn entropy_of_pure_and_mixed_qubit() {
        assert_eq!(von_neumann_entropy(&basis(2, 1)).unwrap(), 0.0);
        let mixed = QuantumState::<f64>::maximally_mixed(SubsystemShape::single("A", 2));
        assert!((von_neumann_entropy(&mixed).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn binary_entropy_at_horodecki_q() {
        // h2(√2/(1+√2)); reference from a 50-digit evaluation of the closed form.
        let q = 2f64.sqrt() / (1.0 + 2f64.sqrt());
        let m = ComplexMatrix::diagonal(&[q, 1.0 - q]);
        let s = QuantumState::new(m, SubsystemShape::single("A", 2)).unwrap();
        assert!((von_neumann_entropy(&s).unwrap() - 0.978_660_084_350_159_4).abs() < 1e-12);
        assert!((binary_entropy(q) - 0.978_660_084_350_159_4).abs() < 1e-12);
    }

    #[test]
    fn spectrum_clamp_and_violation() {
        assert_eq!(entropy_of_spectrum(&[1.0, -5e-11]).unwrap(), 0.0);
        assert!(entropy_of_spectrum(&[1.0, -1e-9]).is_err());
    }

    #[test]
    fn identity_channel_on_mixed_qubit() {
        let rho = QuantumState::maximally_mixed(SubsystemShape::single("A", 2));
        assert!((coherent_information(&identity_channel::<f64>(2), &rho).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let rho = QuantumState::<f64>::maximally_mixed(SubsystemShape::single("A", 3));
        assert!(matches!(coherent_information(&identity_channel(2), &rho), Err(Error::Dimension(_))));
    }

    #[test]
    fn holevo_of_orthogonal_and_identical_states() {
        let e = Ensemble::new(vec![0.5, 0.5], vec![basis(2, 0), basis(2, 1)]).unwrap();
        assert!((holevo_information(&e, |s| Ok(s.clone())).unwrap() - 1.0).abs() < 1e-14);
        let same = Ensemble::new(vec![0.5, 0.5], vec![basis(2, 0), basis(2, 0)]).unwrap();
        assert!(holevo_information(&same, |s| Ok(s.clone())).unwrap().abs() < 1e-14);
    }

    #[test]
    fn ensemble_validation() {
        assert!(Ensemble::new(vec![0.5, 0.6], vec![basis(2, 0), basis(2, 1)]).is_err());
        assert!(Ensemble::new(vec![1.5, -0.5], vec![basis(2, 0), basis(2, 1)]).is_err());
        assert!(Ensemble::new(vec![0.5, 0.5], vec![basis(2, 0), basis(3, 1)]).is_err());
        assert!(Ensemble::new(vec![1.0], vec![]).is_err());
    }

    #[test]
    fn private_value_of_identity_channel() {
        let e = Ensemble::new(vec![0.5, 0.5], vec![basis(2, 0), basis(2, 1)]).unwrap();
        let v = private_information_value(&identity_channel::<f64>(2), &e).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
        let single = Ensemble::new(vec![1.0], vec![basis(2, 0)]).unwrap();
        assert!(
            private_information_value(
                &horodecki_channel_4::<f64>(),
                &Ensemble::new(vec![1.0], vec![basis(4, 2)]).unwrap()
            )
            .unwrap()
            .abs()
                < 1e-12
        );
        assert!(private_information_value(&identity_channel::<f64>(2), &single).unwrap().abs() < 1e-14);
    }

    #[test]
    fn cq_state_matches_holevo_formula() {
        let ch = horodecki_channel_4::<f64>();
        let half = QuantumState::maximally_mixed(SubsystemShape::single("A", 4));
        let e = Ensemble::new(vec![0.3, 0.7], vec![basis(4, 1), half]).unwrap();
        let cq = cq_state(&e, |s| ch.output_state(s)).unwrap();
        let block = mutual_information(&cq, &["X"], &["B"]).unwrap();
        let holevo = holevo_information(&e, |s| ch.output_state(s)).unwrap();
        assert!((block - holevo).abs() < 1e-9, "{block} vs {holevo}");
    }

    #[test]
    fn overlapping_label_sets_are_rejected() {
        let s = QuantumState::<f64>::maximally_mixed(SubsystemShape::new([("X", 2), ("B", 2)]).unwrap());
        assert!(conditional_mutual_information(&s, &["X"], &["X"], &[]).is_err());
        assert!(mutual_information(&s, &["X"], &["B"]).unwrap().abs() < 1e-14);
    }

    #[test]
    fn erasure_half_has_zero_coherent_information_on_basis_input() {
        let ch = erasure_channel::<f64>(4, 0.5).unwrap();
        let rho = QuantumState::maximally_mixed(SubsystemShape::single("A", 4));
        assert!(coherent_information(&ch, &rho).unwrap().abs() < 1e-12);
    }

    #[test]
    fn assisted_rate_requires_labels() {
        let s = QuantumState::<f64>::maximally_mixed(SubsystemShape::new([("X", 2), ("A", 2)]).unwrap());
        assert!(matches!(assisted_rate_lower_bound(&identity_channel(2), &s), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn assisted_rate_of_product_input_is_zero() {
        let x = QuantumState::<f64>::maximally_mixed(SubsystemShape::single("X", 2));
        let ac = QuantumState::maximally_mixed(SubsystemShape::new([("A", 4), ("C", 2)]).unwrap());
        let s = x.tensor(&ac).unwrap();
        let v = assisted_rate_lower_bound(&horodecki_channel_4(), &s).unwrap();
        assert!(v.abs() < 1e-12);
    }
}
