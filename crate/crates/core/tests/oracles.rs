//! Linear-algebra primitives checked against independent implementations:
//! nalgebra for spectra, explicit index loops for partial operations.

use nalgebra::{Complex, DMatrix};
use qcap_core::linops::{hermitian_eigen, hermitian_eigenvalues, hermitian_eigenvalues_jacobi, SubsystemShape};
use qcap_core::random::{gaussian_matrix, random_pure_state, random_state, rng_from_seed};
use qcap_core::{ComplexMatrix64, QuantumState64};

fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix64 {
    let mut rng = rng_from_seed(seed);
    let g: ComplexMatrix64 = gaussian_matrix(n, n, &mut rng);
    (&g + &g.adjoint()).scale_real(0.5)
}

fn to_nalgebra(m: &ComplexMatrix64) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

fn nalgebra_spectrum(m: &ComplexMatrix64) -> Vec<f64> {
    let mut v: Vec<f64> = to_nalgebra(m).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn eigenvalues_match_nalgebra() {
    for (k, n) in [1, 2, 3, 5, 8, 16, 33, 64].into_iter().enumerate() {
        let m = random_hermitian(n, 100 + k as u64);
        let reference = nalgebra_spectrum(&m);
        let scale = reference.iter().fold(1.0f64, |a, x| a.max(x.abs()));
        assert!(max_diff(&hermitian_eigenvalues(&m).unwrap(), &reference) <= 1e-11 * scale, "QL, n = {n}");
        assert!(max_diff(&hermitian_eigenvalues_jacobi(&m).unwrap(), &reference) <= 1e-11 * scale, "Jacobi, n = {n}");
    }
}

#[test]
fn eigenvectors_reconstruct_and_match_nalgebra_spectrum() {
    let m = random_hermitian(24, 7);
    let e = hermitian_eigen(&m).unwrap();
    assert!(max_diff(&e.values, &nalgebra_spectrum(&m)) < 1e-11);
    assert!(e.reconstruct().max_abs_diff(&m) < 1e-11);
    let gram = &e.vectors.adjoint() * &e.vectors;
    assert!(gram.max_abs_diff(&ComplexMatrix64::identity(24)) < 1e-12);
}

#[test]
fn degenerate_spectrum_matches_nalgebra() {
    // Rank-2 density matrix embedded in dimension 10: eight zero eigenvalues.
    let mut rng = rng_from_seed(11);
    let g: ComplexMatrix64 = gaussian_matrix(10, 2, &mut rng);
    let m = &g * &g.adjoint();
    let ours = hermitian_eigenvalues(&m).unwrap();
    assert!(max_diff(&ours, &nalgebra_spectrum(&m)) < 1e-11);
    assert!(ours[..8].iter().all(|x| x.abs() < 1e-11));
}

fn loop_partial_trace_middle(s: &QuantumState64, da: usize, db: usize, dc: usize) -> ComplexMatrix64 {
    // Keep A and C, trace B, summing over the B index explicitly.
    let m = s.matrix();
    ComplexMatrix64::from_fn(da * dc, da * dc, |row, col| {
        let (a, c) = (row / dc, row % dc);
        let (a2, c2) = (col / dc, col % dc);
        (0..db).map(|b| m[((a * db + b) * dc + c, (a2 * db + b) * dc + c2)]).sum()
    })
}

#[test]
fn partial_trace_matches_index_contraction() {
    let (da, db, dc) = (2, 3, 2);
    let shape = SubsystemShape::new([("A", da), ("B", db), ("C", dc)]).unwrap();
    let mut rng = rng_from_seed(21);
    let s: QuantumState64 = random_state(shape, &mut rng);
    let ours = s.partial_trace(&["A", "C"]).unwrap();
    assert!(ours.matrix().max_abs_diff(&loop_partial_trace_middle(&s, da, db, dc)) < 1e-15);

    // The keep list is a set: kept factors stay in their original order.
    let swapped = s.partial_trace(&["C", "A"]).unwrap();
    assert_eq!(swapped.shape().labels(), ["A", "C"]);
    assert!(swapped.matrix().max_abs_diff(ours.matrix()) < 1e-15);
}

#[test]
fn three_qubit_pure_reductions_match_index_contraction() {
    let shape = SubsystemShape::new([("A", 2), ("B", 2), ("C", 2)]).unwrap();
    let mut rng = rng_from_seed(23);
    let psi = random_pure_state::<f64, _>(shape, &mut rng);
    let amp = psi.amplitudes();
    let rho = psi.density();
    for (label, stride) in [("A", 4), ("B", 2), ("C", 1)] {
        let expected = ComplexMatrix64::from_fn(2, 2, |i, j| {
            let mut acc = Complex::new(0.0, 0.0);
            for rest in 0..4 {
                // Insert the kept bit at `stride` into the 2-bit remainder.
                let high = rest / stride * stride * 2;
                let low = rest % stride;
                acc += amp[high + i * stride + low] * amp[high + j * stride + low].conj();
            }
            acc
        });
        let ours = rho.partial_trace(&[label]).unwrap();
        assert!(ours.matrix().max_abs_diff(&expected) < 1e-15, "{label}");
        assert!(psi.reduced_state(&[label]).unwrap().matrix().max_abs_diff(&expected) < 1e-14, "{label}");
    }
}

#[test]
fn partial_transpose_matches_index_swap() {
    let (da, db) = (3, 2);
    let shape = SubsystemShape::new([("A", da), ("B", db)]).unwrap();
    let mut rng = rng_from_seed(22);
    let s: QuantumState64 = random_state(shape, &mut rng);
    let m = s.matrix();
    let expected = ComplexMatrix64::from_fn(da * db, da * db, |row, col| {
        let (a, b) = (row / db, row % db);
        let (a2, b2) = (col / db, col % db);
        m[(a * db + b2, a2 * db + b)]
    });
    assert!(s.partial_transpose(&["B"]).unwrap().max_abs_diff(&expected) < 1e-15);
}
