//! Finite-dimensional quantum channels in Kraus form and the entropic
//! quantities needed to exhibit superactivation of quantum capacity.
//!
//! The numerical core is generic over the real scalar type (see [`Real`]);
//! `f64` is the working precision and the aliases below name the concrete
//! types most callers want.

// `!(x <= tol)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channels;
pub mod constructions;
pub mod error;
pub mod information;
pub mod linops;
pub mod optimizer;
pub mod parallel;
pub mod random;
pub mod scalar;
pub mod selftest;

pub use error::{Error, Result};
pub use scalar::Real;

pub use channels::KrausChannel;
pub use information::Ensemble;
pub use linops::{ComplexMatrix, PureStateVector, QuantumState, SubsystemShape};

/// Double-precision complex scalar.
pub type C64 = num_complex::Complex<f64>;

pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type QuantumState64 = QuantumState<f64>;
pub type PureStateVector64 = PureStateVector<f64>;
pub type KrausChannel64 = KrausChannel<f64>;
pub type Ensemble64 = Ensemble<f64>;

pub type ComplexMatrix32 = ComplexMatrix<f32>;
pub type QuantumState32 = QuantumState<f32>;
pub type KrausChannel32 = KrausChannel<f32>;
