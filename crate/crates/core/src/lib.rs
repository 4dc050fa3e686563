//! Exact computations with the small quantum Borel algebra at a root of unity,
//! its quasi-Hopf subalgebra, twists and associators, and the Drinfeld double.

pub mod algebra;
pub mod borel;
pub mod cocycle;
pub mod cyclotomic;
pub mod double;
pub mod error;
pub mod export;
pub mod idempotent;
pub mod lie;
pub mod twist;
pub mod verify;

pub use algebra::{Algebra, Element, HopfAlgebra, Monomial, TensorElement};
pub use borel::{build_uqb, AqBasis, Uqb};
pub use cocycle::{is_coboundary, restrict_phi, smith_normal_form, AdditiveCochain, CoboundaryVerdict, IntegerMatrixSnf};
pub use cyclotomic::{CycScalar, CyclotomicField};
pub use double::{build_double, identify_generators, DoubleElement, DoubleKey, DrinfeldDouble, DualFunctional};
pub use error::{Error, Result};
pub use export::{export, ExportDocument, ExportTarget};
pub use idempotent::IdempotentAlgebra;
pub use lie::{lie_datum, validate_params, CartanType, LieDatum, ParamViolation};
pub use twist::{build_twist_j, closed_form_phi, Associator, TwistJ, TwistedAq};
pub use verify::{run_verification, CheckStatus, VerificationReport, VerifyOptions};
