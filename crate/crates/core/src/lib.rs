//! Exact construction of Nichols algebras of diagonal type, their
//! bosonizations over finite abelian groups, and unrolled Hopf algebras
//! `(B(V) # kΓ) ⋊ U(g)`, together with verifiers for the Hopf axioms and the
//! module/comodule compatibility conditions at a finite truncation degree.

pub mod braided_space;
pub mod hopf_core;
pub mod linalg;
pub mod nichols;
pub mod pairing;
pub mod scalars;
pub mod tensor_algebra;
pub mod unrolled;

pub use scalars::{root_of_unity, CycScalar, Rational, RootOfUnity};
