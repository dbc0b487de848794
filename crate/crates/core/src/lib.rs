//! Relative K₂ of square-zero ideals in finite commutative algebras.
//!
//! Two independent computations are provided and cross-checked:
//!
//! * the tensor model `J/I ⊗ Ω`, built from Kähler differentials
//!   ([`kahler`], [`algebra`]);
//! * a Dennis–Stein presentation `D(R, I)` enumerated from the symbol
//!   relations ([`dennis_stein`]).
//!
//! [`k2`] turns the structural statements about `K₂(𝔽_p[G], (G̃))` into
//! executable checks, and [`lattice`] materializes the integral quotient
//! rings `ℤ[G]/I`, `ℤ[G]/J` for elementary abelian 2-groups.

pub mod algebra;
pub mod dennis_stein;
pub mod error;
pub mod group_ring;
pub mod k2;
pub mod kahler;
pub mod lattice;
pub mod linear;

pub use error::{Error, Result};
pub use group_ring::{GroupSpec, Monomial, RingElement};
pub use linear::{AbelianGroupStructure, MatrixModP, MatrixZ};
