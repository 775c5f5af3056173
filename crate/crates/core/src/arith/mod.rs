//! Exact scalars, polynomials, matrices and the kernels built on them.

pub mod gb;
pub mod hnf;
pub mod ideal;
pub mod linalg;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod ring;
pub mod snf;

pub use ideal::{groebner_basis, ideal_membership, is_regular_sequence, radical_membership, Ideal};
pub use linalg::{kernel, solve, LinearRing, Span};
pub use matrix::Matrix;
pub use poly::{Monomial, Poly, PolyRing};
pub use rational::Rat;
pub use ring::{Field, Integers, MonomialOrder, PrimeField, Rationals, Ring, RingDescriptor};
pub use snf::{smith_normal_form, Euclidean, Smith};

/// Rings the module layer works over: effective submodule arithmetic plus a
/// Euclidean structure where one exists.
pub trait ExactRing: LinearRing + Euclidean {}

impl<R: LinearRing + Euclidean> ExactRing for R {}
