//! Exact and numerical machinery for symmetric structures in finite-dimensional
//! Hilbert spaces.
//!
//! The crate is organized around two scalar regimes that deliberately coexist:
//!
//! * **Exact**: arbitrary-precision rationals and cyclotomic numbers
//!   ([`exactmath`]), finite fields ([`finitefield`]), and exact linear algebra
//!   ([`linalg`]). Everything a Galois automorphism may act on is kept exact,
//!   because Galois actions are wildly discontinuous in the complex embedding.
//! * **Float**: dense complex matrices with tolerance-based eigen/rank kernels
//!   ([`linalg`]), used for eigenspace analysis, frame-potential search, and the
//!   combinatorial dependency mining where scale rules out exact arithmetic.
//!
//! On top of these sit the quantum structures themselves:
//!
//! * [`weylheisenberg`] — displacement operators in the ordinary flavor (any
//!   dimension) and the Galoisian flavor (odd prime powers), plus phase-point
//!   operators.
//! * [`clifford`] — symplectic unitary representations, the order-3 unitary
//!   driving dependency structure, the standard MUB construction, and the
//!   Möbius action on basis labels.
//! * [`gunitary`] — Galois-unitary operators `U_G = U_S ∘ g_Δ` with exact
//!   composition, inverses, conjugation, and a unitary-embedding simulation.
//! * [`sictools`] — SIC verification, the d=3 family, the K_t orthogonality
//!   measures, and a frame-potential fiducial search.
//! * [`lindep`] — linear-dependency mining in Weyl-Heisenberg orbits.
//! * [`mubcycler`] — MUB-cycler classification, exact eigenvectors, balanced
//!   states, Wigner grids, and orbit counting.

pub mod error;
pub mod exactmath;
pub mod finitefield;
pub mod linalg;
pub mod weylheisenberg;
pub mod clifford;
pub mod gunitary;
pub mod sictools;
pub mod lindep;
pub mod mubcycler;

pub use error::{Error, Result};
pub use exactmath::{CycloNum, GaloisAut, Rational};
