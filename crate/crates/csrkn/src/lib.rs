//! Symplectic Runge-Kutta-Nyström (RKN) methods for separable Hamiltonian
//! systems, constructed from continuous-stage coefficient functions expanded
//! in the shifted Legendre basis.
//!
//! The construction pipeline is:
//!
//! 1. [`scheme::build_order_scheme`] assembles a continuous-stage coefficient
//!    function `Ā(τ,σ)` as a truncated tensor-Legendre series satisfying the
//!    moment conditions `CN(η)` and `DN(ζ)`.
//! 2. [`scheme::build_symplectic_family`] specialises to the one-parameter
//!    symplectic families of orders 4, 6 and 8.
//! 3. [`tableau::discretize`] reduces a continuous-stage scheme to a finite
//!    Butcher tableau through Gauss-Legendre quadrature, preserving both the
//!    order and the symplecticity.
//! 4. [`integrator`] steps separable Hamiltonian systems `q̈ = -M ∇V(q)` with
//!    any such tableau; [`problems`] supplies benchmark systems and
//!    [`experiments`] runs convergence and energy-drift studies over them.

// index-based loops mirror the stage/matrix notation throughout
#![allow(clippy::needless_range_loop)]

pub mod closed_form;
pub mod error;
pub mod experiments;
pub mod integrator;
pub mod legendre;
pub mod problems;
pub mod quadrature;
pub mod scheme;
pub mod series;
pub mod system;
pub mod tableau;

pub use error::Error;
pub use quadrature::QuadratureRule;
pub use scheme::CsRknScheme;
pub use series::LegendreSeries2D;
pub use system::{HamiltonianSystem, State, StepperConfig};
pub use tableau::RknTableau;

/// Schema version stamped into every JSON document this crate emits.
pub const SPEC_VERSION: u32 = 1;
