//! Separable Hamiltonian systems H(p, q) = ½ pᵀM p + V(q) and the state /
//! stepper-configuration types shared by the integrators.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type ScalarField = dyn Fn(&[f64]) -> f64 + Send + Sync;
type VectorField = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// A separable Hamiltonian system, equivalently the second-order system
/// q̈ = −M ∇V(q).
///
/// M must be symmetric but may be singular: the forces split into
/// g(q) = −∇V(q) (drives the momentum) and f(q) = M g(q) (drives the
/// positions), so a zero row of M simply freezes the matching coordinate.
#[derive(Clone)]
pub struct HamiltonianSystem {
    dim: usize,
    mass: Vec<f64>,
    potential: Arc<ScalarField>,
    grad_v: Arc<VectorField>,
}

impl fmt::Debug for HamiltonianSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HamiltonianSystem")
            .field("dim", &self.dim)
            .field("mass", &self.mass)
            .finish_non_exhaustive()
    }
}

impl HamiltonianSystem {
    /// Build a system from the mass matrix (row-major, d×d), the potential
    /// V and its analytic gradient ∇V. The mass matrix must be exactly
    /// symmetric.
    pub fn new(
        dim: usize,
        mass: Vec<f64>,
        potential: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        grad_v: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        if mass.len() != dim * dim || mass.iter().any(|m| !m.is_finite()) {
            return Err(Error::InvalidMassMatrix { dim });
        }
        for i in 0..dim {
            for j in 0..i {
                if mass[i * dim + j] != mass[j * dim + i] {
                    return Err(Error::InvalidMassMatrix { dim });
                }
            }
        }
        Ok(Self {
            dim,
            mass,
            potential: Arc::new(potential),
            grad_v: Arc::new(grad_v),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// M v.
    pub fn mass_apply(&self, v: &[f64]) -> Vec<f64> {
        let d = self.dim;
        (0..d)
            .map(|i| (0..d).map(|j| self.mass[i * d + j] * v[j]).sum())
            .collect()
    }

    pub fn potential(&self, q: &[f64]) -> f64 {
        (self.potential)(q)
    }

    pub fn grad_v(&self, q: &[f64]) -> Vec<f64> {
        (self.grad_v)(q)
    }

    /// g(q) = −∇V(q), the momentum-side force.
    pub fn g(&self, q: &[f64]) -> Vec<f64> {
        self.grad_v(q).into_iter().map(|x| -x).collect()
    }

    /// f(q) = −M ∇V(q) = M g(q), the position-side force.
    pub fn f(&self, q: &[f64]) -> Vec<f64> {
        self.mass_apply(&self.g(q))
    }

    /// Total energy H(p, q) = ½ pᵀM p + V(q).
    pub fn energy(&self, p: &[f64], q: &[f64]) -> f64 {
        let mp = self.mass_apply(p);
        let kinetic: f64 = p.iter().zip(&mp).map(|(&pi, &mpi)| pi * mpi).sum();
        0.5 * kinetic + self.potential(q)
    }

    /// Largest relative deviation between the analytic gradient and a
    /// central finite difference of V over the given sample points.
    pub fn gradient_check(&self, samples: &[Vec<f64>], eps: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for q in samples {
            let analytic = self.grad_v(q);
            for k in 0..self.dim {
                let mut plus = q.clone();
                let mut minus = q.clone();
                plus[k] += eps;
                minus[k] -= eps;
                let fd = (self.potential(&plus) - self.potential(&minus)) / (2.0 * eps);
                let scale = 1.0f64.max(analytic[k].abs());
                worst = worst.max((analytic[k] - fd).abs() / scale);
            }
        }
        worst
    }
}

/// A phase-space point (p, q) at time t.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub t: f64,
}

impl State {
    pub fn new(p: Vec<f64>, q: Vec<f64>, t: f64) -> Self {
        Self { p, q, t }
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn is_finite(&self) -> bool {
        self.p.iter().chain(&self.q).all(|x| x.is_finite()) && self.t.is_finite()
    }
}

/// Step size and stage-solver settings for the implicit stepper.
#[derive(Debug, Clone, Copy)]
pub struct StepperConfig {
    /// Step size; negative values step backwards in time.
    pub h: f64,
    /// Relative fixed-point tolerance, measured in the max norm against
    /// the scale 1 + ‖q₀‖_∞.
    pub stage_tol: f64,
    /// Iteration budget for the stage fixed point.
    pub max_iters: usize,
}

impl StepperConfig {
    pub fn new(h: f64) -> Result<Self> {
        Self::with_tolerance(h, 1e-14, 100)
    }

    pub fn with_tolerance(h: f64, stage_tol: f64, max_iters: usize) -> Result<Self> {
        if h == 0.0 || !h.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "step size must be finite and nonzero, got {h}"
            )));
        }
        if stage_tol.is_nan() || stage_tol <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "stage tolerance must be positive, got {stage_tol}"
            )));
        }
        if max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        Ok(Self {
            h,
            stage_tol,
            max_iters,
        })
    }
}
