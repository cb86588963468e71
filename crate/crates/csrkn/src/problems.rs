//! Benchmark separable Hamiltonian systems with known structure.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::system::{HamiltonianSystem, State};

/// Closed-form flow: maps (initial state, elapsed time) to the exact state.
pub type ReferenceFlow = Arc<dyn Fn(&State, f64) -> State + Send + Sync>;

/// A named benchmark problem.
#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub system: HamiltonianSystem,
    pub initial: State,
    /// Exact flow when one is known; convergence studies fall back to a
    /// high-accuracy self-refinement reference otherwise.
    pub reference: Option<ReferenceFlow>,
    pub period: Option<f64>,
}

impl std::fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("initial", &self.initial)
            .field("period", &self.period)
            .field("has_reference", &self.reference.is_some())
            .finish()
    }
}

fn identity_mass(d: usize) -> Vec<f64> {
    let mut mass = vec![0.0; d * d];
    for i in 0..d {
        mass[i * d + i] = 1.0;
    }
    mass
}

/// Unit harmonic oscillator: M = 1, V = q²/2, exact rotation flow.
pub fn harmonic_oscillator() -> ProblemSpec {
    let system =
        HamiltonianSystem::new(1, vec![1.0], |q| 0.5 * q[0] * q[0], |q| vec![q[0]]).unwrap();
    let reference: ReferenceFlow = Arc::new(|s0: &State, t: f64| {
        let (sin, cos) = t.sin_cos();
        State::new(
            vec![s0.p[0] * cos - s0.q[0] * sin],
            vec![s0.q[0] * cos + s0.p[0] * sin],
            s0.t + t,
        )
    });
    ProblemSpec {
        name: "harmonic".into(),
        system,
        initial: State::new(vec![0.0], vec![1.0], 0.0),
        reference: Some(reference),
        period: Some(2.0 * std::f64::consts::PI),
    }
}

/// Planar pendulum: M = 1, V = −cos q.
pub fn pendulum() -> ProblemSpec {
    let system =
        HamiltonianSystem::new(1, vec![1.0], |q| -q[0].cos(), |q| vec![q[0].sin()]).unwrap();
    ProblemSpec {
        name: "pendulum".into(),
        system,
        initial: State::new(vec![0.0], vec![1.0], 0.0),
        reference: None,
        period: None,
    }
}

/// Kepler two-body problem with the standard perihelion start
/// q = (1−e, 0), p = (0, √((1+e)/(1−e))), which fixes H = −1/2, semi-major
/// axis 1 and period 2π.
pub fn kepler(eccentricity: f64) -> Result<ProblemSpec> {
    if !(0.0..1.0).contains(&eccentricity) {
        return Err(Error::InvalidArgument(format!(
            "Kepler eccentricity must lie in [0, 1), got {eccentricity}"
        )));
    }
    let system = HamiltonianSystem::new(
        2,
        identity_mass(2),
        |q| -1.0 / (q[0] * q[0] + q[1] * q[1]).sqrt(),
        |q| {
            let r2 = q[0] * q[0] + q[1] * q[1];
            let r3 = r2 * r2.sqrt();
            vec![q[0] / r3, q[1] / r3]
        },
    )
    .unwrap();
    let e = eccentricity;
    Ok(ProblemSpec {
        name: format!("kepler-e{e}"),
        system,
        initial: State::new(
            vec![0.0, ((1.0 + e) / (1.0 - e)).sqrt()],
            vec![1.0 - e, 0.0],
            0.0,
        ),
        reference: None,
        period: Some(2.0 * std::f64::consts::PI),
    })
}

/// Angular momentum L = q₁p₂ − q₂p₁, conserved by every central-force flow.
pub fn angular_momentum(state: &State) -> f64 {
    state.q[0] * state.p[1] - state.q[1] * state.p[0]
}

/// Hénon-Heiles: V = ½(q₁²+q₂²) + q₁²q₂ − q₂³/3.
pub fn henon_heiles() -> ProblemSpec {
    let system = HamiltonianSystem::new(
        2,
        identity_mass(2),
        |q| 0.5 * (q[0] * q[0] + q[1] * q[1]) + q[0] * q[0] * q[1] - q[1] * q[1] * q[1] / 3.0,
        |q| vec![q[0] + 2.0 * q[0] * q[1], q[1] + q[0] * q[0] - q[1] * q[1]],
    )
    .unwrap();
    ProblemSpec {
        name: "henon-heiles".into(),
        system,
        initial: State::new(vec![0.1, 0.1], vec![0.1, 0.1], 0.0),
        reference: None,
        period: None,
    }
}

/// Singular-mass problem: M = diag(1, 0) with V = ½|q|². The second
/// position coordinate is frozen while its momentum keeps evolving, so the
/// flow stays exactly solvable.
pub fn frozen_direction() -> ProblemSpec {
    let system = HamiltonianSystem::new(
        2,
        vec![1.0, 0.0, 0.0, 0.0],
        |q| 0.5 * (q[0] * q[0] + q[1] * q[1]),
        |q| q.to_vec(),
    )
    .unwrap();
    let reference: ReferenceFlow = Arc::new(|s0: &State, t: f64| {
        let (sin, cos) = t.sin_cos();
        State::new(
            vec![s0.p[0] * cos - s0.q[0] * sin, s0.p[1] - t * s0.q[1]],
            vec![s0.q[0] * cos + s0.p[0] * sin, s0.q[1]],
            s0.t + t,
        )
    });
    ProblemSpec {
        name: "frozen".into(),
        system,
        initial: State::new(vec![0.3, 0.7], vec![1.0, 0.5], 0.0),
        reference: Some(reference),
        period: None,
    }
}

/// The full benchmark catalog.
pub fn catalog() -> Vec<ProblemSpec> {
    vec![
        harmonic_oscillator(),
        pendulum(),
        kepler(0.3).unwrap(),
        kepler(0.6).unwrap(),
        henon_heiles(),
        frozen_direction(),
    ]
}

/// Names of the catalog problems, for usage messages.
pub fn catalog_names() -> Vec<String> {
    catalog().into_iter().map(|p| p.name).collect()
}

/// Look a problem up by name. Kepler problems accept any eccentricity
/// through the `kepler-e<value>` form.
pub fn lookup(name: &str) -> Result<ProblemSpec> {
    if let Some(found) = catalog().into_iter().find(|p| p.name == name) {
        return Ok(found);
    }
    if let Some(rest) = name.strip_prefix("kepler-e") {
        if let Ok(e) = rest.parse::<f64>() {
            return kepler(e);
        }
    }
    Err(Error::UnknownProblem {
        name: name.to_string(),
        available: catalog_names().join(", "),
    })
}
