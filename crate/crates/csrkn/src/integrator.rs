//! Implicit RKN time stepping for separable Hamiltonian systems, plus the
//! finite-difference symplecticity test and a classical RK4 baseline used
//! only for drift contrast.
//!
//! One step of the s-stage method with tableau (ā, b̄, b, c) solves
//!
//!   Q_i = q₀ + h c_i M p₀ + h² Σ_j ā_ij f(Q_j),     f(q) = −M ∇V(q),
//!
//! by fixed-point iteration, then updates
//!
//!   q₁ = q₀ + h M p₀ + h² Σ_i b̄_i f(Q_i),
//!   p₁ = p₀ + h Σ_i b_i g(Q_i),                     g(q) = −∇V(q).
//!
//! The fixed point contracts when h² ‖M ∇²V‖ ‖ā‖ < 1; outside that regime
//! the step reports non-convergence instead of silently degrading.

use crate::error::{Error, Result};
use crate::system::{HamiltonianSystem, State, StepperConfig};
use crate::tableau::RknTableau;

/// One recorded sample of a trajectory.
#[derive(Debug, Clone)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub energy: f64,
    /// |H − H₀| / |H₀| (absolute error when H₀ = 0).
    pub energy_rel_err: f64,
}

/// A strided record of an integration run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    points: Vec<TrajectoryPoint>,
}

impl Trajectory {
    pub fn points(&self) -> &[TrajectoryPoint] {
        &self.points
    }

    pub fn final_state(&self) -> State {
        let last = self.points.last().expect("a trajectory is never empty");
        State::new(last.p.clone(), last.q.clone(), last.t)
    }

    pub fn max_energy_rel_err(&self) -> f64 {
        self.points
            .iter()
            .map(|pt| pt.energy_rel_err)
            .fold(0.0, f64::max)
    }

    /// CSV with the fixed header `t,p_1..p_d,q_1..q_d,H,H_rel_err` and
    /// floats at 17 significant digits.
    pub fn to_csv(&self) -> String {
        let d = self.points[0].q.len();
        let mut out = String::from("t");
        for k in 1..=d {
            out.push_str(&format!(",p_{k}"));
        }
        for k in 1..=d {
            out.push_str(&format!(",q_{k}"));
        }
        out.push_str(",H,H_rel_err\n");
        for pt in &self.points {
            out.push_str(&format!("{:.16e}", pt.t));
            for v in pt.p.iter().chain(&pt.q) {
                out.push_str(&format!(",{v:.16e}"));
            }
            out.push_str(&format!(",{:.16e},{:.16e}\n", pt.energy, pt.energy_rel_err));
        }
        out
    }
}

fn rel_energy_err(energy: f64, reference: f64) -> f64 {
    let denom = if reference.abs() > 0.0 {
        reference.abs()
    } else {
        1.0
    };
    (energy - reference).abs() / denom
}

fn check_dims(sys: &HamiltonianSystem, state: &State) -> Result<()> {
    if state.p.len() != sys.dim() || state.q.len() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            got: state.p.len().max(state.q.len()),
        });
    }
    Ok(())
}

/// Advance one step of the implicit RKN method.
pub fn step(
    sys: &HamiltonianSystem,
    tableau: &RknTableau,
    s0: &State,
    cfg: &StepperConfig,
) -> Result<State> {
    check_dims(sys, s0)?;
    let d = sys.dim();
    let s = tableau.stages();
    let h = cfg.h;
    let c = tableau.c();
    let a_bar = tableau.a_bar();

    let mp0 = sys.mass_apply(&s0.p);
    let base: Vec<Vec<f64>> = (0..s)
        .map(|i| (0..d).map(|k| s0.q[k] + h * c[i] * mp0[k]).collect())
        .collect();

    let scale = 1.0 + s0.q.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let mut stages = base.clone();
    let mut residual = f64::INFINITY;
    let mut converged = false;
    for _ in 0..cfg.max_iters {
        let forces: Vec<Vec<f64>> = stages.iter().map(|q| sys.f(q)).collect();
        let mut delta: f64 = 0.0;
        for i in 0..s {
            for k in 0..d {
                let mut acc = 0.0;
                for j in 0..s {
                    acc += a_bar[i][j] * forces[j][k];
                }
                let updated = base[i][k] + h * h * acc;
                if !updated.is_finite() {
                    return Err(Error::NonFiniteStage { stage: i, t: s0.t });
                }
                delta = delta.max((updated - stages[i][k]).abs());
                stages[i][k] = updated;
            }
        }
        residual = delta / scale;
        if residual <= cfg.stage_tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::StageNonConvergence {
            iterations: cfg.max_iters,
            residual,
        });
    }

    let g_stages: Vec<Vec<f64>> = stages.iter().map(|q| sys.g(q)).collect();
    let f_stages: Vec<Vec<f64>> = g_stages.iter().map(|g| sys.mass_apply(g)).collect();
    let b = tableau.b();
    let b_bar = tableau.b_bar();
    let mut q1 = vec![0.0; d];
    let mut p1 = vec![0.0; d];
    for k in 0..d {
        let mut fq = 0.0;
        let mut gp = 0.0;
        for i in 0..s {
            fq += b_bar[i] * f_stages[i][k];
            gp += b[i] * g_stages[i][k];
        }
        q1[k] = s0.q[k] + h * mp0[k] + h * h * fq;
        p1[k] = s0.p[k] + h * gp;
    }
    let next = State::new(p1, q1, s0.t + h);
    if !next.is_finite() {
        return Err(Error::NonFiniteStage { stage: 0, t: s0.t });
    }
    Ok(next)
}

/// Apply `n_steps` steps, recording the initial state, every `stride`-th
/// step and the final state.
pub fn integrate(
    sys: &HamiltonianSystem,
    tableau: &RknTableau,
    s0: &State,
    cfg: &StepperConfig,
    n_steps: usize,
    stride: usize,
) -> Result<Trajectory> {
    check_dims(sys, s0)?;
    if stride == 0 {
        return Err(Error::InvalidArgument("stride must be at least 1".into()));
    }
    let e0 = sys.energy(&s0.p, &s0.q);
    let mut points = Vec::with_capacity(n_steps / stride + 2);
    points.push(TrajectoryPoint {
        t: s0.t,
        p: s0.p.clone(),
        q: s0.q.clone(),
        energy: e0,
        energy_rel_err: 0.0,
    });
    let mut state = s0.clone();
    for index in 1..=n_steps {
        state = step(sys, tableau, &state, cfg).map_err(|e| Error::StepFailed {
            step: index,
            source: Box::new(e),
        })?;
        if index % stride == 0 || index == n_steps {
            let energy = sys.energy(&state.p, &state.q);
            points.push(TrajectoryPoint {
                t: state.t,
                p: state.p.clone(),
                q: state.q.clone(),
                energy,
                energy_rel_err: rel_energy_err(energy, e0),
            });
        }
    }
    Ok(Trajectory { points })
}

/// Central-difference Jacobian of an arbitrary one-step map in the packed
/// phase-space coordinates z = (p, q).
pub fn map_jacobian<F>(map: F, s0: &State, fd_eps: f64) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&State) -> Result<State>,
{
    assert!(fd_eps > 0.0, "finite-difference step must be positive");
    let d = s0.dim();
    let n = 2 * d;
    let mut jacobian = vec![vec![0.0; n]; n];
    for col in 0..n {
        let mut plus = s0.clone();
        let mut minus = s0.clone();
        if col < d {
            plus.p[col] += fd_eps;
            minus.p[col] -= fd_eps;
        } else {
            plus.q[col - d] += fd_eps;
            minus.q[col - d] -= fd_eps;
        }
        let fwd = map(&plus)?;
        let bwd = map(&minus)?;
        for row in 0..n {
            let (hi, lo) = if row < d {
                (fwd.p[row], bwd.p[row])
            } else {
                (fwd.q[row - d], bwd.q[row - d])
            };
            jacobian[row][col] = (hi - lo) / (2.0 * fd_eps);
        }
    }
    Ok(jacobian)
}

/// ‖JᵀSJ − S‖_F for the canonical skew matrix S = [[0, I], [−I, 0]].
pub fn symplectic_defect_of_jacobian(jacobian: &[Vec<f64>]) -> f64 {
    let n = jacobian.len();
    let d = n / 2;
    // (S J)[i] = J[d+i] for i < d, −J[i−d] for i ≥ d
    let sj: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            if i < d {
                jacobian[d + i].clone()
            } else {
                jacobian[i - d].iter().map(|x| -x).collect()
            }
        })
        .collect();
    let mut frob = 0.0;
    for r in 0..n {
        for k in 0..n {
            let mut acc = 0.0;
            for i in 0..n {
                acc += jacobian[i][r] * sj[i][k];
            }
            let s_rk = if k >= d && r == k - d {
                1.0
            } else if r >= d && k == r - d {
                -1.0
            } else {
                0.0
            };
            let diff = acc - s_rk;
            frob += diff * diff;
        }
    }
    frob.sqrt()
}

/// Symplecticity defect of an arbitrary one-step map.
pub fn map_symplecticity_defect<F>(map: F, s0: &State, fd_eps: f64) -> Result<f64>
where
    F: Fn(&State) -> Result<State>,
{
    let jacobian = map_jacobian(map, s0, fd_eps)?;
    Ok(symplectic_defect_of_jacobian(&jacobian))
}

/// Symplecticity defect of one RKN step: the finite-difference Jacobian of
/// (p₀, q₀) ↦ (p₁, q₁) is tested against JᵀSJ = S. For symplectic tableaux
/// the result is FD truncation plus stage-solver noise.
pub fn symplecticity_defect(
    sys: &HamiltonianSystem,
    tableau: &RknTableau,
    s0: &State,
    cfg: &StepperConfig,
    fd_eps: f64,
) -> Result<f64> {
    map_symplecticity_defect(|state| step(sys, tableau, state, cfg), s0, fd_eps)
}

/// One classical RK4 step on ṗ = g(q), q̇ = M p. Non-symplectic; bundled as
/// a baseline for drift contrast only.
pub fn rk4_step(sys: &HamiltonianSystem, s0: &State, h: f64) -> State {
    let deriv = |p: &[f64], q: &[f64]| -> (Vec<f64>, Vec<f64>) { (sys.g(q), sys.mass_apply(p)) };
    let d = sys.dim();
    let add = |base: &[f64], k: &[f64], w: f64| -> Vec<f64> {
        base.iter().zip(k).map(|(&b, &kk)| b + w * kk).collect()
    };
    let (k1p, k1q) = deriv(&s0.p, &s0.q);
    let (k2p, k2q) = deriv(&add(&s0.p, &k1p, 0.5 * h), &add(&s0.q, &k1q, 0.5 * h));
    let (k3p, k3q) = deriv(&add(&s0.p, &k2p, 0.5 * h), &add(&s0.q, &k2q, 0.5 * h));
    let (k4p, k4q) = deriv(&add(&s0.p, &k3p, h), &add(&s0.q, &k3q, h));
    let mut p1 = vec![0.0; d];
    let mut q1 = vec![0.0; d];
    for k in 0..d {
        p1[k] = s0.p[k] + h / 6.0 * (k1p[k] + 2.0 * k2p[k] + 2.0 * k3p[k] + k4p[k]);
        q1[k] = s0.q[k] + h / 6.0 * (k1q[k] + 2.0 * k2q[k] + 2.0 * k3q[k] + k4q[k]);
    }
    State::new(p1, q1, s0.t + h)
}

/// RK4 trajectory with the same recording rules as [`integrate`].
pub fn rk4_integrate(
    sys: &HamiltonianSystem,
    s0: &State,
    h: f64,
    n_steps: usize,
    stride: usize,
) -> Result<Trajectory> {
    check_dims(sys, s0)?;
    if stride == 0 {
        return Err(Error::InvalidArgument("stride must be at least 1".into()));
    }
    let e0 = sys.energy(&s0.p, &s0.q);
    let mut points = Vec::with_capacity(n_steps / stride + 2);
    points.push(TrajectoryPoint {
        t: s0.t,
        p: s0.p.clone(),
        q: s0.q.clone(),
        energy: e0,
        energy_rel_err: 0.0,
    });
    let mut state = s0.clone();
    for index in 1..=n_steps {
        state = rk4_step(sys, &state, h);
        if !state.is_finite() {
            return Err(Error::StepFailed {
                step: index,
                source: Box::new(Error::NonFiniteStage {
                    stage: 0,
                    t: state.t,
                }),
            });
        }
        if index % stride == 0 || index == n_steps {
            let energy = sys.energy(&state.p, &state.q);
            points.push(TrajectoryPoint {
                t: state.t,
                p: state.p.clone(),
                q: state.q.clone(),
                energy,
                energy_rel_err: rel_energy_err(energy, e0),
            });
        }
    }
    Ok(Trajectory { points })
}
