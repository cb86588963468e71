//! Convergence-order and long-time energy-drift studies over the benchmark
//! problems, with machine-readable reports.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrator::{integrate, rk4_step, step};
use crate::problems::ProblemSpec;
use crate::quadrature::gauss_legendre;
use crate::scheme::build_symplectic_family;
use crate::system::{State, StepperConfig};
use crate::tableau::{discretize, RknTableau};

/// Errors below this floor sit in rounding noise and are excluded from
/// slope fits (100 machine epsilons).
pub const ERROR_FLOOR: f64 = 100.0 * f64::EPSILON;

/// Hard guard on the number of steps a drift run may take.
pub const MAX_STEP_RATIO: f64 = 1e8;

/// Result of one step-size refinement study for one method.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub method: String,
    pub problem: String,
    pub step_sizes: Vec<f64>,
    /// Final-time max-norm error of (p, q) against the reference.
    pub errors: Vec<f64>,
    pub fitted_slope: f64,
    pub claimed_order: u32,
    /// fitted_slope − claimed_order, reported as-is, never clamped.
    pub slope_gap: f64,
    /// Number of (h, error) points above the rounding floor that entered
    /// the fit.
    pub points_used: usize,
}

/// Running maximum of the relative energy error at one checkpoint time.
#[derive(Debug, Clone, Serialize)]
pub struct DriftCheckpoint {
    pub t: f64,
    pub max_rel_energy_err: f64,
}

/// Result of one long-horizon energy-drift run.
#[derive(Debug, Clone, Serialize)]
pub struct DriftReport {
    pub method: String,
    pub problem: String,
    pub h: f64,
    pub horizon: f64,
    /// Checkpoints at strictly increasing times T·10⁻ᵏ.
    pub checkpoints: Vec<DriftCheckpoint>,
    /// (max error so far at T) / (max error so far at T/100); bounded near
    /// one for a symplectic method, large under secular drift.
    pub drift_ratio: f64,
}

/// Least-squares slope of ln(error) against ln(h).
pub fn fit_slope(points: &[(f64, f64)]) -> f64 {
    if points.len() < 2 {
        return f64::NAN;
    }
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(h, err) in points {
        let x = h.ln();
        let y = err.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

fn max_norm_diff(a: &State, b: &State) -> f64 {
    a.p.iter()
        .zip(&b.p)
        .chain(a.q.iter().zip(&b.q))
        .map(|(&x, &y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn family_tableau(order: u32, theta: f64) -> Result<RknTableau> {
    Ok(discretize(
        &build_symplectic_family(order, theta)?,
        &gauss_legendre((order / 2) as usize)?,
    ))
}

/// Reference state at t_final: the exact flow when the problem has one,
/// otherwise a self-refinement run of the order-8 family at h_min/20.
fn reference_state(problem: &ProblemSpec, t_final: f64, h_min: f64) -> Result<State> {
    if let Some(flow) = &problem.reference {
        return Ok(flow(&problem.initial, t_final));
    }
    let fine = h_min / 20.0;
    let n = (t_final / fine).ceil().max(1.0) as usize;
    let h_ref = t_final / n as f64;
    let tableau = family_tableau(8, 0.0)?;
    let cfg = StepperConfig::new(h_ref)?;
    let trajectory = integrate(&problem.system, &tableau, &problem.initial, &cfg, n, n)?;
    Ok(trajectory.final_state())
}

/// Step-size refinement study: for each order, integrate to `t_final` at
/// every step size, measure the final-time error against the reference and
/// fit the convergence slope.
///
/// Each run takes round(t_final/h) whole steps and its reference is
/// evaluated at that exact end time, so step sizes that do not divide
/// `t_final` still produce consistent per-point errors.
pub fn convergence_study(
    problem: &ProblemSpec,
    orders: &[u32],
    theta: f64,
    step_sizes: &[f64],
    t_final: f64,
) -> Result<Vec<ConvergenceReport>> {
    if step_sizes.is_empty() {
        return Err(Error::InvalidArgument(
            "a convergence study needs at least one step size".into(),
        ));
    }
    if step_sizes.iter().any(|&h| !h.is_finite() || h <= 0.0) {
        return Err(Error::InvalidArgument(
            "step sizes must be positive and finite".into(),
        ));
    }
    let h_min = step_sizes.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut reports = Vec::with_capacity(orders.len());
    for &order in orders {
        let tableau = family_tableau(order, theta)?;
        let method = format!("rkn{order}-theta{theta}");
        let mut errors = Vec::with_capacity(step_sizes.len());
        for &h in step_sizes {
            let annotate = |source: Error| Error::CellFailed {
                method: method.clone(),
                h,
                source: Box::new(source),
            };
            let n = (t_final / h).round().max(1.0) as usize;
            let t_end = n as f64 * h;
            let cfg = StepperConfig::new(h).map_err(annotate)?;
            let trajectory = integrate(&problem.system, &tableau, &problem.initial, &cfg, n, n)
                .map_err(annotate)?;
            let reference = reference_state(problem, t_end, h_min).map_err(annotate)?;
            errors.push(max_norm_diff(&trajectory.final_state(), &reference));
        }
        let fit_points: Vec<(f64, f64)> = step_sizes
            .iter()
            .zip(&errors)
            .filter(|&(_, &e)| e > ERROR_FLOOR)
            .map(|(&h, &e)| (h, e))
            .collect();
        let fitted_slope = fit_slope(&fit_points);
        reports.push(ConvergenceReport {
            method,
            problem: problem.name.clone(),
            step_sizes: step_sizes.to_vec(),
            errors,
            fitted_slope,
            claimed_order: tableau.claimed_order(),
            slope_gap: fitted_slope - tableau.claimed_order() as f64,
            points_used: fit_points.len(),
        });
    }
    Ok(reports)
}

/// How a drift run advances the state.
pub enum DriftMethod<'a> {
    Rkn(&'a RknTableau),
    Rk4Baseline,
}

/// Long-horizon energy-drift run: march to the horizon with fixed step h,
/// tracking the running maximum of the relative energy error, and sample
/// it at the decade checkpoints T·10⁻ᵏ.
pub fn drift_study(
    problem: &ProblemSpec,
    method: DriftMethod,
    method_label: &str,
    h: f64,
    horizon: f64,
) -> Result<DriftReport> {
    if !h.is_finite() || h <= 0.0 || !horizon.is_finite() || horizon <= 0.0 {
        return Err(Error::InvalidArgument(
            "drift studies need positive finite h and T".into(),
        ));
    }
    let ratio = horizon / h;
    if ratio > MAX_STEP_RATIO {
        return Err(Error::StepBudgetExceeded { ratio });
    }
    let n_steps = ratio.ceil().max(1.0) as usize;

    // decade checkpoints T, T/10, …, down to the first one reachable in a step
    let decades = if ratio >= 1.0 {
        ratio.log10().floor() as usize
    } else {
        0
    };
    let mut checkpoint_steps: Vec<usize> = (0..=decades)
        .rev()
        .map(|k| {
            let t_k = horizon / 10f64.powi(k as i32);
            ((t_k / h).round() as usize).clamp(1, n_steps)
        })
        .collect();
    checkpoint_steps.dedup();

    let sys = &problem.system;
    let e0 = sys.energy(&problem.initial.p, &problem.initial.q);
    let e_scale = if e0.abs() > 0.0 { e0.abs() } else { 1.0 };
    let cfg = StepperConfig::new(h)?;
    let mut state = problem.initial.clone();
    let mut running_max: f64 = 0.0;
    let mut checkpoints = Vec::with_capacity(checkpoint_steps.len());
    let mut next_checkpoint = 0;
    for index in 1..=n_steps {
        state = match &method {
            DriftMethod::Rkn(tableau) => {
                step(sys, tableau, &state, &cfg).map_err(|e| Error::StepFailed {
                    step: index,
                    source: Box::new(e),
                })?
            }
            DriftMethod::Rk4Baseline => {
                let next = rk4_step(sys, &state, h);
                if !next.is_finite() {
                    return Err(Error::StepFailed {
                        step: index,
                        source: Box::new(Error::NonFiniteStage {
                            stage: 0,
                            t: state.t,
                        }),
                    });
                }
                next
            }
        };
        let rel = (sys.energy(&state.p, &state.q) - e0).abs() / e_scale;
        running_max = running_max.max(rel);
        while next_checkpoint < checkpoint_steps.len() && checkpoint_steps[next_checkpoint] == index
        {
            checkpoints.push(DriftCheckpoint {
                t: state.t,
                max_rel_energy_err: running_max,
            });
            next_checkpoint += 1;
        }
    }
    // denominator: the T/100 checkpoint (two decades before the end) when
    // the run is long enough, otherwise the earliest checkpoint
    let last = checkpoints.len() - 1;
    let denom_idx = last.saturating_sub(2);
    let num = checkpoints[last].max_rel_energy_err;
    let den = checkpoints[denom_idx].max_rel_energy_err;
    let drift_ratio = if den > 0.0 {
        num / den
    } else if num > 0.0 {
        f64::INFINITY
    } else {
        1.0
    };
    Ok(DriftReport {
        method: method_label.to_string(),
        problem: problem.name.clone(),
        h,
        horizon,
        checkpoints,
        drift_ratio,
    })
}
