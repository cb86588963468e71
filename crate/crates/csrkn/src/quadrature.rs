//! Gauss-Legendre quadrature on [0, 1].
//!
//! An s-point rule has nodes at the roots of the degree-s shifted Legendre
//! polynomial and integrates polynomials of degree up to 2s−1 exactly. The
//! rules reduce continuous-stage schemes to finite Butcher tableaux and check
//! the integral identities used throughout coefficient generation.

use crate::error::{Error, Result};
use crate::legendre;

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITERS: usize = 100;

/// Nodes and weights of a quadrature rule on [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    stages: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// The rule integrates polynomials of degree < `exactness_order` exactly.
    exactness_order: usize,
}

impl QuadratureRule {
    pub fn stages(&self) -> usize {
        self.stages
    }

    /// Nodes c_1 < … < c_s, all strictly inside (0, 1).
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Positive weights b_1, …, b_s summing to one.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exactness_order(&self) -> usize {
        self.exactness_order
    }

    /// Approximate ∫₀¹ f(t) dt by Σ b_i f(c_i).
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&c, &b)| b * f(c))
            .sum()
    }
}

/// Construct the s-point Gauss-Legendre rule on [0, 1].
///
/// Nodes are found by Newton iteration on the shifted Legendre polynomial
/// from Chebyshev-angle initial guesses; weights follow from the standard
/// Gauss weight formula. Node/weight lists are symmetrized about 1/2 so the
/// palindrome structure holds exactly.
pub fn gauss_legendre(stages: usize) -> Result<QuadratureRule> {
    if stages == 0 || stages > 32 {
        return Err(Error::StageCountOutOfRange(stages));
    }
    let s = stages;
    let mut nodes = vec![0.0; s];
    let mut weights = vec![0.0; s];
    for i in 1..=s {
        // descending in i, so store from the back for ascending nodes
        let angle = std::f64::consts::PI * (i as f64 - 0.25) / (s as f64 + 0.5);
        let mut t = 0.5 * (1.0 + angle.cos());
        let mut converged = false;
        let mut deriv = 0.0;
        for _ in 0..NEWTON_MAX_ITERS {
            let (value, d) = legendre::eval_with_deriv(s, t);
            deriv = d;
            let delta = value / d;
            t -= delta;
            if delta.abs() <= NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NodeSolveFailed { stages: s, node: i });
        }
        // one polishing pass so the weight uses the settled node
        let (value, d) = legendre::eval_with_deriv(s, t);
        deriv = if d != 0.0 { d } else { deriv };
        t -= value / deriv;
        nodes[s - i] = t;
        weights[s - i] = (2 * s + 1) as f64 / (t * (1.0 - t) * deriv * deriv);
    }
    // enforce c_i + c_{s+1-i} = 1 and palindromic weights
    for i in 0..s / 2 {
        let j = s - 1 - i;
        let c = 0.5 * (nodes[i] + (1.0 - nodes[j]));
        nodes[i] = c;
        nodes[j] = 1.0 - c;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if s % 2 == 1 {
        nodes[s / 2] = 0.5;
    }
    Ok(QuadratureRule {
        stages: s,
        nodes,
        weights,
        exactness_order: 2 * s,
    })
}

/// Construct the smallest Gauss rule that integrates polynomials of the
/// given degree exactly (2s − 1 ≥ degree).
pub fn gauss_for_degree(degree: usize) -> Result<QuadratureRule> {
    gauss_legendre(degree / 2 + 1)
}

/// Closed-form nodes and weights for the 2-, 3- and 4-point rules, from the
/// published radical expressions. Cross-check fixture for the Newton path.
pub fn closed_form_nodes_weights(stages: usize) -> Option<(Vec<f64>, Vec<f64>)> {
    match stages {
        2 => {
            let r3 = 3f64.sqrt();
            Some((vec![(3.0 - r3) / 6.0, (3.0 + r3) / 6.0], vec![0.5, 0.5]))
        }
        3 => {
            let r15 = 15f64.sqrt();
            Some((
                vec![(5.0 - r15) / 10.0, 0.5, (5.0 + r15) / 10.0],
                vec![5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0],
            ))
        }
        4 => {
            let r30 = 30f64.sqrt();
            let outer = (525.0 + 70.0 * r30).sqrt();
            let inner = (525.0 - 70.0 * r30).sqrt();
            let w_outer = 0.25 - r30 / 72.0;
            let w_inner = 0.25 + r30 / 72.0;
            Some((
                vec![
                    (35.0 - outer) / 70.0,
                    (35.0 - inner) / 70.0,
                    (35.0 + inner) / 70.0,
                    (35.0 + outer) / 70.0,
                ],
                vec![w_outer, w_inner, w_inner, w_outer],
            ))
        }
        _ => None,
    }
}
