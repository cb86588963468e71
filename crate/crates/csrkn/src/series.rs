//! Sparse bivariate series in the tensor Legendre basis.

use std::collections::BTreeMap;

use crate::legendre;

/// A finitely supported series Σ a_(i,j) P_i(τ) P_j(σ).
///
/// The coefficient map is sparse and ordered: the families built from the
/// generator have at most a dozen nonzero entries, and keeping them
/// individually addressable makes the structural coefficients auditable
/// one by one.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LegendreSeries2D {
    coeffs: BTreeMap<(u32, u32), f64>,
}

impl LegendreSeries2D {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add `value` to the coefficient at (i, j). Entries that cancel to an
    /// exact zero are removed so degree queries see only real support.
    pub fn add(&mut self, i: u32, j: u32, value: f64) {
        let entry = self.coeffs.entry((i, j)).or_insert(0.0);
        *entry += value;
        if *entry == 0.0 {
            self.coeffs.remove(&(i, j));
        }
    }

    /// Overwrite the coefficient at (i, j).
    pub fn set(&mut self, i: u32, j: u32, value: f64) {
        if value == 0.0 {
            self.coeffs.remove(&(i, j));
        } else {
            self.coeffs.insert((i, j), value);
        }
    }

    pub fn coefficient(&self, i: u32, j: u32) -> f64 {
        self.coeffs.get(&(i, j)).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), f64)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest populated degree in τ (None when empty).
    pub fn max_degree_tau(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(i, _)| i).max()
    }

    /// Largest populated degree in σ (None when empty).
    pub fn max_degree_sigma(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(_, j)| j).max()
    }

    /// Evaluate the series at (τ, σ).
    pub fn eval(&self, tau: f64, sigma: f64) -> f64 {
        if self.coeffs.is_empty() {
            return 0.0;
        }
        let d_tau = self.max_degree_tau().unwrap() as usize;
        let d_sigma = self.max_degree_sigma().unwrap() as usize;
        let p_tau = legendre::eval_all(d_tau, tau);
        let p_sigma = legendre::eval_all(d_sigma, sigma);
        self.coeffs
            .iter()
            .map(|(&(i, j), &a)| a * p_tau[i as usize] * p_sigma[j as usize])
            .sum()
    }
}

impl FromIterator<((u32, u32), f64)> for LegendreSeries2D {
    fn from_iter<T: IntoIterator<Item = ((u32, u32), f64)>>(iter: T) -> Self {
        let mut series = Self::new();
        for ((i, j), value) in iter {
            series.add(i, j, value);
        }
        series
    }
}
