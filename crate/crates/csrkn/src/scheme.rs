//! Continuous-stage RKN coefficient functions as truncated Legendre series.
//!
//! A continuous-stage scheme is the quadruple (Ā(τ,σ), B̄(τ), B(τ), C(τ))
//! with the standing hypothesis B(τ) = 1, C(τ) = τ, B̄(τ) = 1 − τ, so the
//! only degree of freedom is the bivariate coefficient function Ā. The
//! generator assembles Ā so the moment conditions
//!
//!   CN(η): ∫₀¹ Ā(τ,σ) σ^(κ−1) dσ = τ^(κ+1)/(κ(κ+1)),  1 ≤ κ ≤ η−1,
//!   DN(ζ): ∫₀¹ τ^(κ−1) Ā(τ,σ) dτ = σ^(κ+1)/(κ(κ+1)) − σ/κ + 1/(κ+1),
//!                                                       1 ≤ κ ≤ ζ−1,
//!
//! hold by construction, which yields a one-step method of order
//! min(2η+2, η+ζ). Symplecticity holds exactly when the antisymmetric part
//! of Ā is (τ−σ)/2, i.e. a_(0,1) − a_(1,0) = −ξ₁ and a_(i,j) = a_(j,i) for
//! i+j > 1.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::legendre::xi;
use crate::quadrature::gauss_for_degree;
use crate::series::LegendreSeries2D;
use crate::SPEC_VERSION;

/// Residual tolerance for the coefficient-level symplecticity check.
pub const SYMPLECTIC_TOL: f64 = 1e-13;

/// Residual tolerance for the moment-condition checks.
pub const MOMENT_TOL: f64 = 1e-12;

/// A continuous-stage RKN scheme under the hypothesis B(τ) = 1, C(τ) = τ,
/// B̄(τ) = 1 − τ.
#[derive(Debug, Clone, PartialEq)]
pub struct CsRknScheme {
    a_bar: LegendreSeries2D,
    eta: u32,
    zeta: u32,
    free_params: BTreeMap<(u32, u32), f64>,
    symplectic: bool,
}

/// Outcome of the coefficient-level symplecticity check.
#[derive(Debug, Clone, PartialEq)]
pub enum SymplecticVerdict {
    Symplectic,
    /// First violating coefficient pair (i, j)/(j, i) and its residual.
    Violated {
        i: u32,
        j: u32,
        residual: f64,
    },
}

impl SymplecticVerdict {
    pub fn is_symplectic(&self) -> bool {
        matches!(self, SymplecticVerdict::Symplectic)
    }
}

/// Per-κ residuals of the moment conditions, together with the largest κ
/// for which each family of identities holds.
#[derive(Debug, Clone)]
pub struct MomentConditionReport {
    /// Residual of the CN identity for κ = 1, 2, … (index κ−1).
    pub cn_residuals: Vec<f64>,
    /// Residual of the DN identity for κ = 1, 2, … (index κ−1).
    pub dn_residuals: Vec<f64>,
    /// Largest κ such that the CN identities hold for every κ' ≤ κ.
    pub cn_max_kappa: usize,
    /// Largest κ such that the DN identities hold for every κ' ≤ κ.
    pub dn_max_kappa: usize,
    /// With B(τ) = 1 and C(τ) = τ the B-series condition ∫₀¹ τ^(κ−1) dτ =
    /// 1/κ holds for every κ, so this is always true.
    pub b_holds_all_orders: bool,
    /// Order implied by the verified conditions, min(2η̂+2, η̂+ζ̂) with
    /// η̂ = cn_max_kappa+1 and ζ̂ = dn_max_kappa+1 (a lower bound when the
    /// requested κ range was exhausted without a failure).
    pub implied_order: usize,
}

impl CsRknScheme {
    pub fn eta(&self) -> u32 {
        self.eta
    }

    pub fn zeta(&self) -> u32 {
        self.zeta
    }

    /// The coefficient series of Ā(τ,σ).
    pub fn a_bar(&self) -> &LegendreSeries2D {
        &self.a_bar
    }

    /// The free coefficients ω that were layered on top of the structural
    /// series.
    pub fn free_params(&self) -> &BTreeMap<(u32, u32), f64> {
        &self.free_params
    }

    /// Whether the scheme satisfied the symplecticity conditions when built.
    pub fn is_symplectic(&self) -> bool {
        self.symplectic
    }

    /// Evaluate Ā(τ, σ).
    pub fn eval_a(&self, tau: f64, sigma: f64) -> f64 {
        self.a_bar.eval(tau, sigma)
    }

    /// Order of the continuous-stage method itself: min(2η+2, η+ζ).
    pub fn cs_order(&self) -> u32 {
        (2 * self.eta + 2).min(self.eta + self.zeta)
    }

    /// Check the symplecticity conditions on the coefficient level:
    /// a_(0,1) − a_(1,0) = −ξ₁ and a_(i,j) = a_(j,i) for i + j > 1.
    pub fn check_symplectic(&self) -> SymplecticVerdict {
        check_series_symplectic(&self.a_bar)
    }

    /// Verify the CN/DN moment conditions for κ = 1..=`kappa_max` on each
    /// side, integrating with a quadrature rule exact for the integrand
    /// degree and sampling the free variable at 20 points of [0, 1].
    pub fn verify_simplifying_assumptions(
        &self,
        kappa_max_cn: usize,
        kappa_max_dn: usize,
    ) -> MomentConditionReport {
        let d_tau = self.a_bar.max_degree_tau().unwrap_or(0) as usize;
        let d_sigma = self.a_bar.max_degree_sigma().unwrap_or(0) as usize;
        let samples: Vec<f64> = (0..20).map(|k| k as f64 / 19.0).collect();

        let mut cn_residuals = Vec::with_capacity(kappa_max_cn);
        for kappa in 1..=kappa_max_cn {
            let rule = gauss_for_degree(d_sigma + kappa - 1).expect("degree within rule bounds");
            let mut worst: f64 = 0.0;
            for &tau in &samples {
                let lhs =
                    rule.integrate(|sigma| self.eval_a(tau, sigma) * sigma.powi(kappa as i32 - 1));
                let rhs = tau.powi(kappa as i32 + 1) / (kappa * (kappa + 1)) as f64;
                worst = worst.max((lhs - rhs).abs());
            }
            cn_residuals.push(worst);
        }

        let mut dn_residuals = Vec::with_capacity(kappa_max_dn);
        for kappa in 1..=kappa_max_dn {
            let rule = gauss_for_degree(d_tau + kappa - 1).expect("degree within rule bounds");
            let mut worst: f64 = 0.0;
            for &sigma in &samples {
                let lhs =
                    rule.integrate(|tau| tau.powi(kappa as i32 - 1) * self.eval_a(tau, sigma));
                let k = kappa as f64;
                let rhs =
                    sigma.powi(kappa as i32 + 1) / (k * (k + 1.0)) - sigma / k + 1.0 / (k + 1.0);
                worst = worst.max((lhs - rhs).abs());
            }
            dn_residuals.push(worst);
        }

        let cn_max_kappa = prefix_within(&cn_residuals, MOMENT_TOL);
        let dn_max_kappa = prefix_within(&dn_residuals, MOMENT_TOL);
        let eta_hat = cn_max_kappa + 1;
        let zeta_hat = dn_max_kappa + 1;
        MomentConditionReport {
            cn_residuals,
            dn_residuals,
            cn_max_kappa,
            dn_max_kappa,
            b_holds_all_orders: true,
            implied_order: (2 * eta_hat + 2).min(eta_hat + zeta_hat),
        }
    }

    /// Serialize to JSON. Only η, ζ and the free coefficients persist; the
    /// structural coefficients regenerate on load.
    pub fn to_json(&self) -> String {
        let record = SchemeRecord {
            spec_version: SPEC_VERSION,
            eta: self.eta,
            zeta: self.zeta,
            omega: self
                .free_params
                .iter()
                .map(|(&(i, j), &v)| (i, j, v))
                .collect(),
            symplectic: self.symplectic,
        };
        serde_json::to_string_pretty(&record).expect("scheme record serializes")
    }

    /// Rebuild a scheme from its JSON form. The symplectic flag is
    /// recomputed, never trusted.
    pub fn from_json(text: &str) -> Result<Self> {
        let record: SchemeRecord = serde_json::from_str(text)?;
        build_order_scheme(record.eta, record.zeta, &record.omega)
    }
}

#[derive(Serialize, Deserialize)]
struct SchemeRecord {
    #[serde(default)]
    spec_version: u32,
    eta: u32,
    zeta: u32,
    omega: Vec<(u32, u32, f64)>,
    symplectic: bool,
}

/// Largest n such that residuals[0..n] are all within `tol`.
fn prefix_within(residuals: &[f64], tol: f64) -> usize {
    residuals.iter().take_while(|r| r.abs() <= tol).count()
}

fn check_series_symplectic(series: &LegendreSeries2D) -> SymplecticVerdict {
    let antisym = series.coefficient(0, 1) - series.coefficient(1, 0) + xi(1);
    if antisym.abs() > SYMPLECTIC_TOL {
        return SymplecticVerdict::Violated {
            i: 0,
            j: 1,
            residual: antisym,
        };
    }
    for ((i, j), value) in series.iter() {
        if i + j > 1 && i < j {
            let residual = value - series.coefficient(j, i);
            if residual.abs() > SYMPLECTIC_TOL {
                return SymplecticVerdict::Violated { i, j, residual };
            }
        }
        if i + j > 1 && i > j {
            // catches entries whose mirror is absent
            let residual = series.coefficient(j, i) - value;
            if residual.abs() > SYMPLECTIC_TOL {
                return SymplecticVerdict::Violated {
                    i: j,
                    j: i,
                    residual,
                };
            }
        }
    }
    SymplecticVerdict::Symplectic
}

/// The structural part of Ā(τ,σ) for given (η, ζ):
///
/// ```text
/// 1/6 − ½ξ₁P₁(σ) + ½ξ₁P₁(τ)
///   + Σ_{ι=1}^{N₁} ξ_ι ξ_{ι+1} P_{ι−1}(τ) P_{ι+1}(σ)
///   − Σ_{ι=1}^{N₂} (ξ_ι² + ξ_{ι+1}²) P_ι(τ) P_ι(σ)
///   + Σ_{ι=1}^{N₃} ξ_ι ξ_{ι+1} P_{ι+1}(τ) P_{ι−1}(σ)
/// ```
///
/// with N₁ = max(η−3, ζ−1), N₂ = max(η−2, ζ−2), N₃ = max(η−1, ζ−3).
/// Sums whose upper bound is below one contribute nothing.
fn structural_series(eta: u32, zeta: u32) -> LegendreSeries2D {
    let mut series = LegendreSeries2D::new();
    series.add(0, 0, 1.0 / 6.0);
    series.add(0, 1, -0.5 * xi(1));
    series.add(1, 0, 0.5 * xi(1));
    let eta = i64::from(eta);
    let zeta = i64::from(zeta);
    let n1 = (eta - 3).max(zeta - 1);
    let n2 = (eta - 2).max(zeta - 2);
    let n3 = (eta - 1).max(zeta - 3);
    for iota in 1..=n1 {
        let iota_u = iota as usize;
        series.add(
            (iota - 1) as u32,
            (iota + 1) as u32,
            xi(iota_u) * xi(iota_u + 1),
        );
    }
    for iota in 1..=n2 {
        let iota_u = iota as usize;
        let x_lo = xi(iota_u);
        let x_hi = xi(iota_u + 1);
        series.add(iota as u32, iota as u32, -(x_lo * x_lo + x_hi * x_hi));
    }
    for iota in 1..=n3 {
        let iota_u = iota as usize;
        series.add(
            (iota + 1) as u32,
            (iota - 1) as u32,
            xi(iota_u) * xi(iota_u + 1),
        );
    }
    series
}

/// Build the scheme whose Ā series satisfies CN(η) and DN(ζ), with the free
/// coefficients `omega` (triples (i, j, value)) layered on top.
///
/// Every free index must satisfy i ≥ ζ−1 and j ≥ η−1; anything else changes
/// the verified moment conditions and is rejected.
pub fn build_order_scheme(eta: u32, zeta: u32, omega: &[(u32, u32, f64)]) -> Result<CsRknScheme> {
    if eta < 1 || zeta < 1 {
        return Err(Error::InvalidArgument(
            "eta and zeta must both be at least 1".into(),
        ));
    }
    let min_i = zeta - 1;
    let min_j = eta - 1;
    let mut free_params = BTreeMap::new();
    for &(i, j, value) in omega {
        if i < min_i || j < min_j {
            return Err(Error::FreeCoefficientOutOfRange { i, j, min_i, min_j });
        }
        if value != 0.0 {
            *free_params.entry((i, j)).or_insert(0.0) += value;
        }
    }
    let mut a_bar = structural_series(eta, zeta);
    for (&(i, j), &value) in &free_params {
        a_bar.add(i, j, value);
    }
    let symplectic = check_series_symplectic(&a_bar).is_symplectic();
    Ok(CsRknScheme {
        a_bar,
        eta,
        zeta,
        free_params,
        symplectic,
    })
}

/// The one-parameter symplectic families: order 4, 6 or 8 with
/// (η, ζ) = (2, 2), (3, 3) or (4, 4) and a single free coefficient θ at
/// (η−1, η−1).
pub fn build_symplectic_family(order: u32, theta: f64) -> Result<CsRknScheme> {
    let eta = match order {
        4 => 2,
        6 => 3,
        8 => 4,
        other => return Err(Error::UnsupportedOrder(other)),
    };
    let scheme = build_order_scheme(eta, eta, &[(eta - 1, eta - 1, theta)])?;
    debug_assert!(scheme.is_symplectic());
    Ok(scheme)
}
