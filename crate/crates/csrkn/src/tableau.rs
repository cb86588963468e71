//! Finite-stage RKN Butcher tableaux: reduction from continuous-stage
//! schemes by quadrature, and verification of order and symplecticity
//! conditions on any tableau.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::QuadratureRule;
use crate::scheme::CsRknScheme;
use crate::SPEC_VERSION;

/// Residual tolerance for tableau-level condition checks. Double precision
/// with sums over at most a handful of stages loses roughly two digits, so
/// 1e-12 is tight enough to catch a wrong formula and loose enough for
/// floating point.
pub const CONDITION_TOL: f64 = 1e-12;

/// An s-stage RKN method (c | ā / b̄ / b).
#[derive(Debug, Clone, PartialEq)]
pub struct RknTableau {
    stages: usize,
    c: Vec<f64>,
    b: Vec<f64>,
    b_bar: Vec<f64>,
    a_bar: Vec<Vec<f64>>,
    claimed_order: u32,
    symplectic: bool,
}

/// Outcome of the tableau-level symplecticity check.
#[derive(Debug, Clone, PartialEq)]
pub enum RknSymplecticVerdict {
    Symplectic,
    /// For i == j this is the weight condition b̄_i = b_i(1−c_i); otherwise
    /// the bilinear condition b_i(b̄_j − ā_ij) = b_j(b̄_i − ā_ji) failed.
    Violated {
        i: usize,
        j: usize,
        residual: f64,
    },
}

impl RknSymplecticVerdict {
    pub fn is_symplectic(&self) -> bool {
        matches!(self, RknSymplecticVerdict::Symplectic)
    }
}

/// Residuals of the classical simplifying assumptions B/CN/DN on a tableau.
#[derive(Debug, Clone)]
pub struct OrderConditionReport {
    /// Residual of B(κ): Σ b_i c_i^(κ−1) = 1/κ, for κ = 1, 2, … (index κ−1).
    pub b_residuals: Vec<f64>,
    /// Worst-stage residual of the CN identity for κ = 1, 2, …
    pub cn_residuals: Vec<f64>,
    /// Worst-stage residual of the DN identity for κ = 1, 2, …
    pub dn_residuals: Vec<f64>,
    /// Largest ξ such that B(κ) holds for all κ ≤ ξ.
    pub b_max: usize,
    /// Largest κ for which the CN identities hold as a prefix; CN(η) holds
    /// exactly when cn_max_kappa ≥ η − 1.
    pub cn_max_kappa: usize,
    /// Largest κ for which the DN identities hold as a prefix.
    pub dn_max_kappa: usize,
    /// min(p, 2η̂+2, η̂+ζ̂) with p = b_max, η̂ = cn_max_kappa + 1,
    /// ζ̂ = dn_max_kappa + 1. Requires b̄_i = b_i(1−c_i) to be meaningful;
    /// see [`RknTableau::verify`].
    pub implied_order: usize,
}

/// Re-derivation of everything a tableau claims about itself.
#[derive(Debug, Clone)]
pub struct TableauVerification {
    pub order_report: OrderConditionReport,
    /// max_i |b̄_i − b_i(1−c_i)|.
    pub weight_consistency_residual: f64,
    pub symplectic_verdict: RknSymplecticVerdict,
    pub claimed_order: u32,
    pub claimed_symplectic: bool,
    /// True iff the re-derived order reaches the claim and, when claimed,
    /// the symplecticity conditions hold.
    pub ok: bool,
}

impl RknTableau {
    /// Assemble a tableau from raw coefficients.
    pub fn from_parts(
        c: Vec<f64>,
        b: Vec<f64>,
        b_bar: Vec<f64>,
        a_bar: Vec<Vec<f64>>,
        claimed_order: u32,
        symplectic: bool,
    ) -> Result<Self> {
        let stages = c.len();
        if stages == 0 {
            return Err(Error::TableauFormat(
                "a tableau needs at least one stage".into(),
            ));
        }
        if b.len() != stages || b_bar.len() != stages || a_bar.len() != stages {
            return Err(Error::TableauFormat(format!(
                "inconsistent lengths: c={}, b={}, b_bar={}, a_bar={} rows",
                stages,
                b.len(),
                b_bar.len(),
                a_bar.len()
            )));
        }
        for (i, row) in a_bar.iter().enumerate() {
            if row.len() != stages {
                return Err(Error::TableauFormat(format!(
                    "a_bar row {i} has {} entries, expected {stages}",
                    row.len()
                )));
            }
        }
        let all = c
            .iter()
            .chain(&b)
            .chain(&b_bar)
            .chain(a_bar.iter().flatten());
        for value in all {
            if !value.is_finite() {
                return Err(Error::TableauFormat("non-finite coefficient".into()));
            }
        }
        Ok(Self {
            stages,
            c,
            b,
            b_bar,
            a_bar,
            claimed_order,
            symplectic,
        })
    }

    pub fn stages(&self) -> usize {
        self.stages
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn b_bar(&self) -> &[f64] {
        &self.b_bar
    }

    pub fn a_bar(&self) -> &[Vec<f64>] {
        &self.a_bar
    }

    /// The order this tableau claims; re-derive with [`Self::verify`].
    pub fn claimed_order(&self) -> u32 {
        self.claimed_order
    }

    /// Whether the tableau claims symplecticity.
    pub fn is_symplectic(&self) -> bool {
        self.symplectic
    }

    /// Check b̄_i = b_i(1−c_i) and b_i(b̄_j − ā_ij) = b_j(b̄_i − ā_ji),
    /// returning the first violation in row-major order.
    pub fn check_rkn_symplectic(&self) -> RknSymplecticVerdict {
        for i in 0..self.stages {
            let residual = self.b_bar[i] - self.b[i] * (1.0 - self.c[i]);
            if residual.abs() > CONDITION_TOL {
                return RknSymplecticVerdict::Violated { i, j: i, residual };
            }
        }
        for i in 0..self.stages {
            for j in 0..self.stages {
                let lhs = self.b[i] * (self.b_bar[j] - self.a_bar[i][j]);
                let rhs = self.b[j] * (self.b_bar[i] - self.a_bar[j][i]);
                let residual = lhs - rhs;
                if residual.abs() > CONDITION_TOL {
                    return RknSymplecticVerdict::Violated { i, j, residual };
                }
            }
        }
        RknSymplecticVerdict::Symplectic
    }

    /// Evaluate the simplifying assumptions B(κ) for κ ≤ `xi_max`, the CN
    /// identities for κ ≤ `eta_max` − 1 and the DN identities for
    /// κ ≤ `zeta_max` − 1.
    pub fn check_order_conditions(
        &self,
        xi_max: usize,
        eta_max: usize,
        zeta_max: usize,
    ) -> OrderConditionReport {
        let s = self.stages;
        let mut b_residuals = Vec::with_capacity(xi_max);
        for kappa in 1..=xi_max {
            let sum: f64 = (0..s)
                .map(|i| self.b[i] * self.c[i].powi(kappa as i32 - 1))
                .sum();
            b_residuals.push(sum - 1.0 / kappa as f64);
        }

        let mut cn_residuals = Vec::new();
        for kappa in 1..eta_max.max(1) {
            let mut worst: f64 = 0.0;
            for i in 0..s {
                let sum: f64 = (0..s)
                    .map(|j| self.a_bar[i][j] * self.c[j].powi(kappa as i32 - 1))
                    .sum();
                let rhs = self.c[i].powi(kappa as i32 + 1) / (kappa * (kappa + 1)) as f64;
                worst = worst.max((sum - rhs).abs());
            }
            cn_residuals.push(worst);
        }

        let mut dn_residuals = Vec::new();
        for kappa in 1..zeta_max.max(1) {
            let k = kappa as f64;
            let mut worst: f64 = 0.0;
            for j in 0..s {
                let sum: f64 = (0..s)
                    .map(|i| self.b[i] * self.c[i].powi(kappa as i32 - 1) * self.a_bar[i][j])
                    .sum();
                let rhs = self.b[j] * self.c[j].powi(kappa as i32 + 1) / (k * (k + 1.0))
                    - self.b[j] * self.c[j] / k
                    + self.b[j] / (k + 1.0);
                worst = worst.max((sum - rhs).abs());
            }
            dn_residuals.push(worst);
        }

        let b_max = prefix_within(&b_residuals, CONDITION_TOL);
        let cn_max_kappa = prefix_within(&cn_residuals, CONDITION_TOL);
        let dn_max_kappa = prefix_within(&dn_residuals, CONDITION_TOL);
        let eta_hat = cn_max_kappa + 1;
        let zeta_hat = dn_max_kappa + 1;
        let implied_order = b_max.min(2 * eta_hat + 2).min(eta_hat + zeta_hat);
        OrderConditionReport {
            b_residuals,
            cn_residuals,
            dn_residuals,
            b_max,
            cn_max_kappa,
            dn_max_kappa,
            implied_order,
        }
    }

    /// Re-derive the claimed order and symplecticity from the coefficients.
    pub fn verify(&self) -> TableauVerification {
        let xi_max = self.claimed_order as usize + 1;
        let eta_max = self.stages + 2;
        let order_report = self.check_order_conditions(xi_max.max(2), eta_max, eta_max);
        let weight_consistency_residual = (0..self.stages)
            .map(|i| (self.b_bar[i] - self.b[i] * (1.0 - self.c[i])).abs())
            .fold(0.0, f64::max);
        let symplectic_verdict = self.check_rkn_symplectic();
        let order_ok = order_report.implied_order >= self.claimed_order as usize
            && weight_consistency_residual <= CONDITION_TOL;
        let symplectic_ok = !self.symplectic || symplectic_verdict.is_symplectic();
        TableauVerification {
            ok: order_ok && symplectic_ok,
            order_report,
            weight_consistency_residual,
            symplectic_verdict,
            claimed_order: self.claimed_order,
            claimed_symplectic: self.symplectic,
        }
    }

    /// JSON form: coefficients as decimal strings with 17 significant
    /// digits so the round trip is bit-exact.
    pub fn to_json(&self) -> String {
        let record = TableauRecord {
            spec_version: SPEC_VERSION,
            s: self.stages,
            c: self.c.iter().map(|&x| fmt17(x)).collect(),
            b: self.b.iter().map(|&x| fmt17(x)).collect(),
            b_bar: self.b_bar.iter().map(|&x| fmt17(x)).collect(),
            a_bar: self
                .a_bar
                .iter()
                .map(|row| row.iter().map(|&x| fmt17(x)).collect())
                .collect(),
            claimed_order: self.claimed_order,
            symplectic: self.symplectic,
        };
        serde_json::to_string_pretty(&record).expect("tableau record serializes")
    }

    /// Parse the JSON form. The claimed order and symplectic flag are kept
    /// as unverified claims; call [`Self::verify`] to re-derive them.
    pub fn from_json(text: &str) -> Result<Self> {
        let record: TableauRecord = serde_json::from_str(text)?;
        if record.c.len() != record.s {
            return Err(Error::TableauFormat(format!(
                "field 'c' has {} entries but s = {}",
                record.c.len(),
                record.s
            )));
        }
        let c = parse_floats(&record.c, "c")?;
        let b = parse_floats(&record.b, "b")?;
        let b_bar = parse_floats(&record.b_bar, "b_bar")?;
        let mut a_bar = Vec::with_capacity(record.a_bar.len());
        for (i, row) in record.a_bar.iter().enumerate() {
            a_bar.push(parse_floats(row, &format!("a_bar[{i}]"))?);
        }
        Self::from_parts(c, b, b_bar, a_bar, record.claimed_order, record.symplectic)
    }

    /// Plain-text Butcher layout: the node column against the ā matrix,
    /// then the b̄ row and the b row.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let width = 22;
        for i in 0..self.stages {
            out.push_str(&format!("{:>width$.17} |", self.c[i]));
            for j in 0..self.stages {
                out.push_str(&format!(" {:>width$.17}", self.a_bar[i][j]));
            }
            out.push('\n');
        }
        let rule_len = width + 2 + (width + 1) * self.stages;
        out.push_str(&"-".repeat(rule_len));
        out.push('\n');
        out.push_str(&format!("{:>width$} |", ""));
        for j in 0..self.stages {
            out.push_str(&format!(" {:>width$.17}", self.b_bar[j]));
        }
        out.push('\n');
        out.push_str(&format!("{:>width$} |", ""));
        for j in 0..self.stages {
            out.push_str(&format!(" {:>width$.17}", self.b[j]));
        }
        out.push('\n');
        out.push_str(&format!(
            "stages: {}, claimed order: {}, symplectic: {}\n",
            self.stages, self.claimed_order, self.symplectic
        ));
        out
    }
}

/// Reduce a continuous-stage scheme to an s-stage RKN tableau with the given
/// quadrature rule: ā_ij = b_j Ā(c_i, c_j), b̄_i = b_i(1−c_i), and b, c from
/// the rule.
///
/// The claimed order is min(p, 2α+2, α+β) where p is the quadrature order,
/// α = min(η, p−dσ+1), β = min(ζ, p−dτ+1) and dτ, dσ are the polynomial
/// degrees of Ā. Symplecticity of the scheme carries over to the tableau.
pub fn discretize(scheme: &CsRknScheme, rule: &QuadratureRule) -> RknTableau {
    let s = rule.stages();
    let c = rule.nodes().to_vec();
    let b = rule.weights().to_vec();
    let b_bar: Vec<f64> = (0..s).map(|i| b[i] * (1.0 - c[i])).collect();
    let a_bar: Vec<Vec<f64>> = (0..s)
        .map(|i| (0..s).map(|j| b[j] * scheme.eval_a(c[i], c[j])).collect())
        .collect();

    let p = rule.exactness_order() as i64;
    let d_tau = scheme.a_bar().max_degree_tau().unwrap_or(0) as i64;
    let d_sigma = scheme.a_bar().max_degree_sigma().unwrap_or(0) as i64;
    let alpha = i64::from(scheme.eta()).min(p - d_sigma + 1);
    let beta = i64::from(scheme.zeta()).min(p - d_tau + 1);
    let claimed_order = p.min(2 * alpha + 2).min(alpha + beta).max(0) as u32;

    RknTableau {
        stages: s,
        c,
        b,
        b_bar,
        a_bar,
        claimed_order,
        symplectic: scheme.is_symplectic(),
    }
}

#[derive(Serialize, Deserialize)]
struct TableauRecord {
    #[serde(default)]
    spec_version: u32,
    s: usize,
    c: Vec<String>,
    b: Vec<String>,
    b_bar: Vec<String>,
    a_bar: Vec<Vec<String>>,
    claimed_order: u32,
    symplectic: bool,
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_floats(fields: &[String], name: &str) -> Result<Vec<f64>> {
    fields
        .iter()
        .enumerate()
        .map(|(k, text)| {
            text.parse::<f64>().map_err(|_| {
                Error::TableauFormat(format!("field '{name}[{k}]' is not a number: '{text}'"))
            })
        })
        .collect()
}

fn prefix_within(residuals: &[f64], tol: f64) -> usize {
    residuals.iter().take_while(|r| r.abs() <= tol).count()
}
