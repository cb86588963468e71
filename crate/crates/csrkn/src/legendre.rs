//! Shifted, L²-normalized Legendre polynomials on [0, 1].
//!
//! The family is orthonormal with respect to the L² inner product:
//! ∫₀¹ P_ι(t) P_κ(t) dt = δ_ικ, with P_0(t) = 1, P_1(t) = √3(2t−1),
//! P_2(t) = √5(6t²−6t+1), …
//!
//! Antiderivatives couple neighbouring degrees through the constants
//! ξ_ι = 1/(2√(4ι²−1)):
//!
//! ∫₀ˣ P_0 dt = ξ₁P₁(x) + ½P₀(x),
//! ∫₀ˣ P_ι dt = ξ_{ι+1}P_{ι+1}(x) − ξ_ι P_{ι−1}(x)   (ι ≥ 1).

/// Largest supported polynomial degree. The coefficient families built in
/// this crate use degrees below 10; the cap exists so a runaway degree is a
/// loud failure instead of a silent loss of precision.
pub const MAX_DEGREE: usize = 64;

/// Evaluate P_ι(t).
///
/// Uses the three-term recurrence of the standard Legendre polynomials
/// L_0(x) = 1, L_1(x) = x, (n+1)L_{n+1}(x) = (2n+1)x L_n(x) − n L_{n−1}(x)
/// composed with the affine map x = 2t−1 and the normalization √(2ι+1).
/// Evaluation outside [0, 1] is permitted (extrapolation).
pub fn eval(degree: usize, t: f64) -> f64 {
    assert!(
        degree <= MAX_DEGREE,
        "Legendre degree {degree} exceeds the supported maximum {MAX_DEGREE}"
    );
    let x = 2.0 * t - 1.0;
    standard_eval(degree, x) * ((2 * degree + 1) as f64).sqrt()
}

/// Evaluate P_0(t), …, P_n(t) in one pass of the recurrence.
pub fn eval_all(max_degree: usize, t: f64) -> Vec<f64> {
    assert!(
        max_degree <= MAX_DEGREE,
        "Legendre degree {max_degree} exceeds the supported maximum {MAX_DEGREE}"
    );
    let x = 2.0 * t - 1.0;
    let mut values = Vec::with_capacity(max_degree + 1);
    let mut prev = 1.0;
    values.push(1.0);
    if max_degree == 0 {
        return values;
    }
    let mut curr = x;
    values.push(3f64.sqrt() * x);
    for n in 1..max_degree {
        let next = ((2 * n + 1) as f64 * x * curr - n as f64 * prev) / (n + 1) as f64;
        prev = curr;
        curr = next;
        values.push(((2 * n + 3) as f64).sqrt() * next);
    }
    values
}

/// Evaluate P_ι(t) together with its derivative dP_ι/dt.
///
/// The derivative is carried through the recurrence,
/// (n+1)L'_{n+1} = (2n+1)(L_n + x L'_n) − n L'_{n−1},
/// which stays finite at the interval endpoints.
pub fn eval_with_deriv(degree: usize, t: f64) -> (f64, f64) {
    assert!(
        degree <= MAX_DEGREE,
        "Legendre degree {degree} exceeds the supported maximum {MAX_DEGREE}"
    );
    let x = 2.0 * t - 1.0;
    let scale = ((2 * degree + 1) as f64).sqrt();
    if degree == 0 {
        return (scale, 0.0);
    }
    let mut prev = 1.0;
    let mut prev_d = 0.0;
    let mut curr = x;
    let mut curr_d = 1.0;
    for n in 1..degree {
        let a = (2 * n + 1) as f64;
        let next = (a * x * curr - n as f64 * prev) / (n + 1) as f64;
        let next_d = (a * (curr + x * curr_d) - n as f64 * prev_d) / (n + 1) as f64;
        prev = curr;
        prev_d = curr_d;
        curr = next;
        curr_d = next_d;
    }
    // chain rule for x = 2t − 1
    (scale * curr, scale * 2.0 * curr_d)
}

/// The coupling constant ξ_ι = 1/(2√(4ι²−1)), defined for ι ≥ 1.
pub fn xi(index: usize) -> f64 {
    assert!(index >= 1, "xi is undefined for index 0");
    let n = index as f64;
    1.0 / (2.0 * (4.0 * n * n - 1.0).sqrt())
}

/// The antiderivative ∫₀ˣ P_ι(t) dt via the closed forms above. Needs one
/// degree of headroom, so ι must stay below [`MAX_DEGREE`].
pub fn integral_from_zero(degree: usize, x: f64) -> f64 {
    assert!(
        degree < MAX_DEGREE,
        "antiderivative of degree {degree} needs P_{} above the cap {MAX_DEGREE}",
        degree + 1
    );
    if degree == 0 {
        xi(1) * eval(1, x) + 0.5
    } else {
        xi(degree + 1) * eval(degree + 1, x) - xi(degree) * eval(degree - 1, x)
    }
}

fn standard_eval(degree: usize, x: f64) -> f64 {
    if degree == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut curr = x;
    for n in 1..degree {
        let next = ((2 * n + 1) as f64 * x * curr - n as f64 * prev) / (n + 1) as f64;
        prev = curr;
        curr = next;
    }
    curr
}
