//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Every tolerance is pinned here, in code. Criterion 7 contains a baseline
//! clause that double-precision arithmetic cannot realize (see the assert
//! message in `criterion_07`); it is implemented as stated and left red
//! rather than weakened.

use std::time::Instant;

use csrkn::closed_form::{compare_tableaux, published_tableau};
use csrkn::experiments::{convergence_study, drift_study, DriftMethod, ERROR_FLOOR};
use csrkn::integrator::{integrate, map_symplecticity_defect, rk4_step, symplecticity_defect};
use csrkn::problems;
use csrkn::quadrature::gauss_legendre;
use csrkn::scheme::{build_order_scheme, build_symplectic_family};
use csrkn::system::{State, StepperConfig};
use csrkn::tableau::{discretize, RknTableau};

/// Deterministic splitmix64 stream in [0, 1).
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        ((z ^ (z >> 31)) >> 11) as f64 / (1u64 << 53) as f64
    }

    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next()
    }
}

fn family_tableau(order: u32, theta: f64) -> RknTableau {
    discretize(
        &build_symplectic_family(order, theta).expect("supported order"),
        &gauss_legendre((order / 2) as usize).expect("valid stage count"),
    )
}

fn report_mismatches(label: &str, cmp: &csrkn::closed_form::TableauComparison) {
    if cmp.agrees() {
        println!(
            "    {label}: agrees entry-wise (max |diff| = {:.3e})",
            cmp.max_abs_difference
        );
    } else {
        println!(
            "    {label}: {} entries disagree (max |diff| = {:.3e})",
            cmp.mismatches.len(),
            cmp.max_abs_difference
        );
        for m in &cmp.mismatches {
            println!(
                "      {}: generated {:+.17e} vs published {:+.17e} (diff {:+.3e})",
                m.location,
                m.generated,
                m.published,
                m.difference()
            );
        }
    }
}

#[test]
fn criterion_01_order4_tableau_reproduction() {
    let start = Instant::now();
    for theta in [0.0, 1.0, -2.5] {
        let generated = family_tableau(4, theta);
        let published = published_tableau(4, theta).unwrap();
        let cmp = compare_tableaux(&generated, &published, 1e-13);
        assert!(
            cmp.agrees() && cmp.max_abs_difference < 1e-13,
            "criterion 1: FAIL — theta = {theta}, max |diff| = {:.3e}, mismatches {:?}",
            cmp.max_abs_difference,
            cmp.mismatches
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "criterion 1: FAIL — runtime {elapsed:?}"
    );
    println!("criterion 1: PASS — order-4 tableau matches the published table entry-wise for theta in {{0, 1, -2.5}} (< 1e-13), runtime {elapsed:?}");
}

#[test]
fn criterion_02_order6_tableau_reproduction() {
    let start = Instant::now();
    for theta in [0.0, 1.0] {
        let generated = family_tableau(6, theta);
        let published = published_tableau(6, theta).unwrap();
        let cmp = compare_tableaux(&generated, &published, 1e-13);
        report_mismatches(&format!("order 6, theta = {theta}"), &cmp);

        let report = generated.check_order_conditions(7, 5, 5);
        assert!(
            report.b_max >= 6 && report.cn_max_kappa >= 2 && report.dn_max_kappa >= 2,
            "criterion 2: FAIL — generated order-6 tableau misses B(6)/CN(3)/DN(3): \
             B({}), CN kappa {}, DN kappa {}",
            report.b_max,
            report.cn_max_kappa,
            report.dn_max_kappa
        );
        assert!(
            generated.check_rkn_symplectic().is_symplectic(),
            "criterion 2: FAIL — generated order-6 tableau is not symplectic at theta {theta}"
        );
        // the published 3-stage table turns out to be exact, including its
        // unusual second-row denominators; record that the comparison ran
        assert!(
            cmp.agrees(),
            "criterion 2: published order-6 disagreement detected (reported above); \
             generator remains ground truth"
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "criterion 2: FAIL — runtime {elapsed:?}"
    );
    println!("criterion 2: PASS — order-6 tableau verified at B(6)/CN(3)/DN(3) + symplectic; published table agrees entry-wise, runtime {elapsed:?}");
}

#[test]
fn criterion_03_order8_tableau_verification() {
    let start = Instant::now();
    for theta in [0.0, 0.25] {
        let generated = family_tableau(8, theta);
        let report = generated.check_order_conditions(9, 6, 6);
        assert!(
            report.b_max >= 8 && report.cn_max_kappa >= 3 && report.dn_max_kappa >= 3,
            "criterion 3: FAIL — generated order-8 tableau misses B(8)/CN(4)/DN(4) at theta \
             {theta}: B({}), CN kappa {}, DN kappa {}",
            report.b_max,
            report.cn_max_kappa,
            report.dn_max_kappa
        );
        assert!(
            generated.check_rkn_symplectic().is_symplectic(),
            "criterion 3: FAIL — generated order-8 tableau not symplectic at theta {theta}"
        );
        // informational comparison against the published expressions, which
        // carry known misprints (the theta term with denominator 29400525)
        let published = published_tableau(8, theta).unwrap();
        let cmp = compare_tableaux(&generated, &published, 1e-13);
        report_mismatches(&format!("order 8, theta = {theta}"), &cmp);
        if theta == 0.0 {
            assert!(
                cmp.agrees(),
                "criterion 3: the theta-free part of the published 4-stage table \
                 should match the generator exactly"
            );
        } else {
            // the disagreement is fully explained by the misprinted
            // denominator: the three entries printed with sqrt(14)*theta/29400525
            // should carry sqrt(14)*theta/56, like their mirror entries do
            let bad_term = 14f64.sqrt() * theta * (1.0 / 56.0 - 1.0 / 29_400_525.0);
            assert_eq!(
                cmp.mismatches.len(),
                3,
                "criterion 3: expected exactly the three known-misprinted entries"
            );
            for m in &cmp.mismatches {
                assert!(
                    ["a_bar[0][1]", "a_bar[0][2]", "a_bar[1][0]"].contains(&m.location.as_str()),
                    "criterion 3: unexpected mismatch at {}",
                    m.location
                );
                assert!(
                    (m.difference().abs() - bad_term.abs()).abs() < 1e-12,
                    "criterion 3: mismatch at {} is {:.6e}, not the misprint delta {:.6e}",
                    m.location,
                    m.difference().abs(),
                    bad_term.abs()
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "criterion 3: FAIL — runtime {elapsed:?}"
    );
    println!("criterion 3: PASS — order-8 tableau verified at B(8)/CN(4)/DN(4) + symplectic for theta in {{0, 0.25}}; published-table differences reported above, runtime {elapsed:?}");
}

#[test]
fn criterion_04_moment_condition_grid() {
    let start = Instant::now();
    let mut rng = Rng(0x0404);
    for eta in 1..=5u32 {
        for zeta in 1..=5u32 {
            // a random nonzero free coefficient keeps the next index generic
            let theta = rng.range(0.5, 5.0) * if rng.next() < 0.5 { -1.0 } else { 1.0 };
            let scheme = build_order_scheme(eta, zeta, &[(zeta - 1, eta - 1, theta)]).unwrap();
            let report = scheme.verify_simplifying_assumptions(eta as usize, zeta as usize);
            assert_eq!(
                report.cn_max_kappa,
                (eta - 1) as usize,
                "criterion 4: FAIL — CN prefix for (eta,zeta)=({eta},{zeta}), theta {theta}: \
                 residuals {:?}",
                report.cn_residuals
            );
            assert_eq!(
                report.dn_max_kappa,
                (zeta - 1) as usize,
                "criterion 4: FAIL — DN prefix for (eta,zeta)=({eta},{zeta}), theta {theta}: \
                 residuals {:?}",
                report.dn_residuals
            );
            for kappa in 1..eta as usize {
                assert!(
                    report.cn_residuals[kappa - 1] < 1e-12,
                    "criterion 4: FAIL — CN kappa {kappa} residual {:.3e} at ({eta},{zeta})",
                    report.cn_residuals[kappa - 1]
                );
            }
            for kappa in 1..zeta as usize {
                assert!(
                    report.dn_residuals[kappa - 1] < 1e-12,
                    "criterion 4: FAIL — DN kappa {kappa} residual {:.3e} at ({eta},{zeta})",
                    report.dn_residuals[kappa - 1]
                );
            }
            assert!(
                report.cn_residuals[(eta - 1) as usize] > 1e-6,
                "criterion 4: FAIL — CN kappa {eta} should fail visibly at ({eta},{zeta}): \
                 residual {:.3e}",
                report.cn_residuals[(eta - 1) as usize]
            );
            assert!(
                report.dn_residuals[(zeta - 1) as usize] > 1e-6,
                "criterion 4: FAIL — DN kappa {zeta} should fail visibly at ({eta},{zeta}): \
                 residual {:.3e}",
                report.dn_residuals[(zeta - 1) as usize]
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "criterion 4: FAIL — runtime {elapsed:?}"
    );
    println!("criterion 4: PASS — CN/DN hold exactly up to (eta-1, zeta-1) and fail at the next index on the full (eta,zeta) in {{1..5}}^2 grid, runtime {elapsed:?}");
}

#[test]
fn criterion_05_symplectic_family_closure() {
    let start = Instant::now();
    let mut rng = Rng(0x0505);
    for order in [4u32, 6, 8] {
        for _ in 0..20 {
            let theta = rng.range(-10.0, 10.0);
            let scheme = build_symplectic_family(order, theta).unwrap();
            assert!(
                scheme.check_symplectic().is_symplectic(),
                "criterion 5: FAIL — scheme-level check violated at order {order}, theta {theta}"
            );
            let tableau = discretize(&scheme, &gauss_legendre((order / 2) as usize).unwrap());
            assert!(
                tableau.check_rkn_symplectic().is_symplectic(),
                "criterion 5: FAIL — tableau-level check violated at order {order}, theta {theta}"
            );
            for _ in 0..100 {
                let tau = rng.next();
                let sigma = rng.next();
                let diff = scheme.eval_a(tau, sigma) - scheme.eval_a(sigma, tau);
                assert!(
                    (diff - (tau - sigma)).abs() < 1e-12,
                    "criterion 5: FAIL — antisymmetry off by {:.3e} at order {order}, \
                     theta {theta}, (tau,sigma)=({tau},{sigma})",
                    (diff - (tau - sigma)).abs()
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 5.0,
        "criterion 5: FAIL — runtime {elapsed:?}"
    );
    println!("criterion 5: PASS — 20 random theta per family: coefficient and tableau symplecticity checks pass, antisymmetry identity holds at 100 random points (< 1e-12), runtime {elapsed:?}");
}

#[test]
fn criterion_06_empirical_convergence_orders() {
    let start = Instant::now();
    let problem = problems::harmonic_oscillator();
    let step_sizes = [0.1, 0.05, 0.025, 0.0125];
    let reports = convergence_study(&problem, &[4, 6, 8], 0.0, &step_sizes, 1.0).unwrap();

    let ranges = [(4u32, 3.7, 4.5), (6, 5.7, 6.5), (8, 7.5, 8.6)];
    for (report, &(order, lo, hi)) in reports.iter().zip(&ranges) {
        println!(
            "    order {order}: errors {:?}, slope {:.3} from {} points above the floor",
            report.errors, report.fitted_slope, report.points_used
        );
        if order == 8 && report.points_used < 2 {
            // the stated floor filter (errors above 100 eps) removed every
            // point: the 8th-order method resolves the oscillator to the
            // rounding floor at all four step sizes, so there is no slope
            // to measure. Guard the vacuous branch: this may only happen
            // when every error actually sits at the floor.
            for (&h, &err) in report.step_sizes.iter().zip(&report.errors) {
                assert!(
                    err <= ERROR_FLOOR,
                    "criterion 6: FAIL — order-8 error {err:.3e} at h={h} is measurable, \
                     yet the slope fit used {} points",
                    report.points_used
                );
            }
            println!(
                "    order 8: every error is at the rounding floor (<= {ERROR_FLOOR:.3e}); \
                 the stated floor filter leaves the slope range check vacuous"
            );
            continue;
        }
        assert!(
            report.fitted_slope >= lo && report.fitted_slope <= hi,
            "criterion 6: FAIL — order-{order} slope {:.3} outside [{lo}, {hi}]",
            report.fitted_slope
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "criterion 6: FAIL — runtime {elapsed:?}"
    );
    println!("criterion 6: PASS — fitted slopes within the stated ranges (order-8 filtered per the 100-eps floor rule), runtime {elapsed:?}");
}

#[test]
fn criterion_07_symplecticity_defect() {
    let start = Instant::now();
    let problem = problems::henon_heiles();
    let cfg = StepperConfig::new(0.1).unwrap();
    let fd_eps = 1e-5;
    let mut family_worst: f64 = 0.0;
    for order in [4u32, 6, 8] {
        let tableau = family_tableau(order, 0.0);
        let defect =
            symplecticity_defect(&problem.system, &tableau, &problem.initial, &cfg, fd_eps)
                .unwrap();
        println!("    order {order}: one-step defect {defect:.3e}");
        family_worst = family_worst.max(defect);
        assert!(
            defect < 1e-7,
            "criterion 7: FAIL — order-{order} defect {defect:.3e} >= 1e-7"
        );
    }
    let rk4_defect = map_symplecticity_defect(
        |s: &State| Ok(rk4_step(&problem.system, s, 0.1)),
        &problem.initial,
        fd_eps,
    )
    .unwrap();
    println!(
        "    rk4 baseline: one-step defect {rk4_defect:.3e} \
         ({:.1e}x the worst family defect)",
        rk4_defect / family_worst
    );
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "criterion 7: FAIL — runtime {elapsed:?}"
    );
    // The baseline clause below is not attainable in f64: a fourth-order
    // one-step map differs from the exact (symplectic) flow by O(h^5), so
    // its defect at h = 0.1 measures ~5e-8 here — and at most ~5e-6 at any
    // strong-field state — never above 1e-4. Composing steps until RK4
    // accumulates past 1e-4 (about 2200 steps) drives the finite-difference
    // noise of the family Jacobians past their own 1e-7 bound, so no common
    // protocol satisfies both clauses. Kept as stated; see notes.
    assert!(
        rk4_defect > 1e-4,
        "criterion 7: FAIL — families pass (< 1e-7, worst {family_worst:.3e}) but the RK4 \
         baseline clause is unattainable: measured one-step defect {rk4_defect:.3e} <= 1e-4 \
         because RK4 deviates from the exact symplectic flow only at O(h^5)"
    );
    println!("criterion 7: PASS — families < 1e-7 and RK4 baseline > 1e-4, runtime {elapsed:?}");
}

#[test]
fn criterion_08_long_time_energy_behavior() {
    let start = Instant::now();
    let problem = problems::kepler(0.3).unwrap();
    let tableau = family_tableau(4, 0.0);
    let rkn = drift_study(
        &problem,
        DriftMethod::Rkn(&tableau),
        "rkn4-theta0",
        0.01,
        1000.0,
    )
    .unwrap();
    let rkn_max = rkn.checkpoints.last().unwrap().max_rel_energy_err;
    println!(
        "    rkn4: max relative energy error {rkn_max:.3e}, drift ratio {:.3}",
        rkn.drift_ratio
    );
    assert!(
        rkn_max < 5e-7,
        "criterion 8: FAIL — rkn4 max relative energy error {rkn_max:.3e} >= 5e-7"
    );
    assert!(
        rkn.drift_ratio < 3.0,
        "criterion 8: FAIL — rkn4 drift ratio {:.3} >= 3",
        rkn.drift_ratio
    );

    let rk4 = drift_study(
        &problem,
        DriftMethod::Rk4Baseline,
        "rk4-baseline",
        0.01,
        1000.0,
    )
    .unwrap();
    println!(
        "    rk4:  max relative energy error {:.3e}, drift ratio {:.3}",
        rk4.checkpoints.last().unwrap().max_rel_energy_err,
        rk4.drift_ratio
    );
    assert!(
        rk4.drift_ratio > 10.0,
        "criterion 8: FAIL — rk4 drift ratio {:.3} <= 10",
        rk4.drift_ratio
    );
    for pair in rk4.checkpoints.windows(2) {
        assert!(
            pair[1].max_rel_energy_err > pair[0].max_rel_energy_err,
            "criterion 8: FAIL — rk4 energy error not growing monotonically: {:?}",
            rk4.checkpoints
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 120.0,
        "criterion 8: FAIL — runtime {elapsed:?}"
    );
    println!("criterion 8: PASS — Kepler e=0.3, T=1000: symplectic error bounded ({rkn_max:.3e} < 5e-7, ratio < 3), RK4 grows monotonically with ratio > 10, runtime {elapsed:?}");
}

#[test]
fn criterion_09_singular_mass_support() {
    let start = Instant::now();
    let problem = problems::frozen_direction();
    let tableau = family_tableau(4, 0.0);
    let cfg = StepperConfig::new(0.1).unwrap();
    let trajectory = integrate(&problem.system, &tableau, &problem.initial, &cfg, 1000, 1).unwrap();
    let q2_initial = problem.initial.q[1];
    let mut worst: f64 = 0.0;
    for point in trajectory.points() {
        worst = worst.max((point.q[1] - q2_initial).abs());
    }
    assert!(
        worst < 1e-14,
        "criterion 9: FAIL — frozen coordinate moved by {worst:.3e}"
    );
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "criterion 9: FAIL — runtime {elapsed:?}"
    );
    println!("criterion 9: PASS — singular mass matrix integrates cleanly; |dq2| = {worst:.3e} over 1000 steps, runtime {elapsed:?}");
}

#[test]
fn criterion_10_quadrature_exactness() {
    let start = Instant::now();
    for s in 1..=10usize {
        let rule = gauss_legendre(s).unwrap();
        for k in 0..=(2 * s - 1) {
            let approx = rule.integrate(|t| t.powi(k as i32));
            let exact = 1.0 / (k as f64 + 1.0);
            assert!(
                (approx - exact).abs() < 1e-13,
                "criterion 10: FAIL — s = {s}, degree {k}: residual {:.3e}",
                (approx - exact).abs()
            );
        }
        let k = 2 * s;
        let residual = (rule.integrate(|t| t.powi(k as i32)) - 1.0 / (k as f64 + 1.0)).abs();
        assert!(
            residual > 5e-13,
            "criterion 10: FAIL — s = {s} looks exact at degree {k} (residual {residual:.3e})"
        );
        if s <= 5 {
            assert!(
                residual > 1e-6,
                "criterion 10: FAIL — s = {s} failure at degree {k} too small: {residual:.3e}"
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "criterion 10: FAIL — runtime {elapsed:?}"
    );
    println!("criterion 10: PASS — Gauss rules s <= 10 exact through degree 2s-1 (< 1e-13) and demonstrably inexact at degree 2s, runtime {elapsed:?}");
}
