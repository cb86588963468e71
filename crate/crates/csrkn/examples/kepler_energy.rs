//! Minimal library walkthrough: build the order-6 family, reduce it to a
//! 3-stage tableau, integrate an eccentric Kepler orbit and report the
//! worst relative energy error.

use csrkn::quadrature::gauss_legendre;
use csrkn::scheme::build_symplectic_family;
use csrkn::system::StepperConfig;
use csrkn::tableau::discretize;
use csrkn::{integrator, problems};

fn main() -> Result<(), csrkn::Error> {
    let scheme = build_symplectic_family(6, 0.0)?; // continuous-stage, order 6
    let tableau = discretize(&scheme, &gauss_legendre(3)?); // 3-stage symplectic RKN
    let problem = problems::kepler(0.6)?;
    let cfg = StepperConfig::new(1e-3)?;
    let run = integrator::integrate(
        &problem.system,
        &tableau,
        &problem.initial,
        &cfg,
        10_000,
        100,
    )?;
    println!("max |ΔH|/|H₀| = {:.3e}", run.max_energy_rel_err());
    Ok(())
}
