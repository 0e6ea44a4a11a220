//! Reproduces the reference table of reconstruction phases for the strengths
//! (7.615, -3.46, -3.155) on the momentum level mu = 1: for each energy,
//! every periodic orbit of the reduced system is located and its geometric,
//! dynamic, and total phases are computed by independent methods.

use vortex_holonomy::dynamics::Strengths;
use vortex_holonomy::integrator::IntegratorConfig;
use vortex_holonomy::phases::{orbits_at_energy, phase_report};
use vortex_holonomy::reduced::ReducedContext;

fn main() {
    let strengths = Strengths::new(vec![7.615, -3.46, -3.155]).unwrap();
    let ctx = ReducedContext::new(strengths, 1.0, 2).unwrap();
    let cfg = IntegratorConfig::default();
    let energies = [-11.9764, -10.1509, -9.2487, -7.45, -6.1434, -5.2727];

    println!(
        "{:>10}  {:>10}  {:>10}  {:>10}  {:>10}",
        "energy", "theta_g", "T", "theta_d", "theta_tot"
    );
    for energy in energies {
        let orbits = orbits_at_energy(&ctx, energy, &cfg, 100.0).unwrap();
        for orbit in &orbits {
            match phase_report(&ctx, orbit, &cfg) {
                Ok(rep) => println!(
                    "{:>10.4}  {:>10.4}  {:>10.4}  {:>10.4}  {:>10.4}",
                    energy, rep.theta_g, rep.period, rep.theta_d, rep.theta_tot_mod
                ),
                Err(e) => println!("{energy:>10.4}  (skipped: {e})"),
            }
        }
    }
}
