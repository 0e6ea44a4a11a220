//! Sanity run on the one configuration with a textbook answer: two identical
//! vortices rotate rigidly at omega = Gamma_tot / (2 pi d^2). Integrates one
//! revolution and reports the closure error and conserved-quantity drift.

use vortex_holonomy::dynamics::{PlanarState, Strengths};
use vortex_holonomy::integrator::{integrate, IntegratorConfig};
use vortex_holonomy::plane::Vec2;

fn main() {
    let s = Strengths::new(vec![1.0, 1.0]).unwrap();
    let d: f64 = 1.5;
    let omega = s.gamma_tot() / (std::f64::consts::TAU * d * d);
    let period = std::f64::consts::TAU / omega;
    println!("separation d = {d}, omega = {omega:.12}, T = {period:.12}");

    let st = PlanarState::new(
        vec![Vec2::new(d / 2.0, 0.0), Vec2::new(-d / 2.0, 0.0)],
        s.clone(),
    )
    .unwrap();
    let c0 = st.conserved_set().unwrap();
    let cfg = IntegratorConfig::default();
    let s2 = s.clone();
    let traj = integrate(
        move |_t, y, dy| {
            let st = PlanarState::new(
                vec![Vec2::new(y[0], y[1]), Vec2::new(y[2], y[3])],
                s2.clone(),
            )?;
            let v = st.eom_rhs()?;
            for (k, vk) in v.iter().enumerate() {
                dy[2 * k] = vk.x;
                dy[2 * k + 1] = vk.y;
            }
            Ok(())
        },
        0.0,
        &[d / 2.0, 0.0, -d / 2.0, 0.0],
        period,
        &cfg,
    )
    .unwrap();

    let end = PlanarState::new(
        vec![
            Vec2::new(traj.y_end[0], traj.y_end[1]),
            Vec2::new(traj.y_end[2], traj.y_end[3]),
        ],
        s,
    )
    .unwrap();
    let c1 = end.conserved_set().unwrap();
    let closure = (end.z[0] - st.z[0]).norm();
    println!(
        "closure after one period: {closure:.3e} ({} accepted steps, {} rejected)",
        traj.n_accepted, traj.n_rejected
    );
    println!("energy drift:   {:.3e}", (c1.h - c0.h).abs());
    println!("momentum drift: {:.3e}", (c1.z0 - c0.z0).norm());
    println!("Theta0 drift:   {:.3e}", (c1.theta0 - c0.theta0).abs());
}
