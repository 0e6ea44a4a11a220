//! Geometric, dynamic, and total reconstruction phases for periodic orbits
//! of the reduced three-vortex flow, each by independent methods: line
//! integral vs. enclosed-area for the geometric phase, closed form vs.
//! quadrature for the dynamic phase, and full unreduced integration for the
//! total phase.

use crate::dynamics::{PlanarState, Strengths};
use crate::error::{Error, Result};
use crate::integrator::{
    find_periodic_orbit, integrate, level_set_seeds, IntegratorConfig, PeriodicOrbit,
};
use crate::plane::{mod_2pi, wrap_angle, Vec2};
use crate::reduced::{ReducedContext, Surface};

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;
const TAU: f64 = std::f64::consts::TAU;

/// Number of quadrature samples along one period; the integrands are smooth
/// and periodic, so the trapezoid rule converges spectrally.
const N_SAMPLES: usize = 8192;

/// All phases of one periodic orbit.
#[derive(Debug, Clone)]
pub struct PhaseReport {
    pub energy: f64,
    pub period: f64,
    /// Raw line-integral value along the flow direction.
    pub theta_g: f64,
    pub theta_g_mod: f64,
    pub theta_d: f64,
    pub theta_tot_mod: f64,
}

/// theta_g = -integral over one period of (1 - I1/mu) dphi1/dt dt, with the
/// angular velocity taken analytically from the reduced Hamiltonian.
pub fn geometric_phase_line(ctx: &ReducedContext, orbit: &PeriodicOrbit) -> Result<f64> {
    let t = orbit.period;
    if t == 0.0 {
        return Ok(0.0);
    }
    let mut y = [0.0; 2];
    let mut sum = 0.0;
    for k in 0..N_SAMPLES {
        // periodic trapezoid = mean of samples over one full period
        orbit.traj.eval(t * k as f64 / N_SAMPLES as f64, &mut y);
        let g = ctx.ham_grad(y[0], y[1])?;
        let phi1_dot = -g.dh_di1;
        sum += (1.0 - y[0] / ctx.mu) * phi1_dot;
    }
    Ok(-sum * t / N_SAMPLES as f64)
}

/// Signed area on the unit sphere enclosed by a closed polyline, by fan
/// triangulation of solid angles from the loop's spherical centroid.
pub fn spherical_loop_area(points: &[[f64; 3]]) -> f64 {
    let mut c = [0.0; 3];
    for p in points {
        for d in 0..3 {
            c[d] += p[d];
        }
    }
    let n = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
    if n < 1e-12 {
        c = [0.0, 0.0, 1.0];
    } else {
        for v in c.iter_mut() {
            *v /= n;
        }
    }
    let mut omega = 0.0;
    for k in 0..points.len() {
        let a = c;
        let b = points[k];
        let d = points[(k + 1) % points.len()];
        let triple = a[0] * (b[1] * d[2] - b[2] * d[1]) - a[1] * (b[0] * d[2] - b[2] * d[0])
            + a[2] * (b[0] * d[1] - b[1] * d[0]);
        let dot_ab = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let dot_bd = b[0] * d[0] + b[1] * d[1] + b[2] * d[2];
        let dot_da = d[0] * a[0] + d[1] * a[1] + d[2] * a[2];
        omega += 2.0 * triple.atan2(1.0 + dot_ab + dot_bd + dot_da);
    }
    omega
}

/// Signed hyperbolic area enclosed by a closed polyline on the upper unit
/// hyperboloid z^2 - x^2 - y^2 = 1, by fan triangulation with the angle
/// deficit pi - (sum of angles) per triangle, signed by vertex orientation.
pub fn hyperbolic_loop_area(points: &[[f64; 3]]) -> f64 {
    // Minkowski pairing with signature (- - +) so <U, U> = 1 on the sheet
    let mink = |u: [f64; 3], v: [f64; 3]| u[2] * v[2] - u[0] * v[0] - u[1] * v[1];
    let mut c = [0.0; 3];
    for p in points {
        for d in 0..3 {
            c[d] += p[d];
        }
    }
    let nc = mink(c, c);
    if nc <= 0.0 {
        c = [0.0, 0.0, 1.0];
    } else {
        let s = 1.0 / nc.sqrt();
        for v in c.iter_mut() {
            *v *= s;
        }
    }
    // interior angle at vertex a of the geodesic triangle (a, b, d): the
    // Riemannian metric on tangent vectors is minus the Minkowski pairing
    let angle = |a: [f64; 3], b: [f64; 3], d: [f64; 3]| -> f64 {
        let proj = |v: [f64; 3]| {
            let k = mink(v, a);
            [v[0] - k * a[0], v[1] - k * a[1], v[2] - k * a[2]]
        };
        let tb = proj(b);
        let td = proj(d);
        let g = -mink(tb, td);
        let nb = (-mink(tb, tb)).max(0.0).sqrt();
        let nd = (-mink(td, td)).max(0.0).sqrt();
        if nb == 0.0 || nd == 0.0 {
            return 0.0;
        }
        (g / (nb * nd)).clamp(-1.0, 1.0).acos()
    };
    let mut area = 0.0;
    for k in 0..points.len() {
        let a = c;
        let b = points[k];
        let d = points[(k + 1) % points.len()];
        let deficit =
            std::f64::consts::PI - angle(a, b, d) - angle(b, d, a) - angle(d, a, b);
        let det = a[0] * (b[1] * d[2] - b[2] * d[1]) - a[1] * (b[0] * d[2] - b[2] * d[0])
            + a[2] * (b[0] * d[1] - b[1] * d[0]);
        area += deficit.abs().copysign(det);
    }
    area
}

/// theta_g by the enclosed-area method: the orbit is projected to the unit
/// sphere (or unit hyperboloid) and theta_g = -sign(mu) * area / 2, agreeing
/// with the line integral mod 2 pi.
pub fn geometric_phase_area(ctx: &ReducedContext, orbit: &PeriodicOrbit) -> Result<f64> {
    let t = orbit.period;
    let m = ctx.mu.abs();
    let mut y = [0.0; 2];
    let mut pts = Vec::with_capacity(N_SAMPLES);
    let mut flip = 1.0;
    for k in 0..N_SAMPLES {
        orbit.traj.eval(t * k as f64 / N_SAMPLES as f64, &mut y);
        let e = ctx.embed(y[0], y[1])?;
        let mut p = [e.x / m, e.y / m, e.z / m];
        if ctx.surface() == Surface::Hyperboloid && k == 0 && p[2] < 0.0 {
            flip = -1.0;
        }
        if flip < 0.0 {
            p[2] = -p[2];
        }
        pts.push(p);
    }
    let area = match ctx.surface() {
        Surface::Sphere => spherical_loop_area(&pts),
        Surface::Hyperboloid => hyperbolic_loop_area(&pts),
    };
    Ok(-ctx.mu.signum() * flip * area / 2.0)
}

/// theta_d = -V0 T / (4 pi mu), V0 the sum of pairwise strength products.
pub fn dynamic_phase_closed_form(strengths: &Strengths, mu: f64, t: f64) -> Result<f64> {
    if mu == 0.0 {
        return Err(Error::OutOfDomain("mu must be nonzero".into()));
    }
    Ok(-strengths.virial() * t / (FOUR_PI * mu))
}

/// Four-identical-vortex dynamic phase -3 gamma^2 T / (2 pi mu).
pub fn dynamic_phase_closed_form4(gamma: f64, mu: f64, t: f64) -> Result<f64> {
    if mu == 0.0 {
        return Err(Error::OutOfDomain("mu must be nonzero".into()));
    }
    Ok(-3.0 * gamma * gamma * t / (TAU * mu))
}

/// theta_d by quadrature of alpha(X_h) along the orbit; the integrand is
/// pointwise constant, so this cross-checks the closed form.
pub fn dynamic_phase_integral(ctx: &ReducedContext, orbit: &PeriodicOrbit) -> Result<f64> {
    let t = orbit.period;
    if t == 0.0 {
        return Ok(0.0);
    }
    let mut y = [0.0; 2];
    let mut sum = 0.0;
    for k in 0..N_SAMPLES {
        orbit.traj.eval(t * k as f64 / N_SAMPLES as f64, &mut y);
        sum += ctx.xi(y[0], y[1])?;
    }
    Ok(sum * t / N_SAMPLES as f64)
}

/// Integrates the full (unreduced) equations for time `t` and extracts the
/// common rotation angle z_a(T) = e^{i theta} z_a(0); errors if the vortices
/// do not return to a rigidly rotated copy of the start.
pub fn total_phase_reconstruction(state: &PlanarState, t: f64, cfg: &IntegratorConfig) -> Result<f64> {
    let n = state.n();
    let strengths = state.strengths.clone();
    let y0: Vec<f64> = state.z.iter().flat_map(|z| [z.x, z.y]).collect();
    let traj = integrate(
        |_t, y, dy| {
            let z: Vec<Vec2> = (0..n).map(|a| Vec2::new(y[2 * a], y[2 * a + 1])).collect();
            let st = PlanarState::new(z, strengths.clone())?;
            for (a, v) in st.eom_rhs()?.iter().enumerate() {
                dy[2 * a] = v.x;
                dy[2 * a + 1] = v.y;
            }
            Ok(())
        },
        0.0,
        &y0,
        t,
        cfg,
    )?;
    let mut angles = Vec::with_capacity(n);
    for a in 0..n {
        let z0 = state.z[a];
        let z1 = Vec2::new(traj.y_end[2 * a], traj.y_end[2 * a + 1]);
        if (z1.norm() - z0.norm()).abs() > 1e-6 * (1.0 + z0.norm()) {
            return Err(Error::NotRelativelyPeriodic(format!(
                "vortex {a} changed radius by {}",
                (z1.norm() - z0.norm()).abs()
            )));
        }
        angles.push(z1.cmul(z0.conj()).arg());
    }
    let first = angles[0];
    for (a, th) in angles.iter().enumerate().skip(1) {
        if wrap_angle(th - first).abs() > 1e-6 {
            return Err(Error::NotRelativelyPeriodic(format!(
                "rotation angles disagree: vortex 0 {} vs vortex {a} {}",
                first, th
            )));
        }
    }
    Ok(mod_2pi(angles.iter().map(|a| wrap_angle(a - first)).sum::<f64>() / n as f64 + first))
}

/// Per-chart geometric phase, or the reason the chart was skipped.
#[derive(Debug, Clone)]
pub struct ChartCheck {
    pub chart: usize,
    pub theta_g: Option<f64>,
    pub note: Option<String>,
}

/// Recomputes theta_g through each of the three chart orderings by pushing
/// the orbit's configurations through that chart's pipeline; the values must
/// agree mod 2 pi.
pub fn chart_independence_check(ctx: &ReducedContext, orbit: &PeriodicOrbit) -> Result<Vec<ChartCheck>> {
    let t = orbit.period;
    let mut out = Vec::new();
    for k in 0..3 {
        let res = (|| -> Result<f64> {
            let alt = ReducedContext::new(ctx.strengths.clone(), ctx.mu, k)?;
            let mut y = [0.0; 2];
            let mut sum = 0.0;
            for s in 0..N_SAMPLES {
                orbit.traj.eval(t * s as f64 / N_SAMPLES as f64, &mut y);
                // representative configuration (phi2 drops out of I1', phi1')
                let state = ctx.reconstruct(y[0], y[1], 0.0)?;
                let (red, _) = crate::jacobi::pipeline_forward(&state, &alt.chart)?;
                let g = alt.ham_grad(red.i1, red.phi1)?;
                sum += (1.0 - red.i1 / alt.mu) * (-g.dh_di1);
            }
            Ok(-sum * t / N_SAMPLES as f64)
        })();
        match res {
            Ok(v) => out.push(ChartCheck { chart: k, theta_g: Some(v), note: None }),
            Err(e) => out.push(ChartCheck { chart: k, theta_g: None, note: Some(e.to_string()) }),
        }
    }
    Ok(out)
}

/// Finds all distinct periodic orbits on the energy level set, deduplicated
/// by their I1 range.
pub fn orbits_at_energy(
    ctx: &ReducedContext,
    energy: f64,
    cfg: &IntegratorConfig,
    t_max: f64,
) -> Result<Vec<PeriodicOrbit>> {
    let mut orbits: Vec<PeriodicOrbit> = Vec::new();
    for seed in level_set_seeds(ctx, energy) {
        match find_periodic_orbit(ctx, seed[0], seed[1], cfg, t_max) {
            Ok(orb) => {
                let dup = orbits.iter().any(|o| {
                    let span = (o.i1_max - o.i1_min).max(1e-6);
                    ((o.period - orb.period) / o.period).abs() < 1e-6
                        && (o.i1_min - orb.i1_min).abs() < 0.05 * span
                        && (o.i1_max - orb.i1_max).abs() < 0.05 * span
                });
                if !dup {
                    orbits.push(orb);
                }
            }
            Err(Error::Equilibrium) | Err(Error::NotPeriodic(_)) => continue,
            Err(Error::OutOfDomain(_)) | Err(Error::ChartSingularity(_)) => continue,
            Err(Error::IntegrationFailure { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    orbits.sort_by(|a, b| a.period.total_cmp(&b.period));
    Ok(orbits)
}

/// Assembles the full phase report for one orbit, computing the total phase
/// independently from the unreduced dynamics.
pub fn phase_report(ctx: &ReducedContext, orbit: &PeriodicOrbit, cfg: &IntegratorConfig) -> Result<PhaseReport> {
    let theta_g = geometric_phase_line(ctx, orbit)?;
    let theta_d = dynamic_phase_closed_form(&ctx.strengths, ctx.mu, orbit.period)?;
    let state = ctx.reconstruct(orbit.start[0], orbit.start[1], 0.0)?;
    let theta_tot = total_phase_reconstruction(&state, orbit.period, cfg)?;
    Ok(PhaseReport {
        energy: orbit.energy,
        period: orbit.period,
        theta_g,
        theta_g_mod: mod_2pi(theta_g),
        theta_d,
        theta_tot_mod: theta_tot,
    })
}
