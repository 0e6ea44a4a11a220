//! Adaptive Dormand-Prince 5(4) integration with dense output, periodic
//! orbit detection on the reduced space via Poincare-section events, and an
//! independent period computation by arclength quadrature along the energy
//! level set.

use crate::error::{Error, Result};
use crate::reduced::{ReducedContext, Surface};

/// Tolerances and safeguards for the adaptive stepper.
#[derive(Debug, Clone)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
    /// Allowed drift of conserved quantities over one orbit, checked by
    /// callers against `PeriodicOrbit::energy_drift`.
    pub drift_budget: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            max_steps: 2_000_000,
            drift_budget: 1e-8,
        }
    }
}

// Dormand-Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
// embedded 4th-order error weights (b5 - b4)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// dense-output weights
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// One accepted step with its quartic interpolant.
#[derive(Debug, Clone)]
pub struct Step {
    pub t0: f64,
    pub h: f64,
    rcont: [Vec<f64>; 5],
}

impl Step {
    /// Evaluates the interpolant at local parameter theta in [0, 1].
    pub fn eval(&self, theta: f64, out: &mut [f64]) {
        let th1 = 1.0 - theta;
        for (d, o) in out.iter_mut().enumerate() {
            *o = self.rcont[0][d]
                + theta
                    * (self.rcont[1][d]
                        + th1
                            * (self.rcont[2][d]
                                + theta * (self.rcont[3][d] + th1 * self.rcont[4][d])));
        }
    }
}

/// A dense-output trajectory on [t_start, t_end].
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub steps: Vec<Step>,
    pub t_start: f64,
    pub t_end: f64,
    pub y_end: Vec<f64>,
    pub n_accepted: usize,
    pub n_rejected: usize,
}

impl Trajectory {
    /// Evaluates the solution at time `t` (clamped to the covered span).
    pub fn eval(&self, t: f64, out: &mut [f64]) {
        let t = t.clamp(self.t_start.min(self.t_end), self.t_start.max(self.t_end));
        // binary search over step starts; steps are monotone in t0
        let forward = self.t_end >= self.t_start;
        let idx = self
            .steps
            .partition_point(|s| {
                if forward {
                    s.t0 + s.h <= t
                } else {
                    s.t0 + s.h >= t
                }
            })
            .min(self.steps.len() - 1);
        let s = &self.steps[idx];
        s.eval((t - s.t0) / s.h, out);
    }

    pub fn dim(&self) -> usize {
        self.y_end.len()
    }
}

/// Integrates dy/dt = f(t, y) from (t0, y0) to t1 (either direction).
pub fn integrate<F>(
    mut f: F,
    t0: f64,
    y0: &[f64],
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let mut traj = Trajectory {
        steps: Vec::new(),
        t_start: t0,
        t_end: t0,
        y_end: y0.to_vec(),
        n_accepted: 0,
        n_rejected: 0,
    };
    if t1 == t0 {
        return Ok(traj);
    }
    let mut stepper = Stepper::new(&mut f, t0, y0, cfg, (t1 - t0).signum())?;
    while !stepper.done(t1) {
        let step = stepper.advance(&mut f, Some(t1), cfg)?;
        traj.steps.push(step);
    }
    traj.t_end = stepper.t;
    traj.y_end = stepper.y.clone();
    traj.n_accepted = stepper.n_accepted;
    traj.n_rejected = stepper.n_rejected;
    Ok(traj)
}

/// Internal adaptive stepper state (FSAL).
struct Stepper {
    t: f64,
    y: Vec<f64>,
    k1: Vec<f64>,
    h: f64,
    dir: f64,
    n_accepted: usize,
    n_rejected: usize,
}

impl Stepper {
    fn new<F>(f: &mut F, t0: f64, y0: &[f64], cfg: &IntegratorConfig, dir: f64) -> Result<Self>
    where
        F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
    {
        let mut k1 = vec![0.0; y0.len()];
        f(t0, y0, &mut k1)?;
        // standard curvature-free starting guess
        let ny = y0.iter().map(|v| v * v).sum::<f64>().sqrt();
        let nf = k1.iter().map(|v| v * v).sum::<f64>().sqrt();
        let h0 = if nf > 1e-12 {
            (0.01 * (ny + cfg.abs_tol) / nf).min(cfg.max_step).max(1e-10)
        } else {
            1e-6
        };
        Ok(Stepper {
            t: t0,
            y: y0.to_vec(),
            k1,
            h: h0 * dir,
            dir,
            n_accepted: 0,
            n_rejected: 0,
        })
    }

    fn done(&self, t1: f64) -> bool {
        (t1 - self.t) * self.dir <= 1e-14 * t1.abs().max(1.0)
    }

    /// Takes one accepted step (retrying on error-control rejections) and
    /// returns it with its dense-output interpolant.
    fn advance<F>(&mut self, f: &mut F, t_limit: Option<f64>, cfg: &IntegratorConfig) -> Result<Step>
    where
        F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
    {
        let n = self.y.len();
        let mut k = vec![vec![0.0; n]; 7];
        k[0].copy_from_slice(&self.k1);
        let mut ytmp = vec![0.0; n];
        let mut attempts = 0usize;
        loop {
            attempts += 1;
            if self.n_accepted + self.n_rejected + attempts > cfg.max_steps {
                return Err(Error::IntegrationFailure {
                    t: self.t,
                    reason: "maximum step count exceeded".into(),
                });
            }
            let mut h = self.h.abs().min(cfg.max_step) * self.dir;
            if let Some(t1) = t_limit {
                if (self.t + h - t1) * self.dir > 0.0 {
                    h = t1 - self.t;
                }
            }
            if h.abs() < 1e-15 * self.t.abs().max(1.0) {
                return Err(Error::IntegrationFailure {
                    t: self.t,
                    reason: "step size underflow".into(),
                });
            }
            let t = self.t;
            let y = &self.y;
            let stage = |ytmp: &mut [f64], coeffs: &[(f64, usize)], k: &[Vec<f64>]| {
                for d in 0..n {
                    let mut acc = y[d];
                    for (a, s) in coeffs {
                        acc += h * a * k[*s][d];
                    }
                    ytmp[d] = acc;
                }
            };
            let res: Result<()> = (|| {
                let rows: [(&[(f64, usize)], f64); 6] = [
                    (&[(A21, 0)], C2),
                    (&[(A31, 0), (A32, 1)], C3),
                    (&[(A41, 0), (A42, 1), (A43, 2)], C4),
                    (&[(A51, 0), (A52, 1), (A53, 2), (A54, 3)], C5),
                    (&[(A61, 0), (A62, 1), (A63, 2), (A64, 3), (A65, 4)], 1.0),
                    (&[(A71, 0), (A73, 2), (A74, 3), (A75, 4), (A76, 5)], 1.0),
                ];
                for (s, (row, c)) in rows.iter().enumerate() {
                    stage(&mut ytmp, row, &k);
                    let mut knew = vec![0.0; n];
                    f(t + c * h, &ytmp, &mut knew)?;
                    k[s + 1] = knew;
                }
                Ok(())
            })();
            match res {
                Ok(()) => {}
                Err(Error::OutOfDomain(_)) | Err(Error::ChartSingularity(_)) | Err(Error::Collision(..)) => {
                    // shrink into the domain and retry
                    self.h *= 0.5;
                    self.n_rejected += 1;
                    continue;
                }
                Err(e) => return Err(e),
            }
            // 5th-order solution is the last stage argument ytmp (A7 row)
            let y1 = ytmp.clone();
            let mut err = 0.0;
            for d in 0..n {
                let e = h
                    * (E1 * k[0][d] + E3 * k[2][d] + E4 * k[3][d] + E5 * k[4][d] + E6 * k[5][d]
                        + E7 * k[6][d]);
                let sk = cfg.abs_tol + cfg.rel_tol * self.y[d].abs().max(y1[d].abs());
                err += (e / sk) * (e / sk);
            }
            let err = (err / n as f64).sqrt();
            let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
            if err <= 1.0 {
                let mut rcont = [
                    self.y.clone(),
                    vec![0.0; n],
                    vec![0.0; n],
                    vec![0.0; n],
                    vec![0.0; n],
                ];
                for d in 0..n {
                    let dy = y1[d] - self.y[d];
                    rcont[1][d] = dy;
                    rcont[2][d] = h * k[0][d] - dy;
                    rcont[3][d] = dy - h * k[6][d] - rcont[2][d];
                    rcont[4][d] = h
                        * (D1 * k[0][d] + D3 * k[2][d] + D4 * k[3][d] + D5 * k[4][d]
                            + D6 * k[5][d] + D7 * k[6][d]);
                }
                let step = Step { t0: self.t, h, rcont };
                self.t += h;
                self.y = y1;
                self.k1 = k[6].clone();
                self.h = h * fac;
                self.n_accepted += 1;
                return Ok(step);
            }
            self.h = h * fac;
            self.n_rejected += 1;
        }
    }
}

/// A closed orbit of the reduced flow with its dense trajectory over one
/// period starting at `start = (i1, phi1)`.
#[derive(Debug, Clone)]
pub struct PeriodicOrbit {
    pub period: f64,
    pub energy: f64,
    pub energy_drift: f64,
    pub start: [f64; 2],
    pub i1_min: f64,
    pub i1_max: f64,
    pub traj: Trajectory,
}

fn embed_point(ctx: &ReducedContext, i1: f64, phi1: f64) -> Result<[f64; 3]> {
    let e = ctx.embed(i1, phi1)?;
    Ok([e.x, e.y, e.z])
}

fn embed_velocity(ctx: &ReducedContext, i1: f64, phi1: f64, v: [f64; 2]) -> Result<[f64; 3]> {
    let m2 = ctx.mu * ctx.mu;
    let (rho2, drho2) = match ctx.surface() {
        Surface::Sphere => (m2 - i1 * i1, -2.0 * i1),
        Surface::Hyperboloid => (i1 * i1 - m2, 2.0 * i1),
    };
    if rho2 <= 0.0 {
        return Err(Error::OutOfDomain("embedding velocity at a pole".into()));
    }
    let rho = rho2.sqrt();
    let drho = drho2 / (2.0 * rho);
    let (c, s) = ((2.0 * phi1).cos(), (2.0 * phi1).sin());
    Ok([
        drho * v[0] * c - 2.0 * rho * s * v[1],
        drho * v[0] * s + 2.0 * rho * c * v[1],
        v[0],
    ])
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn dist3(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Integrates the reduced flow from `(i1, phi1)` until it first returns to
/// its starting point, detected as a rising crossing of the plane through
/// the start with normal along the initial velocity, filtered by proximity.
pub fn find_periodic_orbit(
    ctx: &ReducedContext,
    i1: f64,
    phi1: f64,
    cfg: &IntegratorConfig,
    t_max: f64,
) -> Result<PeriodicOrbit> {
    let scale = ctx.mu.abs();
    let v0 = ctx.vector_field(i1, phi1)?;
    let p0 = embed_point(ctx, i1, phi1)?;
    let ev0 = embed_velocity(ctx, i1, phi1, v0)?;
    let speed0 = dot3(ev0, ev0).sqrt();
    if speed0 < 1e-13 * scale {
        return Err(Error::Equilibrium);
    }
    let normal = [ev0[0] / speed0, ev0[1] / speed0, ev0[2] / speed0];
    let arm_dist = 1e-3 * scale;
    let prox = 5e-4 * scale;

    let mut rhs = |_t: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        let f = ctx.vector_field(y[0], y[1])?;
        dy[0] = f[0];
        dy[1] = f[1];
        Ok(())
    };
    let energy = ctx.hamiltonian(i1, phi1)?;
    let mut stepper = Stepper::new(&mut rhs, 0.0, &[i1, phi1], cfg, 1.0)?;
    let mut steps: Vec<Step> = Vec::new();
    let mut armed = false;
    let g_at = |y: &[f64]| -> Result<(f64, f64)> {
        let p = embed_point(ctx, y[0], y[1])?;
        Ok((
            (p[0] - p0[0]) * normal[0] + (p[1] - p0[1]) * normal[1] + (p[2] - p0[2]) * normal[2],
            dist3(p, p0),
        ))
    };
    let mut i1_min = i1;
    let mut i1_max = i1;
    let mut drift: f64 = 0.0;
    let mut y_prev = vec![i1, phi1];
    while stepper.t < t_max {
        let step = stepper.advance(&mut rhs, Some(t_max), cfg)?;
        i1_min = i1_min.min(stepper.y[0]);
        i1_max = i1_max.max(stepper.y[0]);
        drift = drift.max((ctx.hamiltonian(stepper.y[0], stepper.y[1])? - energy).abs());
        // scan the step's interpolant for a rising, proximate crossing
        let mut ybuf = vec![0.0; 2];
        let samples = 16;
        let (mut g_lo, d_lo) = g_at(&y_prev)?;
        let mut th_lo = 0.0;
        if !armed && d_lo > arm_dist {
            armed = true;
        }
        let mut found: Option<f64> = None;
        for s in 1..=samples {
            let th = s as f64 / samples as f64;
            step.eval(th, &mut ybuf);
            let (g_hi, d_hi) = g_at(&ybuf)?;
            if !armed && d_hi > arm_dist {
                armed = true;
            }
            if armed && g_lo < 0.0 && g_hi >= 0.0 && d_hi.min(d_lo) < 10.0 * prox {
                // bisect inside [th_lo, th]
                let (mut a, mut b) = (th_lo, th);
                for _ in 0..80 {
                    let m = 0.5 * (a + b);
                    step.eval(m, &mut ybuf);
                    let (gm, _) = g_at(&ybuf)?;
                    if gm < 0.0 {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                let th_star = 0.5 * (a + b);
                step.eval(th_star, &mut ybuf);
                let (_, d_star) = g_at(&ybuf)?;
                if d_star < prox {
                    found = Some(th_star);
                    break;
                }
            }
            g_lo = g_hi;
            th_lo = th;
        }
        y_prev = stepper.y.clone();
        if let Some(th_star) = found {
            let period = step.t0 + th_star * step.h;
            let mut y_end = vec![0.0; 2];
            step.eval(th_star, &mut y_end);
            steps.push(step);
            let traj = Trajectory {
                steps,
                t_start: 0.0,
                t_end: period,
                y_end,
                n_accepted: stepper.n_accepted,
                n_rejected: stepper.n_rejected,
            };
            return Ok(PeriodicOrbit {
                period,
                energy,
                energy_drift: drift,
                start: [i1, phi1],
                i1_min,
                i1_max,
                traj,
            });
        }
        steps.push(step);
    }
    Err(Error::NotPeriodic(t_max))
}

/// Computes the period of the level-set component through `(i1, phi1)` by
/// arclength continuation along h = E with T = closed integral of ds/|X_h|,
/// never integrating the flow in time. Richardson-extrapolated in the
/// arclength step.
pub fn period_by_quadrature(ctx: &ReducedContext, i1: f64, phi1: f64, ds: f64) -> Result<f64> {
    let t1 = trace_level_set(ctx, i1, phi1, ds)?;
    let t2 = trace_level_set(ctx, i1, phi1, ds / 2.0)?;
    Ok((4.0 * t2 - t1) / 3.0)
}

fn trace_level_set(ctx: &ReducedContext, i1_0: f64, phi1_0: f64, ds: f64) -> Result<f64> {
    let energy = ctx.hamiltonian(i1_0, phi1_0)?;
    let pi = std::f64::consts::PI;
    let unit_tangent = |p: [f64; 2]| -> Result<([f64; 2], f64)> {
        let g = ctx.ham_grad(p[0], p[1])?;
        let speed = (g.dh_di1 * g.dh_di1 + g.dh_dphi1 * g.dh_dphi1).sqrt();
        if speed < 1e-13 {
            return Err(Error::Equilibrium);
        }
        Ok(([g.dh_dphi1 / speed, -g.dh_di1 / speed], speed))
    };
    let correct = |mut p: [f64; 2]| -> Result<[f64; 2]> {
        for _ in 0..4 {
            let g = ctx.ham_grad(p[0], p[1])?;
            let r = g.h - energy;
            let n2 = g.dh_di1 * g.dh_di1 + g.dh_dphi1 * g.dh_dphi1;
            p[0] -= r * g.dh_di1 / n2;
            p[1] -= r * g.dh_dphi1 / n2;
            if r.abs() < 1e-14 * (1.0 + energy.abs()) {
                break;
            }
        }
        Ok(p)
    };

    let p0 = [i1_0, phi1_0];
    let mut p = p0;
    let mut total = 0.0;
    let (mut t_here, mut speed_here) = unit_tangent(p)?;
    let max_iter = (200.0 / ds) as usize + 10_000;
    for it in 0..max_iter {
        // Heun predictor along the level set, Newton back onto it
        let pe = [p[0] + ds * t_here[0], p[1] + ds * t_here[1]];
        let (te, _) = unit_tangent(correct(pe)?)?;
        let pn = correct([
            p[0] + 0.5 * ds * (t_here[0] + te[0]),
            p[1] + 0.5 * ds * (t_here[1] + te[1]),
        ])?;
        let (tn, speed_n) = unit_tangent(pn)?;
        total += 0.5 * ds * (1.0 / speed_here + 1.0 / speed_n);
        // closure check modulo the pi translation symmetry in phi1
        if it > 5 {
            let mut dphi = (pn[1] - p0[1]) % pi;
            if dphi > pi / 2.0 {
                dphi -= pi;
            } else if dphi < -pi / 2.0 {
                dphi += pi;
            }
            let di = pn[0] - p0[0];
            let gap = (di * di + dphi * dphi).sqrt();
            if gap < 1.5 * ds {
                // close the loop with the signed along-tangent remainder
                let along = di * tn[0] + dphi * tn[1];
                let remain = -along;
                total += remain / speed_n;
                return Ok(total);
            }
        }
        p = pn;
        t_here = tn;
        speed_here = speed_n;
    }
    Err(Error::NotPeriodic(total))
}

/// Seeds for periodic orbits at energy E: roots of h(I1, phi1) - E on a fine
/// I1 grid at a few fixed angles, deduplicated later by the orbit's I1 range.
pub fn level_set_seeds(ctx: &ReducedContext, energy: f64) -> Vec<[f64; 2]> {
    let pi = std::f64::consts::PI;
    let angles = [0.0, pi / 2.0, pi / 4.0, 3.0 * pi / 4.0];
    let m = ctx.mu.abs();
    let (lo, hi) = match ctx.surface() {
        Surface::Sphere => (-m * (1.0 - 1e-6), m * (1.0 - 1e-6)),
        Surface::Hyperboloid => (m * (1.0 + 1e-6), 20.0 * m),
    };
    let n = 4001;
    let mut seeds = Vec::new();
    for &phi in &angles {
        let mut prev: Option<(f64, f64)> = None;
        for k in 0..n {
            let i1 = lo + (hi - lo) * k as f64 / (n - 1) as f64;
            let h = match ctx.hamiltonian(i1, phi) {
                Ok(h) => h,
                Err(_) => {
                    prev = None;
                    continue;
                }
            };
            if let Some((i1p, hp)) = prev {
                if (hp - energy) * (h - energy) < 0.0 {
                    // bisect the bracket
                    let (mut a, mut b, mut ha) = (i1p, i1, hp);
                    for _ in 0..80 {
                        let mid = 0.5 * (a + b);
                        match ctx.hamiltonian(mid, phi) {
                            Ok(hm) => {
                                if (ha - energy) * (hm - energy) <= 0.0 {
                                    b = mid;
                                } else {
                                    a = mid;
                                    ha = hm;
                                }
                            }
                            Err(_) => break,
                        }
                    }
                    seeds.push([0.5 * (a + b), phi]);
                }
            }
            prev = Some((i1, h));
        }
    }
    seeds
}
