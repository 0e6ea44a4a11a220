//! Closed-form elliptic machinery for three identical vortices: the cubic
//! satisfied by the shape variable I, Jacobi sn and the complete elliptic
//! integral K, and the exact period of I(t) on either branch.
//!
//! Modulus convention: `elliptic_k` and `jacobi_sn` take the modulus k
//! (so the parameter in the Legendre normal form is k^2), never the
//! parameter itself.

use crate::dynamics::PlanarState;
use crate::error::{Error, Result};
use crate::plane::Vec2;

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// Complete elliptic integral of the first kind, modulus k, by AGM.
pub fn elliptic_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::OutOfDomain(format!("modulus {k} outside [0, 1)")));
    }
    let mut a = 1.0f64;
    let mut b = (1.0 - k * k).sqrt();
    for _ in 0..60 {
        if (a - b).abs() < 1e-16 * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    Ok(std::f64::consts::FRAC_PI_2 / a)
}

/// Jacobi sn(u, k), modulus k, by the AGM/descending-Landen amplitude
/// recursion; period 4 K(k) in u.
pub fn jacobi_sn(u: f64, k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::OutOfDomain(format!("modulus {k} outside [0, 1)")));
    }
    if k < 1e-12 {
        return Ok(u.sin());
    }
    let mut a = vec![1.0f64];
    let mut c = vec![k];
    let mut b = (1.0 - k * k).sqrt();
    while *c.last().unwrap() > 1e-16 {
        let al = *a.last().unwrap();
        let an = 0.5 * (al + b);
        let cn = 0.5 * (al - b);
        b = (al * b).sqrt();
        a.push(an);
        c.push(cn);
        if a.len() > 60 {
            break;
        }
    }
    let n = a.len() - 1;
    let mut phi = (1u64 << n) as f64 * a[n] * u;
    for i in (1..=n).rev() {
        phi = 0.5 * (phi + (c[i] / a[i] * phi.sin()).asin());
    }
    Ok(phi.sin())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    A,
    B,
}

/// Elliptic data for the identical-vortex shape oscillation. The cubic
/// roots are stored ascending; the motion runs between `i_lo()..i_hi()`'s
/// labeled combinations per branch.
#[derive(Debug, Clone, Copy)]
pub struct ApParams {
    pub lambda2: f64,
    /// Ascending roots (e1 <= e2 <= e3) of
    /// I^3 + 6 I^2 + (9 - 24 lambda^2) I + 8 lambda^2 (2 lambda^2 - 1).
    pub roots: [f64; 3],
    pub branch: Branch,
    pub kappa: f64,
    pub omega: f64,
    /// Modulus (so the Legendre parameter is m * m).
    pub m: f64,
}

impl ApParams {
    /// Root bounding the motion from above on both branches.
    pub fn i_hi(&self) -> f64 {
        self.roots[2]
    }

    /// Lower bound of the motion: 0 on branch a, the middle root on b.
    pub fn i_lo(&self) -> f64 {
        match self.branch {
            Branch::A => 0.0,
            Branch::B => self.roots[1],
        }
    }
}

/// Solves x^3 + b x^2 + c x + d = 0 with three real roots, ascending.
fn cubic_roots(b: f64, c: f64, d: f64) -> Result<[f64; 3]> {
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    if p >= 0.0 {
        return Err(Error::OutOfDomain("cubic does not have three real roots".into()));
    }
    let r = (-p / 3.0).sqrt();
    let arg = (3.0 * q / (2.0 * p * r)).clamp(-1.0, 1.0);
    let theta = arg.acos();
    let mut roots = [0.0; 3];
    for (k, root) in roots.iter_mut().enumerate() {
        *root = 2.0 * r * ((theta - std::f64::consts::TAU * k as f64) / 3.0).cos() - b / 3.0;
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// Assembles the branch data from the energy H and the level I2 = Theta0/2
/// of three vortices of identical strength gamma.
pub fn ap_params(h: f64, i2: f64, gamma: f64) -> Result<ApParams> {
    if i2 <= 0.0 || gamma == 0.0 {
        return Err(Error::OutOfDomain("need I2 > 0 and gamma != 0".into()));
    }
    let g = gamma.abs();
    let lambda2 = (-FOUR_PI * h / (g * g)).exp() * g * g * g / (8.0 * i2 * i2 * i2);
    if !(0.0..1.0).contains(&lambda2.sqrt()) || lambda2 <= 0.0 {
        return Err(Error::OutOfDomain(format!("lambda = {} outside (0, 1)", lambda2.sqrt())));
    }
    // lambda = 1 is the equilateral relative equilibrium: I is constant and
    // the cubic degenerates to a double root
    if lambda2 >= 1.0 - 1e-12 {
        return Err(Error::OutOfDomain("lambda = 1: degenerate (equilateral) level".into()));
    }
    if (lambda2 - 0.5).abs() < 1e-12 {
        return Err(Error::OutOfDomain("lambda at the branch point 1/sqrt(2)".into()));
    }
    let roots = cubic_roots(6.0, 9.0 - 24.0 * lambda2, 8.0 * lambda2 * (2.0 * lambda2 - 1.0))?;
    let [e1, e2, e3] = roots;
    // labeled roots: (smallest, middle, largest) = (curly-I1, curly-I2, curly-I0)
    let (i1, i2r, i0) = (e1, e2, e3);
    let (branch, kappa, m2, omega) = if lambda2 < 0.5 {
        (
            Branch::A,
            i0 / i1,
            i0 * (i2r - i1) / (i1 * (i2r - i0)),
            0.5 * ((i2r - i0) * i1).sqrt(),
        )
    } else {
        (
            Branch::B,
            (i2r - i0) / (i2r - i1),
            i1 * (i2r - i0) / (i0 * (i2r - i1)),
            0.5 * (i0 * (i2r - i1)).sqrt(),
        )
    };
    if !(0.0..1.0).contains(&m2) || !omega.is_finite() || omega <= 0.0 {
        return Err(Error::Inconsistency(format!(
            "branch data out of range: m2 = {m2}, omega = {omega}"
        )));
    }
    Ok(ApParams { lambda2, roots, branch, kappa, omega, m: m2.sqrt() })
}

/// Dimensionless time tau corresponding to physical time t.
pub fn ap_tau_of_t(params: &ApParams, t: f64, i2: f64, gamma: f64) -> f64 {
    3.0 * gamma * gamma * t / (FOUR_PI * params.lambda2 * i2)
}

/// Exact period of I(t) in physical time: 8 pi lambda^2 I2 K(m) / (3 gamma^2 omega).
pub fn ap_period(params: &ApParams, i2: f64, gamma: f64) -> Result<f64> {
    let k = elliptic_k(params.m)?;
    Ok(8.0 * std::f64::consts::PI * params.lambda2 * i2 * k / (3.0 * gamma * gamma * params.omega))
}

/// sn-form solution I(tau), with tau measured from a maximum of I.
pub fn ap_sn_solution(params: &ApParams, tau: f64) -> Result<f64> {
    let s = jacobi_sn(params.omega * tau, params.m)?;
    let s2 = s * s;
    let i0 = params.roots[2];
    let i1 = params.roots[0];
    Ok((i0 - i1 * params.kappa * s2) / (1.0 - params.kappa * s2))
}

/// Integer multiple n with T_orbit ~ n * T_I; errors if the ratio is not an
/// integer to 1e-4 relative.
pub fn ap_reduced_period_multiple(t_i: f64, t_orbit: f64) -> Result<u32> {
    if t_i <= 0.0 || t_orbit <= 0.0 {
        return Err(Error::OutOfDomain("periods must be positive".into()));
    }
    let ratio = t_orbit / t_i;
    let n = ratio.round();
    if n < 1.0 || (t_orbit - n * t_i).abs() > 1e-4 * t_orbit {
        return Err(Error::Inconsistency(format!(
            "orbit period is not an integer multiple of the I period (ratio {ratio})"
        )));
    }
    Ok(n as u32)
}

/// The shape variable I = ((j2' - j1')/(j1' + j2'))^2 from the discrete
/// Fourier modes of the positions; translation invariant by construction.
pub fn ap_i_from_positions(state: &PlanarState) -> Result<f64> {
    if state.n() != 3 || !state.strengths.all_identical() {
        return Err(Error::Unsupported(
            "the shape variable I is defined for three identical vortices".into(),
        ));
    }
    let n = 3usize;
    let root_n = (n as f64).sqrt();
    let mut modes = [Vec2::ZERO; 3];
    for (nn, mode) in modes.iter_mut().enumerate() {
        let mut acc = Vec2::ZERO;
        for (a, z) in state.z.iter().enumerate() {
            let w = Vec2::from_angle(std::f64::consts::TAU * nn as f64 * a as f64 / n as f64);
            acc += z.cmul(w);
        }
        *mode = acc.scale(1.0 / root_n);
    }
    let j1 = modes[1].norm2() / 2.0;
    let j2 = modes[2].norm2() / 2.0;
    let denom = j1 + j2;
    if denom <= 0.0 {
        return Err(Error::OutOfDomain("all three vortices coincide".into()));
    }
    Ok(((j2 - j1) / denom).powi(2))
}

/// lambda^2 from the positions directly; constant along trajectories.
pub fn ap_lambda2_from_positions(state: &PlanarState) -> Result<f64> {
    if state.n() != 3 || !state.strengths.all_identical() {
        return Err(Error::Unsupported("lambda is defined for three identical vortices".into()));
    }
    let g = state.strengths.get(0).abs();
    let c = state.conserved_set()?;
    // Theta0 about the center of circulation
    let theta0 = c.theta0 - state.strengths.gamma_tot() * c.z0.norm2();
    if theta0 <= 0.0 {
        return Err(Error::OutOfDomain("Theta0 about the center must be positive".into()));
    }
    Ok((-FOUR_PI * c.h / (g * g)).exp() * g * g * g / (theta0 * theta0 * theta0))
}
