//! Four identical vortices: unitary DFT canonical transformation, the
//! action-angle chart built from the A/B matrix pair, the reduced
//! Hamiltonian with analytic gradient, and the connection 1-form.

use crate::dynamics::{PlanarState, Strengths};
use crate::error::{Error, Result};
use crate::plane::{wrap_angle, Vec2};

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;
const N: usize = 4;
/// The torus period of the angles phi1, phi2.
pub const TORUS_PERIOD: f64 = std::f64::consts::TAU / 3.0;

/// A maps I -> j (columns chosen so that A^T B = identity).
pub const A_MAT: [[f64; 3]; 3] = [
    [-1.0 / 3.0, 0.0, 1.0 / 3.0],
    [1.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0],
    [0.0, 1.0 / 3.0, 1.0 / 3.0],
];
/// B maps phi -> theta; B^T maps j -> I.
pub const B_MAT: [[f64; 3]; 3] = [
    [-2.0, -1.0, 1.0],
    [1.0, -1.0, 1.0],
    [1.0, 2.0, 1.0],
];

/// Unitary DFT modes of the four positions; r0 = 2 Z0.
#[derive(Debug, Clone, Copy)]
pub struct Mode4 {
    pub r: [Vec2; 4],
    pub gamma: f64,
}

/// Sum/difference action-angle chart of the centered four-vortex problem.
/// phi1, phi2 live on a torus of period 2 pi / 3 (with compensating phi3
/// shifts); mu = -gamma * i3.
#[derive(Debug, Clone, Copy)]
pub struct Reduced4 {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub phi3: f64,
    pub gamma: f64,
}

impl Reduced4 {
    pub fn mu(&self) -> f64 {
        -self.gamma * self.i3
    }
}

/// Value and analytic gradient of the reduced Hamiltonian (phi3 absent by
/// rotational invariance).
#[derive(Debug, Clone, Copy)]
pub struct HamGrad4 {
    pub h: f64,
    pub dh_di: [f64; 3],
    pub dh_dphi: [f64; 2],
}

fn check_four_identical(strengths: &Strengths) -> Result<f64> {
    if strengths.len() != N || !strengths.all_identical() {
        return Err(Error::Unsupported(
            "the DFT chart requires four identical vortices".into(),
        ));
    }
    Ok(strengths.get(0))
}

/// r_n = (1/2) sum_a z_a exp(+i 2 pi n a / 4).
pub fn dft_forward(state: &PlanarState) -> Result<Mode4> {
    let gamma = check_four_identical(&state.strengths)?;
    let mut r = [Vec2::ZERO; 4];
    for (n, mode) in r.iter_mut().enumerate() {
        let mut acc = Vec2::ZERO;
        for (a, z) in state.z.iter().enumerate() {
            acc += z.cmul(Vec2::from_angle(std::f64::consts::TAU * (n * a) as f64 / N as f64));
        }
        *mode = acc.scale(0.5);
    }
    Ok(Mode4 { r, gamma })
}

/// z_a = (1/2) sum_n r_n exp(-i 2 pi n a / 4).
pub fn dft_inverse(m: &Mode4) -> Result<PlanarState> {
    let mut z = vec![Vec2::ZERO; 4];
    for (a, za) in z.iter_mut().enumerate() {
        let mut acc = Vec2::ZERO;
        for (n, rn) in m.r.iter().enumerate() {
            acc += rn.cmul(Vec2::from_angle(-std::f64::consts::TAU * (n * a) as f64 / N as f64));
        }
        *za = acc.scale(0.5);
    }
    PlanarState::new(z, Strengths::identical(4, m.gamma)?)
}

fn matvec(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (r, o) in out.iter_mut().enumerate() {
        *o = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2];
    }
    out
}

fn matvec_t(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (c, o) in out.iter_mut().enumerate() {
        *o = m[0][c] * v[0] + m[1][c] * v[1] + m[2][c] * v[2];
    }
    out
}

/// Actions/angles of the nonzero modes mapped through B^T / A^T; requires a
/// centered configuration (r0 = 0).
pub fn aa4_forward(m: &Mode4) -> Result<Reduced4> {
    let scale: f64 = m.r.iter().map(|r| r.norm()).fold(0.0, f64::max);
    if m.r[0].norm() > 1e-10 * scale.max(1.0) {
        return Err(Error::OutOfDomain(
            "chart requires the center of circulation at the origin (r0 = 0)".into(),
        ));
    }
    let mut j = [0.0; 3];
    let mut theta = [0.0; 3];
    for n in 1..4 {
        if m.r[n].norm2() == 0.0 {
            return Err(Error::ChartSingularity(format!("DFT mode {n} vanishes")));
        }
        j[n - 1] = m.r[n].norm2() / 2.0;
        theta[n - 1] = m.r[n].arg();
    }
    let i = matvec_t(&B_MAT, j);
    let phi = matvec_t(&A_MAT, theta);
    let mut red = Reduced4 {
        i1: i[0],
        i2: i[1],
        i3: i[2],
        phi1: phi[0],
        phi2: phi[1],
        phi3: phi[2],
        gamma: m.gamma,
    };
    // fold phi1, phi2 into [0, 2pi/3) using the identifications
    // (phi1, phi3) ~ (phi1 - 2pi/3, phi3 + 2pi/3)  [theta1 + 2pi]
    // (phi2, phi3) ~ (phi2 + 2pi/3, phi3 + 2pi/3)  [theta3 + 2pi]
    while red.phi1 < 0.0 {
        red.phi1 += TORUS_PERIOD;
        red.phi3 -= TORUS_PERIOD;
    }
    while red.phi1 >= TORUS_PERIOD {
        red.phi1 -= TORUS_PERIOD;
        red.phi3 += TORUS_PERIOD;
    }
    while red.phi2 < 0.0 {
        red.phi2 += TORUS_PERIOD;
        red.phi3 += TORUS_PERIOD;
    }
    while red.phi2 >= TORUS_PERIOD {
        red.phi2 -= TORUS_PERIOD;
        red.phi3 -= TORUS_PERIOD;
    }
    red.phi3 = wrap_angle(red.phi3);
    Ok(red)
}

/// Rebuilds the centered modes from the chart; inverse of `aa4_forward`
/// modulo the torus identifications.
pub fn aa4_inverse(red: &Reduced4) -> Result<Mode4> {
    let j = matvec(&A_MAT, [red.i1, red.i2, red.i3]);
    if j.iter().any(|v| *v <= 0.0) {
        return Err(Error::OutOfDomain(
            "(I1, I2, I3) outside the open action triangle (some j_n <= 0)".into(),
        ));
    }
    let theta = matvec(&B_MAT, [red.phi1, red.phi2, red.phi3]);
    let mut r = [Vec2::ZERO; 4];
    for n in 1..4 {
        r[n] = Vec2::from_angle(theta[n - 1]).scale((2.0 * j[n - 1]).sqrt());
    }
    Ok(Mode4 { r, gamma: red.gamma })
}

/// Reconstructs positions from the chart (center of circulation at origin).
pub fn reconstruct4(red: &Reduced4) -> Result<PlanarState> {
    dft_inverse(&aa4_inverse(red)?)
}

/// Reduced Hamiltonian h(I1, I2, I3, phi1, phi2) with chain-rule gradient.
pub fn ham4_grad(red: &Reduced4) -> Result<HamGrad4> {
    let modes = aa4_inverse(red)?;
    let state = dft_inverse(&modes)?;
    let gamma = red.gamma;
    // sum of ln b_ab and its gradient with respect to positions;
    // h = -(gamma^2/4pi) * that sum
    let pref = -gamma * gamma / FOUR_PI;
    let mut log_sum = 0.0;
    let mut gz = [Vec2::ZERO; 4];
    for a in 0..4 {
        for b in (a + 1)..4 {
            let d = state.z[a] - state.z[b];
            let b2 = d.norm2();
            if b2 <= 0.0 {
                return Err(Error::Collision(a, b));
            }
            log_sum += b2.ln();
            let g = d.scale(2.0 / b2);
            gz[a] += g;
            gz[b] -= g;
        }
    }
    let h = pref * log_sum;
    let j = matvec(&A_MAT, [red.i1, red.i2, red.i3]);
    let mut dh_dj = [0.0; 3];
    let mut dh_dtheta = [0.0; 3];
    for n in 1..4 {
        let rn = modes.r[n];
        let dr_dj = rn.scale(1.0 / (2.0 * j[n - 1]));
        let dr_dtheta = rn.rot90();
        for a in 0..4 {
            let w = Vec2::from_angle(-std::f64::consts::TAU * (n * a) as f64 / N as f64);
            let dz_dj = dr_dj.cmul(w).scale(0.5);
            let dz_dtheta = dr_dtheta.cmul(w).scale(0.5);
            dh_dj[n - 1] += pref * gz[a].dot(dz_dj);
            dh_dtheta[n - 1] += pref * gz[a].dot(dz_dtheta);
        }
    }
    let dh_di_full = matvec_t(&A_MAT, dh_dj);
    let dh_dphi_full = matvec_t(&B_MAT, dh_dtheta);
    // dh/dphi3 vanishes by rotational invariance; keep the first two
    Ok(HamGrad4 {
        h,
        dh_di: dh_di_full,
        dh_dphi: [dh_dphi_full[0], dh_dphi_full[1]],
    })
}

/// Reduced Hamiltonian value only.
pub fn ham4(red: &Reduced4) -> Result<f64> {
    Ok(ham4_grad(red)?.h)
}

/// Full chart velocity (dI1, dI2, dphi1, dphi2, dphi3)/dt; dI3/dt = 0.
pub fn vector_field4(red: &Reduced4) -> Result<[f64; 5]> {
    let g = ham4_grad(red)?;
    let inv_g = 1.0 / red.gamma;
    Ok([
        inv_g * g.dh_dphi[0],
        inv_g * g.dh_dphi[1],
        -inv_g * g.dh_di[0],
        -inv_g * g.dh_di[1],
        -inv_g * g.dh_di[2],
    ])
}

/// Connection 1-form alpha = (I1/I3) dphi1 + (I2/I3) dphi2 + dphi3 on a
/// tangent vector with components along (I1, I2, phi1, phi2, phi3).
pub fn connection_eval4(i1: f64, i2: f64, i3: f64, u: [f64; 5]) -> f64 {
    (i1 / i3) * u[2] + (i2 / i3) * u[3] + u[4]
}

/// Coefficients of (dphi1, dphi2) in the section pullback sigma* alpha
/// under the section phi3 derived from theta2 = const.
pub fn section_pullback4(i1: f64, i2: f64, i3: f64) -> [f64; 2] {
    [i1 / i3 - 1.0, i2 / i3 + 1.0]
}

/// alpha(X_h) at the chart point; constant -3 gamma^2 / (2 pi mu).
pub fn xi4(red: &Reduced4) -> Result<f64> {
    let v = vector_field4(red)?;
    Ok(connection_eval4(red.i1, red.i2, red.i3, v))
}

/// Closed-form alpha(X_h).
pub fn xi4_closed_form(gamma: f64, mu: f64) -> f64 {
    -3.0 * gamma * gamma / (std::f64::consts::TAU * mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::{integrate, IntegratorConfig};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_centered(rng: &mut impl Rng, gamma: f64) -> PlanarState {
        loop {
            let mut z: Vec<Vec2> = (0..4)
                .map(|_| Vec2::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)))
                .collect();
            let mean = (z[0] + z[1] + z[2] + z[3]).scale(0.25);
            for p in z.iter_mut() {
                *p = *p - mean;
            }
            if let Ok(st) = PlanarState::new(z, Strengths::identical(4, gamma).unwrap()) {
                let sep = (0..4).all(|a| ((a + 1)..4).all(|b| (st.z[a] - st.z[b]).norm() > 5e-2));
                let modes_ok = dft_forward(&st)
                    .map(|m| m.r.iter().skip(1).all(|r| r.norm() > 1e-3))
                    .unwrap_or(false);
                if sep && modes_ok {
                    return st;
                }
            }
        }
    }

    #[test]
    fn matrices_are_dual() {
        for r in 0..3 {
            for c in 0..3 {
                let mut dot = 0.0;
                for k in 0..3 {
                    dot += A_MAT[k][r] * B_MAT[k][c];
                }
                let want = if r == c { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn square_is_single_mode() {
        let st = PlanarState::new(
            vec![
                Vec2::new(1.0, 0.0),
                Vec2::new(0.0, 1.0),
                Vec2::new(-1.0, 0.0),
                Vec2::new(0.0, -1.0),
            ],
            Strengths::identical(4, 1.0).unwrap(),
        )
        .unwrap();
        let m = dft_forward(&st).unwrap();
        for n in 0..3 {
            assert!(m.r[n].norm() < 1e-14, "mode {n} = {:?}", m.r[n]);
        }
        assert!((m.r[3] - Vec2::new(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn pair_symmetric_kills_even_modes() {
        let (a, b) = (Vec2::new(0.9, 0.2), Vec2::new(-0.3, 1.1));
        let st = PlanarState::new(
            vec![a, b, -a, -b],
            Strengths::identical(4, 1.0).unwrap(),
        )
        .unwrap();
        let m = dft_forward(&st).unwrap();
        assert!(m.r[0].norm() < 1e-14);
        assert!(m.r[2].norm() < 1e-14);
    }

    #[test]
    fn dft_unitary_round_trip_and_parseval() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..30 {
            let st = random_centered(&mut rng, 1.0);
            let m = dft_forward(&st).unwrap();
            let back = dft_inverse(&m).unwrap();
            for a in 0..4 {
                assert!((back.z[a] - st.z[a]).norm() < 1e-13);
            }
            let sz: f64 = st.z.iter().map(|z| z.norm2()).sum();
            let sr: f64 = m.r.iter().map(|r| r.norm2()).sum();
            assert!((sz - sr).abs() < 1e-12 * (1.0 + sz));
            // r0 = 2 Z0 (zero here by centering)
            assert!(m.r[0].norm() < 1e-13);
        }
    }

    #[test]
    fn delta_matrix_relation() {
        // (r1, r2, r3, 0) = (1/2) M (d12, d13, d24, d34) with the displayed
        // half-matrix; translation-invariant, so valid for any state
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..20 {
            let st = random_centered(&mut rng, 1.0);
            let m = dft_forward(&st).unwrap();
            let d12 = st.z[0] - st.z[1];
            let d13 = st.z[0] - st.z[2];
            let d24 = st.z[1] - st.z[3];
            let d34 = st.z[2] - st.z[3];
            let r1 = (d13 + d24.rot90()).scale(0.5);
            let r2 = (d12 + d34).scale(0.5);
            let r3 = (d13 - d24.rot90()).scale(0.5);
            let zero = (d12 - d13 + d24 - d34).scale(0.5);
            assert!((r1 - m.r[1]).norm() < 1e-12);
            assert!((r2 - m.r[2]).norm() < 1e-12);
            assert!((r3 - m.r[3]).norm() < 1e-12);
            assert!(zero.norm() < 1e-12);
        }
    }

    #[test]
    fn chart_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..30 {
            let st = random_centered(&mut rng, 1.0);
            let m = dft_forward(&st).unwrap();
            let red = aa4_forward(&m).unwrap();
            assert!((0.0..TORUS_PERIOD).contains(&red.phi1));
            assert!((0.0..TORUS_PERIOD).contains(&red.phi2));
            let m2 = aa4_inverse(&red).unwrap();
            // angles theta differ by multiples of 2 pi, so the modes agree
            for n in 0..4 {
                assert!((m2.r[n] - m.r[n]).norm() < 1e-11, "mode {n}");
            }
            let back = reconstruct4(&red).unwrap();
            for a in 0..4 {
                assert!((back.z[a] - st.z[a]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn i3_from_theta0() {
        // Parseval for the unitary DFT: sum_n |r_n|^2 = sum_a |z_a|^2, so
        // I3 = sum_n j_n = Theta0 / (2 gamma) on centered configurations.
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for gamma in [1.0, 2.5] {
            let st = random_centered(&mut rng, gamma);
            let red = aa4_forward(&dft_forward(&st).unwrap()).unwrap();
            let c = st.conserved_set().unwrap();
            assert!((red.i3 - c.theta0 / (2.0 * gamma)).abs() < 1e-11 * (1.0 + red.i3.abs()));
            assert!((red.mu() - (-c.theta0 / 2.0)).abs() < 1e-11 * (1.0 + c.theta0.abs()));
        }
    }

    #[test]
    fn rotation_shifts_phi3_only() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        let st = random_centered(&mut rng, 1.0);
        let red = aa4_forward(&dft_forward(&st).unwrap()).unwrap();
        let delta = 0.37;
        let rot = Vec2::from_angle(delta);
        let st2 = PlanarState::new(
            st.z.iter().map(|z| z.cmul(rot)).collect(),
            st.strengths.clone(),
        )
        .unwrap();
        let red2 = aa4_forward(&dft_forward(&st2).unwrap()).unwrap();
        assert!((red2.i1 - red.i1).abs() < 1e-12);
        assert!((red2.i2 - red.i2).abs() < 1e-12);
        assert!((red2.i3 - red.i3).abs() < 1e-12);
        assert!((red2.phi1 - red.phi1).abs() < 1e-12);
        assert!((red2.phi2 - red.phi2).abs() < 1e-12);
        assert!(wrap_angle(red2.phi3 - red.phi3 - delta).abs() < 1e-12);
    }

    #[test]
    fn reduced_hamiltonian_matches_full() {
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        for _ in 0..100 {
            let st = random_centered(&mut rng, 1.0);
            let red = aa4_forward(&dft_forward(&st).unwrap()).unwrap();
            let h_red = ham4(&red).unwrap();
            let h_full = st.hamiltonian().unwrap();
            assert!((h_red - h_full).abs() < 1e-11 * (1.0 + h_full.abs()));
            // phi3-independence: value unchanged under a phi3 shift
            let red2 = Reduced4 { phi3: red.phi3 + 1.234, ..red };
            assert!((ham4(&red2).unwrap() - h_red).abs() < 1e-12 * (1.0 + h_red.abs()));
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let st = random_centered(&mut rng, 1.3);
        let red = aa4_forward(&dft_forward(&st).unwrap()).unwrap();
        let g = ham4_grad(&red).unwrap();
        let e = 1e-6;
        let at = |di: [f64; 3], dp: [f64; 2]| {
            ham4(&Reduced4 {
                i1: red.i1 + di[0],
                i2: red.i2 + di[1],
                i3: red.i3 + di[2],
                phi1: red.phi1 + dp[0],
                phi2: red.phi2 + dp[1],
                ..red
            })
            .unwrap()
        };
        for k in 0..3 {
            let mut dp = [0.0; 3];
            dp[k] = e;
            let mut dm = [0.0; 3];
            dm[k] = -e;
            let fd = (at(dp, [0.0; 2]) - at(dm, [0.0; 2])) / (2.0 * e);
            assert!((g.dh_di[k] - fd).abs() < 1e-5 * (1.0 + fd.abs()), "dI{k}");
        }
        for k in 0..2 {
            let mut dp = [0.0; 2];
            dp[k] = e;
            let mut dm = [0.0; 2];
            dm[k] = -e;
            let fd = (at([0.0; 3], dp) - at([0.0; 3], dm)) / (2.0 * e);
            assert!((g.dh_dphi[k] - fd).abs() < 1e-5 * (1.0 + fd.abs()), "dphi{k}");
        }
    }

    #[test]
    fn pairwise_log_homogeneity_in_actions() {
        // I . grad_I ln b_ab = 1 for each pair (squared sides homogeneous of
        // degree one in the actions)
        let mut rng = ChaCha8Rng::seed_from_u64(38);
        let st = random_centered(&mut rng, 1.0);
        let red = aa4_forward(&dft_forward(&st).unwrap()).unwrap();
        let sides = |red: &Reduced4| -> Vec<f64> {
            let s = reconstruct4(red).unwrap();
            let mut out = Vec::new();
            for a in 0..4 {
                for b in (a + 1)..4 {
                    out.push((s.z[a] - s.z[b]).norm2());
                }
            }
            out
        };
        let b0 = sides(&red);
        let e = 1e-6;
        for (p, b) in b0.iter().enumerate() {
            let mut euler = 0.0;
            for k in 0..3 {
                let mut redp = red;
                let mut redm = red;
                match k {
                    0 => {
                        redp.i1 += e;
                        redm.i1 -= e;
                    }
                    1 => {
                        redp.i2 += e;
                        redm.i2 -= e;
                    }
                    _ => {
                        redp.i3 += e;
                        redm.i3 -= e;
                    }
                }
                let d = (sides(&redp)[p] - sides(&redm)[p]) / (2.0 * e);
                euler += [red.i1, red.i2, red.i3][k] * d;
            }
            assert!((euler / b - 1.0).abs() < 1e-5, "pair {p}: {}", euler / b);
        }
    }

    #[test]
    fn connection_axioms4() {
        let (i1, i2, i3) = (0.4, -0.2, 1.7);
        // vertical generator
        assert!((connection_eval4(i1, i2, i3, [0.0, 0.0, 0.0, 0.0, 1.0]) - 1.0).abs() < 1e-15);
        // horizontal generator I3 d/dphi1 - I1 d/dphi3
        assert!(connection_eval4(i1, i2, i3, [0.0, 0.0, i3, 0.0, -i1]).abs() < 1e-15);
        // metric orthogonality: alpha(u) = 0 iff I1 b1 + I2 b2 + I3 b3 = 0
        let mut rng = ChaCha8Rng::seed_from_u64(39);
        for _ in 0..50 {
            let b: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let alpha = connection_eval4(i1, i2, i3, [0.0, 0.0, b[0], b[1], b[2]]);
            let inner = i1 * b[0] + i2 * b[1] + i3 * b[2];
            assert!((alpha * i3 - inner).abs() < 1e-10);
        }
    }

    #[test]
    fn xi_closed_form_values() {
        assert!((xi4_closed_form(1.0, 1.0) - (-3.0 / std::f64::consts::TAU)).abs() < 1e-15);
        assert!((xi4_closed_form(2.0, 1.0) - (-6.0 / std::f64::consts::PI)).abs() < 1e-15);
    }

    #[test]
    fn xi_constant_along_trajectory() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let st = random_centered(&mut rng, 1.0);
        let gamma = 1.0;
        let red0 = aa4_forward(&dft_forward(&st).unwrap()).unwrap();
        let expect = xi4_closed_form(gamma, red0.mu());
        assert!((xi4(&red0).unwrap() - expect).abs() < 1e-8 * expect.abs());
        // integrate the full equations and re-check pointwise
        let s = st.strengths.clone();
        let y0: Vec<f64> = st.z.iter().flat_map(|z| [z.x, z.y]).collect();
        let cfg = IntegratorConfig::default();
        let traj = integrate(
            |_t, y, dy| {
                let z: Vec<Vec2> = (0..4).map(|a| Vec2::new(y[2 * a], y[2 * a + 1])).collect();
                let stt = PlanarState::new(z, s.clone())?;
                for (a, v) in stt.eom_rhs()?.iter().enumerate() {
                    dy[2 * a] = v.x;
                    dy[2 * a + 1] = v.y;
                }
                Ok(())
            },
            0.0,
            &y0,
            3.0,
            &cfg,
        )
        .unwrap();
        let mut buf = vec![0.0; 8];
        for k in 0..=30 {
            traj.eval(3.0 * k as f64 / 30.0, &mut buf);
            let z: Vec<Vec2> = (0..4).map(|a| Vec2::new(buf[2 * a], buf[2 * a + 1])).collect();
            let stt = PlanarState::new(z, st.strengths.clone()).unwrap();
            let red = aa4_forward(&dft_forward(&stt).unwrap()).unwrap();
            let xi = xi4(&red).unwrap();
            assert!((xi - expect).abs() < 1e-8 * expect.abs(), "xi = {xi} vs {expect}");
        }
    }

    #[test]
    fn stokes_on_contractible_loop() {
        // closed integral of sigma*alpha over a loop in the (I1, phi1) plane
        // equals the surface integral of its exterior derivative
        // (1/I3) dI1 ^ dphi1 over the spanning disk (Stokes); only the
        // I1-dependent part of the coefficient survives
        let (i2, i3) = (0.3, 2.0);
        let (i1c, ampl_i, ampl_p) = (0.5, 0.12, 0.09);
        let n = 20_000;
        let mut line = 0.0;
        for k in 0..n {
            let t0 = std::f64::consts::TAU * k as f64 / n as f64;
            let t1 = std::f64::consts::TAU * (k + 1) as f64 / n as f64;
            let i1_mid = i1c + ampl_i * (0.5 * (t0 + t1)).cos();
            let dphi = ampl_p * (t1.sin() - t0.sin());
            line += section_pullback4(i1_mid, i2, i3)[0] * dphi;
        }
        // (I1, phi1) = (c + a cos t, b sin t) runs counterclockwise and
        // encloses area pi a b with the dI1 ^ dphi1 orientation
        let surface = std::f64::consts::PI * ampl_i * ampl_p / i3;
        assert!((line - surface).abs() < 1e-6, "line = {line}, surface = {surface}");
    }
}
