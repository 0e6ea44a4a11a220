//! The three canonical transformations for N = 3: center-of-circulation
//! frame (T1), action-angle (T2), and sum/difference angles (T3), their
//! inverses, and reconstruction of squared side lengths from reduced
//! coordinates, for any of the three chart orderings.

use crate::dynamics::{PlanarState, Strengths};
use crate::error::{Error, Result};
use crate::plane::{wrap_angle, Vec2};

/// One of the three chart orderings, selected by the "last" vortex k;
/// (i, j, k) is the cyclic permutation of (0, 1, 2) ending at k.
#[derive(Debug, Clone)]
pub struct JbhChart {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    /// A = Gamma_i Gamma_j / (Gamma_i + Gamma_j)
    pub a: f64,
    /// B = (Gamma_i + Gamma_j) Gamma_k / Gamma_tot
    pub b: f64,
    /// Gamma_i / (Gamma_i + Gamma_j)
    pub ci: f64,
    /// Gamma_j / (Gamma_i + Gamma_j)
    pub cj: f64,
    pub gamma: [f64; 3],
    pub gamma_tot: f64,
}

impl JbhChart {
    /// Chart with last vortex `k` (0-based). The paper's default ordering
    /// corresponds to k = 2.
    pub fn new(strengths: &Strengths, k: usize) -> Result<Self> {
        if strengths.len() != 3 {
            return Err(Error::Unsupported("JBH charts require exactly three vortices".into()));
        }
        if k > 2 {
            return Err(Error::Config("chart index must be 0, 1 or 2".into()));
        }
        let gt = strengths.gamma_tot();
        if gt == 0.0 {
            return Err(Error::ZeroTotalCirculation);
        }
        let i = (k + 1) % 3;
        let j = (k + 2) % 3;
        let (gi, gj, gk) = (strengths.get(i), strengths.get(j), strengths.get(k));
        let gij = gi + gj;
        if gij == 0.0 {
            return Err(Error::Unsupported("chart requires Gamma_i + Gamma_j != 0".into()));
        }
        Ok(JbhChart {
            i,
            j,
            k,
            a: gi * gj / gij,
            b: gij * gk / gt,
            ci: gi / gij,
            cj: gj / gij,
            gamma: [strengths.get(0), strengths.get(1), strengths.get(2)],
            gamma_tot: gt,
        })
    }
}

/// Center of circulation plus the two relative vectors of a chart.
#[derive(Debug, Clone, Copy)]
pub struct JbhCoords {
    pub z0: Vec2,
    /// z_j - z_i
    pub r: Vec2,
    /// z_k minus the center of circulation of the (i, j) pair
    pub s: Vec2,
}

/// Actions and angles of the two relative vectors; `k_scaled` is the
/// rescaled center of circulation sqrt(|Gamma_tot|) * Z0.
#[derive(Debug, Clone, Copy)]
pub struct ActionAngle3 {
    pub j1: f64,
    pub j2: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub k_scaled: Vec2,
}

/// Sum/difference coordinates; `phi1` lives in [0, pi).
#[derive(Debug, Clone, Copy)]
pub struct Reduced3 {
    pub i1: f64,
    pub i2: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl Reduced3 {
    pub fn mu(&self) -> f64 {
        -self.i2
    }
}

/// Squared pairwise distances indexed by the opposite vortex:
/// b[m] = |z_a - z_b|^2 for {a, b} the complement of m.
#[derive(Debug, Clone, Copy)]
pub struct SquaredSides {
    pub b: [f64; 3],
}

/// Squared sides together with partial derivatives in (I1, I2, phi1).
#[derive(Debug, Clone, Copy)]
pub struct SquaredSidesGrad {
    pub b: [f64; 3],
    pub db_di1: [f64; 3],
    pub db_di2: [f64; 3],
    pub db_dphi1: [f64; 3],
}

pub fn t1_forward(state: &PlanarState, chart: &JbhChart) -> Result<JbhCoords> {
    if state.n() != 3 {
        return Err(Error::Unsupported("T1 requires three vortices".into()));
    }
    let c = state.conserved_set()?;
    let (zi, zj, zk) = (state.z[chart.i], state.z[chart.j], state.z[chart.k]);
    let cij = zi.scale(chart.ci) + zj.scale(chart.cj);
    Ok(JbhCoords {
        z0: c.z0,
        r: zj - zi,
        s: zk - cij,
    })
}

pub fn t1_inverse(coords: &JbhCoords, chart: &JbhChart, strengths: &Strengths) -> Result<PlanarState> {
    let gk = chart.gamma[chart.k];
    let cij = coords.z0 - coords.s.scale(gk / chart.gamma_tot);
    let zk = coords.s + cij;
    let zi = cij - coords.r.scale(chart.cj);
    let zj = cij + coords.r.scale(chart.ci);
    let mut z = vec![Vec2::ZERO; 3];
    z[chart.i] = zi;
    z[chart.j] = zj;
    z[chart.k] = zk;
    PlanarState::new(z, strengths.clone())
}

pub fn t2_forward(coords: &JbhCoords, chart: &JbhChart) -> Result<ActionAngle3> {
    let r2 = coords.r.norm2();
    let s2 = coords.s.norm2();
    if r2 == 0.0 {
        return Err(Error::ChartSingularity("r = 0 (collision of the chart's pair)".into()));
    }
    if s2 == 0.0 {
        return Err(Error::ChartSingularity("s = 0 (third vortex at the pair's sub-center)".into()));
    }
    Ok(ActionAngle3 {
        j1: chart.a * r2 / 2.0,
        j2: chart.b * s2 / 2.0,
        theta1: coords.r.arg(),
        theta2: coords.s.arg(),
        k_scaled: coords.z0.scale(chart.gamma_tot.abs().sqrt()),
    })
}

pub fn t2_inverse(aa: &ActionAngle3, chart: &JbhChart) -> Result<JbhCoords> {
    let r2 = 2.0 * aa.j1 / chart.a;
    let s2 = 2.0 * aa.j2 / chart.b;
    if r2 < 0.0 || s2 < 0.0 {
        return Err(Error::OutOfDomain(
            "action signs must match the signs of A and B".into(),
        ));
    }
    Ok(JbhCoords {
        z0: aa.k_scaled.scale(1.0 / chart.gamma_tot.abs().sqrt()),
        r: Vec2::from_angle(aa.theta1).scale(r2.sqrt()),
        s: Vec2::from_angle(aa.theta2).scale(s2.sqrt()),
    })
}

pub fn t3_forward(aa: &ActionAngle3) -> Reduced3 {
    let mut phi1 = (aa.theta2 - aa.theta1) / 2.0;
    let mut phi2 = (aa.theta1 + aa.theta2) / 2.0;
    // Fold phi1 into [0, pi); the torus identification is
    // (phi1, phi2) ~ (phi1 + pi, phi2 + pi).
    while phi1 < 0.0 {
        phi1 += std::f64::consts::PI;
        phi2 += std::f64::consts::PI;
    }
    while phi1 >= std::f64::consts::PI {
        phi1 -= std::f64::consts::PI;
        phi2 -= std::f64::consts::PI;
    }
    Reduced3 {
        i1: aa.j2 - aa.j1,
        i2: aa.j1 + aa.j2,
        phi1,
        phi2: wrap_angle(phi2),
    }
}

pub fn t3_inverse(red: &Reduced3, k_scaled: Vec2) -> ActionAngle3 {
    ActionAngle3 {
        j1: (red.i2 - red.i1) / 2.0,
        j2: (red.i1 + red.i2) / 2.0,
        theta1: wrap_angle(red.phi2 - red.phi1),
        theta2: wrap_angle(red.phi2 + red.phi1),
        k_scaled,
    }
}

/// Full pipeline psi = T3 . T2 . T1 for a chart.
pub fn pipeline_forward(state: &PlanarState, chart: &JbhChart) -> Result<(Reduced3, Vec2)> {
    let aa = t2_forward(&t1_forward(state, chart)?, chart)?;
    Ok((t3_forward(&aa), aa.k_scaled))
}

/// Inverse pipeline with the center of circulation pinned at the origin
/// unless `z0` says otherwise.
pub fn pipeline_inverse(
    red: &Reduced3,
    z0: Vec2,
    chart: &JbhChart,
    strengths: &Strengths,
) -> Result<PlanarState> {
    let k_scaled = z0.scale(chart.gamma_tot.abs().sqrt());
    let aa = t3_inverse(red, k_scaled);
    t1_inverse(&t2_inverse(&aa, chart)?, chart, strengths)
}

fn uvw(i1: f64, i2: f64, chart: &JbhChart) -> Result<(f64, f64, f64)> {
    let u = (i2 - i1) / chart.a;
    let v = (i1 + i2) / chart.b;
    if u <= 0.0 || v <= 0.0 {
        return Err(Error::OutOfDomain(
            "(I1, I2) violates the chart's action sign constraints".into(),
        ));
    }
    Ok((u, v, (u * v).sqrt()))
}

/// Squared sides as functions of the reduced coordinates (the fiber angle
/// phi2 drops out).
pub fn squared_sides(i1: f64, i2: f64, phi1: f64, chart: &JbhChart) -> Result<SquaredSides> {
    let (u, v, w) = uvw(i1, i2, chart)?;
    let co = (2.0 * phi1).cos();
    let mut b = [0.0; 3];
    b[chart.k] = u;
    b[chart.i] = v + chart.ci * chart.ci * u - 2.0 * chart.ci * w * co;
    b[chart.j] = v + chart.cj * chart.cj * u + 2.0 * chart.cj * w * co;
    Ok(SquaredSides { b })
}

/// Squared sides with analytic partial derivatives.
pub fn squared_sides_grad(i1: f64, i2: f64, phi1: f64, chart: &JbhChart) -> Result<SquaredSidesGrad> {
    let (u, v, w) = uvw(i1, i2, chart)?;
    let (du1, du2) = (-1.0 / chart.a, 1.0 / chart.a);
    let (dv1, dv2) = (1.0 / chart.b, 1.0 / chart.b);
    let dw1 = (du1 * v + u * dv1) / (2.0 * w);
    let dw2 = (du2 * v + u * dv2) / (2.0 * w);
    let co = (2.0 * phi1).cos();
    let si = (2.0 * phi1).sin();
    let (ci, cj) = (chart.ci, chart.cj);

    let mut g = SquaredSidesGrad {
        b: [0.0; 3],
        db_di1: [0.0; 3],
        db_di2: [0.0; 3],
        db_dphi1: [0.0; 3],
    };
    g.b[chart.k] = u;
    g.db_di1[chart.k] = du1;
    g.db_di2[chart.k] = du2;

    g.b[chart.i] = v + ci * ci * u - 2.0 * ci * w * co;
    g.db_di1[chart.i] = dv1 + ci * ci * du1 - 2.0 * ci * co * dw1;
    g.db_di2[chart.i] = dv2 + ci * ci * du2 - 2.0 * ci * co * dw2;
    g.db_dphi1[chart.i] = 4.0 * ci * w * si;

    g.b[chart.j] = v + cj * cj * u + 2.0 * cj * w * co;
    g.db_di1[chart.j] = dv1 + cj * cj * du1 + 2.0 * cj * co * dw1;
    g.db_di2[chart.j] = dv2 + cj * cj * du2 + 2.0 * cj * co * dw2;
    g.db_dphi1[chart.j] = -4.0 * cj * w * si;
    Ok(g)
}
