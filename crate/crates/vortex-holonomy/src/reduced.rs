//! The 3-vortex reduced phase space (sphere or hyperboloid), the reduced
//! Hamiltonian and vector field with analytic gradients, and the
//! metric-orthogonal connection 1-form with its section pullback.

use crate::dynamics::Strengths;
use crate::error::{Error, Result};
use crate::jacobi::{self, JbhChart, Reduced3};
use crate::plane::Vec2;

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// Margin keeping evaluation away from the chart poles I1 = +/- mu.
pub const POLE_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surface {
    Sphere,
    Hyperboloid,
}

/// Embedded image of a reduced point; satisfies x^2+y^2+z^2 = mu^2 on the
/// sphere or z^2-x^2-y^2 = mu^2 on the hyperboloid.
#[derive(Debug, Clone, Copy)]
pub struct Embedded {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub surface: Surface,
}

impl Embedded {
    pub fn coords(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// Everything needed to evaluate the reduced system at momentum level mu.
#[derive(Debug, Clone)]
pub struct ReducedContext {
    pub strengths: Strengths,
    pub chart: JbhChart,
    pub mu: f64,
    pub w0: f64,
}

/// Value and gradient of the reduced Hamiltonian.
#[derive(Debug, Clone, Copy)]
pub struct HamGrad {
    pub h: f64,
    pub dh_di1: f64,
    pub dh_di2: f64,
    pub dh_dphi1: f64,
}

impl ReducedContext {
    pub fn new(strengths: Strengths, mu: f64, chart_k: usize) -> Result<Self> {
        if mu == 0.0 {
            return Err(Error::OutOfDomain("mu must be nonzero".into()));
        }
        let w0 = strengths
            .w0()
            .ok_or_else(|| Error::Unsupported("reduced context requires three vortices".into()))?;
        let chart = JbhChart::new(&strengths, chart_k)?;
        Ok(ReducedContext { strengths, chart, mu, w0 })
    }

    pub fn surface(&self) -> Surface {
        if self.w0 > 0.0 {
            Surface::Sphere
        } else {
            Surface::Hyperboloid
        }
    }

    /// I2 is fixed on the momentum level set.
    pub fn i2(&self) -> f64 {
        -self.mu
    }

    fn check_domain(&self, i1: f64) -> Result<()> {
        let m = self.mu.abs();
        match self.surface() {
            Surface::Sphere => {
                if i1.abs() > m * (1.0 - POLE_MARGIN) {
                    return Err(Error::OutOfDomain(format!(
                        "|I1| = {} at or beyond the pole |mu| = {m}",
                        i1.abs()
                    )));
                }
            }
            Surface::Hyperboloid => {
                if i1.abs() < m * (1.0 + POLE_MARGIN) {
                    return Err(Error::OutOfDomain(format!(
                        "|I1| = {} inside the hyperboloid waist |mu| = {m}",
                        i1.abs()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Cylindrical-coordinate embedding with the doubled azimuth 2*phi1.
    pub fn embed(&self, i1: f64, phi1: f64) -> Result<Embedded> {
        let m2 = self.mu * self.mu;
        let surface = self.surface();
        let rho2 = match surface {
            Surface::Sphere => m2 - i1 * i1,
            Surface::Hyperboloid => i1 * i1 - m2,
        };
        if rho2 < 0.0 {
            return Err(Error::OutOfDomain("embedding radicand negative".into()));
        }
        let rho = rho2.sqrt();
        Ok(Embedded {
            x: rho * (2.0 * phi1).cos(),
            y: rho * (2.0 * phi1).sin(),
            z: i1,
            surface,
        })
    }

    /// Reduced Hamiltonian h(I1, phi1) on the level I2 = -mu.
    pub fn hamiltonian(&self, i1: f64, phi1: f64) -> Result<f64> {
        Ok(self.ham_grad(i1, phi1)?.h)
    }

    /// Hamiltonian with its analytic chain-rule gradient.
    pub fn ham_grad(&self, i1: f64, phi1: f64) -> Result<HamGrad> {
        self.check_domain(i1)?;
        let g = jacobi::squared_sides_grad(i1, self.i2(), phi1, &self.chart)?;
        let mut out = HamGrad { h: 0.0, dh_di1: 0.0, dh_di2: 0.0, dh_dphi1: 0.0 };
        for m in 0..3 {
            let (a, b) = ((m + 1) % 3, (m + 2) % 3);
            let gg = self.strengths.get(a) * self.strengths.get(b);
            if g.b[m] <= 0.0 {
                return Err(Error::ChartSingularity(format!("squared side b{m} <= 0")));
            }
            out.h -= gg * g.b[m].ln();
            out.dh_di1 -= gg * g.db_di1[m] / g.b[m];
            out.dh_di2 -= gg * g.db_di2[m] / g.b[m];
            out.dh_dphi1 -= gg * g.db_dphi1[m] / g.b[m];
        }
        out.h /= FOUR_PI;
        out.dh_di1 /= FOUR_PI;
        out.dh_di2 /= FOUR_PI;
        out.dh_dphi1 /= FOUR_PI;
        Ok(out)
    }

    /// (dI1/dt, dphi1/dt) = (dh/dphi1, -dh/dI1).
    pub fn vector_field(&self, i1: f64, phi1: f64) -> Result<[f64; 2]> {
        let g = self.ham_grad(i1, phi1)?;
        Ok([g.dh_dphi1, -g.dh_di1])
    }

    /// Connection 1-form alpha = -(I1/mu) dphi1 + dphi2 evaluated on a
    /// tangent vector with components (dI1, dphi1, dphi2).
    pub fn connection_eval(&self, i1: f64, tangent: [f64; 3]) -> f64 {
        -(i1 / self.mu) * tangent[1] + tangent[2]
    }

    /// Coefficient of dphi1 in the section pullback sigma* alpha.
    pub fn section_pullback(&self, i1: f64) -> f64 {
        1.0 - i1 / self.mu
    }

    /// alpha(X_h) at a point; constant -V0/(4 pi mu) along every trajectory.
    pub fn xi(&self, i1: f64, phi1: f64) -> Result<f64> {
        let g = self.ham_grad(i1, phi1)?;
        // phi1dot = -dh/dI1, phi2dot = -dh/dI2 on the level set
        Ok(self.connection_eval(i1, [g.dh_dphi1, -g.dh_di1, -g.dh_di2]))
    }

    /// Closed-form value of alpha(X_h).
    pub fn xi_closed_form(&self) -> f64 {
        -self.strengths.virial() / (FOUR_PI * self.mu)
    }

    /// Unreduced representative of (i1, phi1) with the fiber angle phi2 and
    /// the center of circulation at the origin.
    pub fn reconstruct(&self, i1: f64, phi1: f64, phi2: f64) -> Result<crate::dynamics::PlanarState> {
        let red = Reduced3 { i1, i2: self.i2(), phi1, phi2 };
        jacobi::pipeline_inverse(&red, Vec2::ZERO, &self.chart, &self.strengths)
    }
}
