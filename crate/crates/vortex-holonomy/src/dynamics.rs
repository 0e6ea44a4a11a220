//! N-point-vortex equations of motion, Hamiltonian, conserved quantities,
//! and the strength-weighted metric/symplectic pairings.

use crate::error::{Error, Result};
use crate::plane::Vec2;

/// Pairwise separations below this raise the collision error: the log kernel
/// makes closer approach numerically meaningless in double precision.
pub const MIN_SEPARATION: f64 = 1e-10;

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;
const TWO_PI: f64 = std::f64::consts::TAU;

/// Circulations of the vortices with their cached sum.
#[derive(Debug, Clone, PartialEq)]
pub struct Strengths {
    gamma: Vec<f64>,
    gamma_tot: f64,
}

impl Strengths {
    pub fn new(gamma: Vec<f64>) -> Result<Self> {
        if gamma.len() < 2 {
            return Err(Error::Unsupported("need at least two vortices".into()));
        }
        if gamma.iter().any(|g| *g == 0.0 || !g.is_finite()) {
            return Err(Error::Unsupported("every circulation must be finite and nonzero".into()));
        }
        let gamma_tot = gamma.iter().sum();
        Ok(Strengths { gamma, gamma_tot })
    }

    pub fn identical(n: usize, gamma: f64) -> Result<Self> {
        Strengths::new(vec![gamma; n])
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, i: usize) -> f64 {
        self.gamma[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.gamma
    }

    pub fn gamma_tot(&self) -> f64 {
        self.gamma_tot
    }

    /// Virial V0 = sum over pairs of Gamma_a * Gamma_b.
    pub fn virial(&self) -> f64 {
        let mut v = 0.0;
        for a in 0..self.gamma.len() {
            for b in (a + 1)..self.gamma.len() {
                v += self.gamma[a] * self.gamma[b];
            }
        }
        v
    }

    /// W0 = sum of reciprocal pair products; classifies the 3-vortex
    /// reduced space (sphere for W0 > 0, hyperboloid for W0 < 0).
    pub fn w0(&self) -> Option<f64> {
        if self.gamma.len() != 3 {
            return None;
        }
        let [g1, g2, g3] = [self.gamma[0], self.gamma[1], self.gamma[2]];
        Some(1.0 / (g1 * g2) + 1.0 / (g2 * g3) + 1.0 / (g3 * g1))
    }

    pub fn all_identical(&self) -> bool {
        self.gamma.iter().all(|g| *g == self.gamma[0])
    }
}

/// Positions of N vortices plus their strengths; the unreduced phase point.
#[derive(Debug, Clone)]
pub struct PlanarState {
    pub z: Vec<Vec2>,
    pub strengths: Strengths,
}

/// Conserved quantities of the flow. `w0` is present only for N = 3.
#[derive(Debug, Clone, Copy)]
pub struct ConservedSet {
    pub z0: Vec2,
    pub theta0: f64,
    pub h: f64,
    pub v0: f64,
    pub m: f64,
    pub w0: Option<f64>,
}

impl PlanarState {
    pub fn new(z: Vec<Vec2>, strengths: Strengths) -> Result<Self> {
        if z.len() != strengths.len() {
            return Err(Error::Unsupported("positions/strengths length mismatch".into()));
        }
        let state = PlanarState { z, strengths };
        state.check_separation()?;
        Ok(state)
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn check_separation(&self) -> Result<()> {
        for a in 0..self.z.len() {
            for b in (a + 1)..self.z.len() {
                if (self.z[a] - self.z[b]).norm() < MIN_SEPARATION {
                    return Err(Error::Collision(a, b));
                }
            }
        }
        Ok(())
    }

    /// Velocities dz_a/dt = (i/2pi) sum_b Gamma_b (z_a - z_b)/|z_a - z_b|^2.
    pub fn eom_rhs(&self) -> Result<Vec<Vec2>> {
        self.check_separation()?;
        let n = self.n();
        let mut v = vec![Vec2::ZERO; n];
        for a in 0..n {
            let mut acc = Vec2::ZERO;
            for b in 0..n {
                if a == b {
                    continue;
                }
                let d = self.z[a] - self.z[b];
                acc += d.scale(self.strengths.get(b) / d.norm2());
            }
            v[a] = acc.rot90().scale(1.0 / TWO_PI);
        }
        Ok(v)
    }

    /// h = -(1/4pi) sum_{a<b} Gamma_a Gamma_b ln |z_a - z_b|^2.
    pub fn hamiltonian(&self) -> Result<f64> {
        self.check_separation()?;
        let mut h = 0.0;
        for a in 0..self.n() {
            for b in (a + 1)..self.n() {
                let b2 = (self.z[a] - self.z[b]).norm2();
                h -= self.strengths.get(a) * self.strengths.get(b) * b2.ln();
            }
        }
        Ok(h / FOUR_PI)
    }

    pub fn conserved_set(&self) -> Result<ConservedSet> {
        let gt = self.strengths.gamma_tot();
        if gt == 0.0 {
            return Err(Error::ZeroTotalCirculation);
        }
        let mut z0 = Vec2::ZERO;
        let mut theta0 = 0.0;
        for (a, z) in self.z.iter().enumerate() {
            let g = self.strengths.get(a);
            z0 += z.scale(g);
            theta0 += g * z.norm2();
        }
        z0 = z0.scale(1.0 / gt);
        let m = gt * theta0 - gt * gt * z0.norm2();
        Ok(ConservedSet {
            z0,
            theta0,
            h: self.hamiltonian()?,
            v0: self.strengths.virial(),
            m,
            w0: self.strengths.w0(),
        })
    }

    /// (metric, symplectic) parts of the weighted Hermitian pairing
    /// sum_k Gamma_k u_k conj(v_k): Re and -Im respectively.
    pub fn pairing(&self, u: &[Vec2], v: &[Vec2]) -> (f64, f64) {
        assert_eq!(u.len(), self.n());
        assert_eq!(v.len(), self.n());
        let mut metric = 0.0;
        let mut symp = 0.0;
        for k in 0..self.n() {
            let g = self.strengths.get(k);
            metric += g * u[k].dot(v[k]);
            // -Im(u conj(v)) = u_x v_y - u_y v_x
            symp += g * u[k].cross(v[k]);
        }
        (metric, symp)
    }
}
