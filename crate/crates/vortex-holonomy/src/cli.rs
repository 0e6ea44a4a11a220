//! Batch command-line front end: JSON-configured runs emitting CSV/JSON/SVG
//! artifacts with deterministic formatting.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::dynamics::{PlanarState, Strengths};
use crate::elliptic;
use crate::error::{Error, Result};
use crate::integrator::{find_periodic_orbit, integrate, IntegratorConfig};
use crate::phases;
use crate::plane::{mod_2pi, Vec2};
use crate::reduced::ReducedContext;

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser)]
#[command(
    name = "vortex-holonomy",
    about = "Point-vortex reduction phases: simulation, orbit phases, portraits, elliptic periods",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// JSON run configuration (see schema/config.schema.json).
    config: PathBuf,
    /// Override the momentum level mu.
    #[arg(long)]
    mu: Option<f64>,
    /// Replace the energy target list with this single energy.
    #[arg(long)]
    energy: Option<f64>,
    /// Override the relative integrator tolerance (absolute = tol * 1e-2).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the full dynamics and write the trajectory as CSV.
    Simulate(CommonArgs),
    /// Locate periodic orbits at the energy targets and report all phases.
    Phases(CommonArgs),
    /// Render the reduced phase portrait as SVG plus raw CSV polylines.
    Portrait(CommonArgs),
    /// Exact elliptic period of the shape oscillation (identical vortices).
    ApPeriod(CommonArgs),
}

// ---------------------------------------------------------------------------
// configuration

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
pub enum Problem {
    Three,
    Four,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReducedInit {
    pub i1: f64,
    pub phi1: f64,
    #[serde(default)]
    pub phi2: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Initial {
    #[serde(default)]
    pub positions: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub reduced: Option<ReducedInit>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSettings {
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_abs_tol")]
    pub abs_tol: f64,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        IntegratorSettings { rel_tol: default_rel_tol(), abs_tol: default_abs_tol() }
    }
}

fn default_rel_tol() -> f64 {
    1e-10
}
fn default_abs_tol() -> f64 {
    1e-12
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PortraitSettings {
    #[serde(default = "default_phi1_min")]
    pub phi1_min: f64,
    #[serde(default = "default_phi1_max")]
    pub phi1_max: f64,
    #[serde(default = "default_steps")]
    pub phi1_steps: usize,
    #[serde(default = "default_i1_min")]
    pub i1_min: f64,
    #[serde(default = "default_i1_max")]
    pub i1_max: f64,
    #[serde(default = "default_steps")]
    pub i1_steps: usize,
    #[serde(default = "default_portrait_t")]
    pub t_end: f64,
}

impl Default for PortraitSettings {
    fn default() -> Self {
        serde_json::from_str("{}").unwrap()
    }
}

fn default_phi1_min() -> f64 {
    -std::f64::consts::FRAC_PI_4
}
fn default_phi1_max() -> f64 {
    3.0 * std::f64::consts::FRAC_PI_4
}
fn default_i1_min() -> f64 {
    -0.98
}
fn default_i1_max() -> f64 {
    0.98
}
fn default_steps() -> usize {
    9
}
fn default_portrait_t() -> f64 {
    2.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSettings {
    #[serde(default = "default_out_dir")]
    pub dir: String,
    #[serde(default)]
    pub prefix: String,
    /// Emit a generation-timestamp comment in SVG output (off by default so
    /// identical configs give byte-identical artifacts).
    #[serde(default)]
    pub svg_timestamp: bool,
}

impl Default for OutputSettings {
    fn default() -> Self {
        OutputSettings { dir: default_out_dir(), prefix: String::new(), svg_timestamp: false }
    }
}

fn default_out_dir() -> String {
    ".".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: Problem,
    pub strengths: Vec<f64>,
    #[serde(default)]
    pub initial: Initial,
    #[serde(default)]
    pub energies: Vec<f64>,
    #[serde(default)]
    pub mu: Option<f64>,
    /// Chart ordering index (last vortex of the JBH chart), default 2.
    #[serde(default = "default_chart")]
    pub chart: usize,
    #[serde(default)]
    pub integrator: IntegratorSettings,
    /// Integration span for `simulate` (time units of the vortex equations).
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    /// Output rows for `simulate` / samples per polyline for `portrait`.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub portrait: PortraitSettings,
    #[serde(default)]
    pub output: OutputSettings,
}

fn default_chart() -> usize {
    2
}
fn default_t_end() -> f64 {
    1.0
}
fn default_samples() -> usize {
    1000
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("invalid config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.strengths.len();
        match self.problem {
            Problem::Three if n != 3 => {
                return Err(Error::Config(format!("problem \"three\" needs 3 strengths, got {n}")))
            }
            Problem::Four if n != 4 => {
                return Err(Error::Config(format!("problem \"four\" needs 4 strengths, got {n}")))
            }
            _ => {}
        }
        if self.strengths.iter().any(|g| *g == 0.0 || !g.is_finite()) {
            return Err(Error::Config("strengths must be finite and nonzero".into()));
        }
        if self.chart > 2 {
            return Err(Error::Config("chart must be 0, 1 or 2".into()));
        }
        if self.integrator.rel_tol <= 0.0 || self.integrator.abs_tol <= 0.0 {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if self.initial.positions.is_some() && self.initial.reduced.is_some() {
            return Err(Error::Config("give either initial.positions or initial.reduced, not both".into()));
        }
        if let Some(p) = &self.initial.positions {
            if p.len() != n {
                return Err(Error::Config("initial.positions length must match strengths".into()));
            }
        }
        Ok(())
    }

    fn integrator_config(&self) -> IntegratorConfig {
        IntegratorConfig {
            rel_tol: self.integrator.rel_tol,
            abs_tol: self.integrator.abs_tol,
            ..Default::default()
        }
    }

    fn strengths(&self) -> Result<Strengths> {
        Strengths::new(self.strengths.clone())
    }

    fn out_path(&self, name: &str) -> PathBuf {
        Path::new(&self.output.dir).join(format!("{}{}", self.output.prefix, name))
    }

    fn initial_state(&self) -> Result<PlanarState> {
        let s = self.strengths()?;
        if let Some(p) = &self.initial.positions {
            return PlanarState::new(p.iter().map(|q| Vec2::new(q[0], q[1])).collect(), s);
        }
        if let Some(r) = &self.initial.reduced {
            let ctx = ReducedContext::new(s, r.mu, self.chart)?;
            return ctx.reconstruct(r.i1, r.phi1, r.phi2);
        }
        Err(Error::Config("no initial conditions given".into()))
    }

    fn mu(&self) -> Result<f64> {
        if let Some(m) = self.mu {
            return Ok(m);
        }
        if let Some(r) = &self.initial.reduced {
            return Ok(r.mu);
        }
        Err(Error::Config("mu required (top-level \"mu\" or initial.reduced.mu)".into()))
    }
}

// ---------------------------------------------------------------------------
// deterministic numeric formatting

/// Formats like C's `%.17g`: up to 17 significant digits, trailing zeros
/// trimmed, scientific notation outside the `%g` decimal range.
pub fn g17(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let exp = x.abs().log10().floor() as i32;
    let s = if (-5..17).contains(&exp) {
        let prec = (16 - exp).max(0) as usize;
        format!("{x:.prec$}")
    } else {
        format!("{x:.16e}")
    };
    trim_float(&s)
}

fn trim_float(s: &str) -> String {
    if let Some(epos) = s.find(['e', 'E']) {
        let (mant, exp) = s.split_at(epos);
        let mant = trim_float(mant);
        format!("{mant}{exp}")
    } else if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        t.to_string()
    } else {
        s.to_string()
    }
}

// ---------------------------------------------------------------------------
// SVG writing (plain SVG 1.1, no scripts)

pub struct SvgDoc {
    body: String,
    width: f64,
    height: f64,
}

impl SvgDoc {
    pub fn new(width: f64, height: f64) -> Self {
        SvgDoc { body: String::new(), width, height }
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str, width: f64) {
        if pts.len() < 2 {
            return;
        }
        let mut attr = String::new();
        for (x, y) in pts {
            let _ = write!(attr, "{x:.3},{y:.3} ");
        }
        let _ = writeln!(
            self.body,
            "  <polyline fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\" points=\"{}\"/>",
            attr.trim_end()
        );
    }

    pub fn text(&mut self, x: f64, y: f64, size: f64, content: &str) {
        let _ = writeln!(
            self.body,
            "  <text x=\"{x:.1}\" y=\"{y:.1}\" font-size=\"{size}\" font-family=\"sans-serif\">{content}</text>"
        );
    }

    pub fn finish(self, timestamp: bool) -> String {
        let stamp = if timestamp {
            format!(
                "<!-- generated {} -->\n",
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0)
            )
        } else {
            String::new()
        };
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n{stamp}<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n{}</svg>\n",
            self.width, self.height, self.width, self.height, self.body
        )
    }
}

// ---------------------------------------------------------------------------
// commands

fn init_thread_pool() {
    let threads = std::env::var("VORTEX_HOLONOMY_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn cmd_simulate(cfg: &RunConfig) -> Result<()> {
    let state = cfg.initial_state()?;
    let n = state.n();
    let icfg = cfg.integrator_config();
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
        cfg.t_end,
        &icfg,
    )?;
    let c0 = state.conserved_set()?;
    let mut max_dh: f64 = 0.0;
    let mut max_dz0: f64 = 0.0;
    let mut max_dth: f64 = 0.0;
    let mut rows = String::new();
    let mut buf = vec![0.0; 2 * n];
    for k in 0..=cfg.samples {
        let t = cfg.t_end * k as f64 / cfg.samples as f64;
        traj.eval(t, &mut buf);
        let z: Vec<Vec2> = (0..n).map(|a| Vec2::new(buf[2 * a], buf[2 * a + 1])).collect();
        let st = PlanarState::new(z, state.strengths.clone())?;
        let c = st.conserved_set()?;
        max_dh = max_dh.max((c.h - c0.h).abs());
        max_dz0 = max_dz0.max((c.z0 - c0.z0).norm());
        max_dth = max_dth.max((c.theta0 - c0.theta0).abs());
        let mut row = g17(t);
        for v in &buf {
            row.push(',');
            row.push_str(&g17(*v));
        }
        rows.push_str(&row);
        rows.push('\n');
    }
    let mut out = String::new();
    out.push_str("# vortex trajectory; units: nondimensional vortex time, plane lengths\n");
    let _ = writeln!(out, "# strengths = [{}]", cfg.strengths.iter().map(|g| g17(*g)).collect::<Vec<_>>().join(", "));
    let _ = writeln!(out, "# conserved drift over the run: |dH| = {}, |dZ0| = {}, |dTheta0| = {}", g17(max_dh), g17(max_dz0), g17(max_dth));
    out.push('t');
    for a in 0..n {
        let _ = write!(out, ",x{},y{}", a + 1, a + 1);
    }
    out.push('\n');
    out.push_str(&rows);
    let path = cfg.out_path("trajectory.csv");
    std::fs::write(&path, out)?;
    println!("wrote {} ({} samples, |dH| = {})", path.display(), cfg.samples + 1, g17(max_dh));
    Ok(())
}

struct PhaseRow {
    orbit_id: String,
    energy: f64,
    report: Option<phases::PhaseReport>,
    theta_g_area: Option<f64>,
    period_quadrature: Option<f64>,
    theta_d_integral: Option<f64>,
    ap_period: Option<f64>,
    ap_multiple: Option<u32>,
    status: String,
}

fn cmd_phases(cfg: &RunConfig) -> Result<()> {
    match cfg.problem {
        Problem::Three => cmd_phases3(cfg),
        Problem::Four => cmd_phases4(cfg),
    }
}

fn cmd_phases3(cfg: &RunConfig) -> Result<()> {
    use rayon::prelude::*;
    let s = cfg.strengths()?;
    let mu = cfg.mu()?;
    let icfg = cfg.integrator_config();
    let ctx = ReducedContext::new(s.clone(), mu, cfg.chart)?;
    let mut energies = cfg.energies.clone();
    if energies.is_empty() {
        if let Some(r) = &cfg.initial.reduced {
            energies.push(ctx.hamiltonian(r.i1, r.phi1)?);
        } else if cfg.initial.positions.is_some() {
            energies.push(cfg.initial_state()?.hamiltonian()?);
        } else {
            return Err(Error::Config("phases needs energies or initial conditions".into()));
        }
    }
    let identical = s.all_identical();
    let results: Vec<Vec<PhaseRow>> = energies
        .par_iter()
        .enumerate()
        .map(|(ei, &energy)| {
            let orbits = match phases::orbits_at_energy(&ctx, energy, &icfg, 100.0) {
                Ok(o) => o,
                Err(e) => {
                    return vec![PhaseRow {
                        orbit_id: format!("E{ei}"),
                        energy,
                        report: None,
                        theta_g_area: None,
                        period_quadrature: None,
                        theta_d_integral: None,
                        ap_period: None,
                        ap_multiple: None,
                        status: format!("error: {e}"),
                    }]
                }
            };
            if orbits.is_empty() {
                return vec![PhaseRow {
                    orbit_id: format!("E{ei}"),
                    energy,
                    report: None,
                    theta_g_area: None,
                    period_quadrature: None,
                    theta_d_integral: None,
                    ap_period: None,
                    ap_multiple: None,
                    status: "no periodic orbit found".into(),
                }];
            }
            orbits
                .iter()
                .enumerate()
                .map(|(oi, orbit)| {
                    let report = phases::phase_report(&ctx, orbit, &icfg);
                    let theta_g_area = phases::geometric_phase_area(&ctx, orbit).ok();
                    let period_quadrature = crate::integrator::period_by_quadrature(
                        &ctx,
                        orbit.start[0],
                        orbit.start[1],
                        2e-3 * mu.abs().max(orbit.i1_max - orbit.i1_min),
                    )
                    .ok();
                    let theta_d_integral = phases::dynamic_phase_integral(&ctx, orbit).ok();
                    let (ap_period, ap_multiple) = if identical {
                        let ap = elliptic::ap_params(orbit.energy, -mu, s.get(0))
                            .and_then(|p| elliptic::ap_period(&p, -mu, s.get(0)));
                        match ap {
                            Ok(t_i) => {
                                let m = elliptic::ap_reduced_period_multiple(t_i, orbit.period).ok();
                                (Some(t_i), m)
                            }
                            Err(_) => (None, None),
                        }
                    } else {
                        (None, None)
                    };
                    match report {
                        Ok(rep) => PhaseRow {
                            orbit_id: format!("E{ei}-O{oi}"),
                            energy,
                            report: Some(rep),
                            theta_g_area,
                            period_quadrature,
                            theta_d_integral,
                            ap_period,
                            ap_multiple,
                            status: "ok".into(),
                        },
                        Err(e) => PhaseRow {
                            orbit_id: format!("E{ei}-O{oi}"),
                            energy,
                            report: None,
                            theta_g_area,
                            period_quadrature,
                            theta_d_integral,
                            ap_period,
                            ap_multiple,
                            status: format!("error: {e}"),
                        },
                    }
                })
                .collect()
        })
        .collect();

    let mut csv = String::from(
        "# reconstruction phases; angles in radians, theta_g is the raw line integral\norbit_id,energy,theta_g,period,theta_d,theta_tot,theta_g_mod,theta_g_area,period_quadrature,theta_d_integral,ap_period,ap_multiple,status\n",
    );
    let mut json_rows = Vec::new();
    let opt = |v: Option<f64>| v.map(|x| g17(x)).unwrap_or_default();
    for row in results.iter().flatten() {
        let (tg, per, td, tt, tgm) = match &row.report {
            Some(r) => (
                g17(r.theta_g),
                g17(r.period),
                g17(r.theta_d),
                g17(r.theta_tot_mod),
                g17(r.theta_g_mod),
            ),
            None => Default::default(),
        };
        let _ = writeln!(
            csv,
            "{},{},{tg},{per},{td},{tt},{tgm},{},{},{},{},{},{}",
            row.orbit_id,
            g17(row.energy),
            opt(row.theta_g_area),
            opt(row.period_quadrature),
            opt(row.theta_d_integral),
            opt(row.ap_period),
            row.ap_multiple.map(|m| m.to_string()).unwrap_or_default(),
            row.status
        );
        json_rows.push(serde_json::json!({
            "orbit_id": row.orbit_id,
            "energy": row.energy,
            "theta_g": row.report.as_ref().map(|r| r.theta_g),
            "period": row.report.as_ref().map(|r| r.period),
            "theta_d": row.report.as_ref().map(|r| r.theta_d),
            "theta_tot": row.report.as_ref().map(|r| r.theta_tot_mod),
            "theta_g_area": row.theta_g_area,
            "period_quadrature": row.period_quadrature,
            "theta_d_integral": row.theta_d_integral,
            "ap_period": row.ap_period,
            "ap_multiple": row.ap_multiple,
            "provenance": {
                "theta_g": "line integral of -(1 - I1/mu) dphi1 along the orbit",
                "theta_g_area": "enclosed-area method on the reduced surface",
                "theta_d": "closed form -V0 T / (4 pi mu)",
                "theta_d_integral": "quadrature of alpha(X_h)",
                "theta_tot": "full-dynamics reconstruction over one period",
                "period": "Poincare-section return time",
                "period_quadrature": "level-set arclength quadrature"
            },
            "status": row.status,
        }));
    }
    let csv_path = cfg.out_path("phases.csv");
    std::fs::write(&csv_path, &csv)?;
    let json_path = cfg.out_path("phases.json");
    std::fs::write(&json_path, serde_json::to_string_pretty(&json_rows).map_err(|e| Error::Inconsistency(e.to_string()))?)?;
    print!("{csv}");
    println!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(())
}

fn cmd_phases4(cfg: &RunConfig) -> Result<()> {
    // property-based report: xi constancy and the dynamic-phase law over the
    // configured window (no 4-vortex orbit tables exist to reproduce)
    let state = cfg.initial_state()?;
    let red0 = crate::fourv::aa4_forward(&crate::fourv::dft_forward(&state)?)?;
    let gamma = state.strengths.get(0);
    let mu = red0.mu();
    let expect = crate::fourv::xi4_closed_form(gamma, mu);
    let icfg = cfg.integrator_config();
    let n = 4;
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
        cfg.t_end,
        &icfg,
    )?;
    let mut buf = vec![0.0; 8];
    let mut max_dev: f64 = 0.0;
    for k in 0..=200 {
        traj.eval(cfg.t_end * k as f64 / 200.0, &mut buf);
        let z: Vec<Vec2> = (0..4).map(|a| Vec2::new(buf[2 * a], buf[2 * a + 1])).collect();
        let st = PlanarState::new(z, state.strengths.clone())?;
        let red = crate::fourv::aa4_forward(&crate::fourv::dft_forward(&st)?)?;
        max_dev = max_dev.max((crate::fourv::xi4(&red)? - expect).abs());
    }
    let theta_d = phases::dynamic_phase_closed_form4(gamma, mu, cfg.t_end)?;
    let report = serde_json::json!({
        "problem": "four",
        "gamma": gamma,
        "mu": mu,
        "xi_closed_form": expect,
        "xi_max_deviation": max_dev,
        "window": cfg.t_end,
        "theta_d_over_window": theta_d,
        "theta_d_mod_2pi": mod_2pi(theta_d),
    });
    let path = cfg.out_path("phases4.json");
    let text = serde_json::to_string_pretty(&report).map_err(|e| Error::Inconsistency(e.to_string()))?;
    std::fs::write(&path, &text)?;
    println!("{text}");
    println!("wrote {}", path.display());
    if max_dev > 1e-6 * expect.abs() {
        return Err(Error::Inconsistency(format!("xi deviated by {max_dev} from {expect}")));
    }
    Ok(())
}

fn cmd_portrait(cfg: &RunConfig) -> Result<()> {
    use rayon::prelude::*;
    let s = cfg.strengths()?;
    if matches!(cfg.problem, Problem::Four) {
        return Err(Error::Config("portrait supports problem \"three\" only".into()));
    }
    let mu = cfg.mu()?;
    let ctx = ReducedContext::new(s, mu, cfg.chart)?;
    let icfg = cfg.integrator_config();
    let p = &cfg.portrait;
    let mut seeds = Vec::new();
    for i in 0..p.i1_steps {
        for j in 0..p.phi1_steps {
            let i1 = p.i1_min + (p.i1_max - p.i1_min) * (i as f64 + 0.5) / p.i1_steps as f64;
            let phi1 = p.phi1_min + (p.phi1_max - p.phi1_min) * (j as f64 + 0.5) / p.phi1_steps as f64;
            seeds.push((i1, phi1));
        }
    }
    let lines: Vec<(usize, Vec<(f64, f64, f64)>)> = seeds
        .par_iter()
        .enumerate()
        .filter_map(|(id, &(i1, phi1))| {
            let traj = integrate(
                |_t, y, dy| {
                    let f = ctx.vector_field(y[0], y[1])?;
                    dy[0] = f[0];
                    dy[1] = f[1];
                    Ok(())
                },
                0.0,
                &[i1, phi1],
                p.t_end,
                &icfg,
            )
            .ok()?;
            let mut pts = Vec::with_capacity(cfg.samples + 1);
            let mut y = [0.0; 2];
            for k in 0..=cfg.samples {
                let t = p.t_end * k as f64 / cfg.samples as f64;
                traj.eval(t, &mut y);
                pts.push((t, y[0], y[1]));
            }
            Some((id, pts))
        })
        .collect();
    let mut sorted = lines;
    sorted.sort_by_key(|(id, _)| *id);

    // CSV of raw polylines
    let mut csv = String::from("# reduced flow lines; columns: seed_id, t, i1, phi1 (phi1 unwrapped)\nseed_id,t,i1,phi1\n");
    for (id, pts) in &sorted {
        for (t, i1, phi1) in pts {
            let _ = writeln!(csv, "{id},{},{},{}", g17(*t), g17(*i1), g17(*phi1));
        }
    }
    let csv_path = cfg.out_path("portrait.csv");
    std::fs::write(&csv_path, &csv)?;

    // SVG in the (phi1, I1) window, phi1 folded with period pi
    let (w, h) = (720.0, 540.0);
    let margin = 40.0;
    let span_phi = p.phi1_max - p.phi1_min;
    let span_i = p.i1_max - p.i1_min;
    let to_xy = |phi1: f64, i1: f64| {
        (
            margin + (phi1 - p.phi1_min) / span_phi * (w - 2.0 * margin),
            h - margin - (i1 - p.i1_min) / span_i * (h - 2.0 * margin),
        )
    };
    let mut svg = SvgDoc::new(w, h);
    // frame
    let (x0, y0) = to_xy(p.phi1_min, p.i1_min);
    let (x1, y1) = to_xy(p.phi1_max, p.i1_max);
    svg.polyline(&[(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)], "#000000", 1.0);
    svg.text(w / 2.0 - 10.0, h - 8.0, 13.0, "phi1");
    svg.text(8.0, h / 2.0, 13.0, "I1");
    let pi = std::f64::consts::PI;
    for (_, pts) in &sorted {
        let mut seg: Vec<(f64, f64)> = Vec::new();
        let mut prev_folded = f64::NAN;
        for (_, i1, phi1) in pts {
            // fold phi1 into the window modulo the pi identification
            let mut ph = phi1 - pi * ((phi1 - p.phi1_min) / pi).floor();
            if ph > p.phi1_max {
                ph -= pi;
            }
            if *i1 < p.i1_min || *i1 > p.i1_max || ph < p.phi1_min {
                if seg.len() > 1 {
                    svg.polyline(&seg, "#1f77b4", 0.8);
                }
                seg.clear();
                prev_folded = f64::NAN;
                continue;
            }
            if prev_folded.is_finite() && (ph - prev_folded).abs() > span_phi / 2.0 {
                if seg.len() > 1 {
                    svg.polyline(&seg, "#1f77b4", 0.8);
                }
                seg.clear();
            }
            seg.push(to_xy(ph, *i1));
            prev_folded = ph;
        }
        if seg.len() > 1 {
            svg.polyline(&seg, "#1f77b4", 0.8);
        }
    }
    let svg_path = cfg.out_path("portrait.svg");
    std::fs::write(&svg_path, svg.finish(cfg.output.svg_timestamp))?;
    println!("wrote {} and {}", csv_path.display(), svg_path.display());
    Ok(())
}

fn cmd_ap_period(cfg: &RunConfig) -> Result<()> {
    let s = cfg.strengths()?;
    if s.len() != 3 || !s.all_identical() {
        return Err(Error::Config("ap-period requires three identical strengths".into()));
    }
    let gamma = s.get(0);
    let state = cfg.initial_state()?;
    let c = state.conserved_set()?;
    if c.z0.norm() > 1e-8 {
        return Err(Error::Config("ap-period requires the center of circulation at the origin".into()));
    }
    let i2 = c.theta0 / 2.0;
    let params = elliptic::ap_params(c.h, i2, gamma)?;
    let t_i = elliptic::ap_period(&params, i2, gamma)?;
    // try to match against a detected reduced periodic orbit
    let icfg = cfg.integrator_config();
    let orbit = ReducedContext::new(s, -i2, cfg.chart).and_then(|ctx| {
        let (red, _) = crate::jacobi::pipeline_forward(&state, &ctx.chart)?;
        find_periodic_orbit(&ctx, red.i1, red.phi1, &icfg, 100.0 * t_i)
    });
    let (orbit_period, multiple) = match &orbit {
        Ok(o) => (
            Some(o.period),
            elliptic::ap_reduced_period_multiple(t_i, o.period).ok(),
        ),
        Err(_) => (None, None),
    };
    let report = serde_json::json!({
        "gamma": gamma,
        "energy": c.h,
        "i2": i2,
        "lambda": params.lambda2.sqrt(),
        "lambda2": params.lambda2,
        "branch": match params.branch { elliptic::Branch::A => "a", elliptic::Branch::B => "b" },
        "roots": params.roots,
        "kappa": params.kappa,
        "omega": params.omega,
        "modulus": params.m,
        "period_I": t_i,
        "orbit_period": orbit_period,
        "multiple": multiple,
    });
    let text = serde_json::to_string_pretty(&report).map_err(|e| Error::Inconsistency(e.to_string()))?;
    let path = cfg.out_path("ap_period.json");
    std::fs::write(&path, &text)?;
    println!("{text}");
    println!("wrote {}", path.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// entry point

fn apply_overrides(cfg: &mut RunConfig, args: &CommonArgs) {
    if let Some(mu) = args.mu {
        cfg.mu = Some(mu);
    }
    if let Some(e) = args.energy {
        cfg.energies = vec![e];
    }
    if let Some(tol) = args.tol {
        cfg.integrator.rel_tol = tol;
        cfg.integrator.abs_tol = tol * 1e-2;
    }
}

/// Runs the CLI; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    init_thread_pool();
    let (args, f): (&CommonArgs, fn(&RunConfig) -> Result<()>) = match &cli.command {
        Command::Simulate(a) => (a, cmd_simulate),
        Command::Phases(a) => (a, cmd_phases),
        Command::Portrait(a) => (a, cmd_portrait),
        Command::ApPeriod(a) => (a, cmd_ap_period),
    };
    let mut cfg = match RunConfig::load(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    apply_overrides(&mut cfg, args);
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return EXIT_CONFIG;
    }
    if let Err(e) = std::fs::create_dir_all(&cfg.output.dir) {
        eprintln!("error: cannot create output dir {}: {e}", cfg.output.dir);
        return EXIT_CONFIG;
    }
    match f(&cfg) {
        Ok(()) => 0,
        Err(Error::Config(msg)) => {
            eprintln!("error: {msg}");
            EXIT_CONFIG
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_NUMERICAL
        }
    }
}
