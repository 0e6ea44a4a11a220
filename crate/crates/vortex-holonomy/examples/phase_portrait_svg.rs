//! Renders the reduced phase portrait (I1 against phi1) for the reference
//! strengths as an SVG, by integrating the reduced flow from a grid of
//! seeds. Writes portrait_example.svg to the current directory.

use vortex_holonomy::cli::SvgDoc;
use vortex_holonomy::dynamics::Strengths;
use vortex_holonomy::integrator::{integrate, IntegratorConfig};
use vortex_holonomy::reduced::ReducedContext;

fn main() {
    let strengths = Strengths::new(vec![7.615, -3.46, -3.155]).unwrap();
    let ctx = ReducedContext::new(strengths, 1.0, 2).unwrap();
    let cfg = IntegratorConfig::default();

    let (w, h) = (720.0, 540.0);
    let margin = 40.0;
    let pi = std::f64::consts::PI;
    let (phi_min, phi_max) = (-pi / 4.0, 3.0 * pi / 4.0);
    let (i_min, i_max) = (-0.98, 0.98);
    let to_xy = |phi: f64, i1: f64| {
        (
            margin + (phi - phi_min) / (phi_max - phi_min) * (w - 2.0 * margin),
            h - margin - (i1 - i_min) / (i_max - i_min) * (h - 2.0 * margin),
        )
    };

    let mut svg = SvgDoc::new(w, h);
    let (x0, y0) = to_xy(phi_min, i_min);
    let (x1, y1) = to_xy(phi_max, i_max);
    svg.polyline(&[(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)], "#000", 1.0);

    let mut drawn = 0;
    for gi in 0..12 {
        for gp in 0..8 {
            let i1 = i_min + (i_max - i_min) * (gi as f64 + 0.5) / 12.0;
            let phi1 = phi_min + (phi_max - phi_min) * (gp as f64 + 0.5) / 8.0;
            let Ok(traj) = integrate(
                |_t, y, dy| {
                    let f = ctx.vector_field(y[0], y[1])?;
                    dy[0] = f[0];
                    dy[1] = f[1];
                    Ok(())
                },
                0.0,
                &[i1, phi1],
                1.5,
                &cfg,
            ) else {
                continue;
            };
            let mut seg = Vec::new();
            let mut y = [0.0; 2];
            let mut prev = f64::NAN;
            for k in 0..=600 {
                traj.eval(1.5 * k as f64 / 600.0, &mut y);
                // fold phi1 with the period-pi identification
                let mut ph = y[1] - pi * ((y[1] - phi_min) / pi).floor();
                if ph > phi_max {
                    ph -= pi;
                }
                let jump = prev.is_finite() && (ph - prev).abs() > (phi_max - phi_min) / 2.0;
                if y[0] < i_min || y[0] > i_max || ph < phi_min || jump {
                    if seg.len() > 1 {
                        svg.polyline(&seg, "#1f77b4", 0.8);
                        drawn += 1;
                    }
                    seg.clear();
                    prev = f64::NAN;
                    if !jump {
                        continue;
                    }
                }
                seg.push(to_xy(ph, y[0]));
                prev = ph;
            }
            if seg.len() > 1 {
                svg.polyline(&seg, "#1f77b4", 0.8);
                drawn += 1;
            }
        }
    }
    std::fs::write("portrait_example.svg", svg.finish(false)).unwrap();
    println!("wrote portrait_example.svg ({drawn} polylines)");
}
