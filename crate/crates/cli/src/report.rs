//! Deterministic text and CSV rendering.

use std::fmt::Write as _;

use twofluid::solver::{Diagnostics, Grid1D};

pub const SNAPSHOT_HEADER: &str = "x,alpha1,rho1,u1,p1,s1,rho2,u2,p2,s2";
pub const DIAGNOSTICS_HEADER: &str =
    "step,t,dt,mass1,mass2,momentum,energy,entropy,min_resonance_margin,clip_count";

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn nums(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(",")
}

/// Snapshot file name; `f64` display is the shortest exact decimal.
pub fn snapshot_name(time: f64) -> String {
    format!("t{time}.csv")
}

pub fn snapshot_csv(grid: &Grid1D<f64>) -> twofluid::Result<String> {
    let mut out = String::with_capacity(grid.len() * 200);
    out.push_str(SNAPSHOT_HEADER);
    out.push('\n');
    for (i, u) in grid.primitives()?.iter().enumerate() {
        let s1 = grid.eos.phase1.entropy_unchecked(u.phase1.rho, u.phase1.p);
        let s2 = grid.eos.phase2.entropy_unchecked(u.phase2.rho, u.phase2.p);
        let row = [
            grid.cell_center(i),
            u.alpha1,
            u.phase1.rho,
            u.phase1.u,
            u.phase1.p,
            s1,
            u.phase2.rho,
            u.phase2.u,
            u.phase2.p,
            s2,
        ];
        out.push_str(&nums(&row));
        out.push('\n');
    }
    Ok(out)
}

pub fn diagnostics_csv(records: &[Diagnostics<f64>]) -> String {
    let mut out = String::with_capacity(records.len() * 220);
    out.push_str(DIAGNOSTICS_HEADER);
    out.push('\n');
    for d in records {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            d.step,
            nums(&[d.t, d.dt, d.mass1, d.mass2, d.momentum, d.energy, d.entropy]),
            num(d.min_resonance_margin),
            d.clip_count
        );
    }
    out
}

/// `(final - initial) / |initial|`, or the absolute change when the
/// initial total vanishes.
pub fn relative_drift(initial: f64, fin: f64) -> f64 {
    let change = fin - initial;
    if initial != 0.0 {
        change / initial.abs()
    } else {
        change
    }
}

pub struct SummaryInput<'a> {
    pub config_path: &'a str,
    pub closure: &'a str,
    pub boundary: &'a str,
    pub limiter: &'a str,
    pub cells: usize,
    pub diagnostics: &'a [Diagnostics<f64>],
    pub snapshots: &'a [String],
    pub equilibrium_violation: (f64, f64),
}

pub fn summary(s: &SummaryInput<'_>) -> String {
    let first = s.diagnostics.first().expect("initial diagnostics record");
    let last = s.diagnostics.last().expect("initial diagnostics record");
    let mut out = String::new();
    let mut line = |k: &str, v: String| {
        let _ = writeln!(out, "{k}: {v}");
    };
    line("config", s.config_path.to_string());
    line("closure", s.closure.to_string());
    line("boundary", s.boundary.to_string());
    line("limiter", s.limiter.to_string());
    line("cells", s.cells.to_string());
    line("steps", last.step.to_string());
    line("final_time", num(last.t));
    line("snapshots", s.snapshots.join(" "));
    for (name, a, b) in [
        ("mass1", first.mass1, last.mass1),
        ("mass2", first.mass2, last.mass2),
        ("momentum", first.momentum, last.momentum),
        ("energy", first.energy, last.energy),
    ] {
        line(&format!("{name}_initial"), num(a));
        line(&format!("{name}_final"), num(b));
        line(&format!("{name}_drift"), num(relative_drift(a, b)));
    }
    let min_step_change = s
        .diagnostics
        .windows(2)
        .map(|w| w[1].entropy - w[0].entropy)
        .fold(f64::INFINITY, f64::min);
    line("entropy_initial", num(first.entropy));
    line("entropy_final", num(last.entropy));
    line("entropy_change", num(last.entropy - first.entropy));
    line(
        "entropy_min_step_change",
        if min_step_change.is_finite() { num(min_step_change) } else { "none".to_string() },
    );
    let clips: usize = s.diagnostics.iter().map(|d| d.clip_count).sum();
    line("clip_count_total", clips.to_string());
    let margin = s
        .diagnostics
        .iter()
        .map(|d| d.min_resonance_margin)
        .fold(f64::INFINITY, f64::min);
    line("min_resonance_margin", num(margin));
    line("final_pressure_disequilibrium", num(s.equilibrium_violation.0));
    line("final_velocity_disequilibrium", num(s.equilibrium_violation.1));
    out
}
