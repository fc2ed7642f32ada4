//! Subcommand implementations. Each writes its report to `out` and returns a
//! [`CliError`] carrying the exit status on failure.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;
use twofluid::checks::{self, CheckOptions};
use twofluid::eigen::{self, FieldKind, WaveId};
use twofluid::solver;
use twofluid::state::{EosPair, MixturePrimitive};
use twofluid::waves::{self, ShockCandidate};
use twofluid::{Branch, Phase};

use crate::ini::ConfigError;
use crate::report::{self, num, nums, SummaryInput};
use crate::scenario::{self, parse_config, parse_state_pair, parse_state_list};

/// Resonance threshold below which eigenvectors are not reported.
const RESONANCE_THRESHOLD: f64 = 1e-8;
/// Relative tolerance for "same invariant" in `riemann` reports.
const INVARIANT_TOL: f64 = 1e-8;
/// Jump-condition tolerance for the admissibility verdict.
const RH_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Solver(twofluid::Error),
    #[error("{failed} of {total} checks failed")]
    CheckFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Read { .. } => 1,
            CliError::Solver(_) | CliError::Write { .. } => 2,
            CliError::CheckFailed { .. } => 3,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Write {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

/// Integrates the scenario and writes snapshots, `diagnostics.csv` and
/// `summary.txt` into the output directory (`out_dir` overrides the config).
pub fn cmd_run(config: &Path, out_dir: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let scenario = parse_config(&read(config)?)?;
    let grid = scenario
        .grid()
        .map_err(|e| ConfigError::new(format!("initial data: {e}")).in_section("initial"))?;
    let result = solver::run(grid, &scenario.solver, &scenario.relaxation, &scenario.output_times)
        .map_err(CliError::Solver)?;

    let dir = out_dir.map(Path::to_path_buf).unwrap_or_else(|| scenario.output_dir.clone());
    fs::create_dir_all(&dir).map_err(|source| CliError::Write {
        path: dir.clone(),
        source,
    })?;
    let mut names = Vec::new();
    for snap in &result.snapshots {
        let name = report::snapshot_name(snap.time);
        let csv = report::snapshot_csv(&snap.grid).map_err(CliError::Solver)?;
        write_file(&dir.join(&name), &csv)?;
        names.push(name);
    }
    write_file(&dir.join("diagnostics.csv"), &report::diagnostics_csv(&result.diagnostics))?;
    let violation = solver::equilibrium_violation(result.final_grid()).map_err(CliError::Solver)?;
    let summary = report::summary(&SummaryInput {
        config_path: &config.display().to_string(),
        closure: scenario.solver.closure.name(),
        boundary: scenario.solver.boundary.name(),
        limiter: &scenario.solver.limiter.to_string(),
        cells: scenario.cells,
        diagnostics: &result.diagnostics,
        snapshots: &names,
        equilibrium_violation: violation,
    });
    write_file(&dir.join("summary.txt"), &summary)?;
    emit(out, &summary)?;
    emit(out, &format!("output: {}\n", dir.display()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

fn state_line(u: &MixturePrimitive<f64>) -> String {
    format!(
        "alpha1={} rho1={} u1={} p1={} rho2={} u2={} p2={}",
        num(u.alpha1),
        num(u.phase1.rho),
        num(u.phase1.u),
        num(u.phase1.p),
        num(u.phase2.rho),
        num(u.phase2.u),
        num(u.phase2.p)
    )
}

fn matrix_lines(m: &[[f64; 7]; 7]) -> String {
    m.iter().map(|row| format!("  {}\n", nums(row))).collect()
}

/// Eigenstructure report for one state: eigenvalues, resonance margin,
/// field classification, right eigenvectors and the symmetrizer.
pub fn cmd_eigen(config: &Path, side: Side, state: Option<&str>, out: &mut dyn Write) -> Result<(), CliError> {
    let pair = parse_state_pair(&read(config)?)?;
    let u = match (state, side) {
        (Some(list), _) => parse_state_list(list, &pair.eos)?,
        (None, Side::Left) => pair.left,
        (None, Side::Right) => pair
            .right
            .ok_or_else(|| ConfigError::new("missing required section").in_section("initial.right"))?,
    };
    let eos = &pair.eos;
    let mut text = format!("state: {}\n", state_line(&u));
    let lambda = eigen::eigenvalues(&u, eos);
    text.push_str("eigenvalues:\n");
    for w in WaveId::ALL {
        text.push_str(&format!("  {}: {}\n", w.name(), num(lambda[w.index()])));
    }
    let rep = eigen::resonance_report(&u, eos);
    text.push_str(&format!(
        "resonance_margin: {} (phase {}, branch {})\n",
        num(rep.margin),
        rep.phase,
        rep.branch
    ));
    emit(out, &text)?;

    let es = eigen::eigenstructure(&u, eos, RESONANCE_THRESHOLD).map_err(CliError::Solver)?;
    let fields = eigen::classify_fields(&u, eos, RESONANCE_THRESHOLD).map_err(CliError::Solver)?;
    let sym = eigen::symmetrizer(&u, eos, RESONANCE_THRESHOLD).map_err(CliError::Solver)?;
    let mut text = String::from("fields:\n");
    for f in fields {
        let kind = match f.kind {
            FieldKind::LinearlyDegenerate => "linearly-degenerate",
            FieldKind::GenuinelyNonlinear => "genuinely-nonlinear",
        };
        text.push_str(&format!("  {}: {kind} (grad_lambda.r = {})\n", f.wave.name(), num(f.nonlinearity)));
    }
    let names: Vec<&str> = WaveId::ALL.iter().map(|w| w.name()).collect();
    text.push_str("variables: alpha1,u1,p1,s1,u2,p2,s2\n");
    text.push_str(&format!("right_eigenvectors (columns {}):\n", names.join(",")));
    text.push_str(&matrix_lines(&es.r));
    text.push_str(&format!("eigenvector_condition_number: {}\n", num(es.condition_number)));
    text.push_str("symmetrizer:\n");
    text.push_str(&matrix_lines(&sym.p));
    let scale = (0..7).map(|i| sym.p[i][i].abs()).fold(0.0, f64::max);
    let block = sym.y_alpha.iter().flatten().all(|y| y.abs() <= 1e-14 * scale);
    text.push_str(&format!("symmetrizer_block_diagonal: {block}\n"));
    emit(out, &text)
}

/// Mass-flux shock speed `[m u] / [m]` of phase `k`, or the characteristic
/// speed of `wave` at the left state for a zero-strength jump.
fn mass_flux_speed(left: &MixturePrimitive<f64>, right: &MixturePrimitive<f64>, k: Phase, wave: WaveId, eos: &EosPair<f64>) -> f64 {
    let (ml, mr) = (left.partial_mass(k), right.partial_mass(k));
    if ml == mr {
        eigen::eigenvalues(left, eos)[wave.index()]
    } else {
        (mr * right.phase(k).u - ml * left.phase(k).u) / (mr - ml)
    }
}

pub struct RiemannOptions<'a> {
    pub wave: &'a str,
    pub sigma: Option<f64>,
    /// Builds the right state on the shock curve through the left state at
    /// this post-shock pressure instead of reading `[initial.right]`.
    pub hugoniot_pressure: Option<f64>,
}

/// Riemann-invariant, jump-condition and admissibility report for two
/// states and one wave family.
pub fn cmd_riemann(config: &Path, opts: &RiemannOptions<'_>, out: &mut dyn Write) -> Result<(), CliError> {
    let pair = parse_state_pair(&read(config)?)?;
    let eos = &pair.eos;
    let wave: WaveId = opts.wave.parse().map_err(|m: String| {
        ConfigError::new(format!(
            "{m} (expected one of {})",
            WaveId::ALL.iter().map(|w| w.name()).collect::<Vec<_>>().join(", ")
        ))
    })?;
    let acoustic = wave.phase().zip(wave.branch());
    let (left, right, sigma) = match (opts.hugoniot_pressure, acoustic) {
        (Some(p), Some((k, branch))) => {
            let br = waves::hugoniot_state(eos, &pair.left, k, p).map_err(CliError::Solver)?;
            // the given state is upstream: left of a u - c shock, right of a u + c shock
            let c = match branch {
                Branch::Minus => br.minus,
                Branch::Plus => br.plus.swapped(),
            };
            (c.left, c.right, Some(c.sigma))
        }
        (Some(_), None) => {
            return Err(ConfigError::new(format!("--hugoniot needs an acoustic wave, not {}", wave.name())).into())
        }
        (None, _) => {
            let right = pair
                .right
                .ok_or_else(|| ConfigError::new("missing required section").in_section("initial.right"))?;
            (pair.left, right, opts.sigma)
        }
    };
    let sigma = opts.sigma.or(sigma);

    let il = waves::riemann_invariants(wave, &left, eos).map_err(CliError::Solver)?;
    let ir = waves::riemann_invariants(wave, &right, eos).map_err(CliError::Solver)?;
    let jump = il
        .iter()
        .zip(&ir)
        .map(|(a, b)| (a - b).abs() / (1.0 + a.abs().max(b.abs())))
        .fold(0.0, f64::max);
    let mut text = format!("wave: {}\n", wave.name());
    text.push_str(&format!("left: {}\n", state_line(&left)));
    text.push_str(&format!("right: {}\n", state_line(&right)));
    text.push_str(&format!("invariants_left: {}\n", nums(&il)));
    text.push_str(&format!("invariants_right: {}\n", nums(&ir)));
    text.push_str(&format!("invariant_max_relative_jump: {}\n", num(jump)));
    text.push_str(&format!("invariants_constant: {}\n", jump <= INVARIANT_TOL));

    if let Some((k, _)) = acoustic {
        let sigma = sigma.unwrap_or_else(|| mass_flux_speed(&left, &right, k, wave, eos));
        let candidate = ShockCandidate { left, right, sigma, phase: k };
        text.push_str(&format!("sigma: {}\n", num(sigma)));
        match waves::rankine_hugoniot_residual(&candidate, eos) {
            Ok(res) => {
                let worst = waves::max_residual(&res);
                text.push_str(&format!("rh_residual_phase1: {}\n", nums(&res[0])));
                text.push_str(&format!("rh_residual_phase2: {}\n", nums(&res[1])));
                text.push_str(&format!("rh_residual_max: {}\n", num(worst)));
                if worst <= RH_TOL {
                    let adm = waves::admissible(&candidate, eos, RH_TOL).map_err(CliError::Solver)?;
                    text.push_str(&format!("entropy_production: {}\n", num(adm.entropy_production)));
                    text.push_str(&format!("lax: {}\n", adm.lax));
                    text.push_str(&format!("admissible: {}\n", adm.admissible));
                } else {
                    text.push_str("admissible: false (jump conditions violated)\n");
                }
            }
            Err(e) => text.push_str(&format!("admissible: false ({e})\n")),
        }
    }
    emit(out, &text)
}

/// Runs the property suite; any failure maps to exit status 3.
pub fn cmd_check(opts: &CheckOptions, out: &mut dyn Write) -> Result<(), CliError> {
    let results = checks::run_all(opts);
    let mut text = String::new();
    for r in &results {
        text.push_str(&format!("{r}\n"));
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    text.push_str(&format!("{} of {} checks passed\n", results.len() - failed, results.len()));
    emit(out, &text)?;
    if failed > 0 {
        return Err(CliError::CheckFailed {
            failed,
            total: results.len(),
        });
    }
    Ok(())
}

/// Reads `TWOFLUID_THREADS`; unset means all cores.
pub fn thread_limit(value: Option<&str>) -> Result<Option<usize>, ConfigError> {
    match value {
        None => Ok(None),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(ConfigError::new(format!(
                "TWOFLUID_THREADS must be a positive integer (got '{v}')"
            ))),
        },
    }
}

pub use scenario::Scenario;
