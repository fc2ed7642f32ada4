//! Typed, validated scenario built from an INI document.

use std::path::PathBuf;
use std::str::FromStr;

use twofluid::relaxation::{Channel, Mechanism, RelaxationParams};
use twofluid::solver::{Boundary, Grid1D, Limiter, Scheme, SolverConfig};
use twofluid::state::{EosPair, MixturePrimitive, PhaseState};
use twofluid::{Closure, Eos};

use crate::ini::{ConfigError, Document, Entry, Section};

const SECTIONS: [&str; 8] = [
    "phase1",
    "phase2",
    "initial",
    "initial.left",
    "initial.right",
    "solver",
    "relaxation",
    "output",
];
const EOS_KEYS: [&str; 4] = ["gamma", "p_inf", "cv", "q"];
const STATE_KEYS: [&str; 7] = ["alpha1", "rho1", "u1", "p1", "rho2", "u2", "p2"];
const INITIAL_KEYS: [&str; 5] = ["profile", "x_split", "center", "width", "amplitude"];
const SOLVER_KEYS: [&str; 9] = [
    "cells", "x_lo", "x_hi", "t_end", "cfl", "scheme", "boundary", "closure", "limiter",
];
const RELAXATION_KEYS: [&str; 5] = ["eps_p", "eps_u", "eps_t", "eps_T", "order"];
const OUTPUT_KEYS: [&str; 2] = ["dir", "times"];

#[derive(Debug, Clone, PartialEq)]
pub enum Initial {
    /// Piecewise-constant data split at `x_split`.
    Riemann {
        left: MixturePrimitive<f64>,
        right: MixturePrimitive<f64>,
        x_split: f64,
    },
    /// Gaussian volume-fraction bump `α₁ + A exp(-((x - c)/w)²)` on the
    /// background state.
    AlphaBump {
        background: MixturePrimitive<f64>,
        center: f64,
        width: f64,
        amplitude: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub eos: EosPair<f64>,
    pub initial: Initial,
    pub cells: usize,
    pub x_lo: f64,
    pub x_hi: f64,
    pub solver: SolverConfig<f64>,
    pub relaxation: RelaxationParams<f64>,
    pub output_dir: PathBuf,
    pub output_times: Vec<f64>,
}

/// Fluids and the two named states, for the analysis subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct StatePair {
    pub eos: EosPair<f64>,
    pub left: MixturePrimitive<f64>,
    pub right: Option<MixturePrimitive<f64>>,
}

impl Scenario {
    pub fn grid(&self) -> twofluid::Result<Grid1D<f64>> {
        match self.initial {
            Initial::Riemann { left, right, x_split } => {
                Grid1D::riemann(self.cells, self.x_lo, self.x_hi, x_split, self.eos, left, right)
            }
            Initial::AlphaBump {
                background,
                center,
                width,
                amplitude,
            } => Grid1D::from_fn(self.cells, self.x_lo, self.x_hi, self.eos, |x| {
                let mut u = background;
                u.alpha1 += amplitude * (-((x - center) / width).powi(2)).exp();
                u
            }),
        }
    }
}

pub fn parse_config(text: &str) -> Result<Scenario, ConfigError> {
    let doc = Document::parse(text)?;
    check_sections(&doc)?;
    let eos = parse_fluids(&doc)?;
    let solver_sec = doc.require("solver")?;
    solver_sec.expect_keys(&SOLVER_KEYS)?;
    let cells_entry = required(solver_sec, "cells")?;
    let cells = parse_usize(solver_sec, cells_entry)?;
    if cells < 4 {
        return Err(solver_sec.key_error(cells_entry, format!("cells must be at least 4 (got {cells})")));
    }
    let x_lo = optional_number(solver_sec, "x_lo", 0.0)?;
    let x_hi = optional_number(solver_sec, "x_hi", 1.0)?;
    if !(x_hi > x_lo) {
        let e = solver_sec.get("x_hi").or(solver_sec.get("x_lo"));
        let msg = format!("x_hi must exceed x_lo (got [{x_lo}, {x_hi}])");
        return Err(match e {
            Some(e) => solver_sec.key_error(e, msg),
            None => solver_sec.error(msg),
        });
    }
    let t_end_entry = required(solver_sec, "t_end")?;
    let t_end = parse_number(solver_sec, t_end_entry)?;
    if t_end < 0.0 {
        return Err(solver_sec.key_error(t_end_entry, format!("t_end must be non-negative (got {t_end})")));
    }
    let cfl = optional_number(solver_sec, "cfl", 0.45)?;
    if !(cfl > 0.0 && cfl <= 1.0) {
        let e = solver_sec.get("cfl").expect("non-default cfl has an entry");
        return Err(solver_sec.key_error(e, format!("cfl must lie in (0, 1] (got {cfl})")));
    }
    let solver = SolverConfig {
        cfl,
        t_end,
        scheme: optional_enum::<Scheme>(solver_sec, "scheme")?.unwrap_or_default(),
        boundary: optional_enum::<Boundary>(solver_sec, "boundary")?.unwrap_or_default(),
        closure: optional_enum::<Closure>(solver_sec, "closure")?.unwrap_or_default(),
        limiter: optional_enum::<Limiter>(solver_sec, "limiter")?.unwrap_or_default(),
    };
    let initial = parse_initial(&doc, &eos, x_lo, x_hi)?;
    let relaxation = parse_relaxation(&doc)?;
    let (output_dir, output_times) = parse_output(&doc, t_end)?;
    Ok(Scenario {
        eos,
        initial,
        cells,
        x_lo,
        x_hi,
        solver,
        relaxation,
        output_dir,
        output_times,
    })
}

/// Reads `[phase1]`, `[phase2]`, `[initial.left]` and, when present,
/// `[initial.right]`. Other sections are validated if present but not
/// required.
pub fn parse_state_pair(text: &str) -> Result<StatePair, ConfigError> {
    let doc = Document::parse(text)?;
    check_sections(&doc)?;
    let eos = parse_fluids(&doc)?;
    let left = parse_state(doc.require("initial.left")?, &eos)?;
    let right = match doc.section("initial.right") {
        Some(s) => Some(parse_state(s, &eos)?),
        None => None,
    };
    for (name, keys) in [
        ("initial", &INITIAL_KEYS[..]),
        ("solver", &SOLVER_KEYS[..]),
        ("relaxation", &RELAXATION_KEYS[..]),
        ("output", &OUTPUT_KEYS[..]),
    ] {
        if let Some(s) = doc.section(name) {
            s.expect_keys(keys)?;
        }
    }
    Ok(StatePair { eos, left, right })
}

/// Parses a state written as `alpha1,rho1,u1,p1,rho2,u2,p2`.
pub fn parse_state_list(text: &str, eos: &EosPair<f64>) -> Result<MixturePrimitive<f64>, ConfigError> {
    let values: Vec<f64> = text
        .split(',')
        .map(|v| {
            let v = v.trim();
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| ConfigError::new(format!("invalid number '{v}' in state list")))
        })
        .collect::<Result<_, _>>()?;
    if values.len() != 7 {
        return Err(ConfigError::new(format!(
            "state list needs 7 values (alpha1,rho1,u1,p1,rho2,u2,p2), got {}",
            values.len()
        )));
    }
    let u = MixturePrimitive::from_values(values[0], values[1], values[2], values[3], values[4], values[5], values[6]);
    u.validate(eos).map_err(|e| ConfigError::new(format!("state list: {e}")))?;
    Ok(u)
}

fn check_sections(doc: &Document) -> Result<(), ConfigError> {
    for s in &doc.sections {
        if !SECTIONS.contains(&s.name.as_str()) {
            return Err(s.error(format!("unknown section (allowed: {})", SECTIONS.join(", "))));
        }
    }
    Ok(())
}

fn parse_fluids(doc: &Document) -> Result<EosPair<f64>, ConfigError> {
    Ok(EosPair::new(
        parse_eos(doc.require("phase1")?)?,
        parse_eos(doc.require("phase2")?)?,
    ))
}

fn parse_eos(sec: &Section) -> Result<Eos, ConfigError> {
    sec.expect_keys(&EOS_KEYS)?;
    let gamma_entry = required(sec, "gamma")?;
    let gamma = parse_number(sec, gamma_entry)?;
    if !(gamma > 1.0) {
        return Err(sec.key_error(gamma_entry, format!("gamma must exceed 1 (got {gamma})")));
    }
    let p_inf = optional_number(sec, "p_inf", 0.0)?;
    if p_inf < 0.0 {
        return Err(sec.key_error(sec.get("p_inf").unwrap(), format!("p_inf must be non-negative (got {p_inf})")));
    }
    let cv = optional_number(sec, "cv", 1.0)?;
    if !(cv > 0.0) {
        return Err(sec.key_error(sec.get("cv").unwrap(), format!("cv must be positive (got {cv})")));
    }
    let q = optional_number(sec, "q", 0.0)?;
    Eos::new(gamma, p_inf, cv, q).map_err(|e| sec.error(e.to_string()))
}

fn parse_state(sec: &Section, eos: &EosPair<f64>) -> Result<MixturePrimitive<f64>, ConfigError> {
    sec.expect_keys(&STATE_KEYS)?;
    let mut v = [0.0; 7];
    for (i, key) in STATE_KEYS.iter().enumerate() {
        v[i] = parse_number(sec, required(sec, key)?)?;
    }
    let alpha1 = v[0];
    if !(alpha1 > 0.0 && alpha1 < 1.0) {
        return Err(sec.key_error(sec.get("alpha1").unwrap(), format!("alpha1 must lie in (0, 1) (got {alpha1})")));
    }
    for (k, law) in [(1, &eos.phase1), (2, &eos.phase2)] {
        let rho_key = format!("rho{k}");
        let p_key = format!("p{k}");
        let rho = parse_number(sec, sec.get(&rho_key).unwrap())?;
        let p = parse_number(sec, sec.get(&p_key).unwrap())?;
        if !(rho > 0.0) {
            return Err(sec.key_error(sec.get(&rho_key).unwrap(), format!("{rho_key} must be positive (got {rho})")));
        }
        if !(p + law.p_inf > 0.0) {
            return Err(sec.key_error(
                sec.get(&p_key).unwrap(),
                format!("{p_key} + p_inf must be positive (got {p_key} = {p}, p_inf = {})", law.p_inf),
            ));
        }
    }
    Ok(MixturePrimitive::new(
        alpha1,
        PhaseState::new(v[1], v[2], v[3]),
        PhaseState::new(v[4], v[5], v[6]),
    ))
}

fn parse_initial(doc: &Document, eos: &EosPair<f64>, x_lo: f64, x_hi: f64) -> Result<Initial, ConfigError> {
    let empty = Section {
        name: "initial".to_string(),
        line: 0,
        entries: Vec::new(),
    };
    let sec = doc.section("initial").unwrap_or(&empty);
    sec.expect_keys(&INITIAL_KEYS)?;
    let profile = sec.get("profile").map(|e| e.value.as_str()).unwrap_or("riemann");
    let left = parse_state(doc.require("initial.left")?, eos)?;
    match profile {
        "riemann" => {
            for key in ["center", "width", "amplitude"] {
                if let Some(e) = sec.get(key) {
                    return Err(sec.key_error(e, format!("'{key}' is not used by profile riemann")));
                }
            }
            let right = parse_state(doc.require("initial.right")?, eos)?;
            let x_split = optional_number(sec, "x_split", 0.5 * (x_lo + x_hi))?;
            if !(x_split >= x_lo && x_split <= x_hi) {
                return Err(sec.key_error(
                    sec.get("x_split").unwrap(),
                    format!("x_split must lie in [{x_lo}, {x_hi}] (got {x_split})"),
                ));
            }
            Ok(Initial::Riemann { left, right, x_split })
        }
        "alpha-bump" | "alpha_bump" => {
            if let Some(e) = sec.get("x_split") {
                return Err(sec.key_error(e, "'x_split' is not used by profile alpha-bump"));
            }
            if let Some(r) = doc.section("initial.right") {
                return Err(r.error("section is not used by profile alpha-bump"));
            }
            let center = optional_number(sec, "center", 0.5 * (x_lo + x_hi))?;
            let width = optional_number(sec, "width", 0.1 * (x_hi - x_lo))?;
            if !(width > 0.0) {
                return Err(sec.key_error(sec.get("width").unwrap(), format!("width must be positive (got {width})")));
            }
            let amplitude = optional_number(sec, "amplitude", 0.0)?;
            let peak = left.alpha1 + amplitude;
            if !(peak > 0.0 && peak < 1.0) {
                let e = sec.get("amplitude").expect("non-zero amplitude has an entry");
                return Err(sec.key_error(
                    e,
                    format!("alpha1 + amplitude must lie in (0, 1) (got {peak})"),
                ));
            }
            Ok(Initial::AlphaBump {
                background: left,
                center,
                width,
                amplitude,
            })
        }
        other => Err(sec.key_error(
            sec.get("profile").unwrap(),
            format!("unknown profile '{other}' (expected riemann or alpha-bump)"),
        )),
    }
}

fn parse_relaxation(doc: &Document) -> Result<RelaxationParams<f64>, ConfigError> {
    let Some(sec) = doc.section("relaxation") else {
        return Ok(RelaxationParams::off());
    };
    sec.expect_keys(&RELAXATION_KEYS)?;
    if let (Some(_), Some(e)) = (sec.get("eps_t"), sec.get("eps_T")) {
        return Err(sec.key_error(e, "eps_T duplicates eps_t"));
    }
    let channel = |key: &str| -> Result<Channel<f64>, ConfigError> {
        let Some(e) = sec.get(key) else { return Ok(Channel::Off) };
        match e.value.as_str() {
            "inf" => Ok(Channel::Off),
            "instant" => Ok(Channel::Instantaneous),
            _ => {
                let eps = parse_number(sec, e)?;
                if !(eps > 0.0) {
                    return Err(sec.key_error(e, format!("relaxation time must be positive, inf or instant (got {eps})")));
                }
                Ok(Channel::FiniteRate(eps))
            }
        }
    };
    let thermal_key = if sec.get("eps_T").is_some() { "eps_T" } else { "eps_t" };
    let thermal = channel(thermal_key)?;
    if thermal == Channel::Instantaneous {
        return Err(sec.key_error(
            sec.get(thermal_key).unwrap(),
            "thermal relaxation supports finite rates only; 'instant' is not allowed",
        ));
    }
    let mut params = RelaxationParams::new(channel("eps_p")?, channel("eps_u")?, thermal)
        .map_err(|e| sec.error(e.to_string()))?;
    if let Some(e) = sec.get("order") {
        let names: Vec<&str> = e.value.split(',').map(str::trim).collect();
        if names.len() != 3 {
            return Err(sec.key_error(e, "order must list velocity, pressure and thermal exactly once"));
        }
        let mut order = [Mechanism::Velocity; 3];
        for (slot, name) in order.iter_mut().zip(&names) {
            *slot = match *name {
                "velocity" => Mechanism::Velocity,
                "pressure" => Mechanism::Pressure,
                "thermal" => Mechanism::Thermal,
                other => {
                    return Err(sec.key_error(
                        e,
                        format!("unknown mechanism '{other}' (expected velocity, pressure or thermal)"),
                    ))
                }
            };
        }
        params = params.with_order(order).map_err(|err| sec.key_error(e, err.to_string()))?;
    }
    Ok(params)
}

fn parse_output(doc: &Document, t_end: f64) -> Result<(PathBuf, Vec<f64>), ConfigError> {
    let Some(sec) = doc.section("output") else {
        return Ok((PathBuf::from("output"), vec![0.0, t_end]));
    };
    sec.expect_keys(&OUTPUT_KEYS)?;
    let dir = sec.get("dir").map(|e| PathBuf::from(&e.value)).unwrap_or_else(|| PathBuf::from("output"));
    let times = match sec.get("times") {
        Some(e) => {
            let mut times = Vec::new();
            for item in e.value.split(',') {
                let item = item.trim();
                let t = parse_number_str(item).map_err(|m| sec.key_error(e, m))?;
                if !(0.0..=t_end).contains(&t) {
                    return Err(sec.key_error(e, format!("output time {t} lies outside [0, t_end = {t_end}]")));
                }
                times.push(t);
            }
            times
        }
        None => vec![0.0, t_end],
    };
    Ok((dir, times))
}

fn required<'a>(sec: &'a Section, key: &str) -> Result<&'a Entry, ConfigError> {
    sec.get(key)
        .ok_or_else(|| sec.error("missing required key").for_key(key))
}

fn parse_number_str(text: &str) -> Result<f64, String> {
    let ok = !text.is_empty()
        && text
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'));
    match text.parse::<f64>() {
        Ok(v) if ok && v.is_finite() => Ok(v),
        _ => Err(format!("expected a finite number, found '{text}'")),
    }
}

fn parse_number(sec: &Section, e: &Entry) -> Result<f64, ConfigError> {
    parse_number_str(&e.value).map_err(|m| sec.key_error(e, m))
}

fn optional_number(sec: &Section, key: &str, default: f64) -> Result<f64, ConfigError> {
    match sec.get(key) {
        Some(e) => parse_number(sec, e),
        None => Ok(default),
    }
}

fn parse_usize(sec: &Section, e: &Entry) -> Result<usize, ConfigError> {
    e.value
        .parse::<usize>()
        .map_err(|_| sec.key_error(e, format!("expected a non-negative integer, found '{}'", e.value)))
}

fn optional_enum<T: FromStr<Err = String>>(sec: &Section, key: &str) -> Result<Option<T>, ConfigError> {
    match sec.get(key) {
        Some(e) => e.value.parse::<T>().map(Some).map_err(|m| sec.key_error(e, m)),
        None => Ok(None),
    }
}
