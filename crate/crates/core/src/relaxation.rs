//! Mechanical, kinematic and thermal relaxation sources and their pointwise
//! integration.
//!
//! With `S_mec = (p₁ - p₂)/ε_p`, `S_kin = (u₂ - u₁)/ε_u` and
//! `S_th = (T₂ - T₁)/ε_T` the cell ODE is
//!
//! ```text
//! α₁'    = S_mec
//! (m₁u₁)' = +S_kin                   (m₂u₂)' = -S_kin
//! (m₁E₁)' = S_th - p_I S_mec + u_I S_kin
//! (m₂E₂)' = -(m₁E₁)'
//! ```
//!
//! Finite-rate channels are advanced with backward Euler, which is L-stable
//! and keeps the entropy non-decreasing. Instantaneous channels are
//! projections onto the limit of the same ODE as `ε → 0`.

use rayon::prelude::*;

use crate::eos::EosParams;
use crate::error::{Error, Result};
use crate::num::Real;
use crate::state::{Closure, ConservedState, EosPair, MixturePrimitive, Phase, ALPHA_FLOOR};

/// Mode of one relaxation channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Channel<T> {
    Off,
    FiniteRate(T),
    Instantaneous,
}

impl<T: Real> Channel<T> {
    /// `+∞` disables the channel; a positive finite value selects the
    /// finite-rate mode.
    pub fn from_eps(eps: T) -> Result<Self> {
        if eps.is_infinite() && eps > T::zero() {
            Ok(Channel::Off)
        } else if eps > T::zero() && eps.is_finite() {
            Ok(Channel::FiniteRate(eps))
        } else {
            Err(Error::domain(format!(
                "relaxation time must be positive or inf (got {eps})"
            )))
        }
    }

    /// `1/ε` for finite-rate channels, zero otherwise.
    pub fn rate(&self) -> T {
        match *self {
            Channel::FiniteRate(eps) => T::one() / eps,
            _ => T::zero(),
        }
    }

    pub fn is_off(&self) -> bool {
        matches!(self, Channel::Off)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mechanism {
    Velocity,
    Pressure,
    Thermal,
}

impl Mechanism {
    pub const DEFAULT_ORDER: [Mechanism; 3] =
        [Mechanism::Velocity, Mechanism::Pressure, Mechanism::Thermal];
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationParams<T> {
    pub pressure: Channel<T>,
    pub velocity: Channel<T>,
    pub thermal: Channel<T>,
    pub order: [Mechanism; 3],
}

impl<T: Real> Default for RelaxationParams<T> {
    fn default() -> Self {
        Self::off()
    }
}

impl<T: Real> RelaxationParams<T> {
    pub fn off() -> Self {
        Self {
            pressure: Channel::Off,
            velocity: Channel::Off,
            thermal: Channel::Off,
            order: Mechanism::DEFAULT_ORDER,
        }
    }

    pub fn new(pressure: Channel<T>, velocity: Channel<T>, thermal: Channel<T>) -> Result<Self> {
        let params = Self {
            pressure,
            velocity,
            thermal,
            order: Mechanism::DEFAULT_ORDER,
        };
        params.validate()?;
        Ok(params)
    }

    /// Finite-rate parameters from three relaxation times (`inf` disables).
    pub fn finite(eps_p: T, eps_u: T, eps_t: T) -> Result<Self> {
        Self::new(
            Channel::from_eps(eps_p)?,
            Channel::from_eps(eps_u)?,
            Channel::from_eps(eps_t)?,
        )
    }

    pub fn with_order(mut self, order: [Mechanism; 3]) -> Result<Self> {
        self.order = order;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, ch) in [
            ("eps_p", self.pressure),
            ("eps_u", self.velocity),
            ("eps_t", self.thermal),
        ] {
            if let Channel::FiniteRate(eps) = ch {
                if !(eps > T::zero() && eps.is_finite()) {
                    return Err(Error::domain(format!(
                        "{name}: finite-rate relaxation requires a positive time (got {eps})"
                    )));
                }
            }
        }
        if matches!(self.thermal, Channel::Instantaneous) {
            return Err(Error::domain(
                "eps_t: thermal relaxation supports finite rates only",
            ));
        }
        let mut seen = [false; 3];
        for m in self.order {
            seen[m as usize] = true;
        }
        if seen.contains(&false) {
            return Err(Error::domain(
                "relaxation order must list each mechanism exactly once",
            ));
        }
        Ok(())
    }

    pub fn is_off(&self) -> bool {
        self.pressure.is_off() && self.velocity.is_off() && self.thermal.is_off()
    }

    pub fn channel(&self, m: Mechanism) -> Channel<T> {
        match m {
            Mechanism::Velocity => self.velocity,
            Mechanism::Pressure => self.pressure,
            Mechanism::Thermal => self.thermal,
        }
    }
}

/// Source strengths `(S_mec, S_kin, S_th)`. Channels that are not finite-rate
/// contribute zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sources<T> {
    pub mec: T,
    pub kin: T,
    pub th: T,
}

pub fn sources<T: Real>(
    u: &MixturePrimitive<T>,
    eos: &EosPair<T>,
    params: &RelaxationParams<T>,
) -> Sources<T> {
    let t1 = u.thermo(eos, Phase::One).temperature;
    let t2 = u.thermo(eos, Phase::Two).temperature;
    Sources {
        mec: (u.phase1.p - u.phase2.p) * params.pressure.rate(),
        kin: (u.phase2.u - u.phase1.u) * params.velocity.rate(),
        th: (t2 - t1) * params.thermal.rate(),
    }
}

/// Right-hand side in conserved ordering `(α₁, m₁, m₂, q₁, q₂, E₁, E₂)`.
pub fn source_rhs<T: Real>(
    u: &MixturePrimitive<T>,
    eos: &EosPair<T>,
    params: &RelaxationParams<T>,
    closure: Closure,
) -> [T; 7] {
    let s = sources(u, eos, params);
    let (u_i, p_i, _) = closure.interfacial(u);
    let energy = s.th - p_i * s.mec + u_i * s.kin;
    [
        s.mec,
        T::zero(),
        T::zero(),
        s.kin,
        -s.kin,
        energy,
        -energy,
    ]
}

/// Per-channel entropy production `[mechanical, kinetic, thermal]`.
pub fn entropy_production_terms<T: Real>(
    u: &MixturePrimitive<T>,
    eos: &EosPair<T>,
    params: &RelaxationParams<T>,
    closure: Closure,
) -> [T; 3] {
    let s = sources(u, eos, params);
    let t1 = u.thermo(eos, Phase::One).temperature;
    let t2 = u.thermo(eos, Phase::Two).temperature;
    let (u_i, p_i, _) = closure.interfacial(u);
    let (p1, p2) = (u.phase1.p, u.phase2.p);
    let (u1, u2) = (u.phase1.u, u.phase2.u);
    [
        ((p1 - p_i) / t1 + (p_i - p2) / t2) * s.mec,
        ((u_i - u1) / t1 - (u_i - u2) / t2) * s.kin,
        (T::one() / t1 - T::one() / t2) * s.th,
    ]
}

pub fn entropy_production<T: Real>(
    u: &MixturePrimitive<T>,
    eos: &EosPair<T>,
    params: &RelaxationParams<T>,
    closure: Closure,
) -> T {
    entropy_production_terms(u, eos, params, closure)
        .into_iter()
        .fold(T::zero(), |a, b| a + b)
}

fn internal_energies<T: Real>(q: &ConservedState<T>) -> (T, T) {
    (
        q.eps1 - T::half() * q.q1 * q.q1 / q.m1,
        q.eps2 - T::half() * q.q2 * q.q2 / q.m2,
    )
}

/// `p` from volume fraction, partial mass and internal energy per volume.
#[inline]
fn pressure_of<T: Real>(eos: &EosParams<T>, alpha: T, m: T, e_int: T) -> T {
    (eos.gamma - T::one()) * (e_int - m * eos.q) / alpha - eos.gamma * eos.p_inf
}

#[inline]
fn temperature_of<T: Real>(eos: &EosParams<T>, alpha: T, m: T, e_int: T) -> T {
    (e_int - m * eos.q - alpha * eos.p_inf) / (m * eos.cv)
}

/// Fraction of the dissipated kinetic energy deposited in phase 1, i.e.
/// `(u₁ - u_I)/(u₁ - u₂)`, which is constant along the velocity relaxation
/// path.
fn kinetic_share<T: Real>(closure: Closure, y2: T) -> T {
    match closure {
        Closure::NewModel | Closure::BnSaurel => y2,
        Closure::BnOriginal => T::zero(),
    }
}

/// Velocity relaxation over `kappa = dt/ε`; `None` is the instantaneous limit.
fn relax_velocity<T: Real>(q: &ConservedState<T>, closure: Closure, kappa: Option<T>) -> ConservedState<T> {
    let (m1, m2) = (q.m1, q.m2);
    let mtot = m1 + m2;
    let mom = q.q1 + q.q2;
    let etot = q.eps1 + q.eps2;
    let u = mom / mtot;
    let y2 = m2 / mtot;
    let w0 = q.q1 / m1 - q.q2 / m2;
    let w = match kappa {
        None => T::zero(),
        Some(k) => w0 / (T::one() + k * (T::one() / m1 + T::one() / m2)),
    };
    let (e1, _) = internal_energies(q);
    let dissipated = T::half() * m1 * y2 * (w0 * w0 - w * w);
    let e1 = e1 + kinetic_share(closure, y2) * dissipated;
    let u1 = u + y2 * w;
    let q1 = m1 * u1;
    let eps1 = e1 + T::half() * m1 * u1 * u1;
    ConservedState {
        q1,
        q2: mom - q1,
        eps1,
        eps2: etot - eps1,
        ..*q
    }
}

/// Projects onto `u₁ = u₂ = u`. Momentum and energy are conserved and the
/// kinetic-energy deficit goes to the phases in the proportions fixed by the
/// interfacial velocity.
pub fn relax_velocity_instant<T: Real>(q: &ConservedState<T>, closure: Closure) -> ConservedState<T> {
    relax_velocity(q, closure, None)
}

pub fn relax_velocity_finite<T: Real>(
    q: &ConservedState<T>,
    closure: Closure,
    eps: T,
    dt: T,
) -> ConservedState<T> {
    relax_velocity(q, closure, Some(dt / eps))
}

/// Backward-Euler thermal exchange over `dt/ε`; temperatures are affine in
/// the internal energies at fixed densities, so the update is closed form.
pub fn relax_thermal_finite<T: Real>(
    q: &ConservedState<T>,
    eos: &EosPair<T>,
    eps: T,
    dt: T,
) -> ConservedState<T> {
    let kappa = dt / eps;
    let (a1, a2) = (q.alpha1, T::one() - q.alpha1);
    let (e1, e2) = internal_energies(q);
    let t1 = temperature_of(&eos.phase1, a1, q.m1, e1);
    let t2 = temperature_of(&eos.phase2, a2, q.m2, e2);
    let stiff = T::one() / (q.m1 * eos.phase1.cv) + T::one() / (q.m2 * eos.phase2.cv);
    let de = kappa * (t2 - t1) / (T::one() + kappa * stiff);
    let etot = q.eps1 + q.eps2;
    let eps1 = q.eps1 + de;
    ConservedState {
        eps1,
        eps2: etot - eps1,
        ..*q
    }
}

/// Frozen data of the pressure relaxation path.
struct PressureCell<'a, T> {
    eos: &'a EosPair<T>,
    closure: Closure,
    m1: T,
    m2: T,
    y1: T,
    y2: T,
    e_int: T,
}

impl<T: Real> PressureCell<'_, T> {
    fn pressures(&self, alpha: T, e1: T) -> (T, T) {
        (
            pressure_of(&self.eos.phase1, alpha, self.m1, e1),
            pressure_of(&self.eos.phase2, T::one() - alpha, self.m2, self.e_int - e1),
        )
    }

    fn admissible(&self, alpha: T, e1: T) -> bool {
        let (p1, p2) = self.pressures(alpha, e1);
        let lo = T::lit(ALPHA_FLOOR);
        alpha >= lo
            && alpha <= T::one() - lo
            && p1 + self.eos.phase1.p_inf > T::zero()
            && p2 + self.eos.phase2.p_inf > T::zero()
            && p1.is_finite()
            && p2.is_finite()
    }

    fn p_i(&self, alpha: T, e1: T) -> T {
        let (p1, p2) = self.pressures(alpha, e1);
        let (w1, w2) = self.closure.pressure_weights(alpha, self.y1, self.y2);
        w1 * p1 + w2 * p2
    }

    /// `dE₁/dα = -p_I` advanced by one RK4 step of size `h`.
    fn rk4(&self, alpha: T, e1: T, h: T) -> T {
        let f = |a: T, e: T| -self.p_i(a, e);
        let h2 = T::half() * h;
        let k1 = f(alpha, e1);
        let k2 = f(alpha + h2, e1 + h2 * k1);
        let k3 = f(alpha + h2, e1 + h2 * k2);
        let k4 = f(alpha + h, e1 + h * k3);
        e1 + h / T::lit(6.0) * (k1 + T::two() * (k2 + k3) + k4)
    }

    /// Linearized distance in `α` to pressure equilibrium.
    fn alpha_estimate(&self, alpha: T, e1: T) -> T {
        let (p1, p2) = self.pressures(alpha, e1);
        let k1 = self.eos.phase1.gamma * (p1 + self.eos.phase1.p_inf) / alpha;
        let k2 = self.eos.phase2.gamma * (p2 + self.eos.phase2.p_inf) / (T::one() - alpha);
        (p1 - p2).abs() / (k1 + k2)
    }

    fn pressure_scale(&self, alpha: T, e1: T) -> T {
        let (p1, p2) = self.pressures(alpha, e1);
        (p1.abs() + self.eos.phase1.p_inf)
            .max(p2.abs() + self.eos.phase2.p_inf)
            .max(T::min_positive_value())
    }
}

fn sign_of<T: Real>(x: T) -> i8 {
    if x > T::zero() {
        1
    } else if x < T::zero() {
        -1
    } else {
        0
    }
}

const PRESSURE_MAX_STEPS: usize = 100_000;
const ROOT_MAX_ITER: usize = 200;

/// Bracketed root of `g` on `[a, b]` with `g(a)` of sign `sa` (Illinois
/// regula falsi with bisection fallback). Non-finite evaluations are treated
/// as lying past the root.
fn bracketed_root<T: Real>(
    g: impl Fn(T) -> Option<T>,
    mut a: T,
    mut ga: T,
    mut b: T,
    mut gb: T,
    tol: T,
    what: &'static str,
) -> Result<T> {
    let sa = sign_of(ga);
    let mut side = 0i8;
    for _ in 0..ROOT_MAX_ITER {
        let mut x = (a * gb - b * ga) / (gb - ga);
        let width = (b - a).abs();
        if !x.is_finite() || (x - a).abs() < T::lit(1e-3) * width || (b - x).abs() < T::lit(1e-3) * width {
            x = T::half() * (a + b);
        }
        match g(x) {
            Some(gx) if gx.abs() <= tol => return Ok(x),
            Some(gx) if sign_of(gx) == sa => {
                a = x;
                ga = gx;
                if side == -1 {
                    gb = gb * T::half();
                }
                side = -1;
            }
            Some(gx) => {
                b = x;
                gb = gx;
                if side == 1 {
                    ga = ga * T::half();
                }
                side = 1;
            }
            None => {
                b = x;
                side = 0;
                gb = -ga;
            }
        }
        if (b - a).abs() <= T::epsilon() * T::lit(4.0) * (a.abs() + b.abs()) {
            return Ok(if ga.abs() < gb.abs() { a } else { b });
        }
    }
    Err(Error::NonConvergence {
        what,
        iterations: ROOT_MAX_ITER,
        residual: ga.abs().min(gb.abs()).to_f64_lossy(),
    })
}

fn pressure_cell<'a, T: Real>(
    q: &ConservedState<T>,
    eos: &'a EosPair<T>,
    closure: Closure,
) -> (PressureCell<'a, T>, T) {
    let (e1, e2) = internal_energies(q);
    let mtot = q.m1 + q.m2;
    (
        PressureCell {
            eos,
            closure,
            m1: q.m1,
            m2: q.m2,
            y1: q.m1 / mtot,
            y2: q.m2 / mtot,
            e_int: e1 + e2,
        },
        e1,
    )
}

fn rebuild<T: Real>(q: &ConservedState<T>, alpha: T, e1_old: T, e1: T) -> ConservedState<T> {
    let etot = q.eps1 + q.eps2;
    let eps1 = q.eps1 + (e1 - e1_old);
    ConservedState {
        alpha1: alpha,
        eps1,
        eps2: etot - eps1,
        ..*q
    }
}

/// Projects onto `p₁ = p₂` along the stationary path of the finite-rate ODE
/// with frozen velocities: `dE₁/dα₁ = -p_I`, `E₁ + E₂` fixed. The path does
/// not depend on `ε_p`, so this is exactly its `ε_p → 0` limit.
pub fn relax_pressure_instant<T: Real>(
    q: &ConservedState<T>,
    eos: &EosPair<T>,
    closure: Closure,
) -> Result<ConservedState<T>> {
    let (cell, e1_old) = pressure_cell(q, eos, closure);
    let mut alpha = q.alpha1;
    let mut e1 = e1_old;
    let (p1, p2) = cell.pressures(alpha, e1);
    let dir = sign_of(p1 - p2);
    if dir == 0 {
        return Ok(*q);
    }
    if !cell.admissible(alpha, e1) {
        return Err(Error::invalid("pressure relaxation from inadmissible state"));
    }
    let tol = T::lit(1e-12) * cell.pressure_scale(alpha, e1);
    if (p1 - p2).abs() <= tol {
        return Ok(*q);
    }
    let s = T::from_i8(dir).unwrap();
    let est0 = cell.alpha_estimate(alpha, e1);
    let dp_after = |a: T, e: T, h: T| -> Option<T> {
        let e_new = cell.rk4(a, e, h);
        if cell.admissible(a + h, e_new) {
            let (p1, p2) = cell.pressures(a + h, e_new);
            Some(p1 - p2)
        } else {
            None
        }
    };
    for _ in 0..PRESSURE_MAX_STEPS {
        let est = cell.alpha_estimate(alpha, e1);
        let h = s * (est / T::lit(64.0)).max(est0 / T::lit(256.0));
        let (p1, p2) = cell.pressures(alpha, e1);
        let g0 = p1 - p2;
        match dp_after(alpha, e1, h) {
            Some(g) if sign_of(g) == dir => {
                e1 = cell.rk4(alpha, e1, h);
                alpha = alpha + h;
                if g.abs() <= tol {
                    return Ok(rebuild(q, alpha, e1_old, e1));
                }
            }
            Some(g) => {
                let tau = bracketed_root(
                    |t| dp_after(alpha, e1, t),
                    T::zero(),
                    g0,
                    h,
                    g,
                    tol,
                    "pressure relaxation root",
                )?;
                let e_new = cell.rk4(alpha, e1, tau);
                return Ok(rebuild(q, alpha + tau, e1_old, e_new));
            }
            None => {
                // step leaves the admissible set: search the root inside it
                let tau = bracketed_root(
                    |t| dp_after(alpha, e1, t),
                    T::zero(),
                    g0,
                    h,
                    -g0,
                    tol,
                    "pressure relaxation root",
                )?;
                let e_new = cell.rk4(alpha, e1, tau);
                if !cell.admissible(alpha + tau, e_new) {
                    return Err(Error::NonConvergence {
                        what: "pressure relaxation path",
                        iterations: 0,
                        residual: g0.abs().to_f64_lossy(),
                    });
                }
                return Ok(rebuild(q, alpha + tau, e1_old, e_new));
            }
        }
    }
    let (p1, p2) = cell.pressures(alpha, e1);
    Err(Error::NonConvergence {
        what: "pressure relaxation path",
        iterations: PRESSURE_MAX_STEPS,
        residual: (p1 - p2).abs().to_f64_lossy(),
    })
}

/// Backward-Euler pressure relaxation: solves
/// `α' - α = κ(p₁' - p₂')`, `E₁' - E₁ = -p_I'(α' - α)` with `κ = dt/ε`.
/// For fixed `α'` the energies follow from one scalar linear equation, so
/// only `α'` is iterated.
pub fn relax_pressure_finite<T: Real>(
    q: &ConservedState<T>,
    eos: &EosPair<T>,
    closure: Closure,
    eps: T,
    dt: T,
) -> Result<ConservedState<T>> {
    let kappa = dt / eps;
    let (cell, e1_old) = pressure_cell(q, eos, closure);
    let alpha0 = q.alpha1;
    let (p1, p2) = cell.pressures(alpha0, e1_old);
    let dir = sign_of(p1 - p2);
    if dir == 0 {
        return Ok(*q);
    }
    let (g1, g2) = (eos.phase1.gamma - T::one(), eos.phase2.gamma - T::one());
    let pi1 = eos.phase1.gamma * eos.phase1.p_inf;
    let pi2 = eos.phase2.gamma * eos.phase2.p_inf;
    let e2_old = cell.e_int - e1_old;
    let energy_at = |a: T| -> Option<T> {
        let d = a - alpha0;
        let a1 = g1 / a;
        let a2 = g2 / (T::one() - a);
        let (w1, w2) = closure.pressure_weights(a, cell.y1, cell.y2);
        let b = w1 * (a1 * (e1_old - cell.m1 * eos.phase1.q) - pi1)
            + w2 * (a2 * (e2_old - cell.m2 * eos.phase2.q) - pi2);
        let x = b / (T::one() + d * (w1 * a1 - w2 * a2));
        let e1 = e1_old - d * x;
        (x.is_finite() && cell.admissible(a, e1)).then_some(e1)
    };
    let residual = |a: T| -> Option<T> {
        let e1 = energy_at(a)?;
        let (p1, p2) = cell.pressures(a, e1);
        Some((a - alpha0) - kappa * (p1 - p2))
    };
    let g0 = -kappa * (p1 - p2);
    let s = T::from_i8(dir).unwrap();
    let lo = T::lit(ALPHA_FLOOR);
    let limit = if dir > 0 { T::one() - lo } else { lo };
    // expand until the residual changes sign
    let mut step = cell.alpha_estimate(alpha0, e1_old).max(T::epsilon());
    let mut a_prev = alpha0;
    let mut g_prev = g0;
    let tol = T::lit(1e-14);
    for _ in 0..200 {
        let mut a = alpha0 + s * step;
        if (a - limit) * s > T::zero() {
            a = limit;
        }
        match residual(a) {
            Some(g) if sign_of(g) == sign_of(g0) && a != limit => {
                a_prev = a;
                g_prev = g;
                step = step * T::two();
            }
            Some(g) if sign_of(g) == sign_of(g0) => {
                return Err(Error::NonConvergence {
                    what: "finite-rate pressure relaxation bracket",
                    iterations: 0,
                    residual: g.abs().to_f64_lossy(),
                })
            }
            Some(g) => {
                let root = bracketed_root(residual, a_prev, g_prev, a, g, tol, "finite-rate pressure relaxation")?;
                let e1 = energy_at(root).ok_or_else(|| Error::invalid("pressure relaxation left the admissible set"))?;
                return Ok(rebuild(q, root, e1_old, e1));
            }
            None => {
                let root = bracketed_root(residual, a_prev, g_prev, a, -g_prev, tol, "finite-rate pressure relaxation")?;
                let e1 = energy_at(root).ok_or_else(|| Error::invalid("pressure relaxation left the admissible set"))?;
                return Ok(rebuild(q, root, e1_old, e1));
            }
        }
    }
    Err(Error::NonConvergence {
        what: "finite-rate pressure relaxation bracket",
        iterations: 200,
        residual: g_prev.abs().to_f64_lossy(),
    })
}

/// Applies every active channel to one cell in the configured order.
pub fn relax_cell<T: Real>(
    q: &ConservedState<T>,
    eos: &EosPair<T>,
    closure: Closure,
    params: &RelaxationParams<T>,
    dt: T,
) -> Result<ConservedState<T>> {
    let mut q = *q;
    for m in params.order {
        q = match (m, params.channel(m)) {
            (_, Channel::Off) => q,
            (Mechanism::Velocity, Channel::FiniteRate(eps)) => relax_velocity_finite(&q, closure, eps, dt),
            (Mechanism::Velocity, Channel::Instantaneous) => relax_velocity_instant(&q, closure),
            (Mechanism::Pressure, Channel::FiniteRate(eps)) => relax_pressure_finite(&q, eos, closure, eps, dt)?,
            (Mechanism::Pressure, Channel::Instantaneous) => relax_pressure_instant(&q, eos, closure)?,
            (Mechanism::Thermal, Channel::FiniteRate(eps)) => relax_thermal_finite(&q, eos, eps, dt),
            (Mechanism::Thermal, Channel::Instantaneous) => {
                return Err(Error::domain("thermal relaxation supports finite rates only"))
            }
        };
    }
    Ok(q)
}

const PARALLEL_MIN_CELLS: usize = 2048;

/// Pointwise relaxation of every cell over `dt`.
pub fn split_step<T: Real>(
    cells: &mut [ConservedState<T>],
    eos: &EosPair<T>,
    closure: Closure,
    params: &RelaxationParams<T>,
    dt: T,
) -> Result<()> {
    if params.is_off() {
        return Ok(());
    }
    let relax = |(i, q): (usize, &mut ConservedState<T>)| -> Result<()> {
        *q = relax_cell(q, eos, closure, params, dt).map_err(|e| e.in_cell(i))?;
        Ok(())
    };
    if cells.len() >= PARALLEL_MIN_CELLS {
        cells.par_iter_mut().enumerate().try_for_each(relax)
    } else {
        cells.iter_mut().enumerate().try_for_each(relax)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eos::EosParams;
    use crate::state::{cons_to_prim, prim_to_cons, total_entropy_density};
    use approx::assert_relative_eq;

    fn air() -> EosPair<f64> {
        let g = EosParams::ideal(1.4).unwrap();
        EosPair::new(g, g)
    }

    #[test]
    fn equilibrium_has_zero_sources() {
        let eos = air();
        let u = MixturePrimitive::from_values(0.3, 1.0, 0.2, 1.0, 1.0, 0.2, 1.0);
        let params = RelaxationParams::finite(1.0, 1.0, 1.0).unwrap();
        for c in Closure::ALL {
            assert!(source_rhs(&u, &eos, &params, c).iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn mechanical_source_substitution() {
        let eos = air();
        let u = MixturePrimitive::from_values(0.5, 1.0, 0.0, 2.0, 1.0, 0.0, 1.0);
        let params = RelaxationParams::finite(1.0, f64::INFINITY, f64::INFINITY).unwrap();
        let rhs = source_rhs(&u, &eos, &params, Closure::NewModel);
        let p_i = Closure::NewModel.interfacial_pressure(&u);
        assert_eq!(rhs[0], 1.0);
        assert_relative_eq!(rhs[5], -p_i);
        assert_eq!(rhs[5] + rhs[6], 0.0);
        assert_eq!(rhs[3] + rhs[4], 0.0);
    }

    #[test]
    fn instantaneous_thermal_is_rejected() {
        let r = RelaxationParams::<f64>::new(Channel::Off, Channel::Off, Channel::Instantaneous);
        assert!(r.is_err());
        assert!(Channel::from_eps(0.0).is_err());
        assert_eq!(Channel::from_eps(f64::INFINITY).unwrap(), Channel::Off);
    }

    #[test]
    fn velocity_instant_symmetric_case() {
        let eos = air();
        let u = MixturePrimitive::from_values(0.5, 1.0, 1.0, 1.0, 1.0, -1.0, 1.0);
        let q = prim_to_cons(&u, &eos).unwrap();
        let r = relax_velocity_instant(&q, Closure::NewModel);
        let v = cons_to_prim(&r, &eos).unwrap();
        assert_eq!(v.phase1.u, 0.0);
        assert_eq!(v.phase2.u, 0.0);
        assert_relative_eq!(r.total_energy(), q.total_energy(), max_relative = 1e-15);
        // each phase gains ½ m_k (u_k - u)² = 0.25
        assert_relative_eq!(r.eps1 - (q.eps1 - 0.25), 0.25, epsilon = 1e-14);
    }

    #[test]
    fn pressure_instant_equalizes_and_conserves() {
        let eos = air();
        let u = MixturePrimitive::from_values(0.5, 1.0, 0.0, 2.0, 1.0, 0.0, 1.0);
        let q = prim_to_cons(&u, &eos).unwrap();
        for c in Closure::ALL {
            let r = relax_pressure_instant(&q, &eos, c).unwrap();
            let v = cons_to_prim(&r, &eos).unwrap();
            assert!((v.phase1.p - v.phase2.p).abs() <= 1e-11);
            assert!(v.alpha1 > 0.5);
            assert_eq!(r.m1, q.m1);
            assert_relative_eq!(r.total_energy(), q.total_energy(), max_relative = 1e-15);
            assert!(total_entropy_density(&v, &eos) >= total_entropy_density(&u, &eos) - 1e-12);
            let again = relax_pressure_instant(&r, &eos, c).unwrap();
            assert_relative_eq!(again.alpha1, r.alpha1, max_relative = 1e-10);
        }
    }

    #[test]
    fn finite_pressure_approaches_instant() {
        let eos = air();
        let u = MixturePrimitive::from_values(0.4, 1.0, 0.0, 3.0, 2.0, 0.0, 1.0);
        let q = prim_to_cons(&u, &eos).unwrap();
        let inst = relax_pressure_instant(&q, &eos, Closure::NewModel).unwrap();
        let march = |dt: f64, n: usize| {
            let mut fin = q;
            for _ in 0..n {
                fin = relax_pressure_finite(&fin, &eos, Closure::NewModel, 1.0, dt).unwrap();
            }
            (fin.alpha1 - inst.alpha1).abs()
        };
        // backward Euler follows the relaxation path to first order in dt/ε
        let coarse = march(1e-3, 4000);
        let fine = march(5e-4, 8000);
        assert!(coarse < 5e-4, "{coarse}");
        assert!((coarse / fine - 2.0).abs() < 0.3, "{coarse} {fine}");
    }

    #[test]
    fn thermal_finite_reduces_temperature_gap() {
        let eos = air();
        let u = MixturePrimitive::from_values(0.5, 1.0, 0.0, 2.0, 1.0, 0.0, 1.0);
        let q = prim_to_cons(&u, &eos).unwrap();
        let r = relax_thermal_finite(&q, &eos, 1.0, 1e6);
        let v = cons_to_prim(&r, &eos).unwrap();
        let t1 = v.thermo(&eos, Phase::One).temperature;
        let t2 = v.thermo(&eos, Phase::Two).temperature;
        assert!((t1 - t2).abs() < 1e-5);
        assert_eq!(r.total_energy(), q.total_energy());
    }
}
