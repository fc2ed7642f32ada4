//! Primitive, conserved and mixture state representations together with the
//! interfacial closure algebra.

use std::fmt;
use std::str::FromStr;

use crate::eos::EosParams;
use crate::error::{Error, Result};
use crate::num::Real;

/// Default volume-fraction floor: states live in `[ε_α, 1 - ε_α]`.
pub const ALPHA_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    One,
    Two,
}

impl Phase {
    pub const BOTH: [Phase; 2] = [Phase::One, Phase::Two];

    pub fn index(self) -> usize {
        match self {
            Phase::One => 0,
            Phase::Two => 1,
        }
    }

    pub fn other(self) -> Phase {
        match self {
            Phase::One => Phase::Two,
            Phase::Two => Phase::One,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index() + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EosPair<T> {
    pub phase1: EosParams<T>,
    pub phase2: EosParams<T>,
}

impl<T: Real> EosPair<T> {
    pub fn new(phase1: EosParams<T>, phase2: EosParams<T>) -> Self {
        Self { phase1, phase2 }
    }

    pub fn get(&self, k: Phase) -> &EosParams<T> {
        match k {
            Phase::One => &self.phase1,
            Phase::Two => &self.phase2,
        }
    }
}

/// Single-phase primitive triple.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseState<T> {
    pub rho: T,
    pub u: T,
    pub p: T,
}

impl<T> PhaseState<T> {
    pub fn new(rho: T, u: T, p: T) -> Self {
        Self { rho, u, p }
    }
}

/// Full two-phase primitive state `(α₁, ρ₁, u₁, p₁, ρ₂, u₂, p₂)`; `α₂ = 1 - α₁`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MixturePrimitive<T> {
    pub alpha1: T,
    pub phase1: PhaseState<T>,
    pub phase2: PhaseState<T>,
}

/// Thermodynamic quantities of one phase derived through its EOS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseThermo<T> {
    pub e: T,
    pub h: T,
    pub s: T,
    pub temperature: T,
    pub c: T,
    /// `E = e + u²/2`
    pub total_energy: T,
    /// `H = h + u²/2`
    pub total_enthalpy: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureQuantities<T> {
    pub rho: T,
    pub y1: T,
    pub y2: T,
    /// Mass-weighted velocity `Y₁u₁ + Y₂u₂`.
    pub u: T,
    /// Relative velocity `u₁ - u₂`.
    pub w: T,
}

impl<T: Real> MixturePrimitive<T> {
    pub fn new(alpha1: T, phase1: PhaseState<T>, phase2: PhaseState<T>) -> Self {
        Self {
            alpha1,
            phase1,
            phase2,
        }
    }

    /// Positional constructor in the order `(α₁, ρ₁, u₁, p₁, ρ₂, u₂, p₂)`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_values(alpha1: T, rho1: T, u1: T, p1: T, rho2: T, u2: T, p2: T) -> Self {
        Self::new(
            alpha1,
            PhaseState::new(rho1, u1, p1),
            PhaseState::new(rho2, u2, p2),
        )
    }

    pub fn alpha2(&self) -> T {
        T::one() - self.alpha1
    }

    pub fn alpha(&self, k: Phase) -> T {
        match k {
            Phase::One => self.alpha1,
            Phase::Two => self.alpha2(),
        }
    }

    pub fn phase(&self, k: Phase) -> &PhaseState<T> {
        match k {
            Phase::One => &self.phase1,
            Phase::Two => &self.phase2,
        }
    }

    pub fn phase_mut(&mut self, k: Phase) -> &mut PhaseState<T> {
        match k {
            Phase::One => &mut self.phase1,
            Phase::Two => &mut self.phase2,
        }
    }

    /// Checks `0 < α₁ < 1`, positive densities and `p_k + p∞,k > 0`.
    pub fn validate(&self, eos: &EosPair<T>) -> Result<()> {
        if !(self.alpha1 > T::zero() && self.alpha1 < T::one()) {
            return Err(Error::domain(format!(
                "volume fraction {} outside (0, 1)",
                self.alpha1
            )));
        }
        for k in Phase::BOTH {
            let ph = self.phase(k);
            if !ph.u.is_finite() {
                return Err(Error::domain(format!("non-finite velocity in phase {k}")));
            }
            eos.get(k)
                .check(ph.rho, ph.p)
                .map_err(|e| Error::domain(format!("phase {k}: {e}")))?;
        }
        Ok(())
    }

    /// Clips `α₁` into `[floor, 1 - floor]`; reports whether clipping happened.
    pub fn with_alpha_floor(mut self, floor: T) -> (Self, bool) {
        let lo = floor;
        let hi = T::one() - floor;
        let clipped = self.alpha1 < lo || self.alpha1 > hi;
        self.alpha1 = self.alpha1.max(lo).min(hi);
        (self, clipped)
    }

    pub fn mixture(&self) -> MixtureQuantities<T> {
        let m1 = self.alpha1 * self.phase1.rho;
        let m2 = self.alpha2() * self.phase2.rho;
        let rho = m1 + m2;
        let y1 = m1 / rho;
        let y2 = m2 / rho;
        MixtureQuantities {
            rho,
            y1,
            y2,
            u: y1 * self.phase1.u + y2 * self.phase2.u,
            w: self.phase1.u - self.phase2.u,
        }
    }

    pub fn partial_mass(&self, k: Phase) -> T {
        self.alpha(k) * self.phase(k).rho
    }

    /// Derived thermodynamics of phase `k`. Assumes an admissible state.
    pub fn thermo(&self, eos: &EosPair<T>, k: Phase) -> PhaseThermo<T> {
        let ph = self.phase(k);
        let law = eos.get(k);
        let e = law.internal_energy_unchecked(ph.rho, ph.p);
        let h = e + ph.p / ph.rho;
        let kinetic = T::half() * ph.u * ph.u;
        PhaseThermo {
            e,
            h,
            s: law.entropy_unchecked(ph.rho, ph.p),
            temperature: law.temperature_unchecked(ph.rho, ph.p),
            c: law.sound_speed_unchecked(ph.rho, ph.p),
            total_energy: e + kinetic,
            total_enthalpy: h + kinetic,
        }
    }

    /// Adds `v` to both phasic velocities.
    pub fn galilean_shift(mut self, v: T) -> Self {
        self.phase1.u = self.phase1.u + v;
        self.phase2.u = self.phase2.u + v;
        self
    }
}

/// Finite-volume state `(α₁, α₁ρ₁, α₂ρ₂, α₁ρ₁u₁, α₂ρ₂u₂, α₁ρ₁E₁, α₂ρ₂E₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConservedState<T> {
    pub alpha1: T,
    pub m1: T,
    pub m2: T,
    pub q1: T,
    pub q2: T,
    pub eps1: T,
    pub eps2: T,
}

impl<T: Real> ConservedState<T> {
    pub fn to_array(&self) -> [T; 7] {
        [
            self.alpha1,
            self.m1,
            self.m2,
            self.q1,
            self.q2,
            self.eps1,
            self.eps2,
        ]
    }

    pub fn from_array(a: [T; 7]) -> Self {
        Self {
            alpha1: a[0],
            m1: a[1],
            m2: a[2],
            q1: a[3],
            q2: a[4],
            eps1: a[5],
            eps2: a[6],
        }
    }

    pub fn total_momentum(&self) -> T {
        self.q1 + self.q2
    }

    pub fn total_energy(&self) -> T {
        self.eps1 + self.eps2
    }
}

pub fn prim_to_cons<T: Real>(u: &MixturePrimitive<T>, eos: &EosPair<T>) -> Result<ConservedState<T>> {
    u.validate(eos)?;
    Ok(prim_to_cons_unchecked(u, eos))
}

pub(crate) fn prim_to_cons_unchecked<T: Real>(
    u: &MixturePrimitive<T>,
    eos: &EosPair<T>,
) -> ConservedState<T> {
    let m1 = u.partial_mass(Phase::One);
    let m2 = u.partial_mass(Phase::Two);
    let e1 = eos.phase1.internal_energy_unchecked(u.phase1.rho, u.phase1.p)
        + T::half() * u.phase1.u * u.phase1.u;
    let e2 = eos.phase2.internal_energy_unchecked(u.phase2.rho, u.phase2.p)
        + T::half() * u.phase2.u * u.phase2.u;
    ConservedState {
        alpha1: u.alpha1,
        m1,
        m2,
        q1: m1 * u.phase1.u,
        q2: m2 * u.phase2.u,
        eps1: m1 * e1,
        eps2: m2 * e2,
    }
}

pub fn cons_to_prim<T: Real>(q: &ConservedState<T>, eos: &EosPair<T>) -> Result<MixturePrimitive<T>> {
    if !(q.alpha1 > T::zero() && q.alpha1 < T::one()) {
        return Err(Error::invalid(format!(
            "volume fraction {} outside (0, 1)",
            q.alpha1
        )));
    }
    if !(q.m1 > T::zero()) || !(q.m2 > T::zero()) {
        return Err(Error::invalid(format!(
            "non-positive partial mass (m1 = {}, m2 = {})",
            q.m1, q.m2
        )));
    }
    let alpha2 = T::one() - q.alpha1;
    let recover = |k: Phase, alpha: T, m: T, mom: T, energy: T| -> Result<PhaseState<T>> {
        let rho = m / alpha;
        let vel = mom / m;
        let e = energy / m - T::half() * vel * vel;
        let p = eos
            .get(k)
            .pressure(rho, e)
            .map_err(|err| Error::invalid(format!("phase {k}: {err}")))?;
        if !vel.is_finite() {
            return Err(Error::invalid(format!("phase {k}: non-finite velocity")));
        }
        Ok(PhaseState::new(rho, vel, p))
    };
    Ok(MixturePrimitive::new(
        q.alpha1,
        recover(Phase::One, q.alpha1, q.m1, q.q1, q.eps1)?,
        recover(Phase::Two, alpha2, q.m2, q.q2, q.eps2)?,
    ))
}

/// Interfacial closure rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Closure {
    /// `u_I = u`, `p_I = Y₂p₁ + Y₁p₂`, `(pu)_I = Y₁p₂u₁ + Y₂p₁u₂`.
    #[default]
    NewModel,
    /// `u_I = u₁`, `p_I = p₂`, `(pu)_I = p₂u₁`.
    BnOriginal,
    /// `u_I = u`, `p_I = α₁p₁ + α₂p₂`, `(pu)_I = p_I u_I`.
    BnSaurel,
}

impl Closure {
    pub const ALL: [Closure; 3] = [Closure::NewModel, Closure::BnOriginal, Closure::BnSaurel];

    pub fn name(self) -> &'static str {
        match self {
            Closure::NewModel => "new-model",
            Closure::BnOriginal => "bn-original",
            Closure::BnSaurel => "bn-saurel",
        }
    }

    pub fn interfacial_velocity<T: Real>(self, u: &MixturePrimitive<T>) -> T {
        match self {
            Closure::NewModel | Closure::BnSaurel => u.mixture().u,
            Closure::BnOriginal => u.phase1.u,
        }
    }

    /// Weights `(w₁, w₂)` with `p_I = w₁p₁ + w₂p₂`.
    pub fn pressure_weights<T: Real>(self, alpha1: T, y1: T, y2: T) -> (T, T) {
        match self {
            Closure::NewModel => (y2, y1),
            Closure::BnOriginal => (T::zero(), T::one()),
            Closure::BnSaurel => (alpha1, T::one() - alpha1),
        }
    }

    pub fn interfacial_pressure<T: Real>(self, u: &MixturePrimitive<T>) -> T {
        let mix = u.mixture();
        let (w1, w2) = self.pressure_weights(u.alpha1, mix.y1, mix.y2);
        w1 * u.phase1.p + w2 * u.phase2.p
    }

    pub fn interfacial_work<T: Real>(self, u: &MixturePrimitive<T>) -> T {
        let (p1, p2) = (u.phase1.p, u.phase2.p);
        let (u1, u2) = (u.phase1.u, u.phase2.u);
        match self {
            Closure::NewModel => {
                let mix = u.mixture();
                mix.y1 * p2 * u1 + mix.y2 * p1 * u2
            }
            Closure::BnOriginal => p2 * u1,
            Closure::BnSaurel => self.interfacial_pressure(u) * self.interfacial_velocity(u),
        }
    }

    /// `(u_I, p_I, (pu)_I)` in one call.
    pub fn interfacial<T: Real>(self, u: &MixturePrimitive<T>) -> (T, T, T) {
        (
            self.interfacial_velocity(u),
            self.interfacial_pressure(u),
            self.interfacial_work(u),
        )
    }
}

impl fmt::Display for Closure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Closure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "new-model" | "new_model" => Ok(Closure::NewModel),
            "bn-original" | "bn_original" => Ok(Closure::BnOriginal),
            "bn-saurel" | "bn_saurel" => Ok(Closure::BnSaurel),
            other => Err(format!(
                "unknown closure '{other}' (expected new-model, bn-original or bn-saurel)"
            )),
        }
    }
}

/// `α₁ρ₁s₁ + α₂ρ₂s₂`.
pub fn total_entropy_density<T: Real>(u: &MixturePrimitive<T>, eos: &EosPair<T>) -> T {
    Phase::BOTH
        .iter()
        .map(|&k| u.partial_mass(k) * u.thermo(eos, k).s)
        .fold(T::zero(), |a, b| a + b)
}

/// `α₁ρ₁s₁u₁ + α₂ρ₂s₂u₂`.
pub fn entropy_flux<T: Real>(u: &MixturePrimitive<T>, eos: &EosPair<T>) -> T {
    Phase::BOTH
        .iter()
        .map(|&k| u.partial_mass(k) * u.thermo(eos, k).s * u.phase(k).u)
        .fold(T::zero(), |a, b| a + b)
}

/// Entropy flux in mixture/relative-velocity form `ρsu + ρY₁Y₂(s₁ - s₂)W`,
/// with `ρs = α₁ρ₁s₁ + α₂ρ₂s₂`.
pub fn entropy_flux_split<T: Real>(u: &MixturePrimitive<T>, eos: &EosPair<T>) -> T {
    let mix = u.mixture();
    let s1 = u.thermo(eos, Phase::One).s;
    let s2 = u.thermo(eos, Phase::Two).s;
    let rho_s = mix.rho * (mix.y1 * s1 + mix.y2 * s2);
    rho_s * mix.u + mix.rho * mix.y1 * mix.y2 * (s1 - s2) * mix.w
}
