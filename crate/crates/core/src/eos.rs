//! Stiffened-gas equation of state.
//!
//! `p = (γ - 1) ρ (e - q) - γ p∞`. The ideal gas is the special case
//! `p∞ = 0, q = 0`. Every thermodynamic function the model needs has a closed
//! form; the isentropic Riemann function additionally has a quadrature route
//! that only uses `ρ(s, p)` and `c(s, p)`.

use crate::error::{Error, Result};
use crate::num::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EosParams<T> {
    pub gamma: T,
    pub p_inf: T,
    pub cv: T,
    pub q: T,
}

impl<T: Real> EosParams<T> {
    pub fn new(gamma: T, p_inf: T, cv: T, q: T) -> Result<Self> {
        if !(gamma > T::one()) || !gamma.is_finite() {
            return Err(Error::domain(format!("gamma must exceed 1 (got {gamma})")));
        }
        if !(p_inf >= T::zero()) || !p_inf.is_finite() {
            return Err(Error::domain(format!("p_inf must be non-negative (got {p_inf})")));
        }
        if !(cv > T::zero()) || !cv.is_finite() {
            return Err(Error::domain(format!("cv must be positive (got {cv})")));
        }
        if !q.is_finite() {
            return Err(Error::domain("q must be finite"));
        }
        Ok(Self { gamma, p_inf, cv, q })
    }

    /// Ideal gas with unit heat capacity.
    pub fn ideal(gamma: T) -> Result<Self> {
        Self::new(gamma, T::zero(), T::one(), T::zero())
    }

    /// `ρ > 0` and `p + p∞ > 0`.
    pub fn check(&self, rho: T, p: T) -> Result<()> {
        if !(rho > T::zero()) || !rho.is_finite() {
            return Err(Error::domain(format!("non-positive density {rho}")));
        }
        if !(p + self.p_inf > T::zero()) || !p.is_finite() {
            return Err(Error::domain(format!(
                "p + p_inf must be positive (p = {p}, p_inf = {})",
                self.p_inf
            )));
        }
        Ok(())
    }

    pub fn is_admissible(&self, rho: T, p: T) -> bool {
        self.check(rho, p).is_ok()
    }

    /// Unchecked closed forms. Callers guarantee admissibility.
    #[inline]
    pub fn internal_energy_unchecked(&self, rho: T, p: T) -> T {
        (p + self.gamma * self.p_inf) / (rho * (self.gamma - T::one())) + self.q
    }

    #[inline]
    pub fn sound_speed_unchecked(&self, rho: T, p: T) -> T {
        (self.gamma * (p + self.p_inf) / rho).sqrt()
    }

    #[inline]
    pub fn entropy_unchecked(&self, rho: T, p: T) -> T {
        self.cv * ((p + self.p_inf).ln() - self.gamma * rho.ln())
    }

    #[inline]
    pub fn temperature_unchecked(&self, rho: T, p: T) -> T {
        (p + self.p_inf) / ((self.gamma - T::one()) * self.cv * rho)
    }

    pub fn internal_energy(&self, rho: T, p: T) -> Result<T> {
        self.check(rho, p)?;
        Ok(self.internal_energy_unchecked(rho, p))
    }

    /// Inverse of [`internal_energy`](Self::internal_energy).
    pub fn pressure(&self, rho: T, e: T) -> Result<T> {
        if !(rho > T::zero()) || !rho.is_finite() {
            return Err(Error::domain(format!("non-positive density {rho}")));
        }
        let p = self.pressure_unchecked(rho, e);
        if !(p + self.p_inf > T::zero()) || !p.is_finite() {
            return Err(Error::invalid(format!(
                "recovered pressure {p} violates p + p_inf > 0 (rho = {rho}, e = {e})"
            )));
        }
        Ok(p)
    }

    #[inline]
    pub fn pressure_unchecked(&self, rho: T, e: T) -> T {
        (self.gamma - T::one()) * rho * (e - self.q) - self.gamma * self.p_inf
    }

    /// `∂p/∂e` at fixed density.
    #[inline]
    pub fn pressure_energy_derivative(&self, rho: T) -> T {
        (self.gamma - T::one()) * rho
    }

    /// `∂T/∂e` at fixed density.
    #[inline]
    pub fn temperature_energy_derivative(&self) -> T {
        T::one() / self.cv
    }

    pub fn sound_speed(&self, rho: T, p: T) -> Result<T> {
        self.check(rho, p)?;
        Ok(self.sound_speed_unchecked(rho, p))
    }

    /// Specific entropy, integration constant fixed to zero.
    pub fn entropy(&self, rho: T, p: T) -> Result<T> {
        self.check(rho, p)?;
        Ok(self.entropy_unchecked(rho, p))
    }

    pub fn temperature(&self, rho: T, p: T) -> Result<T> {
        self.check(rho, p)?;
        Ok(self.temperature_unchecked(rho, p))
    }

    pub fn enthalpy(&self, rho: T, p: T) -> Result<T> {
        self.check(rho, p)?;
        Ok(self.internal_energy_unchecked(rho, p) + p / rho)
    }

    /// Fundamental derivative of gas dynamics; `(γ + 1) / 2` for this family.
    pub fn fundamental_derivative(&self, rho: T, p: T) -> Result<T> {
        self.check(rho, p)?;
        Ok((self.gamma + T::one()) * T::half())
    }

    /// Density on the isentrope `s` at pressure `p`.
    pub fn density_from_entropy(&self, s: T, p: T) -> Result<T> {
        let x = p + self.p_inf;
        if !(x > T::zero()) {
            return Err(Error::domain(format!("p + p_inf must be positive (p = {p})")));
        }
        let rho = self.isentrope_density(s, x);
        if !(rho > T::zero()) || !rho.is_finite() {
            return Err(Error::domain(format!("isentrope s = {s} has no finite density at p = {p}")));
        }
        Ok(rho)
    }

    /// `ρ(s)` as a function of `x = p + p∞`, which avoids cancellation when
    /// `p` approaches `-p∞`.
    fn isentrope_density(&self, s: T, x: T) -> T {
        (x * (-s / self.cv).exp()).powf(T::one() / self.gamma)
    }

    /// `f(s, p) = ∫ dp / (ρ c)` along the isentrope, referenced to `p + p∞ = 0`.
    /// Closed form `2c / (γ - 1)`.
    pub fn riemann_function(&self, s: T, p: T) -> Result<T> {
        let rho = self.density_from_entropy(s, p)?;
        Ok(T::two() * self.sound_speed_unchecked(rho, p) / (self.gamma - T::one()))
    }

    /// Same integral evaluated by adaptive Gauss–Kronrod quadrature in the
    /// variable `ln(p + p∞)`. Uses only `ρ(s, p)` and `c(ρ, p)`.
    pub fn riemann_function_quadrature(&self, s: T, p: T, abs_tol: T) -> Result<T> {
        let x = p + self.p_inf;
        if !(x > T::zero()) {
            return Err(Error::domain(format!("p + p_inf must be positive (p = {p})")));
        }
        let y_hi = x.ln();
        // below this the integrand is negligible or underflows
        let floor = T::min_positive_value().ln() + T::lit(5.0);
        let y_lo = (y_hi - T::lit(700.0)).max(floor);
        let integrand = |y: T| -> T {
            let xp = y.exp();
            let rho = self.isentrope_density(s, xp);
            let c = (self.gamma * (xp / rho)).sqrt();
            if rho > T::zero() && c > T::zero() && c.is_finite() {
                (xp / rho) / c
            } else {
                T::zero()
            }
        };
        adaptive_gk15(&integrand, y_lo, y_hi, abs_tol, 60)
    }
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<T: Real>(f: &impl Fn(T) -> T, a: T, b: T) -> (T, T) {
    let center = T::half() * (a + b);
    let half = T::half() * (b - a);
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + T::lit(WGK[j]) * pair;
        if j % 2 == 1 {
            gauss = gauss + T::lit(WG[j / 2]) * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive GK15 with absolute tolerance.
pub(crate) fn adaptive_gk15<T: Real>(
    f: &impl Fn(T) -> T,
    a: T,
    b: T,
    abs_tol: T,
    max_depth: usize,
) -> Result<T> {
    const MAX_PANELS: usize = 20_000;
    fn recurse<T: Real>(
        f: &impl Fn(T) -> T,
        a: T,
        b: T,
        tol: T,
        depth: usize,
        worst: &mut T,
        panels: &mut usize,
    ) -> Option<T> {
        *panels += 1;
        let (val, err) = gk15(f, a, b);
        if err <= tol {
            return Some(val);
        }
        if depth == 0 || *panels >= MAX_PANELS {
            *worst = worst.max(err);
            return None;
        }
        let mid = T::half() * (a + b);
        let left = recurse(f, a, mid, T::half() * tol, depth - 1, worst, panels)?;
        let right = recurse(f, mid, b, T::half() * tol, depth - 1, worst, panels)?;
        Some(left + right)
    }
    let mut worst = T::zero();
    let mut panels = 0;
    recurse(f, a, b, abs_tol, max_depth, &mut worst, &mut panels).ok_or(Error::NonConvergence {
        what: "adaptive quadrature",
        iterations: max_depth,
        residual: worst.to_f64_lossy(),
    })
}
