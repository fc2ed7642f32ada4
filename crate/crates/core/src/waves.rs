//! Riemann invariants, Hugoniot curves, jump-condition residuals and
//! entropy admissibility of single waves.

use crate::eigen::WaveId;
use crate::eos::EosParams;
use crate::error::{Branch, Error, Result};
use crate::linalg;
use crate::num::Real;
use crate::state::{EosPair, MixturePrimitive, Phase};

/// The six Riemann invariants of `wave`, in the listed order:
///
/// - interface `u`: `u, ρY₁Y₂W, α₁p₁+α₂p₂+ρY₁Y₂W², h₁-h₂+½(Y₂-Y₁)W², s₁, s₂`
/// - contact `u₁`: `α₁, u₁, p₁, u₂, p₂, ρ₂` (symmetric for `u₂`)
/// - acoustic `u₁ ± c₁`: `α₁, s₁, u₁ ∓ f₁(s₁, p₁), u₂, p₂, ρ₂`
pub fn riemann_invariants<T: Real>(
    wave: WaveId,
    u: &MixturePrimitive<T>,
    eos: &EosPair<T>,
) -> Result<[T; 6]> {
    u.validate(eos)?;
    let mix = u.mixture();
    let (p1, p2) = (&u.phase1, &u.phase2);
    let th1 = u.thermo(eos, Phase::One);
    let th2 = u.thermo(eos, Phase::Two);
    let acoustic = |k: Phase, branch: Branch| -> Result<[T; 6]> {
        let me = u.phase(k);
        let other = u.phase(k.other());
        let s = u.thermo(eos, k).s;
        let f = eos.get(k).riemann_function(s, me.p)?;
        let riemann = match branch {
            Branch::Plus => me.u - f,
            Branch::Minus => me.u + f,
        };
        Ok([u.alpha1, s, riemann, other.u, other.p, other.rho])
    };
    let ryy = mix.rho * mix.y1 * mix.y2;
    Ok(match wave {
        WaveId::Interface => [
            mix.u,
            ryy * mix.w,
            u.alpha1 * p1.p + u.alpha2() * p2.p + ryy * mix.w * mix.w,
            th1.h - th2.h + T::half() * (mix.y2 - mix.y1) * mix.w * mix.w,
            th1.s,
            th2.s,
        ],
        WaveId::Contact1 => [u.alpha1, p1.u, p1.p, p2.u, p2.p, p2.rho],
        WaveId::Contact2 => [u.alpha1, p2.u, p2.p, p1.u, p1.p, p1.rho],
        WaveId::Acoustic1Plus => acoustic(Phase::One, Branch::Plus)?,
        WaveId::Acoustic1Minus => acoustic(Phase::One, Branch::Minus)?,
        WaveId::Acoustic2Plus => acoustic(Phase::Two, Branch::Plus)?,
        WaveId::Acoustic2Minus => acoustic(Phase::Two, Branch::Minus)?,
    })
}

/// Two states of a single-phase discontinuity with frozen volume fraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockCandidate<T> {
    pub left: MixturePrimitive<T>,
    pub right: MixturePrimitive<T>,
    pub sigma: T,
    pub phase: Phase,
}

impl<T: Real> ShockCandidate<T> {
    /// Same discontinuity viewed with left and right exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            left: self.right,
            right: self.left,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HugoniotBranches<T> {
    /// `u_k + c_k` family.
    pub plus: ShockCandidate<T>,
    /// `u_k - c_k` family.
    pub minus: ShockCandidate<T>,
}

impl<T: Real> HugoniotBranches<T> {
    pub fn branch(&self, b: Branch) -> &ShockCandidate<T> {
        match b {
            Branch::Plus => &self.plus,
            Branch::Minus => &self.minus,
        }
    }
}

/// Post-shock density from the stiffened-gas Hugoniot.
pub fn hugoniot_density<T: Real>(eos: &EosParams<T>, rho_l: T, p_l: T, p_r: T) -> T {
    let mu = (eos.gamma - T::one()) / (eos.gamma + T::one());
    let ratio = (p_r + eos.p_inf) / (p_l + eos.p_inf);
    rho_l * (ratio + mu) / (mu * ratio + T::one())
}

/// Post-shock density from the Hugoniot energy relation
/// `e_R - e_L + ½(p_L + p_R)(τ_R - τ_L) = 0`, solved by bisection using only
/// `e(ρ, p)`. Relative tolerance `1e-12`.
pub fn hugoniot_density_bisection<T: Real>(eos: &EosParams<T>, rho_l: T, p_l: T, p_r: T) -> Result<T> {
    let e_l = eos.internal_energy(rho_l, p_l)?;
    let g = |rho: T| -> T {
        eos.internal_energy_unchecked(rho, p_r) - e_l
            + T::half() * (p_l + p_r) * (T::one() / rho - T::one() / rho_l)
    };
    // strong-shock density ratio bound is (γ+1)/(γ-1); bracket generously
    let mut lo = rho_l * T::lit(1e-6);
    let mut hi = rho_l * (eos.gamma + T::one()) / (eos.gamma - T::one()) * T::lit(1.0001);
    let (mut glo, ghi) = (g(lo), g(hi));
    if glo.signum() == ghi.signum() {
        return Err(Error::NonConvergence {
            what: "Hugoniot bisection bracket",
            iterations: 0,
            residual: ghi.to_f64_lossy(),
        });
    }
    for _ in 0..200 {
        let mid = T::half() * (lo + hi);
        let gm = g(mid);
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
        if (hi - lo) <= T::lit(1e-12) * hi {
            return Ok(T::half() * (lo + hi));
        }
    }
    Ok(T::half() * (lo + hi))
}

/// States reachable from `left` through a shock in `phase` with post-wave
/// pressure `p_right`, for both acoustic families. The other phase and the
/// volume fraction are copied.
pub fn hugoniot_state<T: Real>(
    eos: &EosPair<T>,
    left: &MixturePrimitive<T>,
    phase: Phase,
    p_right: T,
) -> Result<HugoniotBranches<T>> {
    left.validate(eos)?;
    let law = eos.get(phase);
    let l = *left.phase(phase);
    law.check(T::one(), p_right)
        .map_err(|e| Error::domain(format!("post-shock pressure: {e}")))?;
    let rho_r = hugoniot_density(law, l.rho, l.p, p_right);
    // |j|² = ρ_L ((γ+1)(p_R + p∞) + (γ-1)(p_L + p∞)) / 2, finite at zero strength
    let j = (l.rho
        * T::half()
        * ((law.gamma + T::one()) * (p_right + law.p_inf)
            + (law.gamma - T::one()) * (l.p + law.p_inf)))
        .sqrt();
    let build = |branch: Branch| -> Result<ShockCandidate<T>> {
        let (u_r, sigma) = match branch {
            Branch::Plus => (l.u + (p_right - l.p) / j, l.u + j / l.rho),
            Branch::Minus => (l.u - (p_right - l.p) / j, l.u - j / l.rho),
        };
        let mut right = *left;
        *right.phase_mut(phase) = crate::state::PhaseState::new(rho_r, u_r, p_right);
        right.validate(eos)?;
        Ok(ShockCandidate {
            left: *left,
            right,
            sigma,
            phase,
        })
    };
    Ok(HugoniotBranches {
        plus: build(Branch::Plus)?,
        minus: build(Branch::Minus)?,
    })
}

const RESIDUAL_FLOOR: f64 = 1e-30;

/// Normalized residuals of `⟦α₁⟧`, `⟦α_kρ_k(u_k - σ)⟧`,
/// `⟦α_kρ_ku_k(u_k - σ)⟧ + ⟦α_kp_k⟧` and `⟦α_kρ_kE_k(u_k - σ)⟧ + ⟦α_kp_ku_k⟧`
/// for both phases. Each bracket is scaled by the larger of its left/right
/// magnitudes.
pub fn rankine_hugoniot_residual<T: Real>(
    c: &ShockCandidate<T>,
    eos: &EosPair<T>,
) -> Result<[[T; 4]; 2]> {
    c.left.validate(eos)?;
    c.right.validate(eos)?;
    let scale_floor = T::lit(RESIDUAL_FLOOR);
    let a_scale = c.left.alpha1.abs().max(c.right.alpha1.abs()).max(scale_floor);
    let alpha_res = (c.right.alpha1 - c.left.alpha1).abs() / a_scale;
    if alpha_res > T::lit(1e-14) {
        return Err(Error::Precondition(format!(
            "volume fraction jumps across the candidate (|[alpha1]| = {}); jump conditions apply only to \
             acoustic shocks, across which non-conservative products are inactive",
            (c.right.alpha1 - c.left.alpha1).abs()
        )));
    }
    let mut out = [[T::zero(); 4]; 2];
    for k in Phase::BOTH {
        let side = |s: &MixturePrimitive<T>| -> [[T; 2]; 3] {
            let a = s.alpha(k);
            let ph = s.phase(k);
            let m = a * ph.rho;
            let rel = ph.u - c.sigma;
            let big_e = s.thermo(eos, k).total_energy;
            [
                [m * rel, T::zero()],
                [m * ph.u * rel, a * ph.p],
                [m * big_e * rel, a * ph.p * ph.u],
            ]
        };
        let l = side(&c.left);
        let r = side(&c.right);
        out[k.index()][0] = alpha_res;
        for q in 0..3 {
            let jump = (r[q][0] - l[q][0]) + (r[q][1] - l[q][1]);
            let scale = (l[q][0].abs() + l[q][1].abs())
                .max(r[q][0].abs() + r[q][1].abs())
                .max(scale_floor);
            out[k.index()][q + 1] = jump.abs() / scale;
        }
    }
    Ok(out)
}

pub fn max_residual<T: Real>(res: &[[T; 4]; 2]) -> T {
    res.iter()
        .flat_map(|r| r.iter())
        .fold(T::zero(), |a, &b| a.max(b))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility<T> {
    pub admissible: bool,
    /// `Σ_k ⟦α_kρ_ks_k(u_k - σ)⟧`; non-negative for admissible shocks.
    pub entropy_production: T,
    /// Lax condition `λ(U_R) ≤ σ ≤ λ(U_L)` for the family selected by the
    /// sign of the mass flux.
    pub lax: bool,
    pub family: Branch,
}

/// Entropy admissibility of a discontinuity that satisfies the jump
/// conditions to within `rh_tol`.
pub fn admissible<T: Real>(c: &ShockCandidate<T>, eos: &EosPair<T>, rh_tol: T) -> Result<Admissibility<T>> {
    let res = rankine_hugoniot_residual(c, eos)?;
    let worst = max_residual(&res);
    if worst > rh_tol {
        return Err(Error::Precondition(format!(
            "candidate violates the jump conditions (residual {worst:e} > {rh_tol:e})"
        )));
    }
    let mut production = T::zero();
    let mut scale = T::zero();
    for k in Phase::BOTH {
        let flux = |s: &MixturePrimitive<T>| {
            let m = s.partial_mass(k) * (s.phase(k).u - c.sigma);
            (m, m * s.thermo(eos, k).s)
        };
        let (ml, fl) = flux(&c.left);
        let (mr, fr) = flux(&c.right);
        production = production + (fr - fl);
        scale = scale + (ml.abs().max(mr.abs())) * eos.get(k).cv;
        scale = scale + fl.abs().max(fr.abs());
    }
    let k = c.phase;
    let mass_flux = c.left.partial_mass(k) * (c.left.phase(k).u - c.sigma);
    let family = if mass_flux < T::zero() {
        Branch::Plus
    } else {
        Branch::Minus
    };
    let wave = WaveId::acoustic(k, family);
    let lam = |s: &MixturePrimitive<T>| crate::eigen::eigenvalues(s, eos)[wave.index()];
    let tol = T::lit(1e-10) * (c.sigma.abs() + T::one());
    let lax = lam(&c.right) <= c.sigma + tol && c.sigma <= lam(&c.left) + tol;
    Ok(Admissibility {
        admissible: production >= -T::lit(1e-12) * scale,
        entropy_production: production,
        lax,
        family,
    })
}

/// State on the isentropic wave curve of an acoustic `wave` through `left`
/// at pressure `p`.
pub fn rarefaction_curve<T: Real>(
    eos: &EosPair<T>,
    left: &MixturePrimitive<T>,
    wave: WaveId,
    p: T,
) -> Result<MixturePrimitive<T>> {
    let (k, branch) = match (wave.phase(), wave.branch()) {
        (Some(k), Some(b)) => (k, b),
        _ => {
            return Err(Error::Precondition(format!(
                "{} is not an acoustic wave",
                wave.name()
            )))
        }
    };
    left.validate(eos)?;
    let law = eos.get(k);
    let l = *left.phase(k);
    let s = law.entropy_unchecked(l.rho, l.p);
    let rho = law.density_from_entropy(s, p)?;
    law.check(rho, p)?;
    let df = law.riemann_function(s, p)? - law.riemann_function(s, l.p)?;
    let u_new = match branch {
        // u - f constant
        Branch::Plus => l.u + df,
        // u + f constant
        Branch::Minus => l.u - df,
    };
    let mut out = *left;
    *out.phase_mut(k) = crate::state::PhaseState::new(rho, u_new, p);
    Ok(out)
}

/// State with volume fraction `alpha1_right` that shares all six interface
/// invariants with `left`. Newton iteration on `(u₁, p₁, u₂, p₂)` at frozen
/// phasic entropies.
pub fn interface_state<T: Real>(
    eos: &EosPair<T>,
    left: &MixturePrimitive<T>,
    alpha1_right: T,
) -> Result<MixturePrimitive<T>> {
    let target = riemann_invariants(WaveId::Interface, left, eos)?;
    let s1 = target[4];
    let s2 = target[5];
    let build = |x: &[T; 4]| -> Result<MixturePrimitive<T>> {
        let rho1 = eos.phase1.density_from_entropy(s1, x[1])?;
        let rho2 = eos.phase2.density_from_entropy(s2, x[3])?;
        Ok(MixturePrimitive::from_values(
            alpha1_right,
            rho1,
            x[0],
            x[1],
            rho2,
            x[2],
            x[3],
        ))
    };
    let scales = [
        target[0].abs() + left.phase1.u.abs() + left.phase2.u.abs() + T::one(),
        target[1].abs() + T::one(),
        target[2].abs(),
        target[3].abs() + T::one(),
    ];
    let residual = |x: &[T; 4]| -> Result<[T; 4]> {
        let inv = riemann_invariants(WaveId::Interface, &build(x)?, eos)?;
        let mut r = [T::zero(); 4];
        for i in 0..4 {
            r[i] = (inv[i] - target[i]) / scales[i];
        }
        Ok(r)
    };
    let mut x = [left.phase1.u, left.phase1.p, left.phase2.u, left.phase2.p];
    let norm = |r: &[T; 4]| r.iter().fold(T::zero(), |a, &b| a.max(b.abs()));
    let mut r = residual(&x)?;
    for _ in 0..60 {
        if norm(&r) <= T::lit(1e-14) {
            return build(&x);
        }
        let mut jac = [[T::zero(); 4]; 4];
        for j in 0..4 {
            let h = T::lit(1e-7) * (T::one() + x[j].abs());
            let mut xp = x;
            let mut xm = x;
            xp[j] = x[j] + h;
            xm[j] = x[j] - h;
            let rp = residual(&xp)?;
            let rm = residual(&xm)?;
            for i in 0..4 {
                jac[i][j] = (rp[i] - rm[i]) / (T::two() * h);
            }
        }
        let dx = linalg::solve(&jac, &r)?;
        // damped update keeping pressures admissible
        let mut lambda = T::one();
        loop {
            let mut trial = x;
            for i in 0..4 {
                trial[i] = x[i] - lambda * dx[i];
            }
            if let Ok(rt) = residual(&trial) {
                if norm(&rt) < norm(&r) || lambda < T::lit(1e-3) {
                    x = trial;
                    r = rt;
                    break;
                }
            }
            lambda = lambda * T::half();
            if lambda < T::lit(1e-6) {
                return Err(Error::NonConvergence {
                    what: "interface-state Newton line search",
                    iterations: 0,
                    residual: norm(&r).to_f64_lossy(),
                });
            }
        }
    }
    if norm(&r) <= T::lit(1e-12) {
        return build(&x);
    }
    Err(Error::NonConvergence {
        what: "interface-state Newton",
        iterations: 60,
        residual: norm(&r).to_f64_lossy(),
    })
}
