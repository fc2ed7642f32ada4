//! Quasilinear form, eigenstructure, field classification and symmetrizer of
//! the lift-free one-dimensional system.
//!
//! Analysis variables are `U = (α₁, u₁, p₁, s₁, u₂, p₂, s₂)`; the system reads
//! `∂ₜU + M(U) ∂ₓU = 0` with
//!
//! ```text
//!        | u    0    0  |                 | u_k   1/ρ_k  0   |
//! M(U) = | z₁   M₁   0  | ,  M_k =         | ρ_kc_k²  u_k  0   |
//!        | z₂   0    M₂ |                 | 0      0     u_k |
//!
//! z_k = ((p₁ - p₂)/ρ, (-1)^k ρ_k c_k² (u - u_k)/α_k, 0)
//! ```

use crate::error::{Branch, Error, Result};
use crate::linalg::{self, Mat};
use crate::num::Real;
use crate::state::{Closure, EosPair, MixturePrimitive, Phase, PhaseState};

/// Default relative resonance margin below which eigenvectors are refused.
pub const DEFAULT_RESONANCE_THRESHOLD: f64 = 1e-8;

/// Wave slots in eigenvalue order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WaveId {
    Interface,
    Acoustic1Plus,
    Acoustic1Minus,
    Contact1,
    Acoustic2Plus,
    Acoustic2Minus,
    Contact2,
}

impl WaveId {
    pub const ALL: [WaveId; 7] = [
        WaveId::Interface,
        WaveId::Acoustic1Plus,
        WaveId::Acoustic1Minus,
        WaveId::Contact1,
        WaveId::Acoustic2Plus,
        WaveId::Acoustic2Minus,
        WaveId::Contact2,
    ];

    /// Column of `R` / slot of `Λ`.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn phase(self) -> Option<Phase> {
        match self {
            WaveId::Interface => None,
            WaveId::Acoustic1Plus | WaveId::Acoustic1Minus | WaveId::Contact1 => Some(Phase::One),
            _ => Some(Phase::Two),
        }
    }

    pub fn acoustic(phase: Phase, branch: Branch) -> WaveId {
        match (phase, branch) {
            (Phase::One, Branch::Plus) => WaveId::Acoustic1Plus,
            (Phase::One, Branch::Minus) => WaveId::Acoustic1Minus,
            (Phase::Two, Branch::Plus) => WaveId::Acoustic2Plus,
            (Phase::Two, Branch::Minus) => WaveId::Acoustic2Minus,
        }
    }

    pub fn branch(self) -> Option<Branch> {
        match self {
            WaveId::Acoustic1Plus | WaveId::Acoustic2Plus => Some(Branch::Plus),
            WaveId::Acoustic1Minus | WaveId::Acoustic2Minus => Some(Branch::Minus),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            WaveId::Interface => "interface",
            WaveId::Acoustic1Plus => "acoustic-1-plus",
            WaveId::Acoustic1Minus => "acoustic-1-minus",
            WaveId::Contact1 => "contact-1",
            WaveId::Acoustic2Plus => "acoustic-2-plus",
            WaveId::Acoustic2Minus => "acoustic-2-minus",
            WaveId::Contact2 => "contact-2",
        }
    }
}

impl std::str::FromStr for WaveId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let norm = s.replace('_', "-");
        WaveId::ALL
            .into_iter()
            .find(|w| w.name() == norm)
            .ok_or_else(|| format!("unknown wave '{s}'"))
    }
}

/// The analysis vector `(α₁, u₁, p₁, s₁, u₂, p₂, s₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisVars<T>(pub [T; 7]);

impl<T: Real> AnalysisVars<T> {
    pub fn from_primitive(u: &MixturePrimitive<T>, eos: &EosPair<T>) -> Self {
        let s1 = eos.phase1.entropy_unchecked(u.phase1.rho, u.phase1.p);
        let s2 = eos.phase2.entropy_unchecked(u.phase2.rho, u.phase2.p);
        Self([
            u.alpha1, u.phase1.u, u.phase1.p, s1, u.phase2.u, u.phase2.p, s2,
        ])
    }

    pub fn to_primitive(&self, eos: &EosPair<T>) -> Result<MixturePrimitive<T>> {
        let v = &self.0;
        let rho1 = eos.phase1.density_from_entropy(v[3], v[2])?;
        let rho2 = eos.phase2.density_from_entropy(v[6], v[5])?;
        Ok(MixturePrimitive::new(
            v[0],
            PhaseState::new(rho1, v[1], v[2]),
            PhaseState::new(rho2, v[4], v[5]),
        ))
    }
}

/// The partial-mass analysis vector `(α₁, u₁, p₁, m₁, u₂, p₂, m₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassVars<T>(pub [T; 7]);

impl<T: Real> MassVars<T> {
    pub fn from_primitive(u: &MixturePrimitive<T>) -> Self {
        Self([
            u.alpha1,
            u.phase1.u,
            u.phase1.p,
            u.partial_mass(Phase::One),
            u.phase2.u,
            u.phase2.p,
            u.partial_mass(Phase::Two),
        ])
    }

    pub fn to_primitive(&self) -> MixturePrimitive<T> {
        let v = &self.0;
        MixturePrimitive::new(
            v[0],
            PhaseState::new(v[3] / v[0], v[1], v[2]),
            PhaseState::new(v[6] / (T::one() - v[0]), v[4], v[5]),
        )
    }
}

/// `M(U)` in analysis-variable ordering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasilinearMatrix<T> {
    pub m: Mat<T, 7>,
}

impl<T: Real> QuasilinearMatrix<T> {
    /// Phasic 3×3 block `M_k`.
    pub fn block(&self, k: Phase) -> [[T; 3]; 3] {
        let o = 1 + 3 * k.index();
        let mut b = [[T::zero(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                b[i][j] = self.m[o + i][o + j];
            }
        }
        b
    }

    /// Coupling column `z_{α,k}`.
    pub fn coupling(&self, k: Phase) -> [T; 3] {
        let o = 1 + 3 * k.index();
        [self.m[o][0], self.m[o + 1][0], self.m[o + 2][0]]
    }
}

fn coupling_column<T: Real>(u: &MixturePrimitive<T>, c: [T; 2], k: Phase) -> [T; 3] {
    let mix = u.mixture();
    let dp = (u.phase1.p - u.phase2.p) / mix.rho;
    let ph = u.phase(k);
    let ck = c[k.index()];
    let sign = match k {
        Phase::One => -T::one(),
        Phase::Two => T::one(),
    };
    [
        dp,
        sign * ph.rho * ck * ck / u.alpha(k) * (mix.u - ph.u),
        T::zero(),
    ]
}

fn sound_speeds<T: Real>(u: &MixturePrimitive<T>, eos: &EosPair<T>) -> [T; 2] {
    [
        eos.phase1.sound_speed_unchecked(u.phase1.rho, u.phase1.p),
        eos.phase2.sound_speed_unchecked(u.phase2.rho, u.phase2.p),
    ]
}

pub fn assemble_quasilinear<T: Real>(u: &MixturePrimitive<T>, eos: &EosPair<T>) -> QuasilinearMatrix<T> {
    let c = sound_speeds(u, eos);
    let mut m = linalg::zeros::<T, 7>();
    m[0][0] = u.mixture().u;
    for k in Phase::BOTH {
        let o = 1 + 3 * k.index();
        let ph = u.phase(k);
        let ck = c[k.index()];
        let z = coupling_column(u, c, k);
        for i in 0..3 {
            m[o + i][0] = z[i];
        }
        m[o][o] = ph.u;
        m[o][o + 1] = T::one() / ph.rho;
        m[o + 1][o] = ph.rho * ck * ck;
        m[o + 1][o + 1] = ph.u;
        m[o + 2][o + 2] = ph.u;
    }
    QuasilinearMatrix { m }
}

/// Analytic eigenvalues `(u, u₁+c₁, u₁-c₁, u₁, u₂+c₂, u₂-c₂, u₂)`.
pub fn eigenvalues<T: Real>(u: &MixturePrimitive<T>, eos: &EosPair<T>) -> [T; 7] {
    let c = sound_speeds(u, eos);
    let (u1, u2) = (u.phase1.u, u.phase2.u);
    [
        u.mixture().u,
        u1 + c[0],
        u1 - c[0],
        u1,
        u2 + c[1],
        u2 - c[1],
        u2,
    ]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceReport<T> {
    /// `min_{k,±} |u - (u_k ± c_k)| / c_k`
    pub margin: T,
    pub phase: Phase,
    pub branch: Branch,
    /// True when the closest pair also satisfies `p_I = p_k - ρ_k c_k²` to
    /// within `1e-8` relative: the system stays hyperbolic at resonance then.
    pub hyperbolic_exception: bool,
}

pub fn resonance_report<T: Real>(u: &MixturePrimitive<T>, eos: &EosPair<T>) -> ResonanceReport<T> {
    let c = sound_speeds(u, eos);
    let um = u.mixture().u;
    let mut best = (T::infinity(), Phase::One, Branch::Plus);
    for k in Phase::BOTH {
        let ck = c[k.index()];
        let uk = u.phase(k).u;
        for (branch, lam) in [(Branch::Plus, uk + ck), (Branch::Minus, uk - ck)] {
            let m = (um - lam).abs() / ck;
            if m < best.0 {
                best = (m, k, branch);
            }
        }
    }
    let (margin, phase, branch) = best;
    let ph = u.phase(phase);
    let ck = c[phase.index()];
    let special = ph.p - ph.rho * ck * ck;
    let p_i = Closure::NewModel.interfacial_pressure(u);
    let scale = ph.p.abs().max(ph.rho * ck * ck);
    ResonanceReport {
        margin,
        phase,
        branch,
        hyperbolic_exception: (p_i - special).abs() <= T::lit(1e-8) * scale,
    }
}

pub fn resonance_margin<T: Real>(u: &MixturePrimitive<T>, eos: &EosPair<T>) -> T {
    resonance_report(u, eos).margin
}

fn check_resonance<T: Real>(u: &MixturePrimitive<T>, eos: &EosPair<T>, threshold: T) -> Result<ResonanceReport<T>> {
    let rep = resonance_report(u, eos);
    if !(rep.margin > threshold) {
        return Err(Error::Resonance {
            phase: rep.phase,
            branch: rep.branch,
            margin: rep.margin.to_f64_lossy(),
            threshold: threshold.to_f64_lossy(),
        });
    }
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenStructure<T> {
    pub lambda: [T; 7],
    /// Right eigenvectors as columns, in [`WaveId`] order.
    pub r: Mat<T, 7>,
    pub resonance_margin: T,
    pub determinant: T,
    /// 1-norm condition number of `R`.
    pub condition_number: T,
}

impl<T: Real> EigenStructure<T> {
    pub fn column(&self, w: WaveId) -> [T; 7] {
        let j = w.index();
        let mut col = [T::zero(); 7];
        for (i, c) in col.iter_mut().enumerate() {
            *c = self.r[i][j];
        }
        col
    }
}

/// Interface-wave eigenvector entries shared by both variable sets.
struct InterfaceColumn<T> {
    a: [T; 2],
    b: [T; 2],
    mass: [T; 2],
}

fn interface_column<T: Real>(u: &MixturePrimitive<T>, c: [T; 2]) -> InterfaceColumn<T> {
    let mix = u.mixture();
    let dp = (u.phase1.p - u.phase2.p) / mix.rho;
    let w = mix.w;
    let (c1, c2) = (c[0], c[1]);
    let (a1, a2) = (u.alpha1, u.alpha2());
    let den1 = (u.phase1.u - mix.u).powi(2) - c1 * c1;
    let den2 = (u.phase2.u - mix.u).powi(2) - c2 * c2;
    let g1 = dp - c1 * c1 / a1;
    let g2 = dp + c2 * c2 / a2;
    InterfaceColumn {
        a: [-mix.y2 * w / den1 * g1, mix.y1 * w / den2 * g2],
        b: [
            u.phase1.rho * c1 * c1 / den1 * (dp - mix.y2 * mix.y2 * w * w / a1),
            u.phase2.rho * c2 * c2 / den2 * (dp + mix.y1 * mix.y1 * w * w / a2),
        ],
        mass: [mix.rho * mix.y1 / den1 * g1, mix.rho * mix.y2 / den2 * g2],
    }
}

/// Eigenvalues and right eigenvectors; refuses states closer to resonance
/// than `threshold`.
pub fn eigenstructure<T: Real>(
    u: &MixturePrimitive<T>,
    eos: &EosPair<T>,
    threshold: T,
) -> Result<EigenStructure<T>> {
    let rep = check_resonance(u, eos, threshold)?;
    let c = sound_speeds(u, eos);
    let col = interface_column(u, c);
    let mut r = linalg::zeros::<T, 7>();
    r[0][0] = T::one();
    for k in Phase::BOTH {
        let i = k.index();
        let o = 1 + 3 * i;
        let z = u.phase(k).rho * c[i];
        r[o][0] = col.a[i];
        r[o + 1][0] = col.b[i];
        // u_k + c_k, u_k - c_k, u_k
        r[o][o] = T::one();
        r[o + 1][o] = z;
        r[o][o + 1] = T::one();
        r[o + 1][o + 1] = -z;
        r[o + 2][o + 2] = T::one();
    }
    let lu = linalg::Lu::new(&r);
    let determinant = lu.as_ref().map(|l| l.determinant()).unwrap_or(T::zero());
    Ok(EigenStructure {
        lambda: eigenvalues(u, eos),
        r,
        resonance_margin: rep.margin,
        determinant,
        condition_number: linalg::condition_number(&r),
    })
}

/// Interface eigenvector expressed in the partial-mass variables
/// `(α₁, u₁, p₁, m₁, u₂, p₂, m₂)`.
pub fn interface_eigenvector_mass_vars<T: Real>(
    u: &MixturePrimitive<T>,
    eos: &EosPair<T>,
    threshold: T,
) -> Result<[T; 7]> {
    check_resonance(u, eos, threshold)?;
    let col = interface_column(u, sound_speeds(u, eos));
    Ok([
        T::one(),
        col.a[0],
        col.b[0],
        col.mass[0],
        col.a[1],
        col.b[1],
        col.mass[1],
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    LinearlyDegenerate,
    GenuinelyNonlinear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldClass<T> {
    pub wave: WaveId,
    pub kind: FieldKind,
    /// Finite-difference value of `∇λ · r`.
    pub nonlinearity: T,
}

/// Relative step used by every finite-difference probe in this module.
pub fn fd_step<T: Real>(x: T) -> T {
    T::lit(1e-6) * (T::one() + x.abs())
}

/// Central-difference gradient of `f` at `x`, per-component steps.
pub fn fd_gradient<T: Real, F>(x: &[T; 7], f: F) -> Result<[T; 7]>
where
    F: Fn(&[T; 7]) -> Result<T>,
{
    let mut g = [T::zero(); 7];
    for j in 0..7 {
        let h = fd_step(x[j]);
        let mut xp = *x;
        let mut xm = *x;
        xp[j] = x[j] + h;
        xm[j] = x[j] - h;
        g[j] = (f(&xp)? - f(&xm)?) / (xp[j] - xm[j]);
    }
    Ok(g)
}

fn dot7<T: Real>(a: &[T; 7], b: &[T; 7]) -> T {
    (0..7).fold(T::zero(), |s, i| s + a[i] * b[i])
}

/// Classifies every characteristic field through finite differences of the
/// eigenvalues along their eigenvectors. The interface field is probed in the
/// partial-mass variables.
pub fn classify_fields<T: Real>(
    u: &MixturePrimitive<T>,
    eos: &EosPair<T>,
    threshold: T,
) -> Result<[FieldClass<T>; 7]> {
    let es = eigenstructure(u, eos, threshold)?;
    let uvars = AnalysisVars::from_primitive(u, eos);
    let mut out = [FieldClass {
        wave: WaveId::Interface,
        kind: FieldKind::LinearlyDegenerate,
        nonlinearity: T::zero(),
    }; 7];
    for w in WaveId::ALL {
        let value = if w == WaveId::Interface {
            let r = interface_eigenvector_mass_vars(u, eos, threshold)?;
            let v = MassVars::from_primitive(u);
            let g = fd_gradient(&v.0, |x| Ok(MassVars(*x).to_primitive().mixture().u))?;
            dot7(&g, &r)
        } else {
            let j = w.index();
            let g = fd_gradient(&uvars.0, |x| {
                let p = AnalysisVars(*x).to_primitive(eos)?;
                Ok(eigenvalues(&p, eos)[j])
            })?;
            dot7(&g, &es.column(w))
        };
        let kind = if value.abs() <= T::lit(1e-6) {
            FieldKind::LinearlyDegenerate
        } else {
            FieldKind::GenuinelyNonlinear
        };
        out[w.index()] = FieldClass {
            wave: w,
            kind,
            nonlinearity: value,
        };
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Symmetrizer<T> {
    pub p: Mat<T, 7>,
    pub theta_alpha: T,
    pub y_alpha: [[T; 3]; 2],
}

/// Diagonal of the phasic block `P_k = diag(ρ_k c_k, 1/(ρ_k c_k), 1)`.
pub fn phase_block_diagonal<T: Real>(rho: T, c: T) -> [T; 3] {
    let z = rho * c;
    [z, T::one() / z, T::one()]
}

/// Solves `[[d, ρc²], [1/ρ, d]] y = rhs` with `d = u_k - u`.
pub fn solve_coupling_2x2<T: Real>(d: T, rho: T, c: T, rhs: [T; 2]) -> [T; 2] {
    let det = d * d - c * c;
    [
        (d * rhs[0] - rho * c * c * rhs[1]) / det,
        (d * rhs[1] - rhs[0] / rho) / det,
    ]
}

/// Constructive symmetric positive-definite `P` with `P M` symmetric.
pub fn symmetrizer<T: Real>(
    u: &MixturePrimitive<T>,
    eos: &EosPair<T>,
    threshold: T,
) -> Result<Symmetrizer<T>> {
    check_resonance(u, eos, threshold)?;
    let c = sound_speeds(u, eos);
    let um = u.mixture().u;
    let mut p = linalg::zeros::<T, 7>();
    let mut y_alpha = [[T::zero(); 3]; 2];
    let mut bound = T::zero();
    for k in Phase::BOTH {
        let i = k.index();
        let o = 1 + 3 * i;
        let ph = u.phase(k);
        let diag = phase_block_diagonal(ph.rho, c[i]);
        let z = coupling_column(u, c, k);
        let rhs = [diag[0] * z[0], diag[1] * z[1]];
        let y = solve_coupling_2x2(ph.u - um, ph.rho, c[i], rhs);
        y_alpha[i] = [y[0], y[1], T::zero()];
        for j in 0..3 {
            p[o + j][o + j] = diag[j];
            p[0][o + j] = y_alpha[i][j];
            p[o + j][0] = y_alpha[i][j];
            bound = bound + y_alpha[i][j] * y_alpha[i][j] / diag[j];
        }
    }
    let theta_alpha = bound + bound.max(T::one());
    p[0][0] = theta_alpha;
    Ok(Symmetrizer {
        p,
        theta_alpha,
        y_alpha,
    })
}
