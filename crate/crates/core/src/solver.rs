//! One-dimensional path-conservative finite-volume solver.
//!
//! Conservative fluxes use a local Rusanov (Lax–Friedrichs) flux. The
//! non-conservative products `p_I ∂ₓα₁` and `(pu)_I ∂ₓα₁` are discretized in
//! fluctuation form with arithmetic-mean interface values, split half/half
//! between the two neighbours and applied with opposite signs to the two
//! phases. The volume fraction is advected by the closure's interfacial
//! velocity with Rusanov dissipation at the same local speed as the
//! conserved variables, which keeps pressure/velocity-equilibrium contacts
//! exactly in equilibrium.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::eigen;
use crate::error::{Error, Result};
use crate::num::{compensated_sum, Real};
use crate::relaxation::{self, RelaxationParams};
use crate::state::{
    cons_to_prim, prim_to_cons, prim_to_cons_unchecked, total_entropy_density, Closure,
    ConservedState, EosPair, MixturePrimitive, Phase, ALPHA_FLOOR,
};

pub const MAX_RETRIES: usize = 10;
const PARALLEL_MIN_CELLS: usize = 2048;
const GHOSTS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Transmissive,
    Periodic,
    Reflective,
}

impl Boundary {
    pub fn name(self) -> &'static str {
        match self {
            Boundary::Transmissive => "transmissive",
            Boundary::Periodic => "periodic",
            Boundary::Reflective => "reflective",
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Boundary {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "transmissive" => Ok(Boundary::Transmissive),
            "periodic" => Ok(Boundary::Periodic),
            "reflective" => Ok(Boundary::Reflective),
            other => Err(format!(
                "unknown boundary '{other}' (expected transmissive, periodic or reflective)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    #[default]
    RusanovPc,
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "rusanov-pc" | "rusanov_pc" | "rusanov" => Ok(Scheme::RusanovPc),
            other => Err(format!("unknown scheme '{other}' (expected rusanov-pc)")),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("rusanov-pc")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Limiter {
    #[default]
    None,
    Minmod,
}

impl FromStr for Limiter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "none" => Ok(Limiter::None),
            "minmod" => Ok(Limiter::Minmod),
            other => Err(format!("unknown limiter '{other}' (expected none or minmod)")),
        }
    }
}

impl fmt::Display for Limiter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Limiter::None => "none",
            Limiter::Minmod => "minmod",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T> {
    pub cfl: T,
    pub t_end: T,
    pub scheme: Scheme,
    pub boundary: Boundary,
    pub closure: Closure,
    pub limiter: Limiter,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            cfl: T::lit(0.45),
            t_end: T::zero(),
            scheme: Scheme::RusanovPc,
            boundary: Boundary::Transmissive,
            closure: Closure::NewModel,
            limiter: Limiter::None,
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > T::zero() && self.cfl <= T::one()) {
            return Err(Error::domain(format!("cfl must lie in (0, 1] (got {})", self.cfl)));
        }
        if !(self.t_end >= T::zero() && self.t_end.is_finite()) {
            return Err(Error::domain(format!(
                "t_end must be finite and non-negative (got {})",
                self.t_end
            )));
        }
        Ok(())
    }
}

/// Uniform cell-centred grid owning the conserved state and the fluid pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D<T> {
    pub x_lo: T,
    pub x_hi: T,
    pub eos: EosPair<T>,
    pub cells: Vec<ConservedState<T>>,
}

impl<T: Real> Grid1D<T> {
    /// Samples `init` at the cell centres.
    pub fn from_fn(
        n: usize,
        x_lo: T,
        x_hi: T,
        eos: EosPair<T>,
        init: impl Fn(T) -> MixturePrimitive<T>,
    ) -> Result<Self> {
        if n < 4 {
            return Err(Error::domain(format!("grid needs at least 4 cells (got {n})")));
        }
        if !(x_hi > x_lo) || !x_lo.is_finite() || !x_hi.is_finite() {
            return Err(Error::domain(format!("invalid domain [{x_lo}, {x_hi}]")));
        }
        let mut grid = Self {
            x_lo,
            x_hi,
            eos,
            cells: Vec::with_capacity(n),
        };
        for i in 0..n {
            let u = init(grid.cell_center_for(i, n));
            grid.cells.push(prim_to_cons(&u, &eos).map_err(|e| e.in_cell(i))?);
        }
        Ok(grid)
    }

    /// Piecewise-constant Riemann data split at `x_split`.
    pub fn riemann(
        n: usize,
        x_lo: T,
        x_hi: T,
        x_split: T,
        eos: EosPair<T>,
        left: MixturePrimitive<T>,
        right: MixturePrimitive<T>,
    ) -> Result<Self> {
        Self::from_fn(n, x_lo, x_hi, eos, |x| if x < x_split { left } else { right })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn dx(&self) -> T {
        (self.x_hi - self.x_lo) / T::from_usize(self.cells.len()).unwrap()
    }

    fn cell_center_for(&self, i: usize, n: usize) -> T {
        let dx = (self.x_hi - self.x_lo) / T::from_usize(n).unwrap();
        self.x_lo + (T::from_usize(i).unwrap() + T::half()) * dx
    }

    pub fn cell_center(&self, i: usize) -> T {
        self.cell_center_for(i, self.cells.len())
    }

    pub fn primitive(&self, i: usize) -> Result<MixturePrimitive<T>> {
        cons_to_prim(&self.cells[i], &self.eos).map_err(|e| e.in_cell(i))
    }

    pub fn primitives(&self) -> Result<Vec<MixturePrimitive<T>>> {
        (0..self.cells.len()).map(|i| self.primitive(i)).collect()
    }
}

/// Largest `|u_k| + c_k` over both phases of one state.
fn max_speed<T: Real>(u: &MixturePrimitive<T>, eos: &EosPair<T>) -> T {
    Phase::BOTH
        .iter()
        .map(|&k| {
            let ph = u.phase(k);
            ph.u.abs() + eos.get(k).sound_speed_unchecked(ph.rho, ph.p)
        })
        .fold(T::zero(), |a, b| a.max(b))
}

/// `Δt = cfl·Δx / max_i max_k(|u_k| + c_k)`.
pub fn dt_cfl<T: Real>(grid: &Grid1D<T>, config: &SolverConfig<T>) -> Result<T> {
    let mut smax = T::zero();
    for i in 0..grid.len() {
        let s = max_speed(&grid.primitive(i)?, &grid.eos);
        if !s.is_finite() {
            return Err(Error::InvalidState {
                cell: Some(i),
                detail: "non-finite wave speed".into(),
            });
        }
        smax = smax.max(s);
    }
    if !(smax > T::zero()) {
        return Err(Error::invalid("zero maximal wave speed"));
    }
    Ok(config.cfl * grid.dx() / smax)
}

type Prim7<T> = [T; 7];

fn to_prim7<T: Real>(u: &MixturePrimitive<T>) -> Prim7<T> {
    [
        u.alpha1, u.phase1.rho, u.phase1.u, u.phase1.p, u.phase2.rho, u.phase2.u, u.phase2.p,
    ]
}

fn from_prim7<T: Real>(w: &Prim7<T>) -> MixturePrimitive<T> {
    MixturePrimitive::from_values(w[0], w[1], w[2], w[3], w[4], w[5], w[6])
}

fn prim7_admissible<T: Real>(w: &Prim7<T>, eos: &EosPair<T>) -> bool {
    w[0] > T::zero()
        && w[0] < T::one()
        && eos.phase1.is_admissible(w[1], w[3])
        && eos.phase2.is_admissible(w[4], w[6])
        && w[2].is_finite()
        && w[5].is_finite()
}

/// Cell primitives padded with `GHOSTS` ghost cells on each side.
fn padded_primitives<T: Real>(
    cells: &[ConservedState<T>],
    eos: &EosPair<T>,
    boundary: Boundary,
) -> Result<Vec<Prim7<T>>> {
    let n = cells.len();
    let inner: Vec<Prim7<T>> = cells
        .iter()
        .enumerate()
        .map(|(i, q)| cons_to_prim(q, eos).map(|u| to_prim7(&u)).map_err(|e| e.in_cell(i)))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(n + 2 * GHOSTS);
    let mirror = |w: Prim7<T>| -> Prim7<T> {
        let mut w = w;
        w[2] = -w[2];
        w[5] = -w[5];
        w
    };
    for g in (0..GHOSTS).rev() {
        out.push(match boundary {
            Boundary::Transmissive => inner[0],
            Boundary::Periodic => inner[n - 1 - g],
            Boundary::Reflective => mirror(inner[g]),
        });
    }
    out.extend_from_slice(&inner);
    for g in 0..GHOSTS {
        out.push(match boundary {
            Boundary::Transmissive => inner[n - 1],
            Boundary::Periodic => inner[g],
            Boundary::Reflective => mirror(inner[n - 1 - g]),
        });
    }
    Ok(out)
}

fn minmod<T: Real>(a: T, b: T) -> T {
    if a * b <= T::zero() {
        T::zero()
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

/// Left and right edge values of one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellEdges<T> {
    pub left: MixturePrimitive<T>,
    pub right: MixturePrimitive<T>,
}

/// Edge values of every padded cell. Interior cells use minmod-limited
/// primitive slopes; a cell whose edges would be inadmissible falls back to
/// constant reconstruction. The outermost ghost on each side is always
/// first order.
fn reconstruct<T: Real>(padded: &[Prim7<T>], eos: &EosPair<T>, limiter: Limiter) -> Vec<(Prim7<T>, Prim7<T>)> {
    let m = padded.len();
    (0..m)
        .map(|j| {
            let w = padded[j];
            if limiter == Limiter::None || j == 0 || j == m - 1 {
                return (w, w);
            }
            let mut l = w;
            let mut r = w;
            for c in 0..7 {
                let s = minmod(w[c] - padded[j - 1][c], padded[j + 1][c] - w[c]);
                l[c] = w[c] - T::half() * s;
                r[c] = w[c] + T::half() * s;
            }
            if prim7_admissible(&l, eos) && prim7_admissible(&r, eos) {
                (l, r)
            } else {
                (w, w)
            }
        })
        .collect()
}

/// Edge states of every real cell under the given limiter and boundary.
pub fn muscl_reconstruct<T: Real>(
    grid: &Grid1D<T>,
    boundary: Boundary,
    limiter: Limiter,
) -> Result<Vec<CellEdges<T>>> {
    let padded = padded_primitives(&grid.cells, &grid.eos, boundary)?;
    let edges = reconstruct(&padded, &grid.eos, limiter);
    Ok(edges[GHOSTS..GHOSTS + grid.len()]
        .iter()
        .map(|(l, r)| CellEdges {
            left: from_prim7(l),
            right: from_prim7(r),
        })
        .collect())
}

fn physical_flux<T: Real>(u: &MixturePrimitive<T>, q: &ConservedState<T>) -> [T; 6] {
    let (a1, a2) = (u.alpha1, u.alpha2());
    let (u1, u2) = (u.phase1.u, u.phase2.u);
    [
        q.m1 * u1,
        q.m2 * u2,
        q.q1 * u1 + a1 * u.phase1.p,
        q.q2 * u2 + a2 * u.phase2.p,
        (q.eps1 + a1 * u.phase1.p) * u1,
        (q.eps2 + a2 * u.phase2.p) * u2,
    ]
}

/// Everything one interface contributes to its two neighbours.
#[derive(Debug, Clone, Copy)]
struct InterfaceTerms<T> {
    flux: [T; 6],
    /// α₁ fluctuation sent to the left cell.
    alpha_minus: T,
    /// α₁ fluctuation sent to the right cell.
    alpha_plus: T,
    /// `p_I* Δα₁`
    nc_momentum: T,
    /// `(pu)_I* Δα₁`
    nc_energy: T,
    speed: T,
}

fn interface_terms<T: Real>(
    wl: &Prim7<T>,
    wr: &Prim7<T>,
    eos: &EosPair<T>,
    closure: Closure,
) -> InterfaceTerms<T> {
    let ul = from_prim7(wl);
    let ur = from_prim7(wr);
    let ql = prim_to_cons_unchecked(&ul, eos);
    let qr = prim_to_cons_unchecked(&ur, eos);
    let a = max_speed(&ul, eos).max(max_speed(&ur, eos));
    let fl = physical_flux(&ul, &ql);
    let fr = physical_flux(&ur, &qr);
    let (al, ar) = (ql.to_array(), qr.to_array());
    let mut flux = [T::zero(); 6];
    for c in 0..6 {
        flux[c] = T::half() * (fl[c] + fr[c]) - T::half() * a * (ar[c + 1] - al[c + 1]);
    }
    let (ui_l, pi_l, wi_l) = closure.interfacial(&ul);
    let (ui_r, pi_r, wi_r) = closure.interfacial(&ur);
    let u_star = T::half() * (ui_l + ui_r);
    let d_alpha = wr[0] - wl[0];
    InterfaceTerms {
        flux,
        alpha_minus: T::half() * (u_star - a) * d_alpha,
        alpha_plus: T::half() * (u_star + a) * d_alpha,
        nc_momentum: T::half() * (pi_l + pi_r) * d_alpha,
        nc_energy: T::half() * (wi_l + wi_r) * d_alpha,
        speed: a,
    }
}

/// Semi-discrete right-hand side `dQ/dt` of every cell, plus the largest
/// interface speed.
fn spatial_rhs<T: Real>(
    cells: &[ConservedState<T>],
    eos: &EosPair<T>,
    config: &SolverConfig<T>,
    dx: T,
) -> Result<(Vec<[T; 7]>, T)> {
    let n = cells.len();
    let padded = padded_primitives(cells, eos, config.boundary)?;
    let edges = reconstruct(&padded, eos, config.limiter);
    // interface k lies between padded cells GHOSTS-1+k and GHOSTS+k, k = 0..=n
    let face = |k: usize| {
        let j = GHOSTS - 1 + k;
        interface_terms(&edges[j].1, &edges[j + 1].0, eos, config.closure)
    };
    let faces: Vec<InterfaceTerms<T>> = if n >= PARALLEL_MIN_CELLS {
        (0..=n).into_par_iter().map(face).collect()
    } else {
        (0..=n).map(face).collect()
    };
    let speed = faces.iter().fold(T::zero(), |a, f| a.max(f.speed));
    let rates = (0..n)
        .map(|i| {
            let (fl, fr) = (&faces[i], &faces[i + 1]);
            let (el, er) = edges[GHOSTS + i];
            let mut rate = [T::zero(); 7];
            let mut in_cell = (T::zero(), T::zero(), T::zero());
            if config.limiter != Limiter::None {
                let ul = from_prim7(&el);
                let ur = from_prim7(&er);
                let centre = from_prim7(&padded[GHOSTS + i]);
                let (u_i, p_i, w_i) = config.closure.interfacial(&centre);
                let jump = ur.alpha1 - ul.alpha1;
                in_cell = (u_i * jump, p_i * jump, w_i * jump);
            }
            rate[0] = -(fl.alpha_plus + fr.alpha_minus + in_cell.0) / dx;
            for c in 0..6 {
                rate[c + 1] = -(fr.flux[c] - fl.flux[c]) / dx;
            }
            let s_mom = (T::half() * (fl.nc_momentum + fr.nc_momentum) + in_cell.1) / dx;
            let s_en = (T::half() * (fl.nc_energy + fr.nc_energy) + in_cell.2) / dx;
            rate[3] = rate[3] + s_mom;
            rate[4] = rate[4] - s_mom;
            rate[5] = rate[5] + s_en;
            rate[6] = rate[6] - s_en;
            rate
        })
        .collect();
    Ok((rates, speed))
}

/// Clips α₁ into `[ε_α, 1 - ε_α]` and checks admissibility of every cell.
fn finish_stage<T: Real>(cells: &mut [ConservedState<T>], eos: &EosPair<T>) -> Result<usize> {
    let lo = T::lit(ALPHA_FLOOR);
    let hi = T::one() - lo;
    let mut clips = 0;
    for (i, q) in cells.iter_mut().enumerate() {
        if !q.alpha1.is_finite() {
            return Err(Error::InvalidState {
                cell: Some(i),
                detail: "non-finite volume fraction".into(),
            });
        }
        if q.alpha1 < lo {
            q.alpha1 = lo;
            clips += 1;
        } else if q.alpha1 > hi {
            q.alpha1 = hi;
            clips += 1;
        }
        cons_to_prim(q, eos).map_err(|e| e.in_cell(i))?;
    }
    Ok(clips)
}

fn euler_stage<T: Real>(
    cells: &[ConservedState<T>],
    eos: &EosPair<T>,
    config: &SolverConfig<T>,
    dx: T,
    dt: T,
) -> Result<Vec<ConservedState<T>>> {
    let (rates, speed) = spatial_rhs(cells, eos, config, dx)?;
    if speed * dt > dx * (T::one() + T::lit(1e-12)) {
        return Err(Error::Precondition(format!(
            "time step {dt} violates the CFL bound (speed {speed}, dx {dx})"
        )));
    }
    Ok(cells
        .iter()
        .zip(&rates)
        .map(|(q, r)| {
            let mut a = q.to_array();
            for c in 0..7 {
                a[c] = a[c] + dt * r[c];
            }
            ConservedState::from_array(a)
        })
        .collect())
}

/// Result of one hyperbolic step.
#[derive(Debug, Clone)]
pub struct StepResult<T> {
    pub grid: Grid1D<T>,
    pub clip_count: usize,
}

/// One explicit step of size `dt` (forward Euler for first order, two-stage
/// SSP Runge–Kutta with the minmod reconstruction). Fails on an
/// inadmissible post-state without retrying.
pub fn step<T: Real>(grid: &Grid1D<T>, config: &SolverConfig<T>, dt: T) -> Result<StepResult<T>> {
    let dx = grid.dx();
    let eos = &grid.eos;
    let mut clips;
    let cells = match config.limiter {
        Limiter::None => {
            let mut c = euler_stage(&grid.cells, eos, config, dx, dt)?;
            clips = finish_stage(&mut c, eos)?;
            c
        }
        Limiter::Minmod => {
            let mut s1 = euler_stage(&grid.cells, eos, config, dx, dt)?;
            clips = finish_stage(&mut s1, eos)?;
            let s2 = euler_stage(&s1, eos, config, dx, dt)?;
            let mut c: Vec<ConservedState<T>> = grid
                .cells
                .iter()
                .zip(&s2)
                .map(|(a, b)| {
                    let (a, b) = (a.to_array(), b.to_array());
                    let mut o = [T::zero(); 7];
                    for k in 0..7 {
                        o[k] = T::half() * (a[k] + b[k]);
                    }
                    ConservedState::from_array(o)
                })
                .collect();
            clips += finish_stage(&mut c, eos)?;
            c
        }
    };
    Ok(StepResult {
        grid: Grid1D {
            cells,
            ..grid.clone()
        },
        clip_count: clips,
    })
}

/// Totals of one accepted state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics<T> {
    pub step: usize,
    pub t: T,
    pub dt: T,
    pub mass1: T,
    pub mass2: T,
    pub momentum: T,
    pub energy: T,
    pub entropy: T,
    pub min_resonance_margin: T,
    pub clip_count: usize,
}

impl<T: Real> Diagnostics<T> {
    pub fn measure(grid: &Grid1D<T>, step: usize, t: T, dt: T, clip_count: usize) -> Result<Self> {
        let dx = grid.dx();
        let prims = grid.primitives()?;
        let sum = |f: &dyn Fn(usize) -> T| compensated_sum((0..grid.len()).map(f)) * dx;
        let margin = prims
            .iter()
            .map(|u| eigen::resonance_margin(u, &grid.eos))
            .fold(T::infinity(), |a, b| a.min(b));
        Ok(Self {
            step,
            t,
            dt,
            mass1: sum(&|i| grid.cells[i].m1),
            mass2: sum(&|i| grid.cells[i].m2),
            momentum: compensated_sum(grid.cells.iter().flat_map(|q| [q.q1, q.q2])) * dx,
            energy: compensated_sum(grid.cells.iter().flat_map(|q| [q.eps1, q.eps2])) * dx,
            entropy: sum(&|i| total_entropy_density(&prims[i], &grid.eos)),
            min_resonance_margin: margin,
            clip_count,
        })
    }
}

/// Largest pressure and velocity non-equilibrium over the grid,
/// `(max|p₁ - p₂| / p-scale, max|u₁ - u₂| / c-scale)`.
pub fn equilibrium_violation<T: Real>(grid: &Grid1D<T>) -> Result<(T, T)> {
    let mut dp = T::zero();
    let mut du = T::zero();
    for u in grid.primitives()? {
        let ps = (u.phase1.p.abs() + grid.eos.phase1.p_inf).max(u.phase2.p.abs() + grid.eos.phase2.p_inf);
        let cs = max_speed(&u, &grid.eos);
        dp = dp.max((u.phase1.p - u.phase2.p).abs() / ps);
        du = du.max((u.phase1.u - u.phase2.u).abs() / cs);
    }
    Ok((dp, du))
}

/// An accepted step: hyperbolic update followed by pointwise relaxation.
#[derive(Debug, Clone)]
pub struct Advance<T> {
    pub grid: Grid1D<T>,
    pub dt: T,
    pub clip_count: usize,
    pub retries: usize,
}

/// Hyperbolic step plus relaxation, halving `dt` on failure up to
/// [`MAX_RETRIES`] times.
pub fn advance<T: Real>(
    grid: &Grid1D<T>,
    config: &SolverConfig<T>,
    relax: &RelaxationParams<T>,
    dt: T,
) -> Result<Advance<T>> {
    let mut dt = dt;
    let mut last_err = None;
    for retries in 0..=MAX_RETRIES {
        let attempt = step(grid, config, dt).and_then(|mut s| {
            relaxation::split_step(&mut s.grid.cells, &s.grid.eos, config.closure, relax, dt)?;
            if !relax.is_off() {
                finish_stage(&mut s.grid.cells, &s.grid.eos)?;
            }
            Ok(s)
        });
        match attempt {
            Ok(s) => {
                return Ok(Advance {
                    grid: s.grid,
                    dt,
                    clip_count: s.clip_count,
                    retries,
                })
            }
            Err(e) => {
                last_err = Some(e);
                dt = dt * T::half();
            }
        }
    }
    Err(last_err.expect("at least one attempt"))
}

#[derive(Debug, Clone)]
pub struct Snapshot<T> {
    pub time: T,
    pub grid: Grid1D<T>,
}

#[derive(Debug, Clone)]
pub struct RunOutput<T> {
    pub snapshots: Vec<Snapshot<T>>,
    /// One record per accepted step, preceded by the initial state.
    pub diagnostics: Vec<Diagnostics<T>>,
}

impl<T: Real> RunOutput<T> {
    pub fn final_grid(&self) -> &Grid1D<T> {
        &self.snapshots.last().expect("run emits at least one snapshot").grid
    }
}

/// Integrates to `config.t_end`, emitting snapshots at each requested time
/// in `[0, t_end]` and always at `t_end`. Steps are shortened to land on
/// output times exactly.
pub fn run<T: Real>(
    grid: Grid1D<T>,
    config: &SolverConfig<T>,
    relax: &RelaxationParams<T>,
    output_times: &[T],
) -> Result<RunOutput<T>> {
    config.validate()?;
    relax.validate()?;
    let mut times: Vec<T> = output_times
        .iter()
        .copied()
        .filter(|t| *t >= T::zero() && *t <= config.t_end)
        .collect();
    times.push(config.t_end);
    times.sort_by(|a, b| a.partial_cmp(b).expect("finite output times"));
    times.dedup();

    let abort = |step: usize, t: T, e: Error| Error::SolverAbort {
        step,
        time: t.to_f64_lossy(),
        reason: e.to_string(),
    };
    let mut grid = grid;
    let mut t = T::zero();
    let mut n_step = 0;
    let mut diagnostics = vec![Diagnostics::measure(&grid, 0, t, T::zero(), 0).map_err(|e| abort(0, t, e))?];
    let mut snapshots = Vec::with_capacity(times.len());
    for &target in &times {
        while t < target {
            let mut dt = dt_cfl(&grid, config).map_err(|e| abort(n_step, t, e))?;
            let remaining = target - t;
            // avoid a sliver step just before the output time
            if dt >= remaining || remaining - dt < T::lit(1e-9) * remaining.max(dt) {
                dt = remaining;
            }
            let adv = advance(&grid, config, relax, dt).map_err(|e| abort(n_step + 1, t, e))?;
            n_step += 1;
            t = if adv.dt == remaining { target } else { t + adv.dt };
            grid = adv.grid;
            diagnostics.push(
                Diagnostics::measure(&grid, n_step, t, adv.dt, adv.clip_count)
                    .map_err(|e| abort(n_step, t, e))?,
            );
        }
        snapshots.push(Snapshot {
            time: target,
            grid: grid.clone(),
        });
    }
    Ok(RunOutput {
        snapshots,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eos::EosParams;
    use approx::assert_relative_eq;

    fn air() -> EosPair<f64> {
        let g = EosParams::ideal(1.4).unwrap();
        EosPair::new(g, g)
    }

    fn shock_tube(n: usize, boundary: Boundary) -> (Grid1D<f64>, SolverConfig<f64>) {
        let eos = EosPair::new(
            EosParams::ideal(1.4).unwrap(),
            EosParams::new(3.0, 2.0, 1.5, 0.0).unwrap(),
        );
        let left = MixturePrimitive::from_values(0.7, 1.0, 0.0, 2.0, 2.0, 0.1, 1.5);
        let right = MixturePrimitive::from_values(0.3, 0.5, 0.0, 1.0, 1.5, 0.0, 1.0);
        let grid = Grid1D::from_fn(n, 0.0, 1.0, eos, |x| {
            if (0.25..0.75).contains(&x) { left } else { right }
        })
        .unwrap();
        let config = SolverConfig {
            boundary,
            t_end: 0.1,
            ..Default::default()
        };
        (grid, config)
    }

    #[test]
    fn dt_cfl_uniform_state() {
        let eos = air();
        let u = MixturePrimitive::from_values(0.5, 1.4, 0.5, 1.0, 1.4, -0.25, 1.0);
        let grid = Grid1D::from_fn(10, 0.0, 1.0, eos, |_| u).unwrap();
        let config = SolverConfig::default();
        // c = 1
        assert_relative_eq!(dt_cfl(&grid, &config).unwrap(), 0.45 * 0.1 / 1.5, max_relative = 1e-14);
    }

    #[test]
    fn uniform_state_is_preserved() {
        let eos = air();
        let u = MixturePrimitive::from_values(0.3, 1.0, 0.7, 1.0, 2.0, -0.2, 1.0);
        for limiter in [Limiter::None, Limiter::Minmod] {
            for boundary in [Boundary::Transmissive, Boundary::Periodic] {
                let grid = Grid1D::from_fn(16, 0.0, 1.0, eos, |_| u).unwrap();
                let config = SolverConfig { limiter, boundary, ..Default::default() };
                let dt = dt_cfl(&grid, &config).unwrap();
                let next = step(&grid, &config, dt).unwrap().grid;
                for (a, b) in grid.cells.iter().zip(&next.cells) {
                    for (x, y) in a.to_array().iter().zip(b.to_array()) {
                        assert!((x - y).abs() <= 1e-14 * x.abs().max(1.0));
                    }
                }
            }
        }
    }

    #[test]
    fn periodic_step_conserves_totals() {
        for closure in Closure::ALL {
            let (grid, mut config) = shock_tube(64, Boundary::Periodic);
            config.closure = closure;
            let before = Diagnostics::measure(&grid, 0, 0.0, 0.0, 0).unwrap();
            let dt = dt_cfl(&grid, &config).unwrap();
            let next = step(&grid, &config, dt).unwrap().grid;
            let after = Diagnostics::measure(&next, 1, dt, dt, 0).unwrap();
            assert_relative_eq!(before.mass1, after.mass1, max_relative = 1e-14);
            assert_relative_eq!(before.energy, after.energy, max_relative = 1e-14);
            assert!((before.momentum - after.momentum).abs() <= 1e-13 * before.energy.abs());
        }
    }

    #[test]
    fn moving_equilibrium_contact_keeps_pressure_and_velocity() {
        let eos = EosPair::new(
            EosParams::ideal(1.4).unwrap(),
            EosParams::new(4.4, 6.0, 1.0, 0.0).unwrap(),
        );
        let grid = Grid1D::from_fn(50, 0.0, 1.0, eos, |x| {
            let a = if x < 0.5 { 0.9 } else { 0.1 };
            MixturePrimitive::from_values(a, 1.0 + x, 0.5, 1.0, 3.0 - x, 0.5, 1.0)
        })
        .unwrap();
        let config = SolverConfig { boundary: Boundary::Periodic, t_end: 0.2, ..Default::default() };
        let out = run(grid, &config, &RelaxationParams::off(), &[]).unwrap();
        for u in out.final_grid().primitives().unwrap() {
            assert_relative_eq!(u.phase1.p, 1.0, max_relative = 1e-12);
            assert_relative_eq!(u.phase2.u, 0.5, max_relative = 1e-12);
        }
    }

    #[test]
    fn zero_end_time_echoes_initial_data() {
        let (grid, mut config) = shock_tube(8, Boundary::Transmissive);
        config.t_end = 0.0;
        let out = run(grid.clone(), &config, &RelaxationParams::off(), &[]).unwrap();
        assert_eq!(out.snapshots.len(), 1);
        assert_eq!(out.snapshots[0].grid, grid);
        assert_eq!(out.diagnostics.len(), 1);
    }

    #[test]
    fn run_lands_on_output_times() {
        let (grid, config) = shock_tube(32, Boundary::Reflective);
        let out = run(grid, &config, &RelaxationParams::off(), &[0.0, 0.05]).unwrap();
        let times: Vec<f64> = out.snapshots.iter().map(|s| s.time).collect();
        assert_eq!(times, vec![0.0, 0.05, 0.1]);
        assert_eq!(out.diagnostics.last().unwrap().t, 0.1);
    }

    #[test]
    fn minmod_recovers_linear_slopes_and_flattens_extrema() {
        let eos = air();
        let grid = Grid1D::from_fn(10, 0.0, 1.0, eos, |x| {
            MixturePrimitive::from_values(0.2 + 0.5 * x, 1.0, 0.0, 1.0 + (x - 0.45).abs(), 1.0, 0.0, 1.0)
        })
        .unwrap();
        let edges = muscl_reconstruct(&grid, Boundary::Transmissive, Limiter::Minmod).unwrap();
        let prims = grid.primitives().unwrap();
        for i in 1..9 {
            assert_relative_eq!(edges[i].right.alpha1 - edges[i].left.alpha1, 0.05, max_relative = 1e-10);
        }
        // cell 4 (x = 0.45) is a pressure minimum
        assert_eq!(edges[4].left.phase1.p, prims[4].phase1.p);
        assert_eq!(edges[4].right.phase1.p, prims[4].phase1.p);
    }

    #[test]
    fn reconstruction_falls_back_when_inadmissible() {
        let eos = air();
        let grid = Grid1D::from_fn(6, 0.0, 1.0, eos, |x| {
            let p = if x < 0.5 { 1e-3 * (1.0 + x) } else { 10.0 * (1.0 + x) };
            MixturePrimitive::from_values(0.5, 1.0, 0.0, p, 1.0, 0.0, 1.0)
        })
        .unwrap();
        let edges = muscl_reconstruct(&grid, Boundary::Transmissive, Limiter::Minmod).unwrap();
        for e in &edges {
            assert!(e.left.validate(&eos).is_ok() && e.right.validate(&eos).is_ok());
        }
    }

    #[test]
    fn oversized_step_is_rejected() {
        let (grid, config) = shock_tube(16, Boundary::Periodic);
        let dt = dt_cfl(&grid, &config).unwrap();
        assert!(matches!(step(&grid, &config, 4.0 * dt), Err(Error::Precondition(_))));
    }
}
