//! Model invariants bundled as a runnable property suite.

use std::fmt;

use rand::Rng;

use crate::eigen::{self, AnalysisVars, WaveId};
use crate::eos::EosParams;
use crate::error::{Branch, Result};
use crate::lift::{self, LiftInputs};
use crate::linalg;
use crate::relaxation::{self, RelaxationParams};
use crate::sample;
use crate::solver::{self, Boundary, Diagnostics, Grid1D, SolverConfig};
use crate::state::{
    cons_to_prim, prim_to_cons, total_entropy_density, Closure, EosPair, MixturePrimitive, Phase,
};
use crate::waves;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}::{}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.module,
            self.name,
            self.detail
        )
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    pub seed: u64,
    /// Random states per sampled property.
    pub samples: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { seed: 2024, samples: 200 }
    }
}

fn record(module: &'static str, name: &'static str, worst: f64, tol: f64) -> CheckResult {
    CheckResult {
        module,
        name,
        passed: worst <= tol,
        detail: format!("worst {worst:.3e} (tolerance {tol:.1e})"),
    }
}

fn from_result(module: &'static str, name: &'static str, r: Result<CheckResult>) -> CheckResult {
    r.unwrap_or_else(|e| CheckResult {
        module,
        name,
        passed: false,
        detail: format!("error: {e}"),
    })
}

/// Runs every check in the suite.
pub fn run_all(opts: &CheckOptions) -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.extend(eos_checks(opts));
    out.extend(state_checks(opts));
    out.extend(eigen_checks(opts));
    out.extend(wave_checks(opts));
    out.extend(relaxation_checks(opts));
    out.extend(lift_checks(opts));
    out.extend(solver_checks());
    out
}

pub fn eos_checks(opts: &CheckOptions) -> Vec<CheckResult> {
    let mut rng = sample::seeded(opts.seed);
    let mut quad = 0.0_f64;
    let mut gibbs = 0.0_f64;
    for _ in 0..opts.samples.min(100) {
        let eos: EosParams<f64> = sample::random_eos(&mut rng);
        let (rho, p) = (rng.gen_range(0.2..5.0), rng.gen_range(0.2..5.0));
        let s = eos.entropy_unchecked(rho, p);
        let closed = eos.riemann_function(s, p).unwrap_or(f64::NAN);
        let numeric = eos.riemann_function_quadrature(s, p, 1e-12).unwrap_or(f64::NAN);
        quad = quad.max((closed - numeric).abs() / closed.abs().max(1.0));
        // T ds = de + p dτ along an arbitrary direction
        let h = 1e-6;
        let (r2, p2) = (rho * (1.0 + h), p * (1.0 + 0.5 * h));
        let ds = eos.entropy_unchecked(r2, p2) - eos.entropy_unchecked(rho, p);
        let de = eos.internal_energy_unchecked(r2, p2) - eos.internal_energy_unchecked(rho, p);
        let dtau = 1.0 / r2 - 1.0 / rho;
        let t = eos.temperature_unchecked(rho, p);
        gibbs = gibbs.max((t * ds - de - p * dtau).abs() / (de.abs() + p * dtau.abs()));
    }
    vec![
        record("eos", "riemann_function_quadrature", quad, 1e-8),
        record("eos", "gibbs_relation", gibbs, 1e-5),
    ]
}

pub fn state_checks(opts: &CheckOptions) -> Vec<CheckResult> {
    let mut rng = sample::seeded(opts.seed + 1);
    let mut roundtrip = 0.0_f64;
    let mut work = 0.0_f64;
    for _ in 0..opts.samples * 50 {
        let eos = sample::random_eos_pair::<f64, _>(&mut rng);
        let u = sample::random_state::<f64, _>(&mut rng);
        let mix = u.mixture();
        let (p1, p2) = (u.phase1.p, u.phase2.p);
        let w = Closure::NewModel.interfacial_work(&u);
        let rhs = Closure::NewModel.interfacial_pressure(&u) * mix.u - mix.y1 * mix.y2 * mix.w * (p1 - p2);
        let scale = (p1.abs() + p2.abs()) * (u.phase1.u.abs() + u.phase2.u.abs()) + f64::MIN_POSITIVE;
        work = work.max((w - rhs).abs() / scale);
        if let Ok(back) = prim_to_cons(&u, &eos).and_then(|q| cons_to_prim(&q, &eos)) {
            for (a, b) in [
                (u.phase1.rho, back.phase1.rho),
                (u.phase1.p, back.phase1.p),
                (u.phase2.u, back.phase2.u),
                (u.phase2.p, back.phase2.p),
            ] {
                roundtrip = roundtrip.max((a - b).abs() / a.abs().max(1.0));
            }
        } else {
            roundtrip = f64::INFINITY;
        }
    }
    vec![
        record("state", "interfacial_work_identity", work, 1e-13),
        record("state", "primitive_conserved_roundtrip", roundtrip, 1e-12),
    ]
}

pub fn eigen_checks(opts: &CheckOptions) -> Vec<CheckResult> {
    let mut rng = sample::seeded(opts.seed + 2);
    let threshold = eigen::DEFAULT_RESONANCE_THRESHOLD;
    let body = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<[f64; 6]> {
        let mut worst = [0.0_f64; 6];
        for _ in 0..opts.samples {
            let (eos, u) = sample::random_nonresonant::<f64, _>(rng, 0.05);
            let m = eigen::assemble_quasilinear(&u, &eos).m;
            let es = eigen::eigenstructure(&u, &eos, threshold)?;
            let lam = {
                let mut d = linalg::zeros::<f64, 7>();
                for i in 0..7 {
                    d[i][i] = es.lambda[i];
                }
                d
            };
            let res = linalg::sub(&linalg::matmul(&m, &es.r), &linalg::matmul(&es.r, &lam));
            worst[0] = worst[0].max(linalg::frobenius(&res) / linalg::frobenius(&m));

            let classes = eigen::classify_fields(&u, &eos, threshold)?;
            for c in classes {
                match c.wave.phase().filter(|_| c.wave.branch().is_some()) {
                    Some(k) => {
                        let expected = 0.5 * (eos.get(k).gamma + 1.0);
                        worst[2] = worst[2].max((c.nonlinearity.abs() - expected).abs());
                    }
                    None => worst[1] = worst[1].max(c.nonlinearity.abs()),
                }
            }

            let sym = eigen::symmetrizer(&u, &eos, threshold)?;
            let pm = linalg::matmul(&sym.p, &m);
            let asym = linalg::frobenius(&linalg::sub(&pm, &linalg::transpose(&pm)));
            worst[3] = worst[3].max(asym / (linalg::frobenius(&sym.p) * linalg::frobenius(&m)));
            let min_eig = linalg::symmetric_eigenvalues(&sym.p)[0];
            if !(min_eig > 0.0) {
                worst[4] = f64::INFINITY;
            }

            let x = AnalysisVars::from_primitive(&u, &eos).0;
            for w in WaveId::ALL {
                let r = es.column(w);
                let mut grads = [[0.0; 7]; 6];
                for (i, g) in grads.iter_mut().enumerate() {
                    *g = eigen::fd_gradient(&x, |y| {
                        let p = AnalysisVars(*y).to_primitive(&eos)?;
                        Ok(waves::riemann_invariants(w, &p, &eos)?[i])
                    })?;
                    let d: f64 = (0..7).map(|j| g[j] * r[j]).sum();
                    let scale: f64 = (0..7).map(|j| (g[j] * r[j]).abs()).sum::<f64>().max(1.0);
                    worst[5] = worst[5].max(d.abs() / scale);
                }
                let sv = linalg::singular_values(&grads);
                let smax = sv.iter().cloned().fold(0.0, f64::max);
                let mut sorted = sv;
                sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
                if !(sorted[5] > 1e-8 * smax) {
                    worst[4] = f64::INFINITY;
                }
            }
        }
        Ok(worst)
    };
    match body(&mut rng) {
        Ok(w) => vec![
            record("eigen", "eigen_residual", w[0], 1e-10),
            record("eigen", "linear_degeneracy", w[1], 1e-7),
            record("eigen", "genuine_nonlinearity", w[2], 1e-5),
            record("eigen", "symmetrizer_symmetry", w[3], 1e-10),
            record("eigen", "positivity_and_rank", w[4], 0.0),
            record("waves", "riemann_invariant_orthogonality", w[5], 1e-6),
        ],
        Err(e) => vec![from_result("eigen", "eigenstructure", Err(e))],
    }
}

pub fn wave_checks(opts: &CheckOptions) -> Vec<CheckResult> {
    let mut rng = sample::seeded(opts.seed + 3);
    let run = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<CheckResult> {
        let mut worst = 0.0_f64;
        let mut verdicts = true;
        for _ in 0..opts.samples {
            let eos = sample::random_eos_pair::<f64, _>(rng);
            let u = sample::random_state::<f64, _>(rng);
            let k = if rng.gen_bool(0.5) { Phase::One } else { Phase::Two };
            let p_r = u.phase(k).p * rng.gen_range(1.1..4.0);
            let br = waves::hugoniot_state(&eos, &u, k, p_r)?;
            for b in [Branch::Plus, Branch::Minus] {
                let c = br.branch(b);
                worst = worst.max(waves::max_residual(&waves::rankine_hugoniot_residual(c, &eos)?));
            }
            // compressive: the denser state is downstream
            let ok = waves::admissible(&br.minus, &eos, 1e-10)?;
            let rev = waves::admissible(&br.minus.swapped(), &eos, 1e-10)?;
            verdicts &= ok.admissible && ok.entropy_production > 0.0 && !rev.admissible;
        }
        let mut r = record("waves", "rankine_hugoniot", worst, 1e-10);
        if !verdicts {
            r.passed = false;
            r.detail.push_str("; admissibility verdict wrong");
        }
        Ok(r)
    };
    vec![from_result("waves", "rankine_hugoniot", run(&mut rng))]
}

pub fn relaxation_checks(opts: &CheckOptions) -> Vec<CheckResult> {
    let mut rng = sample::seeded(opts.seed + 4);
    let params = RelaxationParams::finite(1.0, 1.0, 1.0).expect("valid params");
    let run = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<Vec<CheckResult>> {
        let mut negative = 0.0_f64;
        let mut conservation = 0.0_f64;
        let mut equilibrium = 0.0_f64;
        let mut entropy_drop = 0.0_f64;
        for _ in 0..opts.samples {
            let eos = sample::random_eos_pair::<f64, _>(rng);
            let u = sample::random_state::<f64, _>(rng);
            for c in Closure::ALL {
                for term in relaxation::entropy_production_terms(&u, &eos, &params, c) {
                    negative = negative.max(-term);
                }
                let q = prim_to_cons(&u, &eos)?;
                let v = relaxation::relax_velocity_instant(&q, c);
                let r = relaxation::relax_pressure_instant(&v, &eos, c)?;
                let e_scale = q.eps1.abs() + q.eps2.abs();
                let m_scale = q.q1.abs() + q.q2.abs() + (q.m1 + q.m2) * 1e-3;
                conservation = conservation
                    .max((r.total_energy() - q.total_energy()).abs() / e_scale)
                    .max((r.total_momentum() - q.total_momentum()).abs() / m_scale)
                    .max(if r.m1 == q.m1 && r.m2 == q.m2 { 0.0 } else { 1.0 });
                let w = cons_to_prim(&r, &eos)?;
                let ps = w.phase1.p.abs() + eos.phase1.p_inf + w.phase2.p.abs() + eos.phase2.p_inf;
                equilibrium = equilibrium
                    .max((w.phase1.p - w.phase2.p).abs() / ps)
                    .max((w.phase1.u - w.phase2.u).abs() / (1.0 + w.phase1.u.abs()));
                let s0 = total_entropy_density(&u, &eos);
                entropy_drop = entropy_drop.max((s0 - total_entropy_density(&w, &eos)) / s0.abs().max(1.0));
            }
        }
        Ok(vec![
            record("relaxation", "entropy_production_sign", negative, 0.0),
            record("relaxation", "instant_conservation", conservation, 1e-13),
            record("relaxation", "instant_equilibrium", equilibrium, 1e-10),
            record("relaxation", "instant_entropy", entropy_drop, 1e-10),
        ])
    };
    run(&mut rng).unwrap_or_else(|e| vec![from_result("relaxation", "instant", Err(e))])
}

pub fn lift_checks(opts: &CheckOptions) -> Vec<CheckResult> {
    let mut rng = sample::seeded(opts.seed + 5);
    let mut ortho = 0.0_f64;
    let mut collinear = 0.0_f64;
    let vec3 = |rng: &mut rand_chacha::ChaCha8Rng| -> [f64; 3] {
        [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]
    };
    for _ in 0..opts.samples * 5 {
        let y1 = rng.gen_range(0.05..0.95);
        let input: LiftInputs<f64> = LiftInputs {
            rho: rng.gen_range(0.2..5.0),
            y1,
            y2: 1.0 - y1,
            grad_alpha1: vec3(&mut rng),
            v: vec3(&mut rng),
            w: vec3(&mut rng),
        };
        let f = lift::lift_force(&input);
        let scale = input.rho * lift::dot(&input.v, &input.v).sqrt() * lift::dot(&input.grad_alpha1, &input.grad_alpha1).sqrt() * lift::dot(&input.w, &input.w);
        ortho = ortho.max(lift::dot(&f, &input.w).abs() / scale.max(f64::MIN_POSITIVE));
        let one_d = LiftInputs {
            grad_alpha1: [input.grad_alpha1[0], 0.0, 0.0],
            v: [input.v[0], 0.0, 0.0],
            w: [input.w[0], 0.0, 0.0],
            ..input
        };
        collinear = collinear.max(lift::lift_force(&one_d).iter().fold(0.0_f64, |a, b| a.max(b.abs())));
    }
    let x = [0.3, -0.2, 0.7];
    let e1 = lift::involution_residual::<f64>(&x, 1e-2);
    let e2 = lift::involution_residual::<f64>(&x, 5e-3);
    let order = (e1 / e2).log2();
    vec![
        record("lift", "orthogonality", ortho, 1e-14),
        record("lift", "one_dimensional_degeneracy", collinear, 0.0),
        CheckResult {
            module: "lift",
            name: "involution_order",
            passed: order >= 1.8,
            detail: format!("observed order {order:.3} (need >= 1.8)"),
        },
    ]
}

pub fn solver_checks() -> Vec<CheckResult> {
    let run = || -> Result<Vec<CheckResult>> {
        let eos = EosPair::new(EosParams::ideal(1.4)?, EosParams::new(3.0, 2.0, 1.5, 0.2)?);
        let uniform: MixturePrimitive<f64> = MixturePrimitive::from_values(0.3, 1.0, 0.7, 1.0, 2.0, -0.2, 1.0);
        let grid = Grid1D::from_fn(32, 0.0, 1.0, eos, |_| uniform)?;
        let config = SolverConfig { boundary: Boundary::Periodic, ..Default::default() };
        let dt = solver::dt_cfl(&grid, &config)?;
        let next = solver::step(&grid, &config, dt)?.grid;
        let mut drift = 0.0_f64;
        for (a, b) in grid.cells.iter().zip(&next.cells) {
            for (x, y) in a.to_array().iter().zip(b.to_array()) {
                drift = drift.max((x - y).abs() / x.abs().max(1.0));
            }
        }

        let hi = MixturePrimitive::from_values(0.6, 1.0, 0.0, 2.0, 2.0, 0.2, 1.5);
        let lo = MixturePrimitive::from_values(0.4, 0.5, 0.0, 1.0, 1.5, 0.0, 1.0);
        let mut tube = Grid1D::from_fn(100, 0.0, 1.0, eos, |x| if (0.3..0.7).contains(&x) { hi } else { lo })?;
        let d0 = Diagnostics::measure(&tube, 0, 0.0, 0.0, 0)?;
        let mut prev = d0;
        let mut entropy_drop = 0.0_f64;
        for k in 1..=100 {
            let dt = solver::dt_cfl(&tube, &config)?;
            let adv = solver::advance(&tube, &config, &RelaxationParams::off(), dt)?;
            tube = adv.grid;
            let d = Diagnostics::measure(&tube, k, 0.0, dt, 0)?;
            entropy_drop = entropy_drop.max((prev.entropy - d.entropy) / d0.entropy.abs().max(1.0));
            prev = d;
        }
        let cons = [
            (prev.mass1 - d0.mass1).abs() / d0.mass1,
            (prev.mass2 - d0.mass2).abs() / d0.mass2,
            (prev.energy - d0.energy).abs() / d0.energy,
            (prev.momentum - d0.momentum).abs() / d0.energy,
        ]
        .into_iter()
        .fold(0.0_f64, f64::max);
        Ok(vec![
            record("solver", "uniform_state_preservation", drift, 1e-14),
            record("solver", "periodic_conservation", cons, 1e-12),
            record("solver", "entropy_monotonicity", entropy_drop, 1e-10),
        ])
    };
    run().unwrap_or_else(|e| vec![from_result("solver", "run", Err(e))])
}
