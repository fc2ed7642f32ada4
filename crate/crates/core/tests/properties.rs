use proptest::prelude::*;
use twofluid::eigen;
use twofluid::eos::EosParams;
use twofluid::lift::{self, LiftInputs};
use twofluid::relaxation::{self, RelaxationParams};
use twofluid::state::{self, EosPair, MixturePrimitive, PhaseState};
use twofluid::waves;
use twofluid::{Branch, Closure, Phase};

fn eos_strategy() -> impl Strategy<Value = EosParams<f64>> {
    (1.05f64..4.0, prop_oneof![Just(0.0), 0.0f64..5.0], 0.2f64..3.0, -1.0f64..1.0)
        .prop_map(|(g, pi, cv, q)| EosParams::new(g, pi, cv, q).unwrap())
}

fn phase_strategy() -> impl Strategy<Value = PhaseState<f64>> {
    (0.05f64..10.0, -3.0f64..3.0, 0.05f64..10.0).prop_map(|(r, u, p)| PhaseState::new(r, u, p))
}

fn case() -> impl Strategy<Value = (EosPair<f64>, MixturePrimitive<f64>)> {
    (eos_strategy(), eos_strategy(), 0.01f64..0.99, phase_strategy(), phase_strategy())
        .prop_map(|(e1, e2, a, p1, p2)| (EosPair::new(e1, e2), MixturePrimitive::new(a, p1, p2)))
}

fn closure() -> impl Strategy<Value = Closure> {
    prop_oneof![Just(Closure::NewModel), Just(Closure::BnOriginal), Just(Closure::BnSaurel)]
}

fn vec3() -> impl Strategy<Value = [f64; 3]> {
    [-5.0f64..5.0, -5.0f64..5.0, -5.0f64..5.0]
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pressure_energy_round_trip((eos, rho, p) in eos_strategy().prop_flat_map(|e| (Just(e), 0.01f64..100.0, 0.01f64..100.0))) {
        let e = eos.internal_energy(rho, p).unwrap();
        let back = eos.pressure(rho, e).unwrap();
        prop_assert!((back - p).abs() <= 1e-14 * (p.abs() + eos.gamma * eos.p_inf) * 4.0);
    }

    #[test]
    fn conservative_round_trip((eos, u) in case()) {
        let q = state::prim_to_cons(&u, &eos).unwrap();
        let back = state::cons_to_prim(&q, &eos).unwrap();
        let a = [u.alpha1, u.phase1.rho, u.phase1.u, u.phase1.p, u.phase2.rho, u.phase2.u, u.phase2.p];
        let b = [back.alpha1, back.phase1.rho, back.phase1.u, back.phase1.p, back.phase2.rho, back.phase2.u, back.phase2.p];
        let scales = [1.0, u.phase1.rho, 1.0 + u.phase1.u.abs(), u.phase1.p.abs() + eos.phase1.p_inf,
            u.phase2.rho, 1.0 + u.phase2.u.abs(), u.phase2.p.abs() + eos.phase2.p_inf];
        for i in 0..7 {
            let tol = if i == 3 || i == 6 {
                // energy recovery subtracts the kinetic part
                let k = if i == 3 { &u.phase1 } else { &u.phase2 };
                1e-13 * (1.0 + k.rho * k.u * k.u / scales[i])
            } else {
                1e-13
            };
            prop_assert!((a[i] - b[i]).abs() <= tol * scales[i], "component {}: {} vs {}", i, a[i], b[i]);
        }
    }

    #[test]
    fn saturation_and_mass_fractions((_eos, u) in case()) {
        let m = u.mixture();
        prop_assert!((m.y1 + m.y2 - 1.0).abs() <= 1e-15);
        prop_assert_eq!(u.alpha1 + u.alpha2(), 1.0);
        prop_assert!((m.rho * m.u - u.partial_mass(Phase::One) * u.phase1.u - u.partial_mass(Phase::Two) * u.phase2.u).abs()
            <= 1e-13 * m.rho * (u.phase1.u.abs() + u.phase2.u.abs() + 1.0));
    }

    #[test]
    fn interfacial_work_identity((_eos, u) in case()) {
        let m = u.mixture();
        let lhs = Closure::NewModel.interfacial_work(&u);
        let rhs = Closure::NewModel.interfacial_pressure(&u) * m.u - m.y1 * m.y2 * m.w * (u.phase1.p - u.phase2.p);
        let scale = (u.phase1.p.abs() + u.phase2.p.abs()) * (u.phase1.u.abs() + u.phase2.u.abs()) + 1e-300;
        prop_assert!((lhs - rhs).abs() <= 1e-13 * scale);
    }

    #[test]
    fn galilean_shift((_eos, u) in case(), c in closure(), v in -5.0f64..5.0) {
        let s = u.galilean_shift(v);
        let (ui, pi, wi) = c.interfacial(&u);
        let (us, ps, ws) = c.interfacial(&s);
        let scale = 1.0 + u.phase1.u.abs() + u.phase2.u.abs() + v.abs();
        prop_assert!((us - ui - v).abs() <= 1e-14 * scale);
        prop_assert!((ps - pi).abs() <= 1e-15 * (1.0 + pi.abs()));
        prop_assert!((s.mixture().w - u.mixture().w).abs() <= 1e-14 * scale);
        prop_assert!((ws - wi - pi * v).abs() <= 1e-13 * scale * (u.phase1.p.abs() + u.phase2.p.abs()));
    }

    #[test]
    fn entropy_flux_forms_agree((eos, u) in case()) {
        let a = state::entropy_flux(&u, &eos);
        let b = state::entropy_flux_split(&u, &eos);
        let scale: f64 = [Phase::One, Phase::Two].iter()
            .map(|&k| (u.partial_mass(k) * u.thermo(&eos, k).s * u.phase(k).u).abs()).sum();
        prop_assert!((a - b).abs() <= 1e-12 * scale.max(1e-300));
    }

    #[test]
    fn relaxation_produces_entropy((eos, u) in case(), c in closure(),
        eps in (1e-3f64..10.0, 1e-3f64..10.0, 1e-3f64..10.0)) {
        let params = RelaxationParams::finite(eps.0, eps.1, eps.2).unwrap();
        let terms = relaxation::entropy_production_terms(&u, &eos, &params, c);
        for t in terms {
            prop_assert!(t >= -1e-12 * terms.iter().map(|x| x.abs()).sum::<f64>().max(1e-300), "{:?}", terms);
        }
    }

    #[test]
    fn instantaneous_projections_conserve((eos, u) in case(), c in closure()) {
        let q = state::prim_to_cons(&u, &eos).unwrap();
        let v = relaxation::relax_velocity_instant(&q, c);
        prop_assert_eq!(v.m1, q.m1);
        prop_assert_eq!(v.m2, q.m2);
        let mscale = q.q1.abs() + q.q2.abs() + 1e-300;
        prop_assert!((v.total_momentum() - q.total_momentum()).abs() <= 1e-13 * mscale);
        let escale = q.eps1.abs() + q.eps2.abs();
        prop_assert!((v.total_energy() - q.total_energy()).abs() <= 1e-13 * escale);
        prop_assert!(rel(v.q1 / v.m1, v.q2 / v.m2) <= 1e-12 || (v.q1 / v.m1 - v.q2 / v.m2).abs() <= 1e-13 * mscale);
        if let Ok(p) = relaxation::relax_pressure_instant(&q, &eos, c) {
            prop_assert!((p.total_energy() - q.total_energy()).abs() <= 1e-13 * escale);
            prop_assert_eq!(p.q1, q.q1);
            prop_assert_eq!(p.q2, q.q2);
            let pp = state::cons_to_prim(&p, &eos).unwrap();
            let pscale = pp.phase1.p.abs() + eos.phase1.p_inf + pp.phase2.p.abs() + eos.phase2.p_inf;
            prop_assert!((pp.phase1.p - pp.phase2.p).abs() <= 1e-10 * pscale);
        }
    }

    #[test]
    fn lift_force_is_orthogonal_and_antisymmetric(v in vec3(), g in vec3(), w in vec3(), rho in 0.1f64..10.0, y1 in 0.0f64..1.0) {
        let input = LiftInputs { rho, y1, y2: 1.0 - y1, grad_alpha1: g, v, w };
        let f = lift::lift_force(&input);
        let norm = |a: &[f64; 3]| lift::dot(a, a).sqrt();
        let scale = rho * norm(&v) * norm(&g) * norm(&w) * norm(&w) + 1e-300;
        prop_assert!(lift::dot(&f, &w).abs() <= 1e-14 * scale);
        let swapped = lift::lift_force(&LiftInputs { grad_alpha1: v, v: g, ..input });
        for k in 0..3 {
            prop_assert!((f[k] + swapped[k]).abs() <= 1e-14 * scale);
        }
        let one_d = LiftInputs { grad_alpha1: [g[0], 0.0, 0.0], v: [v[0], 0.0, 0.0], w: [w[0], 0.0, 0.0], ..input };
        prop_assert_eq!(lift::lift_force(&one_d), [0.0; 3]);
    }

    #[test]
    fn hugoniot_states_satisfy_jump_conditions((eos, u) in case(), strength in 0.0f64..5.0, phase2 in any::<bool>()) {
        let k = if phase2 { Phase::Two } else { Phase::One };
        let pl = u.phase(k).p;
        let p_r = pl + strength * (pl + eos.get(k).p_inf);
        let br = waves::hugoniot_state(&eos, &u, k, p_r).unwrap();
        for b in [Branch::Plus, Branch::Minus] {
            let c = br.branch(b);
            prop_assert!(waves::max_residual(&waves::rankine_hugoniot_residual(c, &eos).unwrap()) <= 1e-10);
            prop_assert_eq!(c.right.phase(k.other()), u.phase(k.other()));
        }
        let fwd = waves::admissible(&br.minus, &eos, 1e-10).unwrap();
        prop_assert!(fwd.admissible);
        if strength > 1e-3 {
            prop_assert!(!waves::admissible(&br.minus.swapped(), &eos, 1e-10).unwrap().admissible);
        }
    }

    #[test]
    fn eigenvectors_diagonalize((eos, u) in case()) {
        prop_assume!(eigen::resonance_margin(&u, &eos) > 0.05);
        let es = eigen::eigenstructure(&u, &eos, 1e-8).unwrap();
        let m = eigen::assemble_quasilinear(&u, &eos).m;
        let mut res = 0.0f64;
        let mut norm = 0.0f64;
        for i in 0..7 {
            for j in 0..7 {
                let mr: f64 = (0..7).map(|k| m[i][k] * es.r[k][j]).sum();
                res += (mr - es.r[i][j] * es.lambda[j]).powi(2);
                norm += m[i][j] * m[i][j];
            }
        }
        prop_assert!(res.sqrt() <= 1e-10 * norm.sqrt());
    }
}
