mod common;

use approx::assert_relative_eq;
use rand::Rng;
use twofluid::eigen::WaveId;
use twofluid::eos::EosParams;
use twofluid::sample::{random_eos_pair, random_state};
use twofluid::state::{EosPair, MixturePrimitive, Phase};
use twofluid::waves;
use twofluid::{Branch, Closure};

/// Standard stiffened-gas Hugoniot density ratio written in terms of
/// `P = p + p∞`.
fn oracle_density(eos: &EosParams<f64>, rho_l: f64, p_l: f64, p_r: f64) -> f64 {
    let (g, pl, pr) = (eos.gamma, p_l + eos.p_inf, p_r + eos.p_inf);
    rho_l * ((g + 1.0) * pr + (g - 1.0) * pl) / ((g - 1.0) * pr + (g + 1.0) * pl)
}

fn compressive(c: &waves::ShockCandidate<f64>, b: Branch) -> waves::ShockCandidate<f64> {
    match b {
        Branch::Minus => *c,
        Branch::Plus => c.swapped(),
    }
}

fn air_pair() -> EosPair<f64> {
    EosPair::new(EosParams::ideal(1.4).unwrap(), EosParams::new(3.0, 2.0, 1.2, 0.1).unwrap())
}

#[test]
fn pressure_ratio_two_shock_matches_closed_form_hugoniot() {
    let eos = air_pair();
    let left = MixturePrimitive::from_values(0.4, 1.0, 0.2, 1.0, 2.0, -0.3, 1.5);
    let br = waves::hugoniot_state(&eos, &left, Phase::One, 2.0).unwrap();
    let expect = oracle_density(&eos.phase1, 1.0, 1.0, 2.0);
    assert_relative_eq!(expect, 1.0 * (2.4 * 2.0 + 0.4) / (0.4 * 2.0 + 2.4), max_relative = 1e-15);
    for b in [Branch::Plus, Branch::Minus] {
        let c = br.branch(b);
        assert_relative_eq!(c.right.phase1.rho, expect, max_relative = 1e-14);
        assert_eq!(c.right.phase2, left.phase2);
        assert_eq!(c.right.alpha1, left.alpha1);
        let res = waves::max_residual(&waves::rankine_hugoniot_residual(c, &eos).unwrap());
        assert!(res <= 1e-10, "{res}");
        // the given state is upstream: left of a u - c shock, right of a u + c shock
        let shock = compressive(c, b);
        let a = waves::admissible(&shock, &eos, 1e-10).unwrap();
        assert!(a.admissible && a.lax && a.entropy_production > 0.0, "{a:?}");
        assert_eq!(a.family, b);
        let rev = waves::admissible(&shock.swapped(), &eos, 1e-10).unwrap();
        assert!(!rev.admissible && rev.entropy_production < 0.0);
        assert_relative_eq!(rev.entropy_production, -a.entropy_production, max_relative = 1e-12);

        let mut bad = *c;
        bad.right.phase1.p *= 1.01;
        let res = waves::max_residual(&waves::rankine_hugoniot_residual(&bad, &eos).unwrap());
        assert!(res > 1e-4, "{res}");
        assert!(waves::admissible(&bad, &eos, 1e-10).is_err());
    }
}

#[test]
fn random_hugoniot_shocks_close_and_are_antisymmetric() {
    let mut rng = common::rng(21);
    for _ in 0..300 {
        let eos = random_eos_pair::<f64, _>(&mut rng);
        let left = random_state(&mut rng);
        let k = if rng.gen_bool(0.5) { Phase::One } else { Phase::Two };
        let law = eos.get(k);
        let pl = left.phase(k).p;
        let p_r = pl + rng.gen_range(0.05..4.0) * (pl + law.p_inf);
        let br = waves::hugoniot_state(&eos, &left, k, p_r).unwrap();
        let expect = oracle_density(law, left.phase(k).rho, pl, p_r);
        let bisect = waves::hugoniot_density_bisection(law, left.phase(k).rho, pl, p_r).unwrap();
        assert_relative_eq!(bisect, expect, max_relative = 1e-11);
        for b in [Branch::Plus, Branch::Minus] {
            let c = br.branch(b);
            assert_relative_eq!(c.right.phase(k).rho, expect, max_relative = 1e-13);
            let res = waves::max_residual(&waves::rankine_hugoniot_residual(c, &eos).unwrap());
            assert!(res <= 1e-10, "{res}");
            let shock = compressive(c, b);
            let fwd = waves::admissible(&shock, &eos, 1e-10).unwrap();
            let rev = waves::admissible(&shock.swapped(), &eos, 1e-10).unwrap();
            assert!(fwd.admissible && fwd.lax);
            assert!(!rev.admissible);
        }
    }
}

#[test]
fn zero_strength_shock_is_the_acoustic_limit() {
    let eos = air_pair();
    let left = MixturePrimitive::from_values(0.4, 1.0, 0.2, 1.0, 2.0, -0.3, 1.5);
    let br = waves::hugoniot_state(&eos, &left, Phase::Two, 1.5).unwrap();
    let c2 = eos.phase2.sound_speed(2.0, 1.5).unwrap();
    assert_eq!(br.plus.right, left);
    assert_relative_eq!(br.plus.sigma, -0.3 + c2, max_relative = 1e-14);
    assert_relative_eq!(br.minus.sigma, -0.3 - c2, max_relative = 1e-14);
    let a = waves::admissible(&br.plus, &eos, 1e-12).unwrap();
    assert!(a.admissible);
    assert!(a.entropy_production.abs() < 1e-14);
}

#[test]
fn rarefaction_curves_keep_invariants_and_match_isentropic_closed_form() {
    let eos: EosPair<f64> = EosPair::new(EosParams::ideal(1.4).unwrap(), EosParams::ideal(1.67).unwrap());
    let left = MixturePrimitive::from_values(0.3, 1.0, 0.5, 1.0, 0.5, -0.2, 0.8);
    let cl = eos.phase1.sound_speed(1.0, 1.0).unwrap();
    for wave in [WaveId::Acoustic1Plus, WaveId::Acoustic1Minus] {
        let inv0 = waves::riemann_invariants(wave, &left, &eos).unwrap();
        for &p in &[0.9, 0.6, 0.3, 0.1] {
            let st = waves::rarefaction_curve(&eos, &left, wave, p).unwrap();
            let inv = waves::riemann_invariants(wave, &st, &eos).unwrap();
            for i in 0..6 {
                assert!((inv[i] - inv0[i]).abs() <= 1e-10 * (1.0 + inv0[i].abs()), "{i}");
            }
            let c = eos.phase1.sound_speed(st.phase1.rho, p).unwrap();
            let expect = match wave.branch().unwrap() {
                Branch::Plus => 0.5 + 2.0 / 0.4 * (c - cl),
                Branch::Minus => 0.5 - 2.0 / 0.4 * (c - cl),
            };
            assert!((st.phase1.u - expect).abs() <= 1e-10);
            assert_eq!(st.phase2, left.phase2);
        }
        assert_eq!(waves::rarefaction_curve(&eos, &left, wave, 1.0).unwrap(), left);
    }
    assert!(waves::rarefaction_curve(&eos, &left, WaveId::Contact1, 0.5).is_err());
}

#[test]
fn volume_fraction_jump_is_not_a_shock() {
    let eos = air_pair();
    let left = MixturePrimitive::from_values(0.4, 1.0, 0.2, 1.0, 2.0, -0.3, 1.5);
    let mut c = waves::hugoniot_state(&eos, &left, Phase::One, 1.5).unwrap().plus;
    c.right.alpha1 = 0.5;
    assert!(waves::rankine_hugoniot_residual(&c, &eos).is_err());
}

#[test]
fn total_pressure_is_continuous_across_the_interface_but_p_i_is_not() {
    let mut rng = common::rng(22);
    let mut saw_jump = false;
    for _ in 0..50 {
        let eos = random_eos_pair::<f64, _>(&mut rng);
        let mut left: MixturePrimitive<f64> = random_state(&mut rng);
        // keep the relative velocity subsonic so the interface state exists
        left.phase2.u = left.phase1.u + rng.gen_range(-0.3..0.3);
        let a_r = (left.alpha1 + rng.gen_range(-0.1..0.1)).clamp(0.05, 0.95);
        let Ok(right) = waves::interface_state(&eos, &left, a_r) else { continue };
        let il = waves::riemann_invariants(WaveId::Interface, &left, &eos).unwrap();
        let ir = waves::riemann_invariants(WaveId::Interface, &right, &eos).unwrap();
        for i in 0..6 {
            assert!((il[i] - ir[i]).abs() <= 1e-10 * (1.0 + il[i].abs()), "{i}");
        }
        let pi_l = Closure::NewModel.interfacial_pressure(&left);
        let pi_r = Closure::NewModel.interfacial_pressure(&right);
        if (pi_l - pi_r).abs() > 1e-6 * pi_l.abs().max(1.0) {
            saw_jump = true;
        }
    }
    assert!(saw_jump);
}
