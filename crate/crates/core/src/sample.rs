//! Random admissible states for property checks.

use rand::Rng;

use crate::eigen::resonance_margin;
use crate::eos::EosParams;
use crate::num::Real;
use crate::state::{EosPair, MixturePrimitive, PhaseState};

pub fn random_eos<T: Real, R: Rng + ?Sized>(rng: &mut R) -> EosParams<T> {
    let gamma = rng.gen_range(1.2..3.0);
    let p_inf = if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(0.0..3.0) };
    let cv = rng.gen_range(0.5..2.0);
    let q = rng.gen_range(-1.0..1.0);
    EosParams::new(T::lit(gamma), T::lit(p_inf), T::lit(cv), T::lit(q))
        .expect("sampled parameters are admissible")
}

pub fn random_eos_pair<T: Real, R: Rng + ?Sized>(rng: &mut R) -> EosPair<T> {
    EosPair::new(random_eos(rng), random_eos(rng))
}

pub fn random_phase<T: Real, R: Rng + ?Sized>(rng: &mut R) -> PhaseState<T> {
    PhaseState::new(
        T::lit(rng.gen_range(0.2..5.0)),
        T::lit(rng.gen_range(-2.0..2.0)),
        T::lit(rng.gen_range(0.2..5.0)),
    )
}

pub fn random_state<T: Real, R: Rng + ?Sized>(rng: &mut R) -> MixturePrimitive<T> {
    MixturePrimitive::new(
        T::lit(rng.gen_range(0.05..0.95)),
        random_phase(rng),
        random_phase(rng),
    )
}

/// Draws a state (and EOS pair) whose resonance margin exceeds `min_margin`.
pub fn random_nonresonant<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    min_margin: f64,
) -> (EosPair<T>, MixturePrimitive<T>) {
    loop {
        let eos = random_eos_pair(rng);
        let u = random_state(rng);
        if resonance_margin(&u, &eos) > T::lit(min_margin) {
            return (eos, u);
        }
    }
}

/// Deterministic generator used by the property suite.
pub fn seeded(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_states_are_admissible() {
        let mut rng = seeded(1);
        for _ in 0..100 {
            let (eos, u) = random_nonresonant::<f64, _>(&mut rng, 0.05);
            u.validate(&eos).unwrap();
        }
    }
}
