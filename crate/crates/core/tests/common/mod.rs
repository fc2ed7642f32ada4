#![allow(dead_code)]

pub mod exact_euler;
pub mod stiff;

use nalgebra::SMatrix;

pub type M7 = SMatrix<f64, 7, 7>;

pub fn to_na(m: &[[f64; 7]; 7]) -> M7 {
    M7::from_fn(|i, j| m[i][j])
}

/// Central difference gradient with step `1e-6 (1 + |x_j|)`; independent of the
/// library's own finite-difference helper.
pub fn gradient(x: &[f64; 7], f: impl Fn(&[f64; 7]) -> f64) -> [f64; 7] {
    let mut g = [0.0; 7];
    for j in 0..7 {
        let h = 1e-6 * (1.0 + x[j].abs());
        let mut xp = *x;
        let mut xm = *x;
        xp[j] += h;
        xm[j] -= h;
        g[j] = (f(&xp) - f(&xm)) / (xp[j] - xm[j]);
    }
    g
}

pub fn dot(a: &[f64; 7], b: &[f64; 7]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
