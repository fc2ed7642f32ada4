//! L-stable two-stage SDIRK integrator with Newton iterations on a
//! finite-difference Jacobian, plus Richardson extrapolation. Used as the
//! stiff-ODE oracle for relaxation limits.

use nalgebra::{DMatrix, DVector};

const G: f64 = 1.0 - std::f64::consts::FRAC_1_SQRT_2;

fn implicit_stage(f: &dyn Fn(&DVector<f64>) -> DVector<f64>, base: &DVector<f64>, hg: f64) -> DVector<f64> {
    // solve z = base + hg f(z); return f(z)
    let n = base.len();
    let mut z = base.clone() + f(base) * hg;
    for _ in 0..50 {
        let fz = f(&z);
        let r = &z - base - &fz * hg;
        let mut jac = DMatrix::<f64>::identity(n, n);
        for j in 0..n {
            let h = 1e-7 * (1.0 + z[j].abs());
            let mut zp = z.clone();
            zp[j] += h;
            let df = (f(&zp) - &fz) / h;
            for i in 0..n {
                jac[(i, j)] -= hg * df[i];
            }
        }
        let dz = jac.lu().solve(&r).expect("nonsingular Newton matrix");
        z -= &dz;
        if dz.amax() <= 1e-15 * (1.0 + z.amax()) {
            break;
        }
    }
    (&z - base) / hg
}

pub fn sdirk2(f: &dyn Fn(&DVector<f64>) -> DVector<f64>, y0: &DVector<f64>, steps: &[f64]) -> DVector<f64> {
    let mut y = y0.clone();
    for &h in steps {
        let k1 = implicit_stage(f, &y, h * G);
        let base = &y + &k1 * (h * (1.0 - G));
        let k2 = implicit_stage(f, &base, h * G);
        y += (k1 * (1.0 - G) + k2 * G) * h;
    }
    y
}

/// Geometric step sequence from `h0` growing by `ratio` until `t_end`.
pub fn geometric_steps(h0: f64, ratio: f64, t_end: f64) -> Vec<f64> {
    let mut steps = Vec::new();
    let mut t = 0.0;
    let mut h = h0;
    while t < t_end {
        let hh = h.min(t_end - t);
        steps.push(hh);
        t += hh;
        h *= ratio;
    }
    steps
}

/// Richardson-extrapolated SDIRK2 over the given step sequence.
pub fn integrate(f: &dyn Fn(&DVector<f64>) -> DVector<f64>, y0: &DVector<f64>, steps: &[f64]) -> DVector<f64> {
    let coarse = sdirk2(f, y0, steps);
    let fine_steps: Vec<f64> = steps.iter().flat_map(|&h| [0.5 * h, 0.5 * h]).collect();
    let fine = sdirk2(f, y0, &fine_steps);
    (fine * 4.0 - coarse) / 3.0
}
