//! Pointwise lift-force and `v = ∇ζ` transport algebra.
//!
//! Gradients are stored row-wise: `grad[i][j] = ∂ᵢ f_j`.

use crate::error::{Error, Result};
use crate::num::Real;

pub type Vec3<T> = [T; 3];
pub type Mat3<T> = [[T; 3]; 3];

pub fn dot<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftInputs<T> {
    pub rho: T,
    pub y1: T,
    pub y2: T,
    pub grad_alpha1: Vec3<T>,
    pub v: Vec3<T>,
    pub w: Vec3<T>,
}

impl<T: Real> LiftInputs<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho > T::zero()) {
            return Err(Error::domain(format!("non-positive density {}", self.rho)));
        }
        if (self.y1 + self.y2 - T::one()).abs() > T::lit(64.0) * T::epsilon() {
            return Err(Error::domain("mass fractions must sum to one"));
        }
        Ok(())
    }
}

/// `f = ρY₁Y₂ (v ⊗ ∇α₁ - ∇α₁ ⊗ v) W = ρY₁Y₂ ((∇α₁·W) v - (v·W) ∇α₁)`.
pub fn lift_force<T: Real>(input: &LiftInputs<T>) -> Vec3<T> {
    let k = input.rho * input.y1 * input.y2;
    let (v, g, w) = (&input.v, &input.grad_alpha1, &input.w);
    let mut f = [T::zero(); 3];
    for i in 0..3 {
        let row = (0..3).fold(T::zero(), |acc, j| acc + (v[i] * g[j] - g[i] * v[j]) * w[j]);
        f[i] = k * row;
    }
    f
}

/// `∂ₜv = -(u·∇)v - (∇u)v + ∇((p₁ - p₂)/ρ)`, with `((∇u)v)ᵢ = Σⱼ ∂ᵢu_j v_j`
/// so that for curl-free `v` the right-hand side is the gradient
/// `∇((p₁ - p₂)/ρ - u·v)`.
pub fn v_rhs<T: Real>(
    v: &Vec3<T>,
    grad_u: &Mat3<T>,
    grad_dp_over_rho: &Vec3<T>,
    u: &Vec3<T>,
    grad_v: &Mat3<T>,
) -> Vec3<T> {
    let mut out = *grad_dp_over_rho;
    for j in 0..3 {
        let transport = (0..3).fold(T::zero(), |acc, i| acc + u[i] * grad_v[i][j]);
        let stretch = (0..3).fold(T::zero(), |acc, k| acc + grad_u[j][k] * v[k]);
        out[j] = out[j] - transport - stretch;
    }
    out
}

/// Manufactured smooth fields with closed-form derivatives.
pub mod manufactured {
    use super::{Mat3, Vec3};
    use crate::num::Real;

    /// `ζ = sin x cos 2y sin z + ½ x y`; returns `(∇ζ, ∇∇ζ)`.
    pub fn potential<T: Real>(x: &Vec3<T>) -> (Vec3<T>, Mat3<T>) {
        let (sx, cx) = x[0].sin_cos();
        let (s2y, c2y) = (T::two() * x[1]).sin_cos();
        let (sz, cz) = x[2].sin_cos();
        let two = T::two();
        let four = T::lit(4.0);
        let half = T::half();
        let v = [
            cx * c2y * sz + half * x[1],
            -two * sx * s2y * sz + half * x[0],
            sx * c2y * cz,
        ];
        let hxy = -two * cx * s2y * sz + half;
        let hxz = cx * c2y * cz;
        let hyz = -two * sx * s2y * cz;
        let h = [
            [-sx * c2y * sz, hxy, hxz],
            [hxy, -four * sx * c2y * sz, hyz],
            [hxz, hyz, -sx * c2y * sz],
        ];
        (v, h)
    }

    /// `u = (sin y + z, cos z · x, sin(x + y))`; returns `(u, ∇u)`.
    pub fn velocity<T: Real>(x: &Vec3<T>) -> (Vec3<T>, Mat3<T>) {
        let (sy, cy) = x[1].sin_cos();
        let (sz, cz) = x[2].sin_cos();
        let (sxy, cxy) = (x[0] + x[1]).sin_cos();
        let u = [sy + x[2], cz * x[0], sxy];
        let g = [
            [T::zero(), cz, cxy],
            [cy, T::zero(), cxy],
            [T::one(), -sz * x[0], T::zero()],
        ];
        (u, g)
    }

    /// `∇π` for `π = (p₁ - p₂)/ρ = cos(x + 2y) sin z`.
    pub fn pressure_gap_gradient<T: Real>(x: &Vec3<T>) -> Vec3<T> {
        let (s, c) = (x[0] + T::two() * x[1]).sin_cos();
        let (sz, cz) = x[2].sin_cos();
        [-s * sz, -T::two() * s * sz, c * cz]
    }

    /// `∂ₜv` evaluated from the manufactured fields.
    pub fn rhs<T: Real>(x: &Vec3<T>) -> Vec3<T> {
        let (v, gv) = potential(x);
        let (u, gu) = velocity(x);
        super::v_rhs(&v, &gu, &pressure_gap_gradient(x), &u, &gv)
    }
}

/// Central-difference curl of `∂ₜv` at `x` with spacing `h`. Since `∂ₜv` is
/// a gradient for curl-free `v`, the result is the truncation error, O(h²).
pub fn involution_residual<T: Real>(x: &Vec3<T>, h: T) -> T {
    let d = |axis: usize, comp: usize| {
        let mut xp = *x;
        let mut xm = *x;
        xp[axis] = xp[axis] + h;
        xm[axis] = xm[axis] - h;
        (manufactured::rhs(&xp)[comp] - manufactured::rhs(&xm)[comp]) / (T::two() * h)
    };
    let curl = [d(1, 2) - d(2, 1), d(2, 0) - d(0, 2), d(0, 1) - d(1, 0)];
    dot(&curl, &curl).sqrt()
}

/// `f ∈ span{v, ∇α₁}` with coefficients `ρY₁Y₂(∇α₁·W, -(v·W))`.
pub fn lift_coefficients<T: Real>(input: &LiftInputs<T>) -> (T, T) {
    let k = input.rho * input.y1 * input.y2;
    (k * dot(&input.grad_alpha1, &input.w), -k * dot(&input.v, &input.w))
}

/// `(V·∇)v`: change of the transport term under a constant frame velocity
/// `V`, so that `v_rhs(u + V) + (V·∇)v = v_rhs(u)`.
pub fn galilean_transport_shift<T: Real>(frame: &Vec3<T>, grad_v: &Mat3<T>) -> Vec3<T> {
    let mut out = [T::zero(); 3];
    for j in 0..3 {
        out[j] = (0..3).fold(T::zero(), |acc, i| acc + frame[i] * grad_v[i][j]);
    }
    out
}
