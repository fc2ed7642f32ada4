//! Exact Riemann solver for the single-phase ideal-gas Euler equations
//! (two-rarefaction / two-shock Newton iteration on the star pressure).

#[derive(Debug, Clone, Copy)]
pub struct Euler {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

pub struct ExactRiemann {
    gamma: f64,
    left: Euler,
    right: Euler,
    p_star: f64,
    u_star: f64,
}

impl ExactRiemann {
    pub fn new(gamma: f64, left: Euler, right: Euler) -> Self {
        let cl = (gamma * left.p / left.rho).sqrt();
        let cr = (gamma * right.p / right.rho).sqrt();
        let f = |p: f64, s: &Euler, c: f64| -> (f64, f64) {
            if p > s.p {
                let a = 2.0 / ((gamma + 1.0) * s.rho);
                let b = (gamma - 1.0) / (gamma + 1.0) * s.p;
                let q = (a / (p + b)).sqrt();
                ((p - s.p) * q, q * (1.0 - 0.5 * (p - s.p) / (b + p)))
            } else {
                let r = p / s.p;
                let e = (gamma - 1.0) / (2.0 * gamma);
                (
                    2.0 * c / (gamma - 1.0) * (r.powf(e) - 1.0),
                    1.0 / (s.rho * c) * r.powf(-(gamma + 1.0) / (2.0 * gamma)),
                )
            }
        };
        let mut p = 0.5 * (left.p + right.p);
        for _ in 0..100 {
            let (fl, dl) = f(p, &left, cl);
            let (fr, dr) = f(p, &right, cr);
            let g = fl + fr + right.u - left.u;
            let dp = g / (dl + dr);
            let next = (p - dp).max(1e-14);
            if (next - p).abs() < 1e-15 * p {
                p = next;
                break;
            }
            p = next;
        }
        let (fl, _) = f(p, &left, cl);
        let (fr, _) = f(p, &right, cr);
        let u_star = 0.5 * (left.u + right.u) + 0.5 * (fr - fl);
        Self {
            gamma,
            left,
            right,
            p_star: p,
            u_star,
        }
    }

    /// Solution at similarity coordinate `xi = (x - x0) / t`.
    pub fn sample(&self, xi: f64) -> Euler {
        let g = self.gamma;
        let gm = (g - 1.0) / (g + 1.0);
        if xi <= self.u_star {
            let s = self.left;
            let c = (g * s.p / s.rho).sqrt();
            if self.p_star > s.p {
                let speed = s.u - c * ((g + 1.0) / (2.0 * g) * self.p_star / s.p + (g - 1.0) / (2.0 * g)).sqrt();
                if xi < speed {
                    s
                } else {
                    let r = self.p_star / s.p;
                    Euler { rho: s.rho * (r + gm) / (gm * r + 1.0), u: self.u_star, p: self.p_star }
                }
            } else {
                let c_star = c * (self.p_star / s.p).powf((g - 1.0) / (2.0 * g));
                let head = s.u - c;
                let tail = self.u_star - c_star;
                if xi < head {
                    s
                } else if xi > tail {
                    Euler { rho: s.rho * (self.p_star / s.p).powf(1.0 / g), u: self.u_star, p: self.p_star }
                } else {
                    let u = 2.0 / (g + 1.0) * (c + (g - 1.0) / 2.0 * s.u + xi);
                    let cc = 2.0 / (g + 1.0) * (c + (g - 1.0) / 2.0 * (s.u - xi));
                    let rho = s.rho * (cc / c).powf(2.0 / (g - 1.0));
                    Euler { rho, u, p: s.p * (cc / c).powf(2.0 * g / (g - 1.0)) }
                }
            }
        } else {
            let s = self.right;
            let c = (g * s.p / s.rho).sqrt();
            if self.p_star > s.p {
                let speed = s.u + c * ((g + 1.0) / (2.0 * g) * self.p_star / s.p + (g - 1.0) / (2.0 * g)).sqrt();
                if xi > speed {
                    s
                } else {
                    let r = self.p_star / s.p;
                    Euler { rho: s.rho * (r + gm) / (gm * r + 1.0), u: self.u_star, p: self.p_star }
                }
            } else {
                let c_star = c * (self.p_star / s.p).powf((g - 1.0) / (2.0 * g));
                let head = s.u + c;
                let tail = self.u_star + c_star;
                if xi > head {
                    s
                } else if xi < tail {
                    Euler { rho: s.rho * (self.p_star / s.p).powf(1.0 / g), u: self.u_star, p: self.p_star }
                } else {
                    let u = 2.0 / (g + 1.0) * (-c + (g - 1.0) / 2.0 * s.u + xi);
                    let cc = 2.0 / (g + 1.0) * (c - (g - 1.0) / 2.0 * (s.u - xi));
                    let rho = s.rho * (cc / c).powf(2.0 / (g - 1.0));
                    Euler { rho, u, p: s.p * (cc / c).powf(2.0 * g / (g - 1.0)) }
                }
            }
        }
    }

    pub fn p_star(&self) -> f64 {
        self.p_star
    }
}
