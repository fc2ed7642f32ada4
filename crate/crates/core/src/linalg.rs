//! Small dense matrix helpers on fixed-size arrays.

use crate::error::{Error, Result};
use crate::num::Real;

pub type Mat<T, const N: usize> = [[T; N]; N];

pub fn zeros<T: Real, const N: usize>() -> Mat<T, N> {
    [[T::zero(); N]; N]
}

pub fn identity<T: Real, const N: usize>() -> Mat<T, N> {
    let mut m = zeros();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = T::one();
    }
    m
}

pub fn matmul<T: Real, const N: usize>(a: &Mat<T, N>, b: &Mat<T, N>) -> Mat<T, N> {
    let mut c = zeros();
    for i in 0..N {
        for k in 0..N {
            let aik = a[i][k];
            if aik == T::zero() {
                continue;
            }
            for j in 0..N {
                c[i][j] = c[i][j] + aik * b[k][j];
            }
        }
    }
    c
}

pub fn matvec<T: Real, const N: usize>(a: &Mat<T, N>, x: &[T; N]) -> [T; N] {
    let mut y = [T::zero(); N];
    for i in 0..N {
        y[i] = (0..N).map(|j| a[i][j] * x[j]).fold(T::zero(), |s, v| s + v);
    }
    y
}

pub fn transpose<T: Real, const N: usize>(a: &Mat<T, N>) -> Mat<T, N> {
    let mut t = zeros();
    for i in 0..N {
        for j in 0..N {
            t[j][i] = a[i][j];
        }
    }
    t
}

pub fn sub<T: Real, const N: usize>(a: &Mat<T, N>, b: &Mat<T, N>) -> Mat<T, N> {
    let mut c = *a;
    for i in 0..N {
        for j in 0..N {
            c[i][j] = c[i][j] - b[i][j];
        }
    }
    c
}

pub fn frobenius<T: Real, const N: usize>(a: &Mat<T, N>) -> T {
    a.iter()
        .flat_map(|r| r.iter())
        .fold(T::zero(), |s, &v| s + v * v)
        .sqrt()
}

/// Max column sum norm.
pub fn norm1<T: Real, const N: usize>(a: &Mat<T, N>) -> T {
    (0..N)
        .map(|j| (0..N).fold(T::zero(), |s, i| s + a[i][j].abs()))
        .fold(T::zero(), T::max)
}

/// LU factorization with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu<T, const N: usize> {
    lu: Mat<T, N>,
    perm: [usize; N],
    sign: T,
}

impl<T: Real, const N: usize> Lu<T, N> {
    pub fn new(a: &Mat<T, N>) -> Result<Self> {
        let mut lu = *a;
        let mut perm = [0usize; N];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i;
        }
        let mut sign = T::one();
        let scale = frobenius(a).max(T::min_positive_value());
        for k in 0..N {
            let (piv, pval) = (k..N)
                .map(|i| (i, lu[i][k].abs()))
                .fold((k, T::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pval <= T::epsilon() * T::lit(1e-3) * scale {
                return Err(Error::domain("singular matrix in LU factorization"));
            }
            if piv != k {
                lu.swap(piv, k);
                perm.swap(piv, k);
                sign = -sign;
            }
            for i in (k + 1)..N {
                let f = lu[i][k] / lu[k][k];
                lu[i][k] = f;
                for j in (k + 1)..N {
                    lu[i][j] = lu[i][j] - f * lu[k][j];
                }
            }
        }
        Ok(Self { lu, perm, sign })
    }

    pub fn solve(&self, b: &[T; N]) -> [T; N] {
        let mut x = [T::zero(); N];
        for i in 0..N {
            x[i] = b[self.perm[i]];
        }
        for i in 0..N {
            for j in 0..i {
                x[i] = x[i] - self.lu[i][j] * x[j];
            }
        }
        for i in (0..N).rev() {
            for j in (i + 1)..N {
                x[i] = x[i] - self.lu[i][j] * x[j];
            }
            x[i] = x[i] / self.lu[i][i];
        }
        x
    }

    pub fn determinant(&self) -> T {
        (0..N).fold(self.sign, |d, i| d * self.lu[i][i])
    }

    pub fn inverse(&self) -> Mat<T, N> {
        let mut inv = zeros();
        for j in 0..N {
            let mut e = [T::zero(); N];
            e[j] = T::one();
            let col = self.solve(&e);
            for i in 0..N {
                inv[i][j] = col[i];
            }
        }
        inv
    }
}

pub fn solve<T: Real, const N: usize>(a: &Mat<T, N>, b: &[T; N]) -> Result<[T; N]> {
    Ok(Lu::new(a)?.solve(b))
}

/// 1-norm condition number `‖A‖₁ ‖A⁻¹‖₁`; infinite when singular.
pub fn condition_number<T: Real, const N: usize>(a: &Mat<T, N>) -> T {
    match Lu::new(a) {
        Ok(lu) => norm1(a) * norm1(&lu.inverse()),
        Err(_) => T::infinity(),
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues<T: Real, const N: usize>(a: &Mat<T, N>) -> [T; N] {
    let mut m = *a;
    let scale = frobenius(a);
    for _sweep in 0..100 {
        let off = (0..N)
            .flat_map(|i| (0..N).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(T::zero(), |s, (i, j)| s + m[i][j] * m[i][j])
            .sqrt();
        if off <= T::epsilon() * T::lit(1e-2) * scale || off == T::zero() {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                if m[p][q] == T::zero() {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (T::two() * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..N {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..N {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut ev = [T::zero(); N];
    for i in 0..N {
        ev[i] = m[i][i];
    }
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

/// Singular values of a rectangular `R×C` matrix (R ≥ C) through the Gram
/// matrix, ascending.
pub fn singular_values<T: Real, const R: usize, const C: usize>(a: &[[T; C]; R]) -> [T; C] {
    let mut g = [[T::zero(); C]; C];
    for i in 0..C {
        for j in 0..C {
            g[i][j] = (0..R).fold(T::zero(), |s, k| s + a[k][i] * a[k][j]);
        }
    }
    let ev = symmetric_eigenvalues(&g);
    let mut sv = [T::zero(); C];
    for i in 0..C {
        sv[i] = ev[i].max(T::zero()).sqrt();
    }
    sv
}
