//! Small dense complex linear algebra for 2x2 states and 4x4 superoperators.
//!
//! Everything in this crate lives in dimension 2 or 4, so the routines here
//! are hand-rolled fixed-size implementations: closed-form Hermitian 2x2
//! eigenvalues, Gaussian elimination with partial pivoting, and a
//! characteristic-polynomial eigensolver (Faddeev-LeVerrier coefficients,
//! Durand-Kerner roots, inverse-iteration eigenvectors) for general complex
//! 4x4 matrices.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Dense complex 2x2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct M2(pub [[C64; 2]; 2]);

impl M2 {
    pub fn zero() -> Self {
        M2([[ZERO; 2]; 2])
    }

    pub fn identity() -> Self {
        M2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        M2([[cr(m[0][0]), cr(m[0][1])], [cr(m[1][0]), cr(m[1][1])]])
    }

    pub fn diag(a: C64, b: C64) -> Self {
        M2([[a, ZERO], [ZERO, b]])
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn adjoint(&self) -> Self {
        M2([
            [self.0[0][0].conj(), self.0[1][0].conj()],
            [self.0[0][1].conj(), self.0[1][1].conj()],
        ])
    }

    pub fn transpose(&self) -> Self {
        M2([[self.0[0][0], self.0[1][0]], [self.0[0][1], self.0[1][1]]])
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for e in row.iter_mut() {
                *e *= s;
            }
        }
        out
    }

    /// (A + A†)/2.
    pub fn hermitize(&self) -> Self {
        (*self + self.adjoint()).scale(cr(0.5))
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|e| e.norm())
            .fold(0.0, f64::max)
    }

    pub fn herm_residual(&self) -> f64 {
        (*self - self.adjoint()).max_abs()
    }

    /// Eigenvalues of a Hermitian 2x2 matrix, ascending.
    ///
    /// Closed form from trace and determinant; the caller is responsible for
    /// the matrix actually being (numerically) Hermitian.
    pub fn herm_eigvals(&self) -> [f64; 2] {
        let tr = self.trace().re;
        let det = (self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]).re;
        let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
        [tr / 2.0 - disc, tr / 2.0 + disc]
    }

    /// Trace distance (1/2)||A - B||_1 for Hermitian A, B.
    pub fn trace_distance(&self, other: &M2) -> f64 {
        let d = (*self - *other).hermitize();
        let ev = d.herm_eigvals();
        0.5 * (ev[0].abs() + ev[1].abs())
    }

    /// Flatten row-major to (gg, ge, eg, ee).
    pub fn to_vec4(&self) -> V4 {
        [self.0[0][0], self.0[0][1], self.0[1][0], self.0[1][1]]
    }

    pub fn from_vec4(v: &V4) -> Self {
        M2([[v[0], v[1]], [v[2], v[3]]])
    }

    /// Reshape a left (row) eigenvector of a flattened superoperator into the
    /// matrix sigma with Tr[sigma rho] equal to the plain dot product of the
    /// row vector with the flattened rho.
    pub fn left_from_vec4(w: &V4) -> Self {
        M2([[w[0], w[2]], [w[1], w[3]]])
    }
}

impl Add for M2 {
    type Output = M2;
    fn add(self, rhs: M2) -> M2 {
        let mut out = self;
        for (r, row) in out.0.iter_mut().enumerate() {
            for (c, e) in row.iter_mut().enumerate() {
                *e += rhs.0[r][c];
            }
        }
        out
    }
}

impl Sub for M2 {
    type Output = M2;
    fn sub(self, rhs: M2) -> M2 {
        let mut out = self;
        for (r, row) in out.0.iter_mut().enumerate() {
            for (c, e) in row.iter_mut().enumerate() {
                *e -= rhs.0[r][c];
            }
        }
        out
    }
}

impl Mul for M2 {
    type Output = M2;
    fn mul(self, rhs: M2) -> M2 {
        let mut out = M2::zero();
        for r in 0..2 {
            for c in 0..2 {
                let mut s = ZERO;
                for k in 0..2 {
                    s += self.0[r][k] * rhs.0[k][c];
                }
                out.0[r][c] = s;
            }
        }
        out
    }
}

pub type V4 = [C64; 4];

pub fn v4_zero() -> V4 {
    [ZERO; 4]
}

pub fn v4_dot(a: &V4, b: &V4) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

pub fn v4_norm(a: &V4) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Dense complex 4x4 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct M4(pub [[C64; 4]; 4]);

impl M4 {
    pub fn zero() -> Self {
        M4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn diag(d: &V4) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = d[i];
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                m.0[r][c] = self.0[c][r];
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = self.transpose();
        for row in m.0.iter_mut() {
            for e in row.iter_mut() {
                *e = e.conj();
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for e in row.iter_mut() {
                *e *= s;
            }
        }
        out
    }

    pub fn matvec(&self, v: &V4) -> V4 {
        let mut out = v4_zero();
        for r in 0..4 {
            for k in 0..4 {
                out[r] += self.0[r][k] * v[k];
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|e| e.norm())
            .fold(0.0, f64::max)
    }

    /// Coefficients (c0, c1, c2, c3) of det(xI - A) = x^4 + c3 x^3 + c2 x^2 + c1 x + c0
    /// via the Faddeev-LeVerrier recursion.
    pub fn char_poly(&self) -> [C64; 4] {
        let a = *self;
        let mut m = M4::identity();
        let mut coeffs = [ZERO; 4]; // coeffs[k] multiplies x^k
        let mut cprev;
        // c_{n-k} = -tr(A M_{k-1}) / k
        let mut acc = a;
        cprev = -acc.trace();
        coeffs[3] = cprev;
        for k in 2..=4 {
            m = acc + M4::identity().scale(cprev);
            acc = a * m;
            cprev = -acc.trace() / cr(k as f64);
            coeffs[4 - k] = cprev;
        }
        let _ = m;
        coeffs
    }

    /// All four eigenvalues, via Durand-Kerner on the characteristic
    /// polynomial followed by Newton polishing. Order is unspecified.
    pub fn eigenvalues(&self) -> V4 {
        let coef = self.char_poly();
        // p(x) = x^4 + coef[3] x^3 + coef[2] x^2 + coef[1] x + coef[0]
        let p = |x: C64| -> C64 {
            (((x + coef[3]) * x + coef[2]) * x + coef[1]) * x + coef[0]
        };
        let dp = |x: C64| -> C64 {
            ((cr(4.0) * x + cr(3.0) * coef[3]) * x + cr(2.0) * coef[2]) * x + coef[1]
        };
        // scale-aware starting points on a circle
        let radius = 1.0
            + coef
                .iter()
                .map(|cc| cc.norm())
                .fold(0.0, f64::max);
        let mut roots: V4 = core::array::from_fn(|k| {
            let ang = 0.7 + 2.0 * std::f64::consts::PI * (k as f64) / 4.0;
            cr(radius) * c(ang.cos(), ang.sin())
        });
        for _ in 0..200 {
            let mut delta: f64 = 0.0;
            for i in 0..4 {
                let mut denom = ONE;
                for j in 0..4 {
                    if j != i {
                        denom *= roots[i] - roots[j];
                    }
                }
                if denom.norm() == 0.0 {
                    denom = c(1e-300, 0.0);
                }
                let step = p(roots[i]) / denom;
                roots[i] -= step;
                delta = delta.max(step.norm());
            }
            if delta < 1e-15 * radius {
                break;
            }
        }
        // Newton polish
        for r in roots.iter_mut() {
            for _ in 0..5 {
                let d = dp(*r);
                if d.norm() < 1e-300 {
                    break;
                }
                let step = p(*r) / d;
                *r -= step;
                if step.norm() < 1e-16 * radius {
                    break;
                }
            }
        }
        roots
    }

    /// Right eigenvector for an eigenvalue estimate, by inverse iteration.
    pub fn right_eigenvector(&self, lambda: C64) -> V4 {
        inverse_iteration(self, lambda)
    }

    /// Left (row) eigenvector w with w A = lambda w, as a plain vector
    /// (no conjugation): inverse iteration on the transpose.
    pub fn left_eigenvector(&self, lambda: C64) -> V4 {
        inverse_iteration(&self.transpose(), lambda)
    }
}

impl Add for M4 {
    type Output = M4;
    fn add(self, rhs: M4) -> M4 {
        let mut out = self;
        for (r, row) in out.0.iter_mut().enumerate() {
            for (c, e) in row.iter_mut().enumerate() {
                *e += rhs.0[r][c];
            }
        }
        out
    }
}

impl Sub for M4 {
    type Output = M4;
    fn sub(self, rhs: M4) -> M4 {
        let mut out = self;
        for (r, row) in out.0.iter_mut().enumerate() {
            for (c, e) in row.iter_mut().enumerate() {
                *e -= rhs.0[r][c];
            }
        }
        out
    }
}

impl Mul for M4 {
    type Output = M4;
    fn mul(self, rhs: M4) -> M4 {
        let mut out = M4::zero();
        for r in 0..4 {
            for c in 0..4 {
                let mut s = ZERO;
                for k in 0..4 {
                    s += self.0[r][k] * rhs.0[k][c];
                }
                out.0[r][c] = s;
            }
        }
        out
    }
}

/// Solve A x = b for complex n x n systems with n <= 4 by Gaussian
/// elimination with partial pivoting. Returns None when a pivot underflows
/// completely (exactly singular input).
pub fn solve_n(a: &[[C64; 4]], b: &[C64], n: usize) -> Option<Vec<C64>> {
    let mut m = vec![[ZERO; 5]; n];
    for r in 0..n {
        m[r][..n].copy_from_slice(&a[r][..n]);
        m[r][n] = b[r];
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm()))
            .unwrap();
        if m[piv][col].norm() == 0.0 {
            return None;
        }
        m.swap(col, piv);
        for r in (col + 1)..n {
            let f = m[r][col] / m[col][col];
            for k in col..=n {
                let sub = f * m[col][k];
                m[r][k] -= sub;
            }
        }
    }
    let mut x = vec![ZERO; n];
    for col in (0..n).rev() {
        let mut s = m[col][n];
        for k in (col + 1)..n {
            s -= m[col][k] * x[k];
        }
        x[col] = s / m[col][col];
    }
    Some(x)
}

fn inverse_iteration(a: &M4, lambda: C64) -> V4 {
    // shift slightly off the eigenvalue so the system stays solvable; the
    // near-singular solve amplifies the null direction.
    let scale = a.max_abs().max(1.0);
    let shift = lambda + cr(1e-14 * scale);
    let mut b = *a;
    for i in 0..4 {
        b.0[i][i] -= shift;
    }
    let mut v: V4 = [cr(0.5), cr(0.52), cr(0.47), cr(0.51)];
    for _ in 0..4 {
        let rows: Vec<[C64; 4]> = b.0.to_vec();
        match solve_n(&rows, &v, 4) {
            Some(x) => {
                let n = v4_norm(&[x[0], x[1], x[2], x[3]]);
                if !n.is_finite() || n == 0.0 {
                    break;
                }
                v = [x[0] / cr(n), x[1] / cr(n), x[2] / cr(n), x[3] / cr(n)];
            }
            None => break,
        }
    }
    // fix the overall phase: largest component real positive
    let k = (0..4)
        .max_by(|&i, &j| v[i].norm().total_cmp(&v[j].norm()))
        .unwrap();
    let ph = v[k] / cr(v[k].norm());
    for e in v.iter_mut() {
        *e /= ph;
    }
    v
}
