//! Two-dimensional linear algebra: points, vectors, 2x2 matrices, and a
//! log-scaled matrix representation for long derivative products.

use crate::math;

/// A point of the phase space (torus coordinates or plane coordinates).
pub type Point = [f64; 2];

/// A tangent vector.
pub type Vec2 = [f64; 2];

#[inline]
pub fn add(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn sub(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn scale(a: Vec2, s: f64) -> Vec2 {
    [a[0] * s, a[1] * s]
}

#[inline]
pub fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn cross(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn norm(a: Vec2) -> f64 {
    math::hypot(a[0], a[1])
}

/// Rotates by +90 degrees.
#[inline]
pub fn perp(a: Vec2) -> Vec2 {
    [-a[1], a[0]]
}

/// Unit vector in the direction of `a`, or `None` for the zero vector.
pub fn normalize(a: Vec2) -> Option<Vec2> {
    let n = norm(a);
    if n > 0.0 && n.is_finite() {
        Some([a[0] / n, a[1] / n])
    } else {
        None
    }
}

/// Sign convention for lines: first nonzero component positive.
pub fn canonical_direction(v: Vec2) -> Vec2 {
    if v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0) {
        [-v[0], -v[1]]
    } else {
        v
    }
}

/// Distance between two lines through the origin spanned by unit vectors,
/// measured as the sine of the angle between them (Grassmannian chordal
/// distance for one-dimensional subspaces).
pub fn line_distance(a: Vec2, b: Vec2) -> f64 {
    math::abs(cross(a, b)).min(1.0)
}

/// Acute angle in `[0, π/2]` between two (not necessarily unit) directions.
pub fn acute_angle(a: Vec2, b: Vec2) -> f64 {
    let c = math::abs(dot(a, b)) / (norm(a) * norm(b));
    math::acos(c)
}

/// Row-major 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub m: [[f64; 2]; 2],
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        m: [[1.0, 0.0], [0.0, 1.0]],
    };

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { m: [[a, b], [c, d]] }
    }

    pub fn from_columns(c0: Vec2, c1: Vec2) -> Self {
        Self::new(c0[0], c1[0], c0[1], c1[1])
    }

    pub fn column(&self, j: usize) -> Vec2 {
        [self.m[0][j], self.m[1][j]]
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let a = &self.m;
        let b = &o.m;
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.m[0][0], self.m[1][0], self.m[0][1], self.m[1][1])
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn scaled(&self, s: f64) -> Mat2 {
        Mat2::new(
            self.m[0][0] * s,
            self.m[0][1] * s,
            self.m[1][0] * s,
            self.m[1][1] * s,
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.m
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0_f64, |acc, &x| acc.max(math::abs(x)))
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        Some(Mat2::new(
            self.m[1][1] / d,
            -self.m[0][1] / d,
            -self.m[1][0] / d,
            self.m[0][0] / d,
        ))
    }

    /// Singular values `(σ_max, σ_min)`. The smaller one is recovered from the
    /// determinant to avoid cancellation.
    pub fn singular_values(&self) -> (f64, f64) {
        let [[a, b], [c, d]] = self.m;
        let e = (a + d) / 2.0;
        let f = (a - d) / 2.0;
        let g = (c + b) / 2.0;
        let h = (c - b) / 2.0;
        let q = math::hypot(e, h);
        let r = math::hypot(f, g);
        let s_max = q + r;
        let s_min = if s_max > 0.0 {
            math::abs(self.det()) / s_max
        } else {
            0.0
        };
        (s_max, s_min)
    }

    /// Unit right singular vector belonging to the largest singular value.
    pub fn top_right_singular_vector(&self) -> Vec2 {
        let s = self.transpose().mul(self);
        let p = s.m[0][0];
        let q = s.m[0][1];
        let r = s.m[1][1];
        let angle = 0.5 * math::atan2(2.0 * q, p - r);
        canonical_direction([math::cos(angle), math::sin(angle)])
    }

    /// QR factorisation with non-negative diagonal in `R`. Returns `None` when
    /// the first column vanishes.
    pub fn qr(&self) -> Option<(Mat2, Mat2)> {
        let c0 = self.column(0);
        let c1 = self.column(1);
        let r11 = norm(c0);
        if r11 == 0.0 || !r11.is_finite() {
            return None;
        }
        let q1 = scale(c0, 1.0 / r11);
        let mut q2 = perp(q1);
        let mut r22 = dot(q2, c1);
        if r22 < 0.0 {
            q2 = scale(q2, -1.0);
            r22 = -r22;
        }
        let r12 = dot(q1, c1);
        Some((Mat2::from_columns(q1, q2), Mat2::new(r11, r12, 0.0, r22)))
    }
}

/// Eigenvalues of a real 2x2 matrix, either a real pair or a complex-conjugate
/// pair given by its modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Eigenvalues {
    Real(f64, f64),
    Complex { modulus: f64 },
}

impl Mat2 {
    pub fn eigenvalues(&self) -> Eigenvalues {
        let tr = self.trace();
        let det = self.det();
        let disc = tr * tr / 4.0 - det;
        if disc >= 0.0 {
            let root = math::sqrt(disc);
            let half = tr / 2.0;
            let big = if half >= 0.0 { half + root } else { half - root };
            let small = if big != 0.0 { det / big } else { half - root };
            Eigenvalues::Real(big, small)
        } else {
            Eigenvalues::Complex {
                modulus: math::sqrt(det),
            }
        }
    }

    /// Unit eigenvector for a real eigenvalue `mu`.
    pub fn eigenvector(&self, mu: f64) -> Option<Vec2> {
        let [[a, b], [c, d]] = self.m;
        // Rows of (M - mu I) are orthogonal to the eigenvector; use the larger.
        let r0 = [a - mu, b];
        let r1 = [c, d - mu];
        let row = if norm(r0) >= norm(r1) { r0 } else { r1 };
        // M = mu I: every direction is an eigenvector.
        normalize([-row[1], row[0]])
            .or(Some([1.0, 0.0]))
            .map(canonical_direction)
    }
}

/// A matrix stored as `exp(log_scale) * normalized` with `|normalized|_max = 1`,
/// plus the exact `log|det|` tracked separately so that the small singular
/// value and small eigenvalue never underflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledMatrix {
    pub normalized: Mat2,
    pub log_scale: f64,
    pub log_abs_det: f64,
}

impl ScaledMatrix {
    pub fn identity() -> Self {
        Self {
            normalized: Mat2::IDENTITY,
            log_scale: 0.0,
            log_abs_det: 0.0,
        }
    }

    pub fn from_matrix(m: &Mat2) -> Self {
        let mut s = Self {
            normalized: *m,
            log_scale: 0.0,
            log_abs_det: math::ln(math::abs(m.det())),
        };
        s.renormalize();
        s
    }

    fn renormalize(&mut self) {
        let mx = self.normalized.max_abs();
        if mx > 0.0 && mx.is_finite() {
            self.normalized = self.normalized.scaled(1.0 / mx);
            self.log_scale += math::ln(mx);
        }
    }

    /// `later * self`.
    pub fn then(&self, later: &ScaledMatrix) -> ScaledMatrix {
        let mut s = ScaledMatrix {
            normalized: later.normalized.mul(&self.normalized),
            log_scale: self.log_scale + later.log_scale,
            log_abs_det: self.log_abs_det + later.log_abs_det,
        };
        s.renormalize();
        s
    }

    /// `(log σ_max, log σ_min)`.
    pub fn log_singular_values(&self) -> (f64, f64) {
        let (s_max, _) = self.normalized.singular_values();
        let log_max = self.log_scale + math::ln(s_max);
        (log_max, self.log_abs_det - log_max)
    }

    /// Logarithms of the eigenvalue moduli, larger first.
    pub fn log_eigen_moduli(&self) -> (f64, f64) {
        match self.normalized.eigenvalues() {
            Eigenvalues::Real(big, _) => {
                let log_big = self.log_scale + math::ln(math::abs(big));
                (log_big, self.log_abs_det - log_big)
            }
            Eigenvalues::Complex { .. } => {
                let half = self.log_abs_det / 2.0;
                (half, half)
            }
        }
    }

    /// Dense value; only meaningful while `log_scale` is moderate.
    pub fn to_matrix(&self) -> Mat2 {
        self.normalized.scaled(math::exp(self.log_scale))
    }
}
