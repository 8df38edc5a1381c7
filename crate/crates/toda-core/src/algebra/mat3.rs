//! Complex 3×3 matrices, the universal carrier for Lie-algebra and group
//! elements in this crate.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

/// The primitive sixth root of unity ε = e^{iπ/3}. Every phase in the
/// twisted algebra derives from this single constant.
pub fn epsilon() -> C64 {
    C64::from_polar(1.0, PI / 3.0)
}

/// ε^k for any integer k.
pub fn epsilon_pow(k: i64) -> C64 {
    C64::from_polar(1.0, PI / 3.0 * k as f64)
}

/// Dense complex 3×3 matrix with finite entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat3 {
    e: [[C64; 3]; 3],
}

impl CMat3 {
    /// Builds a matrix from rows, rejecting NaN/Inf entries.
    pub fn from_rows(rows: [[C64; 3]; 3]) -> Self {
        let m = CMat3 { e: rows };
        assert!(m.is_finite(), "matrix entries must be finite");
        m
    }

    pub fn zero() -> Self {
        CMat3 { e: [[C64::new(0.0, 0.0); 3]; 3] }
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.e[i][i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(a: C64, b: C64, c: C64) -> Self {
        let mut m = Self::zero();
        m.e[0][0] = a;
        m.e[1][1] = b;
        m.e[2][2] = c;
        m
    }

    /// Elementary matrix with a single 1 at (row, col), zero-indexed.
    pub fn unit(row: usize, col: usize) -> Self {
        let mut m = Self::zero();
        m.e[row][col] = C64::new(1.0, 0.0);
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.e[i][j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.e[i][j] = v;
    }

    pub fn is_finite(&self) -> bool {
        self.e
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] = self.e[j][i];
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        let mut m = *self;
        for row in m.e.iter_mut() {
            for z in row.iter_mut() {
                *z = z.conj();
            }
        }
        m
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.conj().transpose()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        for row in m.e.iter_mut() {
            for z in row.iter_mut() {
                *z *= s;
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        self.e[0][0] + self.e[1][1] + self.e[2][2]
    }

    pub fn det(&self) -> C64 {
        let e = &self.e;
        e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
            - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
            + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0])
    }

    /// Inverse by the adjugate formula; panics on a singular matrix in
    /// debug builds, returns a matrix of infinities otherwise.
    pub fn inverse(&self) -> Self {
        let e = &self.e;
        let d = self.det();
        debug_assert!(d.norm() > 1e-300, "inverse of a singular matrix");
        let cof = |r1: usize, c1: usize, r2: usize, c2: usize| {
            e[r1][c1] * e[r2][c2] - e[r1][c2] * e[r2][c1]
        };
        let adj = [
            [cof(1, 1, 2, 2), -cof(0, 1, 2, 2), cof(0, 1, 1, 2)],
            [-cof(1, 0, 2, 2), cof(0, 0, 2, 2), -cof(0, 0, 1, 2)],
            [cof(1, 0, 2, 1), -cof(0, 0, 2, 1), cof(0, 0, 1, 1)],
        ];
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] = adj[i][j] / d;
            }
        }
        m
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.e
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entrywise imaginary part in absolute value.
    pub fn max_imag(&self) -> f64 {
        self.e
            .iter()
            .flatten()
            .map(|z| z.im.abs())
            .fold(0.0, f64::max)
    }

    /// Entrywise real part.
    pub fn real_part(&self) -> [[f64; 3]; 3] {
        let mut r = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                r[i][j] = self.e[i][j].re;
            }
        }
        r
    }

    pub fn col(&self, j: usize) -> [C64; 3] {
        [self.e[0][j], self.e[1][j], self.e[2][j]]
    }

    pub fn mul_vec(&self, v: [C64; 3]) -> [C64; 3] {
        let mut out = [C64::new(0.0, 0.0); 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i] += self.e[i][j] * v[j];
            }
        }
        out
    }

    pub fn commutator(&self, other: &CMat3) -> CMat3 {
        *self * *other - *other * *self
    }

    /// Matrix exponential by scaling-and-squaring on a plain Taylor series.
    /// Used as an independent oracle and for constant-coefficient flows.
    pub fn expm(&self) -> Self {
        let norm = self.norm();
        let squarings = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let a = self.scale(C64::new(1.0 / f64::powi(2.0, squarings as i32), 0.0));
        let mut term = Self::identity();
        let mut sum = Self::identity();
        for k in 1..=24 {
            term = (term * a).scale(C64::new(1.0 / k as f64, 0.0));
            sum = sum + term;
            if term.norm() < 1e-18 {
                break;
            }
        }
        for _ in 0..squarings {
            sum = sum * sum;
        }
        sum
    }
}

impl Add for CMat3 {
    type Output = CMat3;
    fn add(self, rhs: CMat3) -> CMat3 {
        let mut m = self;
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] += rhs.e[i][j];
            }
        }
        m
    }
}

impl Sub for CMat3 {
    type Output = CMat3;
    fn sub(self, rhs: CMat3) -> CMat3 {
        let mut m = self;
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] -= rhs.e[i][j];
            }
        }
        m
    }
}

impl Mul for CMat3 {
    type Output = CMat3;
    fn mul(self, rhs: CMat3) -> CMat3 {
        let mut m = CMat3::zero();
        for i in 0..3 {
            for k in 0..3 {
                let a = self.e[i][k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..3 {
                    m.e[i][j] += a * rhs.e[k][j];
                }
            }
        }
        m
    }
}

impl Neg for CMat3 {
    type Output = CMat3;
    fn neg(self) -> CMat3 {
        self.scale(C64::new(-1.0, 0.0))
    }
}

/// P₀ — the symmetric conjugator appearing throughout the classification.
pub fn p0() -> CMat3 {
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    CMat3::from_rows([[o, one, o], [one, o, o], [o, o, -one]])
}

/// The σ̂-conjugator P = diag(ε², ε⁴, −1)·P₀; satisfies P² = I.
pub fn p_sigma() -> CMat3 {
    let o = C64::new(0.0, 0.0);
    CMat3::from_rows([
        [o, epsilon_pow(2), o],
        [epsilon_pow(4), o, o],
        [o, o, C64::new(1.0, 0.0)],
    ])
}

/// I₂,₁ = diag(1, 1, −1).
pub fn i21() -> CMat3 {
    CMat3::diag(C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(-1.0, 0.0))
}

/// Ω = diag(ε⁴, ε², 1); Ad(Ω) realizes σ̂².
pub fn omega_sq() -> CMat3 {
    CMat3::diag(epsilon_pow(4), epsilon_pow(2), C64::new(1.0, 0.0))
}
