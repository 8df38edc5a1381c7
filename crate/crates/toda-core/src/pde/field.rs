//! Grid-sampled scalar fields over a rectangular domain.

use crate::{Error, Result};

/// Real scalar field sampled on a uniform rectangular grid, row-major in
/// the first coordinate: index (i, j) stores the value at
/// (a₀ + i·h_a, b₀ + j·h_b).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    values: Vec<f64>,
    origin: (f64, f64),
    spacing: (f64, f64),
    dims: (usize, usize),
}

impl ScalarField {
    pub fn zeros(origin: (f64, f64), spacing: (f64, f64), dims: (usize, usize)) -> Result<Self> {
        if dims.0 < 3 || dims.1 < 3 {
            return Err(Error::GridTooSmall(dims.0, dims.1));
        }
        assert!(spacing.0 > 0.0 && spacing.1 > 0.0, "spacing must be positive");
        Ok(ScalarField { values: vec![0.0; dims.0 * dims.1], origin, spacing, dims })
    }

    pub fn from_fn<F: FnMut(f64, f64) -> f64>(
        origin: (f64, f64),
        spacing: (f64, f64),
        dims: (usize, usize),
        mut f: F,
    ) -> Result<Self> {
        let mut field = Self::zeros(origin, spacing, dims)?;
        for i in 0..dims.0 {
            for j in 0..dims.1 {
                let v = f(field.a(i), field.b(j));
                field.set(i, j, v);
            }
        }
        Ok(field)
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    #[inline]
    pub fn origin(&self) -> (f64, f64) {
        self.origin
    }

    #[inline]
    pub fn spacing(&self) -> (f64, f64) {
        self.spacing
    }

    #[inline]
    pub fn a(&self, i: usize) -> f64 {
        self.origin.0 + self.spacing.0 * i as f64
    }

    #[inline]
    pub fn b(&self, j: usize) -> f64 {
        self.origin.1 + self.spacing.1 * j as f64
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.dims.1 + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[i * self.dims.1 + j] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Max |value| over grid points at least `margin` away from every edge.
    pub fn max_abs_interior(&self, margin: usize) -> f64 {
        let (na, nb) = self.dims;
        let mut m = 0.0f64;
        for i in margin..na.saturating_sub(margin) {
            for j in margin..nb.saturating_sub(margin) {
                m = m.max(self.get(i, j).abs());
            }
        }
        m
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> ScalarField {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v = f(*v));
        out
    }

    /// First derivative along the first coordinate, O(h²): centered in the
    /// interior, 3-point one-sided at the edges.
    pub fn deriv_a(&self) -> ScalarField {
        let (na, nb) = self.dims;
        let h = self.spacing.0;
        let mut out = self.clone();
        for j in 0..nb {
            for i in 0..na {
                let v = if i == 0 {
                    (-3.0 * self.get(0, j) + 4.0 * self.get(1, j) - self.get(2, j)) / (2.0 * h)
                } else if i == na - 1 {
                    (3.0 * self.get(na - 1, j) - 4.0 * self.get(na - 2, j)
                        + self.get(na - 3, j))
                        / (2.0 * h)
                } else {
                    (self.get(i + 1, j) - self.get(i - 1, j)) / (2.0 * h)
                };
                out.set(i, j, v);
            }
        }
        out
    }

    /// First derivative along the second coordinate, O(h²).
    pub fn deriv_b(&self) -> ScalarField {
        let (na, nb) = self.dims;
        let h = self.spacing.1;
        let mut out = self.clone();
        for i in 0..na {
            for j in 0..nb {
                let v = if j == 0 {
                    (-3.0 * self.get(i, 0) + 4.0 * self.get(i, 1) - self.get(i, 2)) / (2.0 * h)
                } else if j == nb - 1 {
                    (3.0 * self.get(i, nb - 1) - 4.0 * self.get(i, nb - 2)
                        + self.get(i, nb - 3))
                        / (2.0 * h)
                } else {
                    (self.get(i, j + 1) - self.get(i, j - 1)) / (2.0 * h)
                };
                out.set(i, j, v);
            }
        }
        out
    }

    /// Second derivative along the first coordinate, O(h²): centered in the
    /// interior, 4-point one-sided at the edges.
    pub fn second_a(&self) -> ScalarField {
        let (na, nb) = self.dims;
        let h2 = self.spacing.0 * self.spacing.0;
        let mut out = self.clone();
        for j in 0..nb {
            for i in 0..na {
                let v = if i == 0 {
                    (2.0 * self.get(0, j) - 5.0 * self.get(1, j) + 4.0 * self.get(2, j)
                        - self.get(3.min(na - 1), j))
                        / h2
                } else if i == na - 1 {
                    (2.0 * self.get(na - 1, j) - 5.0 * self.get(na - 2, j)
                        + 4.0 * self.get(na - 3, j)
                        - self.get(na.saturating_sub(4), j))
                        / h2
                } else {
                    (self.get(i + 1, j) - 2.0 * self.get(i, j) + self.get(i - 1, j)) / h2
                };
                out.set(i, j, v);
            }
        }
        out
    }

    /// Second derivative along the second coordinate, O(h²).
    pub fn second_b(&self) -> ScalarField {
        let (na, nb) = self.dims;
        let h2 = self.spacing.1 * self.spacing.1;
        let mut out = self.clone();
        for i in 0..na {
            for j in 0..nb {
                let v = if j == 0 {
                    (2.0 * self.get(i, 0) - 5.0 * self.get(i, 1) + 4.0 * self.get(i, 2)
                        - self.get(i, 3.min(nb - 1)))
                        / h2
                } else if j == nb - 1 {
                    (2.0 * self.get(i, nb - 1) - 5.0 * self.get(i, nb - 2)
                        + 4.0 * self.get(i, nb - 3)
                        - self.get(i, nb.saturating_sub(4)))
                        / h2
                } else {
                    (self.get(i, j + 1) - 2.0 * self.get(i, j) + self.get(i, j - 1)) / h2
                };
                out.set(i, j, v);
            }
        }
        out
    }

    /// Mixed derivative ∂²/∂a∂b, O(h²).
    pub fn mixed_ab(&self) -> ScalarField {
        self.deriv_a().deriv_b()
    }

    /// First derivative along the first coordinate, O(h⁴): centered in the
    /// interior, 5-point one-sided near the edges. Used where the O(h²)
    /// sampling noise would pollute downstream convergence studies.
    pub fn deriv4_a(&self) -> ScalarField {
        self.deriv4(true)
    }

    /// O(h⁴) first derivative along the second coordinate.
    pub fn deriv4_b(&self) -> ScalarField {
        self.deriv4(false)
    }

    fn deriv4(&self, along_a: bool) -> ScalarField {
        let (na, nb) = self.dims;
        let n = if along_a { na } else { nb };
        let h = if along_a { self.spacing.0 } else { self.spacing.1 };
        let mut out = self.clone();
        if n < 5 {
            return if along_a { self.deriv_a() } else { self.deriv_b() };
        }
        let pick = |k: usize, i: usize, j: usize| {
            if along_a {
                self.get(k, j)
            } else {
                self.get(i, k)
            }
        };
        for i in 0..na {
            for j in 0..nb {
                let k = if along_a { i } else { j };
                let v = if k == 0 {
                    (-25.0 * pick(0, i, j) + 48.0 * pick(1, i, j) - 36.0 * pick(2, i, j)
                        + 16.0 * pick(3, i, j)
                        - 3.0 * pick(4, i, j))
                        / (12.0 * h)
                } else if k == 1 {
                    (-3.0 * pick(0, i, j) - 10.0 * pick(1, i, j) + 18.0 * pick(2, i, j)
                        - 6.0 * pick(3, i, j)
                        + pick(4, i, j))
                        / (12.0 * h)
                } else if k == n - 2 {
                    (3.0 * pick(n - 1, i, j) + 10.0 * pick(n - 2, i, j)
                        - 18.0 * pick(n - 3, i, j)
                        + 6.0 * pick(n - 4, i, j)
                        - pick(n - 5, i, j))
                        / (12.0 * h)
                } else if k == n - 1 {
                    (25.0 * pick(n - 1, i, j) - 48.0 * pick(n - 2, i, j)
                        + 36.0 * pick(n - 3, i, j)
                        - 16.0 * pick(n - 4, i, j)
                        + 3.0 * pick(n - 5, i, j))
                        / (12.0 * h)
                } else {
                    (-pick(k + 2, i, j) + 8.0 * pick(k + 1, i, j) - 8.0 * pick(k - 1, i, j)
                        + pick(k - 2, i, j))
                        / (12.0 * h)
                };
                out.set(i, j, v);
            }
        }
        out
    }
}
