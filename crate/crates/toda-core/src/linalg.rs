//! Small dense and banded linear solvers used by the Newton and Toeplitz
//! machinery. Nothing here is exposed outside the crate.

use num_complex::Complex64 as C64;

/// Dense complex LU factorization with partial pivoting, stored in place.
pub(crate) struct LuC64 {
    pub n: usize,
    pub lu: Vec<C64>,
    pub piv: Vec<usize>,
    pub singular: bool,
}

pub(crate) fn lu_factor(a: &[C64], n: usize) -> LuC64 {
    let mut lu = a.to_vec();
    let mut piv = vec![0usize; n];
    let mut singular = false;
    for k in 0..n {
        let mut p = k;
        let mut best = lu[k * n + k].norm();
        for i in (k + 1)..n {
            let v = lu[i * n + k].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        piv[k] = p;
        if p != k {
            for j in 0..n {
                lu.swap(k * n + j, p * n + j);
            }
        }
        let pivot = lu[k * n + k];
        if pivot.norm() < 1e-300 {
            singular = true;
            continue;
        }
        for i in (k + 1)..n {
            let f = lu[i * n + k] / pivot;
            lu[i * n + k] = f;
            for j in (k + 1)..n {
                let sub = f * lu[k * n + j];
                lu[i * n + j] -= sub;
            }
        }
    }
    LuC64 { n, lu, piv, singular }
}

impl LuC64 {
    pub fn solve_in_place(&self, b: &mut [C64]) {
        let n = self.n;
        for k in 0..n {
            b.swap(k, self.piv[k]);
        }
        for i in 1..n {
            for j in 0..i {
                let sub = self.lu[i * n + j] * b[j];
                b[i] -= sub;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let sub = self.lu[i * n + j] * b[j];
                b[i] -= sub;
            }
            b[i] /= self.lu[i * n + i];
        }
    }
}

/// 2-norm condition estimate via power iteration on `a` and inverse
/// iteration through the factorization. Returns `f64::INFINITY` when the
/// factorization hit a zero pivot.
pub(crate) fn cond_estimate(a: &[C64], n: usize, lu: &LuC64, lu_adj: &LuC64) -> f64 {
    if lu.singular || lu_adj.singular {
        return f64::INFINITY;
    }
    let matvec = |m: &[C64], adj: bool, x: &[C64], y: &mut [C64]| {
        for i in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for j in 0..n {
                s += if adj { m[j * n + i].conj() } else { m[i * n + j] } * x[j];
            }
            y[i] = s;
        }
    };
    let norm = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    // sigma_max: power iteration on A^H A.
    let mut v: Vec<C64> = (0..n).map(|i| C64::new(1.0 + (i as f64) * 0.37, 0.2)).collect();
    let mut w = vec![C64::new(0.0, 0.0); n];
    let mut sigma_max = 0.0;
    for _ in 0..12 {
        let nv = norm(&v);
        if nv == 0.0 {
            break;
        }
        v.iter_mut().for_each(|z| *z /= nv);
        matvec(a, false, &v, &mut w);
        sigma_max = norm(&w);
        matvec(a, true, &w, &mut v);
    }

    // sigma_min: inverse iteration, x <- A^-1 A^-H x.
    let mut x: Vec<C64> = (0..n).map(|i| C64::new(0.3 - (i as f64) * 0.11, 1.0)).collect();
    let mut inv_norm = 0.0;
    for _ in 0..12 {
        let nx = norm(&x);
        if nx == 0.0 {
            break;
        }
        x.iter_mut().for_each(|z| *z /= nx);
        lu_adj.solve_in_place(&mut x);
        lu.solve_in_place(&mut x);
        inv_norm = norm(&x).sqrt();
    }
    if inv_norm == 0.0 {
        return f64::INFINITY;
    }
    sigma_max * inv_norm
}

/// Banded real LU without pivoting (the Newton Jacobians here are strictly
/// diagonally dominant). `kl`/`ku` are the lower/upper bandwidths.
pub(crate) struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    /// Row-major band storage: row i holds entries for columns
    /// i-kl ..= i+ku at offsets 0 ..= kl+ku.
    data: Vec<f64>,
}

impl BandedLu {
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        BandedLu { n, kl, ku, data: vec![0.0; n * (kl + ku + 1)] }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.kl + self.ku + 1) + (j + self.kl - i)
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(j + self.kl >= i && j <= i + self.ku);
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    /// In-place factorization; returns false on a vanishing pivot.
    pub fn factor(&mut self) -> bool {
        let n = self.n;
        for k in 0..n {
            let pivot = self.data[self.idx(k, k)];
            if pivot.abs() < 1e-300 {
                return false;
            }
            let imax = (k + self.kl).min(n - 1);
            for i in (k + 1)..=imax {
                let f = self.data[self.idx(i, k)] / pivot;
                let p = self.idx(i, k);
                self.data[p] = f;
                let jmax = (k + self.ku).min(n - 1);
                for j in (k + 1)..=jmax {
                    let sub = f * self.data[self.idx(k, j)];
                    let q = self.idx(i, j);
                    self.data[q] -= sub;
                }
            }
        }
        true
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        for i in 1..n {
            let jmin = i.saturating_sub(self.kl);
            for j in jmin..i {
                b[i] -= self.data[self.idx(i, j)] * b[j];
            }
        }
        for i in (0..n).rev() {
            let jmax = (i + self.ku).min(n - 1);
            for j in (i + 1)..=jmax {
                b[i] -= self.data[self.idx(i, j)] * b[j];
            }
            b[i] /= self.data[self.idx(i, i)];
        }
    }
}

/// Dense real least squares min ||A x - b||_2 through the normal equations
/// with a complex LU on the Gram matrix (sizes here are tiny).
pub(crate) fn least_squares(a: &[f64], rows: usize, cols: usize, b: &[f64]) -> Option<Vec<f64>> {
    let mut gram = vec![C64::new(0.0, 0.0); cols * cols];
    let mut rhs = vec![C64::new(0.0, 0.0); cols];
    for p in 0..cols {
        for q in 0..cols {
            let mut s = 0.0;
            for r in 0..rows {
                s += a[r * cols + p] * a[r * cols + q];
            }
            gram[p * cols + q] = C64::new(s, 0.0);
        }
        let mut s = 0.0;
        for r in 0..rows {
            s += a[r * cols + p] * b[r];
        }
        rhs[p] = C64::new(s, 0.0);
    }
    // Tikhonov floor keeps the Gauss-Newton step bounded near rank drops.
    let trace: f64 = (0..cols).map(|p| gram[p * cols + p].re).sum();
    let mu = 1e-14 * (trace / cols as f64).max(1e-30);
    for p in 0..cols {
        gram[p * cols + p] += C64::new(mu, 0.0);
    }
    let lu = lu_factor(&gram, cols);
    if lu.singular {
        return None;
    }
    lu.solve_in_place(&mut rhs);
    Some(rhs.iter().map(|z| z.re).collect())
}
