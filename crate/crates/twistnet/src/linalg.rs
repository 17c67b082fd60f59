//! Small dense complex matrices for operator-level checks.

use num_complex::Complex64 as C64;
use std::ops::{Add, Mul, Sub};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn eye(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Mat {
        assert_eq!(rows * cols, data.len());
        Mat { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn real(rows: usize, cols: usize, v: &[f64]) -> Mat {
        Mat::from_vec(rows, cols, v.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[C64] {
        &self.data
    }
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn dag(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn scale(&self, s: C64) -> Mat {
        Mat { data: self.data.iter().map(|x| x * s).collect(), ..self.clone() }
    }

    pub fn kron(&self, o: &Mat) -> Mat {
        Mat::from_fn(self.rows * o.rows, self.cols * o.cols, |r, c| {
            self.get(r / o.rows, c / o.cols) * o.get(r % o.rows, c % o.cols)
        })
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| self.data[r * self.cols..(r + 1) * self.cols].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, o: &Mat) -> f64 {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        self.data.iter().zip(&o.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, o: &Mat, tol: f64) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.max_abs_diff(o) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.rows == self.cols && (self.dag() * self).approx_eq(&Mat::eye(self.rows), tol)
    }

    /// Numerical rank by Gaussian elimination with full pivoting.
    pub fn rank(&self, tol: f64) -> usize {
        let mut a = self.clone();
        let (m, n) = (a.rows, a.cols);
        let mut rank = 0;
        let mut row = 0;
        let mut used_col = vec![false; n];
        while row < m {
            let mut best = (0.0, 0, 0);
            for r in row..m {
                for c in 0..n {
                    if !used_col[c] {
                        let v = a.get(r, c).norm();
                        if v > best.0 {
                            best = (v, r, c);
                        }
                    }
                }
            }
            if best.0 <= tol {
                break;
            }
            let (_, pr, pc) = best;
            used_col[pc] = true;
            for c in 0..n {
                a.data.swap(row * n + c, pr * n + c);
            }
            let p = a.get(row, pc);
            for r in row + 1..m {
                let f = a.get(r, pc) / p;
                if f != ZERO {
                    for c in 0..n {
                        let v = a.get(row, c);
                        a.data[r * n + c] -= f * v;
                    }
                }
            }
            row += 1;
            rank += 1;
        }
        rank
    }

    /// Returns `s` with `self = s·o` within `tol`, if one exists.
    pub fn scalar_multiple_of(&self, o: &Mat, tol: f64) -> Option<C64> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return None;
        }
        crate::tensor::scalar_ratio(&self.data, &o.data, tol)
    }

    /// Solve `self · x = b` by Gaussian elimination with partial pivoting.
    /// `None` when a pivot falls below `tol`.
    pub fn solve(&self, b: &Mat, tol: f64) -> Option<Mat> {
        let n = self.rows;
        assert_eq!(n, self.cols);
        assert_eq!(b.rows, n);
        let (mut a, mut x) = (self.clone(), b.clone());
        let m = x.cols;
        for col in 0..n {
            let piv = (col..n).max_by(|&i, &j| a.get(i, col).norm().partial_cmp(&a.get(j, col).norm()).unwrap())?;
            if a.get(piv, col).norm() <= tol {
                return None;
            }
            for c in 0..n {
                a.data.swap(col * n + c, piv * n + c);
            }
            for c in 0..m {
                x.data.swap(col * m + c, piv * m + c);
            }
            let p = a.get(col, col);
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col) / p;
                if f != ZERO {
                    for c in 0..n {
                        let v = a.get(col, c);
                        a.data[r * n + c] -= f * v;
                    }
                    for c in 0..m {
                        let v = x.get(col, c);
                        x.data[r * m + c] -= f * v;
                    }
                }
            }
        }
        for r in 0..n {
            let p = a.get(r, r);
            for c in 0..m {
                x.data[r * m + c] /= p;
            }
        }
        Some(x)
    }

    /// Restrict to rows and columns in `keep`.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat {
        Mat::from_fn(rows.len(), cols.len(), |r, c| self.get(rows[r], cols[c]))
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, k: usize) -> Mat {
        let mut r = Mat::eye(self.rows);
        for _ in 0..k {
            r = &r * self;
        }
        r
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "matrix product dimension mismatch");
        let mut out = Mat::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == ZERO {
                    continue;
                }
                for c in 0..o.cols {
                    out.data[r * o.cols + c] += a * o.data[k * o.cols + c];
                }
            }
        }
        out
    }
}

impl Mul for Mat {
    type Output = Mat;
    fn mul(self, o: Mat) -> Mat {
        &self * &o
    }
}

impl Mul<&Mat> for Mat {
    type Output = Mat;
    fn mul(self, o: &Mat) -> Mat {
        &self * o
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }
}

/// Eigenvectors of a unitary `u` with `u^n = c·1`, via the spectral
/// projectors `(1/n) Σ_m (u/λ)^m`. Returns `(λ, unit eigenvector)` pairs,
/// one per nonzero projector, ordered by the argument of λ.
pub fn cyclic_eigenvectors(u: &Mat, n: usize) -> Vec<(C64, Vec<C64>)> {
    let d = u.rows();
    let un = u.pow(n);
    let c = un.get(0, 0);
    let base = c.powf(1.0 / n as f64);
    let mut out = Vec::new();
    for k in 0..n {
        let lam = base * C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
        let step = u.scale(lam.inv());
        let mut acc = Mat::zeros(d, d);
        let mut p = Mat::eye(d);
        for _ in 0..n {
            acc = &acc + &p;
            p = &p * &step;
        }
        let proj = acc.scale(C64::new(1.0 / n as f64, 0.0));
        if let Some(col) = (0..d).map(|c| proj.column(c)).max_by(|a, b| {
            let na: f64 = a.iter().map(|x| x.norm_sqr()).sum();
            let nb: f64 = b.iter().map(|x| x.norm_sqr()).sum();
            na.partial_cmp(&nb).unwrap()
        }) {
            let nrm = col.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if nrm > 1e-9 {
                let v: Vec<C64> = col.iter().map(|x| x / nrm).collect();
                // fix the global phase: first sizeable component real positive
                let lead = v.iter().find(|x| x.norm() > 1e-9).copied().unwrap();
                let ph = lead.conj() / lead.norm();
                out.push((lam, v.iter().map(|x| x * ph).collect()));
            }
        }
    }
    out.sort_by(|a, b| a.0.arg().partial_cmp(&b.0.arg()).unwrap());
    out
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vnorm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Compact text for a complex number, dropping parts below 1e-12.
pub fn fmt_c(z: C64) -> String {
    let r = if z.re.abs() < 1e-12 { 0.0 } else { z.re };
    let i = if z.im.abs() < 1e-12 { 0.0 } else { z.im };
    match (r == 0.0, i == 0.0) {
        (_, true) => format!("{r:.4}"),
        (true, false) => format!("{i:.4}i"),
        _ => format!("{r:.4}{i:+.4}i"),
    }
}

pub fn fmt_vec(v: &[C64]) -> String {
    format!("[{}]", v.iter().map(|&z| fmt_c(z)).collect::<Vec<_>>().join(", "))
}

impl std::fmt::Display for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        for r in 0..self.rows {
            let row: Vec<C64> = (0..self.cols).map(|c| self.get(r, c)).collect();
            writeln!(f, "{}", fmt_vec(&row))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_projector() {
        let p = Mat::real(3, 3, &[1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 2.0]);
        assert_eq!(p.rank(1e-10), 2);
        assert_eq!(Mat::eye(4).rank(1e-10), 4);
    }

    #[test]
    fn eigenvectors_of_xz() {
        let xz = Mat::real(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let ev = cyclic_eigenvectors(&xz, 2);
        assert_eq!(ev.len(), 2);
        for (l, v) in ev {
            let w = xz.apply(&v);
            for (a, b) in w.iter().zip(&v) {
                assert!((a - l * b).norm() < 1e-12);
            }
        }
    }
}
