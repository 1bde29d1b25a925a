//! Small dense complex linear algebra: a row-major matrix type and a
//! Hermitian eigensolver (Householder reduction to real tridiagonal form
//! followed by implicit QL iterations).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use crate::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        CMatrix { dim, data }
    }

    /// Diagonal matrix with the given real entries.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.dim).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn matmul(&self, other: &CMatrix) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[r * n..(r + 1) * n];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.dim, v.len(), "matvec dimension mismatch");
        (0..self.dim)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn sub(&self, other: &CMatrix) -> Self {
        assert_eq!(self.dim, other.dim);
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Largest modulus of any entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &CMatrix) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.dim;
        (0..n).all(|r| (r..n).all(|c| (self[(r, c)] - self[(c, r)].conj()).norm() <= tol))
    }
}

impl core::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl core::ops::IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector for `values[i]`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// `V diag(E) V†`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        CMatrix::from_fn(n, |r, c| {
            (0..n)
                .map(|k| v[(r, k)] * v[(c, k)].conj() * self.values[k])
                .sum()
        })
    }
}

/// Diagonalizes a Hermitian matrix. Only the lower triangle is read.
pub fn eigh(a: &CMatrix) -> Result<HermitianEigen> {
    let n = a.dim();
    if n == 0 {
        return Ok(HermitianEigen {
            values: Vec::new(),
            vectors: CMatrix::zeros(0),
        });
    }
    if a.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numerical("non-finite matrix entry".into()));
    }

    let mut work = CMatrix::from_fn(n, |r, c| if r >= c { a[(r, c)] } else { a[(c, r)].conj() });
    let mut q = CMatrix::identity(n);
    let mut diag = vec![0.0; n];
    let mut sub = vec![ZERO; n];

    // Householder: work <- H work H, q <- q H, column by column.
    for k in 0..n.saturating_sub(2) {
        let col: Vec<C64> = (k + 1..n).map(|r| work[(r, k)]).collect();
        let sigma = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tail = col[1..].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if sigma == 0.0 || tail == 0.0 {
            continue;
        }
        let x0 = col[0];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        let alpha = -phase * sigma;
        let mut u = col;
        u[0] -= alpha;
        let unorm = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let s = core::f64::consts::SQRT_2 / unorm;
        for z in u.iter_mut() {
            *z *= s;
        }
        // H = I - u u† on rows/cols k+1..n.
        let m = n - k - 1;
        let off = k + 1;
        let mut p = vec![ZERO; m];
        for i in 0..m {
            let row = &work.row(off + i)[off..];
            p[i] = row.iter().zip(&u).map(|(a, b)| a * b).sum();
        }
        let kk: C64 = u.iter().zip(&p).map(|(a, b)| a.conj() * b).sum::<C64>() * 0.5;
        let w: Vec<C64> = p.iter().zip(&u).map(|(pi, ui)| pi - kk.re * ui).collect();
        for i in 0..m {
            for j in 0..m {
                work[(off + i, off + j)] -= u[i] * w[j].conj() + w[i] * u[j].conj();
            }
        }
        work[(off, k)] = alpha;
        work[(k, off)] = alpha.conj();
        for i in 1..m {
            work[(off + i, k)] = ZERO;
            work[(k, off + i)] = ZERO;
        }
        // q <- q (I - u u†)
        for r in 0..n {
            let qr = &q.row(r)[off..];
            let t: C64 = qr.iter().zip(&u).map(|(a, b)| a * b).sum();
            for j in 0..m {
                q[(r, off + j)] -= t * u[j].conj();
            }
        }
    }

    for i in 0..n {
        diag[i] = work[(i, i)].re;
        if i + 1 < n {
            sub[i] = work[(i + 1, i)];
        }
    }

    // Gauge the complex subdiagonal to real non-negative values: T = D T_r D†.
    let mut e = vec![0.0; n];
    let mut phase = ONE;
    let mut phases = vec![ONE; n];
    for i in 0..n - 1 {
        let mag = sub[i].norm();
        if mag > 0.0 {
            phase *= sub[i] / mag;
        }
        phases[i + 1] = phase;
        e[i] = mag;
    }
    for r in 0..n {
        for c in 0..n {
            q[(r, c)] *= phases[c];
        }
    }

    tridiagonal_ql(&mut diag, &mut e, &mut q)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, |r, c| q[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Implicit QL on a real symmetric tridiagonal matrix (`d` diagonal, `e[i]`
/// couples `i` and `i + 1`), rotating the columns of `z` along.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut CMatrix) -> Result<()> {
    let n = d.len();
    if n > 0 {
        e[n - 1] = 0.0;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Numerical(format!(
                    "QL iteration did not converge for eigenvalue {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let f = z[(k, i + 1)];
                    z[(k, i + 1)] = z[(k, i)] * s + f * c;
                    z[(k, i)] = z[(k, i)] * c - f * s;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Inner product `<a|b>`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_pauli_y() {
        let a = CMatrix::from_fn(2, |r, c| match (r, c) {
            (0, 1) => C64::new(0.0, -1.0),
            (1, 0) => C64::new(0.0, 1.0),
            _ => ZERO,
        });
        let eig = eigh(&a).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        assert!(eig.reconstruct().max_abs_diff(&a) < 1e-14);
    }

    #[test]
    fn degenerate_spectrum_keeps_orthonormal_vectors() {
        let a = CMatrix::from_diagonal(&[2.0, 2.0, -1.0, 2.0]);
        let eig = eigh(&a).unwrap();
        let v = &eig.vectors;
        assert!(v.adjoint().matmul(v).max_abs_diff(&CMatrix::identity(4)) < 1e-14);
        assert_eq!(eig.values, vec![-1.0, 2.0, 2.0, 2.0]);
    }

    #[test]
    fn empty_and_scalar() {
        assert!(eigh(&CMatrix::zeros(0)).unwrap().values.is_empty());
        let eig = eigh(&CMatrix::from_diagonal(&[3.5])).unwrap();
        assert_eq!(eig.values, vec![3.5]);
    }

    #[test]
    fn rejects_nan() {
        let mut a = CMatrix::identity(3);
        a[(1, 0)] = C64::new(f64::NAN, 0.0);
        assert!(matches!(eigh(&a), Err(Error::Numerical(_))));
    }
}
