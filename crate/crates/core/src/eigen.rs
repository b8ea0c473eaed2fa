//! Dense complex eigensolver for small general matrices.
//!
//! The matrix is reduced to upper Hessenberg form with Householder
//! reflections, then driven to complex Schur form `A = Z T Zᴴ` by single-shift
//! QR sweeps (Wilkinson shifts, implicit bulge chasing with Givens rotations).
//! Eigenvectors come from back-substitution on `T` and are mapped back with
//! `Z`. Every returned pair is checked against `‖A v − λ v‖ ≤ tol·‖A‖_F`.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest dimension accepted by [`eigendecompose`].
pub const MAX_DIMENSION: usize = 16;

/// Default relative residual tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::domain("matrix rows must all have length equal to the row count"));
        }
        Ok(ComplexMatrix {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            let cells: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// One eigenvalue with its unit-norm right eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: Complex64,
    pub vector: Vec<Complex64>,
}

/// Complex Schur decomposition `A = Z T Zᴴ`.
#[derive(Debug, Clone)]
pub struct Schur {
    /// Upper triangular factor.
    pub t: ComplexMatrix,
    /// Unitary factor.
    pub z: ComplexMatrix,
}

/// Full eigendecomposition of a general complex matrix.
///
/// Pairs are returned in Schur order (no sorting). `tol` bounds the relative
/// residual of every pair; [`Error::NonConvergence`] carries the worst one
/// when the bound or the `30·n²` sweep budget is exceeded.
pub fn eigendecompose(a: &ComplexMatrix, tol: f64) -> Result<Vec<EigenPair>> {
    if a.dim() > MAX_DIMENSION {
        return Err(Error::domain(format!(
            "eigensolver accepts dimension <= {MAX_DIMENSION} (got {})",
            a.dim()
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be > 0 (got {tol})")));
    }
    if !a.is_finite() {
        return Err(Error::domain("matrix contains non-finite entries"));
    }
    let n = a.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let schur = schur(a)?;
    let norm = a.frobenius_norm();
    let vectors = triangular_eigenvectors(&schur.t);

    let mut pairs = Vec::with_capacity(n);
    let mut worst = 0.0_f64;
    for (k, y) in vectors.into_iter().enumerate() {
        let value = schur.t[(k, k)];
        let mut v = schur.z.mul_vec(&y);
        normalize(&mut v);
        let residual = residual_norm(a, value, &v);
        let relative = if norm > 0.0 { residual / norm } else { residual };
        worst = worst.max(relative);
        pairs.push(EigenPair { value, vector: v });
    }
    if !(worst <= tol) {
        return Err(Error::NonConvergence { worst_residual: worst });
    }
    Ok(pairs)
}

/// Eigenvalues only, in Schur order.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if a.dim() > MAX_DIMENSION {
        return Err(Error::domain(format!(
            "eigensolver accepts dimension <= {MAX_DIMENSION} (got {})",
            a.dim()
        )));
    }
    let s = schur(a)?;
    Ok((0..a.dim()).map(|i| s.t[(i, i)]).collect())
}

/// `‖A v − λ v‖₂`.
pub fn residual_norm(a: &ComplexMatrix, value: Complex64, v: &[Complex64]) -> f64 {
    a.mul_vec(v)
        .iter()
        .zip(v)
        .map(|(av, x)| (av - value * x).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|z| *z /= norm);
    }
}

/// Complex Schur form via Hessenberg reduction and shifted QR.
pub fn schur(a: &ComplexMatrix) -> Result<Schur> {
    let n = a.dim();
    let mut h = a.clone();
    let mut z = ComplexMatrix::identity(n);
    hessenberg_in_place(&mut h, &mut z);
    hessenberg_qr(&mut h, &mut z)?;
    Ok(Schur { t: h, z })
}

fn hessenberg_in_place(h: &mut ComplexMatrix, z: &mut ComplexMatrix) {
    let n = h.dim();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let alpha = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
        let mut v = x;
        v[0] += phase * alpha;
        let vnorm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|c| *c /= vnorm);

        // H ← P H with P = I − 2 v vᴴ acting on rows k+1..n.
        for j in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(r, vr)| vr.conj() * h[(k + 1 + r, j)])
                .sum();
            for (r, vr) in v.iter().enumerate() {
                h[(k + 1 + r, j)] -= 2.0 * vr * dot;
            }
        }
        // H ← H P and Z ← Z P on columns k+1..n.
        for m in [&mut *h, &mut *z] {
            for i in 0..n {
                let dot: Complex64 = v
                    .iter()
                    .enumerate()
                    .map(|(c, vc)| m[(i, k + 1 + c)] * vc)
                    .sum();
                for (c, vc) in v.iter().enumerate() {
                    m[(i, k + 1 + c)] -= 2.0 * dot * vc.conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
}

/// Rotation `G = [[c, s], [−s̄, c]]` with `G·[x, y]ᵀ = [r, 0]ᵀ`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let r = ax.hypot(y.norm());
    if r == 0.0 {
        return (1.0, ZERO);
    }
    if ax == 0.0 {
        return (0.0, y.conj() / y.norm());
    }
    (ax / r, (x / ax) * y.conj() / r)
}

fn rotate_rows(m: &mut ComplexMatrix, k: usize, c: f64, s: Complex64, cols: std::ops::Range<usize>) {
    for j in cols {
        let a = m[(k, j)];
        let b = m[(k + 1, j)];
        m[(k, j)] = c * a + s * b;
        m[(k + 1, j)] = -s.conj() * a + c * b;
    }
}

fn rotate_cols(m: &mut ComplexMatrix, k: usize, c: f64, s: Complex64, rows: std::ops::Range<usize>) {
    for i in rows {
        let a = m[(i, k)];
        let b = m[(i, k + 1)];
        m[(i, k)] = c * a + s.conj() * b;
        m[(i, k + 1)] = -s * a + c * b;
    }
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let mu1 = mean + disc;
    let mu2 = mean - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

fn hessenberg_qr(h: &mut ComplexMatrix, z: &mut ComplexMatrix) -> Result<()> {
    let n = h.dim();
    let budget = 30 * n * n;
    let eps = f64::EPSILON;
    let norm = h.frobenius_norm();
    let mut sweeps = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;

    while hi > 0 {
        // Locate the start of the active unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let scale = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let scale = if scale == 0.0 { norm } else { scale };
            if h[(lo, lo - 1)].norm() <= eps * scale {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }

        sweeps += 1;
        since_deflation += 1;
        if sweeps > budget {
            let worst = (1..n).map(|i| h[(i, i - 1)].norm()).fold(0.0, f64::max);
            return Err(Error::NonConvergence {
                worst_residual: if norm > 0.0 { worst / norm } else { worst },
            });
        }

        let shift = if since_deflation % 11 == 10 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + 0.75 * h[(hi, hi - 1)].norm()
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        let mut x = h[(lo, lo)] - shift;
        let mut y = h[(lo + 1, lo)];
        for k in lo..hi {
            if k > lo {
                x = h[(k, k - 1)];
                y = h[(k + 1, k - 1)];
            }
            let (c, s) = givens(x, y);
            let first_col = if k > lo { k - 1 } else { lo };
            rotate_rows(h, k, c, s, first_col..n);
            rotate_cols(h, k, c, s, 0..(k + 3).min(hi + 1));
            rotate_cols(z, k, c, s, 0..n);
            if k > lo {
                h[(k + 1, k - 1)] = ZERO;
            }
        }
    }
    Ok(())
}

/// Right eigenvectors of an upper triangular matrix, one per diagonal entry.
fn triangular_eigenvectors(t: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    let n = t.dim();
    let small = f64::EPSILON * t.frobenius_norm().max(f64::MIN_POSITIVE);
    (0..n)
        .map(|k| {
            let lambda = t[(k, k)];
            let mut y = vec![ZERO; n];
            y[k] = ONE;
            for i in (0..k).rev() {
                let rhs: Complex64 = (i + 1..=k).map(|j| t[(i, j)] * y[j]).sum();
                let mut denom = t[(i, i)] - lambda;
                if denom.norm() < small {
                    denom = Complex64::new(small, 0.0);
                }
                y[i] = -rhs / denom;
            }
            y
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_matrix() {
        let d = [c(3.0, 0.0), c(-1.0, 0.0), c(0.5, 0.0), c(2.0, 0.0)];
        let m = ComplexMatrix::from_diagonal(&d);
        let pairs = eigendecompose(&m, DEFAULT_TOLERANCE).unwrap();
        for (i, p) in pairs.iter().enumerate() {
            assert_eq!(p.value, d[i]);
            for (j, v) in p.vector.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((v.norm() - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn two_by_two_rotation() {
        // [[0, -1], [1, 0]] has eigenvalues ±i.
        let m = ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(-1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]])
            .unwrap();
        let mut vals: Vec<f64> = eigendecompose(&m, DEFAULT_TOLERANCE)
            .unwrap()
            .iter()
            .map(|p| {
                assert!(p.value.re.abs() < 1e-14);
                p.value.im
            })
            .collect();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn jordan_like_block() {
        // Defective matrix: residual must still be tiny for the returned vector.
        let m = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)],
        ])
        .unwrap();
        let vals = eigenvalues(&m).unwrap();
        for v in vals {
            assert!((v - c(2.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn schur_reconstructs_input() {
        let rows: Vec<Vec<Complex64>> = (0..6)
            .map(|i| {
                (0..6)
                    .map(|j| c(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64 - 1.0))
                    .collect()
            })
            .collect();
        let a = ComplexMatrix::from_rows(&rows).unwrap();
        let s = schur(&a).unwrap();
        for i in 0..6 {
            for j in 0..i {
                assert_eq!(s.t[(i, j)], ZERO, "T not triangular at ({i},{j})");
            }
        }
        let back = s.z.matmul(&s.t).matmul(&s.z.adjoint());
        for i in 0..6 {
            for j in 0..6 {
                assert!((back[(i, j)] - a[(i, j)]).norm() < 1e-12);
            }
        }
        let zz = s.z.adjoint().matmul(&s.z);
        for i in 0..6 {
            for j in 0..6 {
                let e = if i == j { ONE } else { ZERO };
                assert!((zz[(i, j)] - e).norm() < 1e-13);
            }
        }
        let pairs = eigendecompose(&a, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(pairs.len(), 6);
    }

    #[test]
    fn rejects_oversized_and_non_finite() {
        assert!(matches!(
            eigendecompose(&ComplexMatrix::identity(17), 1e-12),
            Err(Error::Domain(_))
        ));
        let mut m = ComplexMatrix::identity(3);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert!(matches!(eigendecompose(&m, 1e-12), Err(Error::Domain(_))));
    }

    #[test]
    fn empty_and_scalar() {
        assert!(eigendecompose(&ComplexMatrix::zeros(0), 1e-12).unwrap().is_empty());
        let m = ComplexMatrix::from_diagonal(&[c(0.3, -0.2)]);
        let p = eigendecompose(&m, 1e-12).unwrap();
        assert_eq!(p[0].value, c(0.3, -0.2));
    }
}
