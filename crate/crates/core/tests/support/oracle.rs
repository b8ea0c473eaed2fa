//! Independent eigenvalue oracle: characteristic polynomial by the
//! Faddeev–LeVerrier recursion, roots from the companion matrix (nalgebra's
//! complex Schur form), then Newton polishing on the polynomial and finally
//! on `det(λI − A)` itself, whose logarithmic derivative is
//! `tr((λI − A)⁻¹)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Coefficients `c[0..=n]` of `det(λI − A) = Σ c[k] λ^k`, with `c[n] = 1`.
pub fn characteristic_polynomial(a: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = a.nrows();
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    c[n] = Complex64::new(1.0, 0.0);
    let identity = DMatrix::<Complex64>::identity(n, n);
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for k in 1..=n {
        m = a * &m + &identity * c[n - k + 1];
        let am = a * &m;
        c[n - k] = -am.trace() / k as f64;
    }
    c
}

pub fn evaluate(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp)
}

/// Roots of the monic polynomial `c`.
pub fn polynomial_roots(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let mut companion = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        companion[(i, n - 1)] = -c[i];
    }
    let schur = companion.schur();
    let (_, t) = schur.unpack();
    (0..n)
        .map(|i| {
            let mut z = t[(i, i)];
            for _ in 0..8 {
                let (p, dp) = evaluate(c, z);
                if dp.norm() == 0.0 {
                    break;
                }
                let step = p / dp;
                z -= step;
                if step.norm() <= 1e-15 * z.norm().max(1.0) {
                    break;
                }
            }
            z
        })
        .collect()
}

pub fn oracle_eigenvalues(a: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = a.nrows();
    let identity = DMatrix::<Complex64>::identity(n, n);
    polynomial_roots(&characteristic_polynomial(a))
        .into_iter()
        .map(|mut z| {
            for _ in 0..4 {
                let Some(inv) = (&identity * z - a).try_inverse() else {
                    break;
                };
                let tr = inv.trace();
                if tr.norm() == 0.0 || !tr.is_finite() {
                    break;
                }
                let step = tr.inv();
                z -= step;
                if step.norm() <= 1e-16 * z.norm().max(1.0) {
                    break;
                }
            }
            z
        })
        .collect()
}

/// Largest distance between matched elements of two multisets, matching
/// greedily by closest pair.
pub fn match_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut free: Vec<bool> = vec![true; b.len()];
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut used_a = vec![false; a.len()];
    let mut worst: f64 = 0.0;
    for (d, i, j) in pairs {
        if !used_a[i] && free[j] {
            used_a[i] = true;
            free[j] = false;
            worst = worst.max(d);
        }
    }
    worst
}
