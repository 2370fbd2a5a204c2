//! Dense row-major matrix and least-squares solver.
//!
//! Sized for this crate's workloads (designs of at most a few hundred rows
//! and a couple dozen columns), not for BLAS-level throughput.

use crate::error::{Error, Result};

/// Row-major rectangular matrix of finite reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid("matrix needs at least one row"));
        }
        let cols = rows[0].len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::invalid(format!(
                    "ragged matrix: row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            for &v in r {
                if !v.is_finite() {
                    return Err(Error::invalid(format!("non-finite entry in row {i}")));
                }
                data.push(v);
            }
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// `self * v` for a vector of length `cols`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `selfᵀ * v` for a vector of length `rows`.
    pub fn transpose_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for r in 0..self.rows {
            let row = self.row(r);
            for (c, &x) in row.iter().enumerate() {
                out[c] += x * v[r];
            }
        }
        out
    }

    /// Gram matrix `selfᵀ * self`.
    pub fn gram(&self) -> Matrix {
        let mut g = Matrix::zeros(self.cols, self.cols);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..self.cols {
                for j in i..self.cols {
                    let v = g.get(i, j) + row[i] * row[j];
                    g.set(i, j, v);
                }
            }
        }
        for i in 0..self.cols {
            for j in 0..i {
                g.set(i, j, g.get(j, i));
            }
        }
        g
    }
}

/// Result of a least-squares fit.
#[derive(Debug, Clone)]
pub struct OlsFit {
    /// One coefficient per design column, in column order. When an intercept
    /// was requested it is NOT part of this vector.
    pub coefficients: Vec<f64>,
    /// Fitted intercept, `0.0` when not requested.
    pub intercept: f64,
    /// Residuals `y - ŷ` in row order.
    pub residuals: Vec<f64>,
    /// Standard error of each coefficient (same order as `coefficients`).
    pub std_errors: Vec<f64>,
    /// Standard error of the intercept (`0.0` when not requested).
    pub intercept_std_error: f64,
    /// True when near-singularity forced a ridge jitter onto the solve.
    pub jittered: bool,
}

impl OlsFit {
    /// Residual sum of squares.
    pub fn sse(&self) -> f64 {
        self.residuals.iter().map(|e| e * e).sum()
    }

    pub fn predict_row(&self, x: &[f64]) -> f64 {
        self.intercept + self.coefficients.iter().zip(x).map(|(b, v)| b * v).sum::<f64>()
    }
}

const JITTER: f64 = 1e-10;

/// Ordinary least squares: minimizes `‖y − Xβ‖²` (plus an intercept column
/// when requested) via Householder QR. Near-singular designs get a ridge
/// jitter of 1e-10 on the normal equations before the solve is declared
/// rank deficient.
pub fn ols_solve(x: &Matrix, y: &[f64], intercept: bool) -> Result<OlsFit> {
    if y.len() != x.rows() {
        return Err(Error::invalid(format!(
            "target length {} does not match {} design rows",
            y.len(),
            x.rows()
        )));
    }
    let k = x.cols() + usize::from(intercept);
    if x.rows() < k {
        return Err(Error::degenerate(format!(
            "{} rows cannot identify {k} parameters",
            x.rows()
        )));
    }

    // Assemble the full design with the intercept as the leading column.
    let mut design = Matrix::zeros(x.rows(), k);
    for r in 0..x.rows() {
        if intercept {
            design.set(r, 0, 1.0);
        }
        for c in 0..x.cols() {
            design.set(r, usize::from(intercept) + c, x.get(r, c));
        }
    }

    let (beta, jittered) = solve_least_squares(&design, y)?;

    let fitted = design.mul_vec(&beta);
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let dof = (x.rows() - k).max(1);
    let sigma2 = residuals.iter().map(|e| e * e).sum::<f64>() / dof as f64;

    // Coefficient variances from the (jittered) inverse Gram diagonal.
    let mut gram = design.gram();
    if jittered {
        for i in 0..k {
            gram.set(i, i, gram.get(i, i) + JITTER);
        }
    }
    let inv_diag = inverse_diagonal(&gram)?;
    let ses: Vec<f64> = inv_diag.iter().map(|&d| (sigma2 * d.max(0.0)).sqrt()).collect();

    let (intercept_val, coeffs, intercept_se, coeff_ses) = if intercept {
        (beta[0], beta[1..].to_vec(), ses[0], ses[1..].to_vec())
    } else {
        (0.0, beta, 0.0, ses)
    };

    Ok(OlsFit {
        coefficients: coeffs,
        intercept: intercept_val,
        residuals,
        std_errors: coeff_ses,
        intercept_std_error: intercept_se,
        jittered,
    })
}

/// Least-squares solve of the assembled design. Returns the coefficient
/// vector and whether jitter was applied.
fn solve_least_squares(design: &Matrix, y: &[f64]) -> Result<(Vec<f64>, bool)> {
    match qr_solve(design, y) {
        Ok(beta) => Ok((beta, false)),
        Err(_) => {
            let beta = ridge_normal_solve(design, y, JITTER)?;
            Ok((beta, true))
        }
    }
}

/// Householder QR least squares. Fails when an R diagonal collapses
/// relative to the column scale.
fn qr_solve(a: &Matrix, y: &[f64]) -> Result<Vec<f64>> {
    let m = a.rows();
    let n = a.cols();
    let mut r = a.clone();
    let mut rhs = y.to_vec();

    let col_scale: f64 = (0..n)
        .map(|c| (0..m).map(|i| r.get(i, c).abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max)
        .max(1.0);

    for k in 0..n {
        // Householder vector for column k below the diagonal.
        let mut norm = 0.0;
        for i in k..m {
            norm += r.get(i, k) * r.get(i, k);
        }
        let norm = norm.sqrt();
        if norm < 1e-13 * col_scale {
            return Err(Error::RankDeficient(format!("column {k} collapsed in QR")));
        }
        let alpha = if r.get(k, k) >= 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..m).map(|i| r.get(i, k)).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 > 0.0 {
            // Apply H = I - 2vvᵀ/‖v‖² to the trailing columns and the rhs.
            for c in k..n {
                let dot: f64 = (k..m).map(|i| v[i - k] * r.get(i, c)).sum();
                let f = 2.0 * dot / vnorm2;
                for i in k..m {
                    let val = r.get(i, c) - f * v[i - k];
                    r.set(i, c, val);
                }
            }
            let dot: f64 = (k..m).map(|i| v[i - k] * rhs[i]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..m {
                rhs[i] -= f * v[i - k];
            }
        }
        r.set(k, k, alpha);
    }

    // Back substitution on the upper triangle.
    let mut beta = vec![0.0; n];
    for k in (0..n).rev() {
        let mut s = rhs[k];
        for j in k + 1..n {
            s -= r.get(k, j) * beta[j];
        }
        let d = r.get(k, k);
        if d.abs() < 1e-13 * col_scale {
            return Err(Error::RankDeficient(format!("zero pivot at column {k}")));
        }
        beta[k] = s / d;
    }
    Ok(beta)
}

/// Normal-equation solve with an explicit ridge term, used as the jittered
/// fallback. Fails only if the jittered Gram is still not positive definite.
fn ridge_normal_solve(a: &Matrix, y: &[f64], ridge: f64) -> Result<Vec<f64>> {
    let mut gram = a.gram();
    for i in 0..gram.rows() {
        gram.set(i, i, gram.get(i, i) + ridge);
    }
    let xty = a.transpose_mul_vec(y);
    cholesky_solve(&gram, &xty)
        .ok_or_else(|| Error::RankDeficient("system singular beyond jitter tolerance".into()))
}

/// Solve `A x = b` for symmetric positive definite `A` via Cholesky.
pub(crate) fn cholesky_solve(a: &Matrix, b: &[f64]) -> Option<Vec<f64>> {
    let n = a.rows();
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k);
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l.set(i, j, s.sqrt());
            } else {
                l.set(i, j, s / l.get(j, j));
            }
        }
    }
    // Forward then backward substitution.
    let mut yv = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l.get(i, k) * yv[k];
        }
        yv[i] = s / l.get(i, i);
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = yv[i];
        for k in i + 1..n {
            s -= l.get(k, i) * x[k];
        }
        x[i] = s / l.get(i, i);
    }
    Some(x)
}

/// Diagonal of the inverse of a symmetric positive definite matrix.
fn inverse_diagonal(a: &Matrix) -> Result<Vec<f64>> {
    let n = a.rows();
    let mut out = vec![0.0; n];
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        let col = cholesky_solve(a, &e)
            .ok_or_else(|| Error::RankDeficient("gram matrix not positive definite".into()))?;
        out[i] = col[i];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_design_returns_targets() {
        let x = Matrix::identity(3);
        let fit = ols_solve(&x, &[1.0, 2.0, 3.0], false).unwrap();
        for (b, want) in fit.coefficients.iter().zip([1.0, 2.0, 3.0]) {
            assert!((b - want).abs() < 1e-12);
        }
        assert_eq!(fit.intercept, 0.0);
    }

    #[test]
    fn exact_line_recovers_slope_and_intercept() {
        let xs: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let y: Vec<f64> = (0..10).map(|i| 2.0 * i as f64 + 1.0).collect();
        let x = Matrix::from_rows(&xs).unwrap();
        let fit = ols_solve(&x, &y, true).unwrap();
        assert!((fit.coefficients[0] - 2.0).abs() < 1e-9);
        assert!((fit.intercept - 1.0).abs() < 1e-9);
        assert!(!fit.jittered);
    }

    #[test]
    fn residuals_orthogonal_to_columns() {
        // Random-ish 50x4 system built from the crate RNG.
        let mut rng = crate::numerics::RngStream::new(17).child("ols-orth").rng();
        let rows: Vec<Vec<f64>> = (0..50)
            .map(|_| (0..4).map(|_| rng.next_normal()).collect())
            .collect();
        let y: Vec<f64> = (0..50).map(|_| rng.next_normal()).collect();
        let x = Matrix::from_rows(&rows).unwrap();
        let fit = ols_solve(&x, &y, true).unwrap();
        let xtr = x.transpose_mul_vec(&fit.residuals);
        for v in xtr {
            assert!(v.abs() < 1e-8, "Xᵀr entry {v}");
        }
        let sum_r: f64 = fit.residuals.iter().sum();
        assert!(sum_r.abs() < 1e-8);
    }

    #[test]
    fn duplicate_column_triggers_jitter() {
        let rows: Vec<Vec<f64>> = (0..8).map(|i| vec![i as f64, i as f64]).collect();
        let x = Matrix::from_rows(&rows).unwrap();
        let y: Vec<f64> = (0..8).map(|i| 3.0 * i as f64).collect();
        let fit = ols_solve(&x, &y, false).unwrap();
        assert!(fit.jittered);
        // Jittered solve splits the weight across the twin columns.
        assert!((fit.coefficients[0] + fit.coefficients[1] - 3.0).abs() < 1e-5);
    }

    #[test]
    fn too_few_rows_is_degenerate() {
        let x = Matrix::from_rows(&[vec![1.0, 2.0]]).unwrap();
        let err = ols_solve(&x, &[1.0], true).unwrap_err();
        assert!(matches!(err, Error::DegenerateInput(_)));
    }
}
