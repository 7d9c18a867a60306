//! Least squares via Householder QR.

use crate::error::{Error, Result};

/// Pivots smaller than this fraction of the original column norm are treated
/// as rank deficiency.
const RANK_TOL: f64 = 1e-12;

/// Dense column-major matrix of regressors.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    nrows: usize,
    ncols: usize,
    data: Vec<f64>,
}

impl Design {
    /// Builds from equal-length columns.
    pub fn from_columns(columns: Vec<Vec<f64>>) -> Result<Self> {
        let nrows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != nrows) {
            return Err(Error::domain("design columns have unequal lengths"));
        }
        let ncols = columns.len();
        Ok(Self {
            nrows,
            ncols,
            data: columns.concat(),
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::domain("design rows have unequal lengths"));
        }
        let columns = (0..ncols)
            .map(|j| rows.iter().map(|r| r[j]).collect())
            .collect();
        Self::from_columns(columns)
    }

    pub(crate) fn with_capacity(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols: 0,
            data: Vec::with_capacity(nrows * ncols),
        }
    }

    pub(crate) fn push_column(&mut self, column: impl IntoIterator<Item = f64>) {
        let before = self.data.len();
        self.data.extend(column);
        debug_assert_eq!(self.data.len() - before, self.nrows);
        self.ncols += 1;
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.nrows + i]
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Householder factorization X = QR stored compactly.
#[derive(Debug, Clone)]
struct Qr {
    nrows: usize,
    ncols: usize,
    /// Column-major; below-diagonal part holds reflector tails.
    factors: Vec<f64>,
    /// Leading element of each reflector vector.
    v0: Vec<f64>,
    /// 2 / vᵀv per reflector.
    beta: Vec<f64>,
    /// Diagonal of R.
    rdiag: Vec<f64>,
}

impl Qr {
    fn factor(design: &Design) -> Result<Self> {
        let (m, k) = (design.nrows, design.ncols);
        let norms: Vec<f64> = (0..k).map(|j| dot(design.column(j), design.column(j)).sqrt()).collect();
        let mut a = design.data.clone();
        let mut v0 = vec![0.0; k];
        let mut beta = vec![0.0; k];
        let mut rdiag = vec![0.0; k];

        for j in 0..k {
            let (done, rest) = a.split_at_mut((j + 1) * m);
            let col = &mut done[j * m + j..];
            let norm = dot(col, col).sqrt();
            if !(norm > RANK_TOL * norms[j]) || norms[j] == 0.0 {
                return Err(Error::SingularDesign { column: j });
            }
            let alpha = if col[0] > 0.0 { -norm } else { norm };
            let head = col[0] - alpha;
            let vtv = head * head + dot(&col[1..], &col[1..]);
            let b = 2.0 / vtv;
            for kcol in rest.chunks_exact_mut(m) {
                let target = &mut kcol[j..];
                let s = b * (head * target[0] + dot(&col[1..], &target[1..]));
                target[0] -= s * head;
                for (t, v) in target[1..].iter_mut().zip(&col[1..]) {
                    *t -= s * v;
                }
            }
            v0[j] = head;
            beta[j] = b;
            rdiag[j] = alpha;
        }
        Ok(Self {
            nrows: m,
            ncols: k,
            factors: a,
            v0,
            beta,
            rdiag,
        })
    }

    /// Overwrites `y` with Qᵀy.
    fn apply_qt(&self, y: &mut [f64]) {
        let m = self.nrows;
        for j in 0..self.ncols {
            let tail = &self.factors[j * m + j + 1..(j + 1) * m];
            let target = &mut y[j..];
            let s = self.beta[j] * (self.v0[j] * target[0] + dot(tail, &target[1..]));
            target[0] -= s * self.v0[j];
            for (t, v) in target[1..].iter_mut().zip(tail) {
                *t -= s * v;
            }
        }
    }

    fn r(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.rdiag[j]
        } else {
            self.factors[j * self.nrows + i]
        }
    }

    /// Solves R x = b for the leading `k × k` block.
    fn back_substitute(&self, b: &[f64]) -> Vec<f64> {
        let k = b.len();
        let mut x = b.to_vec();
        for i in (0..k).rev() {
            let s: f64 = ((i + 1)..k).map(|j| self.r(i, j) * x[j]).sum();
            x[i] = (x[i] - s) / self.r(i, i);
        }
        x
    }

    /// Squared row norms of R⁻¹, i.e. diag((XᵀX)⁻¹).
    fn inverse_gram_diagonal(&self) -> Vec<f64> {
        let k = self.ncols;
        // R⁻¹ column by column: R · c_j = e_j
        let mut rinv = vec![0.0; k * k];
        for j in 0..k {
            let mut e = vec![0.0; j + 1];
            e[j] = 1.0;
            let c = self.back_substitute(&e);
            rinv[j * k..j * k + j + 1].copy_from_slice(&c);
        }
        (0..k)
            .map(|i| (i..k).map(|j| rinv[j * k + i].powi(2)).sum())
            .collect()
    }
}

/// A fitted linear regression.
#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    pub coefficients: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub residuals: Vec<f64>,
    pub rss: f64,
    pub nobs: usize,
    pub nparams: usize,
    /// n·ln(rss/n) + 2k
    pub aic: f64,
}

impl OlsFit {
    pub fn t_value(&self, j: usize) -> f64 {
        self.coefficients[j] / self.standard_errors[j]
    }
}

pub fn aic(rss: f64, nobs: usize, nparams: usize) -> f64 {
    let n = nobs as f64;
    n * (rss / n).ln() + 2.0 * nparams as f64
}

fn check_shape(design: &Design, response: &[f64]) -> Result<()> {
    if design.nrows != response.len() {
        return Err(Error::domain(format!(
            "design has {} rows but response has {}",
            design.nrows,
            response.len()
        )));
    }
    if design.ncols == 0 || design.nrows <= design.ncols {
        return Err(Error::InsufficientData {
            needed: design.ncols + 1,
            got: design.nrows,
        });
    }
    Ok(())
}

/// Ordinary least squares of `response` on the columns of `design`.
pub fn ols_fit(design: &Design, response: &[f64]) -> Result<OlsFit> {
    check_shape(design, response)?;
    let qr = Qr::factor(design)?;
    let (n, k) = (design.nrows, design.ncols);

    let mut qty = response.to_vec();
    qr.apply_qt(&mut qty);
    let coefficients = qr.back_substitute(&qty[..k]);

    let residuals: Vec<f64> = (0..n)
        .map(|i| {
            let fitted: f64 = (0..k).map(|j| design.get(i, j) * coefficients[j]).sum();
            response[i] - fitted
        })
        .collect();
    let rss = dot(&qty[k..], &qty[k..]);
    let s2 = rss / (n - k) as f64;
    let standard_errors = qr
        .inverse_gram_diagonal()
        .into_iter()
        .map(|d| (s2 * d).sqrt())
        .collect();

    Ok(OlsFit {
        coefficients,
        standard_errors,
        residuals,
        rss,
        nobs: n,
        nparams: k,
        aic: aic(rss, n, k),
    })
}

/// Residual sums of squares of the nested regressions on the first
/// 1, 2, …, k columns, from a single factorization.
pub fn nested_rss(design: &Design, response: &[f64]) -> Result<Vec<f64>> {
    check_shape(design, response)?;
    let qr = Qr::factor(design)?;
    let k = design.ncols;
    let mut qty = response.to_vec();
    qr.apply_qt(&mut qty);
    let full = dot(&qty[k..], &qty[k..]);
    let mut out = vec![0.0; k];
    let mut acc = full;
    for j in (0..k).rev() {
        out[j] = acc;
        acc += qty[j] * qty[j];
    }
    Ok(out)
}
