//! Symmetric tridiagonal eigenproblems: Sturm-sequence bisection for the
//! eigenvalues and shifted inverse iteration for the vectors.

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    /// Unit Euclidean norm.
    pub vector: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectionOptions {
    pub relative_tolerance: f64,
    pub max_bisections: u32,
}

impl Default for BisectionOptions {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-13,
            max_bisections: 256,
        }
    }
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::InvalidGrid(format!(
                "tridiagonal needs n diagonal and n-1 off-diagonal entries, got {} and {}",
                diag.len(),
                off.len()
            )));
        }
        Ok(Self { diag, off })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    fn pivot_floor(&self) -> f64 {
        let e2 = self.off.iter().map(|e| e * e).fold(1.0, f64::max);
        f64::MIN_POSITIVE * e2
    }

    /// Number of eigenvalues strictly below `x` (count of negative pivots
    /// of `T − xI = LDLᵀ`).
    pub fn sturm_count(&self, x: f64) -> usize {
        let pivmin = self.pivot_floor();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            let e = self.off[i - 1];
            q = (self.diag[i] - x) - e * e / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Best resolution a count can distinguish near the low end of the
    /// spectrum: a few ulps of the coupling scale.
    fn absolute_floor(&self) -> f64 {
        let e = self.off.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        4.0 * f64::EPSILON * e.max(f64::MIN_POSITIVE)
    }

    /// `(T − σI)x = b` by Gaussian elimination with partial pivoting.
    fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        if n == 1 {
            let d = self.diag[0] - shift;
            let d = if d == 0.0 { self.absolute_floor() } else { d };
            return vec![rhs[0] / d];
        }
        let tiny = self.absolute_floor();
        let mut d: Vec<f64> = self.diag.iter().map(|x| x - shift).collect();
        let mut du = self.off.clone();
        let mut dl = self.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n - 1];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        let mut b = rhs.to_vec();
        for i in 0..n - 1 {
            if swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl[i] * b[i];
            } else {
                b[i + 1] -= dl[i] * b[i];
            }
        }
        let mut x = vec![0.0; n];
        x[n - 1] = b[n - 1] / d[n - 1];
        x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
        }
        x
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.off[i] * x[i + 1];
                }
                y
            })
            .collect()
    }
}

fn unit(mut v: Vec<f64>) -> Option<Vec<f64>> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    Some(v)
}

/// Bisection for the `index`-th smallest eigenvalue inside `[lo, hi]`,
/// where `count(lo) <= index < count(hi)`.
fn bisect(
    op: &SymTridiagonal,
    index: usize,
    mut lo: f64,
    mut hi: f64,
    opts: &BisectionOptions,
) -> Result<f64> {
    let floor = op.absolute_floor();
    for _ in 0..opts.max_bisections {
        let scale = lo.abs().max(hi.abs());
        if hi - lo <= (opts.relative_tolerance * scale).max(floor) {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        if op.sturm_count(mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::NoConvergence(format!(
        "bisection for eigenvalue {index} exhausted {} steps in [{lo}, {hi}]",
        opts.max_bisections
    )))
}

fn inverse_iteration(op: &SymTridiagonal, value: f64, index: usize) -> Result<Vec<f64>> {
    let n = op.dim();
    // deterministic, non-degenerate starting vector
    let mut v: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.5 * ((i as f64 + 1.0) * 0.618_033_988_75).fract())
        .collect();
    let floor = op.absolute_floor();
    let mut shift = value;
    for attempt in 0..4 {
        let mut x = v.clone();
        let mut ok = true;
        for _ in 0..3 {
            match unit(op.solve_shifted(shift, &x)) {
                Some(y) => x = y,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let tx = op.apply(&x);
            let resid = tx
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - value * b).powi(2))
                .sum::<f64>()
                .sqrt();
            let scale = op.gershgorin().1.abs().max(value.abs());
            if resid <= 1e-6 * scale {
                return Ok(x);
            }
            v = x;
        }
        shift = value + floor * 10f64.powi(attempt + 1);
    }
    Err(Error::NoConvergence(format!(
        "inverse iteration for eigenvalue {index} ({value}) did not converge"
    )))
}

/// The `k` algebraically smallest eigenpairs, ascending.
pub fn eigen_lowest(op: &SymTridiagonal, k: usize) -> Result<Vec<EigenPair>> {
    eigen_lowest_with(op, k, &BisectionOptions::default())
}

pub fn eigen_lowest_with(
    op: &SymTridiagonal,
    k: usize,
    opts: &BisectionOptions,
) -> Result<Vec<EigenPair>> {
    if k == 0 || k > op.dim() {
        return Err(Error::InvalidState(format!(
            "requested {k} eigenpairs of a {}x{} operator",
            op.dim(),
            op.dim()
        )));
    }
    let (glo, ghi) = op.gershgorin();
    let pad = op.absolute_floor() + 1e-12 * glo.abs().max(ghi.abs());
    let (lo, hi_all) = (glo - pad, ghi + pad);
    // tighten the upper end: smallest doubling step above `lo` holding k values
    let mut step = (1.0 + lo.abs()) * 1e-6;
    let mut hi = lo + step;
    while op.sturm_count(hi) < k && hi < hi_all {
        step *= 2.0;
        hi = (lo + step).min(hi_all);
    }
    let mut pairs = Vec::with_capacity(k);
    let mut lower = lo;
    for index in 0..k {
        let value = bisect(op, index, lower, hi, opts)?;
        let vector = inverse_iteration(op, value, index)?;
        pairs.push(EigenPair { value, vector });
        lower = value - op.absolute_floor();
    }
    Ok(pairs)
}
