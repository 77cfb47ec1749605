//! Cubic spline on a uniform grid starting at the origin.

/// C² cubic spline with a clamped slope at `r = 0` and a natural end
/// (`y'' = 0`) at the last node; evaluation past the last node continues
/// linearly.
#[derive(Clone, Debug)]
pub struct UniformSpline {
    spacing: f64,
    values: Vec<f64>,
    second: Vec<f64>,
}

impl UniformSpline {
    pub fn new(spacing: f64, values: Vec<f64>, start_slope: f64) -> Self {
        let n = values.len();
        assert!(n >= 3, "spline needs at least three nodes");
        let h = spacing;
        // Tridiagonal system for the nodal second derivatives.
        let mut diag = vec![4.0; n];
        let mut rhs = vec![0.0; n];
        let upper = vec![1.0; n];
        let lower = vec![1.0; n];
        diag[0] = 2.0;
        rhs[0] = 6.0 / h * ((values[1] - values[0]) / h - start_slope);
        for k in 1..n - 1 {
            rhs[k] = 6.0 / (h * h) * (values[k + 1] - 2.0 * values[k] + values[k - 1]);
        }
        diag[n - 1] = 1.0;
        rhs[n - 1] = 0.0;
        let mut lower = lower;
        lower[n - 1] = 0.0;
        let second = thomas(&lower, &diag, &upper, &rhs);
        Self {
            spacing,
            values,
            second,
        }
    }

    /// `(y, y', y'')` at `r ≥ 0`.
    pub fn eval(&self, r: f64) -> (f64, f64, f64) {
        let h = self.spacing;
        let last = self.values.len() - 1;
        let x = r / h;
        if x >= last as f64 {
            let (y, dy, _) = self.eval_in(last - 1, 1.0);
            let dr = r - last as f64 * h;
            return (y + dy * dr, dy, 0.0);
        }
        let k = x.floor() as usize;
        self.eval_in(k, x - k as f64)
    }

    fn eval_in(&self, k: usize, b: f64) -> (f64, f64, f64) {
        let h = self.spacing;
        let a = 1.0 - b;
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let (m0, m1) = (self.second[k], self.second[k + 1]);
        let y = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let dy =
            (y1 - y0) / h - (3.0 * a * a - 1.0) / 6.0 * h * m0 + (3.0 * b * b - 1.0) / 6.0 * h * m1;
        let d2y = a * m0 + b * m1;
        (y, dy, d2y)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }
}

/// Solves a tridiagonal system; `lower[k]` multiplies `x[k-1]` and
/// `upper[k]` multiplies `x[k+1]` in row `k`.
pub(crate) fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for k in 1..n {
        let m = diag[k] - lower[k] * c[k - 1];
        c[k] = if k + 1 < n { upper[k] / m } else { 0.0 };
        d[k] = (rhs[k] - lower[k] * d[k - 1]) / m;
    }
    let mut x = d;
    for k in (0..n - 1).rev() {
        x[k] -= c[k] * x[k + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_even_quadratic_with_clamped_origin() {
        // -r²/2 has zero slope at the origin; the natural end condition
        // only perturbs the last few intervals.
        let h = 0.01;
        let values: Vec<f64> = (0..=1000).map(|k| -0.5 * (k as f64 * h).powi(2)).collect();
        let s = UniformSpline::new(h, values, 0.0);
        for r in [0.0, 0.003, 1.2345, 5.0, 7.777] {
            let (y, dy, d2y) = s.eval(r);
            assert!((y + 0.5 * r * r).abs() < 1e-12, "y({r})");
            assert!((dy + r).abs() < 1e-10, "y'({r})");
            assert!((d2y + 1.0).abs() < 1e-8, "y''({r})");
        }
    }

    #[test]
    fn converges_for_smooth_functions() {
        let f = |r: f64| (-r * r).exp() * (1.0 + r * r).ln_1p();
        let mut errs = Vec::new();
        for h in [0.02, 0.01] {
            let n = (6.0 / h) as usize;
            let values: Vec<f64> = (0..=n).map(|k| f(k as f64 * h)).collect();
            let s = UniformSpline::new(h, values, 0.0);
            let err = (0..500)
                .map(|j| {
                    let r = 0.01 + j as f64 * 0.0071;
                    (s.eval(r).0 - f(r)).abs()
                })
                .fold(0.0, f64::max);
            errs.push(err);
        }
        assert!(errs[0] / errs[1] > 12.0, "{errs:?}");
    }

    #[test]
    fn thomas_solves_tridiagonal() {
        let x = thomas(
            &[0.0, 1.0, 1.0],
            &[4.0, 4.0, 4.0],
            &[1.0, 1.0, 0.0],
            &[5.0, 6.0, 5.0],
        );
        for v in x {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }
}
