//! Chebyshev collocation: fit a smooth function on an interval, truncate
//! the rounding-noise plateau of its coefficient sequence, and
//! differentiate term by term. Used for the third derivatives in the ODE
//! hierarchy residuals, where finite differences would amplify noise
//! beyond the target tolerance.
//!
//! Plateau truncation matters: differentiating T_n three times amplifies a
//! coefficient by up to ~n^6 at the interval ends and ~n^3 in the
//! interior. Coefficients at the machine-noise floor (~1e-16 relative)
//! carry no information and must be dropped before differentiation;
//! evaluation is restricted by callers to an interior subinterval by
//! fitting on a margin-extended interval.

use crate::error::{Error, Result};

/// Chebyshev series p(x) = sum c_n T_n(m(x)) on [lo, hi], with m the
/// affine map onto [-1, 1].
#[derive(Debug, Clone)]
pub struct ChebSeries {
    pub lo: f64,
    pub hi: f64,
    pub coeffs: Vec<f64>,
}

impl ChebSeries {
    /// Interpolate f at the n+1 Chebyshev points of the second kind on
    /// [lo, hi] and convert to coefficient form (O(n^2) cosine sums; n is
    /// a few hundred at most here).
    pub fn fit(f: &mut dyn FnMut(f64) -> f64, lo: f64, hi: f64, n: usize) -> Result<ChebSeries> {
        if !(lo < hi) || n < 2 {
            return Err(Error::Domain(format!(
                "ChebSeries::fit: bad interval [{lo}, {hi}] or order {n}"
            )));
        }
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        // Sample at x_k = mid + half cos(pi k / n), k = 0..n.
        let values: Vec<f64> = (0..=n)
            .map(|k| f(mid + half * (std::f64::consts::PI * k as f64 / n as f64).cos()))
            .collect();
        let mut coeffs = vec![0.0; n + 1];
        for (m, c) in coeffs.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (k, fk) in values.iter().enumerate() {
                let w = if k == 0 || k == n { 0.5 } else { 1.0 };
                acc += w * fk * (std::f64::consts::PI * (m * k) as f64 / n as f64).cos();
            }
            let e = if m == 0 || m == n { 2.0 } else { 1.0 };
            *c = 2.0 * acc / (e * n as f64);
        }
        Ok(ChebSeries { lo, hi, coeffs })
    }

    /// Drop trailing coefficients below rel_tol * max|c_n|: they sit on the
    /// rounding-noise plateau and would dominate high derivatives.
    pub fn truncate_plateau(&mut self, rel_tol: f64) {
        let peak = self.coeffs.iter().fold(0.0_f64, |a, &c| a.max(c.abs()));
        if peak == 0.0 {
            self.coeffs.truncate(1);
            return;
        }
        let thresh = peak * rel_tol;
        let keep = self
            .coeffs
            .iter()
            .rposition(|c| c.abs() > thresh)
            .map_or(1, |p| p + 1);
        self.coeffs.truncate(keep.max(2));
    }

    /// Coefficient-space derivative: if f = sum a_n T_n then
    /// f' = sum b_n T_n with b_{n-1} = b_{n+1} + 2 n a_n (b beyond the top
    /// order zero, b_0 halved), scaled by 2/(hi - lo).
    pub fn derivative(&self) -> ChebSeries {
        let n = self.coeffs.len() - 1;
        let scale = 2.0 / (self.hi - self.lo);
        let mut b = vec![0.0; n + 2];
        for m in (1..=n).rev() {
            b[m - 1] = b[m + 1] + 2.0 * m as f64 * self.coeffs[m];
        }
        b[0] *= 0.5;
        b.truncate(n.max(1));
        for c in &mut b {
            *c *= scale;
        }
        ChebSeries {
            lo: self.lo,
            hi: self.hi,
            coeffs: b,
        }
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let t = (2.0 * x - self.lo - self.hi) / (self.hi - self.lo);
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coeffs.iter().skip(1).rev() {
            let nb = c + 2.0 * t * b1 - b2;
            b2 = b1;
            b1 = nb;
        }
        self.coeffs[0] + t * b1 - b2
    }
}
