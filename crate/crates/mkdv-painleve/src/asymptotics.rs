//! Long-time asymptotic coefficients for defocusing mKdV in the
//! self-similar (Painleve) sector |x| <= M t^{1/3}.
//!
//! With y = x (3t)^{-1/3}, the solution expands as
//!
//! ```text
//! u(x, t) = sum_{j=1}^{N} u_j(y) / t^{j/3} + O(t^{-(N+1)/3}),
//! ```
//!
//! where, writing s = r(0), p1 = r'(0)/3^{1/3}, p2 = r''(0)/(2 3^{2/3})
//! for the reflection coefficient r of the initial data:
//!
//! ```text
//! u_1(y) = 3^{-1/3} u_P(y; s, 0, -s)        (Ablowitz-Segur PII)
//! u_2(y) = r'(0) / (2 3^{2/3}) Ai'(y)       (only when s = 0)
//! u_3(y) = -i r''(0) / 24 * y Ai(y)         (only when s = 0)
//! ```
//!
//! The u_j obey a hierarchy of ODEs in y: with D = d/dy,
//! u_j''' - y u_j' - j u_j = 2 3^{2/3} (sum-of-cubes term)_j, which for
//! j = 1 is the derivative of u_1^3 (making u_1 a Painleve II transcendent
//! after one integration) and for j = 2, 3 with u_1 = 0 is homogeneous,
//! solved by Ai^{(j-1)}. These residuals are checked by Chebyshev
//! spectral differentiation.

use num_complex::Complex64;

use crate::cheb::ChebSeries;
use crate::error::{Error, Result};
use crate::special::{airy_eval, painleve2_solve, PainleveSolution};

/// 3^{1/3}.
const CBRT3: f64 = 1.4422495703074083;
/// 3^{2/3}.
const CBRT9: f64 = 2.080083823051904;

/// Map reflection derivatives at k = 0 to the model-problem parameters:
/// p1 = r'(0)/3^{1/3} (real), p2 = r''(0)/(2 3^{2/3}) (purely imaginary).
pub fn model_parameters(r0_prime: f64, r0_second: Complex64) -> (f64, Complex64) {
    (r0_prime / CBRT3, r0_second / (2.0 * CBRT9))
}

/// A point (x, t) together with its similarity coordinate y = x (3t)^{-1/3}.
#[derive(Debug, Clone, Copy)]
pub struct SimilarityPoint {
    pub x: f64,
    pub t: f64,
    pub y: f64,
}

impl SimilarityPoint {
    pub fn new(x: f64, t: f64) -> Result<SimilarityPoint> {
        if !(t >= 1.0) {
            return Err(Error::Domain(format!(
                "similarity point needs t >= 1, got t = {t}"
            )));
        }
        Ok(SimilarityPoint {
            x,
            t,
            y: x / (3.0 * t).cbrt(),
        })
    }
}

/// Truncated asymptotic series with its scattering inputs.
///
/// Order gating: orders 2 and 3 involve u_2, u_3, which are only defined
/// for s = r(0) = 0; requesting them with s != 0 is an error rather than
/// a fabricated answer.
#[derive(Debug)]
pub struct AsymptoticSeries {
    pub order: u8,
    pub s: Complex64,
    pub r0_prime: f64,
    pub r0_second: Complex64,
    u1_table: Option<PainleveSolution>,
}

impl AsymptoticSeries {
    /// Build the series; y_range is the similarity-variable range the u_1
    /// table must cover (ignored when s = 0).
    pub fn new(
        order: u8,
        s: Complex64,
        r0_prime: f64,
        r0_second: Complex64,
        y_range: (f64, f64),
    ) -> Result<AsymptoticSeries> {
        if order == 0 || order > 3 {
            return Err(Error::UnsupportedOrder(format!(
                "series order must be 1..=3, got {order}"
            )));
        }
        let s_zero = s.norm() == 0.0;
        if order >= 2 && !s_zero {
            return Err(Error::UnsupportedOrder(format!(
                "orders >= 2 are only defined for r(0) = 0; got s = {s}"
            )));
        }
        if r0_second.re.abs() > 1e-10 * r0_second.norm().max(1.0) {
            return Err(Error::Domain(format!(
                "r''(0) must be purely imaginary, got {r0_second}"
            )));
        }
        let u1_table = if s_zero {
            None
        } else {
            Some(painleve2_solve(s, (y_range.0 - 1.0, y_range.1.max(6.0)))?)
        };
        Ok(AsymptoticSeries {
            order,
            s,
            r0_prime,
            r0_second,
            u1_table,
        })
    }

    pub fn u1(&self, y: f64) -> Result<f64> {
        match &self.u1_table {
            None => Ok(0.0),
            Some(table) => Ok(table.eval(y)? / CBRT3),
        }
    }

    pub fn u2(&self, y: f64) -> Result<f64> {
        Ok(u2_eval(y, self.r0_prime)?)
    }

    pub fn u3(&self, y: f64) -> Result<f64> {
        u3_eval(y, self.r0_second)
    }
}

/// Leading coefficient u_1(y) = 3^{-1/3} u_P(y; s, 0, -s). Solves the
/// Painleve II connection problem on demand; use AsymptoticSeries to
/// amortize the table over many evaluations.
pub fn u1_eval(y: f64, s: Complex64) -> Result<f64> {
    if s.norm() == 0.0 {
        return Ok(0.0);
    }
    let table = painleve2_solve(s, (y.min(0.0) - 1.0, (y + 1.0).max(6.0)))?;
    Ok(table.eval(y)? / CBRT3)
}

/// Second coefficient u_2(y) = r'(0) / (2 3^{2/3}) Ai'(y) (r(0) = 0 case).
pub fn u2_eval(y: f64, r0_prime: f64) -> Result<f64> {
    Ok(r0_prime / (2.0 * CBRT9) * airy_eval(y, 1)?)
}

/// Third coefficient u_3(y) = -i r''(0)/24 * y Ai(y) (r(0) = 0 case).
/// r''(0) must be purely imaginary so the value is real.
pub fn u3_eval(y: f64, r0_second: Complex64) -> Result<f64> {
    if r0_second.re.abs() > 1e-10 * r0_second.norm().max(1.0) {
        return Err(Error::Domain(format!(
            "r''(0) must be purely imaginary, got {r0_second}"
        )));
    }
    Ok(r0_second.im / 24.0 * y * airy_eval(y, 0)?)
}

/// Evaluate the truncated expansion sum_{j<=N} u_j(y) / t^{j/3} at a point.
pub fn series_eval(pt: &SimilarityPoint, series: &AsymptoticSeries) -> Result<f64> {
    if !(pt.t >= 1.0) {
        return Err(Error::Domain(format!("series needs t >= 1, got {}", pt.t)));
    }
    let tc = pt.t.cbrt();
    let mut acc = series.u1(pt.y)? / tc;
    if series.order >= 2 {
        acc += series.u2(pt.y)? / (tc * tc);
    }
    if series.order >= 3 {
        acc += series.u3(pt.y)? / pt.t;
    }
    Ok(acc)
}

/// Pointwise residual of the j-th hierarchy equation on y_grid:
///
/// ```text
/// u''' - y u' - j u - [j in {1,4}] 2 3^{2/3} (w^3)'
/// ```
///
/// where w = u for j = 1 (the self-interaction that integrates to
/// Painleve II) and w = the supplied source (u_2) for j = 4; j = 2, 3 are
/// homogeneous (assuming u_1 = 0). Third derivatives come from Chebyshev
/// collocation fitted on a margin-extended interval with plateau
/// truncation; the undifferentiated terms use the function directly.
pub fn hierarchy_residual(
    j: u8,
    f: &dyn Fn(f64) -> f64,
    source: Option<&dyn Fn(f64) -> f64>,
    y_grid: &[f64],
) -> Result<Vec<f64>> {
    if !(1..=4).contains(&j) {
        return Err(Error::UnsupportedOrder(format!(
            "hierarchy equations are defined for j = 1..4, got {j}"
        )));
    }
    if j == 4 && source.is_none() {
        return Err(Error::Domain(
            "hierarchy j = 4 needs the u_2 source function for its cubic term".into(),
        ));
    }
    if y_grid.is_empty() {
        return Err(Error::Domain("empty y grid".into()));
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &y in y_grid {
        lo = lo.min(y);
        hi = hi.max(y);
    }
    let margin = 0.75;
    let (a, b) = (lo - margin, hi + margin);

    let fit = |g: &dyn Fn(f64) -> f64| -> Result<ChebSeries> {
        let mut s = ChebSeries::fit(&mut |x| g(x), a, b, 256)?;
        s.truncate_plateau(1e-13);
        Ok(s)
    };
    let f_cheb = fit(f)?;
    let d1 = f_cheb.derivative();
    let d3 = d1.derivative().derivative();
    let cubic: Option<ChebSeries> = match j {
        1 => Some(fit(&|x| {
            let v = f(x);
            v * v * v
        })?),
        4 => {
            let src = source.unwrap();
            Some(fit(&|x| {
                let v = src(x);
                v * v * v
            })?)
        }
        _ => None,
    };
    let cubic_d = cubic.map(|c| c.derivative());

    Ok(y_grid
        .iter()
        .map(|&y| {
            let mut res = d3.eval(y) - y * d1.eval(y) - j as f64 * f(y);
            if let Some(cd) = &cubic_d {
                res -= 2.0 * CBRT9 * cd.eval(y);
            }
            res
        })
        .collect())
}
