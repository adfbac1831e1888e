//! Expansion coefficients of the model Riemann-Hilbert problem on the
//! four-ray contour, computed by two independent routes.
//!
//! The model problem lives on rays arg z in {pi/6, 5pi/6, -5pi/6, -pi/6}
//! with jump I + p(z) e^{2i theta} E_lower on the upper pair and
//! I - conj(p)(z) e^{-2i theta} E_upper on the lower pair, where
//! theta = y z + 4 z^3 / 3 and p(z) = p1 z + p2 z^2 + ... encodes the
//! reflection coefficient near the origin. The solution's large-z
//! expansion m(z) = I + m1/z + m2/z^2 + ... has z-coefficients that are
//! themselves series in the small parameter; writing m_{kl} for the
//! order-l part of m_k, the leading blocks are
//!
//! ```text
//! m11 = (p1/4) Ai'(y) sigma1
//! m12 = (p1^2/8i) J(y) sigma3 + (p2/8i) Ai''(y) sigma1
//! m21 = -(p1/8i) Ai''(y) sigma3 sigma1
//! ```
//!
//! with J(y) = integral_y^inf Ai'(t)^2 dt. Route one (closed form)
//! evaluates these directly from the Airy backend. Route two
//! (quadrature) assembles the same objects from the defining contour
//! integrals -(1/2pi i) \oint z^a w_l(z) dz of the jump-expansion terms,
//! never invoking the Airy identities, so agreement between the routes
//! certifies both. The sigma3 part of m12 comes from a double integral;
//! Fubini reduces it to a one-dimensional integral of Ai'^2, and a
//! nested 2D quadrature of the original double integral cross-checks
//! that reduction.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat2::{Mat2, ZERO2};
use crate::quad::{gauss_legendre, graded_breaks, integrate_panels};
use crate::special::ray::{
    lower_ray_integral, ray_direction, ray_orientation, theta, upper_ray_integral, RayQuadConfig,
};
use crate::special::{airy_eval, airy_triple, painleve2_solve};

/// 3^{1/3}.
const CBRT3: f64 = 1.4422495703074083;
/// 3^{2/3}.
const CBRT9: f64 = 2.080083823051904;

fn ivec(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

fn check_p2(p2: Complex64) -> Result<()> {
    if p2.re.abs() > 1e-10 * p2.norm().max(1.0) {
        return Err(Error::Domain(format!(
            "p2 must be purely imaginary, got {p2}"
        )));
    }
    Ok(())
}

/// Truncated four-ray contour with its quadrature resolution.
///
/// Rays point along arg z in {pi/6, 5pi/6, -5pi/6, -pi/6}, oriented left
/// to right, truncated at `radius`; each ray carries `panels`
/// Gauss-Legendre panels of `nodes` points, graded toward the origin.
#[derive(Debug, Clone)]
pub struct RayContour {
    pub radius: f64,
    pub panels: usize,
    pub nodes: usize,
}

impl Default for RayContour {
    fn default() -> Self {
        RayContour {
            radius: 6.0,
            panels: 10,
            nodes: 24,
        }
    }
}

impl RayContour {
    pub fn new(radius: f64, panels: usize, nodes: usize) -> Result<RayContour> {
        if !(radius >= 6.0) {
            return Err(Error::Domain(format!(
                "contour truncation radius must be >= 6, got {radius}"
            )));
        }
        if panels < 2 || nodes < 4 {
            return Err(Error::Domain(
                "contour needs at least 2 panels of 4 nodes".into(),
            ));
        }
        Ok(RayContour {
            radius,
            panels,
            nodes,
        })
    }

    fn quad_cfg(&self) -> RayQuadConfig {
        RayQuadConfig {
            radius: self.radius,
            panels: self.panels,
            nodes: self.nodes,
            target: 1e-10,
        }
    }
}

/// Leading model-problem coefficients at one (y, p1, p2).
#[derive(Debug, Clone)]
pub struct ModelCoefficients {
    pub y: f64,
    pub p1: f64,
    pub p2: Complex64,
    pub m11: Mat2,
    pub m12: Mat2,
    pub m21: Mat2,
}

impl ModelCoefficients {
    /// Largest deviation from the required entry structure:
    /// m11 proportional to sigma1 (zero diagonal, equal off-diagonal),
    /// m21 proportional to sigma3 sigma1 (zero diagonal, opposite
    /// off-diagonal), m12 = diagonal sigma3 part plus sigma1 part
    /// (trace-free, symmetric off-diagonal).
    pub fn structure_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for m in [&self.m11, &self.m21] {
            worst = worst.max(m.entry(0, 0).norm());
            worst = worst.max(m.entry(1, 1).norm());
        }
        worst = worst.max((self.m11.entry(0, 1) - self.m11.entry(1, 0)).norm());
        worst = worst.max((self.m21.entry(0, 1) + self.m21.entry(1, 0)).norm());
        worst = worst.max((self.m12.entry(0, 0) + self.m12.entry(1, 1)).norm());
        worst = worst.max((self.m12.entry(0, 1) - self.m12.entry(1, 0)).norm());
        worst
    }
}

/// Certified bound on the discarded tail integral_cut^inf Ai'(t)^2 dt.
///
/// For t >= cut >= 10, Ai'(t)/Ai'(cut) <= (t/cut)^{1/4}
/// e^{-(2/3)(t^{3/2}-cut^{3/2})} (1 + o(1)) and the exponent dominates
/// sqrt(cut)(t - cut), so the tail is at most Ai'(cut)^2 / (2 sqrt(cut))
/// up to the algebraic prefactor; a safety factor 2 absorbs it.
fn airy_prime_sq_tail_bound(cut: f64) -> Result<f64> {
    let aip = airy_eval(cut, 1)?;
    Ok(aip * aip / (2.0 * cut.sqrt()) * 2.0)
}

/// J(y) = integral_y^inf Ai'(t)^2 dt by Gauss-Legendre panels up to the
/// cut max(y + 12, 10) plus a certified superexponential remainder bound
/// (must be <= 1e-12, else a quadrature-accuracy error).
pub fn airy_prime_tail_integral(y: f64) -> Result<f64> {
    let cut = (y + 12.0).max(10.0);
    let bound = airy_prime_sq_tail_bound(cut)?;
    if bound > 1e-12 {
        return Err(Error::QuadratureAccuracy {
            achieved: bound,
            target: 1e-12,
            context: format!("Ai'^2 tail remainder at cut {cut}"),
        });
    }
    let rule = gauss_legendre(24);
    let breaks = graded_breaks(y, cut, 8);
    let mut err: Option<Error> = None;
    let val = integrate_panels(
        &mut |t: f64| match airy_eval(t, 1) {
            Ok(a) => a * a,
            Err(e) => {
                err = Some(e);
                0.0
            }
        },
        &breaks,
        &rule,
    );
    match err {
        Some(e) => Err(e),
        None => Ok(val),
    }
}

/// Same tail integral with Ai' reconstructed from the upper-ray contour
/// integral instead of the Airy backend, for the quadrature route.
fn airy_prime_tail_integral_via_rays(y: f64, cfg: &RayQuadConfig) -> Result<f64> {
    let cut = (y + 12.0).max(10.0);
    let bound = airy_prime_sq_tail_bound(cut)?;
    if bound > 1e-12 {
        return Err(Error::QuadratureAccuracy {
            achieved: bound,
            target: 1e-12,
            context: format!("Ai'^2 tail remainder at cut {cut}"),
        });
    }
    let rule = gauss_legendre(24);
    let breaks = graded_breaks(y, cut, 8);
    let val = integrate_panels(
        &mut |t: f64| {
            // Ai'(t) = (2i/pi) integral over Y1 u Y2 of z e^{2i theta} dz.
            let aip = (Complex64::new(0.0, 2.0) / std::f64::consts::PI
                * upper_ray_integral(t, 1, cfg))
            .re;
            aip * aip
        },
        &breaks,
        &rule,
    );
    Ok(val)
}

/// Closed-form route: evaluate the explicit coefficient formulas from
/// the Airy backend and the Ai'^2 tail quadrature.
pub fn closed_form_coefficients(y: f64, p1: f64, p2: Complex64) -> Result<ModelCoefficients> {
    check_p2(p2)?;
    let t = airy_triple(y)?;
    let m11 = Mat2::sigma1().scale(Complex64::new(p1 / 4.0 * t.ai_prime, 0.0));
    let m21 = Mat2::sigma3_sigma1().scale(-Complex64::new(p1, 0.0) / ivec(8.0) * t.ai_second);
    let mut m12 = Mat2::sigma1().scale(p2 / ivec(8.0) * t.ai_second);
    if p1 != 0.0 {
        let j = airy_prime_tail_integral(y)?;
        m12 = m12.add(Mat2::sigma3().scale(Complex64::new(p1 * p1, 0.0) / ivec(8.0) * j));
    }
    Ok(ModelCoefficients {
        y,
        p1,
        p2,
        m11,
        m12,
        m21,
    })
}

/// Quadrature route: assemble the same coefficients from the defining
/// contour integrals of the jump expansion, -(1/2pi i) \oint z^a w_l dz,
/// where w_1 = p1 z e^{2i theta} E_lower on the upper rays and
/// -p1 z e^{-2i theta} E_upper on the lower rays (p1 real), and
/// w_2 = p2 z^2 e^{2i theta} E_lower upper / +p2 z^2 e^{-2i theta}
/// E_upper lower (p2 imaginary, so -conj(p2) = p2). The sigma3 part of
/// m12 uses the Fubini-reduced tail integral of Ai'^2 with Ai' itself
/// reconstructed from ray quadrature.
pub fn quadrature_coefficients(
    y: f64,
    p1: f64,
    p2: Complex64,
    contour: &RayContour,
) -> Result<ModelCoefficients> {
    check_p2(p2)?;
    let cfg = contour.quad_cfg();
    let pref = -Complex64::new(0.0, 2.0 * std::f64::consts::PI).inv();
    let up1 = upper_ray_integral(y, 1, &cfg);
    let lo1 = lower_ray_integral(y, 1, &cfg);
    let up2 = upper_ray_integral(y, 2, &cfg);
    let lo2 = lower_ray_integral(y, 2, &cfg);

    let c_p1 = Complex64::new(p1, 0.0);
    // m11 = -(1/2pi i) [ p1 I_up(z e^{2i th}) E_lower - p1 I_low(z e^{-2i th}) E_upper ]
    let m11 = Mat2::e_lower()
        .scale(pref * c_p1 * up1)
        .add(Mat2::e_upper().scale(-pref * c_p1 * lo1));
    // m21 = -(1/2pi i) \oint z w_1 dz (one extra power of z).
    let m21 = Mat2::e_lower()
        .scale(pref * c_p1 * up2)
        .add(Mat2::e_upper().scale(-pref * c_p1 * lo2));
    // sigma1 part of m12 = -(1/2pi i) \oint w_2 dz.
    let mut m12 = Mat2::e_lower()
        .scale(pref * p2 * up2)
        .add(Mat2::e_upper().scale(pref * p2 * lo2));
    if p1 != 0.0 {
        let j = airy_prime_tail_integral_via_rays(y, &cfg)?;
        m12 = m12.add(Mat2::sigma3().scale(Complex64::new(p1 * p1, 0.0) / ivec(8.0) * j));
    }
    Ok(ModelCoefficients {
        y,
        p1,
        p2,
        m11,
        m12,
        m21,
    })
}

/// Nodes of one ray as (point, complex weight) pairs, weights carrying
/// direction and orientation so that sums approximate \int f(z) dz.
fn ray_nodes(m: usize, contour: &RayContour) -> Vec<(Complex64, Complex64)> {
    let dir = ray_direction(m);
    let orient = ray_orientation(m);
    let rule = gauss_legendre(contour.nodes);
    let breaks = graded_breaks(0.0, contour.radius, contour.panels);
    let mut out = Vec::with_capacity(contour.panels * contour.nodes);
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, wt) in rule.0.iter().zip(rule.1.iter()) {
            let r = mid + half * x;
            out.push((dir * r, dir * (orient * half * wt)));
        }
    }
    out
}

/// The double integral F(y) = \int_lower \int_upper s z e^{-2i theta(s)}
/// e^{2i theta(z)} / (s - z) dz ds by nested quadrature over the ray
/// node sets. Fubini's theorem collapses it to (pi^2 i / 2) J(y).
pub fn fubini_double_integral(y: f64, contour: &RayContour) -> Complex64 {
    let upper: Vec<(Complex64, Complex64)> = [1, 2]
        .iter()
        .flat_map(|&m| ray_nodes(m, contour))
        .collect();
    let lower: Vec<(Complex64, Complex64)> = [3, 4]
        .iter()
        .flat_map(|&m| ray_nodes(m, contour))
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for &(s, ws) in &lower {
        let es = (Complex64::new(0.0, -2.0) * theta(y, s)).exp();
        for &(z, wz) in &upper {
            let ez = (Complex64::new(0.0, 2.0) * theta(y, z)).exp();
            acc += ws * wz * s * z * es * ez / (s - z);
        }
    }
    acc
}

/// Both evaluations of the sigma3 coefficient of m12: nested 2D
/// quadrature of the double integral versus the Fubini-reduced
/// one-dimensional form (p1^2/8i) J(y).
pub fn fubini_sigma3_check(y: f64, p1: f64, contour: &RayContour) -> Result<(Complex64, Complex64)> {
    let f = fubini_double_integral(y, contour);
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let nested = -f * (p1 * p1) / (4.0 * pi2);
    let reduced =
        Complex64::new(p1 * p1, 0.0) / ivec(8.0) * airy_prime_tail_integral_via_rays(y, &contour.quad_cfg())?;
    Ok((nested, reduced))
}

/// Expansion coefficients g_l of the similarity-region parametrix,
/// related to the model coefficients by g_{l+1} = -3^{-1/3} m_{1l} and
/// to the solution coefficients by u_j(y) = -2 (g_j(y))_{21}.
#[derive(Debug, Clone)]
pub struct GCoefficients {
    pub g1: Mat2,
    g23: Option<(Mat2, Mat2)>,
}

impl GCoefficients {
    /// Second coefficient; defined only when r(0) = 0.
    pub fn g2(&self) -> Result<Mat2> {
        match &self.g23 {
            Some((g2, _)) => Ok(g2.clone()),
            None => Err(Error::UnsupportedOrder(
                "g2 is only defined for r(0) = 0".into(),
            )),
        }
    }

    /// Third coefficient; defined only when r(0) = 0.
    pub fn g3(&self) -> Result<Mat2> {
        match &self.g23 {
            Some((_, g3)) => Ok(g3.clone()),
            None => Err(Error::UnsupportedOrder(
                "g3 is only defined for r(0) = 0".into(),
            )),
        }
    }
}

/// Evaluate g_1 (always) and g_2, g_3 (when s = r(0) = 0) at y, given
/// the scattering inputs (s, r'(0), r''(0)):
///
/// ```text
/// g1 = -(3^{-1/3}/2) [[-i I_P, u_P], [u_P, i I_P]],
///      I_P = integral_y^inf u_P^2, u_P the Painleve II profile;
/// s = 0: g1 = 0,
///        g2 = -(r'(0)/(4 3^{2/3})) Ai'(y) sigma1,
///        g3 = (i r'(0)^2/24) J(y) sigma3 + (i r''(0)/48) y Ai(y) sigma1.
/// ```
pub fn g_coefficients(
    y: f64,
    scattering: (Complex64, f64, Complex64),
) -> Result<GCoefficients> {
    let (s, r0_prime, r0_second) = scattering;
    if r0_second.re.abs() > 1e-10 * r0_second.norm().max(1.0) {
        return Err(Error::Domain(format!(
            "r''(0) must be purely imaginary, got {r0_second}"
        )));
    }
    if s.norm() != 0.0 {
        let table = painleve2_solve(s, (y - 1.0, (y + 1.0).max(6.0)))?;
        let up = table.eval(y)?;
        let ip = table.integral_u_squared(y)?;
        let c = -0.5 / CBRT3;
        let g1 = Mat2::new(
            ivec(-c * ip) * -1.0,
            Complex64::new(c * up, 0.0),
            Complex64::new(c * up, 0.0),
            ivec(-c * ip),
        );
        return Ok(GCoefficients { g1, g23: None });
    }
    let t = airy_triple(y)?;
    let g2 = Mat2::sigma1().scale(Complex64::new(
        -r0_prime / (4.0 * CBRT9) * t.ai_prime,
        0.0,
    ));
    let j = airy_prime_tail_integral(y)?;
    let g3 = Mat2::sigma3()
        .scale(ivec(r0_prime * r0_prime / 24.0 * j))
        .add(Mat2::sigma1().scale(r0_second * ivec(1.0) / 48.0 * (y * t.ai)));
    Ok(GCoefficients {
        g1: ZERO2,
        g23: Some((g2, g3)),
    })
}

/// One row of the two-route verification table.
#[derive(Debug, Clone)]
pub struct CoefficientCheckRow {
    pub y: f64,
    pub p1: f64,
    pub p2: Complex64,
    pub entry: String,
    pub closed_form: Complex64,
    pub quadrature: Complex64,
    pub abs_err: f64,
}

/// Entrywise comparison of the two routes over a parameter grid, one
/// row per matrix entry.
pub fn coefficient_check_rows(
    ys: &[f64],
    p1s: &[f64],
    p2s: &[Complex64],
    contour: &RayContour,
) -> Result<Vec<CoefficientCheckRow>> {
    let mut rows = Vec::new();
    for &y in ys {
        for &p1 in p1s {
            for &p2 in p2s {
                let cf = closed_form_coefficients(y, p1, p2)?;
                let qd = quadrature_coefficients(y, p1, p2, contour)?;
                for (name, a, b) in [
                    ("m11", &cf.m11, &qd.m11),
                    ("m12", &cf.m12, &qd.m12),
                    ("m21", &cf.m21, &qd.m21),
                ] {
                    for i in 0..2 {
                        for jj in 0..2 {
                            let (c, q) = (a.entry(i, jj), b.entry(i, jj));
                            rows.push(CoefficientCheckRow {
                                y,
                                p1,
                                p2,
                                entry: format!("{name}[{i}][{jj}]"),
                                closed_form: c,
                                quadrature: q,
                                abs_err: (c - q).norm(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(rows)
}

/// Default verification grid: y in {-2..2}, p1 in {0, 1}, p2 in {0, i}.
pub fn default_check_grid() -> (Vec<f64>, Vec<f64>, Vec<Complex64>) {
    (
        vec![-2.0, -1.0, 0.0, 1.0, 2.0],
        vec![0.0, 1.0],
        vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)],
    )
}
