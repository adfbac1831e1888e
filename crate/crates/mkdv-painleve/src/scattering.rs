//! Direct scattering transform for the defocusing mKdV flow.
//!
//! For real initial data q = u0 the Zakharov-Shabat system
//!
//! ```text
//! phi' = [[-ik, q], [q, ik]] phi
//! ```
//!
//! has Jost solutions behaving like e^{-ikx}(1,0) as x -> -inf. Writing
//! phi = (A e^{-ikx}, B e^{+ikx}) removes the oscillation from the
//! off-support dynamics and gives the gauge system
//!
//! ```text
//! A' = q e^{+2ikx} B,    B' = q e^{-2ikx} A,
//! ```
//!
//! integrated with A = 1, B = 0 at the left edge of the support. The
//! transmission and reflection amplitudes are a(k) = A(+X), b(k) = B(+X),
//! and the reflection coefficient in the convention used throughout this
//! crate is
//!
//! ```text
//! r(k) = -i b(k) / a(k).
//! ```
//!
//! Consequences used as checks everywhere: |a|^2 - |b|^2 = 1 along the
//! whole integration (so sup |r| < 1), the symmetry r(k) = -conj(r(-k)),
//! and the exact value r(0) = -i tanh(integral of u0). First order in the
//! amplitude (Born approximation) r(k) is -i times the Fourier transform
//! of u0 at frequency 2k.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{num_complex::Complex as FftComplex, FftPlanner};

use crate::error::{Error, Result};
use crate::quad::{integrate_panels_complex, GL24};

/// Amplitude below which initial data are treated as supported.
const SUPPORT_FLOOR: f64 = 1e-14;

/// Built-in initial-data profiles, evaluated analytically so the scattering
/// integrator is not limited by interpolation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    /// eps * sech(x - center): positive bump with mass eps * pi.
    Sech { eps: f64, center: f64 },
    /// eps * exp(-(x - center)^2): positive bump with mass eps * sqrt(pi).
    Gaussian { eps: f64, center: f64 },
    /// eps * d/dx sech(x - center): odd derivative shape with zero mass.
    ZeroMass { eps: f64, center: f64 },
    /// eps * (sech(x - center) - sech((x - center)/2) / 8): the 1/8 weight
    /// cancels the second Fourier moment, so the Born reflection has
    /// r''(0) = 0 while the mass (hence r(0), r'(0) after a shift) stays
    /// of order eps.
    TwoScale { eps: f64, center: f64 },
}

impl Profile {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Profile::Sech { eps, center } => eps * sech(x - center),
            Profile::Gaussian { eps, center } => {
                let z = x - center;
                eps * (-z * z).exp()
            }
            Profile::ZeroMass { eps, center } => {
                let z = x - center;
                -eps * sech(z) * z.tanh()
            }
            Profile::TwoScale { eps, center } => {
                let z = x - center;
                eps * (sech(z) - 0.125 * sech(0.5 * z))
            }
        }
    }

    /// Closed-form integral of the profile.
    pub fn exact_mass(&self) -> f64 {
        use std::f64::consts::PI;
        match *self {
            Profile::Sech { eps, .. } => eps * PI,
            Profile::Gaussian { eps, .. } => eps * PI.sqrt(),
            Profile::ZeroMass { .. } => 0.0,
            // sech(x/2) integrates to 2 pi, weighted by 1/8.
            Profile::TwoScale { eps, .. } => eps * PI * 0.75,
        }
    }

    /// Radius beyond which |u0| stays below the support floor.
    pub fn support_radius(&self) -> f64 {
        let eps = match *self {
            Profile::Sech { eps, .. }
            | Profile::Gaussian { eps, .. }
            | Profile::ZeroMass { eps, .. }
            | Profile::TwoScale { eps, .. } => eps.abs().max(1e-300),
        };
        let r = match *self {
            // eps * 2 e^{-|z|} < floor, with the slower e^{-|z|/2} scale
            // for the two-scale shape.
            Profile::Sech { .. } | Profile::ZeroMass { .. } => (2.0 * eps / SUPPORT_FLOOR).ln(),
            Profile::TwoScale { .. } => 2.0 * (0.25 * eps / SUPPORT_FLOOR).ln(),
            Profile::Gaussian { .. } => (eps / SUPPORT_FLOOR).ln().max(1.0).sqrt(),
        };
        let center = match *self {
            Profile::Sech { center, .. }
            | Profile::Gaussian { center, .. }
            | Profile::ZeroMass { center, .. }
            | Profile::TwoScale { center, .. } => center,
        };
        r.max(1.0) + center.abs() + 1.0
    }
}

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

/// Natural cubic spline on a uniform grid, for initial data supplied as
/// samples rather than as a formula.
#[derive(Debug, Clone)]
struct CubicSpline {
    x0: f64,
    dx: f64,
    values: Vec<f64>,
    /// Second derivatives at the nodes (zero at both ends).
    second: Vec<f64>,
}

impl CubicSpline {
    fn fit(x0: f64, dx: f64, values: &[f64]) -> CubicSpline {
        let n = values.len();
        let mut second = vec![0.0; n];
        if n >= 3 {
            // Thomas algorithm for the (1, 4, 1) tridiagonal system.
            let m = n - 2;
            let mut diag = vec![4.0; m];
            let mut rhs: Vec<f64> = (1..n - 1)
                .map(|i| 6.0 * (values[i - 1] - 2.0 * values[i] + values[i + 1]) / (dx * dx))
                .collect();
            for i in 1..m {
                let w = 1.0 / diag[i - 1];
                diag[i] -= w;
                rhs[i] -= w * rhs[i - 1];
            }
            second[m] = rhs[m - 1] / diag[m - 1];
            for i in (0..m - 1).rev() {
                second[i + 1] = (rhs[i] - second[i + 2]) / diag[i];
            }
        }
        CubicSpline {
            x0,
            dx,
            values: values.to_vec(),
            second,
        }
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.values.len();
        let t = (x - self.x0) / self.dx;
        if t <= 0.0 || t >= (n - 1) as f64 {
            return 0.0;
        }
        let i = (t.floor() as usize).min(n - 2);
        let s = t - i as f64;
        let h2 = self.dx * self.dx;
        let (f0, f1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        (1.0 - s) * f0 + s * f1
            + h2 / 6.0 * ((1.0 - s) * ((1.0 - s) * (1.0 - s) - 1.0) * m0 + s * (s * s - 1.0) * m1)
    }
}

#[derive(Debug, Clone)]
enum Evaluator {
    Analytic(Profile),
    Spline(CubicSpline),
}

/// Sampled initial condition together with the machinery to evaluate it at
/// arbitrary points (analytically for the built-in profiles, by cubic
/// spline for data read from files).
#[derive(Debug, Clone)]
pub struct InitialDatum {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Trapezoid-rule integral of u0 over the grid.
    pub mass: f64,
    /// |u0| < 1e-14 outside [-support_radius, support_radius].
    pub support_radius: f64,
    evaluator: Evaluator,
}

impl InitialDatum {
    /// Sample a built-in profile on a uniform symmetric grid. The grid is
    /// what gets written to files; scattering and evolution evaluate the
    /// profile analytically.
    pub fn from_profile(profile: Profile, x_max: f64, dx: f64) -> Result<InitialDatum> {
        if !(x_max > 0.0) || !(dx > 0.0) || dx > 1.0 {
            return Err(Error::Domain(format!(
                "from_profile: need x_max > 0 and 0 < dx <= 1, got x_max = {x_max}, dx = {dx}"
            )));
        }
        let n = (2.0 * x_max / dx).round() as usize;
        let grid: Vec<f64> = (0..=n).map(|i| -x_max + i as f64 * dx).collect();
        let values: Vec<f64> = grid.iter().map(|&x| profile.eval(x)).collect();
        let mass = trapezoid(dx, &values);
        Ok(InitialDatum {
            support_radius: profile.support_radius().min(x_max),
            grid,
            values,
            mass,
            evaluator: Evaluator::Analytic(profile),
        })
    }

    /// Build from uniform samples (e.g. a CSV file with columns x, u0).
    pub fn from_samples(grid: Vec<f64>, values: Vec<f64>) -> Result<InitialDatum> {
        if grid.len() != values.len() || grid.len() < 8 {
            return Err(Error::Domain(format!(
                "from_samples: need >= 8 matching samples, got {} x and {} u0",
                grid.len(),
                values.len()
            )));
        }
        let dx = grid[1] - grid[0];
        if !(dx > 0.0) {
            return Err(Error::Domain("from_samples: grid must ascend".into()));
        }
        for w in grid.windows(2) {
            if ((w[1] - w[0]) - dx).abs() > 1e-9 * dx.max(1.0) {
                return Err(Error::Domain(format!(
                    "from_samples: grid not uniform near x = {}",
                    w[0]
                )));
            }
        }
        let edge = values[0].abs().max(values[values.len() - 1].abs());
        if edge > 1e-12 {
            return Err(Error::Domain(format!(
                "from_samples: data must decay at the grid edges (|u0| = {edge:.2e} there)"
            )));
        }
        let mut radius: f64 = 0.0;
        for (x, u) in grid.iter().zip(&values) {
            if u.abs() >= SUPPORT_FLOOR {
                radius = radius.max(x.abs());
            }
        }
        let mass = trapezoid(dx, &values);
        let spline = CubicSpline::fit(grid[0], dx, &values);
        Ok(InitialDatum {
            grid,
            values,
            mass,
            support_radius: radius + 1.0,
            evaluator: Evaluator::Spline(spline),
        })
    }

    /// Evaluate u0 anywhere (zero outside the sampled range for splines).
    pub fn eval(&self, x: f64) -> f64 {
        match &self.evaluator {
            Evaluator::Analytic(p) => p.eval(x),
            Evaluator::Spline(s) => s.eval(x),
        }
    }

    pub fn profile(&self) -> Option<Profile> {
        match &self.evaluator {
            Evaluator::Analytic(p) => Some(*p),
            Evaluator::Spline(_) => None,
        }
    }

    /// Relative amplitude of the top 10% of the discrete spectrum: below
    /// 1e-10 means the grid resolves the data.
    pub fn spectral_tail(&self) -> f64 {
        let n = self.values.len();
        let mut buf: Vec<FftComplex<f64>> = self
            .values
            .iter()
            .map(|&v| FftComplex::new(v, 0.0))
            .collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let peak = buf.iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        // Modes with index in (0.45 n, 0.55 n) are the highest wavenumbers.
        let lo = (0.45 * n as f64) as usize;
        let hi = (0.55 * n as f64) as usize;
        let tail = buf[lo..hi].iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
        tail / peak
    }
}

fn trapezoid(dx: f64, values: &[f64]) -> f64 {
    let inner: f64 = values[1..values.len() - 1].iter().sum();
    dx * (inner + 0.5 * (values[0] + values[values.len() - 1]))
}

/// Reflection coefficient sampled on a symmetric k-grid, with its
/// derivatives at k = 0 (the inputs to the asymptotic coefficient
/// formulas).
#[derive(Debug, Clone)]
pub struct ReflectionData {
    pub k_grid: Vec<f64>,
    pub r_values: Vec<Complex64>,
    /// r(0); purely imaginary (structure enforced after verification).
    pub r0: Complex64,
    /// r'(0); purely real. NaN if the grid lacks the difference stencil.
    pub r0_prime: Complex64,
    /// r''(0); purely imaginary. NaN if the grid lacks the stencil.
    pub r0_second: Complex64,
    pub sup_abs: f64,
    /// max_k | |a|^2 - |b|^2 - 1 |: integration accuracy certificate.
    pub unitarity_residual: f64,
}

impl ReflectionData {
    /// max_k |r(k) + conj(r(-k))|.
    pub fn symmetry_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, &k) in self.k_grid.iter().enumerate() {
            if k < 0.0 {
                continue;
            }
            // Grid is sorted and symmetric: mirror index.
            let j = self.k_grid.len() - 1 - i;
            worst = worst.max((self.r_values[j] + self.r_values[i].conj()).norm());
        }
        worst
    }
}

/// Default k-grid: a stencil cluster at 0.01 * {1, 2, 3, 4, 6, 8} for the
/// derivatives at 0, uniform coverage to |k| = 3 where the reflection has
/// its structure, and sparser tails to |k| = 12 to confirm decay.
pub fn default_k_grid() -> Vec<f64> {
    base_k_grid(0.01)
}

/// Same layout scaled down near zero (h = 0.005), for refinement checks.
pub fn refined_k_grid() -> Vec<f64> {
    base_k_grid(0.005)
}

fn base_k_grid(h: f64) -> Vec<f64> {
    let mut ks: Vec<f64> = vec![0.0];
    for m in [1.0, 2.0, 3.0, 4.0, 6.0, 8.0] {
        ks.push(m * h);
    }
    let mut k = 0.05;
    while k < 3.0 + 1e-12 {
        ks.push(k);
        k += 0.05;
    }
    k = 3.1;
    while k < 6.0 + 1e-12 {
        ks.push(k);
        k += 0.1;
    }
    k = 6.25;
    while k < 12.0 + 1e-12 {
        ks.push(k);
        k += 0.25;
    }
    let mut full: Vec<f64> = ks.iter().skip(1).map(|&k| -k).collect();
    full.extend(ks);
    full.sort_by(|a, b| a.partial_cmp(b).unwrap());
    full.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    full
}

/// Transmission/reflection pair (a, b) at one wavenumber, by fourth-order
/// Runge-Kutta on the gauge system across the support of the data.
fn scattering_pair(datum: &InitialDatum, k: f64, step_scale: f64) -> (Complex64, Complex64) {
    let x_span = datum.support_radius;
    let h_target = step_scale * (0.004_f64).min(0.04 / k.abs().max(1.0));
    let n = ((2.0 * x_span) / h_target).ceil() as usize;
    let h = 2.0 * x_span / n as f64;
    let mut a = Complex64::new(1.0, 0.0);
    let mut b = Complex64::new(0.0, 0.0);
    let rhs = |x: f64, a: Complex64, b: Complex64| -> (Complex64, Complex64) {
        let q = datum.eval(x);
        let (s, c) = (2.0 * k * x).sin_cos();
        let phase = Complex64::new(c, s);
        (q * phase * b, q * phase.conj() * a)
    };
    let mut x = -x_span;
    for _ in 0..n {
        let (k1a, k1b) = rhs(x, a, b);
        let (k2a, k2b) = rhs(x + 0.5 * h, a + 0.5 * h * k1a, b + 0.5 * h * k1b);
        let (k3a, k3b) = rhs(x + 0.5 * h, a + 0.5 * h * k2a, b + 0.5 * h * k2b);
        let (k4a, k4b) = rhs(x + h, a + h * k3a, b + h * k3b);
        a += h / 6.0 * (k1a + 2.0 * (k2a + k3a) + k4a);
        b += h / 6.0 * (k1b + 2.0 * (k2b + k3b) + k4b);
        x += h;
    }
    (a, b)
}

/// Integrate the scattering problem over a symmetric k-grid and package
/// the reflection coefficient with its small-k derivatives.
pub fn compute_reflection(datum: &InitialDatum, k_grid: &[f64]) -> Result<ReflectionData> {
    compute_reflection_with_step(datum, k_grid, 1.0)
}

/// As compute_reflection, with the integrator step scaled by step_scale
/// (used by refinement checks; step_scale = 0.5 halves the x-step).
pub fn compute_reflection_with_step(
    datum: &InitialDatum,
    k_grid: &[f64],
    step_scale: f64,
) -> Result<ReflectionData> {
    let mut ks = k_grid.to_vec();
    ks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ks.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    if !ks.iter().any(|&k| k == 0.0) {
        return Err(Error::Domain("k-grid must contain k = 0".into()));
    }
    for &k in &ks {
        if !ks.iter().any(|&m| (m + k).abs() < 1e-12) {
            return Err(Error::Domain(format!(
                "k-grid must be symmetric about 0; {k} has no mirror"
            )));
        }
    }

    let pairs: Vec<(Complex64, Complex64)> = ks
        .par_iter()
        .map(|&k| scattering_pair(datum, k, step_scale))
        .collect();

    let mut unitarity: f64 = 0.0;
    let mut sup_abs: f64 = 0.0;
    let mut r_values = Vec::with_capacity(ks.len());
    for (a, b) in &pairs {
        unitarity = unitarity.max((a.norm_sqr() - b.norm_sqr() - 1.0).abs());
        let r = Complex64::new(0.0, -1.0) * b / a;
        sup_abs = sup_abs.max(r.norm());
        r_values.push(r);
    }
    if unitarity > 1e-6 {
        return Err(Error::Solver(format!(
            "scattering integration lost unitarity: |a|^2 - |b|^2 - 1 = {unitarity:.3e}"
        )));
    }

    let mut rd = ReflectionData {
        k_grid: ks,
        r_values,
        r0: Complex64::new(f64::NAN, f64::NAN),
        r0_prime: Complex64::new(f64::NAN, f64::NAN),
        r0_second: Complex64::new(f64::NAN, f64::NAN),
        sup_abs,
        unitarity_residual: unitarity,
    };

    let sym = rd.symmetry_residual();
    if sym > 1e-8 {
        return Err(Error::Convention(format!(
            "reflection symmetry r(k) = -conj(r(-k)) violated by {sym:.3e}; \
             wrong sign convention or inadequate resolution"
        )));
    }
    if sup_abs >= 1.0 {
        return Err(Error::Convention(format!(
            "sup |r| = {sup_abs} >= 1; impossible for real data in this convention"
        )));
    }

    let i0 = rd.k_grid.iter().position(|&k| k == 0.0).unwrap();
    rd.r0 = Complex64::new(0.0, rd.r_values[i0].im);
    if let Ok((r0, r0p, r0pp)) = derivatives_at_zero(&rd) {
        rd.r0 = r0;
        rd.r0_prime = r0p;
        rd.r0_second = r0pp;
    }
    Ok(rd)
}

/// Centered fourth-order finite differences for r'(0) and r''(0) on the
/// stencil {0, +-h, +-2h, +-4h}, Richardson-extrapolated between spacings
/// h and 2h. Verifies the symmetry structure (r0 imaginary, r'(0) real,
/// r''(0) imaginary) to 1e-8 on the raw values, then enforces it exactly.
pub fn derivatives_at_zero(rd: &ReflectionData) -> Result<(Complex64, Complex64, Complex64)> {
    let near: usize = rd.k_grid.iter().filter(|k| k.abs() <= 0.1).count();
    if near < 5 {
        return Err(Error::Domain(format!(
            "k-grid has only {near} points in |k| <= 0.1; need at least 5"
        )));
    }
    let lookup = |k: f64| -> Option<Complex64> {
        rd.k_grid
            .iter()
            .position(|&g| (g - k).abs() < 1e-12)
            .map(|i| rd.r_values[i])
    };
    // Smallest h > 0 with +-h, +-2h, +-4h all on the grid.
    let mut stencil: Option<f64> = None;
    for &k in rd.k_grid.iter().filter(|&&k| k > 0.0) {
        if [2.0 * k, 4.0 * k, -k, -2.0 * k, -4.0 * k]
            .iter()
            .all(|&m| lookup(m).is_some())
        {
            stencil = Some(k);
            break;
        }
    }
    let h = stencil.ok_or_else(|| {
        Error::Domain("k-grid lacks a {h, 2h, 4h} stencil around 0 for derivatives".into())
    })?;
    let r0 = lookup(0.0).unwrap();
    let d1 = |h: f64| -> Complex64 {
        let (p1, m1, p2, m2) = (
            lookup(h).unwrap(),
            lookup(-h).unwrap(),
            lookup(2.0 * h).unwrap(),
            lookup(-2.0 * h).unwrap(),
        );
        (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h)
    };
    let d2 = |h: f64| -> Complex64 {
        let (p1, m1, p2, m2) = (
            lookup(h).unwrap(),
            lookup(-h).unwrap(),
            lookup(2.0 * h).unwrap(),
            lookup(-2.0 * h).unwrap(),
        );
        (-p2 + 16.0 * p1 - 30.0 * r0 + 16.0 * m1 - m2) / (12.0 * h * h)
    };
    // Both formulas are O(h^4); the 16/15 combination cancels that term.
    let r0_prime = (16.0 * d1(h) - d1(2.0 * h)) / 15.0;
    let r0_second = (16.0 * d2(h) - d2(2.0 * h)) / 15.0;

    let scale = 1.0_f64.max(r0.norm()).max(r0_prime.norm()).max(r0_second.norm());
    let violation = r0
        .re
        .abs()
        .max(r0_prime.im.abs())
        .max(r0_second.re.abs());
    if violation > 1e-8 * scale {
        return Err(Error::Convention(format!(
            "derivatives at k = 0 violate the symmetry structure by {violation:.3e} \
             (r0 must be imaginary, r'(0) real, r''(0) imaginary)"
        )));
    }
    Ok((
        Complex64::new(0.0, r0.im),
        Complex64::new(r0_prime.re, 0.0),
        Complex64::new(0.0, r0_second.im),
    ))
}

/// First-order (Born) reflection: -i times the Fourier transform of u0 at
/// frequency 2k, computed by panel quadrature. Independent of the ODE
/// integration path, so it serves as an oracle for small amplitudes.
pub fn born_reflection(datum: &InitialDatum, k: f64) -> Complex64 {
    let x_span = datum.support_radius;
    let n_panels = (2.0 * x_span).ceil() as usize;
    let breaks: Vec<f64> = (0..=n_panels)
        .map(|i| -x_span + 2.0 * x_span * i as f64 / n_panels as f64)
        .collect();
    let hat = integrate_panels_complex(
        &mut |x| {
            let (s, c) = (2.0 * k * x).sin_cos();
            datum.eval(x) * Complex64::new(c, -s)
        },
        &breaks,
        &GL24,
    );
    Complex64::new(0.0, -1.0) * hat
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sech_datum(eps: f64) -> InitialDatum {
        InitialDatum::from_profile(Profile::Sech { eps, center: 0.0 }, 40.0, 0.01).unwrap()
    }

    fn zero_mass_datum(eps: f64, center: f64) -> InitialDatum {
        InitialDatum::from_profile(Profile::ZeroMass { eps, center }, 40.0, 0.01).unwrap()
    }

    fn close(z: Complex64, re: f64, im: f64, tol: f64) -> bool {
        (z - Complex64::new(re, im)).norm() <= tol
    }

    #[test]
    fn zero_potential_scatters_nothing() {
        let grid: Vec<f64> = (0..=800).map(|i| -40.0 + 0.1 * i as f64).collect();
        let datum = InitialDatum::from_samples(grid, vec![0.0; 801]).unwrap();
        let rd = compute_reflection(&datum, &default_k_grid()).unwrap();
        assert_eq!(rd.sup_abs, 0.0);
        assert_eq!(rd.r0, Complex64::new(0.0, 0.0));
        assert_eq!(rd.r0_prime, Complex64::new(0.0, 0.0));
        assert_eq!(rd.r0_second, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn matches_frozen_sech_small_amplitude() {
        // Frozen high-precision integration of the same system, eps = 0.05.
        let rd = compute_reflection(&sech_datum(0.05), &default_k_grid()).unwrap();
        let at = |k: f64| rd.r_values[rd.k_grid.iter().position(|&g| (g - k).abs() < 1e-12).unwrap()];
        assert!(close(at(0.0), 0.0, -0.155800329221618956, 5e-9));
        assert!(close(at(0.25), -0.000811722637840456105, -0.11823585303574193, 5e-9));
        assert!(close(at(1.0), -0.0000380171570566919015, -0.0136052290898137223, 5e-9));
        assert!(close(at(2.0), -7.53564103520649325e-7, -0.000589087378241454758, 5e-9));
    }

    #[test]
    fn matches_frozen_sech_moderate_amplitude() {
        let rd = compute_reflection(&sech_datum(0.5), &default_k_grid()).unwrap();
        let at = |k: f64| rd.r_values[rd.k_grid.iter().position(|&g| (g - k).abs() < 1e-12).unwrap()];
        assert!(close(at(0.0), 0.0, -0.917152335667274336, 5e-9));
        assert!(close(at(0.1), -0.191831549018681842, -0.88935960553932252, 5e-9));
        assert!(close(at(0.5), -0.351246809009804019, -0.57748793060409758, 5e-9));
        assert!(close(at(2.0), -0.00110975056969752062, -0.00852279390149022738, 5e-9));
        assert!(rd.sup_abs < 1.0);
    }

    #[test]
    fn matches_frozen_zero_mass_tables() {
        let rd = compute_reflection(&zero_mass_datum(0.05, 0.0), &default_k_grid()).unwrap();
        let at = |k: f64| rd.r_values[rd.k_grid.iter().position(|&g| (g - k).abs() < 1e-12).unwrap()];
        assert!(close(at(0.1), 0.0299383531307295735, 0.0000252651928475574741, 5e-9));
        assert!(close(at(0.5), 0.062528182554096018, -0.0000549543739819446128, 5e-9));

        let rd = compute_reflection(&zero_mass_datum(0.3, 0.0), &default_k_grid()).unwrap();
        let at = |k: f64| rd.r_values[rd.k_grid.iter().position(|&g| (g - k).abs() < 1e-12).unwrap()];
        assert!(close(at(0.25), 0.34391202513562059, 0.00911066826689742981, 5e-9));
        assert!(close(at(1.0), 0.16386757431777706, -0.00691743332773881381, 5e-9));
    }

    #[test]
    fn r_at_zero_is_minus_i_tanh_mass() {
        for eps in [0.05, 0.3, 0.5] {
            let datum = sech_datum(eps);
            let rd = compute_reflection(&datum, &default_k_grid()).unwrap();
            let target = -(std::f64::consts::PI * eps).tanh();
            assert!(
                (rd.r0.im - target).abs() < 1e-9,
                "eps = {eps}: r(0) = {}, want {target}i",
                rd.r0
            );
        }
    }

    #[test]
    fn symmetry_and_bound_invariants() {
        for datum in [
            sech_datum(0.3),
            zero_mass_datum(0.3, 0.0),
            InitialDatum::from_profile(Profile::Gaussian { eps: 0.2, center: 0.0 }, 40.0, 0.01)
                .unwrap(),
            InitialDatum::from_profile(Profile::TwoScale { eps: 0.1, center: 0.5 }, 40.0, 0.01)
                .unwrap(),
        ] {
            let rd = compute_reflection(&datum, &default_k_grid()).unwrap();
            assert!(rd.symmetry_residual() <= 1e-10, "sym = {:.3e}", rd.symmetry_residual());
            assert!(rd.sup_abs < 1.0);
            assert!(rd.unitarity_residual < 1e-10);
        }
    }

    #[test]
    fn zero_mass_reflection_vanishes_at_origin() {
        for (eps, center) in [(0.05, 0.0), (0.3, 0.0), (0.05, 1.0)] {
            let rd = compute_reflection(&zero_mass_datum(eps, center), &default_k_grid()).unwrap();
            assert!(
                rd.r0.norm() <= 1e-12,
                "eps = {eps}, center = {center}: |r(0)| = {:.3e}",
                rd.r0.norm()
            );
        }
    }

    #[test]
    fn matches_frozen_shifted_zero_mass_derivative_stencil() {
        let rd = compute_reflection(&zero_mass_datum(0.05, 1.0), &default_k_grid()).unwrap();
        let at = |k: f64| rd.r_values[rd.k_grid.iter().position(|&g| (g - k).abs() < 1e-12).unwrap()];
        assert!(close(at(0.01), 0.00314202282789238955, -0.0000625348650822532514, 5e-10));
        assert!(close(at(0.02), 0.00627093635476631983, -0.000249722896502216041, 5e-10));
        assert!(close(at(-0.02), -0.00627093635476631983, -0.000249722896502216041, 5e-10));
    }

    #[test]
    fn derivative_structure_and_born_values() {
        // Zero-mass data: r'(0) = 2 pi eps to first order, purely real.
        let rd = compute_reflection(&zero_mass_datum(0.05, 0.0), &default_k_grid()).unwrap();
        let expect = 2.0 * std::f64::consts::PI * 0.05;
        assert_eq!(rd.r0_prime.im, 0.0);
        assert!(
            (rd.r0_prime.re / expect - 1.0).abs() < 0.01,
            "r'(0) = {} vs Born {expect}",
            rd.r0_prime
        );
        // Sech data: r''(0) = i eps pi^3 to first order, purely imaginary.
        let rd = compute_reflection(&sech_datum(0.05), &default_k_grid()).unwrap();
        assert_eq!(rd.r0_second.re, 0.0);
        let expect = 0.05 * std::f64::consts::PI.powi(3);
        assert!(
            (rd.r0_second.im / expect - 1.0).abs() < 0.05,
            "r''(0) = {} vs Born {expect}i",
            rd.r0_second
        );
    }

    #[test]
    fn born_error_scales_cubically() {
        // b(k) expands in odd powers of the amplitude and a(k) in even
        // powers, so r + i*FourierTransform(u0)(2k) = O(eps^3): halving
        // eps cuts the Born error by 8, not 4. (Restrict to |k| <= 3;
        // beyond that both r and the transform sit at the rounding floor.)
        let sup_err = |eps: f64| -> f64 {
            let datum = sech_datum(eps);
            let rd = compute_reflection(&datum, &default_k_grid()).unwrap();
            rd.k_grid
                .iter()
                .zip(&rd.r_values)
                .filter(|(k, _)| k.abs() <= 3.0)
                .map(|(&k, &r)| (r - born_reflection(&datum, k)).norm())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (sup_err(1e-3), sup_err(5e-4));
        let ratio = e1 / e2;
        assert!(
            (ratio - 8.0).abs() < 2.0,
            "halving eps should cut the Born error 8x; ratio = {ratio}, e1 = {e1:.3e}"
        );
        // The quadratic bound |r - born| <= C eps^2 still holds trivially.
        assert!(e1 <= 1.0 * 1e-6, "e1 = {e1:.3e} exceeds C eps^2");
    }

    #[test]
    fn spline_datum_agrees_with_analytic() {
        let profile = Profile::Sech { eps: 0.3, center: 0.0 };
        let analytic = InitialDatum::from_profile(profile, 40.0, 0.01).unwrap();
        let sampled =
            InitialDatum::from_samples(analytic.grid.clone(), analytic.values.clone()).unwrap();
        assert!(sampled.spectral_tail() < 1e-10);
        assert!((sampled.mass - 0.3 * std::f64::consts::PI).abs() < 1e-10);
        let ks: Vec<f64> = vec![
            -2.0, -1.0, -0.5, -0.25, -0.08, -0.04, -0.03, -0.02, -0.01, 0.0, 0.01, 0.02, 0.03,
            0.04, 0.08, 0.25, 0.5, 1.0, 2.0,
        ];
        let ra = compute_reflection(&analytic, &ks).unwrap();
        let rs = compute_reflection(&sampled, &ks).unwrap();
        let worst = ra
            .r_values
            .iter()
            .zip(&rs.r_values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0_f64, f64::max);
        assert!(worst < 1e-8, "spline vs analytic reflection differs by {worst:.3e}");
    }

    #[test]
    fn refinement_leaves_derivatives_fixed() {
        let datum = zero_mass_datum(0.05, 0.5);
        let coarse = compute_reflection(&datum, &default_k_grid()).unwrap();
        let fine =
            compute_reflection_with_step(&datum, &refined_k_grid(), 0.5).unwrap();
        assert!(
            (coarse.r0_prime - fine.r0_prime).norm() <= 1e-8,
            "r'(0) moved by {:.3e} under refinement",
            (coarse.r0_prime - fine.r0_prime).norm()
        );
        assert!((coarse.r0_second - fine.r0_second).norm() <= 1e-6);
    }

    #[test]
    fn two_scale_kills_second_derivative() {
        // The 1/8 weight cancels r''(0) at first order in eps, so for the
        // unshifted profile both r'(0) (even-profile symmetry) and r''(0)
        // (moment cancellation) are O(eps^3), orders below the plain sech
        // value r''(0) ~ i eps pi^3.
        let eps = 0.01;
        let datum =
            InitialDatum::from_profile(Profile::TwoScale { eps, center: 0.0 }, 40.0, 0.01)
                .unwrap();
        let rd = compute_reflection(&datum, &default_k_grid()).unwrap();
        assert!((datum.mass - 0.0075 * std::f64::consts::PI).abs() < 1e-10);
        let cubic = eps * eps * eps;
        assert!(
            rd.r0_prime.norm() < 50.0 * cubic,
            "r'(0) = {} not O(eps^3)",
            rd.r0_prime
        );
        assert!(
            rd.r0_second.norm() < 500.0 * cubic,
            "r''(0) = {} not O(eps^3)",
            rd.r0_second
        );
        let sech_rd = compute_reflection(&sech_datum(eps), &default_k_grid()).unwrap();
        assert!(rd.r0_second.norm() < 1e-2 * sech_rd.r0_second.norm());
    }

    #[test]
    fn rejects_bad_grids() {
        let datum = sech_datum(0.1);
        assert!(compute_reflection(&datum, &[0.1, 0.2, -0.1]).is_err());
        assert!(compute_reflection(&datum, &[-0.1, 0.0, 0.2]).is_err());
        let rd = compute_reflection(&datum, &[-0.5, 0.0, 0.5]).unwrap();
        assert!(rd.r0_prime.re.is_nan());
        assert!(derivatives_at_zero(&rd).is_err());
    }
}
