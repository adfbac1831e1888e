//! Gauss-Legendre quadrature: nodes/weights by Newton iteration on the
//! Legendre polynomial, plus panel-composite helpers for real and complex
//! integrands.

use num_complex::Complex64;
use once_cell::sync::Lazy;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
///
/// Newton iteration on P_n with the asymptotic Chebyshev-angle initial
/// guess; converges to machine precision in a handful of steps.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Initial guess: Chebyshev-like angle.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
            dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Cached 24-point rule: the workhorse panel size for the contour integrals.
pub static GL24: Lazy<(Vec<f64>, Vec<f64>)> = Lazy::new(|| gauss_legendre(24));

/// Integrate a real function over [a, b] with a single n-point panel.
pub fn integrate_panel(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let (nodes, weights) = rule;
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights.iter()) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Integrate a real function over consecutive panels given by breakpoints.
pub fn integrate_panels(f: &mut dyn FnMut(f64) -> f64, breaks: &[f64], rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let mut acc = 0.0;
    for win in breaks.windows(2) {
        acc += integrate_panel(f, win[0], win[1], rule);
    }
    acc
}

/// Integrate a complex function over consecutive panels given by breakpoints.
pub fn integrate_panels_complex(
    f: &mut dyn FnMut(f64) -> Complex64,
    breaks: &[f64],
    rule: &(Vec<f64>, Vec<f64>),
) -> Complex64 {
    let (nodes, weights) = rule;
    let mut acc = Complex64::new(0.0, 0.0);
    for win in breaks.windows(2) {
        let half = 0.5 * (win[1] - win[0]);
        let mid = 0.5 * (win[0] + win[1]);
        let mut panel = Complex64::new(0.0, 0.0);
        for (x, w) in nodes.iter().zip(weights.iter()) {
            panel += f(mid + half * x) * *w;
        }
        acc += panel * half;
    }
    acc
}

/// Breakpoints graded toward `a` (geometric refinement), covering [a, b].
pub fn graded_breaks(a: f64, b: f64, n_panels: usize) -> Vec<f64> {
    assert!(n_panels >= 1 && b > a);
    let mut breaks = Vec::with_capacity(n_panels + 1);
    // Panel widths grow geometrically by factor 2 from the `a` end.
    let ratio: f64 = 2.0;
    let total: f64 = (0..n_panels).map(|i| ratio.powi(i as i32)).sum();
    let mut x = a;
    breaks.push(a);
    for i in 0..n_panels {
        x += (b - a) * ratio.powi(i as i32) / total;
        breaks.push(x);
    }
    *breaks.last_mut().unwrap() = b;
    breaks
}
