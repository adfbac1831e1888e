//! Numerical verification toolkit for the self-similar (Painleve) sector
//! of the defocusing modified Korteweg-de Vries equation
//!
//! ```text
//! u_t - 6 u^2 u_x + u_xxx = 0
//! ```
//!
//! posed with real rapidly decaying initial data. In the space-time region
//! |x| <= M t^{1/3} the solution admits an expansion in powers of t^{-1/3}
//! whose coefficients are built from a Painleve II transcendent and Airy
//! functions of the similarity variable y = x (3t)^{-1/3}. This crate
//! computes everything on both sides of that statement:
//!
//! * scattering data: the reflection coefficient r(k) of the associated
//!   Zakharov-Shabat spectral problem, and its derivatives at k = 0;
//! * the coefficient functions u_1 (Painleve II), u_2, u_3 (Airy) of the
//!   expansion, together with the linear ODE hierarchy they satisfy;
//! * the contour-integral (Riemann-Hilbert model problem) representation
//!   of the same coefficients, verified against closed forms by quadrature
//!   over rays in the complex plane;
//! * a high-accuracy Fourier pseudospectral reference solver for the PDE,
//!   used as ground truth for measured error-decay rates;
//! * an end-to-end harness that fits the decay exponents and emits
//!   machine-readable reports.

pub mod asymptotics;
pub mod cheb;
pub mod error;
pub mod harness;
pub mod io;
pub mod mat2;
pub mod model;
pub mod pde;
pub mod quad;
pub mod scattering;
pub mod special;

pub use error::{Error, Result};
