//! Special functions: Airy triple, Airy-type ray integrals, and the
//! Ablowitz-Segur family of real Painleve II solutions.

pub mod airy;
pub mod painleve;
pub mod ray;

pub use airy::{airy_eval, airy_triple, AiryTriple};
pub use painleve::{painleve2_solve, PainleveSolution};
pub use ray::{airy_via_ray_quadrature, airy_via_ray_quadrature_cfg, RayQuadConfig};
