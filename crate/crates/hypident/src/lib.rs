//! Numerical verification of identities on hyperbolic surfaces.
//!
//! This crate evaluates four families of identities for hyperbolic surfaces —
//! the Basmajian and Bridgeman orthospectrum identities, the McShane identity
//! and its Mirzakhani / Tan-Wong-Zhang / Hu-Tan-Zhang generalizations, and the
//! Luo-Tan dilogarithm identity — together with the moment formulas for the
//! associated hitting functions.
//!
//! Every identity is verified in one of three ways:
//!
//! * exactly, on finite configurations (ideal polygons, where the Bridgeman
//!   identity reduces to the Euler and Abel dilogarithm identities);
//! * by convergent enumeration (trace triples on the trivalent tree for the
//!   once-holed torus, double cosets for pants orthospectra) with monotone
//!   bounded partial sums;
//! * against an independent oracle (adaptive quadrature of the defining
//!   integrals, Monte Carlo estimates of hitting times).
//!
//! The modules mirror that split: [`numerics`] holds the scalar foundations
//! (polylogarithms, the Rogers dilogarithm, hyperbolic ball volumes, adaptive
//! quadrature), [`moebius`] the boundary geometry of the upper half-plane,
//! [`panttorus`] the metric geometry of pants and one-holed tori,
//! [`orthospectrum`] and [`tracetree`] the two enumeration engines,
//! [`identities`] the identity evaluators, and [`moments`] the hitting-time
//! moment formulas and their Monte Carlo oracle.

pub mod identities;
pub mod moebius;
pub mod moments;
pub mod numerics;
pub mod orthospectrum;
pub mod panttorus;
pub mod tracetree;

pub use identities::IdentityReport;
pub use moebius::{BoundaryPoint, Geodesic, IdealPolygon, Matrix2};
pub use numerics::{QuadratureSpec, polylog, rogers};
pub use orthospectrum::{OrthoRecord, PantsGroup};
pub use panttorus::PantsMetric;
pub use tracetree::TraceTriple;
