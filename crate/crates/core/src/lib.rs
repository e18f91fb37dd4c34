//! Ricci-flow dynamo laboratory: differential geometry of 3D metric
//! families, Ricci-flow evolution, kinematic flow decomposition, magnetic
//! induction, and energy-growth diagnostics, all generic over the scalar
//! type (`f32` / `f64`).

pub mod energy;
pub mod error;
pub mod geometry;
pub mod induction;
pub mod kinematics;
pub mod numerics;
pub mod real;
pub mod ricci_flow;
pub mod verify;

pub use error::{Error, Result};
pub use real::{Point3, Real};

// Concrete double-precision aliases for the common working types; the
// generic forms stay available for f32 work.
pub type Metric64 = geometry::MetricField<f64>;
pub type Curvature64 = geometry::CurvatureReport<f64>;
pub type Velocity64 = kinematics::VelocityField<f64>;
pub type Decomposition64 = kinematics::FlowDecomposition<f64>;
pub type Trajectory64 = ricci_flow::MetricTrajectory<f64>;
pub type Spectrum64 = ricci_flow::LyapunovSpectrum<f64>;
pub type Mode64 = induction::MagneticMode<f64>;
pub type MagneticTrajectory64 = induction::MagneticTrajectory<f64>;
pub type Report64 = energy::EnergyReport<f64>;
pub type Verdict64 = energy::DynamoVerdict<f64>;
pub type Quadrature64 = numerics::QuadratureSpec<f64>;
