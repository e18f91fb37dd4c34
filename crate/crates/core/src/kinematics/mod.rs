//! Velocity fields, the covariant velocity gradient, and its invariant
//! decomposition into vorticity, shear, and expansion, plus the scalar
//! projections that feed the growth-rate formulas.

mod decomp;
mod velocity;

pub use decomp::{
    covariant_gradient, decompose, frame_vorticity, shear_eigensystem, tensor_projection,
    FlowDecomposition, FrameMode, FrameVorticity, ProjectionOperand,
};
pub use velocity::{VectorField, VelocityField};
