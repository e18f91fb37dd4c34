//! Numeric kernels shared by every module: fixed 3x3 linear algebra,
//! symmetric eigensolvers, RK4 stepping, box quadrature, and the
//! finite-difference stencils used as oracles.

pub mod eigen;
pub mod fd;
pub mod mat3;
pub mod ode;
pub mod quadrature;
pub mod tensor;

pub use eigen::{generalized_sym_eigen, sym_eigen, EigenDecomposition};
pub use fd::{fd_mixed, fd_partial, fd_second};
pub use mat3::{Mat3, Vec3};
pub use ode::{integrate, ode_step};
pub use quadrature::{box_integrate, box_integrate_try, sample_points};
pub use tensor::{AntiTensor3, QuadratureRule, QuadratureSpec, SymTensor3};
