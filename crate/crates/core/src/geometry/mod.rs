//! Metric families and static differential geometry: connection
//! coefficients, Ricci curvature, Einstein-space detection, volume element,
//! and the symmetry checks behind the closed-form energy identities.

pub mod checks;
pub mod curvature;
pub mod families;

pub use checks::{killing_symmetry_check, SymmetryReport};
pub use curvature::{
    connection, connection_from_derivatives, einstein_check, einstein_fit, ricci,
    ricci_from_derivatives, volume_element, Connection, CurvatureReport, EinsteinFit,
};
pub use families::{MetricField, ScalarField, CHART_GUARD};
