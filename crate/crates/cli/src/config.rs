//! Scenario configuration: one TOML file with a section per concern.
//! Parsing failures carry the offending field so the exit-2 diagnostics can
//! name it.

use serde::Deserialize;

use rdl_core::geometry::MetricField;
use rdl_core::induction::InductionForm;
use rdl_core::kinematics::FrameMode;
use rdl_core::kinematics::VelocityField;
use rdl_core::numerics::{mat3, Mat3, QuadratureRule, QuadratureSpec};
use rdl_core::Velocity64;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn field_err(field: &str, msg: impl std::fmt::Display) -> ConfigError {
    ConfigError(format!("{field}: {msg}"))
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub title: Option<String>,
    pub metric: Option<MetricSection>,
    pub velocity: Option<VelocitySection>,
    pub magnetic: Option<MagneticSection>,
    pub frame: Option<FrameSection>,
    pub region: Option<RegionSection>,
    pub time: Option<TimeSection>,
    pub induction: Option<InductionSection>,
    pub energy: Option<EnergySection>,
    pub classify: Option<ClassifySection>,
    pub geometry: Option<GeometrySection>,
    pub verify: Option<VerifySection>,
    pub tolerances: Option<ToleranceSection>,
    pub output: Option<OutputSection>,
}

impl Config {
    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| ConfigError(format!("parse error: {e}")))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSection {
    pub family: String,
    pub radius: Option<f64>,
    pub rate: Option<f64>,
    pub scale: Option<f64>,
    pub base: Option<String>,
    pub base_radius: Option<f64>,
    pub g11: Option<ComponentSpec>,
    pub g22: Option<ComponentSpec>,
    pub g33: Option<ComponentSpec>,
}

/// Numeric parameterization of one diagonal component:
/// offset + coeff · shape(x_axis).
#[derive(Debug, Deserialize, Clone)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    #[serde(default)]
    pub offset: f64,
    #[serde(default)]
    pub coeff: f64,
    pub shape: Option<String>,
    #[serde(default)]
    pub axis: usize,
}

impl ComponentSpec {
    fn build(&self, field: &str) -> Result<Box<dyn Fn(&[f64; 3]) -> f64 + Send + Sync>, ConfigError> {
        if self.axis > 2 {
            return Err(field_err(field, "axis must be 0, 1, or 2"));
        }
        let (offset, coeff, axis) = (self.offset, self.coeff, self.axis);
        let shape = self.shape.as_deref().unwrap_or("const");
        let f: Box<dyn Fn(&[f64; 3]) -> f64 + Send + Sync> = match shape {
            "const" => Box::new(move |_p| offset + coeff),
            "sin" => Box::new(move |p| offset + coeff * p[axis].sin()),
            "cos" => Box::new(move |p| offset + coeff * p[axis].cos()),
            "square" => Box::new(move |p| offset + coeff * p[axis] * p[axis]),
            "linear" => Box::new(move |p| offset + coeff * p[axis]),
            other => {
                return Err(field_err(
                    field,
                    format!("unknown shape '{other}' (const|sin|cos|square|linear)"),
                ))
            }
        };
        Ok(f)
    }
}

impl MetricSection {
    pub fn build(&self) -> Result<MetricField<f64>, ConfigError> {
        let radius = |d: f64| self.radius.unwrap_or(d);
        match self.family.as_str() {
            "euclidean_flat" => Ok(MetricField::flat()),
            "round_sphere" => MetricField::round_sphere(radius(1.0))
                .map_err(|e| field_err("metric.radius", e)),
            "hyperbolic_space" => MetricField::hyperbolic_space(radius(1.0))
                .map_err(|e| field_err("metric.radius", e)),
            "conformal_lyapunov" => {
                let rate = self
                    .rate
                    .ok_or_else(|| field_err("metric.rate", "required for conformal_lyapunov"))?;
                MetricField::conformal_lyapunov(rate).map_err(|e| field_err("metric.rate", e))
            }
            "einstein_scaled" => {
                let base = match self.base.as_deref() {
                    Some("round_sphere") | None => {
                        MetricField::round_sphere(self.base_radius.unwrap_or(1.0))
                            .map_err(|e| field_err("metric.base_radius", e))?
                    }
                    Some("hyperbolic_space") => {
                        MetricField::hyperbolic_space(self.base_radius.unwrap_or(1.0))
                            .map_err(|e| field_err("metric.base_radius", e))?
                    }
                    Some("euclidean_flat") => MetricField::flat(),
                    Some(other) => {
                        return Err(field_err(
                            "metric.base",
                            format!("unsupported base family '{other}'"),
                        ))
                    }
                };
                let scale = self
                    .scale
                    .ok_or_else(|| field_err("metric.scale", "required for einstein_scaled"))?;
                MetricField::einstein_scaled(base, scale).map_err(|e| field_err("metric.scale", e))
            }
            "diagonal_custom" => {
                let defaults = ComponentSpec {
                    offset: 1.0,
                    coeff: 0.0,
                    shape: None,
                    axis: 0,
                };
                let c11 = self.g11.clone().unwrap_or_else(|| defaults.clone()).build("metric.g11")?;
                let c22 = self.g22.clone().unwrap_or_else(|| defaults.clone()).build("metric.g22")?;
                let c33 = self.g33.clone().unwrap_or(defaults).build("metric.g33")?;
                Ok(MetricField::diagonal_custom(
                    move |p: &[f64; 3]| c11(p),
                    move |p: &[f64; 3]| c22(p),
                    move |p: &[f64; 3]| c33(p),
                ))
            }
            other => Err(field_err(
                "metric.family",
                format!("unknown family '{other}'"),
            )),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VelocitySection {
    pub family: String,
    pub vector: Option<[f64; 3]>,
    pub matrix: Option<[[f64; 3]; 3]>,
}

impl VelocitySection {
    pub fn build(&self) -> Result<Velocity64, ConfigError> {
        match self.family.as_str() {
            "uniform" => Ok(VelocityField::uniform(self.vector.unwrap_or([0.0; 3]))),
            "linear_gradient" => {
                let m = self
                    .matrix
                    .ok_or_else(|| field_err("velocity.matrix", "required for linear_gradient"))?;
                Ok(VelocityField::linear_gradient(m))
            }
            "rigid_rotation" => {
                let w = self
                    .vector
                    .ok_or_else(|| field_err("velocity.vector", "required for rigid_rotation"))?;
                Ok(VelocityField::rigid_rotation(w))
            }
            "unit_axis_3" => Ok(VelocityField::unit_axis_3()),
            other => Err(field_err(
                "velocity.family",
                format!("unknown family '{other}'"),
            )),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MagneticSection {
    pub b0: [f64; 3],
    pub growth_rate: Option<f64>,
    pub wavevector: Option<[f64; 3]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSection {
    pub mode: String,
    /// Upper-triangle entries (ω₁₂, ω₁₃, ω₂₃) for the explicit mode.
    pub omega: Option<[f64; 3]>,
}

impl FrameSection {
    pub fn build(&self) -> Result<FrameMode<f64>, ConfigError> {
        match self.mode.as_str() {
            "matched" => Ok(FrameMode::MatchedToFlow),
            "explicit" => {
                let w = self.omega.unwrap_or([0.0; 3]);
                let mut m: Mat3<f64> = mat3::zero();
                m[0][1] = w[0];
                m[1][0] = -w[0];
                m[0][2] = w[1];
                m[2][0] = -w[1];
                m[1][2] = w[2];
                m[2][1] = -w[2];
                Ok(FrameMode::Explicit(m))
            }
            other => Err(field_err("frame.mode", format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSection {
    pub lower: [f64; 3],
    pub upper: [f64; 3],
    pub counts: [usize; 3],
    pub rule: Option<String>,
}

impl RegionSection {
    pub fn build(&self) -> Result<QuadratureSpec<f64>, ConfigError> {
        let rule = match self.rule.as_deref().unwrap_or("midpoint") {
            "midpoint" => QuadratureRule::Midpoint,
            "trapezoid" => QuadratureRule::Trapezoid,
            other => {
                return Err(field_err(
                    "region.rule",
                    format!("unknown rule '{other}' (midpoint|trapezoid)"),
                ))
            }
        };
        QuadratureSpec::new(self.lower, self.upper, self.counts, rule)
            .map_err(|e| field_err("region", e))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub span: [f64; 2],
    pub dt: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InductionSection {
    pub form: Option<String>,
}

impl InductionSection {
    pub fn build(&self) -> Result<InductionForm, ConfigError> {
        match self.form.as_deref().unwrap_or("full") {
            "full" => Ok(InductionForm::Full),
            "rigid_rotation" => Ok(InductionForm::RigidRotation),
            other => Err(field_err(
                "induction.form",
                format!("unknown form '{other}' (full|rigid_rotation)"),
            )),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergySection {
    /// Replace the flow's shear with the marginal pure-trace shear before
    /// computing rates and the verdict.
    #[serde(default)]
    pub marginal: bool,
    /// Evaluation time for the analytic quantities (default 0).
    pub t: Option<f64>,
    /// Run the finite-difference rate oracle with this step; evaluated at
    /// `numeric_t` (default: same instant as the analytic rates).
    pub numeric_h: Option<f64>,
    pub numeric_t: Option<f64>,
    pub motion: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifySection {
    #[serde(default)]
    pub sigma: f64,
    #[serde(default)]
    pub omega: f64,
    #[serde(default)]
    pub theta: f64,
    #[serde(default)]
    pub lambda: f64,
    pub tol: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub probes: Option<Vec<[f64; 3]>>,
    pub einstein_tol: Option<f64>,
    pub symmetry_tol: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub inject_fault: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSection {
    pub einstein: Option<f64>,
    pub symmetry: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub json: Option<String>,
    pub csv: Option<String>,
}

pub const DEFAULT_PROBE: [f64; 3] = [0.9, 1.1, 0.4];
