//! The seven subcommands. Each loads a scenario file, runs the wrapped
//! library operations, prints a human table (6 significant digits), and
//! writes a JSON run record (17 significant digits). Trajectory commands
//! also emit CSV.

use std::path::PathBuf;
use std::time::Instant;

use rdl_core::energy::{
    classify, default_classify_tol, energy_rate, energy_rate_numeric, magnetic_energy,
    marginal_shear, EnergyReport, MetricMotion, RateScenario, RateVariant,
};
use rdl_core::geometry::{einstein_fit, killing_symmetry_check, ricci, MetricField};
use rdl_core::induction::{
    evolve_b, fast_dynamo_operator, mode_growth_rate, InductionForm, MagneticField, MagneticMode,
};
use rdl_core::kinematics::{
    covariant_gradient, decompose, frame_vorticity, shear_eigensystem, tensor_projection,
    FlowDecomposition, FrameMode, ProjectionOperand, VelocityField,
};
use rdl_core::numerics::QuadratureSpec;
use rdl_core::ricci_flow::{evolve, ricci_eigenvalues, TrajectoryData};
use rdl_core::verify::{run_suite, CheckResult, Direction, FaultInjection};

use crate::config::{Config, ConfigError, DEFAULT_PROBE};
use crate::jsonout::{run_record, Json};

/// Everything a subcommand needs beyond the config file.
pub struct Invocation {
    pub config: PathBuf,
    pub out: PathBuf,
    pub probe: Option<[f64; 3]>,
    pub variant: Option<RateVariant>,
    pub with_vorticity: bool,
}

#[derive(Debug)]
pub enum CmdError {
    Config(ConfigError),
    Core(rdl_core::Error),
    Io(String),
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CmdError::Config(e) => write!(f, "config error: {e}"),
            CmdError::Core(e) => write!(f, "{e}"),
            CmdError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<ConfigError> for CmdError {
    fn from(e: ConfigError) -> Self {
        CmdError::Config(e)
    }
}

impl From<rdl_core::Error> for CmdError {
    fn from(e: rdl_core::Error) -> Self {
        CmdError::Core(e)
    }
}

impl CmdError {
    /// Exit-code contract: 0 success, 1 invariant/oracle failure, 2 config
    /// error, 3 numerical singularity.
    pub fn exit_code(&self) -> i32 {
        use rdl_core::Error::*;
        match self {
            CmdError::Config(_) => 2,
            CmdError::Io(_) => 2,
            CmdError::Core(e) => match e {
                InvalidInput(_) => 2,
                SingularMetric { .. } | FlowSingularity { .. } | NumericalBlowup { .. } => 3,
                NotEinstein { .. } | InconsistentFrame { .. } => 1,
            },
        }
    }
}

type CmdResult = Result<i32, CmdError>;

/// Six significant digits for the human tables.
fn fmt6(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.5e}")
    } else {
        format!("{x}")
    }
}

fn fmt_point(p: &[f64; 3]) -> String {
    format!("({}, {}, {})", fmt6(p[0]), fmt6(p[1]), fmt6(p[2]))
}

fn load(inv: &Invocation) -> Result<Config, CmdError> {
    Ok(Config::load(&inv.config)?)
}

fn require<'a, S>(section: &'a Option<S>, name: &str) -> Result<&'a S, CmdError> {
    section
        .as_ref()
        .ok_or_else(|| CmdError::Config(ConfigError(format!("[{name}] section required"))))
}

fn metric_or_flat(cfg: &Config) -> Result<MetricField<f64>, CmdError> {
    match &cfg.metric {
        Some(s) => Ok(s.build()?),
        None => Ok(MetricField::flat()),
    }
}

fn region_or_default(cfg: &Config) -> Result<QuadratureSpec<f64>, CmdError> {
    match &cfg.region {
        Some(s) => Ok(s.build()?),
        None => Ok(QuadratureSpec::unit_box(4)),
    }
}

fn frame_or_matched(cfg: &Config) -> Result<FrameMode<f64>, CmdError> {
    match &cfg.frame {
        Some(s) => Ok(s.build()?),
        None => Ok(FrameMode::MatchedToFlow),
    }
}

fn form_or_full(cfg: &Config) -> Result<InductionForm, CmdError> {
    match &cfg.induction {
        Some(s) => Ok(s.build()?),
        None => Ok(InductionForm::Full),
    }
}

fn probe_of(inv: &Invocation) -> [f64; 3] {
    inv.probe.unwrap_or(DEFAULT_PROBE)
}

/// Compact, deterministic echo of the scenario inputs for the run record.
fn scenario_echo(cfg: &Config, probe: &[f64; 3]) -> Json {
    let mut s = Json::obj();
    if let Some(t) = &cfg.title {
        s.push("title", Json::str(t.clone()));
    }
    if let Some(m) = &cfg.metric {
        s.push("metric_family", Json::str(m.family.clone()));
    }
    if let Some(v) = &cfg.velocity {
        s.push("velocity_family", Json::str(v.family.clone()));
    }
    if let Some(mag) = &cfg.magnetic {
        s.push("b0", Json::vec3(&mag.b0));
    }
    if let Some(f) = &cfg.frame {
        s.push("frame_mode", Json::str(f.mode.clone()));
    }
    if let Some(t) = &cfg.time {
        s.push(
            "time_span",
            Json::Arr(vec![Json::num(t.span[0]), Json::num(t.span[1])]),
        );
        s.push("dt", Json::num(t.dt));
    }
    if let Some(r) = &cfg.region {
        s.push("region_lower", Json::vec3(&r.lower));
        s.push("region_upper", Json::vec3(&r.upper));
        s.push(
            "region_counts",
            Json::Arr(r.counts.iter().map(|c| Json::Int(*c as i64)).collect()),
        );
    }
    s.push("probe", Json::vec3(probe));
    s
}

/// JSON record filename: config override, else `<command>.json`.
fn record_name(cfg: &Config, command: &str) -> String {
    cfg.output
        .as_ref()
        .and_then(|o| o.json.clone())
        .unwrap_or_else(|| format!("{command}.json"))
}

fn csv_name(cfg: &Config, command: &str) -> String {
    cfg.output
        .as_ref()
        .and_then(|o| o.csv.clone())
        .unwrap_or_else(|| format!("{command}.csv"))
}

fn write_out(inv: &Invocation, name: &str, contents: &str) -> Result<PathBuf, CmdError> {
    std::fs::create_dir_all(&inv.out)
        .map_err(|e| CmdError::Io(format!("cannot create {}: {e}", inv.out.display())))?;
    let path = inv.out.join(name);
    std::fs::write(&path, contents)
        .map_err(|e| CmdError::Io(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn emit_record(
    inv: &Invocation,
    cfg: &Config,
    command: &str,
    scenario: Json,
    outputs: Json,
    started: Instant,
) -> Result<(), CmdError> {
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;
    let record = run_record(command, scenario, outputs, wall_ms);
    let path = write_out(inv, &record_name(cfg, command), &record.render())?;
    println!("wrote {}", path.display());
    Ok(())
}

fn write_csv(
    inv: &Invocation,
    name: &str,
    header: &str,
    rows: &[Vec<f64>],
) -> Result<PathBuf, CmdError> {
    let mut text = String::from(header);
    text.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    write_out(inv, name, &text)
}

fn sym_entries(s: &rdl_core::numerics::SymTensor3<f64>) -> [(&'static str, f64); 6] {
    [
        ("s11", s.get(0, 0)),
        ("s22", s.get(1, 1)),
        ("s33", s.get(2, 2)),
        ("s12", s.get(0, 1)),
        ("s13", s.get(0, 2)),
        ("s23", s.get(1, 2)),
    ]
}

// ---------------------------------------------------------------------------
// geometry

pub fn cmd_geometry(inv: &Invocation) -> CmdResult {
    let started = Instant::now();
    let cfg = load(inv)?;
    let m = require(&cfg.metric, "metric")?.build()?;
    let t = 0.0;

    let probes: Vec<[f64; 3]> = match (inv.probe, cfg.geometry.as_ref().and_then(|g| g.probes.clone())) {
        (Some(p), _) => vec![p],
        (None, Some(list)) if !list.is_empty() => list,
        _ => vec![DEFAULT_PROBE],
    };

    println!("metric family: {}", m.family_name());
    println!(
        "{:<28} {:>13} {:>13} {:>13} {:>13} {:>13} {:>13} {:>13} {:>13}",
        "probe", "R_11", "R_22", "R_33", "R_12", "R_13", "R_23", "scalar", "lambda_hat"
    );

    let mut probe_records = Vec::new();
    for p in &probes {
        let rep = ricci(&m, p, t)?;
        let r = &rep.ricci;
        println!(
            "{:<28} {:>13} {:>13} {:>13} {:>13} {:>13} {:>13} {:>13} {:>13}",
            fmt_point(p),
            fmt6(r.get(0, 0)),
            fmt6(r.get(1, 1)),
            fmt6(r.get(2, 2)),
            fmt6(r.get(0, 1)),
            fmt6(r.get(0, 2)),
            fmt6(r.get(1, 2)),
            fmt6(rep.scalar),
            fmt6(rep.lambda_hat),
        );
        let mut rec = Json::obj();
        rec.push("point", Json::vec3(p));
        let mut ric = Json::obj();
        ric.push("r11", Json::num(r.get(0, 0)));
        ric.push("r22", Json::num(r.get(1, 1)));
        ric.push("r33", Json::num(r.get(2, 2)));
        ric.push("r12", Json::num(r.get(0, 1)));
        ric.push("r13", Json::num(r.get(0, 2)));
        ric.push("r23", Json::num(r.get(1, 2)));
        rec.push("ricci", ric);
        rec.push("scalar", Json::num(rep.scalar));
        rec.push("lambda_hat", Json::num(rep.lambda_hat));
        rec.push("einstein_residual", Json::num(rep.einstein_residual));
        probe_records.push(rec);
    }

    let q = region_or_default(&cfg)?;
    let geo = cfg.geometry.as_ref();
    let tolerances = cfg.tolerances.as_ref();
    let e_tol = geo
        .and_then(|g| g.einstein_tol)
        .or(tolerances.and_then(|t| t.einstein))
        .unwrap_or(1e-8);
    let fit = einstein_fit(&m, &q, t, e_tol)?;
    if fit.accepted {
        println!(
            "Einstein fit: lambda_hat = {} (accepted; max residual {} <= tol {})",
            fmt6(fit.lambda_hat),
            fmt6(fit.max_residual),
            fmt6(fit.tol)
        );
    } else {
        println!(
            "Einstein fit: not Einstein (max residual {} > tol {})",
            fmt6(fit.max_residual),
            fmt6(fit.tol)
        );
    }

    let s_tol = geo
        .and_then(|g| g.symmetry_tol)
        .or(tolerances.and_then(|t| t.symmetry))
        .unwrap_or(1e-8);
    let vfield = match &cfg.velocity {
        Some(s) => s.build()?,
        None => VelocityField::unit_axis_3(),
    };
    let sym = killing_symmetry_check(&m, |p| vfield.evaluate(p), &q, t, s_tol)?;
    println!(
        "symmetry check: {} (metric dev {}, flow dev {}, tol {})",
        if sym.holds { "holds" } else { "violated" },
        fmt6(sym.max_metric_deviation),
        fmt6(sym.max_flow_deviation),
        fmt6(sym.tol)
    );

    let mut outputs = Json::obj();
    outputs.push("metric_family", Json::str(m.family_name()));
    outputs.push("probes", Json::Arr(probe_records));
    let mut efit = Json::obj();
    efit.push("lambda_hat", Json::num(fit.lambda_hat));
    efit.push("max_residual", Json::num(fit.max_residual));
    efit.push("tol", Json::num(fit.tol));
    efit.push("accepted", Json::Bool(fit.accepted));
    outputs.push("einstein", efit);
    let mut symmetry = Json::obj();
    symmetry.push("holds", Json::Bool(sym.holds));
    symmetry.push("metric_condition_ok", Json::Bool(sym.metric_condition_ok));
    symmetry.push("flow_condition_ok", Json::Bool(sym.flow_condition_ok));
    symmetry.push("max_metric_deviation", Json::num(sym.max_metric_deviation));
    symmetry.push("max_flow_deviation", Json::num(sym.max_flow_deviation));
    symmetry.push("tol", Json::num(sym.tol));
    outputs.push("symmetry", symmetry);

    let probe0 = probes[0];
    emit_record(inv, &cfg, "geometry", scenario_echo(&cfg, &probe0), outputs, started)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// flow

pub fn cmd_flow(inv: &Invocation) -> CmdResult {
    let started = Instant::now();
    let cfg = load(inv)?;
    let m = require(&cfg.metric, "metric")?.build()?;
    let time = require(&cfg.time, "time")?;
    let probe = probe_of(inv);

    let traj = evolve(&m, (time.span[0], time.span[1]), time.dt)?;

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(traj.len());
    for k in 0..traj.len() {
        let t = traj.times[k];
        let c = traj.components_at(k, &probe)?;
        let lam = match &traj.data {
            TrajectoryData::Scale { .. } => {
                let mk = traj.metric_at(k)?;
                ricci_eigenvalues(&mk, &probe, t)?.eigenvalues
            }
            // Grid snapshots carry no closed-form metric to differentiate.
            TrajectoryData::Grid { .. } => [f64::NAN; 3],
        };
        rows.push(vec![
            t, c[0], c[1], c[2], c[3], c[4], c[5], lam[0], lam[1], lam[2],
        ]);
    }

    let name = csv_name(&cfg, "flow");
    let path = write_csv(
        inv,
        &name,
        "t,g11,g22,g33,g12,g13,g23,lam1,lam2,lam3",
        &rows,
    )?;

    let first = rows.first().expect("trajectory is never empty");
    let last = rows.last().expect("trajectory is never empty");
    println!("family: {}", traj.family);
    println!(
        "samples: {} over t in [{}, {}] at dt = {}",
        traj.len(),
        fmt6(time.span[0]),
        fmt6(time.span[1]),
        fmt6(time.dt)
    );
    println!(
        "g11 at probe: {} -> {}",
        fmt6(first[1]),
        fmt6(last[1])
    );
    if last[7].is_finite() {
        println!(
            "final eigenvalues: ({}, {}, {})",
            fmt6(last[7]),
            fmt6(last[8]),
            fmt6(last[9])
        );
    }
    println!("wrote {} ({} rows)", path.display(), rows.len());

    let mut outputs = Json::obj();
    outputs.push("family", Json::str(traj.family));
    outputs.push("samples", Json::Int(traj.len() as i64));
    outputs.push("t_final", Json::num(*traj.times.last().unwrap()));
    let mut final_components = Json::obj();
    for (key, value) in ["g11", "g22", "g33", "g12", "g13", "g23"]
        .iter()
        .zip(&last[1..7])
    {
        final_components.push(key, Json::num(*value));
    }
    outputs.push("final_components", final_components);
    outputs.push(
        "final_eigenvalues",
        Json::Arr(last[7..10].iter().map(|v| Json::num(*v)).collect()),
    );
    if let TrajectoryData::Scale { scales, .. } = &traj.data {
        outputs.push("final_scale", Json::num(*scales.last().unwrap()));
    }
    outputs.push("csv", Json::str(name));

    emit_record(inv, &cfg, "flow", scenario_echo(&cfg, &probe), outputs, started)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// decompose

pub fn cmd_decompose(inv: &Invocation) -> CmdResult {
    let started = Instant::now();
    let cfg = load(inv)?;
    let m = metric_or_flat(&cfg)?;
    let v = require(&cfg.velocity, "velocity")?.build()?;
    let probe = probe_of(inv);
    let t = 0.0;

    let grad = covariant_gradient(&v, &m, &probe, t)?;
    let d = decompose(&grad, &m, &probe, t)?;
    let eig = shear_eigensystem(&d.shear, &m, &probe, t)?;

    println!("covariant gradient at {}:", fmt_point(&probe));
    for row in &grad {
        println!("  [{:>13} {:>13} {:>13}]", fmt6(row[0]), fmt6(row[1]), fmt6(row[2]));
    }
    println!(
        "vorticity (w12, w13, w23): ({}, {}, {})",
        fmt6(d.vorticity.get(0, 1)),
        fmt6(d.vorticity.get(0, 2)),
        fmt6(d.vorticity.get(1, 2))
    );
    let s = sym_entries(&d.shear);
    println!(
        "shear (s11, s22, s33, s12, s13, s23): ({}, {}, {}, {}, {}, {})",
        fmt6(s[0].1),
        fmt6(s[1].1),
        fmt6(s[2].1),
        fmt6(s[3].1),
        fmt6(s[4].1),
        fmt6(s[5].1)
    );
    println!("expansion theta: {}", fmt6(d.expansion));
    println!(
        "shear eigenvalues: ({}, {}, {})",
        fmt6(eig.values[0]),
        fmt6(eig.values[1]),
        fmt6(eig.values[2])
    );

    let mut outputs = Json::obj();
    outputs.push(
        "gradient",
        Json::Arr(grad.iter().map(|row| Json::vec3(row)).collect()),
    );
    let mut vort = Json::obj();
    vort.push("w12", Json::num(d.vorticity.get(0, 1)));
    vort.push("w13", Json::num(d.vorticity.get(0, 2)));
    vort.push("w23", Json::num(d.vorticity.get(1, 2)));
    outputs.push("vorticity", vort);
    let mut shear = Json::obj();
    for (key, value) in sym_entries(&d.shear) {
        shear.push(key, Json::num(value));
    }
    outputs.push("shear", shear);
    outputs.push("theta", Json::num(d.expansion));
    outputs.push(
        "shear_eigenvalues",
        Json::Arr(eig.values.iter().map(|v| Json::num(*v)).collect()),
    );
    outputs.push(
        "shear_directions",
        Json::Arr(eig.vectors.iter().map(Json::vec3).collect()),
    );

    // Scalar projections along the configured magnetic direction, if any.
    if let Some(mag) = &cfg.magnetic {
        let b = mag.b0;
        let sigma = tensor_projection(&ProjectionOperand::Shear(d.shear), &b, &m, &probe, t)?;
        let omega =
            tensor_projection(&ProjectionOperand::Vorticity(d.vorticity), &b, &m, &probe, t)?;
        let theta_part =
            tensor_projection(&ProjectionOperand::Expansion(d.expansion), &b, &m, &probe, t)?;
        println!(
            "projections along b0: sigma = {}, omega = {}, expansion part = {}",
            fmt6(sigma),
            fmt6(omega),
            fmt6(theta_part)
        );
        let mut proj = Json::obj();
        proj.push("sigma", Json::num(sigma));
        proj.push("omega", Json::num(omega));
        proj.push("expansion_part", Json::num(theta_part));
        outputs.push("projections", proj);
    }

    emit_record(inv, &cfg, "decompose", scenario_echo(&cfg, &probe), outputs, started)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// growth

pub fn cmd_growth(inv: &Invocation) -> CmdResult {
    let started = Instant::now();
    let cfg = load(inv)?;
    let m = metric_or_flat(&cfg)?;
    let v = require(&cfg.velocity, "velocity")?.build()?;
    let mag = require(&cfg.magnetic, "magnetic")?;
    let time = require(&cfg.time, "time")?;
    let frame = frame_or_matched(&cfg)?;
    let form = form_or_full(&cfg)?;
    let probe = probe_of(inv);
    let (t0, t1) = (time.span[0], time.span[1]);

    let grad = covariant_gradient(&v, &m, &probe, t0)?;
    let d = decompose(&grad, &m, &probe, t0)?;
    let fv = frame_vorticity(&d, &frame)?;
    let b0 = mag.b0;

    let gamma_shear_expansion = mode_growth_rate(&d, &b0, &m, &probe, t0, false)?;
    let gamma_with_vorticity = mode_growth_rate(&d, &b0, &m, &probe, t0, true)?;
    let gamma_pred = if inv.with_vorticity {
        gamma_with_vorticity
    } else {
        gamma_shear_expansion
    };

    let traj = evolve_b(&b0, &v, &m, &frame, &probe, (t0, t1), time.dt, form)?;
    let residual = fast_dynamo_operator(&traj, &d, &fv, &m, &probe)?;

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(traj.times.len());
    for k in 0..traj.times.len() {
        let b = traj.states[k];
        rows.push(vec![
            traj.times[k],
            b[0],
            b[1],
            b[2],
            traj.norms[k],
            traj.running_gamma(k),
        ]);
    }
    let name = csv_name(&cfg, "growth");
    let path = write_csv(inv, &name, "t,b1,b2,b3,norm,running_gamma", &rows)?;

    println!(
        "predicted gamma: {} (shear+expansion), {} (with vorticity)",
        fmt6(gamma_shear_expansion),
        fmt6(gamma_with_vorticity)
    );
    println!(
        "selected prediction: {} ({})",
        fmt6(gamma_pred),
        if inv.with_vorticity {
            "with vorticity"
        } else {
            "shear+expansion"
        }
    );
    println!("empirical gamma_hat: {}", fmt6(traj.gamma_hat));
    println!(
        "fast-dynamo operator max relative residual: {}",
        fmt6(residual.max_relative())
    );
    println!("wrote {} ({} rows)", path.display(), rows.len());

    let mut outputs = Json::obj();
    outputs.push("gamma_pred", Json::num(gamma_pred));
    outputs.push("gamma_pred_shear_expansion", Json::num(gamma_shear_expansion));
    outputs.push("gamma_pred_with_vorticity", Json::num(gamma_with_vorticity));
    outputs.push("gamma_hat", Json::num(traj.gamma_hat));
    outputs.push("operator_residual_max", Json::num(residual.max_relative()));
    outputs.push("samples", Json::Int(traj.times.len() as i64));
    let final_b = traj.states.last().unwrap();
    outputs.push("final_b", Json::vec3(final_b));
    outputs.push("final_norm", Json::num(*traj.norms.last().unwrap()));
    outputs.push("csv", Json::str(name));

    emit_record(inv, &cfg, "growth", scenario_echo(&cfg, &probe), outputs, started)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// energy

pub fn cmd_energy(inv: &Invocation) -> CmdResult {
    let started = Instant::now();
    let cfg = load(inv)?;
    let m = metric_or_flat(&cfg)?;
    let v = require(&cfg.velocity, "velocity")?.build()?;
    let mag = require(&cfg.magnetic, "magnetic")?;
    let q = region_or_default(&cfg)?;
    let probe = probe_of(inv);
    let energy_cfg = cfg.energy.as_ref();
    let t = energy_cfg.and_then(|e| e.t).unwrap_or(0.0);

    let b_field = if mag.growth_rate.is_some() || mag.wavevector.is_some() {
        MagneticField::mode(MagneticMode::new(
            mag.b0,
            mag.growth_rate.unwrap_or(0.0),
            mag.wavevector.unwrap_or([0.0; 3]),
        )?)
    } else {
        MagneticField::uniform(mag.b0)
    };
    let bvec = b_field.evaluate(&probe, t);

    let grad = covariant_gradient(&v, &m, &probe, t)?;
    let mut d = decompose(&grad, &m, &probe, t)?;

    // Λ of the region: feeds the verdict and the marginal construction.
    let fit = einstein_fit(&m, &q, t, 1e-8)?;
    let lambda = fit.lambda_hat;

    let marginal = energy_cfg.map(|e| e.marginal).unwrap_or(false);
    if marginal {
        let omega_scalar =
            tensor_projection(&ProjectionOperand::Vorticity(d.vorticity), &bvec, &m, &probe, t)?;
        d = FlowDecomposition {
            vorticity: d.vorticity,
            shear: marginal_shear(omega_scalar, d.expansion, lambda, &m, &probe, t)?,
            expansion: d.expansion,
            gradient: d.gradient,
        };
        println!("shear replaced by the marginal (pure-trace) profile");
    }

    let epsilon = magnetic_energy(&b_field, &m, &q, t)?;
    let rate_eq27 = energy_rate(&d, &b_field, &m, &q, t, RateVariant::Eq27)?;

    // eq29 is skipped when eq27 was selected explicitly; a non-Einstein
    // metric makes it unavailable unless eq29 itself was requested.
    let rate_eq29 = match inv.variant {
        Some(RateVariant::Eq27) => None,
        Some(RateVariant::Eq29Chain) => {
            Some(energy_rate(&d, &b_field, &m, &q, t, RateVariant::Eq29Chain)?)
        }
        None => match energy_rate(&d, &b_field, &m, &q, t, RateVariant::Eq29Chain) {
            Ok(r) => Some(r),
            Err(rdl_core::Error::NotEinstein { .. }) => {
                println!("rate_eq29 unavailable: metric is not Einstein on the region");
                None
            }
            Err(e) => return Err(e.into()),
        },
    };

    let rate_numeric = match energy_cfg.and_then(|e| e.numeric_h) {
        None => None,
        Some(nh) => {
            let nt = energy_cfg.and_then(|e| e.numeric_t).unwrap_or(t);
            let time = require(&cfg.time, "time")?;
            let motion = match energy_cfg.and_then(|e| e.motion.as_deref()).unwrap_or("static") {
                "static" => MetricMotion::Static,
                "evolved" => MetricMotion::Evolved,
                other => {
                    return Err(CmdError::Config(ConfigError(format!(
                        "energy.motion: unknown motion '{other}' (static|evolved)"
                    ))))
                }
            };
            let scenario = RateScenario {
                v: v.clone(),
                m: m.clone(),
                b0: mag.b0,
                frame: frame_or_matched(&cfg)?,
                form: form_or_full(&cfg)?,
                q: q.clone(),
                dt: time.dt,
                motion,
            };
            Some(energy_rate_numeric(&scenario, nt, nh)?)
        }
    };

    let report = EnergyReport::assemble(epsilon, rate_eq27, rate_eq29, rate_numeric, q.clone());

    let sigma = tensor_projection(&ProjectionOperand::Shear(d.shear), &bvec, &m, &probe, t)?;
    let omega =
        tensor_projection(&ProjectionOperand::Vorticity(d.vorticity), &bvec, &m, &probe, t)?;
    let tol = cfg
        .classify
        .as_ref()
        .and_then(|c| c.tol)
        .unwrap_or_else(default_classify_tol::<f64>);
    let verdict = classify(sigma, omega, d.expansion, lambda, tol)?;

    println!("epsilon      = {}", fmt6(report.epsilon));
    println!("rate_eq27    = {}", fmt6(report.rate_eq27));
    match report.rate_eq29 {
        Some(r) => println!("rate_eq29    = {}", fmt6(r)),
        None => println!("rate_eq29    = (absent)"),
    }
    match report.rate_numeric {
        Some(r) => println!("rate_numeric = {}", fmt6(r)),
        None => println!("rate_numeric = (not requested)"),
    }
    match report.rate_ratio {
        Some(r) if report.variants_diverge => {
            println!("variants diverge: ratio eq27/eq29 = {}", fmt6(r))
        }
        Some(r) => println!("variants agree: ratio eq27/eq29 = {}", fmt6(r)),
        None => {}
    }
    println!(
        "verdict      = {} (margin {}, tol {})",
        verdict.class.as_str(),
        fmt6(verdict.margin),
        fmt6(verdict.tol)
    );

    let mut outputs = Json::obj();
    outputs.push("epsilon", Json::num(report.epsilon));
    outputs.push("rate_eq27", Json::num(report.rate_eq27));
    outputs.push("rate_eq29", Json::opt_num(report.rate_eq29));
    outputs.push("rate_numeric", Json::opt_num(report.rate_numeric));
    outputs.push("variants_diverge", Json::Bool(report.variants_diverge));
    outputs.push("rate_ratio", Json::opt_num(report.rate_ratio));
    outputs.push("margin", Json::num(verdict.margin));
    outputs.push("verdict", Json::str(verdict.class.as_str()));
    outputs.push("tol", Json::num(verdict.tol));
    outputs.push("sigma", Json::num(verdict.sigma));
    outputs.push("omega", Json::num(verdict.omega));
    outputs.push("theta", Json::num(verdict.theta));
    outputs.push("lambda", Json::num(verdict.lambda));

    emit_record(inv, &cfg, "energy", scenario_echo(&cfg, &probe), outputs, started)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// classify

pub fn cmd_classify(inv: &Invocation) -> CmdResult {
    let started = Instant::now();
    let cfg = load(inv)?;
    let c = require(&cfg.classify, "classify")?;
    let tol = c.tol.unwrap_or_else(default_classify_tol::<f64>);
    let verdict = classify(c.sigma, c.omega, c.theta, c.lambda, tol)?;

    println!(
        "inputs: sigma = {}, omega = {}, theta = {}, lambda = {}",
        fmt6(c.sigma),
        fmt6(c.omega),
        fmt6(c.theta),
        fmt6(c.lambda)
    );
    println!(
        "verdict = {} (margin {}, tol {})",
        verdict.class.as_str(),
        fmt6(verdict.margin),
        fmt6(verdict.tol)
    );

    let mut outputs = Json::obj();
    outputs.push("margin", Json::num(verdict.margin));
    outputs.push("verdict", Json::str(verdict.class.as_str()));
    outputs.push("tol", Json::num(verdict.tol));
    outputs.push("sigma", Json::num(verdict.sigma));
    outputs.push("omega", Json::num(verdict.omega));
    outputs.push("theta", Json::num(verdict.theta));
    outputs.push("lambda", Json::num(verdict.lambda));

    let probe = probe_of(inv);
    emit_record(inv, &cfg, "classify", scenario_echo(&cfg, &probe), outputs, started)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify

pub fn cmd_verify(inv: &Invocation) -> CmdResult {
    let started = Instant::now();
    let cfg = load(inv)?;
    let section = require(&cfg.verify, "verify")?;
    let fault = match section.inject_fault.as_deref() {
        None => FaultInjection::None,
        Some("theta_sign_flip") => FaultInjection::ThetaSignFlip,
        Some(other) => {
            return Err(CmdError::Config(ConfigError(format!(
                "verify.inject_fault: unknown fault '{other}' (theta_sign_flip)"
            ))))
        }
    };

    let results = run_suite(fault);
    let failed: Vec<&CheckResult> = results.iter().filter(|r| !r.passed).collect();

    println!(
        "{:<52} {:<6} {:>13} {:>4} {:>13}",
        "check", "status", "observed", "", "threshold"
    );
    for r in &results {
        let cmp = match r.direction {
            Direction::AtMost => "<=",
            Direction::AtLeast => ">=",
        };
        println!(
            "{:<52} {:<6} {:>13} {:>4} {:>13}",
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            fmt6(r.observed),
            cmp,
            fmt6(r.threshold)
        );
    }
    println!(
        "{} checks: {} passed, {} failed",
        results.len(),
        results.len() - failed.len(),
        failed.len()
    );

    let mut checks = Vec::with_capacity(results.len());
    for r in &results {
        let mut c = Json::obj();
        c.push("name", Json::str(r.name));
        c.push("passed", Json::Bool(r.passed));
        c.push("observed", Json::num(r.observed));
        c.push("threshold", Json::num(r.threshold));
        c.push(
            "direction",
            Json::str(match r.direction {
                Direction::AtMost => "at_most",
                Direction::AtLeast => "at_least",
            }),
        );
        checks.push(c);
    }
    let mut outputs = Json::obj();
    outputs.push(
        "fault",
        Json::str(match fault {
            FaultInjection::None => "none",
            FaultInjection::ThetaSignFlip => "theta_sign_flip",
        }),
    );
    outputs.push("checks", Json::Arr(checks));
    outputs.push("passed", Json::Int((results.len() - failed.len()) as i64));
    outputs.push("failed", Json::Int(failed.len() as i64));
    outputs.push("all_passed", Json::Bool(failed.is_empty()));

    let probe = probe_of(inv);
    emit_record(inv, &cfg, "verify", scenario_echo(&cfg, &probe), outputs, started)?;
    Ok(if failed.is_empty() { 0 } else { 1 })
}
