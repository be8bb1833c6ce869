//! Batch sweep engine: run configurations, parameter grids, tau-scans,
//! time averaging, and CSV/JSON emission.
//!
//! Configs are flat dotted-key JSON (e.g. `"fixed.omega_h": 5.0`,
//! `"grid.axis1.name": "g_h"`); CLI `--set key=value` flags override file
//! values. Grid points are independent work items evaluated in parallel
//! (worker count capped by `OTTO_THREADS`, 0 = auto) and merged in
//! row-major point order, so outputs are byte-identical across runs and
//! worker counts.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::Value;

use crate::error::{OttoError, Result};
use crate::gslc::{gslc_energy_flows, gslc_limit_cycle};
use crate::limit_cycle::{elc_state, solve_nelc};
use crate::lindblad::BathSpec;
use crate::qubit::{eigenframe, BasisTag, CycleParams};
use crate::thermo::{classify, flows_for_pair, EnergyFlows, Regime};

/// Which limit cycle a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Gslc,
    Elc,
    Nelc,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Gslc => "gslc",
            Mode::Elc => "elc",
            Mode::Nelc => "nelc",
        }
    }

    pub fn parse(s: &str) -> Result<Mode> {
        match s {
            "gslc" => Ok(Mode::Gslc),
            "elc" => Ok(Mode::Elc),
            "nelc" => Ok(Mode::Nelc),
            other => Err(OttoError::Config(format!("unknown mode '{other}'"))),
        }
    }
}

/// Sweepable parameter names.
pub const AXIS_NAMES: [&str; 7] = [
    "g_h", "g_c", "omega_h", "omega_c", "beta_h", "beta_c", "tau",
];

/// One grid axis.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisSpec {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log: bool,
}

impl AxisSpec {
    pub fn validate(&self) -> Result<()> {
        if !AXIS_NAMES.contains(&self.name.as_str()) {
            return Err(OttoError::Config(format!(
                "axis name '{}' is not sweepable (use one of {:?})",
                self.name, AXIS_NAMES
            )));
        }
        if self.count < 1 {
            return Err(OttoError::Config(format!(
                "axis '{}' count must be >= 1",
                self.name
            )));
        }
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(OttoError::Config(format!(
                "axis '{}' bounds must be finite",
                self.name
            )));
        }
        if self.log && (self.min <= 0.0 || self.max <= 0.0) {
            return Err(OttoError::Config(format!(
                "axis '{}' is logarithmic and needs positive bounds",
                self.name
            )));
        }
        Ok(())
    }

    /// The sampled values, min to max inclusive.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let n = self.count;
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                if self.log {
                    (self.min.ln() * (1.0 - t) + self.max.ln() * t).exp()
                } else {
                    self.min * (1.0 - t) + self.max * t
                }
            })
            .collect()
    }
}

/// Default parameter values a sweep perturbs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedParams {
    pub omega_h: f64,
    pub omega_c: f64,
    pub g_h: f64,
    pub g_c: f64,
    pub beta_h: f64,
    pub beta_c: f64,
    pub tau: f64,
}

impl Default for FixedParams {
    fn default() -> Self {
        FixedParams {
            omega_h: 5.0,
            omega_c: 1.0,
            g_h: 4.0,
            g_c: 1.0,
            beta_h: 0.2,
            beta_c: 1.0,
            tau: 100.0,
        }
    }
}

impl FixedParams {
    fn set(&mut self, name: &str, value: f64) -> Result<()> {
        match name {
            "omega_h" => self.omega_h = value,
            "omega_c" => self.omega_c = value,
            "g_h" => self.g_h = value,
            "g_c" => self.g_c = value,
            "beta_h" => self.beta_h = value,
            "beta_c" => self.beta_c = value,
            "tau" => self.tau = value,
            other => {
                return Err(OttoError::Config(format!("unknown parameter '{other}'")));
            }
        }
        Ok(())
    }

    /// Construct validated cycle parameters with both stroke durations tau.
    pub fn to_cycle_params(&self) -> Result<CycleParams> {
        CycleParams::new(
            self.omega_h,
            self.omega_c,
            self.g_h,
            self.g_c,
            self.beta_h,
            self.beta_c,
            self.tau,
            self.tau,
        )
    }
}

/// Time-averaging protocol for oscillatory NELC quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Averaging {
    pub enabled: bool,
    /// Uniform samples across the window.
    pub samples: usize,
    /// Window width as a fraction of the base period 2 pi / min omega-tilde.
    pub window: f64,
}

impl Default for Averaging {
    fn default() -> Self {
        Averaging {
            enabled: false,
            samples: 64,
            window: 1.0,
        }
    }
}

/// A full run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mode: Mode,
    pub fixed: FixedParams,
    pub axes: Vec<AxisSpec>,
    pub bath: BathSpec,
    pub averaging: Averaging,
    pub out_csv: Option<PathBuf>,
    pub out_json: Option<PathBuf>,
    pub out_svg: Option<PathBuf>,
    pub svg_field: String,
    pub svg_width: u32,
    pub svg_height: u32,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            mode: Mode::Gslc,
            fixed: FixedParams::default(),
            axes: Vec::new(),
            bath: BathSpec::default(),
            averaging: Averaging::default(),
            out_csv: None,
            out_json: None,
            out_svg: None,
            svg_field: "W".into(),
            svg_width: 900,
            svg_height: 700,
        }
    }
}

fn as_f64(key: &str, v: &Value) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| OttoError::Config(format!("key '{key}' must be a number, got {v}")))
}

fn as_usize(key: &str, v: &Value) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| OttoError::Config(format!("key '{key}' must be a non-negative integer, got {v}")))
}

fn as_str<'a>(key: &str, v: &'a Value) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| OttoError::Config(format!("key '{key}' must be a string, got {v}")))
}

fn as_bool(key: &str, v: &Value) -> Result<bool> {
    v.as_bool()
        .ok_or_else(|| OttoError::Config(format!("key '{key}' must be a boolean, got {v}")))
}

impl SweepConfig {
    /// Apply one flat dotted key.
    pub fn apply_key(&mut self, key: &str, value: &Value) -> Result<()> {
        // grid axes are collected on demand
        if let Some(rest) = key.strip_prefix("grid.") {
            let (axis, field) = rest.split_once('.').ok_or_else(|| {
                OttoError::Config(format!("grid key '{key}' must be grid.axisN.field"))
            })?;
            let idx = match axis {
                "axis1" => 0usize,
                "axis2" => 1usize,
                other => {
                    return Err(OttoError::Config(format!(
                        "unknown grid axis '{other}' (use axis1 or axis2)"
                    )));
                }
            };
            while self.axes.len() <= idx {
                self.axes.push(AxisSpec {
                    name: String::new(),
                    min: 0.0,
                    max: 1.0,
                    count: 2,
                    log: false,
                });
            }
            let spec = &mut self.axes[idx];
            match field {
                "name" => spec.name = as_str(key, value)?.to_string(),
                "min" => spec.min = as_f64(key, value)?,
                "max" => spec.max = as_f64(key, value)?,
                "count" => spec.count = as_usize(key, value)?,
                "scale" => {
                    spec.log = match as_str(key, value)? {
                        "linear" => false,
                        "log" => true,
                        other => {
                            return Err(OttoError::Config(format!(
                                "axis scale '{other}' must be linear or log"
                            )));
                        }
                    }
                }
                other => {
                    return Err(OttoError::Config(format!("unknown grid field '{other}'")));
                }
            }
            return Ok(());
        }
        if let Some(rest) = key.strip_prefix("fixed.") {
            return self.fixed.set(rest, as_f64(key, value)?);
        }
        match key {
            "mode" => self.mode = Mode::parse(as_str(key, value)?)?,
            "bath.gamma_scale" => {
                self.bath = BathSpec::new(as_f64(key, value)?, self.bath.omega_cutoff)?;
            }
            "bath.omega_cutoff" => {
                self.bath = BathSpec::new(self.bath.gamma_scale, as_f64(key, value)?)?;
            }
            "averaging.enabled" => self.averaging.enabled = as_bool(key, value)?,
            "averaging.samples" => {
                self.averaging.samples = as_usize(key, value)?.max(1);
            }
            "averaging.window" => self.averaging.window = as_f64(key, value)?,
            "output.csv" => self.out_csv = Some(PathBuf::from(as_str(key, value)?)),
            "output.json" => self.out_json = Some(PathBuf::from(as_str(key, value)?)),
            "output.svg" => self.out_svg = Some(PathBuf::from(as_str(key, value)?)),
            "svg.field" => self.svg_field = as_str(key, value)?.to_string(),
            "svg.width" => self.svg_width = as_usize(key, value)? as u32,
            "svg.height" => self.svg_height = as_usize(key, value)? as u32,
            other => {
                return Err(OttoError::Config(format!("unknown config key '{other}'")));
            }
        }
        Ok(())
    }

    /// Parse a flat dotted-key JSON object.
    pub fn from_flat_json(text: &str) -> Result<SweepConfig> {
        let root: Value = serde_json::from_str(text)
            .map_err(|e| OttoError::Config(format!("invalid JSON: {e}")))?;
        let map = root
            .as_object()
            .ok_or_else(|| OttoError::Config("config root must be a JSON object".into()))?;
        let mut cfg = SweepConfig::default();
        // apply grid keys in sorted order so axis1 precedes axis2
        let mut keys: Vec<&String> = map.keys().collect();
        keys.sort();
        for k in keys {
            cfg.apply_key(k, &map[k])?;
        }
        Ok(cfg)
    }

    /// Load from a file.
    pub fn from_file(path: &Path) -> Result<SweepConfig> {
        let text = fs::read_to_string(path).map_err(|source| OttoError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_flat_json(&text)
    }

    /// Apply a `--set key=value` override; the value is parsed as JSON first
    /// and falls back to a bare string.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, raw) = assignment.split_once('=').ok_or_else(|| {
            OttoError::Config(format!("override '{assignment}' must be key=value"))
        })?;
        // bare parameter names are shorthand for fixed.<name>
        let key = if AXIS_NAMES.contains(&key) {
            format!("fixed.{key}")
        } else {
            key.to_string()
        };
        let value: Value = serde_json::from_str(raw)
            .unwrap_or_else(|_| Value::String(raw.to_string()));
        self.apply_key(&key, &value)
    }

    pub fn validate(&self) -> Result<()> {
        for ax in &self.axes {
            ax.validate()?;
        }
        if self.axes.len() > 2 {
            return Err(OttoError::Config("at most 2 grid axes supported".into()));
        }
        // the fixed block must be a valid baseline on its own, so bad
        // parameter overrides fail fast instead of per point
        self.fixed.to_cycle_params()?;
        Ok(())
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointRecord {
    pub axis_values: Vec<f64>,
    pub q_h: f64,
    pub q_c: f64,
    pub w: f64,
    pub regime: Regime,
    pub figure_of_merit: Option<f64>,
    pub power: Option<f64>,
    /// NELC fixed-point residual (trace norm).
    pub residual: Option<f64>,
    /// "ok" or the per-point failure message.
    pub status: String,
}

/// A completed sweep with its reproducibility metadata.
#[derive(Debug, Clone)]
pub struct GridResult {
    pub mode: Mode,
    pub fixed: FixedParams,
    pub bath: BathSpec,
    pub averaging: Averaging,
    pub axes: Vec<AxisSpec>,
    /// Reference values (e.g. GSLC asymptotes for tau-scans).
    pub reference: BTreeMap<String, f64>,
    pub points: Vec<PointRecord>,
}

/// Arithmetic mean of `f(tau')` over `samples` uniform points in
/// `[tau0 - width/2, tau0 + width/2]`, clipped to tau' > 0.
pub fn time_average<F>(f: F, tau0: f64, width: f64, samples: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(tau0 > 0.0) {
        return Err(OttoError::InvalidParams(format!("tau0 = {tau0} must be > 0")));
    }
    let n = samples.max(1);
    let mut sum = 0.0;
    let mut kept = 0usize;
    for i in 0..n {
        // midpoint sampling: a full-period sinusoid averages exactly to its
        // offset regardless of phase
        let tau = tau0 - width / 2.0 + (i as f64 + 0.5) * width / n as f64;
        if tau <= 0.0 {
            continue;
        }
        sum += f(tau)?;
        kept += 1;
    }
    if kept == 0 {
        return Err(OttoError::Numerical(
            "time-averaging window contains no positive samples".into(),
        ));
    }
    Ok(sum / kept as f64)
}

/// The averaging window width for a parameter set: `window` fractions of
/// the slowest coherence period 2 pi / min(omega_tilde_h, omega_tilde_c).
pub fn averaging_window(params: &CycleParams, averaging: &Averaging) -> Result<f64> {
    let fh = eigenframe(params.omega_h, params.g_h, BasisTag::EigenH)?;
    let fc = eigenframe(params.omega_c, params.g_c, BasisTag::EigenC)?;
    let w_min = fh.omega_tilde.min(fc.omega_tilde);
    Ok(averaging.window * 2.0 * std::f64::consts::PI / w_min)
}

/// NELC flows at stroke duration tau, plus the solver residual.
fn nelc_flows(fixed: &FixedParams, tau: f64, bath: &BathSpec) -> Result<(EnergyFlows, f64)> {
    let mut fp = *fixed;
    fp.tau = tau;
    let params = fp.to_cycle_params()?;
    let (sol, report) = solve_nelc(&params, bath)?;
    let flows = flows_for_pair(&params, &sol.rho_h, &sol.rho_c)?;
    Ok((flows, report.final_residual))
}

/// Evaluate one grid point; never panics, failures land in `status`.
pub fn evaluate_point(
    mode: Mode,
    fixed: &FixedParams,
    bath: &BathSpec,
    averaging: &Averaging,
    axis_values: &[(String, f64)],
) -> PointRecord {
    let values: Vec<f64> = axis_values.iter().map(|(_, v)| *v).collect();
    let mut fp = *fixed;
    let applied: Result<()> = axis_values
        .iter()
        .try_for_each(|(name, v)| fp.set(name, *v));
    let outcome = applied.and_then(|()| evaluate_params(mode, &fp, bath, averaging));
    match outcome {
        Ok(mut rec) => {
            rec.axis_values = values;
            rec
        }
        Err(e) => PointRecord {
            axis_values: values,
            q_h: f64::NAN,
            q_c: f64::NAN,
            w: f64::NAN,
            regime: Regime::None,
            figure_of_merit: None,
            power: None,
            residual: None,
            status: e.to_string().replace([',', '\n'], ";"),
        },
    }
}

fn evaluate_params(
    mode: Mode,
    fp: &FixedParams,
    bath: &BathSpec,
    averaging: &Averaging,
) -> Result<PointRecord> {
    let params = fp.to_cycle_params()?;
    let eps = crate::thermo::dead_band(&params);
    let (flows, residual, power) = match mode {
        Mode::Gslc => {
            let pair = gslc_limit_cycle(&params)?;
            (flows_for_pair(&params, &pair.rho_h, &pair.rho_c)?, None, None)
        }
        Mode::Elc => {
            let sol = elc_state(&params, bath)?;
            (flows_for_pair(&params, &sol.rho_h, &sol.rho_c)?, None, None)
        }
        Mode::Nelc => {
            let (flows, res) = if averaging.enabled {
                let width = averaging_window(&params, averaging)?;
                let avg = |pick: fn(&EnergyFlows) -> f64| {
                    time_average(
                        |tau| nelc_flows(fp, tau, bath).map(|(f, _)| pick(&f)),
                        fp.tau,
                        width,
                        averaging.samples,
                    )
                };
                let q_h = avg(|f| f.q_h)?;
                let q_c = avg(|f| f.q_c)?;
                let w_1 = avg(|f| f.w_1)?;
                let w_2 = avg(|f| f.w_2)?;
                let (_, res) = nelc_flows(fp, fp.tau, bath)?;
                (
                    EnergyFlows {
                        q_h,
                        q_c,
                        w_1,
                        w_2,
                        w: w_1 + w_2,
                    },
                    res,
                )
            } else {
                nelc_flows(fp, fp.tau, bath)?
            };
            let power = if classify(&flows, eps).regime == Regime::Engine {
                Some(-flows.w / (params.t_h + params.t_c))
            } else {
                None
            };
            (flows, Some(res), power)
        }
    };
    let report = classify(&flows, eps);
    Ok(PointRecord {
        axis_values: Vec::new(),
        q_h: flows.q_h,
        q_c: flows.q_c,
        w: flows.w,
        regime: report.regime,
        figure_of_merit: report.figure_of_merit,
        power,
        residual,
        status: "ok".into(),
    })
}

fn with_thread_pool<T: Send>(work: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var("OTTO_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .unwrap_or(0);
    if threads == 0 {
        return work();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    }
}

/// Row-major cartesian product of the axis values.
fn grid_points(axes: &[AxisSpec]) -> Vec<Vec<(String, f64)>> {
    match axes.len() {
        0 => vec![Vec::new()],
        1 => axes[0]
            .values()
            .into_iter()
            .map(|v| vec![(axes[0].name.clone(), v)])
            .collect(),
        _ => {
            let a = axes[0].values();
            let b = axes[1].values();
            let mut out = Vec::with_capacity(a.len() * b.len());
            for va in &a {
                for vb in &b {
                    out.push(vec![
                        (axes[0].name.clone(), *va),
                        (axes[1].name.clone(), *vb),
                    ]);
                }
            }
            out
        }
    }
}

/// Run a parameter sweep over the configured grid.
pub fn run_phase_sweep(config: &SweepConfig) -> Result<GridResult> {
    config.validate()?;
    if config.mode == Mode::Nelc && config.fixed.tau <= 0.0 {
        return Err(OttoError::Config("nelc mode requires tau > 0".into()));
    }
    let points_in = grid_points(&config.axes);
    let points: Vec<PointRecord> = with_thread_pool(|| {
        points_in
            .par_iter()
            .map(|axis_values| {
                evaluate_point(
                    config.mode,
                    &config.fixed,
                    &config.bath,
                    &config.averaging,
                    axis_values,
                )
            })
            .collect()
    });
    Ok(GridResult {
        mode: config.mode,
        fixed: config.fixed,
        bath: config.bath,
        averaging: config.averaging,
        axes: config.axes.clone(),
        reference: BTreeMap::new(),
        points,
    })
}

/// Run a tau-scan: a 1-axis NELC sweep over `tau` with the GSLC/ELC
/// asymptotes recorded as reference metadata.
pub fn run_tau_scan(config: &SweepConfig) -> Result<GridResult> {
    if config.mode != Mode::Nelc {
        return Err(OttoError::Config("tau-scan requires mode = nelc".into()));
    }
    if config.axes.len() != 1 || config.axes[0].name != "tau" {
        return Err(OttoError::Config(
            "tau-scan requires exactly one grid axis named 'tau'".into(),
        ));
    }
    let mut result = run_phase_sweep(config)?;
    // asymptotes at the fixed parameters
    let params = config.fixed.to_cycle_params()?;
    let (q_h, q_c, w) = gslc_energy_flows(&params);
    result.reference.insert("gslc_q_h".into(), q_h);
    result.reference.insert("gslc_q_c".into(), q_c);
    result.reference.insert("gslc_w".into(), w);
    let eps = crate::thermo::dead_band(&params);
    let elc = elc_state(&params, &config.bath)?;
    let elc_flows = flows_for_pair(&params, &elc.rho_h, &elc.rho_c)?;
    let report = classify(&elc_flows, eps);
    if let Some(fom) = report.figure_of_merit {
        let key = match report.regime {
            Regime::Engine => "elc_eta",
            Regime::Refrigerator => "elc_xi",
            Regime::None => unreachable!(),
        };
        result.reference.insert(key.into(), fom);
    }
    Ok(result)
}

/// 17-significant-digit float formatting used by the CSV emitter.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:.16e}")
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|source| OttoError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    f.write_all(contents.as_bytes()).map_err(|source| OttoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Render the CSV body (UTF-8, LF, header then one line per point).
pub fn csv_string(result: &GridResult) -> String {
    let mut out = String::new();
    for ax in &result.axes {
        out.push_str(&ax.name);
        out.push(',');
    }
    out.push_str("Q_h,Q_c,W,regime,figure_of_merit,power,status\n");
    for p in &result.points {
        for v in &p.axis_values {
            out.push_str(&fmt_f64(*v));
            out.push(',');
        }
        out.push_str(&fmt_f64(p.q_h));
        out.push(',');
        out.push_str(&fmt_f64(p.q_c));
        out.push(',');
        out.push_str(&fmt_f64(p.w));
        out.push(',');
        out.push_str(p.regime.as_str());
        out.push(',');
        if let Some(m) = p.figure_of_merit {
            out.push_str(&fmt_f64(m));
        }
        out.push(',');
        if let Some(m) = p.power {
            out.push_str(&fmt_f64(m));
        }
        out.push(',');
        out.push_str(&p.status);
        out.push('\n');
    }
    out
}

pub fn emit_csv(result: &GridResult, path: &Path) -> Result<()> {
    write_file(path, &csv_string(result))
}

/// Render the JSON document `{meta: {...}, points: [...]}`.
pub fn json_string(result: &GridResult) -> String {
    let axes: Vec<Value> = result
        .axes
        .iter()
        .map(|ax| {
            serde_json::json!({
                "name": ax.name,
                "min": ax.min,
                "max": ax.max,
                "count": ax.count,
                "scale": if ax.log { "log" } else { "linear" },
            })
        })
        .collect();
    let meta = serde_json::json!({
        "mode": result.mode.as_str(),
        "version": env!("CARGO_PKG_VERSION"),
        "fixed": {
            "omega_h": result.fixed.omega_h,
            "omega_c": result.fixed.omega_c,
            "g_h": result.fixed.g_h,
            "g_c": result.fixed.g_c,
            "beta_h": result.fixed.beta_h,
            "beta_c": result.fixed.beta_c,
            "tau": result.fixed.tau,
        },
        "bath": {
            "gamma_scale": result.bath.gamma_scale,
            "omega_cutoff": result.bath.omega_cutoff,
        },
        "averaging": {
            "enabled": result.averaging.enabled,
            "samples": result.averaging.samples,
            "window": result.averaging.window,
        },
        "axes": axes,
        "reference": result.reference,
    });
    let points: Vec<Value> = result
        .points
        .iter()
        .map(|p| {
            serde_json::json!({
                "axis_values": p.axis_values,
                "Q_h": p.q_h,
                "Q_c": p.q_c,
                "W": p.w,
                "regime": p.regime.as_str(),
                "figure_of_merit": p.figure_of_merit,
                "power": p.power,
                "residual": p.residual,
                "status": p.status,
            })
        })
        .collect();
    let doc = serde_json::json!({ "meta": meta, "points": points });
    let mut s = serde_json::to_string_pretty(&doc).expect("in-memory JSON serialization");
    s.push('\n');
    s
}

pub fn emit_json(result: &GridResult, path: &Path) -> Result<()> {
    write_file(path, &json_string(result))
}

/// One entry of the `check` subcommand's internal invariant suite.
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, body: impl FnOnce() -> std::result::Result<String, String>) -> CheckOutcome {
    match body() {
        Ok(detail) => CheckOutcome {
            name,
            passed: true,
            detail,
        },
        Err(detail) => CheckOutcome {
            name,
            passed: false,
            detail,
        },
    }
}

/// Fast internal invariant suite backing the `check` subcommand.
pub fn run_check_suite() -> Vec<CheckOutcome> {
    let bath = BathSpec::default();
    let mut out = Vec::new();

    out.push(check("gslc closed form vs generic flows", || {
        let mut worst: f64 = 0.0;
        for g_h in [0.0, 1.0, 4.0] {
            for g_c in [0.0, 0.5, 1.0] {
                let p = CycleParams::new(5.0, 1.0, g_h, g_c, 0.2, 1.0, 1.0, 1.0)
                    .map_err(|e| e.to_string())?;
                let pair = gslc_limit_cycle(&p).map_err(|e| e.to_string())?;
                let flows =
                    flows_for_pair(&p, &pair.rho_h, &pair.rho_c).map_err(|e| e.to_string())?;
                let (q_h, q_c, w) = gslc_energy_flows(&p);
                worst = worst
                    .max((flows.q_h - q_h).abs())
                    .max((flows.q_c - q_c).abs())
                    .max((flows.w - w).abs());
            }
        }
        if worst <= 1e-12 {
            Ok(format!("max deviation {worst:.3e}"))
        } else {
            Err(format!("max deviation {worst:.3e} > 1e-12"))
        }
    }));

    out.push(check("elc stationary state equals gibbs state", || {
        let mut worst: f64 = 0.0;
        for (omega_h, g_h, beta_h) in [(5.0, 4.0, 0.2), (3.0, 2.0, 0.3), (2.0, 0.1, 0.5)] {
            let p = CycleParams::new(omega_h, 1.0, g_h, 1.0, beta_h, 1.0, 1.0, 1.0)
                .map_err(|e| e.to_string())?;
            let sol = elc_state(&p, &bath).map_err(|e| e.to_string())?;
            let gh = crate::gslc::gibbs_state(p.omega_h, p.g_h, p.beta_h)
                .map_err(|e| e.to_string())?;
            worst = worst.max(sol.rho_h.trace_distance(&gh));
        }
        if worst <= 1e-10 {
            Ok(format!("max trace distance {worst:.3e}"))
        } else {
            Err(format!("max trace distance {worst:.3e} > 1e-10"))
        }
    }));

    out.push(check("nelc solver agrees with cycle iteration", || {
        let p = CycleParams::new(5.0, 1.0, 4.0, 1.0, 0.2, 1.0, 100.0, 100.0)
            .map_err(|e| e.to_string())?;
        let (sol, _) = solve_nelc(&p, &bath).map_err(|e| e.to_string())?;
        let rho0 = crate::qubit::DensityMatrix::maximally_mixed(BasisTag::Original);
        let (traj, _) =
            crate::limit_cycle::iterate_cycle(&rho0, &p, &bath, 5000).map_err(|e| e.to_string())?;
        let d = traj.last().unwrap().trace_distance(&sol.rho_c);
        if d <= 1e-8 {
            Ok(format!("trace distance {d:.3e}"))
        } else {
            Err(format!("trace distance {d:.3e} > 1e-8"))
        }
    }));

    out.push(check("first law and carnot bounds on a sweep", || {
        let mut cfg = SweepConfig::default();
        cfg.axes = vec![
            AxisSpec {
                name: "g_h".into(),
                min: 0.0,
                max: 4.5,
                count: 8,
                log: false,
            },
            AxisSpec {
                name: "g_c".into(),
                min: 0.0,
                max: 0.9,
                count: 8,
                log: false,
            },
        ];
        let result = run_phase_sweep(&cfg).map_err(|e| e.to_string())?;
        let params = cfg.fixed.to_cycle_params().map_err(|e| e.to_string())?;
        let eta_max = crate::thermo::carnot_eta(&params);
        let xi_max = crate::thermo::carnot_xi(&params);
        for p in &result.points {
            if p.status != "ok" {
                continue;
            }
            if (p.w + p.q_h + p.q_c).abs() > 1e-12 {
                return Err(format!("first law violated by {:.3e}", p.w + p.q_h + p.q_c));
            }
            match (p.regime, p.figure_of_merit) {
                (Regime::Engine, Some(eta)) if eta > eta_max + 1e-12 => {
                    return Err(format!("eta {eta} exceeds Carnot {eta_max}"));
                }
                (Regime::Refrigerator, Some(xi)) if xi > xi_max + 1e-12 => {
                    return Err(format!("xi {xi} exceeds Carnot {xi_max}"));
                }
                _ => {}
            }
        }
        Ok(format!("{} points checked", result.points.len()))
    }));

    out.push(check("sweep output determinism", || {
        let mut cfg = SweepConfig::default();
        cfg.axes = vec![AxisSpec {
            name: "g_h".into(),
            min: 0.5,
            max: 4.0,
            count: 5,
            log: false,
        }];
        let a = run_phase_sweep(&cfg).map_err(|e| e.to_string())?;
        let b = run_phase_sweep(&cfg).map_err(|e| e.to_string())?;
        if csv_string(&a) == csv_string(&b) && json_string(&a) == json_string(&b) {
            Ok("byte-identical reruns".into())
        } else {
            Err("rerun output differs".into())
        }
    }));

    out
}
