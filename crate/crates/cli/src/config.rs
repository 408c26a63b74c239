//! Flat `key = value` run configuration (TOML syntax, no tables).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use elastica::mesh::{sample_preset, PresetInfo};
use elastica::{Grid, Monitor, Preset, RunConfig, Variant};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, Result};

pub const OUT_DIR_ENV: &str = "ELASTICA_OUT_DIR";

/// Out-of-plane amplitude of the hypotrochoid when run in 3D without `alpha`.
pub const SPATIAL_HYPOTROCHOID_ALPHA: f64 = 0.5;

/// Snapshots written when `record_stride` is left out.
pub const DEFAULT_SNAPSHOTS: usize = 100;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    dimension: Option<usize>,
    #[serde(rename = "N")]
    vertices: Option<usize>,
    delta: Option<f64>,
    #[serde(rename = "m_T")]
    steps: Option<usize>,
    #[serde(rename = "T")]
    t_final: Option<f64>,
    scheme: Option<String>,
    lambda: Option<f64>,
    lambda_tilde: Option<f64>,
    epsilon: Option<f64>,
    monitor: Option<String>,
    preset: Option<String>,
    radius: Option<f64>,
    fixed_radius: Option<f64>,
    rolling_radius: Option<f64>,
    offset: Option<f64>,
    alpha: Option<f64>,
    points: Option<Vec<Vec<f64>>>,
    record_stride: Option<usize>,
    out_dir: Option<PathBuf>,
}

/// Fully resolved run, as recorded in the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub preset: String,
    pub preset_params: BTreeMap<&'static str, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layout: Option<String>,
    pub dimension: usize,
    #[serde(rename = "N")]
    pub vertices: usize,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub delta: f64,
    #[serde(rename = "m_T")]
    pub steps: usize,
    pub scheme: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_tilde: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monitor: Option<String>,
    pub record_stride: usize,
    pub circle_error: bool,
    pub out_dir: PathBuf,
    #[serde(skip)]
    pub run: RunConfig,
}

fn missing(key: &str) -> CliError {
    CliError::Config(format!("missing required key `{key}`"))
}

fn parse_monitor(text: &str) -> Result<Monitor> {
    if text == "lemniscate-quadratic" {
        return Ok(Monitor::LemniscateQuadratic);
    }
    let value = text
        .strip_prefix("constant:")
        .and_then(|c| c.trim().parse::<f64>().ok())
        .ok_or_else(|| {
            CliError::Config(format!(
                "monitor `{text}`: expected `constant:<value>` or `lemniscate-quadratic`"
            ))
        })?;
    if !(value > 0.0 && value.is_finite()) {
        return Err(CliError::Config("monitor constant must be positive".into()));
    }
    Ok(Monitor::Constant(value))
}

fn reject(present: bool, key: &str, context: &str) -> Result<()> {
    if present {
        Err(CliError::Config(format!("key `{key}` does not apply to {context}")))
    } else {
        Ok(())
    }
}

/// Builds the preset and records its parameters for the manifest.
fn resolve_preset(raw: &RawConfig, name: &str) -> Result<(Preset, BTreeMap<&'static str, Value>)> {
    let circle_like = matches!(name, "circle" | "circle-nonequi");
    let hypo = name == "hypotrochoid";
    let nodal = name == "custom-nodal";
    let context = format!("preset `{name}`");
    reject(raw.radius.is_some() && !circle_like, "radius", &context)?;
    for (key, v) in [
        ("fixed_radius", raw.fixed_radius),
        ("rolling_radius", raw.rolling_radius),
        ("offset", raw.offset),
        ("alpha", raw.alpha),
    ] {
        reject(v.is_some() && !hypo, key, &context)?;
    }
    reject(raw.points.is_some() && !nodal, "points", &context)?;

    let mut params = BTreeMap::new();
    let preset = if nodal {
        let points = raw.points.as_ref().ok_or_else(|| missing("points"))?;
        let dim = points.first().map_or(0, Vec::len);
        if points.iter().any(|p| p.len() != dim) {
            return Err(CliError::Config("all points need the same number of coordinates".into()));
        }
        params.insert("points", serde_json::json!(points));
        Preset::Nodal {
            dim,
            coords: points.concat(),
        }
    } else {
        let mut preset = Preset::by_name(name)?;
        match &mut preset {
            Preset::Circle { radius } | Preset::CircleNonequi { radius } => {
                *radius = raw.radius.unwrap_or(*radius);
                params.insert("radius", Value::from(*radius));
            }
            Preset::Hypotrochoid {
                fixed_radius,
                rolling_radius,
                offset,
                alpha,
            } => {
                *fixed_radius = raw.fixed_radius.unwrap_or(*fixed_radius);
                *rolling_radius = raw.rolling_radius.unwrap_or(*rolling_radius);
                *offset = raw.offset.unwrap_or(*offset);
                *alpha = raw.alpha.unwrap_or(*alpha);
                params.insert("fixed_radius", Value::from(*fixed_radius));
                params.insert("rolling_radius", Value::from(*rolling_radius));
                params.insert("offset", Value::from(*offset));
                params.insert("alpha", Value::from(*alpha));
            }
            _ => {}
        }
        preset
    };
    preset.validate()?;
    Ok((preset, params))
}

/// Parses and validates a config document. `env_out_dir` is used when the
/// document has no `out_dir`; the current directory is the last resort.
pub fn parse_config(text: &str, env_out_dir: Option<PathBuf>) -> Result<ResolvedConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))?;

    let preset_name = raw.preset.clone().ok_or_else(|| missing("preset"))?;
    let vertices = raw.vertices.ok_or_else(|| missing("N"))?;
    let t_final = raw.t_final.ok_or_else(|| missing("T"))?;
    let (mut preset, mut preset_params) = resolve_preset(&raw, &preset_name)?;
    let defaults = PresetInfo::lookup(&preset_name).ok();
    let dimension = raw.dimension.unwrap_or_else(|| preset.natural_dim());
    if let Preset::Hypotrochoid { alpha, .. } = &mut preset {
        if dimension == 3 && raw.alpha.is_none() {
            *alpha = SPATIAL_HYPOTROCHOID_ALPHA;
            preset_params.insert("alpha", Value::from(*alpha));
        }
    }

    let scheme = raw.scheme.as_deref().unwrap_or("dirichlet");
    let (variant, scheme) = match scheme {
        "dirichlet" => {
            let context = "the dirichlet scheme";
            reject(raw.lambda_tilde.is_some(), "lambda_tilde", context)?;
            reject(raw.epsilon.is_some(), "epsilon", context)?;
            reject(raw.monitor.is_some(), "monitor", context)?;
            let lambda = raw
                .lambda
                .or(defaults.map(|d| d.lambda))
                .ok_or_else(|| missing("lambda"))?;
            (Variant::Dirichlet { lambda }, "dirichlet")
        }
        "extended" => {
            reject(raw.lambda.is_some(), "lambda", "the extended scheme (use `lambda_tilde`)")?;
            let monitor = parse_monitor(raw.monitor.as_deref().unwrap_or("constant:1"))?;
            (
                Variant::Extended {
                    lambda_tilde: raw.lambda_tilde.ok_or_else(|| missing("lambda_tilde"))?,
                    epsilon: raw.epsilon.ok_or_else(|| missing("epsilon"))?,
                    monitor,
                },
                "extended",
            )
        }
        other => {
            return Err(CliError::Config(format!(
                "scheme `{other}`: expected `dirichlet` or `extended`"
            )))
        }
    };

    let run = match (raw.delta, raw.steps) {
        (Some(_), Some(_)) => {
            return Err(CliError::Config("`delta` and `m_T` are mutually exclusive".into()))
        }
        (None, None) => return Err(missing("delta` or `m_T")),
        (Some(delta), None) => RunConfig::with_delta(vertices, dimension, preset, variant, t_final, delta)?,
        (None, Some(steps)) => RunConfig::with_steps(vertices, dimension, preset, variant, t_final, steps)?,
    };
    sample_preset(&run.preset, &Grid::uniform(vertices)?, dimension)?;

    let record_stride = raw
        .record_stride
        .unwrap_or_else(|| (run.steps / DEFAULT_SNAPSHOTS).max(1));
    let circle_error = matches!(run.preset, Preset::Circle { .. }) && !run.params.is_extended();
    let mut run = run.record_stride(record_stride);
    if circle_error {
        run = run.track_circle_error();
    }
    run.validate()?;

    let (lambda, lambda_tilde, epsilon, monitor) = match &run.params.variant {
        Variant::Dirichlet { lambda } => (Some(*lambda), None, None, None),
        Variant::Extended {
            lambda_tilde,
            epsilon,
            monitor,
        } => (None, Some(*lambda_tilde), Some(*epsilon), Some(monitor_label(monitor))),
    };
    let layout = (preset_name == "circle-nonequi").then(|| {
        "vertices j < N/2 at angle pi/2 + (pi/2) j/(N/2); the rest at pi + (3pi/2)(j - N/2)/(N - N/2)".to_string()
    });
    Ok(ResolvedConfig {
        preset: preset_name,
        preset_params,
        layout,
        dimension,
        vertices,
        t_final,
        delta: run.delta(),
        steps: run.steps,
        scheme,
        lambda,
        lambda_tilde,
        epsilon,
        monitor,
        record_stride,
        circle_error,
        out_dir: raw.out_dir.or(env_out_dir).unwrap_or_else(|| PathBuf::from(".")),
        run,
    })
}

fn monitor_label(m: &Monitor) -> String {
    match m {
        Monitor::Constant(c) => format!("constant:{c}"),
        Monitor::LemniscateQuadratic => "lemniscate-quadratic".into(),
        Monitor::Tabulated(_) => "tabulated".into(),
    }
}

/// Reads `path` and resolves it, falling back to `$ELASTICA_OUT_DIR`.
pub fn load_config(path: &Path) -> Result<ResolvedConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let env = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    parse_config(&text, env)
}
