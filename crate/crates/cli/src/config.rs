//! Run configuration: the resolved [`RunConfig`], the [`ConfigOverlay`]
//! layering (defaults, preset, config file, command-line flags — later
//! sources win), the flat `key = value` file format, and the bundled presets.

use crate::record::RunRecord;
use crate::SPEED_OF_LIGHT_M_S;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Simulate,
    TauD,
    SweepRadius,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Simulate => "simulate",
            Mode::TauD => "tau-d",
            Mode::SweepRadius => "sweep-radius",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Geometry {
    Schwarzschild,
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrajectoryKind {
    Circular,
    Inertial,
}

/// A fully resolved, validated run configuration. Round-trips losslessly
/// through the JSON run record; unknown keys are rejected everywhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    pub geometry: Geometry,
    pub trajectory: TrajectoryKind,
    /// Orbit radius in Schwarzschild radii (fixed to 1 in flat spacetime,
    /// where the orbit radius itself is the length unit).
    pub r_over_rs: f64,
    pub v_over_c: f64,
    pub w_over_mc: f64,
    pub tau_max_over_tau_s: f64,
    pub dtau_over_tau_s: f64,
    pub nodes: usize,
    /// Grid divisor N of the radius sweep: rows at rs/r = k/N, k = 1..N-1.
    pub sweep_points: usize,
    /// SI length scale (the Schwarzschild radius in meters); set by the
    /// `iss` preset so decoherence times can also be reported in years.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rs_meters: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

/// Partial configuration; merged in precedence order, then finalized.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverlay {
    pub mode: Option<Mode>,
    pub geometry: Option<Geometry>,
    pub trajectory: Option<TrajectoryKind>,
    pub r_over_rs: Option<f64>,
    pub v_over_c: Option<f64>,
    pub w_over_mc: Option<f64>,
    pub tau_max_over_tau_s: Option<f64>,
    pub dtau_over_tau_s: Option<f64>,
    pub nodes: Option<usize>,
    pub sweep_points: Option<usize>,
    pub rs_meters: Option<f64>,
    pub out: Option<PathBuf>,
}

impl ConfigOverlay {
    /// Later layer wins field by field.
    pub fn merge(mut self, over: ConfigOverlay) -> ConfigOverlay {
        macro_rules! take {
            ($($field:ident),*) => { $( if over.$field.is_some() { self.$field = over.$field; } )* };
        }
        take!(
            mode,
            geometry,
            trajectory,
            r_over_rs,
            v_over_c,
            w_over_mc,
            tau_max_over_tau_s,
            dtau_over_tau_s,
            nodes,
            sweep_points,
            rs_meters,
            out
        );
        self
    }

    pub fn from_config(config: &RunConfig) -> ConfigOverlay {
        ConfigOverlay {
            mode: Some(config.mode),
            geometry: Some(config.geometry),
            trajectory: Some(config.trajectory),
            r_over_rs: Some(config.r_over_rs),
            v_over_c: Some(config.v_over_c),
            w_over_mc: Some(config.w_over_mc),
            tau_max_over_tau_s: Some(config.tau_max_over_tau_s),
            dtau_over_tau_s: Some(config.dtau_over_tau_s),
            nodes: Some(config.nodes),
            sweep_points: Some(config.sweep_points),
            rs_meters: config.rs_meters,
            out: config.out.clone(),
        }
    }

    /// Fills defaults and validates everything. `r_over_rs`, `v_over_c` and
    /// `w_over_mc` have no defaults where the mode needs them.
    pub fn finalize(self) -> Result<RunConfig, String> {
        let mode = self.mode.ok_or("no mode selected")?;
        let geometry = self.geometry.unwrap_or(Geometry::Schwarzschild);
        let trajectory = self.trajectory.unwrap_or(TrajectoryKind::Circular);

        let r_over_rs = match (geometry, self.r_over_rs) {
            (Geometry::Flat, None) => 1.0,
            (Geometry::Flat, Some(r)) => {
                if r != 1.0 {
                    return Err(format!(
                        "flat runs use the orbit radius as the length unit; \
                         r_over_rs is fixed at 1, got {r}"
                    ));
                }
                r
            }
            (Geometry::Schwarzschild, Some(r)) => r,
            (Geometry::Schwarzschild, None) => {
                if mode == Mode::SweepRadius {
                    1.0 // unused: the sweep supplies its own grid
                } else {
                    return Err("r_over_rs is required".into());
                }
            }
        };
        let v_over_c = self.v_over_c.ok_or("v_over_c is required")?;
        let w_over_mc = match (mode, self.w_over_mc) {
            (Mode::SweepRadius, None) => 1.0, // the normalized sweep output is w-independent
            (_, None) => return Err("w_over_mc is required".into()),
            (_, Some(w)) => w,
        };
        let config = RunConfig {
            mode,
            geometry,
            trajectory,
            r_over_rs,
            v_over_c,
            w_over_mc,
            tau_max_over_tau_s: self.tau_max_over_tau_s.unwrap_or(5.0),
            dtau_over_tau_s: self.dtau_over_tau_s.unwrap_or(5e-4),
            nodes: self.nodes.unwrap_or(128),
            sweep_points: self.sweep_points.unwrap_or(999),
            rs_meters: self.rs_meters,
            out: self.out,
        };
        config.validate()?;
        Ok(config)
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        let c = self;
        if !c.r_over_rs.is_finite() || c.r_over_rs <= 0.0 {
            return Err(format!("r_over_rs = {} must be positive", c.r_over_rs));
        }
        if c.geometry == Geometry::Schwarzschild
            && c.mode != Mode::SweepRadius
            && c.r_over_rs <= 1.0
        {
            return Err(format!(
                "r_over_rs = {} lies at or inside the horizon",
                c.r_over_rs
            ));
        }
        if !(0.0..1.0).contains(&c.v_over_c) {
            return Err(format!("v_over_c = {} outside [0, 1)", c.v_over_c));
        }
        if !c.w_over_mc.is_finite() || c.w_over_mc <= 0.0 {
            return Err(format!("w_over_mc = {} must be positive", c.w_over_mc));
        }
        if !c.tau_max_over_tau_s.is_finite() || c.tau_max_over_tau_s <= 0.0 {
            return Err("tau_max_over_tau_s must be positive".into());
        }
        if !c.dtau_over_tau_s.is_finite()
            || c.dtau_over_tau_s <= 0.0
            || c.dtau_over_tau_s > c.tau_max_over_tau_s
        {
            return Err("dtau_over_tau_s must be positive and at most tau_max_over_tau_s".into());
        }
        if !(4..=4096).contains(&c.nodes) {
            return Err(format!("nodes = {} outside [4, 4096]", c.nodes));
        }
        if !(10..=1_000_000).contains(&c.sweep_points) {
            return Err(format!(
                "sweep_points = {} outside [10, 1000000]",
                c.sweep_points
            ));
        }
        if let Some(rs) = c.rs_meters {
            if !rs.is_finite() || rs <= 0.0 {
                return Err(format!("rs_meters = {rs} must be positive"));
            }
        }
        if c.trajectory == TrajectoryKind::Inertial {
            if c.geometry != Geometry::Flat {
                return Err("the inertial trajectory is only available in flat spacetime".into());
            }
            if c.mode != Mode::Simulate {
                return Err("the inertial trajectory only supports the simulate mode".into());
            }
        }
        if c.mode == Mode::SweepRadius && c.geometry == Geometry::Flat {
            return Err("sweep-radius requires Schwarzschild geometry".into());
        }
        Ok(())
    }
}

/// Parses configuration text: either the flat `key = value` format
/// (`#` starts a comment) or, when the text opens with `{`, a JSON run
/// record whose embedded config is re-used wholesale.
pub fn parse_config_text(text: &str) -> Result<ConfigOverlay, String> {
    if text.trim_start().starts_with('{') {
        let record: RunRecord =
            serde_json::from_str(text).map_err(|e| format!("not a valid JSON run record: {e}"))?;
        return Ok(ConfigOverlay::from_config(&record.config));
    }
    let mut overlay = ConfigOverlay::default();
    let mut seen: Vec<String> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let (key, value) = line.split_once('=').ok_or(format!(
            "line {lineno}: expected `key = value`, got `{line}`"
        ))?;
        let key = key.trim();
        let value = value.trim();
        if seen.iter().any(|k| k == key) {
            return Err(format!("line {lineno}: duplicate key `{key}`"));
        }
        seen.push(key.to_string());
        apply_key(&mut overlay, key, value).map_err(|e| format!("line {lineno}: {e}"))?;
    }
    Ok(overlay)
}

pub fn parse_mode(value: &str) -> Result<Mode, String> {
    match value {
        "simulate" => Ok(Mode::Simulate),
        "tau-d" => Ok(Mode::TauD),
        "sweep-radius" => Ok(Mode::SweepRadius),
        other => Err(format!(
            "unknown mode `{other}` (simulate | tau-d | sweep-radius)"
        )),
    }
}

pub fn parse_geometry(value: &str) -> Result<Geometry, String> {
    match value {
        "schwarzschild" => Ok(Geometry::Schwarzschild),
        "flat" => Ok(Geometry::Flat),
        other => Err(format!("unknown geometry `{other}` (schwarzschild | flat)")),
    }
}

pub fn parse_trajectory(value: &str) -> Result<TrajectoryKind, String> {
    match value {
        "circular" => Ok(TrajectoryKind::Circular),
        "inertial" => Ok(TrajectoryKind::Inertial),
        other => Err(format!(
            "unknown trajectory `{other}` (circular | inertial)"
        )),
    }
}

fn apply_key(overlay: &mut ConfigOverlay, key: &str, value: &str) -> Result<(), String> {
    let float = |v: &str| -> Result<f64, String> {
        v.parse::<f64>()
            .map_err(|_| format!("`{v}` is not a number"))
    };
    let count = |v: &str| -> Result<usize, String> {
        v.parse::<usize>()
            .map_err(|_| format!("`{v}` is not a count"))
    };
    match key {
        "mode" => overlay.mode = Some(parse_mode(value)?),
        "geometry" => overlay.geometry = Some(parse_geometry(value)?),
        "trajectory" => overlay.trajectory = Some(parse_trajectory(value)?),
        "r_over_rs" => overlay.r_over_rs = Some(float(value)?),
        "v_over_c" => overlay.v_over_c = Some(float(value)?),
        "w_over_mc" => overlay.w_over_mc = Some(float(value)?),
        "tau_max_over_tau_s" => overlay.tau_max_over_tau_s = Some(float(value)?),
        "dtau_over_tau_s" => overlay.dtau_over_tau_s = Some(float(value)?),
        "nodes" => overlay.nodes = Some(count(value)?),
        "sweep_points" => overlay.sweep_points = Some(count(value)?),
        "rs_meters" => overlay.rs_meters = Some(float(value)?),
        "out" => overlay.out = Some(PathBuf::from(value)),
        other => return Err(format!("unknown key `{other}`")),
    }
    Ok(())
}

/// SI inputs of the `iss` preset.
#[derive(Debug, Clone, Copy)]
pub struct IssInputs {
    pub rs_meters: f64,
    pub r_meters: f64,
    pub v_meters_per_second: f64,
}

impl Default for IssInputs {
    fn default() -> Self {
        Self {
            rs_meters: 8.87e-3,
            r_meters: 6.8e6,
            v_meters_per_second: 7.7e3,
        }
    }
}

/// Bundled presets reproducing each headline configuration in one command.
pub fn preset(name: &str, iss: IssInputs) -> Result<ConfigOverlay, String> {
    let mut overlay = ConfigOverlay::default();
    match name {
        "fig2" => {
            overlay.mode = Some(Mode::Simulate);
            overlay.r_over_rs = Some(1.0 / 0.9);
            overlay.v_over_c = Some(0.8);
            overlay.w_over_mc = Some(0.1);
        }
        "fig3" => {
            overlay.mode = Some(Mode::SweepRadius);
            overlay.v_over_c = Some(0.8);
        }
        "photon-sphere" => {
            overlay.mode = Some(Mode::Simulate);
            overlay.r_over_rs = Some(1.5);
            overlay.v_over_c = Some(0.8);
            overlay.w_over_mc = Some(0.1);
        }
        "flat-inertial" => {
            overlay.mode = Some(Mode::Simulate);
            overlay.geometry = Some(Geometry::Flat);
            overlay.trajectory = Some(TrajectoryKind::Inertial);
            overlay.v_over_c = Some(0.8);
            overlay.w_over_mc = Some(0.1);
        }
        "iss" => {
            if iss.rs_meters <= 0.0 || iss.r_meters <= iss.rs_meters {
                return Err("iss preset needs 0 < rs_m < r_m".into());
            }
            if !(0.0..SPEED_OF_LIGHT_M_S).contains(&iss.v_meters_per_second) {
                return Err("iss preset needs 0 <= v_m_s < c".into());
            }
            overlay.mode = Some(Mode::TauD);
            overlay.r_over_rs = Some(iss.r_meters / iss.rs_meters);
            overlay.v_over_c = Some(iss.v_meters_per_second / SPEED_OF_LIGHT_M_S);
            overlay.w_over_mc = Some(1.0);
            overlay.rs_meters = Some(iss.rs_meters);
        }
        other => {
            return Err(format!(
                "unknown preset `{other}` \
                 (fig2 | fig3 | iss | flat-inertial | photon-sphere)"
            ))
        }
    }
    Ok(overlay)
}

pub const PRESET_NAMES: [&str; 5] = ["fig2", "fig3", "iss", "flat-inertial", "photon-sphere"];
