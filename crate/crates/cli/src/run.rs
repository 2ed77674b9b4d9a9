//! Executes a resolved [`RunConfig`] and renders its outputs: plot-ready CSV,
//! human-readable stdout lines, and the JSON run record.

use crate::config::{Geometry, Mode, RunConfig, TrajectoryKind};
use crate::record::{DiagnosticsDto, RunRecord, RunResult, SeriesRow, SweepRow, TaggedTime};
use crate::{ROTOR_DRIFT_LIMIT, SHELL_VIOLATION_LIMIT, SPEED_OF_LIGHT_M_S, YEAR_SECONDS};
use std::path::PathBuf;
use wigner_drift_core::evolution::{decoherence_time, run_simulation, DecoherenceParams};
use wigner_drift_core::kinematics::{CircularOrbit, RadialLine, WorldLine};
use wigner_drift_core::spacetime::Schwarzschild;
use wigner_drift_core::wavepacket::PacketSpec;

const MASS: f64 = 1.0;
/// Target number of CSV rows of a simulation run.
const TARGET_ROWS: usize = 500;

/// Everything a run produces, before any file is touched.
#[derive(Debug, Clone)]
pub struct Execution {
    pub csv: Option<String>,
    pub stdout: String,
    pub record: RunRecord,
    pub diagnostics_ok: bool,
}

pub fn execute(config: &RunConfig) -> Result<Execution, String> {
    config.validate()?;
    match config.mode {
        Mode::Simulate => simulate(config),
        Mode::TauD => tau_d(config),
        Mode::SweepRadius => sweep_radius(config),
    }
}

fn geometry_of(config: &RunConfig) -> Schwarzschild {
    match config.geometry {
        Geometry::Schwarzschild => Schwarzschild::unit(),
        Geometry::Flat => Schwarzschild::flat(),
    }
}

fn fmt(x: f64) -> String {
    // Fold -0.0 into 0.0 so zero rows print uniformly.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.12e}")
}

fn simulate(config: &RunConfig) -> Result<Execution, String> {
    let geometry = geometry_of(config);
    let xi = config.v_over_c.atanh();
    let packet =
        PacketSpec::new(xi.sinh(), config.w_over_mc, config.nodes).map_err(|e| e.to_string())?;
    let line: Box<dyn WorldLine> = match config.trajectory {
        TrajectoryKind::Circular => Box::new(
            CircularOrbit::from_velocity(&geometry, config.r_over_rs, config.v_over_c, 1.0)
                .map_err(|e| e.to_string())?,
        ),
        TrajectoryKind::Inertial => Box::new(RadialLine {
            r0: 1.0,
            rapidity: xi,
        }),
    };

    // tau_s = m r_s / w, with the orbit radius (pinned to 1) as the length
    // unit in flat spacetime.
    let tau_s = MASS / config.w_over_mc;
    let tau_max = config.tau_max_over_tau_s * tau_s;
    let dtau = config.dtau_over_tau_s * tau_s;
    let steps = (tau_max / dtau).round() as usize;
    let stride = (steps / TARGET_ROWS).max(1);

    let result = run_simulation(
        &geometry,
        line.as_ref(),
        &packet,
        MASS,
        tau_max,
        dtau,
        stride,
    )
    .map_err(|e| e.to_string())?;

    let mut csv =
        String::from("tau_over_tau_s,entropy_bits,bloch_1,bloch_2,bloch_3,centroid_angle_rad\n");
    let mut rows = Vec::with_capacity(result.rows.len());
    for row in &result.rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt(row.tau_over_tau_s),
            fmt(row.entropy_bits),
            fmt(row.bloch[0]),
            fmt(row.bloch[1]),
            fmt(row.bloch[2]),
            fmt(row.centroid_angle_rad),
        ));
        rows.push(SeriesRow {
            tau_over_tau_s: row.tau_over_tau_s,
            entropy_bits: row.entropy_bits,
            bloch_1: row.bloch[0],
            bloch_2: row.bloch[1],
            bloch_3: row.bloch[2],
            centroid_angle_rad: row.centroid_angle_rad,
        });
    }

    let diagnostics = DiagnosticsDto {
        max_shell_violation: result.diagnostics.max_shell_violation,
        max_rotor_drift: result.diagnostics.max_rotor_drift,
        steps: result.diagnostics.steps,
    };
    let diagnostics_ok = diagnostics.max_shell_violation < SHELL_VIOLATION_LIMIT
        && diagnostics.max_rotor_drift < ROTOR_DRIFT_LIMIT;
    let last = result.rows.last().expect("at least the initial row");
    let stdout = format!(
        "rows = {}\nfinal_tau_over_tau_s = {}\nfinal_entropy_bits = {}\n",
        result.rows.len(),
        fmt(last.tau_over_tau_s),
        fmt(last.entropy_bits),
    );

    Ok(Execution {
        csv: Some(csv),
        stdout,
        record: RunRecord {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            diagnostics: Some(diagnostics),
            result: RunResult::Series { rows },
        },
        diagnostics_ok,
    })
}

fn tau_d(config: &RunConfig) -> Result<Execution, String> {
    let geometry = geometry_of(config);
    let td = decoherence_time(
        &geometry,
        &DecoherenceParams {
            r: config.r_over_rs,
            v_over_c: config.v_over_c,
            w_over_mc: config.w_over_mc,
        },
    )
    .map_err(|e| e.to_string())?;

    let tau_d = match td.finite() {
        Some(t) => TaggedTime::Finite(t),
        None => TaggedTime::Infinite,
    };
    let tau_s = MASS / config.w_over_mc;
    let tau_d_over_tau_s = tau_d.map(|t| t / tau_s);
    let (tau_d_years, tau_d_years_times_mc_over_w) = match config.rs_meters {
        Some(rs_m) => {
            let years = tau_d.map(|t| t * rs_m / SPEED_OF_LIGHT_M_S / YEAR_SECONDS);
            (Some(years), Some(years.map(|y| y * config.w_over_mc)))
        }
        None => (None, None),
    };

    let mut stdout = format!(
        "tau_d = {}\ntau_d_over_tau_s = {}\n",
        tau_d.display(),
        tau_d_over_tau_s.display()
    );
    if let Some(years) = tau_d_years {
        stdout.push_str(&format!("tau_d_years = {}\n", years.display()));
    }
    if let Some(norm) = tau_d_years_times_mc_over_w {
        stdout.push_str(&format!(
            "tau_d_years_times_mc_over_w = {}\n",
            norm.display()
        ));
    }

    Ok(Execution {
        csv: None,
        stdout,
        record: RunRecord {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            diagnostics: None,
            result: RunResult::TauD {
                tau_d,
                tau_d_over_tau_s,
                tau_d_years,
                tau_d_years_times_mc_over_w,
            },
        },
        diagnostics_ok: true,
    })
}

fn sweep_radius(config: &RunConfig) -> Result<Execution, String> {
    let geometry = geometry_of(config);
    let n = config.sweep_points;
    let nf = n as f64;
    let mut csv = String::from("rs_over_r,inverse_tau_d_over_inverse_tau_s\n");
    let mut rows = Vec::with_capacity(n - 1);
    for k in 1..n {
        let kf = k as f64;
        let rs_over_r = kf / nf;
        // Normalized by 1/tau_s at w/mc = 1, where tau_s = 1; the product
        // tau_s/tau_d does not depend on the packet width.
        let value = decoherence_time(
            &geometry,
            &DecoherenceParams {
                r: nf / kf,
                v_over_c: config.v_over_c,
                w_over_mc: 1.0,
            },
        )
        .map_err(|e| e.to_string())?
        .inverse();
        csv.push_str(&format!("{},{}\n", fmt(rs_over_r), fmt(value)));
        rows.push(SweepRow {
            rs_over_r,
            inverse_tau_d_over_inverse_tau_s: value,
        });
    }

    let stdout = format!("rows = {}\n", rows.len());
    Ok(Execution {
        csv: Some(csv),
        stdout,
        record: RunRecord {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            diagnostics: None,
            result: RunResult::Sweep { rows },
        },
        diagnostics_ok: true,
    })
}

/// Where a run's artifacts go: CSV for simulate/sweep plus the JSON record.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputPaths {
    pub csv: Option<PathBuf>,
    pub record: PathBuf,
}

pub fn output_paths(config: &RunConfig, default_stem: &str) -> OutputPaths {
    match config.mode {
        Mode::Simulate | Mode::SweepRadius => {
            let csv = config
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from(format!("{default_stem}.csv")));
            let record = csv.with_extension("json");
            OutputPaths {
                csv: Some(csv),
                record,
            }
        }
        Mode::TauD => {
            let record = config
                .out
                .clone()
                .map(|p| p.with_extension("json"))
                .unwrap_or_else(|| PathBuf::from(format!("{default_stem}.json")));
            OutputPaths { csv: None, record }
        }
    }
}
