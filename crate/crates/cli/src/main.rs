use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use wigner_drift::config::{
    parse_config_text, parse_geometry, parse_trajectory, preset, ConfigOverlay, IssInputs, Mode,
};
use wigner_drift::run::{execute, output_paths};
use wigner_drift::{ROTOR_DRIFT_LIMIT, SHELL_VIOLATION_LIMIT};

/// Spin decoherence of wave packets on orbits around a static
/// spherically-symmetric mass.
#[derive(Parser)]
#[command(name = "wigner-drift", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the packet along its orbit; writes CSV + JSON record.
    Simulate(CommonArgs),
    /// Evaluate the closed-form decoherence time.
    #[command(name = "tau-d")]
    TauD(CommonArgs),
    /// Tabulate the normalized inverse decoherence time over rs/r.
    SweepRadius(CommonArgs),
    /// Run a bundled preset.
    Preset(PresetArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Flat `key = value` config file, or a JSON run record to re-run.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Orbit radius in Schwarzschild radii.
    #[arg(long = "r_over_rs")]
    r_over_rs: Option<f64>,
    /// Orbital speed as a fraction of c.
    #[arg(long = "v_over_c")]
    v_over_c: Option<f64>,
    /// Momentum width of the packet in units of mc.
    #[arg(long = "w_over_mc")]
    w_over_mc: Option<f64>,
    /// Run length in units of tau_s = m r_s / w.
    #[arg(long = "tau_max_over_tau_s")]
    tau_max_over_tau_s: Option<f64>,
    /// Integrator step in units of tau_s.
    #[arg(long = "dtau_over_tau_s")]
    dtau_over_tau_s: Option<f64>,
    /// Quadrature nodes of the momentum packet (4..=4096).
    #[arg(long)]
    nodes: Option<usize>,
    /// Grid divisor of the radius sweep.
    #[arg(long = "sweep_points")]
    sweep_points: Option<usize>,
    /// schwarzschild | flat
    #[arg(long)]
    geometry: Option<String>,
    /// circular | inertial
    #[arg(long)]
    trajectory: Option<String>,
    /// Output path (CSV for simulate/sweep-radius; the JSON record sits
    /// next to it with a .json extension).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PresetArgs {
    /// fig2 | fig3 | iss | flat-inertial | photon-sphere
    name: String,
    #[command(flatten)]
    common: CommonArgs,
    /// Schwarzschild radius in meters (iss preset).
    #[arg(long = "rs_m")]
    rs_m: Option<f64>,
    /// Orbit radius in meters (iss preset).
    #[arg(long = "r_m")]
    r_m: Option<f64>,
    /// Orbital speed in m/s (iss preset).
    #[arg(long = "v_m_s")]
    v_m_s: Option<f64>,
}

fn overlay_from_flags(args: &CommonArgs) -> Result<ConfigOverlay, String> {
    Ok(ConfigOverlay {
        mode: None,
        geometry: args.geometry.as_deref().map(parse_geometry).transpose()?,
        trajectory: args
            .trajectory
            .as_deref()
            .map(parse_trajectory)
            .transpose()?,
        r_over_rs: args.r_over_rs,
        v_over_c: args.v_over_c,
        w_over_mc: args.w_over_mc,
        tau_max_over_tau_s: args.tau_max_over_tau_s,
        dtau_over_tau_s: args.dtau_over_tau_s,
        nodes: args.nodes,
        sweep_points: args.sweep_points,
        rs_meters: None,
        out: args.out.clone(),
    })
}

fn resolve_and_run(
    base: ConfigOverlay,
    forced_mode: Option<Mode>,
    args: &CommonArgs,
    default_stem: &str,
) -> Result<u8, String> {
    let mut overlay = base;
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let file_overlay = parse_config_text(&text)?;
        if let (Some(forced), Some(from_file)) = (forced_mode, file_overlay.mode) {
            if forced != from_file {
                return Err(format!(
                    "config file selects mode {from_file}, but the {forced} subcommand was invoked"
                ));
            }
        }
        overlay = overlay.merge(file_overlay);
    }
    overlay = overlay.merge(overlay_from_flags(args)?);
    if let Some(mode) = forced_mode {
        overlay.mode = Some(mode);
    }
    let config = overlay.finalize()?;
    let execution = execute(&config)?;

    let paths = output_paths(&config, default_stem);
    if let Some(csv_path) = &paths.csv {
        let csv = execution.csv.as_ref().expect("csv modes produce csv");
        std::fs::write(csv_path, csv)
            .map_err(|e| format!("cannot write {}: {e}", csv_path.display()))?;
        eprintln!("wrote {}", csv_path.display());
    }
    let record = serde_json::to_string_pretty(&execution.record)
        .map_err(|e| format!("cannot serialize run record: {e}"))?;
    std::fs::write(&paths.record, record + "\n")
        .map_err(|e| format!("cannot write {}: {e}", paths.record.display()))?;
    eprintln!("wrote {}", paths.record.display());

    print!("{}", execution.stdout);
    if !execution.diagnostics_ok {
        eprintln!(
            "diagnostics out of tolerance: shell violation limit {SHELL_VIOLATION_LIMIT:e}, \
             rotor drift limit {ROTOR_DRIFT_LIMIT:e}"
        );
        return Ok(1);
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, String> {
    match &cli.command {
        Command::Simulate(args) => resolve_and_run(
            ConfigOverlay::default(),
            Some(Mode::Simulate),
            args,
            "simulate",
        ),
        Command::TauD(args) => {
            resolve_and_run(ConfigOverlay::default(), Some(Mode::TauD), args, "tau-d")
        }
        Command::SweepRadius(args) => resolve_and_run(
            ConfigOverlay::default(),
            Some(Mode::SweepRadius),
            args,
            "sweep-radius",
        ),
        Command::Preset(preset_args) => {
            let mut iss = IssInputs::default();
            if let Some(rs) = preset_args.rs_m {
                iss.rs_meters = rs;
            }
            if let Some(r) = preset_args.r_m {
                iss.r_meters = r;
            }
            if let Some(v) = preset_args.v_m_s {
                iss.v_meters_per_second = v;
            }
            let base = preset(&preset_args.name, iss)?;
            resolve_and_run(base, None, &preset_args.common, &preset_args.name)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
