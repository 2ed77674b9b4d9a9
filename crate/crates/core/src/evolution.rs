//! The proper-time simulation loop and the observables built from it: the
//! reduced spin density matrix, its Bloch vector and entropy, and the
//! closed-form decoherence-time law with its first-principles oracle.
//!
//! Each momentum sample carries its own rotor; distinct momenta are
//! orthogonal, so the reduced spin state is the weight-averaged pure state
//! `rho_r = sum_k w_k (R_k chi)(R_k chi)^dagger`. The packet dephases because
//! the rotation rate differs across the momentum spread; the entropy is
//! computed from the Bloch length in closed form, which is exact for 2x2
//! Hermitian unit-trace matrices and stable near purity.

use crate::error::{Error, Result};
use crate::kinematics::{
    generator_along, lambda_generator, local_vectors, CircularOrbit, WorldLine,
};
use crate::spacetime::Schwarzschild;
use crate::wavepacket::{MomentumSample, PacketSpec};
use crate::wigner::{rk4_sample_step, wigner_rate};
use num_complex::Complex64;

/// Reduced spin state after tracing out momentum.
#[derive(Debug, Clone, Copy)]
pub struct ReducedSpinState {
    pub rho: [[Complex64; 2]; 2],
    /// Bloch vector `b_i = tr(rho sigma_i)`.
    pub bloch: [f64; 3],
    /// Von Neumann entropy in bits.
    pub entropy: f64,
}

/// Traces the spin-momentum state over momentum:
/// `rho_r = sum_k weight_k (R_k chi)(R_k chi)^dagger`.
pub fn reduce_density(
    samples: &[MomentumSample],
    initial_spin: &[Complex64; 2],
) -> Result<ReducedSpinState> {
    if samples.is_empty() {
        return Err(Error::EmptyPacket);
    }
    let mut rho = [[Complex64::new(0.0, 0.0); 2]; 2];
    for sample in samples {
        let psi = sample.rotor.apply(initial_spin);
        for i in 0..2 {
            for j in 0..2 {
                rho[i][j] += sample.weight * psi[i] * psi[j].conj();
            }
        }
    }
    let bloch = bloch_vector(&rho);
    let len = bloch_length(&bloch)?;
    Ok(ReducedSpinState {
        rho,
        bloch,
        entropy: binary_entropy_bits(0.5 * (1.0 + len)),
    })
}

fn bloch_vector(rho: &[[Complex64; 2]; 2]) -> [f64; 3] {
    [
        2.0 * rho[0][1].re,
        -2.0 * rho[0][1].im,
        rho[0][0].re - rho[1][1].re,
    ]
}

fn bloch_length(bloch: &[f64; 3]) -> Result<f64> {
    let len = (bloch[0] * bloch[0] + bloch[1] * bloch[1] + bloch[2] * bloch[2]).sqrt();
    if len > 1.0 + 1e-12 {
        return Err(Error::InvalidState(format!(
            "Bloch length {len} exceeds 1: eigenvalues leave [0, 1]"
        )));
    }
    Ok(len.min(1.0))
}

/// Binary entropy `H2(p) = -p log2 p - (1-p) log2 (1-p)` with `0 log 0 = 0`.
pub fn binary_entropy_bits(p: f64) -> f64 {
    let mut s = 0.0;
    for q in [p, 1.0 - p] {
        if q > 0.0 {
            s -= q * q.log2();
        }
    }
    s
}

/// Von Neumann entropy (bits) of a 2x2 density matrix, validated for
/// Hermiticity, unit trace, and eigenvalues in `[0, 1]`, then evaluated in
/// closed form from the Bloch length.
pub fn entropy_bits(rho: &[[Complex64; 2]; 2]) -> Result<f64> {
    let herm = (rho[0][1] - rho[1][0].conj()).norm();
    if herm > 1e-12 || rho[0][0].im.abs() > 1e-12 || rho[1][1].im.abs() > 1e-12 {
        return Err(Error::InvalidState(format!(
            "density matrix is not Hermitian (defect {herm:.3e})"
        )));
    }
    let trace = rho[0][0].re + rho[1][1].re;
    if (trace - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidState(format!(
            "density matrix trace {trace} differs from 1"
        )));
    }
    let len = bloch_length(&bloch_vector(rho))?;
    Ok(binary_entropy_bits(0.5 * (1.0 + len)))
}

/// Dimensionless inputs of the decoherence-time law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceParams {
    /// Orbit radius in units of `r_s` (of the orbit radius itself when flat).
    pub r: f64,
    pub v_over_c: f64,
    pub w_over_mc: f64,
}

/// The characteristic decoherence time, or the distinguished value for
/// configurations that never decohere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecoherenceTime {
    /// Proper time in internal geometric units.
    Finite(f64),
    NoDecoherence,
}

impl DecoherenceTime {
    pub fn finite(&self) -> Option<f64> {
        match self {
            Self::Finite(t) => Some(*t),
            Self::NoDecoherence => None,
        }
    }

    /// `1/tau_d`, with 0 for the no-decoherence case.
    pub fn inverse(&self) -> f64 {
        match self {
            Self::Finite(t) => 1.0 / t,
            Self::NoDecoherence => 0.0,
        }
    }
}

/// Closed-form decoherence time:
/// `1/tau_d = (w (cosh xi - 1) / (m r)) |1 - r_s/(2 r f)| sqrt(f)`.
///
/// The middle factor is evaluated as `|2r - 3 r_s| / (2 (r - r_s))`, which is
/// exact at the cancellation radius `r = 3 r_s / 2`.
pub fn decoherence_time(
    geometry: &Schwarzschild,
    params: &DecoherenceParams,
) -> Result<DecoherenceTime> {
    let r = params.r;
    let r_s = geometry.radius();
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::InvalidInput(format!("radius {r} must be positive")));
    }
    if r_s > 0.0 && r <= r_s {
        return Err(Error::Horizon { r, r_s });
    }
    if !(0.0..1.0).contains(&params.v_over_c) {
        return Err(Error::InvalidInput(format!(
            "v/c = {} outside [0, 1)",
            params.v_over_c
        )));
    }
    if !params.w_over_mc.is_finite() || params.w_over_mc < 0.0 {
        return Err(Error::InvalidInput(format!(
            "w/mc = {} must be >= 0",
            params.w_over_mc
        )));
    }
    let xi = params.v_over_c.atanh();
    let cosh_minus_one = 2.0 * (0.5 * xi).sinh().powi(2);
    let factor = (2.0 * r - 3.0 * r_s).abs() / (2.0 * (r - r_s));
    let sqrt_f = ((r - r_s) / r).sqrt();
    let rate = params.w_over_mc * cosh_minus_one / r * factor * sqrt_f;
    if rate == 0.0 {
        Ok(DecoherenceTime::NoDecoherence)
    } else {
        Ok(DecoherenceTime::Finite(1.0 / rate))
    }
}

/// First-principles dephasing rate: the packet width times the sensitivity of
/// the Wigner rotation rate to the momentum, `w |d omega / d p^3|`, by
/// central difference at the orbit centroid. Independent check of
/// [`decoherence_time`].
pub fn dephasing_rate_oracle(
    geometry: &Schwarzschild,
    orbit: &CircularOrbit,
    mass: f64,
    width: f64,
) -> Result<f64> {
    let (point, u) = orbit.state(geometry, 0.0)?;
    let lam = lambda_generator(geometry, &point, &u, mass)?;
    let q3 = local_vectors(geometry, &point, &u, mass)?.q[3];
    let signed_rate = |p3: f64| -> Result<f64> {
        let p = [(mass * mass + p3 * p3).sqrt(), 0.0, 0.0, p3];
        Ok(wigner_rate(&lam, &p, mass)?.omega[1])
    };
    let eps = 1e-5 * mass;
    let derivative = (signed_rate(q3 + eps)? - signed_rate(q3 - eps)?) / (2.0 * eps);
    Ok(width * derivative.abs())
}

/// One recorded output row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationRow {
    pub tau_over_tau_s: f64,
    pub entropy_bits: f64,
    pub bloch: [f64; 3],
    /// Accumulated rotation angle of the node nearest the centroid momentum.
    pub centroid_angle_rad: f64,
}

/// Integrator health over a run.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Diagnostics {
    /// Max `|(p.p + m^2)/m^2|` after projection, over all samples and steps.
    pub max_shell_violation: f64,
    /// Max rotor unitarity defect after renormalization.
    pub max_rotor_drift: f64,
    pub steps: usize,
}

#[derive(Debug, Clone)]
pub struct SimulationResult {
    pub rows: Vec<SimulationRow>,
    pub diagnostics: Diagnostics,
    /// The time unit `tau_s` used for the `tau_over_tau_s` column, in
    /// internal units.
    pub tau_unit: f64,
    pub dtau: f64,
    pub tau_max: f64,
}

/// Runs the simulation loop: per step, evaluate the generator at the centroid
/// trajectory, advance every sample's transported momentum and rotor by RK4,
/// and record the reduced spin state every `output_stride` steps.
///
/// `tau_max` and `dtau` are in internal geometric units. Proper times in the
/// output are normalized by `tau_s = m r_s / w` (by `m r / w` in flat
/// spacetime; by 1 for a momentum eigenstate, where no width scale exists).
pub fn run_simulation(
    geometry: &Schwarzschild,
    line: &dyn WorldLine,
    packet: &PacketSpec,
    mass: f64,
    tau_max: f64,
    dtau: f64,
    output_stride: usize,
) -> Result<SimulationResult> {
    if !(dtau.is_finite() && dtau > 0.0) || !(tau_max.is_finite() && tau_max > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tau_max = {tau_max} and dtau = {dtau} must be positive"
        )));
    }
    if output_stride == 0 {
        return Err(Error::InvalidInput("output_stride must be >= 1".into()));
    }
    let n_steps = (tau_max / dtau).round() as usize;
    if n_steps == 0 {
        return Err(Error::InvalidInput("tau_max shorter than one step".into()));
    }

    let mut samples = packet.discretize(mass)?;
    let (start_point, _) = line.state(geometry, 0.0)?;
    let tau_unit = if packet.width > 0.0 {
        let r_ref = if geometry.is_flat() {
            start_point.r
        } else {
            geometry.radius()
        };
        mass * r_ref / packet.width
    } else {
        1.0
    };

    let centroid_index = samples
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            let da = (a.p_init[3] - packet.centroid_momentum).abs();
            let db = (b.p_init[3] - packet.centroid_momentum).abs();
            da.total_cmp(&db)
        })
        .map(|(i, _)| i)
        .unwrap_or(0);

    let mut diagnostics = Diagnostics {
        steps: n_steps,
        ..Default::default()
    };
    let mut centroid_angle = 0.0;
    let mut rows = Vec::with_capacity(n_steps / output_stride + 2);

    let record = |rows: &mut Vec<SimulationRow>,
                  samples: &[MomentumSample],
                  tau: f64,
                  centroid_angle: f64|
     -> Result<()> {
        let state = reduce_density(samples, &packet.initial_spin)?;
        rows.push(SimulationRow {
            tau_over_tau_s: tau / tau_unit,
            entropy_bits: state.entropy,
            bloch: state.bloch,
            centroid_angle_rad: centroid_angle,
        });
        Ok(())
    };
    record(&mut rows, &samples, 0.0, 0.0)?;

    let mut lam_start = generator_along(geometry, line, 0.0, mass)?;
    for step in 0..n_steps {
        let tau0 = step as f64 * dtau;
        let lam_mid = generator_along(geometry, line, tau0 + 0.5 * dtau, mass)?;
        let lam_end = generator_along(geometry, line, tau0 + dtau, mass)?;
        for (i, sample) in samples.iter_mut().enumerate() {
            let out = rk4_sample_step(
                &sample.p,
                &sample.rotor,
                &sample.p_init,
                (&lam_start, &lam_mid, &lam_end),
                mass,
                dtau,
            )
            .map_err(|e| match e {
                Error::StepTooLarge { angle } => Error::StepTooLargeAt { tau: tau0, angle },
                other => other,
            })?;
            sample.p = out.p;
            sample.rotor = out.rotor;
            diagnostics.max_shell_violation =
                diagnostics.max_shell_violation.max(out.shell_violation);
            diagnostics.max_rotor_drift = diagnostics.max_rotor_drift.max(out.rotor_drift);
            if i == centroid_index {
                centroid_angle += out.angle_increment;
            }
        }
        lam_start = lam_end;
        let done = step + 1;
        if done % output_stride == 0 || done == n_steps {
            record(&mut rows, &samples, done as f64 * dtau, centroid_angle)?;
        }
    }

    Ok(SimulationResult {
        rows,
        diagnostics,
        tau_unit,
        dtau,
        tau_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::RadialLine;
    use crate::wavepacket::spin_up;
    use crate::wigner::SpinRotor;
    use approx::assert_abs_diff_eq;

    const M: f64 = 1.0;

    fn sample_with_rotor(weight: f64, rotor: SpinRotor) -> MomentumSample {
        MomentumSample {
            p: [1.0, 0.0, 0.0, 0.0],
            p_init: [1.0, 0.0, 0.0, 0.0],
            weight,
            rotor,
        }
    }

    #[test]
    fn identity_rotors_leave_spin_up_pure() {
        let samples = vec![
            sample_with_rotor(0.5, SpinRotor::IDENTITY),
            sample_with_rotor(0.5, SpinRotor::IDENTITY),
        ];
        let state = reduce_density(&samples, &spin_up()).unwrap();
        assert_abs_diff_eq!(state.rho[0][0].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(state.rho[1][1].re, 0.0, epsilon = 1e-15);
        assert_eq!(state.bloch[2], 1.0);
        assert_eq!(state.entropy, 0.0);
    }

    #[test]
    fn opposite_quarter_turns_mix_completely() {
        // Rotations by +/- pi/2 about the 2-axis map up to Bloch (+/-1, 0, 0);
        // the equal-weight average is maximally mixed.
        let plus = SpinRotor::from_axis_angle([0.0, 1.0, 0.0], std::f64::consts::FRAC_PI_2);
        let minus = SpinRotor::from_axis_angle([0.0, 1.0, 0.0], -std::f64::consts::FRAC_PI_2);
        let one = reduce_density(&[sample_with_rotor(1.0, plus)], &spin_up()).unwrap();
        assert_abs_diff_eq!(one.bloch[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(one.bloch[2], 0.0, epsilon = 1e-15);
        let samples = vec![sample_with_rotor(0.5, plus), sample_with_rotor(0.5, minus)];
        let state = reduce_density(&samples, &spin_up()).unwrap();
        for b in state.bloch {
            assert_abs_diff_eq!(b, 0.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(state.entropy, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn any_single_sample_stays_pure() {
        let rotor = SpinRotor::from_axis_angle([0.6, 0.0, 0.8], 1.234);
        let state = reduce_density(&[sample_with_rotor(1.0, rotor)], &spin_up()).unwrap();
        assert!(state.entropy < 1e-12);
        let len = (state.bloch.iter().map(|b| b * b).sum::<f64>()).sqrt();
        assert_abs_diff_eq!(len, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn empty_packet_is_an_error() {
        assert!(matches!(
            reduce_density(&[], &spin_up()),
            Err(Error::EmptyPacket)
        ));
    }

    #[test]
    fn entropy_reference_values() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let diag = |a: f64, b: f64| [[c(a), c(0.0)], [c(0.0), c(b)]];
        assert_eq!(entropy_bits(&diag(1.0, 0.0)).unwrap(), 0.0);
        assert_abs_diff_eq!(entropy_bits(&diag(0.5, 0.5)).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            entropy_bits(&diag(0.75, 0.25)).unwrap(),
            0.8112781244591328,
            epsilon = 1e-14
        );
    }

    #[test]
    fn entropy_rejects_invalid_states() {
        let c = Complex64::new;
        let non_hermitian = [[c(0.5, 0.0), c(0.1, 0.0)], [c(0.3, 0.0), c(0.5, 0.0)]];
        assert!(matches!(
            entropy_bits(&non_hermitian),
            Err(Error::InvalidState(_))
        ));
        let bad_trace = [[c(0.9, 0.0), c(0.0, 0.0)], [c(0.3, 0.0), c(0.0, 0.0)]];
        assert!(entropy_bits(&bad_trace).is_err());
        let bloch_too_long = [[c(1.1, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-0.1, 0.0)]];
        assert!(entropy_bits(&bloch_too_long).is_err());
    }

    #[test]
    fn decoherence_time_special_cases() {
        let geom = Schwarzschild::unit();
        let td = |r: f64, v: f64| {
            decoherence_time(
                &geom,
                &DecoherenceParams {
                    r,
                    v_over_c: v,
                    w_over_mc: 0.1,
                },
            )
            .unwrap()
        };
        // Cancellation radius: exactly no decoherence.
        assert_eq!(td(1.5, 0.8), DecoherenceTime::NoDecoherence);
        // Static packet.
        assert_eq!(td(3.0, 0.0), DecoherenceTime::NoDecoherence);
        // Rate fades at spatial infinity.
        assert!(td(1e9, 0.8).inverse() < 1e-8);
        // Inside the horizon is an error.
        assert!(decoherence_time(
            &geom,
            &DecoherenceParams {
                r: 0.9,
                v_over_c: 0.5,
                w_over_mc: 0.1
            }
        )
        .is_err());
    }

    #[test]
    fn decoherence_time_reference_value() {
        // r_s/r = 0.9, v/c = 0.8, w/mc = 0.1.
        let geom = Schwarzschild::unit();
        let td = decoherence_time(
            &geom,
            &DecoherenceParams {
                r: 1.0 / 0.9,
                v_over_c: 0.8,
                w_over_mc: 0.1,
            },
        )
        .unwrap();
        assert_abs_diff_eq!(td.finite().unwrap(), 15.058465048420853, epsilon = 1e-9);
    }

    #[test]
    fn oracle_matches_the_closed_form_on_a_grid() {
        let geom = Schwarzschild::unit();
        for rs_over_r in [0.3, 0.5, 0.9] {
            for v in [0.3, 0.8] {
                let r = 1.0 / rs_over_r;
                let orbit = CircularOrbit::from_velocity(&geom, r, v, 1.0).unwrap();
                let oracle = dephasing_rate_oracle(&geom, &orbit, M, 0.1).unwrap();
                let closed = decoherence_time(
                    &geom,
                    &DecoherenceParams {
                        r,
                        v_over_c: v,
                        w_over_mc: 0.1,
                    },
                )
                .unwrap()
                .inverse();
                assert!(
                    (oracle - closed).abs() <= 1e-6 * closed,
                    "oracle {oracle:e} vs closed {closed:e} at rs/r = {rs_over_r}, v = {v}"
                );
            }
        }
    }

    #[test]
    fn oracle_vanishes_at_the_photon_sphere() {
        let geom = Schwarzschild::unit();
        let orbit = CircularOrbit::from_velocity(&geom, 1.5, 0.8, 1.0).unwrap();
        assert!(dephasing_rate_oracle(&geom, &orbit, M, 0.1).unwrap() < 1e-13);
    }

    #[test]
    fn oracle_reduces_to_pure_boost_dephasing_in_flat_spacetime() {
        let geom = Schwarzschild::flat();
        let (r, v, w) = (1.0, 0.8, 0.1);
        let orbit = CircularOrbit::from_velocity(&geom, r, v, 1.0).unwrap();
        let oracle = dephasing_rate_oracle(&geom, &orbit, M, w).unwrap();
        let expected = w / (M * r) * (v.atanh().cosh() - 1.0);
        assert_abs_diff_eq!(oracle, expected, epsilon = 1e-9);
    }

    fn fig2_setup(geom: &Schwarzschild, nodes: usize) -> (CircularOrbit, PacketSpec) {
        let orbit = CircularOrbit::from_velocity(geom, 1.0 / 0.9, 0.8, 1.0).unwrap();
        let q3 = 0.8f64.atanh().sinh();
        let packet = PacketSpec::new(q3, 0.1, nodes).unwrap();
        (orbit, packet)
    }

    #[test]
    fn simulation_reproduces_gaussian_dephasing() {
        let geom = Schwarzschild::unit();
        let (orbit, packet) = fig2_setup(&geom, 64);
        let tau_s = 10.0;
        let result =
            run_simulation(&geom, &orbit, &packet, M, 5.0 * tau_s, tau_s / 500.0, 5).unwrap();
        assert!(result.rows[0].entropy_bits < 1e-12);
        assert_abs_diff_eq!(result.tau_unit, tau_s, epsilon = 1e-12);
        // Strictly increasing time grid; entropy monotone within integrator
        // tolerance and bounded by [0, 1].
        for pair in result.rows.windows(2) {
            assert!(pair[1].tau_over_tau_s > pair[0].tau_over_tau_s);
            assert!(pair[1].entropy_bits >= pair[0].entropy_bits - 1e-9);
        }
        for row in &result.rows {
            assert!((0.0..=1.0 + 1e-12).contains(&row.entropy_bits));
        }
        // Maximally mixed at late times.
        assert!(result.rows.last().unwrap().entropy_bits > 0.99);
        // Short-time Bloch decay law within 5 percent.
        let tau_d_over_tau_s = 1.5058465048420853;
        for row in &result.rows {
            if row.tau_over_tau_s <= tau_d_over_tau_s && row.tau_over_tau_s > 0.0 {
                let b = (row.bloch.iter().map(|x| x * x).sum::<f64>()).sqrt();
                let law = (-(row.tau_over_tau_s / tau_d_over_tau_s).powi(2) / 4.0).exp();
                assert!(
                    (b - law).abs() <= 0.05 * law,
                    "bloch {b} vs law {law} at tau = {}",
                    row.tau_over_tau_s
                );
            }
        }
        // Centroid angle tracks the closed-form rotation rate.
        let omega_c = {
            let r: f64 = 1.0 / 0.9;
            let f = geom.f(r);
            let k = f.sqrt() / r * (2.0 * r - 3.0) / (2.0 * (r - 1.0));
            let xi = 0.8f64.atanh();
            (k * xi.sinh() * xi.cosh()).abs()
        };
        // The recorded node sits one quadrature spacing off the exact
        // centroid, so allow a matching angle offset.
        let last = result.rows.last().unwrap();
        assert_abs_diff_eq!(
            last.centroid_angle_rad,
            omega_c * 5.0 * tau_s,
            epsilon = 1.0
        );
        // Sample momenta were transported but stayed on shell.
        assert!(result.diagnostics.max_shell_violation < 1e-14);
        assert!(result.diagnostics.max_rotor_drift < 1e-10);
    }

    #[test]
    fn doubling_the_node_count_leaves_the_entropy_unchanged() {
        let geom = Schwarzschild::unit();
        let run = |nodes: usize| {
            let (orbit, packet) = fig2_setup(&geom, nodes);
            run_simulation(&geom, &orbit, &packet, M, 50.0, 0.02, 25).unwrap()
        };
        let coarse = run(64);
        let fine = run(128);
        for (a, b) in coarse.rows.iter().zip(&fine.rows) {
            assert!(
                (a.entropy_bits - b.entropy_bits).abs() < 1e-8,
                "S changed by {:e} at tau = {}",
                (a.entropy_bits - b.entropy_bits).abs(),
                a.tau_over_tau_s
            );
        }
    }

    #[test]
    fn photon_sphere_orbit_never_decoheres() {
        let geom = Schwarzschild::unit();
        let orbit = CircularOrbit::from_velocity(&geom, 1.5, 0.8, 1.0).unwrap();
        let q3 = 0.8f64.atanh().sinh();
        let packet = PacketSpec::new(q3, 0.1, 64).unwrap();
        let result = run_simulation(&geom, &orbit, &packet, M, 50.0, 0.05, 100).unwrap();
        for row in &result.rows {
            assert!(
                row.entropy_bits < 1e-10,
                "S = {:e} at tau = {}",
                row.entropy_bits,
                row.tau_over_tau_s
            );
        }
    }

    #[test]
    fn momentum_eigenstate_never_decoheres() {
        let geom = Schwarzschild::unit();
        let orbit = CircularOrbit::from_velocity(&geom, 1.0 / 0.9, 0.8, 1.0).unwrap();
        let packet = PacketSpec::momentum_eigenstate(0.8f64.atanh().sinh());
        let result = run_simulation(&geom, &orbit, &packet, M, 20.0, 0.01, 50).unwrap();
        assert_eq!(result.tau_unit, 1.0);
        for row in &result.rows {
            assert!(row.entropy_bits < 1e-12);
        }
    }

    #[test]
    fn flat_inertial_control_stays_exactly_pure() {
        let geom = Schwarzschild::flat();
        let line = RadialLine {
            r0: 1.0,
            rapidity: 0.8f64.atanh(),
        };
        let packet = PacketSpec::new(0.8f64.atanh().sinh(), 0.1, 32).unwrap();
        let result = run_simulation(&geom, &line, &packet, M, 30.0, 0.05, 60).unwrap();
        for row in &result.rows {
            assert!(row.entropy_bits < 1e-12);
            let len = (row.bloch.iter().map(|b| b * b).sum::<f64>()).sqrt();
            assert!((len - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn entropy_is_zero_iff_bloch_is_unit() {
        let geom = Schwarzschild::unit();
        let (orbit, packet) = fig2_setup(&geom, 32);
        let result = run_simulation(&geom, &orbit, &packet, M, 30.0, 0.02, 50).unwrap();
        for row in &result.rows {
            let len = (row.bloch.iter().map(|b| b * b).sum::<f64>()).sqrt();
            let pure = row.entropy_bits < 1e-9;
            let unit = (1.0 - len) < 1e-9;
            assert_eq!(pure, unit, "S = {}, |b| = {len}", row.entropy_bits);
        }
    }

    #[test]
    fn direction_reversal_does_not_change_the_entropy_series() {
        let geom = Schwarzschild::unit();
        let q3 = 0.8f64.atanh().sinh();
        // Odd node count puts one node exactly on the centroid, so the
        // recorded angle refers to the same mode for both senses.
        let run = |dir: f64| {
            let orbit = CircularOrbit::from_velocity(&geom, 2.0, 0.8, dir).unwrap();
            let packet = PacketSpec::new(dir * q3, 0.1, 49).unwrap();
            run_simulation(&geom, &orbit, &packet, M, 20.0, 0.02, 100).unwrap()
        };
        let plus = run(1.0);
        let minus = run(-1.0);
        for (a, b) in plus.rows.iter().zip(&minus.rows) {
            assert_abs_diff_eq!(a.entropy_bits, b.entropy_bits, epsilon = 1e-11);
            assert_abs_diff_eq!(a.centroid_angle_rad, b.centroid_angle_rad, epsilon = 1e-10);
        }
    }

    #[test]
    fn oversized_steps_are_rejected_with_the_failing_time() {
        let geom = Schwarzschild::unit();
        let (orbit, packet) = fig2_setup(&geom, 16);
        let err = run_simulation(&geom, &orbit, &packet, M, 10.0, 0.5, 1).unwrap_err();
        assert!(matches!(err, Error::StepTooLargeAt { .. }));
    }

    #[test]
    fn invalid_run_parameters_are_rejected() {
        let geom = Schwarzschild::unit();
        let (orbit, packet) = fig2_setup(&geom, 16);
        assert!(run_simulation(&geom, &orbit, &packet, M, -1.0, 0.1, 1).is_err());
        assert!(run_simulation(&geom, &orbit, &packet, M, 1.0, 0.0, 1).is_err());
        assert!(run_simulation(&geom, &orbit, &packet, M, 1.0, 0.1, 0).is_err());
    }
}
