//! Momentum-dependent Wigner rotations and their accumulation as an SU(2)
//! rotor, plus the transport of momentum labels under the frame generator.
//!
//! An infinitesimal frame change `Lambda = 1 + lambda dtau` rotates the spin
//! of a mode with local momentum `p` by the spatial generator
//!
//! ```text
//! theta^i_k = lambda^i_k + (lambda^i_0 p_k - lambda_{k0} p^i) / (p^0 + m c)
//! ```
//!
//! and carries the momentum label to `Lambda p`. Rotations compose on the
//! spin-1/2 state as `D = exp(-i theta n.sigma / 2)`, which this module
//! represents as a unit quaternion.

use crate::error::{Error, Result};
use crate::kinematics::LorentzGenerator;
use num_complex::Complex64;

/// Largest rotation angle accepted in a single step.
pub const MAX_STEP_ANGLE: f64 = 0.1;

/// Relative mass-shell tolerance on input momenta.
pub const SHELL_TOLERANCE: f64 = 1e-9;

/// On-shell energy for spatial momentum `(p1, p2, p3)`.
pub fn on_shell_energy(p: &[f64; 4], mass: f64) -> f64 {
    (mass * mass + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]).sqrt()
}

/// Checks `p^0 = sqrt(|p|^2 + m^2)` to within [`SHELL_TOLERANCE`].
pub fn check_on_shell(p: &[f64; 4], mass: f64) -> Result<()> {
    let e = on_shell_energy(p, mass);
    let violation = (p[0] - e).abs() / e;
    if violation > SHELL_TOLERANCE {
        return Err(Error::OffShell { violation });
    }
    Ok(())
}

/// One infinitesimal Wigner rotation: the antisymmetric spatial generator
/// and its axis/rate decomposition.
#[derive(Debug, Clone, Copy)]
pub struct WignerStep {
    /// `theta^i_k` such that `W^i_k = delta^i_k + theta^i_k dtau`.
    pub generator: [[f64; 3]; 3],
    /// Angular velocity vector: rotation by `|omega| dtau` about
    /// `omega / |omega|`.
    pub omega: [f64; 3],
}

impl WignerStep {
    /// Rotation rate in radians per unit proper time.
    pub fn rate(&self) -> f64 {
        let [x, y, z] = self.omega;
        (x * x + y * y + z * z).sqrt()
    }

    /// Unit rotation axis, or `None` for zero rotation.
    pub fn axis(&self) -> Option<[f64; 3]> {
        let rate = self.rate();
        if rate == 0.0 {
            None
        } else {
            Some([
                self.omega[0] / rate,
                self.omega[1] / rate,
                self.omega[2] / rate,
            ])
        }
    }

    pub fn antisymmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for k in 0..3 {
                worst = worst.max((self.generator[i][k] + self.generator[k][i]).abs());
            }
        }
        worst
    }
}

/// Wigner rotation rate of the mode with local four-momentum `p` under the
/// generator `lambda`. Spatial indices are raised and lowered with the
/// identity, so `p_k = p^k`.
pub fn wigner_rate(lambda: &LorentzGenerator, p: &[f64; 4], mass: f64) -> Result<WignerStep> {
    check_on_shell(p, mass)?;
    let l = &lambda.components;
    let denom = p[0] + mass;
    let mut generator = [[0.0; 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            // lambda_{k0} = eta_kk lambda^k_0 = lambda^k_0 for spatial k.
            generator[i][k] =
                l[i + 1][k + 1] + (l[i + 1][0] * p[k + 1] - l[k + 1][0] * p[i + 1]) / denom;
        }
    }
    // omega^l = -(1/2) eps_{lik} theta_{ik}
    let omega = [generator[2][1], generator[0][2], generator[1][0]];
    Ok(WignerStep { generator, omega })
}

/// Transports a momentum label one step, `p' = p + lambda p dtau`, then
/// re-projects `p'^0` onto the mass shell exactly.
pub fn transport_momentum(
    lambda: &LorentzGenerator,
    p: &[f64; 4],
    dtau: f64,
    mass: f64,
) -> Result<[f64; 4]> {
    check_on_shell(p, mass)?;
    let dp = lambda.apply(p);
    let mut out = [0.0; 4];
    for a in 0..4 {
        out[a] = p[a] + dp[a] * dtau;
    }
    out[0] = on_shell_energy(&out, mass);
    Ok(out)
}

/// Accumulated spin-1/2 rotation, stored as a unit quaternion
/// `R = w - i (x sigma_1 + y sigma_2 + z sigma_3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinRotor {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpinRotor {
    pub const IDENTITY: Self = Self {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    /// `exp(-i angle n.sigma / 2)`: rotation by `angle` about the unit axis.
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Self {
        let (s, c) = (0.5 * angle).sin_cos();
        Self {
            w: c,
            x: s * axis[0],
            y: s * axis[1],
            z: s * axis[2],
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// Determinant of the 2x2 matrix representation; 1 for a unit rotor.
    pub fn det(&self) -> f64 {
        self.norm_sqr()
    }

    pub fn renormalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        Self {
            w: self.w / n,
            x: self.x / n,
            y: self.y / n,
            z: self.z / n,
        }
    }

    /// The 2x2 unitary `[[w - i z, -y - i x], [y - i x, w + i z]]`.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [
            [
                Complex64::new(self.w, -self.z),
                Complex64::new(-self.y, -self.x),
            ],
            [
                Complex64::new(self.y, -self.x),
                Complex64::new(self.w, self.z),
            ],
        ]
    }

    /// Applies the rotor to a 2-spinor.
    pub fn apply(&self, spinor: &[Complex64; 2]) -> [Complex64; 2] {
        let m = self.matrix();
        [
            m[0][0] * spinor[0] + m[0][1] * spinor[1],
            m[1][0] * spinor[0] + m[1][1] * spinor[1],
        ]
    }

    /// Max deviation of `R^dagger R` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        (self.norm_sqr() - 1.0).abs()
    }
}

impl std::ops::Mul for SpinRotor {
    type Output = SpinRotor;
    /// Hamilton product; `a * b` applies `b` first, then `a`.
    fn mul(self, rhs: SpinRotor) -> SpinRotor {
        SpinRotor {
            w: self.w * rhs.w - self.x * rhs.x - self.y * rhs.y - self.z * rhs.z,
            x: self.w * rhs.x + self.x * rhs.w + self.y * rhs.z - self.z * rhs.y,
            y: self.w * rhs.y - self.x * rhs.z + self.y * rhs.w + self.z * rhs.x,
            z: self.w * rhs.z + self.x * rhs.y - self.y * rhs.x + self.z * rhs.w,
        }
    }
}

/// Advances a rotor by one exact axis-angle exponential,
/// `R' = exp(-i (omega dtau / 2) n.sigma) R`, then renormalizes.
pub fn rotor_step(rotor: &SpinRotor, step: &WignerStep, dtau: f64) -> Result<SpinRotor> {
    let angle = step.rate() * dtau;
    if angle.abs() >= MAX_STEP_ANGLE {
        return Err(Error::StepTooLarge { angle: angle.abs() });
    }
    let next = match step.axis() {
        Some(axis) => SpinRotor::from_axis_angle(axis, angle) * *rotor,
        None => *rotor,
    };
    Ok(next.renormalized())
}

/// Result of one RK4 step of a sample's transported momentum and rotor.
#[derive(Debug, Clone, Copy)]
pub struct SampleStep {
    pub p: [f64; 4],
    pub rotor: SpinRotor,
    /// `|norm^2 - 1|` of the stored rotor after renormalization.
    pub rotor_drift: f64,
    /// `|(p.p + m^2)/m^2|` after the mass-shell projection.
    pub shell_violation: f64,
    /// RK4-weighted `integral |omega| dtau` over this step.
    pub angle_increment: f64,
}

// dq/dtau = (1/2) (0, omega) x q as a quaternion product.
fn rotor_derivative(q: &SpinRotor, omega: &[f64; 3]) -> SpinRotor {
    SpinRotor {
        w: -0.5 * (omega[0] * q.x + omega[1] * q.y + omega[2] * q.z),
        x: 0.5 * (omega[0] * q.w + omega[1] * q.z - omega[2] * q.y),
        y: 0.5 * (-omega[0] * q.z + omega[1] * q.w + omega[2] * q.x),
        z: 0.5 * (omega[0] * q.y - omega[1] * q.x + omega[2] * q.w),
    }
}

fn add_scaled(q: &SpinRotor, k: &SpinRotor, s: f64) -> SpinRotor {
    SpinRotor {
        w: q.w + s * k.w,
        x: q.x + s * k.x,
        y: q.y + s * k.y,
        z: q.z + s * k.z,
    }
}

/// One classical RK4 step of the coupled state `(p, rotor)` of a sample.
///
/// The momentum label `p` is transported with `dp = lambda p`; the rotor
/// integrates the Wigner rate of the sample's `rate_momentum`, the fixed
/// mode label the sample was prepared with. `lambda` holds the generator at
/// the start, midpoint and end of the step. After the step the momentum is
/// re-projected onto the mass shell and the rotor is renormalized.
pub fn rk4_sample_step(
    p: &[f64; 4],
    rotor: &SpinRotor,
    rate_momentum: &[f64; 4],
    lambda: (&LorentzGenerator, &LorentzGenerator, &LorentzGenerator),
    mass: f64,
    dtau: f64,
) -> Result<SampleStep> {
    let (lam_start, lam_mid, lam_end) = lambda;
    let rate_start = wigner_rate(lam_start, rate_momentum, mass)?;
    let rate_mid = wigner_rate(lam_mid, rate_momentum, mass)?;
    let rate_end = wigner_rate(lam_end, rate_momentum, mass)?;

    let max_angle = rate_start.rate().max(rate_mid.rate()).max(rate_end.rate()) * dtau.abs();
    if max_angle >= MAX_STEP_ANGLE {
        return Err(Error::StepTooLarge { angle: max_angle });
    }

    // Momentum transport.
    let mat = |lam: &LorentzGenerator, q: &[f64; 4]| lam.apply(q);
    let k1 = mat(lam_start, p);
    let s1 = std::array::from_fn(|a| p[a] + 0.5 * dtau * k1[a]);
    let k2 = mat(lam_mid, &s1);
    let s2 = std::array::from_fn(|a| p[a] + 0.5 * dtau * k2[a]);
    let k3 = mat(lam_mid, &s2);
    let s3 = std::array::from_fn(|a| p[a] + dtau * k3[a]);
    let k4 = mat(lam_end, &s3);
    let mut p_next = [0.0; 4];
    for a in 0..4 {
        p_next[a] = p[a] + dtau / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
    }
    p_next[0] = on_shell_energy(&p_next, mass);
    let pp = -p_next[0] * p_next[0]
        + p_next[1] * p_next[1]
        + p_next[2] * p_next[2]
        + p_next[3] * p_next[3];
    let shell_violation = ((pp + mass * mass) / (mass * mass)).abs();

    // Rotor.
    let q1 = rotor_derivative(rotor, &rate_start.omega);
    let q2 = rotor_derivative(&add_scaled(rotor, &q1, 0.5 * dtau), &rate_mid.omega);
    let q3 = rotor_derivative(&add_scaled(rotor, &q2, 0.5 * dtau), &rate_mid.omega);
    let q4 = rotor_derivative(&add_scaled(rotor, &q3, dtau), &rate_end.omega);
    let mut next = *rotor;
    next.w += dtau / 6.0 * (q1.w + 2.0 * q2.w + 2.0 * q3.w + q4.w);
    next.x += dtau / 6.0 * (q1.x + 2.0 * q2.x + 2.0 * q3.x + q4.x);
    next.y += dtau / 6.0 * (q1.y + 2.0 * q2.y + 2.0 * q3.y + q4.y);
    next.z += dtau / 6.0 * (q1.z + 2.0 * q2.z + 2.0 * q3.z + q4.z);
    let next = next.renormalized();

    let angle_increment =
        dtau / 6.0 * (rate_start.rate() + 4.0 * rate_mid.rate() + rate_end.rate());

    Ok(SampleStep {
        p: p_next,
        rotor: next,
        rotor_drift: next.unitarity_defect(),
        shell_violation,
        angle_increment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{
        lambda_generator, local_vectors, CircularOrbit, LorentzGenerator, WorldLine,
    };
    use crate::spacetime::Schwarzschild;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const M: f64 = 1.0;

    fn generator_from_lowered(low: [[f64; 4]; 4]) -> LorentzGenerator {
        // lambda^a_b = eta^aa lambda_ab
        let eta = [-1.0, 1.0, 1.0, 1.0];
        let mut up = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                up[a][b] = eta[a] * low[a][b];
            }
        }
        LorentzGenerator {
            components: up,
            chi_part: up,
            boost_part: [[0.0; 4]; 4],
        }
    }

    fn random_antisymmetric(rng: &mut StdRng, scale: f64) -> LorentzGenerator {
        let mut low = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in (a + 1)..4 {
                let v = rng.gen_range(-scale..scale);
                low[a][b] = v;
                low[b][a] = -v;
            }
        }
        generator_from_lowered(low)
    }

    fn on_shell(p3: f64) -> [f64; 4] {
        [(1.0 + p3 * p3).sqrt(), 0.0, 0.0, p3]
    }

    fn fig2_generator(geom: &Schwarzschild) -> (LorentzGenerator, [f64; 4]) {
        let orbit = CircularOrbit::from_velocity(geom, 1.0 / 0.9, 0.8, 1.0).unwrap();
        let (point, u) = orbit.state(geom, 0.0).unwrap();
        let lam = lambda_generator(geom, &point, &u, M).unwrap();
        let q = local_vectors(geom, &point, &u, M).unwrap().q;
        (lam, q)
    }

    #[test]
    fn rest_momentum_sees_the_bare_spatial_generator() {
        let mut rng = StdRng::seed_from_u64(1);
        let lam = random_antisymmetric(&mut rng, 2.0);
        let p = [M, 0.0, 0.0, 0.0];
        let step = wigner_rate(&lam, &p, M).unwrap();
        for i in 0..3 {
            for k in 0..3 {
                assert_eq!(step.generator[i][k], lam.components[i + 1][k + 1]);
            }
        }
    }

    #[test]
    fn zero_generator_rotates_nothing() {
        let lam = generator_from_lowered([[0.0; 4]; 4]);
        for p3 in [-2.0, 0.0, 0.7, 5.0] {
            let step = wigner_rate(&lam, &on_shell(p3), M).unwrap();
            assert_eq!(step.rate(), 0.0);
            assert!(step.axis().is_none());
        }
    }

    #[test]
    fn off_shell_momentum_is_rejected() {
        let mut rng = StdRng::seed_from_u64(2);
        let lam = random_antisymmetric(&mut rng, 1.0);
        let p = [2.0, 0.0, 0.0, 0.5];
        assert!(matches!(
            wigner_rate(&lam, &p, M),
            Err(Error::OffShell { .. })
        ));
    }

    #[test]
    fn centroid_rotation_rate_matches_closed_form() {
        // omega_c = (sqrt(f) sinh cosh / r)(1 - r_s/(2 r f)) about the 2-axis.
        let geom = Schwarzschild::unit();
        let (lam, q) = fig2_generator(&geom);
        let step = wigner_rate(&lam, &q, M).unwrap();
        let r: f64 = 1.0 / 0.9;
        let f = geom.f(r);
        let xi = 0.8f64.atanh();
        let k = f.sqrt() / r * (2.0 * r - 3.0) / (2.0 * (r - 1.0));
        let omega_c = (k * xi.sinh() * xi.cosh()).abs();
        assert_abs_diff_eq!(step.rate(), omega_c, epsilon = 1e-12);
        let axis = step.axis().unwrap();
        assert!(axis[1].abs() > 1.0 - 1e-10);
        assert!(axis[0].abs() < 1e-13);
        assert!(axis[2].abs() < 1e-13);
    }

    #[test]
    fn circular_orbit_rotation_axis_is_the_two_axis_for_every_sample() {
        let geom = Schwarzschild::unit();
        let (lam, q) = fig2_generator(&geom);
        for dp in [-0.3, -0.05, 0.0, 0.02, 0.4] {
            let step = wigner_rate(&lam, &on_shell(q[3] + dp), M).unwrap();
            let axis = step.axis().unwrap();
            assert!(
                (axis[1].abs() - 1.0).abs() < 1e-10,
                "axis {axis:?} at dp = {dp}"
            );
        }
    }

    #[test]
    fn centroid_momentum_is_a_transport_fixed_point() {
        let geom = Schwarzschild::unit();
        let (lam, q) = fig2_generator(&geom);
        let p = transport_momentum(&lam, &q, 0.05, M).unwrap();
        for a in 0..4 {
            assert_abs_diff_eq!(p[a], q[a], epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_generator_transport_is_the_identity() {
        let lam = generator_from_lowered([[0.0; 4]; 4]);
        let p = on_shell(1.3);
        let p2 = transport_momentum(&lam, &p, 0.7, M).unwrap();
        assert_eq!(p, p2);
    }

    #[test]
    fn transport_projects_exactly_onto_the_mass_shell() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..500 {
            let lam = random_antisymmetric(&mut rng, 3.0);
            let p = on_shell(rng.gen_range(-3.0..3.0));
            let p2 = transport_momentum(&lam, &p, rng.gen_range(0.0..0.2), M).unwrap();
            let pp = -p2[0] * p2[0] + p2[1] * p2[1] + p2[2] * p2[2] + p2[3] * p2[3];
            assert!(((pp + 1.0).abs()) < 1e-14);
        }
    }

    #[test]
    fn rotor_identity_and_group_law_on_a_fixed_axis() {
        let axis = [0.0, 1.0, 0.0];
        let a = 0.31;
        let b = 0.52;
        let composed = SpinRotor::from_axis_angle(axis, b) * SpinRotor::from_axis_angle(axis, a);
        let direct = SpinRotor::from_axis_angle(axis, a + b);
        assert_abs_diff_eq!(composed.w, direct.w, epsilon = 1e-15);
        assert_abs_diff_eq!(composed.y, direct.y, epsilon = 1e-15);
        assert_eq!(composed.x, 0.0);
        assert_eq!(composed.z, 0.0);
    }

    #[test]
    fn zero_rate_step_leaves_the_rotor_unchanged() {
        let lam = generator_from_lowered([[0.0; 4]; 4]);
        let step = wigner_rate(&lam, &on_shell(0.4), M).unwrap();
        let r = SpinRotor::from_axis_angle([1.0, 0.0, 0.0], 0.4);
        let r2 = rotor_step(&r, &step, 0.01).unwrap();
        assert_abs_diff_eq!(r2.w, r.w, epsilon = 1e-15);
        assert_abs_diff_eq!(r2.x, r.x, epsilon = 1e-15);
    }

    #[test]
    fn full_turn_gives_minus_identity_but_same_density_matrix() {
        let axis = [0.0, 1.0, 0.0];
        let mut rotor = SpinRotor::IDENTITY;
        let n = 1000;
        let step = WignerStep {
            generator: [[0.0; 3]; 3],
            omega: [0.0, std::f64::consts::TAU / (n as f64) * 100.0, 0.0],
        };
        for _ in 0..n {
            rotor = rotor_step(&rotor, &step, 0.01).unwrap();
        }
        assert_abs_diff_eq!(rotor.w, -1.0, epsilon = 1e-10);
        assert!(rotor.x.abs() < 1e-10 && rotor.y.abs() < 1e-10 && rotor.z.abs() < 1e-10);
        // -identity acts trivially on the density matrix.
        let up = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let psi = rotor.apply(&up);
        assert_abs_diff_eq!((psi[0] + up[0]).norm(), 0.0, epsilon = 1e-10);
        let _ = axis;
    }

    #[test]
    fn step_guard_rejects_large_angles() {
        let step = WignerStep {
            generator: [[0.0; 3]; 3],
            omega: [0.0, 2.0, 0.0],
        };
        assert!(matches!(
            rotor_step(&SpinRotor::IDENTITY, &step, 0.1),
            Err(Error::StepTooLarge { .. })
        ));
    }

    #[test]
    fn rotor_matrix_is_special_unitary() {
        let r = SpinRotor::from_axis_angle([0.6, 0.0, 0.8], 1.1);
        let m = r.matrix();
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        assert_abs_diff_eq!(det.re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(det.im, 0.0, epsilon = 1e-14);
        // Columns orthonormal.
        let c0 = (m[0][0].norm_sqr() + m[1][0].norm_sqr()).sqrt();
        let dot = m[0][0].conj() * m[0][1] + m[1][0].conj() * m[1][1];
        assert_abs_diff_eq!(c0, 1.0, epsilon = 1e-14);
        assert!(dot.norm() < 1e-14);
    }

    #[test]
    fn rk4_and_first_order_composition_agree_over_one_orbital_period() {
        // Constant generator on the circular orbit: both integrators must
        // accumulate the same rotation.
        let geom = Schwarzschild::unit();
        let (lam, q) = fig2_generator(&geom);
        let orbit_period = {
            let r: f64 = 1.0 / 0.9;
            std::f64::consts::TAU * r / 0.8f64.atanh().sinh()
        };
        let steps = 2000;
        let dtau = orbit_period / steps as f64;

        let mut rk4 = SpinRotor::IDENTITY;
        let mut p = q;
        let mut angle = 0.0;
        for _ in 0..steps {
            let out = rk4_sample_step(&p, &rk4, &q, (&lam, &lam, &lam), M, dtau).unwrap();
            p = out.p;
            rk4 = out.rotor;
            angle += out.angle_increment;
        }

        let fine = steps * 100;
        let dt = orbit_period / fine as f64;
        let step = wigner_rate(&lam, &q, M).unwrap();
        let mut first_order = SpinRotor::IDENTITY;
        for _ in 0..fine {
            first_order = rotor_step(&first_order, &step, dt).unwrap();
        }

        assert_abs_diff_eq!(rk4.w, first_order.w, epsilon = 1e-8);
        assert_abs_diff_eq!(rk4.x, first_order.x, epsilon = 1e-8);
        assert_abs_diff_eq!(rk4.y, first_order.y, epsilon = 1e-8);
        assert_abs_diff_eq!(rk4.z, first_order.z, epsilon = 1e-8);
        assert_abs_diff_eq!(angle, step.rate() * orbit_period, epsilon = 1e-9);
    }

    #[test]
    fn rotor_norm_stays_unit_over_a_million_steps() {
        let step = WignerStep {
            generator: [[0.0; 3]; 3],
            omega: [0.3, 0.5, -0.2],
        };
        let mut rotor = SpinRotor::IDENTITY;
        let mut worst: f64 = 0.0;
        for _ in 0..1_000_000 {
            rotor = rotor_step(&rotor, &step, 1e-3).unwrap();
            worst = worst.max(rotor.unitarity_defect());
        }
        assert!(worst < 1e-10, "unitarity drift {worst:e}");
        assert!((rotor.det() - 1.0).abs() < 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn wigner_generator_is_antisymmetric(
            seed in 0u64..1000,
            p1 in -3.0f64..3.0,
            p2 in -3.0f64..3.0,
            p3 in -3.0f64..3.0,
        ) {
            let mut rng = StdRng::seed_from_u64(seed);
            let lam = random_antisymmetric(&mut rng, 5.0);
            let e = (1.0 + p1 * p1 + p2 * p2 + p3 * p3).sqrt();
            let p = [e, p1, p2, p3];
            let step = wigner_rate(&lam, &p, M).unwrap();
            prop_assert!(step.antisymmetry_defect() < 1e-13);
        }

        #[test]
        fn rotor_products_stay_unit(
            ax in -1.0f64..1.0, ay in -1.0f64..1.0, az in -1.0f64..1.0,
            a1 in -3.0f64..3.0, a2 in -3.0f64..3.0,
        ) {
            let n = (ax * ax + ay * ay + az * az).sqrt();
            prop_assume!(n > 1e-3);
            let axis = [ax / n, ay / n, az / n];
            let r = SpinRotor::from_axis_angle(axis, a1)
                * SpinRotor::from_axis_angle([0.0, 0.0, 1.0], a2);
            prop_assert!(r.unitarity_defect() < 1e-13);
        }
    }
}
