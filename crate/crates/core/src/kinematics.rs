//! Trajectories and the Lorentz generator they induce on the local frame.
//!
//! The change of local frame along a world line, plus the boost produced by
//! any external force, combine into a single generator
//! `lambda^a_b = chi^a_b - (a^a q_b - q^a a_b) / (m c^2)` which drives both
//! the momentum transport and the spin rotation of every packet mode.

use crate::error::{Error, Result};
use crate::spacetime::{Schwarzschild, SpacetimePoint, ETA};

/// Coordinate-frame four-velocity `u^mu`, normalized to `u.u = -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourVelocity {
    pub components: [f64; 4],
}

impl FourVelocity {
    pub fn new(components: [f64; 4]) -> Self {
        Self { components }
    }
}

/// A prescribed world line, parameterized by proper time.
///
/// The built-in implementations are [`CircularOrbit`] and [`RadialLine`];
/// anything else can implement the trait directly (a closure-backed
/// parameterization, a tabulated trajectory, ...). Acceleration is obtained
/// by numerically differentiating `u` along `tau` plus the Christoffel
/// terms, so implementors only supply the state.
pub trait WorldLine {
    fn state(&self, geometry: &Schwarzschild, tau: f64) -> Result<(SpacetimePoint, FourVelocity)>;
}

/// Circular orbit in the equatorial plane at constant coordinate speed.
///
/// `tanh(rapidity) = v/c`; `direction` is the sense of revolution (+1/-1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularOrbit {
    pub radius: f64,
    pub rapidity: f64,
    pub direction: f64,
}

impl CircularOrbit {
    pub fn new(
        geometry: &Schwarzschild,
        radius: f64,
        rapidity: f64,
        direction: f64,
    ) -> Result<Self> {
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "orbit radius must be finite and positive, got {radius}"
            )));
        }
        if geometry.radius() > 0.0 && radius <= geometry.radius() {
            return Err(Error::Horizon {
                r: radius,
                r_s: geometry.radius(),
            });
        }
        if !rapidity.is_finite() {
            return Err(Error::InvalidInput("rapidity must be finite".into()));
        }
        if direction != 1.0 && direction != -1.0 {
            return Err(Error::InvalidInput(format!(
                "direction must be +1 or -1, got {direction}"
            )));
        }
        Ok(Self {
            radius,
            rapidity,
            direction,
        })
    }

    /// Construct from the dimensionless speed `v/c` in `[0, 1)`.
    pub fn from_velocity(
        geometry: &Schwarzschild,
        radius: f64,
        v_over_c: f64,
        direction: f64,
    ) -> Result<Self> {
        if !(0.0..1.0).contains(&v_over_c) {
            return Err(Error::InvalidInput(format!(
                "v/c must lie in [0, 1), got {v_over_c}"
            )));
        }
        Self::new(geometry, radius, v_over_c.atanh(), direction)
    }

    pub fn cosh_rapidity(&self) -> f64 {
        self.rapidity.cosh()
    }

    pub fn sinh_rapidity(&self) -> f64 {
        self.rapidity.sinh()
    }
}

impl WorldLine for CircularOrbit {
    /// `u^t = cosh(xi)/sqrt(f)`, `u^phi = +/- sinh(xi)/r`; the point advances
    /// as `t = u^t tau`, `phi = u^phi tau` from `phi(0) = 0` on the equator.
    fn state(&self, geometry: &Schwarzschild, tau: f64) -> Result<(SpacetimePoint, FourVelocity)> {
        let f = geometry.f(self.radius);
        if geometry.radius() > 0.0 && f <= 0.0 {
            return Err(Error::Horizon {
                r: self.radius,
                r_s: geometry.radius(),
            });
        }
        let u_t = self.cosh_rapidity() / f.sqrt();
        let u_phi = self.direction * self.sinh_rapidity() / self.radius;
        let point = SpacetimePoint {
            t: u_t * tau,
            r: self.radius,
            theta: std::f64::consts::FRAC_PI_2,
            phi: u_phi * tau,
        };
        Ok((point, FourVelocity::new([u_t, 0.0, 0.0, u_phi])))
    }
}

/// Inertial straight line through the origin (radial motion) in flat
/// spacetime; the control trajectory with identically vanishing generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialLine {
    pub r0: f64,
    pub rapidity: f64,
}

impl WorldLine for RadialLine {
    fn state(&self, geometry: &Schwarzschild, tau: f64) -> Result<(SpacetimePoint, FourVelocity)> {
        if !geometry.is_flat() {
            return Err(Error::InvalidInput(
                "a radial line with constant four-velocity is inertial only in flat spacetime"
                    .into(),
            ));
        }
        let (sinh, cosh) = (self.rapidity.sinh(), self.rapidity.cosh());
        let r = self.r0 + sinh * tau;
        if r <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "radial line left the chart: r = {r} at tau = {tau}"
            )));
        }
        let point = SpacetimePoint {
            t: cosh * tau,
            r,
            theta: std::f64::consts::FRAC_PI_2,
            phi: 0.0,
        };
        Ok((point, FourVelocity::new([cosh, sinh, 0.0, 0.0])))
    }
}

/// Local-frame momentum `q^a = e^a_mu m u^mu` and acceleration
/// `a^a = e^a_mu u^nu nabla_nu u^mu` of the centroid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalVectors {
    pub q: [f64; 4],
    pub a: [f64; 4],
}

/// The generator `lambda^a_b` of the frame change per unit proper time,
/// with its two contributions kept separately for diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct LorentzGenerator {
    pub components: [[f64; 4]; 4],
    pub chi_part: [[f64; 4]; 4],
    pub boost_part: [[f64; 4]; 4],
}

impl LorentzGenerator {
    /// `lambda^a_b p^b`.
    pub fn apply(&self, p: &[f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for a in 0..4 {
            for b in 0..4 {
                out[a] += self.components[a][b] * p[b];
            }
        }
        out
    }

    /// Lowered components `lambda_ab = eta_ac lambda^c_b`.
    pub fn lowered(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                out[a][b] = ETA[a] * self.components[a][b];
            }
        }
        out
    }

    /// Largest `|lambda_ab + lambda_ba|`; zero for an exact Lorentz generator.
    pub fn antisymmetry_defect(&self) -> f64 {
        let low = self.lowered();
        let mut worst: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                worst = worst.max((low[a][b] + low[b][a]).abs());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.components
            .iter()
            .flatten()
            .fold(0.0f64, |m, &x| m.max(x.abs()))
    }
}

/// Four-acceleration `a^mu = u^nu nabla_nu u^mu` of a stationary velocity
/// field: `u` is taken to have no explicit `t` or `phi` dependence, so only
/// the Christoffel terms survive. Exact for circular orbits and static
/// observers; use [`four_acceleration_along`] for a general world line.
pub fn four_acceleration(
    geometry: &Schwarzschild,
    point: &SpacetimePoint,
    u: &FourVelocity,
) -> Result<[f64; 4]> {
    let gamma = geometry.christoffel(point)?.components;
    let uc = u.components;
    let mut a = [0.0; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            for lam in 0..4 {
                a[mu] += gamma[mu][nu][lam] * uc[nu] * uc[lam];
            }
        }
    }
    Ok(a)
}

/// Four-acceleration along an arbitrary world line: central difference of
/// `u(tau)` plus the Christoffel terms.
pub fn four_acceleration_along(
    geometry: &Schwarzschild,
    line: &dyn WorldLine,
    tau: f64,
) -> Result<[f64; 4]> {
    let (point, u) = line.state(geometry, tau)?;
    let h = 1e-6 * tau.abs().max(1.0);
    let (_, up) = line.state(geometry, tau + h)?;
    let (_, um) = line.state(geometry, tau - h)?;
    let gamma = geometry.christoffel(&point)?.components;
    let uc = u.components;
    let mut a = [0.0; 4];
    for mu in 0..4 {
        a[mu] = (up.components[mu] - um.components[mu]) / (2.0 * h);
        for nu in 0..4 {
            for lam in 0..4 {
                a[mu] += gamma[mu][nu][lam] * uc[nu] * uc[lam];
            }
        }
    }
    Ok(a)
}

/// Momentum and acceleration of the centroid in the local static frame.
pub fn local_vectors(
    geometry: &Schwarzschild,
    point: &SpacetimePoint,
    u: &FourVelocity,
    mass: f64,
) -> Result<LocalVectors> {
    let tetrad = geometry.static_tetrad(point)?;
    let accel = four_acceleration(geometry, point, u)?;
    let mut mu_u = u.components;
    for c in &mut mu_u {
        *c *= mass;
    }
    Ok(LocalVectors {
        q: tetrad.to_local(&mu_u),
        a: tetrad.to_local(&accel),
    })
}

/// Frame-change generator `chi^a_b = u^mu e_b^nu (nabla_mu e^a)_nu`.
pub fn chi_generator(
    geometry: &Schwarzschild,
    point: &SpacetimePoint,
    u: &FourVelocity,
) -> Result<[[f64; 4]; 4]> {
    let tetrad = geometry.static_tetrad(point)?;
    let d = geometry.coframe_covariant_derivative(point)?;
    let mut chi = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let mut s = 0.0;
            for mu in 0..4 {
                if u.components[mu] == 0.0 {
                    continue;
                }
                for nu in 0..4 {
                    s += u.components[mu] * d[a][mu][nu] * tetrad.frame[b][nu];
                }
            }
            chi[a][b] = s;
        }
    }
    Ok(chi)
}

fn assemble_generator(
    geometry: &Schwarzschild,
    point: &SpacetimePoint,
    u: &FourVelocity,
    accel_coordinate: &[f64; 4],
    mass: f64,
) -> Result<LorentzGenerator> {
    let chi = chi_generator(geometry, point, u)?;
    let tetrad = geometry.static_tetrad(point)?;
    let mut mu_u = u.components;
    for c in &mut mu_u {
        *c *= mass;
    }
    let q = tetrad.to_local(&mu_u);
    let a = tetrad.to_local(accel_coordinate);

    // boost^a_b = (a^a q_b - q^a a_b) / (m c^2)
    let mut boost = [[0.0; 4]; 4];
    for i in 0..4 {
        for b in 0..4 {
            boost[i][b] = (a[i] * ETA[b] * q[b] - q[i] * ETA[b] * a[b]) / mass;
        }
    }

    let mut components = [[0.0; 4]; 4];
    for i in 0..4 {
        for b in 0..4 {
            components[i][b] = chi[i][b] - boost[i][b];
        }
    }
    Ok(LorentzGenerator {
        components,
        chi_part: chi,
        boost_part: boost,
    })
}

/// Full generator `lambda = chi - boost` for a stationary velocity field at
/// one point (the acceleration is the Christoffel contraction alone).
pub fn lambda_generator(
    geometry: &Schwarzschild,
    point: &SpacetimePoint,
    u: &FourVelocity,
    mass: f64,
) -> Result<LorentzGenerator> {
    let accel = four_acceleration(geometry, point, u)?;
    assemble_generator(geometry, point, u, &accel, mass)
}

/// Full generator at proper time `tau` along an arbitrary world line.
pub fn generator_along(
    geometry: &Schwarzschild,
    line: &dyn WorldLine,
    tau: f64,
    mass: f64,
) -> Result<LorentzGenerator> {
    let (point, u) = line.state(geometry, tau)?;
    let accel = four_acceleration_along(geometry, line, tau)?;
    assemble_generator(geometry, &point, &u, &accel, mass)
}
