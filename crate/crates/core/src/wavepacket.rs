//! Discretisation of the initial spin-momentum product state into weighted
//! momentum samples.
//!
//! The packet is sharp in `p^1`, `p^2` and Gaussian in `p^3` with density
//! `|C|^2 N ~ exp(-(p^3 - q^3)^2 / w^2) / (sqrt(pi) w)` (the invariant-measure
//! factor `N(p)` cancels against the measure by construction). Gauss-Hermite
//! quadrature in `(p^3 - q^3)/w` turns that integral into a finite sum with
//! spectrally convergent weights. Because the transport map is a Lorentz map
//! and `N d^3p` is Lorentz-invariant, the weights are constants of motion:
//! samples are never re-meshed.

use crate::error::{Error, Result};
use crate::wigner::SpinRotor;
use num_complex::Complex64;

pub const MIN_NODES: usize = 4;
pub const MAX_NODES: usize = 4096;

/// Specification of the initial packet, in units of `mc`.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketSpec {
    /// Centroid momentum `q^3`.
    pub centroid_momentum: f64,
    /// Gaussian width `w` of `exp(-(p^3 - q^3)^2 / w^2)`.
    pub width: f64,
    /// Initial spin state; defaults to up.
    pub initial_spin: [Complex64; 2],
    /// Number of quadrature nodes.
    pub nodes: usize,
}

pub fn spin_up() -> [Complex64; 2] {
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
}

impl PacketSpec {
    pub fn new(centroid_momentum: f64, width: f64, nodes: usize) -> Result<Self> {
        Self::with_spin(centroid_momentum, width, nodes, spin_up())
    }

    pub fn with_spin(
        centroid_momentum: f64,
        width: f64,
        nodes: usize,
        initial_spin: [Complex64; 2],
    ) -> Result<Self> {
        if !centroid_momentum.is_finite() || !width.is_finite() {
            return Err(Error::InvalidInput("non-finite packet parameters".into()));
        }
        if width <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "packet width must be positive, got {width}; use momentum_eigenstate for w = 0"
            )));
        }
        if !(MIN_NODES..=MAX_NODES).contains(&nodes) {
            return Err(Error::InvalidInput(format!(
                "node count {nodes} outside [{MIN_NODES}, {MAX_NODES}]"
            )));
        }
        let norm = (initial_spin[0].norm_sqr() + initial_spin[1].norm_sqr()).sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput(format!(
                "initial spin must be normalized, got |chi| = {norm}"
            )));
        }
        Ok(Self {
            centroid_momentum,
            width,
            initial_spin,
            nodes,
        })
    }

    /// The `w -> 0` limit: a single node exactly at the centroid momentum.
    pub fn momentum_eigenstate(centroid_momentum: f64) -> Self {
        Self {
            centroid_momentum,
            width: 0.0,
            initial_spin: spin_up(),
            nodes: 1,
        }
    }

    pub fn is_momentum_eigenstate(&self) -> bool {
        self.width == 0.0
    }

    /// Builds the sample list: on-shell momenta `(e(p3), 0, 0, p3)` at the
    /// Gauss-Hermite nodes of the Gaussian, weights normalized to sum to 1,
    /// rotors at the identity.
    pub fn discretize(&self, mass: f64) -> Result<Vec<MomentumSample>> {
        if self.is_momentum_eigenstate() {
            let p = on_shell(self.centroid_momentum, mass);
            return Ok(vec![MomentumSample {
                p,
                p_init: p,
                weight: 1.0,
                rotor: SpinRotor::IDENTITY,
            }]);
        }
        let (x, gh_weights) = gauss_hermite(self.nodes)?;
        let total: f64 = gh_weights.iter().sum();
        let samples = x
            .iter()
            .zip(&gh_weights)
            .map(|(&xi, &wi)| {
                let p = on_shell(self.centroid_momentum + self.width * xi, mass);
                MomentumSample {
                    p,
                    p_init: p,
                    weight: wi / total,
                    rotor: SpinRotor::IDENTITY,
                }
            })
            .collect();
        Ok(samples)
    }
}

/// One quadrature node of the packet.
#[derive(Debug, Clone, Copy)]
pub struct MomentumSample {
    /// Current local four-momentum, transported along the trajectory.
    pub p: [f64; 4],
    /// The momentum label this mode was prepared with; its Wigner rotation
    /// rate is evaluated here. Constant over a run, like the weight.
    pub p_init: [f64; 4],
    /// Quadrature probability weight; a constant of motion.
    pub weight: f64,
    /// Accumulated spin rotation.
    pub rotor: SpinRotor,
}

fn on_shell(p3: f64, mass: f64) -> [f64; 4] {
    [(mass * mass + p3 * p3).sqrt(), 0.0, 0.0, p3]
}

/// Invariant-measure density `N(p) = mc / sqrt(|p|^2 + m^2 c^2)`.
pub fn invariant_measure(p: &[f64; 4], mass: f64) -> f64 {
    mass / (mass * mass + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]).sqrt()
}

/// Nodes and weights of n-point Gauss-Hermite quadrature
/// (`integral f(x) exp(-x^2) dx ~ sum w_i f(x_i)`), nodes ascending.
///
/// Roots of the orthonormal Hermite polynomial, isolated by Sturm-sequence
/// bisection on the Jacobi matrix and polished by Newton steps on a rescaled
/// recurrence. Robust up to [`MAX_NODES`]; far-tail weights at very large `n`
/// underflow to zero, which is their correct double-precision value.
pub fn gauss_hermite(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 || n > MAX_NODES {
        return Err(Error::InvalidInput(format!(
            "Gauss-Hermite order {n} outside [1, {MAX_NODES}]"
        )));
    }
    let nf = n as f64;

    // Number of eigenvalues of the Jacobi matrix (zero diagonal, off-diagonal
    // b_j = sqrt(j/2)) strictly below `x`, by the Sturm sequence.
    let count_below = |x: f64| -> usize {
        let mut count = 0usize;
        let mut d = -x;
        if d < 0.0 {
            count += 1;
        }
        for j in 1..n {
            let b2 = j as f64 / 2.0;
            let mut denom = d;
            if denom.abs() < 1e-300 {
                denom = if denom < 0.0 { -1e-300 } else { 1e-300 };
            }
            d = -x - b2 / denom;
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };

    // Orthonormal Hermite recurrence at `z`, rescaled on the fly so that it
    // never overflows. Returns (p_n, p_n', rescale count); the true values
    // carry an extra factor RESCALE^count.
    const RESCALE: f64 = 1e100;
    let evaluate = |z: f64| -> (f64, f64, i32) {
        let mut p1 = std::f64::consts::PI.powf(-0.25);
        let mut p2 = 0.0;
        let mut rescales = 0;
        for j in 1..=n {
            let p3 = p2;
            p2 = p1;
            let jf = j as f64;
            p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            if p1.abs() > RESCALE {
                p1 /= RESCALE;
                p2 /= RESCALE;
                rescales += 1;
            }
        }
        ((p1), (2.0 * nf).sqrt() * p2, rescales)
    };

    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let upper = (2.0 * nf + 2.0).sqrt();

    // Nonnegative roots; the negative half follows by symmetry.
    for k in n / 2..n {
        let z = if 2 * k + 1 == n {
            0.0 // middle root of an odd-order polynomial
        } else {
            // Bisect until the bracket is far inside Newton's quadratic
            // basin (node spacing is at least pi/sqrt(2n) ~ 3e-2), then
            // polish.
            let (mut lo, mut hi) = (0.0f64, upper);
            while hi - lo > 1e-6 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if count_below(mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let mut z = 0.5 * (lo + hi);
            for _ in 0..4 {
                let (p, dp, _) = evaluate(z);
                let step = p / dp;
                if !step.is_finite() {
                    break;
                }
                z -= step;
                if z < lo - 1e-9 || z > hi + 1e-9 {
                    z = 0.5 * (lo + hi);
                    break;
                }
            }
            z
        };
        let (_, dp, rescales) = evaluate(z);
        let weight = if rescales == 0 {
            2.0 / (dp * dp)
        } else {
            // ln w = ln 2 - 2 ln|p_n'|; underflows cleanly for far tails.
            (std::f64::consts::LN_2 - 2.0 * (dp.abs().ln() + f64::from(rescales) * RESCALE.ln()))
                .exp()
        };
        x[k] = z;
        x[n - 1 - k] = -z;
        w[k] = weight;
        w[n - 1 - k] = weight;
    }
    Ok((x, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const SQRT_PI: f64 = 1.7724538509055159;

    #[test]
    fn low_order_nodes_match_known_values() {
        let (x, w) = gauss_hermite(2).unwrap();
        assert_abs_diff_eq!(x[0], -std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-14);
        assert_abs_diff_eq!(x[1], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-14);
        assert_abs_diff_eq!(w[0], SQRT_PI / 2.0, epsilon = 1e-14);

        let (x, w) = gauss_hermite(3).unwrap();
        assert_abs_diff_eq!(x[1], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(x[2], 1.224744871391589, epsilon = 1e-13);
        assert_abs_diff_eq!(w[1], 2.0 * SQRT_PI / 3.0, epsilon = 1e-13);
        assert_abs_diff_eq!(w[2], SQRT_PI / 6.0, epsilon = 1e-13);
    }

    #[test]
    fn gaussian_moments_are_exact() {
        for n in [8, 64, 128, 257] {
            let (x, w) = gauss_hermite(n).unwrap();
            let total: f64 = w.iter().sum();
            assert_abs_diff_eq!(total, SQRT_PI, epsilon = 1e-12);
            let m2: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
            assert_abs_diff_eq!(m2 / SQRT_PI, 0.5, epsilon = 1e-12);
            let m4: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
            assert_abs_diff_eq!(m4 / SQRT_PI, 0.75, epsilon = 1e-12);
            let m1: f64 = x.iter().zip(&w).map(|(x, w)| w * x).sum();
            assert!(m1.abs() < 1e-13);
        }
    }

    #[test]
    fn large_order_still_resolves_the_gaussian() {
        let (x, w) = gauss_hermite(1024).unwrap();
        let total: f64 = w.iter().sum();
        assert_abs_diff_eq!(total, SQRT_PI, epsilon = 1e-10);
        // integral exp(-x^2) cos(x) dx = sqrt(pi) exp(-1/4)
        let c: f64 = x.iter().zip(&w).map(|(x, w)| w * x.cos()).sum();
        assert_abs_diff_eq!(c / SQRT_PI, (-0.25f64).exp(), epsilon = 1e-12);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn maximum_order_is_usable() {
        let (x, w) = gauss_hermite(MAX_NODES).unwrap();
        let total: f64 = w.iter().sum();
        assert_abs_diff_eq!(total, SQRT_PI, epsilon = 1e-10);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        assert!(w.iter().all(|&wi| wi >= 0.0 && wi.is_finite()));
    }

    #[test]
    fn packet_weights_sum_to_one_and_reproduce_the_moments() {
        let spec = PacketSpec::new(4.0 / 3.0, 0.1, 128).unwrap();
        let samples = spec.discretize(1.0).unwrap();
        assert_eq!(samples.len(), 128);
        let total: f64 = samples.iter().map(|s| s.weight).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let mean: f64 = samples.iter().map(|s| s.weight * s.p[3]).sum();
        assert_abs_diff_eq!(mean, 4.0 / 3.0, epsilon = 1e-13);
        let var: f64 = samples
            .iter()
            .map(|s| s.weight * (s.p[3] - 4.0 / 3.0).powi(2))
            .sum();
        assert_abs_diff_eq!(var, 0.1 * 0.1 / 2.0, epsilon = 1e-14);
    }

    #[test]
    fn samples_start_on_shell_with_transverse_zeros() {
        let spec = PacketSpec::new(0.8, 0.2, 64).unwrap();
        for s in spec.discretize(1.0).unwrap() {
            assert_eq!(s.p[1], 0.0);
            assert_eq!(s.p[2], 0.0);
            let pp = -s.p[0] * s.p[0] + s.p[3] * s.p[3];
            assert!((pp + 1.0).abs() < 1e-14);
            assert_eq!(s.p, s.p_init);
            assert_eq!(s.rotor, SpinRotor::IDENTITY);
        }
    }

    #[test]
    fn momentum_eigenstate_is_a_single_node_at_the_centroid() {
        let spec = PacketSpec::momentum_eigenstate(1.25);
        let samples = spec.discretize(1.0).unwrap();
        assert_eq!(samples.len(), 1);
        assert_eq!(samples[0].weight, 1.0);
        assert_eq!(samples[0].p[3], 1.25);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(PacketSpec::new(1.0, -0.1, 64).is_err());
        assert!(PacketSpec::new(1.0, 0.0, 64).is_err());
        assert!(PacketSpec::new(1.0, 0.1, 3).is_err());
        assert!(PacketSpec::new(1.0, 0.1, 4097).is_err());
        let bad_spin = [Complex64::new(0.9, 0.0), Complex64::new(0.0, 0.0)];
        assert!(PacketSpec::with_spin(1.0, 0.1, 64, bad_spin).is_err());
    }

    #[test]
    fn invariant_measure_values() {
        assert_abs_diff_eq!(invariant_measure(&[1.0, 0.0, 0.0, 0.0], 1.0), 1.0);
        // p^3 = sinh(xi) with cosh(xi) = 5/3 gives N = 3/5.
        let p3: f64 = 4.0 / 3.0;
        let p = [(1.0 + p3 * p3).sqrt(), 0.0, 0.0, p3];
        assert_abs_diff_eq!(invariant_measure(&p, 1.0), 0.6, epsilon = 1e-14);
    }
}
