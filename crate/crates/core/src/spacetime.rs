//! Schwarzschild geometry: metric, Christoffel symbols, and the static
//! orthonormal tetrad, plus a finite-difference backend for user-supplied
//! diagonal metrics.
//!
//! Index conventions: `a, b = 0..4` label the local orthonormal frame,
//! `mu, nu = 0..4` label the chart coordinates `(t, r, theta, phi)`, and
//! `eta = diag(-1, 1, 1, 1)`. Rank-2 arrays are stored row-major with the
//! first index the upper one, so `Tetrad::frame[a][mu] = e_a^mu` and
//! `Tetrad::coframe[a][mu] = e^a_mu`.

use crate::error::{Error, Result};

/// Minkowski metric diag(-1, 1, 1, 1), diagonal entries.
pub const ETA: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

/// Relative step of the central-difference metric backend.
pub const FD_RELATIVE_STEP: f64 = 1e-5;

/// Chart coordinates `(t, r, theta, phi)` of a point.
///
/// `r` is the areal radius in units of the Schwarzschild radius (or of the
/// orbit radius in flat spacetime), angles are in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint {
    pub t: f64,
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SpacetimePoint {
    pub fn new(t: f64, r: f64, theta: f64, phi: f64) -> Result<Self> {
        let point = Self { t, r, theta, phi };
        point.validate()?;
        Ok(point)
    }

    /// Point in the equatorial plane at radius `r` (t = 0, phi = 0).
    pub fn equatorial(r: f64) -> Result<Self> {
        Self::new(0.0, r, std::f64::consts::FRAC_PI_2, 0.0)
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.t, self.r, self.theta, self.phi]
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let c = self.coords();
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite coordinates (t, r, theta, phi) = {c:?}"
            )));
        }
        if self.r <= 0.0 {
            return Err(Error::InvalidInput(format!("r = {} must be > 0", self.r)));
        }
        if self.theta <= 0.0 || self.theta >= std::f64::consts::PI {
            return Err(Error::InvalidInput(format!(
                "theta = {} must lie strictly between 0 and pi",
                self.theta
            )));
        }
        Ok(())
    }

    fn shifted(&self, mu: usize, h: f64) -> Self {
        let mut c = self.coords();
        c[mu] += h;
        Self {
            t: c[0],
            r: c[1],
            theta: c[2],
            phi: c[3],
        }
    }
}

/// Metric components `g_munu` evaluated at one point.
#[derive(Debug, Clone, Copy)]
pub struct Metric {
    pub components: [[f64; 4]; 4],
    pub schwarzschild_radius: f64,
}

impl Metric {
    /// Inner product `g_munu u^mu v^nu`.
    pub fn dot(&self, u: &[f64; 4], v: &[f64; 4]) -> f64 {
        let mut s = 0.0;
        for mu in 0..4 {
            for nu in 0..4 {
                s += self.components[mu][nu] * u[mu] * v[nu];
            }
        }
        s
    }

    /// Inverse components `g^munu`.
    pub fn inverse(&self) -> Option<[[f64; 4]; 4]> {
        invert4(&self.components)
    }
}

/// Connection coefficients `Gamma^lambda_{mu nu}`, symmetric in `(mu, nu)`.
///
/// Indexed as `components[lambda][mu][nu]`.
#[derive(Debug, Clone)]
pub struct Christoffel {
    pub components: [[[f64; 4]; 4]; 4],
}

/// Orthonormal frame `e_a^mu` and coframe `e^a_mu` at a point.
#[derive(Debug, Clone, Copy)]
pub struct Tetrad {
    pub frame: [[f64; 4]; 4],
    pub coframe: [[f64; 4]; 4],
    pub point: SpacetimePoint,
}

impl Tetrad {
    /// `e_a^mu e_b^nu g_munu`, which must equal `eta_ab`.
    pub fn frame_metric_contraction(&self, metric: &Metric) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                out[a][b] = metric.dot(&self.frame[a], &self.frame[b]);
            }
        }
        out
    }

    /// `e^a_mu e_b^mu`, which must equal `delta^a_b`.
    pub fn coframe_frame_contraction(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                for mu in 0..4 {
                    out[a][b] += self.coframe[a][mu] * self.frame[b][mu];
                }
            }
        }
        out
    }

    /// Coordinate components to local-frame components: `v^a = e^a_mu v^mu`.
    pub fn to_local(&self, v: &[f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for a in 0..4 {
            for mu in 0..4 {
                out[a] += self.coframe[a][mu] * v[mu];
            }
        }
        out
    }

    /// Local-frame components back to coordinate components.
    pub fn to_coordinate(&self, v: &[f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for mu in 0..4 {
            for a in 0..4 {
                out[mu] += self.frame[a][mu] * v[a];
            }
        }
        out
    }
}

/// Anything that can evaluate a metric at a point. The finite-difference
/// Christoffel backend works against this, so user-supplied diagonal metrics
/// plug into the rest of the pipeline.
pub trait MetricSource {
    fn metric_at(&self, point: &SpacetimePoint) -> Result<Metric>;
}

/// Schwarzschild spacetime with radius `r_s` (in internal length units;
/// `r_s = 0` is flat spacetime in spherical coordinates).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schwarzschild {
    r_s: f64,
}

impl Schwarzschild {
    pub fn new(r_s: f64) -> Result<Self> {
        if !r_s.is_finite() || r_s < 0.0 {
            return Err(Error::InvalidInput(format!(
                "Schwarzschild radius must be finite and >= 0, got {r_s}"
            )));
        }
        Ok(Self { r_s })
    }

    /// Standard geometry with `r_s = 1` (the internal unit choice).
    pub fn unit() -> Self {
        Self { r_s: 1.0 }
    }

    /// Flat spacetime in spherical coordinates.
    pub fn flat() -> Self {
        Self { r_s: 0.0 }
    }

    pub fn radius(&self) -> f64 {
        self.r_s
    }

    pub fn is_flat(&self) -> bool {
        self.r_s == 0.0
    }

    /// Lapse function `f(r) = 1 - r_s/r`.
    pub fn f(&self, r: f64) -> f64 {
        1.0 - self.r_s / r
    }

    /// `f'(r) = r_s/r^2`.
    pub fn f_prime(&self, r: f64) -> f64 {
        self.r_s / (r * r)
    }

    fn require_outside_horizon(&self, point: &SpacetimePoint) -> Result<()> {
        if self.r_s > 0.0 && point.r <= self.r_s {
            return Err(Error::Horizon {
                r: point.r,
                r_s: self.r_s,
            });
        }
        Ok(())
    }

    /// Metric components at a point: `g_tt = -f`, `g_rr = 1/f`,
    /// `g_thth = r^2`, `g_phph = r^2 sin^2(theta)`.
    pub fn metric(&self, point: &SpacetimePoint) -> Result<Metric> {
        point.validate()?;
        let f = self.f(point.r);
        if f == 0.0 {
            return Err(Error::DegenerateMetric {
                r: point.r,
                theta: point.theta,
            });
        }
        let sin_th = point.theta.sin();
        let mut g = [[0.0; 4]; 4];
        g[0][0] = -f;
        g[1][1] = 1.0 / f;
        g[2][2] = point.r * point.r;
        g[3][3] = point.r * point.r * sin_th * sin_th;
        Ok(Metric {
            components: g,
            schwarzschild_radius: self.r_s,
        })
    }

    /// Closed-form Christoffel symbols.
    ///
    /// The generic central-difference backend [`christoffel_fd`] serves as the
    /// independent check on these expressions.
    pub fn christoffel(&self, point: &SpacetimePoint) -> Result<Christoffel> {
        point.validate()?;
        let r = point.r;
        let f = self.f(r);
        if f == 0.0 {
            return Err(Error::DegenerateMetric {
                r,
                theta: point.theta,
            });
        }
        let fp = self.f_prime(r);
        let (sin_th, cos_th) = point.theta.sin_cos();

        let mut c = [[[0.0; 4]; 4]; 4];
        // t
        c[0][0][1] = fp / (2.0 * f);
        c[0][1][0] = c[0][0][1];
        // r
        c[1][0][0] = f * fp / 2.0;
        c[1][1][1] = -fp / (2.0 * f);
        c[1][2][2] = -r * f;
        c[1][3][3] = -r * f * sin_th * sin_th;
        // theta
        c[2][1][2] = 1.0 / r;
        c[2][2][1] = c[2][1][2];
        c[2][3][3] = -sin_th * cos_th;
        // phi
        c[3][1][3] = 1.0 / r;
        c[3][3][1] = c[3][1][3];
        c[3][2][3] = cos_th / sin_th;
        c[3][3][2] = c[3][2][3];

        Ok(Christoffel { components: c })
    }

    /// Static orthonormal tetrad: the frame of an observer at rest with
    /// respect to the coordinate time.
    ///
    /// `e_0^t = 1/sqrt(f)`, `e_1^r = sqrt(f)`, `e_2^theta = 1/r`,
    /// `e_3^phi = 1/(r sin theta)`; the coframe is the matrix inverse.
    pub fn static_tetrad(&self, point: &SpacetimePoint) -> Result<Tetrad> {
        point.validate()?;
        self.require_outside_horizon(point)?;
        let f = self.f(point.r);
        let sqrt_f = f.sqrt();
        let r = point.r;
        let sin_th = point.theta.sin();

        let mut frame = [[0.0; 4]; 4];
        frame[0][0] = 1.0 / sqrt_f;
        frame[1][1] = sqrt_f;
        frame[2][2] = 1.0 / r;
        frame[3][3] = 1.0 / (r * sin_th);

        let mut coframe = [[0.0; 4]; 4];
        coframe[0][0] = sqrt_f;
        coframe[1][1] = 1.0 / sqrt_f;
        coframe[2][2] = r;
        coframe[3][3] = r * sin_th;

        Ok(Tetrad {
            frame,
            coframe,
            point: *point,
        })
    }

    /// Covariant derivative of the static coframe,
    /// `(nabla_mu e^a)_nu = d_mu e^a_nu - Gamma^lambda_{mu nu} e^a_lambda`,
    /// indexed `[a][mu][nu]`. Analytic partials; checked against finite
    /// differences in the tests.
    pub fn coframe_covariant_derivative(
        &self,
        point: &SpacetimePoint,
    ) -> Result<[[[f64; 4]; 4]; 4]> {
        let tetrad = self.static_tetrad(point)?;
        let gamma = self.christoffel(point)?;
        let r = point.r;
        let f = self.f(r);
        let fp = self.f_prime(r);
        let (sin_th, cos_th) = point.theta.sin_cos();

        // Nonzero partials d_mu e^a_nu of the diagonal coframe.
        let mut partial = [[[0.0; 4]; 4]; 4];
        partial[0][1][0] = fp / (2.0 * f.sqrt()); // d_r e^0_t
        partial[1][1][1] = -fp / (2.0 * f.powf(1.5)); // d_r e^1_r
        partial[2][1][2] = 1.0; // d_r e^2_theta
        partial[3][1][3] = sin_th; // d_r e^3_phi
        partial[3][2][3] = r * cos_th; // d_theta e^3_phi

        let mut out = [[[0.0; 4]; 4]; 4];
        for a in 0..4 {
            for mu in 0..4 {
                for nu in 0..4 {
                    let mut v = partial[a][mu][nu];
                    for lam in 0..4 {
                        v -= gamma.components[lam][mu][nu] * tetrad.coframe[a][lam];
                    }
                    out[a][mu][nu] = v;
                }
            }
        }
        Ok(out)
    }
}

impl MetricSource for Schwarzschild {
    fn metric_at(&self, point: &SpacetimePoint) -> Result<Metric> {
        self.metric(point)
    }
}

/// Christoffel symbols of an arbitrary metric source by central differences,
/// `Gamma^lambda_{mu nu} = g^{lambda rho} (d_mu g_{rho nu} + d_nu g_{rho mu}
/// - d_rho g_{mu nu}) / 2`, with relative step [`FD_RELATIVE_STEP`].
pub fn christoffel_fd(source: &dyn MetricSource, point: &SpacetimePoint) -> Result<Christoffel> {
    point.validate()?;
    let g = source.metric_at(point)?;
    let g_inv = g.inverse().ok_or(Error::DegenerateMetric {
        r: point.r,
        theta: point.theta,
    })?;

    // dg[mu][rho][nu] = d_mu g_{rho nu}
    let mut dg = [[[0.0; 4]; 4]; 4];
    for mu in 0..4 {
        let h = FD_RELATIVE_STEP * point.coords()[mu].abs().max(1.0);
        let plus = source.metric_at(&point.shifted(mu, h))?;
        let minus = source.metric_at(&point.shifted(mu, -h))?;
        for rho in 0..4 {
            for nu in 0..4 {
                dg[mu][rho][nu] =
                    (plus.components[rho][nu] - minus.components[rho][nu]) / (2.0 * h);
            }
        }
    }

    let mut c = [[[0.0; 4]; 4]; 4];
    for lam in 0..4 {
        for mu in 0..4 {
            for nu in 0..4 {
                let mut s = 0.0;
                for rho in 0..4 {
                    s += g_inv[lam][rho] * (dg[mu][rho][nu] + dg[nu][rho][mu] - dg[rho][mu][nu]);
                }
                c[lam][mu][nu] = 0.5 * s;
            }
        }
    }
    Ok(Christoffel { components: c })
}

/// Orthonormal tetrad aligned with the coordinate axes of a diagonal metric:
/// `e_a^mu = delta_a^mu / sqrt(|g_mumu|)`. This is the extension hook for
/// user-supplied diagonal metrics; for Schwarzschild it coincides with
/// [`Schwarzschild::static_tetrad`].
pub fn diagonal_tetrad(metric: &Metric, point: &SpacetimePoint) -> Result<Tetrad> {
    for mu in 0..4 {
        for nu in 0..4 {
            if mu != nu && metric.components[mu][nu].abs() > 1e-14 {
                return Err(Error::InvalidInput(
                    "diagonal_tetrad requires a diagonal metric".into(),
                ));
            }
        }
    }
    let diag = [
        metric.components[0][0],
        metric.components[1][1],
        metric.components[2][2],
        metric.components[3][3],
    ];
    if diag[0] >= 0.0 || diag[1..].iter().any(|&x| x <= 0.0) {
        return Err(Error::DegenerateMetric {
            r: point.r,
            theta: point.theta,
        });
    }
    let mut frame = [[0.0; 4]; 4];
    let mut coframe = [[0.0; 4]; 4];
    for a in 0..4 {
        let scale = diag[a].abs().sqrt();
        frame[a][a] = 1.0 / scale;
        coframe[a][a] = scale;
    }
    Ok(Tetrad {
        frame,
        coframe,
        point: *point,
    })
}

/// Gauss-Jordan inverse of a 4x4 matrix with partial pivoting.
pub(crate) fn invert4(m: &[[f64; 4]; 4]) -> Option<[[f64; 4]; 4]> {
    let mut a = *m;
    let mut inv = [[0.0; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for col in 0..4 {
        let mut pivot = col;
        for row in col + 1..4 {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = a[col][col];
        for k in 0..4 {
            a[col][k] /= scale;
            inv[col][k] /= scale;
        }
        for row in 0..4 {
            if row != col {
                let factor = a[row][col];
                for k in 0..4 {
                    a[row][k] -= factor * a[col][k];
                    inv[row][k] -= factor * inv[col][k];
                }
            }
        }
    }
    Some(inv)
}
