//! Spatial correlation of the interference field seen by a planar array.
//!
//! The field at element `n` is a superposition of plane waves with power
//! angular density `f(φ, θ)`, giving
//!
//! ```text
//! R[n, m] = ∫∫ exp(j k(φ,θ)ᵀ (u_n − u_m)) f(φ, θ) dφ dθ
//! ```
//!
//! Densities live on the front half-space of the array, `φ, θ ∈ (−π/2, π/2)`
//! in the local frame, and always carry the `cos θ` surface element so that
//! the isotropic case integrates to the sinc kernel.

use crate::error::{invalid, Error, Result};
use crate::linalg::{CMatrix, HermitianEigen};
use crate::quadrature::GaussLegendre;
use crate::scene::{wave_vector, ArrayLayout};
use crate::{Complex, Real};

/// Half-width, in standard deviations, of the integration window used for
/// Gaussian densities.
const GAUSSIAN_WINDOW_SIGMAS: f64 = 8.0;

const NORMALIZATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngularDensity<T> {
    /// Uniform over the front half-space, `cos θ / 2π`.
    Isotropic,
    /// Separable Gaussian in azimuth and elevation around a nominal
    /// direction, numerically normalised.
    Gaussian {
        nominal_azimuth: T,
        nominal_elevation: T,
        std_azimuth: T,
        std_elevation: T,
    },
}

impl<T: Real> AngularDensity<T> {
    pub fn gaussian(
        nominal_azimuth: T,
        nominal_elevation: T,
        std_azimuth: T,
        std_elevation: T,
    ) -> Result<Self> {
        if !(std_azimuth > T::zero() && std_elevation > T::zero()) {
            return invalid("Gaussian angular spreads must be positive");
        }
        if !(nominal_azimuth.is_finite() && nominal_elevation.is_finite()) {
            return invalid("nominal angles must be finite");
        }
        Ok(Self::Gaussian {
            nominal_azimuth,
            nominal_elevation,
            std_azimuth,
            std_elevation,
        })
    }

    /// Unnormalised density value (normalised for `Isotropic`).
    pub fn value(&self, azimuth: T, elevation: T) -> T {
        match *self {
            Self::Isotropic => elevation.cos() / T::TAU(),
            Self::Gaussian {
                nominal_azimuth,
                nominal_elevation,
                std_azimuth,
                std_elevation,
            } => {
                let two = T::lit(2.0);
                let da = (azimuth - nominal_azimuth) / std_azimuth;
                let de = (elevation - nominal_elevation) / std_elevation;
                (-(da * da + de * de) / two).exp() * elevation.cos()
            }
        }
    }

    /// Azimuth and elevation windows carrying the density's mass.
    fn windows(&self) -> Result<((T, T), (T, T))> {
        let half_pi = T::FRAC_PI_2();
        let front = (-half_pi, half_pi);
        match *self {
            Self::Isotropic => Ok((front, front)),
            Self::Gaussian {
                nominal_azimuth,
                nominal_elevation,
                std_azimuth,
                std_elevation,
            } => {
                let k = T::lit(GAUSSIAN_WINDOW_SIGMAS);
                let clip = |mu: T, sd: T| {
                    let lo = (mu - k * sd).max(-half_pi);
                    let hi = (mu + k * sd).min(half_pi);
                    (lo, hi)
                };
                let az = clip(nominal_azimuth, std_azimuth);
                let el = clip(nominal_elevation, std_elevation);
                if !(az.1 > az.0 && el.1 > el.0) {
                    return Err(Error::Numerical(
                        "Gaussian density has no mass in the front half-space".into(),
                    ));
                }
                Ok((az, el))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub nodes_per_axis: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { nodes_per_axis: 64 }
    }
}

/// Quadrature-built correlation with its refinement error estimate: the
/// largest entrywise change between the half-resolution rule and the
/// requested one.
#[derive(Debug, Clone)]
pub struct CorrelationEstimate<T> {
    pub matrix: CMatrix<T>,
    pub error_estimate: T,
}

/// Normalised sinc, `sin(πx)/(πx)`.
pub fn sinc<T: Real>(x: T) -> T {
    if x.abs() < T::lit(1e-8) {
        let px = T::PI() * x;
        T::one() - px * px / T::lit(6.0)
    } else {
        (T::PI() * x).sin() / (T::PI() * x)
    }
}

/// Closed-form correlation under isotropic interference,
/// `R[n, m] = sinc(2‖u_n − u_m‖/λ)`.
pub fn corr_isotropic<T: Real>(layout: &ArrayLayout<T>, wavelength: T) -> Result<CMatrix<T>> {
    if layout.is_empty() {
        return invalid("empty layout");
    }
    if !(wavelength > T::zero()) {
        return invalid("wavelength must be positive");
    }
    let u = &layout.element_positions;
    let two = T::lit(2.0);
    let r = CMatrix::from_fn(u.len(), |i, j| {
        Complex::new(sinc(two * u[i].distance(&u[j]) / wavelength), T::zero())
    });
    psd_project(&r)
}

fn accumulate<T: Real>(
    layout: &ArrayLayout<T>,
    wavelength: T,
    density: &AngularDensity<T>,
    nodes: usize,
) -> Result<(CMatrix<T>, T)> {
    let ((az_lo, az_hi), (el_lo, el_hi)) = density.windows()?;
    let az_rule = GaussLegendre::on_interval(nodes, az_lo, az_hi)?;
    let el_rule = GaussLegendre::on_interval(nodes, el_lo, el_hi)?;
    let n = layout.len();
    let mut acc = CMatrix::zeros(n);
    let mut mass = T::zero();
    let mut steer = vec![Complex::new(T::zero(), T::zero()); n];
    for (&az, &wa) in az_rule.nodes.iter().zip(&az_rule.weights) {
        for (&el, &we) in el_rule.nodes.iter().zip(&el_rule.weights) {
            let w = wa * we * density.value(az, el);
            if w == T::zero() {
                continue;
            }
            mass = mass + w;
            let k = wave_vector(az, el, wavelength)?;
            for (s, p) in steer.iter_mut().zip(&layout.element_positions) {
                *s = Complex::from_polar(T::one(), k.dot(p));
            }
            for i in 0..n {
                let wi = steer[i] * w;
                for j in i..n {
                    acc[(i, j)] = acc[(i, j)] + wi * steer[j].conj();
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            acc[(i, j)] = acc[(j, i)].conj();
        }
    }
    Ok((acc, mass))
}

/// Correlation for an arbitrary density by tensor Gauss–Legendre
/// quadrature, normalised so the diagonal is exactly one and projected onto
/// the PSD cone.
///
/// Fails with [`Error::Numerical`] when the density mass is not resolved:
/// the isotropic mass must integrate to one and a Gaussian's mass must agree
/// between the full and half-resolution rules, both within 1e-6.
pub fn corr_directional<T: Real>(
    layout: &ArrayLayout<T>,
    wavelength: T,
    density: &AngularDensity<T>,
    quadrature: QuadratureSpec,
) -> Result<CorrelationEstimate<T>> {
    if layout.is_empty() {
        return invalid("empty layout");
    }
    if !(wavelength > T::zero()) {
        return invalid("wavelength must be positive");
    }
    let nodes = quadrature.nodes_per_axis;
    if nodes < 4 {
        return invalid("quadrature needs at least 4 nodes per axis");
    }
    let (fine, fine_mass) = accumulate(layout, wavelength, density, nodes)?;
    let (coarse, coarse_mass) = accumulate(layout, wavelength, density, nodes / 2)?;

    let tol = T::lit(NORMALIZATION_TOL);
    if !(fine_mass > T::zero()) || !fine_mass.is_finite() {
        return Err(Error::Numerical(
            "density mass vanished under quadrature".into(),
        ));
    }
    let mass_error = match density {
        AngularDensity::Isotropic => (fine_mass - T::one()).abs(),
        AngularDensity::Gaussian { .. } => ((fine_mass - coarse_mass) / fine_mass).abs(),
    };
    if mass_error > tol {
        return Err(Error::Numerical(format!(
            "density normalisation not resolved: relative error {mass_error}"
        )));
    }

    let mut r = fine.scale(T::one() / fine_mass);
    let rc = coarse.scale(T::one() / coarse_mass);
    let error_estimate = r
        .as_slice()
        .iter()
        .zip(rc.as_slice())
        .fold(T::zero(), |m, (a, b)| m.max((a - b).norm()));
    for i in 0..r.dim() {
        r[(i, i)] = Complex::new(T::one(), T::zero());
    }
    Ok(CorrelationEstimate {
        matrix: psd_project(&r)?,
        error_estimate,
    })
}

/// Clips negative eigenvalues at zero. Inputs that are already PSD come back
/// unchanged.
pub fn psd_project<T: Real>(matrix: &CMatrix<T>) -> Result<CMatrix<T>> {
    if !matrix.is_hermitian(T::lit(1e-9)) {
        return invalid("psd_project needs a Hermitian matrix");
    }
    let eig = HermitianEigen::new(matrix)?;
    if eig.values.iter().all(|&l| l >= T::zero()) {
        return Ok(matrix.clone());
    }
    Ok(eig.reconstruct_with(|l| l.max(T::zero())))
}

/// Interference power at the output of the row combiner `v`, i.e.
/// `Σ v_n R[n,m] conj(v_m) = ‖vᵀ R^{1/2}‖²`, clipped at zero.
pub fn emi_quadratic_form<T: Real>(v: &[Complex<T>], correlation: &CMatrix<T>) -> Result<T> {
    if v.len() != correlation.dim() {
        return invalid(format!(
            "vector of length {} against {}x{} correlation",
            v.len(),
            correlation.dim(),
            correlation.dim()
        ));
    }
    let conj: Vec<Complex<T>> = v.iter().map(|z| z.conj()).collect();
    let q = correlation.hermitian_form(&conj)?.re;
    Ok(q.max(T::zero()))
}

/// Interference at the IRS/relay: variance σ²_emi, its angular density and
/// the resulting correlation on a given layout.
#[derive(Debug, Clone)]
pub struct EmiModel<T> {
    pub variance: T,
    pub density: AngularDensity<T>,
    pub correlation: CMatrix<T>,
}

impl<T: Real> EmiModel<T> {
    /// Builds the correlation for `layout`, closed form when isotropic.
    pub fn new(
        variance: T,
        density: AngularDensity<T>,
        layout: &ArrayLayout<T>,
        wavelength: T,
        quadrature: QuadratureSpec,
    ) -> Result<Self> {
        let correlation = match density {
            AngularDensity::Isotropic => corr_isotropic(layout, wavelength)?,
            AngularDensity::Gaussian { .. } => {
                corr_directional(layout, wavelength, &density, quadrature)?.matrix
            }
        };
        Self::from_parts(variance, density, correlation)
    }

    /// Model without interference; the correlation is the identity.
    pub fn absent(dim: usize) -> Self {
        Self {
            variance: T::zero(),
            density: AngularDensity::Isotropic,
            correlation: CMatrix::identity(dim),
        }
    }

    pub fn from_parts(
        variance: T,
        density: AngularDensity<T>,
        correlation: CMatrix<T>,
    ) -> Result<Self> {
        if !(variance >= T::zero()) || !variance.is_finite() {
            return invalid("EMI variance must be finite and non-negative");
        }
        if !correlation.is_hermitian(T::lit(1e-9)) {
            return invalid("EMI correlation must be Hermitian");
        }
        let tol = T::lit(1e-9);
        for i in 0..correlation.dim() {
            if (correlation[(i, i)].re - T::one()).abs() > tol {
                return invalid("EMI correlation must have a unit diagonal");
            }
        }
        Ok(Self {
            variance,
            density,
            correlation,
        })
    }

    pub fn dim(&self) -> usize {
        self.correlation.dim()
    }

    /// Same correlation, different variance.
    pub fn with_variance(&self, variance: T) -> Result<Self> {
        Self::from_parts(variance, self.density, self.correlation.clone())
    }
}
