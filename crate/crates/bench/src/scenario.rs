//! Physical setup built from a [`Config`]: positions, link budget, array
//! layouts, channels and EMI models.

use emilink_core::emi::{corr_isotropic, AngularDensity, EmiModel, QuadratureSpec};
use emilink_core::irs::IrsLink;
use emilink_core::linalg::CMatrix;
use emilink_core::relay::{
    effective_gain_first_phase, effective_gain_second_phase, effective_gains_single,
    noise_covariance, CombinerKind, EffectiveGains,
};
use emilink_core::scene::{
    angles_between, db_to_linear, los_channel_between, make_layout, pathloss_umi, ArrayLayout,
    LinkBudget, Orientation, UmiPathLoss, Vec3,
};

use crate::config::Config;
use crate::BenchError;

/// Spatial structure of the interference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EmiKind {
    None,
    Isotropic,
    /// Gaussian around the direction of the source.
    Case1,
    /// Gaussian around the direction of the destination.
    Case2,
}

impl EmiKind {
    pub fn label(self) -> &'static str {
        match self {
            EmiKind::None => "none",
            EmiKind::Isotropic => "iso",
            EmiKind::Case1 => "case1",
            EmiKind::Case2 => "case2",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub source: Vec3<f64>,
    pub node: Vec3<f64>,
    pub destination: Vec3<f64>,
    pub orientation: Orientation<f64>,
    pub rows_override: Option<usize>,
    pub budget: LinkBudget<f64>,
    pub target_rate: f64,
    pub rho_db: f64,
    pub spread: f64,
    pub quadrature: QuadratureSpec,
}

fn vec3(v: [f64; 3]) -> Vec3<f64> {
    Vec3::new(v[0], v[1], v[2])
}

impl Scenario {
    pub fn from_config(cfg: &Config) -> Result<Self, BenchError> {
        let b = &cfg.budget;
        let mut budget = LinkBudget::new(
            b.carrier_ghz,
            b.bandwidth_hz,
            b.noise_dbm,
            b.node_gain_dbi,
            b.endpoint_gain_dbi,
        )?;
        budget.pathloss = UmiPathLoss {
            slope: b.pathloss_slope,
            intercept: b.pathloss_intercept,
            freq_coeff: b.pathloss_freq_coeff,
            ..UmiPathLoss::default()
        };
        let g = &cfg.geometry;
        Ok(Self {
            source: vec3(g.source),
            node: vec3(g.node),
            destination: vec3(g.destination),
            orientation: Orientation::facing(vec3(g.broadside))?,
            rows_override: g.rows_override,
            budget,
            target_rate: cfg.target_rate,
            rho_db: cfg.emi.rho_db,
            spread: cfg.emi.spread_deg.to_radians(),
            quadrature: QuadratureSpec {
                nodes_per_axis: cfg.emi.quadrature_nodes,
            },
        })
    }

    pub fn noise_power(&self) -> f64 {
        self.budget.noise_power
    }

    pub fn emi_variance(&self, kind: EmiKind, rho_db: f64) -> f64 {
        match kind {
            EmiKind::None => 0.0,
            _ => db_to_linear(rho_db) * self.noise_power(),
        }
    }

    /// Destination moved to `x` metres along the source–destination axis.
    pub fn destination_at(&self, x: f64) -> Vec3<f64> {
        Vec3::new(x, self.destination.y, self.destination.z)
    }

    pub fn layout(&self, n: usize) -> Result<ArrayLayout<f64>, BenchError> {
        let rows = self.rows_override.filter(|r| n.is_multiple_of(*r));
        Ok(make_layout(n, self.budget.wavelength, rows)?.with_orientation(self.orientation))
    }

    /// Source→node and node→destination channel gains.
    pub fn hop_gains(&self, destination: Vec3<f64>) -> Result<(f64, f64), BenchError> {
        let beta_sr = pathloss_umi(self.source.distance(&self.node), &self.budget)?;
        let beta_rd = pathloss_umi(self.node.distance(&destination), &self.budget)?;
        Ok((beta_sr, beta_rd))
    }

    pub fn density(
        &self,
        kind: EmiKind,
        destination: Vec3<f64>,
    ) -> Result<AngularDensity<f64>, BenchError> {
        let toward = match kind {
            EmiKind::None | EmiKind::Isotropic => return Ok(AngularDensity::Isotropic),
            EmiKind::Case1 => self.source,
            EmiKind::Case2 => destination,
        };
        let (az, el) = angles_between(self.node, toward, &self.orientation)?;
        Ok(AngularDensity::gaussian(az, el, self.spread, self.spread)?)
    }

    /// Unit-diagonal EMI correlation on an `n`-element array at the node.
    pub fn correlation(
        &self,
        kind: EmiKind,
        n: usize,
        destination: Vec3<f64>,
    ) -> Result<CMatrix<f64>, BenchError> {
        let layout = self.layout(n)?;
        let lambda = self.budget.wavelength;
        Ok(match kind {
            EmiKind::None => CMatrix::identity(n),
            EmiKind::Isotropic => corr_isotropic(&layout, lambda)?,
            EmiKind::Case1 | EmiKind::Case2 => {
                let density = self.density(kind, destination)?;
                EmiModel::new(0.0, density, &layout, lambda, self.quadrature)?.correlation
            }
        })
    }

    pub fn irs_link(
        &self,
        n: usize,
        destination: Vec3<f64>,
        kind: EmiKind,
        rho_db: f64,
    ) -> Result<IrsLink<f64>, BenchError> {
        let corr = self.correlation(kind, n, destination)?;
        self.irs_link_with(n, destination, kind, rho_db, corr)
    }

    /// As [`Scenario::irs_link`] with a precomputed correlation.
    pub fn irs_link_with(
        &self,
        n: usize,
        destination: Vec3<f64>,
        kind: EmiKind,
        rho_db: f64,
        correlation: CMatrix<f64>,
    ) -> Result<IrsLink<f64>, BenchError> {
        let layout = self.layout(n)?;
        let (beta_sr, beta_rd) = self.hop_gains(destination)?;
        let h_sr = los_channel_between(beta_sr, self.node, self.source, &layout)?;
        let h_rd = los_channel_between(beta_rd, self.node, destination, &layout)?;
        let density = self.density(kind, destination)?;
        let emi = EmiModel::from_parts(self.emi_variance(kind, rho_db), density, correlation)?;
        Ok(IrsLink::new(h_sr, h_rd, emi, self.noise_power())?)
    }

    /// Per-phase gains of a single-antenna relay.
    pub fn relay_gains_single(
        &self,
        destination: Vec3<f64>,
        kind: EmiKind,
        rho_db: f64,
    ) -> Result<EffectiveGains<f64>, BenchError> {
        let (beta_sr, beta_rd) = self.hop_gains(destination)?;
        Ok(effective_gains_single(
            beta_sr,
            beta_rd,
            self.emi_variance(kind, rho_db),
            self.noise_power(),
        )?)
    }

    /// Per-phase gains of an `m`-antenna relay with the given combiner and
    /// MR precoding towards the destination.
    pub fn relay_gains_array(
        &self,
        m: usize,
        destination: Vec3<f64>,
        kind: EmiKind,
        rho_db: f64,
        combiner: CombinerKind,
        correlation: &CMatrix<f64>,
    ) -> Result<EffectiveGains<f64>, BenchError> {
        let layout = self.layout(m)?;
        let (beta_sr, beta_rd) = self.hop_gains(destination)?;
        let h_sr = los_channel_between(beta_sr, self.node, self.source, &layout)?;
        let h_rd = los_channel_between(beta_rd, self.node, destination, &layout)?;
        let cov = noise_covariance(
            self.emi_variance(kind, rho_db),
            correlation,
            self.noise_power(),
        );
        let first = effective_gain_first_phase(&h_sr.coefficients, &cov, combiner)?;
        let second = effective_gain_second_phase(&h_rd.coefficients, self.noise_power())?;
        Ok(EffectiveGains::new(first, second)?)
    }
}
