//! Scenario configuration file (JSON, schema version 1).
//!
//! Every field is optional and falls back to the reference setup, so an
//! empty object `{"version": 1}` is a complete configuration. Unknown keys
//! are rejected at every level.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::BenchError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub version: u32,
    pub geometry: Geometry,
    pub budget: Budget,
    /// Target rate R̄ in bit/s/Hz.
    pub target_rate: f64,
    pub emi: Emi,
    pub irs: Irs,
    pub relay: Relay,
    pub sweep: Sweep,
    pub solver: Solver,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            version: SCHEMA_VERSION,
            geometry: Geometry::default(),
            budget: Budget::default(),
            target_rate: 6.0,
            emi: Emi::default(),
            irs: Irs::default(),
            relay: Relay::default(),
            sweep: Sweep::default(),
            solver: Solver::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Geometry {
    pub source: [f64; 3],
    /// Position shared by the IRS and the relay.
    pub node: [f64; 3],
    /// Destination for figures that do not sweep distance. Distance sweeps
    /// move its x coordinate.
    pub destination: [f64; 3],
    /// Global direction of the array broadside.
    pub broadside: [f64; 3],
    /// Fixes the number of array rows instead of the near-square default.
    pub rows_override: Option<usize>,
}

impl Default for Geometry {
    fn default() -> Self {
        Self {
            source: [0.0, 0.0, 0.0],
            node: [60.0, 10.0, 0.0],
            destination: [60.0, 0.0, 0.0],
            broadside: [0.0, -1.0, 0.0],
            rows_override: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Budget {
    pub carrier_ghz: f64,
    pub bandwidth_hz: f64,
    pub noise_dbm: f64,
    pub node_gain_dbi: f64,
    pub endpoint_gain_dbi: f64,
    pub pathloss_slope: f64,
    pub pathloss_intercept: f64,
    pub pathloss_freq_coeff: f64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            carrier_ghz: 3.0,
            bandwidth_hz: 10e6,
            noise_dbm: -94.0,
            node_gain_dbi: 5.0,
            endpoint_gain_dbi: 0.0,
            pathloss_slope: 22.0,
            pathloss_intercept: 28.0,
            pathloss_freq_coeff: 20.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Emi {
    /// EMI-to-noise ratio ρ in dB for figures that do not sweep it.
    pub rho_db: f64,
    /// Angular spread of the directional cases, both axes, in degrees.
    pub spread_deg: f64,
    /// Gauss–Legendre nodes per axis for directional correlations.
    pub quadrature_nodes: usize,
}

impl Default for Emi {
    fn default() -> Self {
        Self {
            rho_db: 25.0,
            spread_deg: 10.0,
            quadrature_nodes: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Irs {
    /// Surface sizes compared in the distance sweeps.
    pub sizes: Vec<usize>,
    /// Size used by the single-surface figures and as the relay reference.
    pub reference_size: usize,
}

impl Default for Irs {
    fn default() -> Self {
        Self {
            sizes: vec![50, 75, 100],
            reference_size: 75,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Relay {
    /// Antenna counts swept by the multi-antenna figure.
    pub antennas: Vec<usize>,
}

impl Default for Relay {
    fn default() -> Self {
        Self {
            antennas: (1..=80).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match self.points {
            0 => Vec::new(),
            1 => vec![self.start],
            n => {
                let step = (self.stop - self.start) / (n - 1) as f64;
                (0..n)
                    .map(|i| {
                        if i == n - 1 {
                            self.stop
                        } else {
                            self.start + step * i as f64
                        }
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Sweep {
    /// Destination x coordinate in metres.
    pub distance: Grid,
    pub rho_db: Grid,
}

impl Default for Sweep {
    fn default() -> Self {
        Self {
            distance: Grid {
                start: 20.0,
                stop: 120.0,
                points: 26,
            },
            rho_db: Grid {
                start: -10.0,
                stop: 40.0,
                points: 26,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Solver {
    /// Relative stopping tolerance of the relay power bisection.
    pub bisection_tol: f64,
    /// Iteration cap of each phase-optimisation run.
    pub gradient_max_iters: usize,
    /// Relative SINR improvement below which phase optimisation stops.
    pub gradient_rel_tol: f64,
    /// Powers above this ceiling (watts) are reported as infeasible.
    pub max_power_w: f64,
}

impl Default for Solver {
    fn default() -> Self {
        Self {
            bisection_tol: 1e-6,
            gradient_max_iters: 1000,
            gradient_rel_tol: 1e-8,
            max_power_w: 1e5,
        }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        let cfg: Config =
            serde_json::from_str(text).map_err(|e| BenchError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |msg: &str| Err(BenchError::Config(msg.to_string()));
        if self.version != SCHEMA_VERSION {
            return Err(BenchError::Config(format!(
                "unsupported config version {} (expected {SCHEMA_VERSION})",
                self.version
            )));
        }
        if !(self.target_rate > 0.0) || !self.target_rate.is_finite() {
            return bad("target_rate must be positive");
        }
        let g = &self.geometry;
        if g.source
            .iter()
            .chain(&g.node)
            .chain(&g.destination)
            .any(|v| !v.is_finite())
        {
            return bad("geometry coordinates must be finite");
        }
        if self.irs.sizes.is_empty() || self.irs.sizes.contains(&0) || self.irs.reference_size == 0
        {
            return bad("IRS sizes must be non-empty and positive");
        }
        if self.relay.antennas.is_empty() || self.relay.antennas.contains(&0) {
            return bad("relay antenna counts must be non-empty and positive");
        }
        for grid in [&self.sweep.distance, &self.sweep.rho_db] {
            if grid.points == 0 || !grid.start.is_finite() || !grid.stop.is_finite() {
                return bad("sweep grids need finite bounds and at least one point");
            }
        }
        if !(self.emi.spread_deg > 0.0) {
            return bad("emi.spread_deg must be positive");
        }
        if self.emi.quadrature_nodes < 4 {
            return bad("emi.quadrature_nodes must be at least 4");
        }
        if !(self.solver.max_power_w > 0.0) {
            return bad("solver.max_power_w must be positive");
        }
        if !(self.solver.bisection_tol > 0.0) || !(self.solver.gradient_rel_tol > 0.0) {
            return bad("solver tolerances must be positive");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_is_the_reference_setup() {
        assert_eq!(
            Config::from_json(r#"{"version": 1}"#).unwrap(),
            Config::default()
        );
        assert_eq!(Config::from_json("{}").unwrap(), Config::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(Config::from_json(r#"{"version": 1, "colour": 3}"#).is_err());
        assert!(Config::from_json(r#"{"emi": {"rho": 3}}"#).is_err());
    }

    #[test]
    fn wrong_version_is_rejected() {
        assert!(Config::from_json(r#"{"version": 2}"#).is_err());
    }

    #[test]
    fn default_grids() {
        let s = Sweep::default();
        let d = s.distance.values();
        assert_eq!(d.len(), 26);
        assert_eq!(d[0], 20.0);
        assert_eq!(d[25], 120.0);
        assert_eq!(d[8], 52.0);
        let r = s.rho_db.values();
        assert_eq!((r[0], r[25], r[14]), (-10.0, 40.0, 18.0));
    }

    #[test]
    fn serialised_default_parses_back() {
        let text = serde_json::to_string_pretty(&Config::default()).unwrap();
        assert_eq!(Config::from_json(&text).unwrap(), Config::default());
    }
}
