//! The six sweeps. Each sweep point is computed independently (in parallel)
//! and rows are emitted in sweep order.

use emilink_core::irs::{
    irs_min_power_emi_aware, irs_rate, irs_required_power, phases_noise_only, GradientOptions,
    IrsLink,
};
use emilink_core::linalg::CMatrix;
use emilink_core::relay::{
    df_min_power_with, repetition_split, CombinerKind, EffectiveGains, InnerOptions,
};
use emilink_core::scene::{watt_to_dbm, Vec3};
use rayon::prelude::*;

use crate::config::Config;
use crate::scenario::{EmiKind, Scenario};
use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Figure {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
}

impl Figure {
    pub const ALL: [Figure; 6] = [
        Figure::Fig3,
        Figure::Fig4,
        Figure::Fig5,
        Figure::Fig6,
        Figure::Fig7,
        Figure::Fig8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
            Figure::Fig8 => "fig8",
        }
    }

    /// Name and unit of the swept quantity.
    pub fn sweep_label(self) -> &'static str {
        match self {
            Figure::Fig3 | Figure::Fig6 | Figure::Fig7 => "destination x [m]",
            Figure::Fig4 | Figure::Fig5 => "EMI-to-noise ratio [dB]",
            Figure::Fig8 => "relay antennas",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub sweep_var: f64,
    pub technology: String,
    pub mode: String,
    /// `+∞` marks an infeasible point.
    pub power_dbm: f64,
    pub rate_bps_hz: f64,
    pub solver_iters: usize,
}

impl Row {
    pub fn is_feasible(&self) -> bool {
        self.power_dbm.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub figure: Figure,
    pub rows: Vec<Row>,
}

impl SweepResult {
    pub fn all_infeasible(&self) -> bool {
        self.rows.iter().all(|r| !r.is_feasible())
    }

    /// Rows of one curve, in sweep order.
    pub fn series<'a>(
        &'a self,
        technology: &'a str,
        mode: &'a str,
    ) -> impl Iterator<Item = &'a Row> + 'a {
        self.rows
            .iter()
            .filter(move |r| r.technology == technology && r.mode == mode)
    }
}

#[derive(Debug, Clone, Copy)]
struct Solved {
    watts: f64,
    rate: f64,
    iters: usize,
}

fn row(
    sweep_var: f64,
    technology: &str,
    mode: String,
    solved: Result<Solved, BenchError>,
) -> Result<Row, BenchError> {
    match solved {
        Ok(s) => Ok(Row {
            sweep_var,
            technology: technology.to_string(),
            mode,
            power_dbm: watt_to_dbm(s.watts),
            rate_bps_hz: s.rate,
            solver_iters: s.iters,
        }),
        Err(e) if e.is_infeasible() => Ok(Row {
            sweep_var,
            technology: technology.to_string(),
            mode,
            power_dbm: f64::INFINITY,
            rate_bps_hz: 0.0,
            solver_iters: 0,
        }),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Method {
    Heuristic,
    Repetition,
    Optimized,
}

impl Method {
    fn label(self) -> &'static str {
        match self {
            Method::Heuristic => "heuristic",
            Method::Repetition => "repetition",
            Method::Optimized => "optimized",
        }
    }
}

fn mode(kind: EmiKind, method: Method) -> String {
    format!("{}/{}", kind.label(), method.label())
}

struct Runner {
    scenario: Scenario,
    cfg: Config,
}

impl Runner {
    fn gradient(&self) -> GradientOptions<f64> {
        GradientOptions {
            max_iters: self.cfg.solver.gradient_max_iters,
            rel_tol: self.cfg.solver.gradient_rel_tol,
            ..GradientOptions::default()
        }
    }

    fn capped(&self, solved: Solved) -> Result<Solved, BenchError> {
        let cap = self.cfg.solver.max_power_w;
        if solved.watts > cap {
            return Err(emilink_core::Error::Infeasible(format!(
                "{} W exceeds the {cap} W ceiling",
                solved.watts
            ))
            .into());
        }
        Ok(solved)
    }

    fn irs(&self, link: &IrsLink<f64>, method: Method) -> Result<Solved, BenchError> {
        self.irs_uncapped(link, method).and_then(|s| self.capped(s))
    }

    fn irs_uncapped(&self, link: &IrsLink<f64>, method: Method) -> Result<Solved, BenchError> {
        let r = self.scenario.target_rate;
        match method {
            Method::Optimized => {
                let sol = irs_min_power_emi_aware(r, link, &self.gradient())?;
                Ok(Solved {
                    watts: sol.power,
                    rate: irs_rate(sol.power, link, &sol.phases)?,
                    iters: sol.power_history.len() - 1,
                })
            }
            _ => {
                let phases = phases_noise_only(&link.h_sr, &link.h_rd)?;
                let watts = irs_required_power(r, link, &phases)?;
                Ok(Solved {
                    watts,
                    rate: irs_rate(watts, link, &phases)?,
                    iters: 0,
                })
            }
        }
    }

    fn df(
        &self,
        gains: Result<EffectiveGains<f64>, BenchError>,
        method: Method,
    ) -> Result<Solved, BenchError> {
        self.df_uncapped(gains?, method)
            .and_then(|s| self.capped(s))
    }

    fn df_uncapped(
        &self,
        gains: EffectiveGains<f64>,
        method: Method,
    ) -> Result<Solved, BenchError> {
        let r = self.scenario.target_rate;
        match method {
            Method::Optimized => {
                let sol = df_min_power_with(
                    r,
                    &gains,
                    self.cfg.solver.bisection_tol,
                    &InnerOptions::default(),
                )?;
                Ok(Solved {
                    watts: sol.average_power,
                    rate: sol.achieved_rate,
                    iters: sol.iterations,
                })
            }
            _ => {
                let sol = repetition_split(r, &gains)?;
                Ok(Solved {
                    watts: sol.average_power,
                    rate: sol.achieved_rate,
                    iters: 0,
                })
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn irs_row(
        &self,
        x: f64,
        n: usize,
        destination: Vec3<f64>,
        kind: EmiKind,
        rho_db: f64,
        corr: &CMatrix<f64>,
        method: Method,
    ) -> Result<Row, BenchError> {
        let solved = self
            .scenario
            .irs_link_with(n, destination, kind, rho_db, corr.clone())
            .and_then(|link| self.irs(&link, method));
        row(x, &format!("irs-n{n}"), mode(kind, method), solved)
    }

    fn df_single_row(
        &self,
        x: f64,
        destination: Vec3<f64>,
        kind: EmiKind,
        rho_db: f64,
        method: Method,
    ) -> Result<Row, BenchError> {
        let gains = self.scenario.relay_gains_single(destination, kind, rho_db);
        row(x, "df", mode(kind, method), self.df(gains, method))
    }

    fn correlations(
        &self,
        kind: EmiKind,
        sizes: &[usize],
        destination: Vec3<f64>,
    ) -> Result<Vec<CMatrix<f64>>, BenchError> {
        sizes
            .par_iter()
            .map(|&n| self.scenario.correlation(kind, n, destination))
            .collect()
    }
}

fn sweep<F>(values: &[f64], point: F) -> Result<Vec<Row>, BenchError>
where
    F: Fn(f64) -> Result<Vec<Row>, BenchError> + Sync,
{
    let chunks: Vec<Vec<Row>> = values
        .par_iter()
        .map(|&x| point(x))
        .collect::<Result<_, _>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

pub fn run(figure: Figure, cfg: &Config) -> Result<SweepResult, BenchError> {
    cfg.validate()?;
    let runner = Runner {
        scenario: Scenario::from_config(cfg)?,
        cfg: cfg.clone(),
    };
    let rows = match figure {
        Figure::Fig3 => fig3(&runner)?,
        Figure::Fig4 => fig45(&runner, Method::Heuristic, Method::Repetition)?,
        Figure::Fig5 => fig45(&runner, Method::Optimized, Method::Optimized)?,
        Figure::Fig6 => fig6(&runner)?,
        Figure::Fig7 => fig7(&runner)?,
        Figure::Fig8 => fig8(&runner)?,
    };
    Ok(SweepResult { figure, rows })
}

pub fn run_fig3(cfg: &Config) -> Result<SweepResult, BenchError> {
    run(Figure::Fig3, cfg)
}

pub fn run_fig4(cfg: &Config) -> Result<SweepResult, BenchError> {
    run(Figure::Fig4, cfg)
}

pub fn run_fig5(cfg: &Config) -> Result<SweepResult, BenchError> {
    run(Figure::Fig5, cfg)
}

pub fn run_fig6(cfg: &Config) -> Result<SweepResult, BenchError> {
    run(Figure::Fig6, cfg)
}

pub fn run_fig7(cfg: &Config) -> Result<SweepResult, BenchError> {
    run(Figure::Fig7, cfg)
}

pub fn run_fig8(cfg: &Config) -> Result<SweepResult, BenchError> {
    run(Figure::Fig8, cfg)
}

fn fig3(run: &Runner) -> Result<Vec<Row>, BenchError> {
    let s = &run.scenario;
    let sizes = &run.cfg.irs.sizes;
    let identity: Vec<CMatrix<f64>> = sizes.iter().map(|&n| CMatrix::identity(n)).collect();
    let iso = run.correlations(EmiKind::Isotropic, sizes, s.destination)?;
    sweep(&run.cfg.sweep.distance.values(), |x| {
        let dest = s.destination_at(x);
        let mut rows = Vec::new();
        for (i, &n) in sizes.iter().enumerate() {
            rows.push(run.irs_row(
                x,
                n,
                dest,
                EmiKind::None,
                s.rho_db,
                &identity[i],
                Method::Heuristic,
            )?);
            rows.push(run.irs_row(
                x,
                n,
                dest,
                EmiKind::Isotropic,
                s.rho_db,
                &iso[i],
                Method::Heuristic,
            )?);
        }
        for kind in [EmiKind::None, EmiKind::Isotropic] {
            rows.push(run.df_single_row(x, dest, kind, s.rho_db, Method::Repetition)?);
        }
        Ok(rows)
    })
}

fn fig45(run: &Runner, irs: Method, df: Method) -> Result<Vec<Row>, BenchError> {
    let s = &run.scenario;
    let n = run.cfg.irs.reference_size;
    let dest = s.destination;
    let iso = s.correlation(EmiKind::Isotropic, n, dest)?;
    sweep(&run.cfg.sweep.rho_db.values(), |rho| {
        Ok(vec![
            run.irs_row(rho, n, dest, EmiKind::Isotropic, rho, &iso, irs)?,
            run.df_single_row(rho, dest, EmiKind::Isotropic, rho, df)?,
        ])
    })
}

fn fig6(run: &Runner) -> Result<Vec<Row>, BenchError> {
    let s = &run.scenario;
    let sizes = &run.cfg.irs.sizes;
    let iso = run.correlations(EmiKind::Isotropic, sizes, s.destination)?;
    sweep(&run.cfg.sweep.distance.values(), |x| {
        let dest = s.destination_at(x);
        let mut rows = Vec::new();
        for (i, &n) in sizes.iter().enumerate() {
            for method in [Method::Heuristic, Method::Optimized] {
                rows.push(run.irs_row(
                    x,
                    n,
                    dest,
                    EmiKind::Isotropic,
                    s.rho_db,
                    &iso[i],
                    method,
                )?);
            }
        }
        for method in [Method::Repetition, Method::Optimized] {
            rows.push(run.df_single_row(x, dest, EmiKind::Isotropic, s.rho_db, method)?);
        }
        Ok(rows)
    })
}

fn fig7(run: &Runner) -> Result<Vec<Row>, BenchError> {
    let s = &run.scenario;
    let n = run.cfg.irs.reference_size;
    let identity = CMatrix::identity(n);
    let iso = s.correlation(EmiKind::Isotropic, n, s.destination)?;
    let case1 = s.correlation(EmiKind::Case1, n, s.destination)?;
    sweep(&run.cfg.sweep.distance.values(), |x| {
        let dest = s.destination_at(x);
        let case2 = s.correlation(EmiKind::Case2, n, dest)?;
        let mut rows = Vec::new();
        for (kind, corr) in [
            (EmiKind::None, &identity),
            (EmiKind::Isotropic, &iso),
            (EmiKind::Case1, &case1),
            (EmiKind::Case2, &case2),
        ] {
            for method in [Method::Heuristic, Method::Optimized] {
                rows.push(run.irs_row(x, n, dest, kind, s.rho_db, corr, method)?);
            }
        }
        Ok(rows)
    })
}

fn fig8(run: &Runner) -> Result<Vec<Row>, BenchError> {
    let s = &run.scenario;
    let n = run.cfg.irs.reference_size;
    let dest = s.destination;
    let kinds = [EmiKind::Isotropic, EmiKind::Case2];
    let mut irs_reference = Vec::new();
    for kind in kinds {
        let corr = s.correlation(kind, n, dest)?;
        let link = s.irs_link_with(n, dest, kind, s.rho_db, corr)?;
        irs_reference.push(match run.irs(&link, Method::Optimized) {
            Ok(solved) => Some(solved),
            Err(e) if e.is_infeasible() => None,
            Err(e) => return Err(e),
        });
    }
    let antennas: Vec<f64> = run.cfg.relay.antennas.iter().map(|&m| m as f64).collect();
    sweep(&antennas, |x| {
        let m = x as usize;
        let mut rows = Vec::new();
        for (kind, reference) in kinds.iter().zip(&irs_reference) {
            let corr = s.correlation(*kind, m, dest)?;
            for (tech, combiner) in [("df-mr", CombinerKind::Mr), ("df-mmse", CombinerKind::Mmse)] {
                let gains = s.relay_gains_array(m, dest, *kind, s.rho_db, combiner, &corr);
                rows.push(row(
                    x,
                    tech,
                    mode(*kind, Method::Optimized),
                    run.df(gains, Method::Optimized),
                )?);
            }
            let reference = reference.ok_or_else(|| {
                emilink_core::Error::Infeasible("IRS reference unreachable".into()).into()
            });
            rows.push(row(
                x,
                &format!("irs-n{n}"),
                mode(*kind, Method::Optimized),
                reference,
            )?);
        }
        Ok(rows)
    })
}

/// Correlation matrices behind a figure, labelled for `--dump-corr`.
pub fn correlations_for(
    figure: Figure,
    cfg: &Config,
) -> Result<Vec<(String, CMatrix<f64>)>, BenchError> {
    cfg.validate()?;
    let s = Scenario::from_config(cfg)?;
    let dest = s.destination;
    let n = cfg.irs.reference_size;
    let mut out = Vec::new();
    match figure {
        Figure::Fig3 | Figure::Fig6 => {
            for &size in &cfg.irs.sizes {
                out.push((
                    format!("iso_n{size}"),
                    s.correlation(EmiKind::Isotropic, size, dest)?,
                ));
            }
        }
        Figure::Fig4 | Figure::Fig5 => {
            out.push((
                format!("iso_n{n}"),
                s.correlation(EmiKind::Isotropic, n, dest)?,
            ));
        }
        Figure::Fig7 => {
            for kind in [EmiKind::Isotropic, EmiKind::Case1, EmiKind::Case2] {
                out.push((
                    format!("{}_n{n}", kind.label()),
                    s.correlation(kind, n, dest)?,
                ));
            }
        }
        Figure::Fig8 => {
            let m = cfg.relay.antennas.iter().copied().max().unwrap_or(1);
            for kind in [EmiKind::Isotropic, EmiKind::Case2] {
                out.push((
                    format!("{}_n{n}", kind.label()),
                    s.correlation(kind, n, dest)?,
                ));
                out.push((
                    format!("{}_m{m}", kind.label()),
                    s.correlation(kind, m, dest)?,
                ));
            }
        }
    }
    Ok(out)
}
