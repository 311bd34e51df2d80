//! Invariants that must hold on every row of the reference sweeps.

use std::collections::HashMap;
use std::sync::OnceLock;

use emilink_bench::config::Config;
use emilink_bench::emit::{read_csv, write_csv};
use emilink_bench::figures::{run, Figure, Row, SweepResult};
use emilink_core::scene::{dbm_to_watt, pathloss_umi, LinkBudget};

fn cached(figure: Figure) -> &'static SweepResult {
    static CACHE: OnceLock<HashMap<Figure, SweepResult>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        let cfg = Config::default();
        [
            Figure::Fig3,
            Figure::Fig4,
            Figure::Fig5,
            Figure::Fig6,
            Figure::Fig7,
        ]
        .into_iter()
        .map(|f| (f, run(f, &cfg).unwrap()))
        .collect()
    });
    &cache[&figure]
}

fn fig8() -> &'static SweepResult {
    static FIG8: OnceLock<SweepResult> = OnceLock::new();
    FIG8.get_or_init(|| {
        let mut cfg = Config::default();
        cfg.relay.antennas = vec![1, 2, 4, 9, 16, 25, 36];
        run(Figure::Fig8, &cfg).unwrap()
    })
}

fn curve(result: &SweepResult, tech: &str, mode: &str) -> Vec<f64> {
    let v: Vec<f64> = result.series(tech, mode).map(|r| r.power_dbm).collect();
    assert!(!v.is_empty(), "no rows for {tech} {mode}");
    v
}

fn dominated(better: &[f64], worse: &[f64], slack_db: f64) -> bool {
    better.iter().zip(worse).all(|(b, w)| *b <= w + slack_db)
}

/// dB slack corresponding to stopping the bisection at ε·R̄ above target.
const BISECTION_SLACK_DB: f64 = 10.0 * 2.0 * 1e-6 * 6.0 * std::f64::consts::LOG10_2;

#[test]
fn every_row_reaches_the_target_rate() {
    for result in [
        Figure::Fig3,
        Figure::Fig4,
        Figure::Fig5,
        Figure::Fig6,
        Figure::Fig7,
    ]
    .into_iter()
    .map(cached)
    .chain([fig8()])
    {
        for r in &result.rows {
            assert!(r.is_feasible(), "{r:?}");
            let tol = if r.mode.ends_with("/optimized") && r.technology.starts_with("df") {
                1e-6
            } else {
                1e-10
            };
            assert!(r.rate_bps_hz >= 6.0 * (1.0 - 1e-12), "{r:?}");
            assert!((r.rate_bps_hz - 6.0) / 6.0 <= tol, "{r:?}");
        }
    }
}

#[test]
fn emi_free_surface_rows_match_coherent_closed_form() {
    // Aligned phases give |cascade| = N·√(β_sr β_rd).
    let budget = LinkBudget::<f64>::reference();
    let result = cached(Figure::Fig3);
    let beta_sr = pathloss_umi(3700f64.sqrt(), &budget).unwrap();
    for n in [50usize, 75, 100] {
        for r in result.series(&format!("irs-n{n}"), "none/heuristic") {
            let beta_rd =
                pathloss_umi(((r.sweep_var - 60.0).powi(2) + 100.0).sqrt(), &budget).unwrap();
            let watts = 63.0 * budget.noise_power / ((n * n) as f64 * beta_sr * beta_rd);
            assert!(
                (dbm_to_watt(r.power_dbm) / watts - 1.0).abs() < 1e-9,
                "{r:?}"
            );
        }
    }
}

#[test]
fn reference_link_budget_golden_values() {
    let at60: Vec<&Row> = cached(Figure::Fig3)
        .rows
        .iter()
        .filter(|r| r.sweep_var == 60.0)
        .collect();
    let get = |tech: &str, mode: &str| {
        at60.iter()
            .find(|r| r.technology == tech && r.mode == mode)
            .unwrap()
            .power_dbm
    };
    assert!((get("df", "none/repetition") - 10.985924028949409).abs() < 1e-9);
    assert!((get("df", "iso/repetition") - 35.91885294842741).abs() < 1e-9);
    let gap50 = get("irs-n50", "iso/heuristic") - get("irs-n50", "none/heuristic");
    assert!(
        gap50 < 3.0 && (gap50 - 0.5314723034802717).abs() < 1e-9,
        "{gap50}"
    );
}

#[test]
fn relay_emi_penalty_is_large_everywhere() {
    let r = cached(Figure::Fig3);
    let penalty: Vec<f64> = curve(r, "df", "iso/repetition")
        .iter()
        .zip(curve(r, "df", "none/repetition"))
        .map(|(a, b)| a - b)
        .collect();
    assert!(penalty.iter().all(|p| *p > 15.0), "{penalty:?}");
}

#[test]
fn powers_grow_with_emi_strength() {
    for (fig, irs_mode, df_mode) in [
        (Figure::Fig4, "iso/heuristic", "iso/repetition"),
        (Figure::Fig5, "iso/optimized", "iso/optimized"),
    ] {
        let r = cached(fig);
        for c in [curve(r, "irs-n75", irs_mode), curve(r, "df", df_mode)] {
            assert!(
                c.windows(2).all(|w| w[1] >= w[0] - BISECTION_SLACK_DB),
                "{fig:?} {c:?}"
            );
        }
    }
}

#[test]
fn optimisation_never_hurts() {
    let r = cached(Figure::Fig6);
    for n in [50, 75, 100] {
        let tech = format!("irs-n{n}");
        let opt = curve(r, &tech, "iso/optimized");
        let heur = curve(r, &tech, "iso/heuristic");
        assert!(dominated(&opt, &heur, 1e-9));
        if n == 75 {
            assert!(heur.iter().zip(&opt).all(|(h, o)| h - o < 2.0));
        }
    }
    let df_opt = curve(r, "df", "iso/optimized");
    let df_rep = curve(r, "df", "iso/repetition");
    assert!(dominated(&df_opt, &df_rep, BISECTION_SLACK_DB));

    let irs_gain: Vec<f64> = curve(r, "irs-n75", "iso/heuristic")
        .iter()
        .zip(curve(r, "irs-n75", "iso/optimized"))
        .map(|(h, o)| h - o)
        .collect();
    for ((rep, opt), gain) in df_rep.iter().zip(&df_opt).zip(&irs_gain) {
        assert!(
            rep - opt > *gain,
            "relay gain {} vs surface gain {gain}",
            rep - opt
        );
    }
}

#[test]
fn emi_direction_matters() {
    let r = cached(Figure::Fig7);
    for method in ["heuristic", "optimized"] {
        let case1 = curve(r, "irs-n75", &format!("case1/{method}"));
        let case2 = curve(r, "irs-n75", &format!("case2/{method}"));
        let none = curve(r, "irs-n75", &format!("none/{method}"));
        assert!(dominated(&case2, &case1, 0.0));
        assert!(case2.iter().zip(&none).all(|(c, n)| (c - n).abs() < 3.0));
        assert!(dominated(&none, &case2, 1e-9));
    }
}

#[test]
fn mmse_relay_needs_no_more_power_than_mr() {
    let r = fig8();
    for kind in ["iso", "case2"] {
        let mode = format!("{kind}/optimized");
        let mmse = curve(r, "df-mmse", &mode);
        let mr = curve(r, "df-mr", &mode);
        assert!(
            dominated(&mmse, &mr, BISECTION_SLACK_DB),
            "{kind}: {mmse:?} vs {mr:?}"
        );
        assert!(mmse.windows(2).all(|w| w[1] <= w[0] + BISECTION_SLACK_DB));
    }
}

#[test]
fn csv_round_trip_and_determinism() {
    let mut a = Vec::new();
    write_csv(cached(Figure::Fig7), &mut a).unwrap();
    assert_eq!(read_csv(a.as_slice()).unwrap(), cached(Figure::Fig7).rows);
    let again = run(Figure::Fig7, &Config::default()).unwrap();
    let mut b = Vec::new();
    write_csv(&again, &mut b).unwrap();
    assert_eq!(a, b);
}
