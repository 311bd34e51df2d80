use std::path::Path;
use std::process::{Command, Output};

fn emilink(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_emilink"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("scenario.json");
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn csv_has_documented_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = emilink(&["fig4"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = std::fs::read_to_string(dir.path().join("fig4.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("sweep_var,technology,mode,power_dbm,rate_bps_hz,solver_iters")
    );
    assert_eq!(lines.count(), 2 * 26);
}

#[test]
fn svg_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = emilink(&["fig4", "--format", "svg"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = std::fs::read_to_string(dir.path().join("fig4.svg")).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("<polyline").count(), 2);
}

#[test]
fn unreachable_target_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"version": 1, "target_rate": 40, "sweep": {"rho_db": {"start": 0, "stop": 10, "points": 3}}}"#,
    );
    let out = emilink(&["fig4", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let text = std::fs::read_to_string(dir.path().join("fig4.csv")).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains(",inf,0,0")).count(), 6);
}

#[test]
fn bad_inputs_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"version": 1, "target": 6}"#);
    assert_eq!(
        emilink(&["fig4", "--config", &cfg], dir.path())
            .status
            .code(),
        Some(1)
    );
    let cfg = write_config(dir.path(), r#"{"version": 7}"#);
    assert_eq!(
        emilink(&["fig4", "--config", &cfg], dir.path())
            .status
            .code(),
        Some(1)
    );
    assert_eq!(emilink(&["fig9"], dir.path()).status.code(), Some(1));
    assert_eq!(
        emilink(&["fig4", "--config", "/nonexistent/x.json"], dir.path())
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn dump_corr_writes_square_complex_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"version": 1, "irs": {"sizes": [6], "reference_size": 6}, "sweep": {"rho_db": {"start": 0, "stop": 0, "points": 1}}}"#,
    );
    let out = emilink(&["fig4", "--config", &cfg, "--dump-corr"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = std::fs::read_to_string(dir.path().join("fig4_corr_iso_n6.csv")).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), 6);
        assert_eq!(row[i], "1+0j");
        for cell in row {
            let body = cell.strip_suffix('j').expect("imaginary suffix");
            let split = body[1..]
                .find(['+', '-'])
                .map(|k| k + 1)
                .expect("sign between parts");
            body[..split].parse::<f64>().unwrap();
            body[split + 1..].parse::<f64>().unwrap();
        }
    }
}
