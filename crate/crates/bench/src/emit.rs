//! CSV and SVG output. Both formats are byte-stable for identical inputs.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use emilink_core::linalg::CMatrix;

use crate::figures::{Row, SweepResult};
use crate::BenchError;

pub const CSV_HEADER: [&str; 6] = [
    "sweep_var",
    "technology",
    "mode",
    "power_dbm",
    "rate_bps_hz",
    "solver_iters",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Svg => "svg",
        }
    }
}

/// Shortest representation that parses back to the same value; `inf` for
/// infeasible powers.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x}")
    }
}

pub fn write_csv<W: Write>(result: &SweepResult, out: W) -> Result<(), BenchError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &result.rows {
        w.write_record([
            format_f64(r.sweep_var),
            r.technology.clone(),
            r.mode.clone(),
            format_f64(r.power_dbm),
            format_f64(r.rate_bps_hz),
            r.solver_iters.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<Row>, BenchError> {
    let mut rdr = csv::Reader::from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(BenchError::Config(format!(
            "unexpected CSV header {header:?}"
        )));
    }
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|e| BenchError::Config(format!("bad number {s:?}: {e}")))
    };
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        rows.push(Row {
            sweep_var: num(&rec[0])?,
            technology: rec[1].to_string(),
            mode: rec[2].to_string(),
            power_dbm: num(&rec[3])?,
            rate_bps_hz: num(&rec[4])?,
            solver_iters: rec[5]
                .parse()
                .map_err(|e| BenchError::Config(format!("bad iteration count: {e}")))?,
        });
    }
    Ok(rows)
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 220.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

fn curves(result: &SweepResult) -> Vec<(String, Vec<(f64, f64)>)> {
    let mut out: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for r in &result.rows {
        let key = format!("{} {}", r.technology, r.mode);
        let idx = match out.iter().position(|(k, _)| *k == key) {
            Some(i) => i,
            None => {
                out.push((key, Vec::new()));
                out.len() - 1
            }
        };
        out[idx].1.push((r.sweep_var, r.power_dbm));
    }
    out
}

fn span(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values
        .filter(|v| v.is_finite())
        .fold(None, |acc, v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
}

/// Line plot of power (dBm) against the sweep variable, one polyline per
/// technology/mode pair. Infeasible points break the line.
pub fn write_svg<W: Write>(result: &SweepResult, mut out: W) -> Result<(), BenchError> {
    let (x0, mut x1) = span(result.rows.iter().map(|r| r.sweep_var)).unwrap_or((0.0, 1.0));
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    let (ylo, yhi) = span(result.rows.iter().map(|r| r.power_dbm)).unwrap_or((0.0, 1.0));
    let y0 = (ylo / 5.0).floor() * 5.0;
    let mut y1 = (yhi / 5.0).ceil() * 5.0;
    if y1 <= y0 {
        y1 = y0 + 5.0;
    }
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + pw / 2.0,
        result.figure.name()
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );

    let ticks = 5;
    for i in 0..=ticks {
        let t = i as f64 / ticks as f64;
        let xv = x0 + t * (x1 - x0);
        let yv = y0 + t * (y1 - y0);
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(
            s,
            r##"<line x1="{px:.2}" y1="{TOP}" x2="{px:.2}" y2="{:.2}" stroke="#dddddd"/>"##,
            TOP + ph
        );
        let _ = writeln!(
            s,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph + 18.0,
            tick_label(xv)
        );
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#dddddd"/>"##,
            LEFT + pw
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            py + 4.0,
            tick_label(yv)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 18.0,
        result.figure.sweep_label()
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">transmit power [dBm]</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    for (i, (name, points)) in curves(result).iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let dash = if i >= PALETTE.len() {
            r#" stroke-dasharray="6 3""#
        } else {
            ""
        };
        for segment in points.split(|(_, y)| !y.is_finite()) {
            if segment.is_empty() {
                continue;
            }
            let pts: Vec<String> = segment
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.5"{dash}/>"#,
                pts.join(" ")
            );
        }
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="2"{dash}/>"#,
            lx + 20.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">{name}</text>"#,
            lx + 26.0,
            ly + 4.0
        );
    }
    s.push_str("</svg>\n");
    out.write_all(s.as_bytes())?;
    Ok(())
}

fn tick_label(v: f64) -> String {
    let r = (v * 100.0).round() / 100.0;
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

/// Writes `result` to `path` in the requested format.
pub fn emit(result: &SweepResult, format: Format, path: &Path) -> Result<(), BenchError> {
    if result.rows.is_empty() {
        return Err(BenchError::EmptyResult);
    }
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    match format {
        Format::Csv => write_csv(result, file),
        Format::Svg => write_svg(result, file),
    }
}

/// `re+imj` with shortest round-trip components.
pub fn format_complex(re: f64, im: f64) -> String {
    let sign = if im.is_sign_negative() && im != 0.0 {
        '-'
    } else {
        '+'
    };
    format!("{}{sign}{}j", format_f64(re), format_f64(im.abs()))
}

/// Row-major matrix dump, one matrix row per line.
pub fn write_matrix_csv<W: Write>(matrix: &CMatrix<f64>, mut out: W) -> Result<(), BenchError> {
    let n = matrix.dim();
    let mut s = String::new();
    for i in 0..n {
        let line: Vec<String> = (0..n)
            .map(|j| format_complex(matrix[(i, j)].re, matrix[(i, j)].im))
            .collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}
