//! CSV traces and the SVG plots drawn from them.
//!
//! Numbers are written in Rust's shortest round-trip scientific form, so a
//! CSV parses back to the exact values and two runs with the same inputs
//! produce the same bytes.

use plotters::prelude::*;

use crate::error::{CliError, Result};
use crate::report::TraceRow;

pub fn csv_header(dim: usize) -> Vec<String> {
    let mut h: Vec<String> = ["t", "norm_sq", "F", "trK", "residual"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    h.extend((1..=dim).map(|i| format!("eig_{i}")));
    h
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

/// The trace as CSV bytes: header `t,norm_sq,F,trK,residual,eig_1,…,eig_n`,
/// one row per sample, an empty `F` where it is undefined.
pub fn trace_csv(rows: &[TraceRow], dim: usize) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(csv_header(dim))?;
    for r in rows {
        if r.spectrum.len() != dim {
            return Err(CliError::Emit(format!(
                "trace row at t = {} has {} eigenvalues, expected {dim}",
                r.t,
                r.spectrum.len()
            )));
        }
        let mut rec = vec![
            num(r.t),
            num(r.norm_sq),
            r.f.map(num).unwrap_or_default(),
            num(r.tr_k),
            num(r.residual),
        ];
        rec.extend(r.spectrum.iter().copied().map(num));
        w.write_record(&rec)?;
    }
    w.into_inner()
        .map_err(|e| CliError::Emit(format!("flushing csv: {e}")))
}

/// Columns needed for the plots, read back from CSV bytes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlotColumns {
    pub t: Vec<f64>,
    pub norm_sq: Vec<f64>,
    pub f: Vec<Option<f64>>,
    pub residual: Vec<f64>,
}

pub fn read_plot_columns(csv_bytes: &[u8]) -> Result<PlotColumns> {
    let mut r = csv::Reader::from_reader(csv_bytes);
    let headers = r.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Plot(format!("csv has no `{name}` column")))
    };
    let (it, inorm, i_f, ires) = (col("t")?, col("norm_sq")?, col("F")?, col("residual")?);
    let parse = |s: &str, name: &str| {
        s.parse::<f64>()
            .map_err(|e| CliError::Plot(format!("bad `{name}` value {s:?}: {e}")))
    };
    let mut out = PlotColumns::default();
    for rec in r.records() {
        let rec = rec?;
        out.t.push(parse(&rec[it], "t")?);
        out.norm_sq.push(parse(&rec[inorm], "norm_sq")?);
        out.f.push(match &rec[i_f] {
            "" => None,
            s => Some(parse(s, "F")?),
        });
        out.residual.push(parse(&rec[ires], "residual")?);
    }
    Ok(out)
}

/// `(file name, SVG text)` for ‖μ‖² against t on log-log axes with a `t⁻¹`
/// reference line, F against t, and the fixed-point residual against t.
pub fn plots_from_csv(csv_bytes: &[u8]) -> Result<Vec<(&'static str, String)>> {
    let c = read_plot_columns(csv_bytes)?;
    let log_pts = |ys: &[f64]| -> Vec<(f64, f64)> {
        c.t.iter()
            .zip(ys)
            .filter(|(t, y)| **t > 0.0 && **y > 0.0)
            .map(|(t, y)| (t.log10(), y.log10()))
            .collect()
    };
    let norm = log_pts(&c.norm_sq);
    // C/t through the last sample.
    let reference: Vec<(f64, f64)> = match norm.last() {
        Some(&(lt, ly)) => norm.iter().map(|&(x, _)| (x, ly + lt - x)).collect(),
        None => Vec::new(),
    };
    let f_pts: Vec<(f64, f64)> = c
        .t
        .iter()
        .zip(&c.f)
        .filter_map(|(t, f)| (*t > 0.0).then_some(()).and(f.map(|f| (t.log10(), f))))
        .collect();
    let res = log_pts(&c.residual);
    Ok(vec![
        (
            "norm_sq.svg",
            line_chart(
                "squared bracket norm",
                "log10 t",
                "log10 |mu|^2",
                &[("|mu|^2", &norm, BLUE), ("C / t", &reference, RED)],
            )?,
        ),
        ("F.svg", line_chart("F = |K|^2 / |mu|^4", "log10 t", "F", &[("F", &f_pts, BLUE)])?),
        (
            "residual.svg",
            line_chart(
                "fixed-point residual",
                "log10 t",
                "log10 residual",
                &[("residual", &res, BLUE)],
            )?,
        ),
    ])
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5 * lo.abs().max(1.0) };
    (lo - pad, hi + pad)
}

/// Label, points, color.
type Series<'a> = (&'a str, &'a [(f64, f64)], RGBColor);

fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> Result<String> {
    let plot_err = |e: &dyn std::fmt::Display| CliError::Plot(e.to_string());
    let all = || series.iter().flat_map(|s| s.1.iter());
    let (x0, x1) = span(all().map(|p| p.0));
    let (y0, y1) = span(all().map(|p| p.1));
    let mut svg = String::new();
    {
        let root = SVGBackend::with_string(&mut svg, (720, 480)).into_drawing_area();
        root.fill(&WHITE).map_err(|e| plot_err(&e))?;
        let mut chart = ChartBuilder::on(&root)
            .caption(title, ("sans-serif", 20))
            .margin(12)
            .x_label_area_size(40)
            .y_label_area_size(70)
            .build_cartesian_2d(x0..x1, y0..y1)
            .map_err(|e| plot_err(&e))?;
        chart
            .configure_mesh()
            .x_desc(x_label)
            .y_desc(y_label)
            .draw()
            .map_err(|e| plot_err(&e))?;
        for &(label, pts, color) in series {
            chart
                .draw_series(LineSeries::new(pts.iter().copied(), color.stroke_width(2)))
                .map_err(|e| plot_err(&e))?
                .label(label)
                .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 18, y)], color));
        }
        chart
            .configure_series_labels()
            .background_style(WHITE.mix(0.8))
            .border_style(BLACK)
            .draw()
            .map_err(|e| plot_err(&e))?;
        root.present().map_err(|e| plot_err(&e))?;
    }
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(t: f64, y: f64) -> TraceRow {
        TraceRow {
            t,
            norm_sq: y,
            f: Some(0.5),
            tr_k: 0.5 * y,
            residual: 1e-3 / (1.0 + t),
            spectrum: vec![0.0, 0.0, 0.5 * y],
        }
    }

    #[test]
    fn header_is_exact() {
        let bytes = trace_csv(&[], 3).unwrap();
        assert_eq!(String::from_utf8(bytes).unwrap(), "t,norm_sq,F,trK,residual,eig_1,eig_2,eig_3\n");
    }

    #[test]
    fn values_round_trip_through_csv() {
        let rows: Vec<_> = (0..5).map(|i| row(i as f64 * 0.3, 1.0 / (1.0 + i as f64 * 0.3))).collect();
        let bytes = trace_csv(&rows, 3).unwrap();
        let cols = read_plot_columns(&bytes).unwrap();
        for (r, (t, y)) in rows.iter().zip(cols.t.iter().zip(&cols.norm_sq)) {
            assert_eq!(r.t.to_bits(), t.to_bits());
            assert_eq!(r.norm_sq.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn undefined_f_is_an_empty_field() {
        let mut r = row(1.0, 0.0);
        r.f = None;
        let text = String::from_utf8(trace_csv(&[r], 3).unwrap()).unwrap();
        assert!(text.lines().nth(1).unwrap().starts_with("1e0,0e0,,"));
        assert_eq!(read_plot_columns(text.as_bytes()).unwrap().f, vec![None]);
    }

    #[test]
    fn plots_render_including_empty_traces() {
        let rows: Vec<_> = (0..20).map(|i| row(i as f64, 1.0 / (1.0 + i as f64))).collect();
        for bytes in [trace_csv(&rows, 3).unwrap(), trace_csv(&[], 3).unwrap()] {
            let plots = plots_from_csv(&bytes).unwrap();
            assert_eq!(plots.len(), 3);
            for (_, svg) in plots {
                assert!(svg.starts_with("<svg"));
            }
        }
    }
}
