//! Static SVG line charts of sweep metrics.

use plotters::prelude::*;
use std::path::Path;

/// Axis label shared by every chart; time is measured in units of the
/// reference decay rate.
pub const TIME_AXIS_LABEL: &str = "Time = δ₁t";

const SERIES_COLORS: &[RGBColor] = &[BLUE, RED, GREEN, MAGENTA, CYAN, BLACK];

/// Render labeled `(t, value)` series to an SVG file. Fails on empty input
/// or an unwritable destination.
pub fn render_plot(
    series: &[(String, Vec<(f64, f64)>)],
    y_label: &str,
    title: &str,
    destination: &Path,
) -> Result<(), Box<dyn std::error::Error>> {
    if series.is_empty() || series.iter().all(|(_, points)| points.is_empty()) {
        return Err("nothing to plot".into());
    }

    let x_max = series
        .iter()
        .flat_map(|(_, pts)| pts.iter().map(|p| p.0))
        .fold(f64::NEG_INFINITY, f64::max);
    let (mut y_min, mut y_max) = series
        .iter()
        .flat_map(|(_, pts)| pts.iter().map(|p| p.1))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !y_min.is_finite() || !y_max.is_finite() {
        return Err("non-finite values in plot data".into());
    }
    if y_max - y_min < 1e-12 {
        y_min -= 1.0;
        y_max += 1.0;
    } else {
        let pad = 0.05 * (y_max - y_min);
        y_min -= pad;
        y_max += pad;
    }

    let root = SVGBackend::new(destination, (900, 600)).into_drawing_area();
    root.fill(&WHITE)?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 24))
        .margin(12)
        .x_label_area_size(44)
        .y_label_area_size(64)
        .build_cartesian_2d(0.0..x_max, y_min..y_max)?;
    chart
        .configure_mesh()
        .x_desc(TIME_AXIS_LABEL)
        .y_desc(y_label)
        .draw()?;

    for (index, (label, points)) in series.iter().enumerate() {
        let color = SERIES_COLORS[index % SERIES_COLORS.len()];
        chart
            .draw_series(LineSeries::new(points.iter().copied(), &color))?
            .label(label.clone())
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 18, y)], color));
    }
    if series.len() > 1 {
        chart
            .configure_series_labels()
            .background_style(WHITE.mix(0.85))
            .border_style(BLACK)
            .draw()?;
    }
    root.present()?;
    Ok(())
}
