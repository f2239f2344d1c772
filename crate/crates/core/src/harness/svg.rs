//! Worst-case figures: a scatter plot of the dataset with one color/marker
//! combination per found cluster, and a large circle over every erroneous
//! found cluster (one whose regular points match no intended cluster).
//!
//! The circle sits at the gravity center of the detected cluster, so a split
//! intended cluster shows up as overlapping circles and a merged pair as one
//! circle touching two true clusters.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::datagen::LabeledDataset;
use crate::error::Result;
use crate::model::{centroid, sqdist, Clustering};

/// Marker circle drawn over one erroneous found cluster, in data units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorCircle {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

const MARKERS: usize = 5; // circle, square, diamond, triangle, cross

/// Error circles for every erroneous found cluster: centered at the cluster's
/// gravity center (all member points), with the cluster's enclosing radius,
/// clamped from below for visibility on near-singleton clusters.
pub fn error_circles(ld: &LabeledDataset<f64>, clustering: &Clustering<f64>) -> Vec<ErrorCircle> {
    let intended: HashSet<Vec<usize>> = ld.intended_clusters().into_iter().collect();
    let members = clustering.members();
    let mut circles = Vec::new();
    for group in &members {
        if group.is_empty() {
            continue;
        }
        let regular: Vec<usize> = group.iter().copied().filter(|&i| !ld.is_noise(i)).collect();
        if intended.contains(&regular) {
            continue;
        }
        let center =
            centroid(group.iter().map(|&i| ld.dataset.point(i))).expect("non-empty cluster");
        let radius = group
            .iter()
            .map(|&i| sqdist(&ld.dataset.point(i).coords, &center.coords))
            .fold(0.0f64, f64::max)
            .sqrt();
        circles.push(ErrorCircle {
            cx: center.coords[0],
            cy: center.coords[1],
            r: radius.max(0.75 * ld.config.radius),
        });
    }
    circles
}

fn marker(svg: &mut String, shape: usize, x: f64, y: f64, size: f64, color: &str) {
    match shape % MARKERS {
        0 => {
            let _ = write!(
                svg,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="{size:.2}" fill="{color}"/>"#
            );
        }
        1 => {
            let s = size * 1.8;
            let _ = write!(
                svg,
                r#"<rect x="{:.2}" y="{:.2}" width="{s:.2}" height="{s:.2}" fill="{color}"/>"#,
                x - s / 2.0,
                y - s / 2.0
            );
        }
        2 => {
            let s = size * 1.3;
            let _ = write!(
                svg,
                r#"<path d="M {x:.2} {:.2} L {:.2} {y:.2} L {x:.2} {:.2} L {:.2} {y:.2} Z" fill="{color}"/>"#,
                y - s,
                x + s,
                y + s,
                x - s
            );
        }
        3 => {
            let s = size * 1.4;
            let _ = write!(
                svg,
                r#"<path d="M {x:.2} {:.2} L {:.2} {:.2} L {:.2} {:.2} Z" fill="{color}"/>"#,
                y - s,
                x + s,
                y + s,
                x - s,
                y + s
            );
        }
        _ => {
            let s = size;
            let _ = write!(
                svg,
                r#"<path d="M {:.2} {:.2} L {:.2} {:.2} M {:.2} {:.2} L {:.2} {:.2}" stroke="{color}" stroke-width="{:.2}"/>"#,
                x - s,
                y - s,
                x + s,
                y + s,
                x - s,
                y + s,
                x + s,
                y - s,
                s * 0.7
            );
        }
    }
}

/// Builds the complete standalone SVG document for one worst case.
pub fn worst_case_svg(
    ld: &LabeledDataset<f64>,
    clustering: &Clustering<f64>,
    title: &str,
) -> String {
    let pts = ld.dataset.points();
    let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in pts.iter().chain(ld.intended_centers.iter()) {
        min_x = min_x.min(p.coords[0]);
        max_x = max_x.max(p.coords[0]);
        min_y = min_y.min(p.coords[1]);
        max_y = max_y.max(p.coords[1]);
    }
    let pad = 1.5 * ld.config.radius;
    min_x -= pad;
    max_x += pad;
    min_y -= pad;
    max_y += pad;

    let width = 800.0f64;
    let top = 30.0f64; // title strip
    let span_x = (max_x - min_x).max(1e-9);
    let span_y = (max_y - min_y).max(1e-9);
    let scale = (width / span_x).min(width / span_y);
    let height = span_y * scale + top;
    // SVG y grows downward
    let tx = |x: f64| (x - min_x) * scale;
    let ty = |y: f64| (max_y - y) * scale + top;

    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    svg.push_str(r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = write!(
        svg,
        r#"<text x="10" y="20" font-family="sans-serif" font-size="14">{title}</text>"#
    );

    let marker_size = 2.4f64;
    for (j, group) in clustering.members().iter().enumerate() {
        let color = PALETTE[j % PALETTE.len()];
        let shape = (j / PALETTE.len()) % MARKERS;
        for &i in group {
            let p = ld.dataset.point(i);
            marker(
                &mut svg,
                shape,
                tx(p.coords[0]),
                ty(p.coords[1]),
                marker_size,
                color,
            );
        }
    }

    for c in error_circles(ld, clustering) {
        let _ = write!(
            svg,
            r#"<circle class="error" cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="black" stroke-width="2.5"/>"#,
            tx(c.cx),
            ty(c.cy),
            c.r * scale
        );
    }

    svg.push_str("</svg>\n");
    svg
}

/// Renders the worst-case figure to `out_path`.
pub fn render_worst_case(
    ld: &LabeledDataset<f64>,
    clustering: &Clustering<f64>,
    title: &str,
    out_path: &Path,
) -> Result<()> {
    let svg = worst_case_svg(ld, clustering, title);
    std::fs::write(out_path, svg).map_err(|e| {
        crate::error::Error::Io(format!("cannot write {}: {e}", out_path.display()))
    })?;
    Ok(())
}
