//! Deterministic text artifacts: JSON reports, CSV tables and SVG plots.

use std::fmt::Write as _;

use serde::Serialize;

use crate::eight::OrbitStep;
use crate::error::{domain, Error, Result};
use crate::infimax::DeviationProfile;
use crate::pipeline::{PlateauList, RotsetReport};
use crate::polytope::{Point, RatPolygon};
use crate::rational::{fmt_rational, int, to_f64};

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn report_json(report: &RotsetReport) -> Result<String> {
    to_json(report)
}

/// Vertex table of a report: `polygon,index,x,y`.
pub fn report_csv(report: &RotsetReport) -> String {
    let mut out = String::from("polygon,index,x,y\n");
    for (name, poly) in [("outer", &report.outer), ("inner", &report.inner)] {
        for (i, v) in poly.vertices().iter().enumerate() {
            let _ = writeln!(
                out,
                "{name},{i},{},{}",
                fmt_rational(&v.x),
                fmt_rational(&v.y)
            );
        }
    }
    out
}

pub fn scan_csv(list: &PlateauList) -> String {
    let mut out = String::from("t,plateau_id,n_vertices,closed\n");
    for p in &list.points {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_rational(&p.t),
            p.plateau_id,
            p.n_vertices,
            p.closed
        );
    }
    out
}

pub fn deviation_csv(profile: &DeviationProfile) -> String {
    let mut out = String::from("r,dev,max_dev\n");
    for s in &profile.samples {
        let _ = writeln!(out, "{},{:.6},{:.6}", s.r, s.dev, s.max_dev);
    }
    out
}

pub fn orbit_csv(steps: &[OrbitStep]) -> String {
    let mut out = String::from("step,circle,pos,gamma_x,gamma_y\n");
    for s in steps {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            s.step,
            s.point.circle(),
            fmt_rational(s.point.pos()),
            s.gamma.0,
            s.gamma.1
        );
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stroke {
    Solid,
    Dashed,
}

#[derive(Clone, Debug)]
pub struct Overlay {
    pub polygon: RatPolygon,
    pub stroke: Stroke,
    pub color: String,
    pub fill: Option<String>,
    pub label_vertices: bool,
}

/// Plot window and canvas for [`render_svg`].
#[derive(Clone, Debug)]
pub struct RenderSpec {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub width: u32,
    pub height: u32,
    pub overlays: Vec<Overlay>,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            x_range: (-0.05, 1.05),
            y_range: (-0.05, 0.6),
            width: 800,
            height: 480,
            overlays: Vec::new(),
        }
    }
}

impl RenderSpec {
    /// Outer polygon solid and shaded, inner dashed, both labelled.
    pub fn for_report(report: &RotsetReport) -> Self {
        let mut spec = Self::default();
        spec.overlays.push(Overlay {
            polygon: report.outer.clone(),
            stroke: Stroke::Solid,
            color: "#1f4e79".into(),
            fill: Some("#dce9f5".into()),
            label_vertices: true,
        });
        spec.overlays.push(Overlay {
            polygon: report.inner.clone(),
            stroke: Stroke::Dashed,
            color: "#b03a2e".into(),
            fill: None,
            label_vertices: !report.closed,
        });
        spec
    }

    fn map(&self, p: &Point) -> (f64, f64) {
        let (x0, x1) = self.x_range;
        let (y0, y1) = self.y_range;
        let x = (to_f64(&p.x) - x0) / (x1 - x0) * self.width as f64;
        let y = self.height as f64 - (to_f64(&p.y) - y0) / (y1 - y0) * self.height as f64;
        (x, y)
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    // Avoid "-0.000000".
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        "0.000000".into()
    } else {
        s
    }
}

pub fn render_svg(spec: &RenderSpec) -> Result<String> {
    let (x0, x1) = spec.x_range;
    let (y0, y1) = spec.y_range;
    if !(x1 > x0 && y1 > y0) || spec.width == 0 || spec.height == 0 {
        return domain("render bounds must be nondegenerate");
    }
    let (w, h) = (spec.width, spec.height);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let origin = spec.map(&Point::new(int(0), int(0)));
    let _ = writeln!(
        out,
        "<line x1=\"0\" y1=\"{y}\" x2=\"{w}\" y2=\"{y}\" stroke=\"#999\" stroke-width=\"0.5\"/>\n\
         <line x1=\"{x}\" y1=\"0\" x2=\"{x}\" y2=\"{h}\" stroke=\"#999\" stroke-width=\"0.5\"/>",
        x = num(origin.0),
        y = num(origin.1)
    );
    for ov in &spec.overlays {
        let pts: Vec<String> = ov
            .polygon
            .vertices()
            .iter()
            .map(|v| {
                let (x, y) = spec.map(v);
                format!("{},{}", num(x), num(y))
            })
            .collect();
        let dash = match ov.stroke {
            Stroke::Solid => "",
            Stroke::Dashed => r#" stroke-dasharray="6 4""#,
        };
        let fill = ov.fill.as_deref().unwrap_or("none");
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="{fill}" stroke="{}" stroke-width="2"{dash}/>"#,
            pts.join(" "),
            ov.color
        );
        if ov.label_vertices {
            for v in ov.polygon.vertices() {
                let (x, y) = spec.map(v);
                let _ = writeln!(
                    out,
                    r#"<circle cx="{cx}" cy="{cy}" r="3" fill="{c}"/><text x="{tx}" y="{ty}" font-family="sans-serif" font-size="12" fill="{c}">({vx}, {vy})</text>"#,
                    cx = num(x),
                    cy = num(y),
                    c = ov.color,
                    tx = num(x + 5.0),
                    ty = num(y - 5.0),
                    vx = fmt_rational(&v.x),
                    vy = fmt_rational(&v.y)
                );
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn report_svg(report: &RotsetReport) -> Result<String> {
    render_svg(&RenderSpec::for_report(report))
}
