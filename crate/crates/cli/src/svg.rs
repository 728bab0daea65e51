//! SVG drawing of a fiber polygon.

use std::fmt::Write as _;
use std::path::Path;

use nodesum_core::{FiberPolygon, Int};
use num_traits::ToPrimitive;

use crate::report::tuple;
use crate::CliError;

fn coord(x: &Int) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Four decimals with trailing zeros removed.
fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// An SVG 1.1 document: the vertex chain as one closed path, each vertex
/// labelled with its lattice coordinates. The y axis points up and the
/// view box is the bounding box grown by 10% on every side.
pub fn svg_document(p: &FiberPolygon) -> String {
    let pts: Vec<(f64, f64)> = p.vertices.iter().map(|v| (coord(&v[0]), -coord(&v[1]))).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let w = (x1 - x0).max(1.0);
    let h = (y1 - y0).max(1.0);
    let (mx, my) = (0.1 * w, 0.1 * h);
    let scale = w.max(h);
    let font = num(scale * 0.04);
    let stroke = num(scale * 0.01);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">",
        num(x0 - mx),
        num(y0 - my),
        num(w + 2.0 * mx),
        num(h + 2.0 * my)
    )
    .unwrap();
    let mut path = String::new();
    for (i, (x, y)) in pts.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        write!(path, "{cmd}{} {} ", num(*x), num(*y)).unwrap();
    }
    path.push('Z');
    writeln!(
        out,
        "  <path d=\"{path}\" fill=\"#dce8f5\" stroke=\"#1f4e79\" stroke-width=\"{stroke}\" stroke-linejoin=\"round\"/>"
    )
    .unwrap();
    for (v, (x, y)) in p.vertices.iter().zip(&pts) {
        writeln!(
            out,
            "  <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"{font}\" text-anchor=\"middle\">{}</text>",
            num(*x),
            num(*y),
            tuple(v)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

pub fn render_svg(p: &FiberPolygon, path: &Path) -> Result<(), CliError> {
    std::fs::write(path, svg_document(p)).map_err(|source| CliError::Write {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nodesum_core::fiber::fiber_polygon;
    use nodesum_core::SupportSet;

    fn polygon(points: &[&[i64]]) -> FiberPolygon {
        fiber_polygon(&SupportSet::from_i64(points).unwrap()).unwrap()
    }

    #[test]
    fn triangle_has_three_segments_and_labels() {
        let p = polygon(&[&[0, 0, 0], &[1, 0, 0], &[3, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let svg = svg_document(&p);
        let d = svg.split("d=\"").nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(d.matches('L').count() + 1, 3);
        assert!(d.starts_with('M') && d.ends_with('Z'));
        for label in ["(0,0)", "(3,0)", "(0,3)"] {
            assert!(svg.contains(&format!(">{label}<")), "{label}");
        }
    }

    #[test]
    fn y_axis_is_flipped_and_box_padded() {
        let p = polygon(&[&[0, 0, 0], &[1, 0, 0], &[3, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let svg = svg_document(&p);
        assert!(svg.contains("viewBox=\"-0.3 -3.3 3.6 3.6\""));
        assert!(svg.contains("L0 -3 "));
    }

    #[test]
    fn number_format() {
        assert_eq!(num(0.30000000000000004), "0.3");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(12.0), "12");
        assert_eq!(num(-1.25), "-1.25");
    }

    #[test]
    fn quadrilateral_labels() {
        let p = polygon(&[&[0, 0, 0], &[1, 0, 0], &[2, 0, 0], &[1, 1, 0], &[0, 0, 1]]);
        let svg = svg_document(&p);
        let d = svg.split("d=\"").nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(d.matches('L').count() + 1, 4);
        assert!(svg.contains(">(2,1)<"));
    }
}
