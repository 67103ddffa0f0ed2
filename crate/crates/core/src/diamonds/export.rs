use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::DiamondGraph;
use crate::tiling::{face_boundary, Color, Orientation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Json,
    Dot,
    Svg,
}

impl ExportFormat {
    pub fn render(self, g: &DiamondGraph) -> String {
        match self {
            ExportFormat::Json => to_json(g),
            ExportFormat::Dot => to_dot(g),
            ExportFormat::Svg => to_svg(g),
        }
    }
}

impl std::str::FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ExportFormat::Json),
            "dot" => Ok(ExportFormat::Dot),
            "svg" => Ok(ExportFormat::Svg),
            _ => Err(format!("unknown export format `{s}`")),
        }
    }
}

fn color_name(c: Color) -> &'static str {
    match c {
        Color::Black => "black",
        Color::White => "white",
    }
}

/// Rounded so the output does not depend on the last bits of `√3`.
fn coord(v: f64) -> f64 {
    (v * 1e9).round() / 1e9
}

pub fn to_json_value(g: &DiamondGraph) -> Value {
    let faces: Vec<Value> = g
        .faces
        .iter()
        .map(|f| {
            let o = if f.o == Orientation::Up { "up" } else { "down" };
            json!({ "a": f.a, "b": f.b, "o": o, "c": f.c, "label": g.face_labels[f] })
        })
        .collect();
    let vertices: Vec<Value> = g
        .vertices
        .iter()
        .map(|v| {
            let (x, y) = v.position().to_f64();
            json!({ "id": v.to_string(), "color": color_name(v.color()), "x": coord(x), "y": coord(y) })
        })
        .collect();
    let edges: Vec<Value> = g
        .edges
        .iter()
        .map(|e| json!({ "u": e.edge.white.to_string(), "v": e.edge.black.to_string(), "labels": e.labels }))
        .collect();
    json!({
        "half_order": g.half_order.0,
        "primed": g.primed,
        "faces": faces,
        "vertices": vertices,
        "edges": edges,
    })
}

pub fn to_json(g: &DiamondGraph) -> String {
    let mut s = serde_json::to_string_pretty(&to_json_value(g)).expect("json values serialize");
    s.push('\n');
    s
}

pub fn to_dot(g: &DiamondGraph) -> String {
    let mut s = String::new();
    let name = if g.primed { "Dprime" } else { "D" };
    let _ = writeln!(s, "graph {name}_{} {{", g.half_order.0);
    let _ = writeln!(s, "  node [shape=circle, width=0.15, label=\"\"];");
    for v in &g.vertices {
        let (x, y) = v.position().to_f64();
        let fill = color_name(v.color());
        let _ = writeln!(s, "  \"{v}\" [pos=\"{},{}!\", style=filled, fillcolor={fill}];", coord(x), coord(y));
    }
    for e in &g.edges {
        let [a, b] = e.labels;
        let _ = writeln!(s, "  \"{}\" -- \"{}\" [label=\"{a}{b}\"];", e.edge.white, e.edge.black);
    }
    s.push_str("}\n");
    s
}

const PALETTE: [&str; 6] = ["#e6b0aa", "#a9cce3", "#a3e4d7", "#f9e79f", "#d7bde2", "#f5cba7"];

pub fn to_svg(g: &DiamondGraph) -> String {
    const SCALE: f64 = 60.0;
    const PAD: f64 = 20.0;
    let pts: Vec<(f64, f64)> = g.vertices.iter().map(|v| v.position().to_f64()).collect();
    let (mut x0, mut y0, mut x1, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    if let Some(&(x, y)) = pts.first() {
        (x0, y0, x1, y1) = (x, y, x, y);
    }
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let map = |(x, y): (f64, f64)| (coord((x - x0) * SCALE + PAD), coord((y1 - y) * SCALE + PAD));
    let (w, h) = (coord((x1 - x0) * SCALE + 2.0 * PAD), coord((y1 - y0) * SCALE + 2.0 * PAD));

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    for f in &g.faces {
        let label = g.face_labels[f];
        let corners: Vec<String> = face_boundary(f)
            .vertices
            .iter()
            .map(|v| {
                let (x, y) = map(v.position().to_f64());
                format!("{x},{y}")
            })
            .collect();
        let c = f.center4();
        let (cx, cy) = map((c.x as f64 / 48.0, c.y as f64 * 3f64.sqrt() / 48.0));
        let _ = writeln!(
            s,
            r#"  <polygon points="{}" fill="{}" stroke="none"/>"#,
            corners.join(" "),
            PALETTE[label as usize - 1]
        );
        let _ = writeln!(
            s,
            r#"  <text x="{cx}" y="{cy}" font-size="12" text-anchor="middle" dominant-baseline="middle">{label}</text>"#
        );
    }
    for e in &g.edges {
        let (ax, ay) = map(e.edge.white.position().to_f64());
        let (bx, by) = map(e.edge.black.position().to_f64());
        let _ = writeln!(s, r#"  <line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" stroke="black" stroke-width="1"/>"#);
    }
    for v in &g.vertices {
        let (x, y) = map(v.position().to_f64());
        let fill = color_name(v.color());
        let _ = writeln!(s, r#"  <circle cx="{x}" cy="{y}" r="3" fill="{fill}" stroke="black"/>"#);
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diamonds::{build_diamond, HalfOrder};
    use crate::laurent::SIGMA;
    use crate::tiling::Tiling;

    fn d(n: u32, primed: bool) -> DiamondGraph {
        build_diamond(Tiling::calibrated(), HalfOrder(n), primed)
    }

    #[test]
    fn json_schema() {
        let v = to_json_value(&d(2, false));
        assert_eq!(v["half_order"], 2);
        assert_eq!(v["primed"], false);
        let mut labels: Vec<u64> = v["faces"].as_array().unwrap().iter().map(|f| f["label"].as_u64().unwrap()).collect();
        labels.sort();
        assert_eq!(labels, vec![2, 4, 5]);
        let e = &v["edges"][0];
        assert!(e["u"].is_string() && e["v"].is_string() && e["labels"].as_array().unwrap().len() == 2);
        let vx = &v["vertices"][0];
        assert!(vx["id"].is_string() && vx["x"].is_f64() && vx["color"].is_string());
    }

    #[test]
    fn primed_json_labels_are_sigma_images() {
        let labels = |p| {
            let v = to_json_value(&d(3, p));
            let mut l: Vec<usize> = v["faces"].as_array().unwrap().iter().map(|f| f["label"].as_u64().unwrap() as usize).collect();
            l.sort();
            l
        };
        let mut image: Vec<usize> = labels(false).into_iter().map(|l| SIGMA.apply(l)).collect();
        image.sort();
        assert_eq!(labels(true), image);
    }

    #[test]
    fn dot_for_a_square() {
        let s = to_dot(&d(1, false));
        assert!(s.starts_with("graph D_1 {"));
        assert_eq!(s.matches(" -- ").count(), 4);
        assert_eq!(s.matches("fillcolor").count(), 4);
    }

    #[test]
    fn svg_is_deterministic() {
        let g = d(4, true);
        let a = to_svg(&g);
        assert_eq!(a, to_svg(&g));
        assert_eq!(a.matches("<polygon").count(), 15);
        assert!(a.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn format_names() {
        assert_eq!("svg".parse::<ExportFormat>(), Ok(ExportFormat::Svg));
        assert!("png".parse::<ExportFormat>().is_err());
    }
}
