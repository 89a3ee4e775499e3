//! Deterministic SVG rendering: solid boundary, dashed cuts, x-marks for
//! nodes, a filled dot for the monotone point, optional integer grid.
//! Rationals are rendered with an exact 6-place decimal expansion so output
//! is byte-stable.


use crate::atbd::Atbd;
use crate::num::{decimal_fixed, rat, Rat};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct RenderOptions {
    /// Pixels per lattice unit.
    pub scale: u32,
    pub show_grid: bool,
    pub show_labels: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            scale: 40,
            show_grid: false,
            show_labels: false,
        }
    }
}

const MARGIN_UNITS: i64 = 1;

struct Frame {
    scale: Rat,
    min_x: Rat,
    max_y: Rat,
}

impl Frame {
    fn x(&self, v: &Rat) -> String {
        decimal_fixed(&((v - &self.min_x) * &self.scale), 6)
    }

    fn y(&self, v: &Rat) -> String {
        // SVG y grows downward.
        decimal_fixed(&((&self.max_y - v) * &self.scale), 6)
    }
}

pub fn render_svg(d: &Atbd, opts: &RenderOptions) -> Result<String> {
    if opts.scale < 1 {
        return Err(Error::parse("scale must be at least 1"));
    }
    let report = d.validate();
    if !report.ok() {
        return Err(Error::Invalid(report));
    }
    let mut min_x = d.vertices[0].x.clone();
    let mut max_x = d.vertices[0].x.clone();
    let mut min_y = d.vertices[0].y.clone();
    let mut max_y = d.vertices[0].y.clone();
    for v in &d.vertices {
        if v.x < min_x {
            min_x = v.x.clone();
        }
        if v.x > max_x {
            max_x = v.x.clone();
        }
        if v.y < min_y {
            min_y = v.y.clone();
        }
        if v.y > max_y {
            max_y = v.y.clone();
        }
    }
    let margin = rat(MARGIN_UNITS);
    min_x -= &margin;
    min_y -= &margin;
    max_x += &margin;
    max_y += &margin;
    let scale = rat(opts.scale as i64);
    let frame = Frame {
        scale: scale.clone(),
        min_x: min_x.clone(),
        max_y: max_y.clone(),
    };
    let width = decimal_fixed(&((&max_x - &min_x) * &scale), 6);
    let height = decimal_fixed(&((&max_y - &min_y) * &scale), 6);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    ));

    if opts.show_grid {
        out.push_str("  <g class=\"grid\" stroke=\"#dddddd\" stroke-width=\"1\">\n");
        let mut gx = min_x.ceil();
        while gx <= max_x {
            out.push_str(&format!(
                "    <line x1=\"{x}\" y1=\"{y1}\" x2=\"{x}\" y2=\"{y2}\"/>\n",
                x = frame.x(&gx),
                y1 = frame.y(&max_y),
                y2 = frame.y(&min_y),
            ));
            gx += rat(1);
        }
        let mut gy = min_y.ceil();
        while gy <= max_y {
            out.push_str(&format!(
                "    <line x1=\"{x1}\" y1=\"{y}\" x2=\"{x2}\" y2=\"{y}\"/>\n",
                x1 = frame.x(&min_x),
                x2 = frame.x(&max_x),
                y = frame.y(&gy),
            ));
            gy += rat(1);
        }
        out.push_str("  </g>\n");
    }

    // Boundary: seam flanks are drawn with the cuts, not the solid outline.
    out.push_str("  <g class=\"boundary\" stroke=\"#000000\" stroke-width=\"2\" fill=\"none\">\n");
    for i in 0..d.len() {
        if d.edge_is_seam(i) {
            continue;
        }
        let a = d.vertex(i);
        let b = d.vertex(d.next_idx(i));
        out.push_str(&format!(
            "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
            frame.x(&a.x),
            frame.y(&a.y),
            frame.x(&b.x),
            frame.y(&b.y),
        ));
    }
    out.push_str("  </g>\n");

    if !d.cuts.is_empty() {
        out.push_str(
            "  <g class=\"cuts\" stroke=\"#cc0000\" stroke-width=\"1.5\" \
             stroke-dasharray=\"6 4\" fill=\"none\">\n",
        );
        for ci in 0..d.cuts.len() {
            for (a, b) in d.cut_segments(ci) {
                out.push_str(&format!(
                    "    <line class=\"cut\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
                    frame.x(&a.x),
                    frame.y(&a.y),
                    frame.x(&b.x),
                    frame.y(&b.y),
                ));
            }
        }
        out.push_str("  </g>\n");
        out.push_str("  <g class=\"nodes\" stroke=\"#cc0000\" stroke-width=\"1.5\">\n");
        let arm = Rat::new(crate::num::int(1).into(), crate::num::int(5).into());
        for ci in 0..d.cuts.len() {
            for p in d.node_points(ci) {
                for (sx, sy) in [(1i64, 1i64), (1, -1)] {
                    let ax = &p.x - &arm * rat(sx);
                    let ay = &p.y - &arm * rat(sy);
                    let bx = &p.x + &arm * rat(sx);
                    let by = &p.y + &arm * rat(sy);
                    out.push_str(&format!(
                        "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
                        frame.x(&ax),
                        frame.y(&ay),
                        frame.x(&bx),
                        frame.y(&by),
                    ));
                }
            }
        }
        out.push_str("  </g>\n");
    }

    if let Some(m) = &d.monotone_point {
        out.push_str(&format!(
            "  <circle class=\"monotone\" cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"#000000\"/>\n",
            frame.x(&m.x),
            frame.y(&m.y),
        ));
    }

    if opts.show_labels {
        out.push_str("  <g class=\"labels\" font-family=\"monospace\" font-size=\"10\">\n");
        for (i, v) in d.vertices.iter().enumerate() {
            out.push_str(&format!(
                "    <text x=\"{}\" y=\"{}\">v{} ({}, {})</text>\n",
                frame.x(&v.x),
                frame.y(&v.y),
                i,
                crate::num::rat_to_string(&v.x),
                crate::num::rat_to_string(&v.y),
            ));
        }
        out.push_str("  </g>\n");
    }

    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atbd::{Cut, CutKind as CK};
    use crate::lattice::{lvec, rpoint};

    fn cp2_three_cuts() -> Atbd {
        let mut d = Atbd {
            label: "cp2".into(),
            vertices: vec![rpoint(-1, -1), rpoint(2, -1), rpoint(-1, 2)],
            roles: Vec::new(),
            cuts: vec![
                Cut {
                    direction: lvec(1, 1),
                    kind: CK::Ray,
                    base: vec![0],
                    nodes: vec![crate::num::ratio(1, 2)],
                },
                Cut {
                    direction: lvec(-2, 1),
                    kind: CK::Ray,
                    base: vec![1],
                    nodes: vec![crate::num::ratio(1, 2)],
                },
                Cut {
                    direction: lvec(1, -2),
                    kind: CK::Ray,
                    base: vec![2],
                    nodes: vec![crate::num::ratio(1, 2)],
                },
            ],
            monotone_point: Some(rpoint(0, 0)),
        };
        d.rebuild_roles();
        d
    }

    #[test]
    fn svg_is_deterministic() {
        let d = cp2_three_cuts();
        let a = render_svg(&d, &RenderOptions::default()).unwrap();
        let b = render_svg(&d, &RenderOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn svg_structure_counts() {
        let d = cp2_three_cuts();
        let svg = render_svg(
            &d,
            &RenderOptions {
                show_grid: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(svg.matches("class=\"cut\"").count(), 3);
        assert!(svg.contains("class=\"monotone\""));
        assert!(svg.contains("class=\"grid\""));
        // Three boundary segments for the triangle.
        let boundary = svg
            .split("class=\"boundary\"")
            .nth(1)
            .unwrap()
            .split("</g>")
            .next()
            .unwrap();
        assert_eq!(boundary.matches("<line").count(), 3);
    }

    #[test]
    fn no_cuts_no_dashes() {
        let mut d = cp2_three_cuts();
        d.cuts.clear();
        d.rebuild_roles();
        let svg = render_svg(&d, &RenderOptions::default()).unwrap();
        assert!(!svg.contains("stroke-dasharray"));
    }
}
