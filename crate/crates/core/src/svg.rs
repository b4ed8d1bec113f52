//! Minimal SVG plots: one or more polylines with axes through the origin.

use std::fmt::Write as _;

use crate::curve::Vec2;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 24.0;

pub struct Plot {
    title: String,
    equal_aspect: bool,
    layers: Vec<(Vec<Vec2>, bool, &'static str)>,
    marks: Vec<Vec2>,
}

impl Plot {
    pub fn new(title: &str, equal_aspect: bool) -> Self {
        Plot { title: title.to_string(), equal_aspect, layers: Vec::new(), marks: Vec::new() }
    }

    pub fn polyline(mut self, pts: Vec<Vec2>, closed: bool, color: &'static str) -> Self {
        self.layers.push((pts, closed, color));
        self
    }

    pub fn marks(mut self, pts: Vec<Vec2>) -> Self {
        self.marks = pts;
        self
    }

    pub fn render(&self) -> String {
        let all = self.layers.iter().flat_map(|l| l.0.iter()).chain(&self.marks);
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in all {
            x0 = x0.min(p[0]);
            x1 = x1.max(p[0]);
            y0 = y0.min(p[1]);
            y1 = y1.max(p[1]);
        }
        if !x0.is_finite() {
            (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
        }
        let (mut sx, mut sy) = ((SIZE - 2.0 * MARGIN) / (x1 - x0).max(1e-12), (SIZE - 2.0 * MARGIN) / (y1 - y0).max(1e-12));
        if self.equal_aspect {
            sx = sx.min(sy);
            sy = sx;
        }
        let map = |p: &Vec2| (MARGIN + (p[0] - x0) * sx, SIZE - MARGIN - (p[1] - y0) * sy);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
        );
        let _ = writeln!(out, "<title>{}</title>", escape(&self.title));
        out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        if x0 <= 0.0 && 0.0 <= x1 {
            let (x, _) = map(&[0.0, y0]);
            let _ = writeln!(out, "<line x1=\"{x:.2}\" y1=\"0\" x2=\"{x:.2}\" y2=\"{SIZE}\" stroke=\"#bbb\" stroke-width=\"1\"/>");
        }
        if y0 <= 0.0 && 0.0 <= y1 {
            let (_, y) = map(&[x0, 0.0]);
            let _ = writeln!(out, "<line x1=\"0\" y1=\"{y:.2}\" x2=\"{SIZE}\" y2=\"{y:.2}\" stroke=\"#bbb\" stroke-width=\"1\"/>");
        }
        for (pts, closed, color) in &self.layers {
            let tag = if *closed { "polygon" } else { "polyline" };
            let _ = write!(out, "<{tag} fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\" points=\"");
            for p in pts {
                let (x, y) = map(p);
                let _ = write!(out, "{x:.2},{y:.2} ");
            }
            out.push_str("\"/>\n");
        }
        for p in &self.marks {
            let (x, y) = map(p);
            let _ = writeln!(out, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"#d62728\"/>");
        }
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
