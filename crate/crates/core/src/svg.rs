//! Deterministic SVG snapshots.
//!
//! Output is plain string assembly in a fixed element order, so identical
//! inputs produce byte-identical documents. World coordinates are mapped
//! with y pointing up.

use num_traits::ToPrimitive;

use crate::geom::{Anchor, ConvexBody, Point, Rational};
use crate::subdivision::{Color, Engine, Obstacle};

const GREEN_FILL: &str = "#97d077";
const RED_FILL: &str = "#e06666";
const YELLOW_FILL: &str = "#f5e27a";
const BODY_FILL: &str = "#7aa6d0";
const SEPARATING_FILL: &str = "#d04545";
const OUTLINE: &str = "#333333";
const SOURCE_FILL: &str = "#1155cc";
const TARGET_FILL: &str = "#cc1177";

fn coord(r: &Rational) -> f64 {
    r.to_f64().expect("rational fits f64 approximately")
}

fn fmt(v: f64) -> String {
    format!("{v:.6}")
}

struct Canvas {
    out: String,
    marker_radius: f64,
}

impl Canvas {
    /// World-space viewport; y is flipped into SVG space.
    fn new(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Canvas {
        let width = xmax - xmin;
        let height = ymax - ymin;
        let marker_radius = 0.012 * width.max(height);
        let mut out = String::new();
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
            fmt(xmin),
            fmt(-ymax),
            fmt(width),
            fmt(height)
        ));
        Canvas { out, marker_radius }
    }

    fn stroke_width(&self) -> f64 {
        self.marker_radius * 0.15
    }

    fn rect(&mut self, xmin: f64, ymin: f64, xmax: f64, ymax: f64, fill: &str) {
        self.out.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" stroke=\"{}\" stroke-width=\"{}\"/>\n",
            fmt(xmin),
            fmt(-ymax),
            fmt(xmax - xmin),
            fmt(ymax - ymin),
            fill,
            OUTLINE,
            fmt(self.stroke_width())
        ));
    }

    fn polygon(&mut self, points: &[Point], fill: &str, stroke: &str, stroke_scale: f64) {
        let list: Vec<String> = points
            .iter()
            .map(|p| format!("{},{}", fmt(coord(&p.x)), fmt(-coord(&p.y))))
            .collect();
        self.out.push_str(&format!(
            "<polygon points=\"{}\" fill=\"{}\" stroke=\"{}\" stroke-width=\"{}\"/>\n",
            list.join(" "),
            fill,
            stroke,
            fmt(self.stroke_width() * stroke_scale)
        ));
    }

    fn circle_outline(&mut self, cx: f64, cy: f64, r: f64) {
        self.out.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"/>\n",
            fmt(cx),
            fmt(-cy),
            fmt(r),
            OUTLINE,
            fmt(self.stroke_width() * 2.0)
        ));
    }

    fn line(&mut self, a: &Point, b: &Point) {
        self.out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\" stroke-dasharray=\"{}\"/>\n",
            fmt(coord(&a.x)),
            fmt(-coord(&a.y)),
            fmt(coord(&b.x)),
            fmt(-coord(&b.y)),
            OUTLINE,
            fmt(self.stroke_width()),
            fmt(self.marker_radius)
        ));
    }

    fn marker(&mut self, p: &Point, fill: &str) {
        self.out.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>\n",
            fmt(coord(&p.x)),
            fmt(-coord(&p.y)),
            fmt(self.marker_radius),
            fill
        ));
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

fn body_rect(canvas: &mut Canvas, body_bounds: &crate::geom::BoundingBox, fill: &str) {
    canvas.rect(
        coord(&body_bounds.xmin),
        coord(&body_bounds.ymin),
        coord(&body_bounds.xmax),
        coord(&body_bounds.ymax),
        fill,
    );
}

/// Snapshot of a subdivision run: colored leaf boxes, obstacle outlines,
/// anchor markers. The synthetic ring is drawn with the red boxes.
pub fn render_subdivision(engine: &Engine, obstacles: &[Obstacle]) -> String {
    let mut canvas = Canvas::new(-1.05, -1.05, 2.05, 2.05);
    for green in engine.green_boxes() {
        body_rect(&mut canvas, &green.bounds(), GREEN_FILL);
    }
    for (_, dyadic, color) in engine.graph().live_boxes() {
        let fill = match color {
            Color::Green => GREEN_FILL,
            Color::Red => RED_FILL,
            Color::Yellow => YELLOW_FILL,
        };
        body_rect(&mut canvas, &dyadic.bounds(), fill);
    }
    for obstacle in obstacles {
        match obstacle {
            Obstacle::Disc { center, radius } => {
                canvas.circle_outline(coord(&center.x), coord(&center.y), coord(radius));
            }
            Obstacle::Annulus { center, inner, outer } => {
                canvas.circle_outline(coord(&center.x), coord(&center.y), coord(inner));
                canvas.circle_outline(coord(&center.x), coord(&center.y), coord(outer));
            }
            Obstacle::Polygon(body) => {
                canvas.polygon(body.vertices(), "none", OUTLINE, 2.0);
            }
        }
    }
    canvas.marker(engine.anchor().source(), SOURCE_FILL);
    canvas.marker(engine.anchor().target(), TARGET_FILL);
    canvas.finish()
}

/// Snapshot of a body stream: bodies in insertion order, the separating
/// insertion highlighted, anchors joined by a dashed segment.
pub fn render_stream(
    anchor: &Anchor,
    bodies: &[ConvexBody],
    separating: Option<usize>,
) -> String {
    let mut xs = vec![coord(&anchor.source().x), coord(&anchor.target().x)];
    let mut ys = vec![coord(&anchor.source().y), coord(&anchor.target().y)];
    for body in bodies {
        let bb = body.bounding_box();
        xs.push(coord(&bb.xmin));
        xs.push(coord(&bb.xmax));
        ys.push(coord(&bb.ymin));
        ys.push(coord(&bb.ymax));
    }
    let (xmin, xmax) = xs.iter().fold((f64::MAX, f64::MIN), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    let (ymin, ymax) = ys.iter().fold((f64::MAX, f64::MIN), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    let margin = 0.1 * ((xmax - xmin).max(ymax - ymin)).max(1.0);
    let mut canvas = Canvas::new(xmin - margin, ymin - margin, xmax + margin, ymax + margin);
    for (id, body) in bodies.iter().enumerate() {
        let fill = if separating == Some(id) { SEPARATING_FILL } else { BODY_FILL };
        if body.vertices().len() >= 3 {
            canvas.polygon(body.vertices(), fill, OUTLINE, 1.0);
        } else {
            // Degenerate bodies appear as thick outlines.
            canvas.polygon(body.vertices(), "none", fill, 3.0);
        }
    }
    canvas.line(anchor.source(), anchor.target());
    canvas.marker(anchor.source(), SOURCE_FILL);
    canvas.marker(anchor.target(), TARGET_FILL);
    canvas.finish()
}
