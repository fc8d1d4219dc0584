//! SVG drawings of tours and merged-ring overlays.

use std::fmt::Write;

use rand::Rng;

use crate::crossover::{merge_graphs, partition_m_rings, CrossoverError, Parent};
use crate::instance::Instance;
use crate::tour::Tour;

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 20.0;

struct Viewport {
    scale: f64,
    min_x: f64,
    max_y: f64,
    height: f64,
}

impl Viewport {
    fn fit(inst: &Instance) -> Viewport {
        let xs = inst.coords().iter().map(|c| c.0);
        let ys = inst.coords().iter().map(|c| c.1);
        let min_x = xs.clone().fold(f64::INFINITY, f64::min);
        let max_x = xs.fold(f64::NEG_INFINITY, f64::max);
        let min_y = ys.clone().fold(f64::INFINITY, f64::min);
        let max_y = ys.fold(f64::NEG_INFINITY, f64::max);
        let span_x = (max_x - min_x).max(1e-9);
        let span_y = (max_y - min_y).max(1e-9);
        let scale = (WIDTH - 2.0 * MARGIN) / span_x;
        let height = span_y * scale + 2.0 * MARGIN;
        Viewport { scale, min_x, max_y, height }
    }

    /// Maps instance coordinates to SVG space; the y axis flips so north
    /// stays up.
    fn map(&self, city: u32, inst: &Instance) -> (f64, f64) {
        let (x, y) = inst.coords()[city as usize];
        (
            MARGIN + (x - self.min_x) * self.scale,
            MARGIN + (self.max_y - y) * self.scale,
        )
    }
}

fn svg_open(out: &mut String, vp: &Viewport) {
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.0} {:.0}\">",
        WIDTH, vp.height, WIDTH, vp.height
    )
    .unwrap();
    writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>").unwrap();
}

fn svg_cities(out: &mut String, inst: &Instance, vp: &Viewport) {
    writeln!(out, "<g fill=\"black\">").unwrap();
    for city in 0..inst.n() as u32 {
        let (x, y) = vp.map(city, inst);
        writeln!(out, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"2\"/>").unwrap();
    }
    writeln!(out, "</g>").unwrap();
}

/// Draws the tour as a closed polyline with a dot per city.
pub fn tour_svg(inst: &Instance, tour: &Tour) -> String {
    let vp = Viewport::fit(inst);
    let mut out = String::new();
    svg_open(&mut out, &vp);
    let mut d = String::new();
    for (i, &city) in tour.order().iter().enumerate() {
        let (x, y) = vp.map(city, inst);
        let cmd = if i == 0 { 'M' } else { 'L' };
        write!(d, "{cmd}{x:.2} {y:.2} ").unwrap();
    }
    writeln!(
        out,
        "<path d=\"{}Z\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>",
        d
    )
    .unwrap();
    svg_cities(&mut out, inst, &vp);
    out.push_str("</svg>\n");
    out
}

/// Golden-angle hue walk keeps adjacent ring colors far apart.
fn ring_color(i: usize) -> String {
    let hue = (i as f64 * 137.508) % 360.0;
    format!("hsl({hue:.0},75%,40%)")
}

/// Draws the merged graph of two parents partitioned into rings: one color
/// per ring, parent-A edges solid, parent-B edges dashed.
pub fn rings_svg<R: Rng + ?Sized>(
    inst: &Instance,
    pa: &Tour,
    pb: &Tour,
    rng: &mut R,
) -> Result<String, CrossoverError> {
    let g = merge_graphs(pa, pb)?;
    let rings = partition_m_rings(&g, rng);
    let vp = Viewport::fit(inst);
    let mut out = String::new();
    svg_open(&mut out, &vp);
    for (ri, ring) in rings.iter().enumerate() {
        let color = ring_color(ri);
        writeln!(out, "<g stroke=\"{color}\" stroke-width=\"1.5\" fill=\"none\">").unwrap();
        for edge in ring.edges() {
            let (x1, y1) = vp.map(edge.u, inst);
            let (x2, y2) = vp.map(edge.v, inst);
            let dash = match edge.parent {
                Parent::A => "",
                Parent::B => " stroke-dasharray=\"5 4\"",
            };
            writeln!(
                out,
                "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\"{dash}/>"
            )
            .unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }
    svg_cities(&mut out, inst, &vp);
    out.push_str("</svg>\n");
    Ok(out)
}
