//! Static SVG rendering: cobweb diagrams and labeled interval-set rows.
//!
//! Rendering is the one place rationals become decimals; coordinates are
//! printed to 9 significant digits (stated in a metadata comment inside the
//! file) and never feed back into analysis. Output is deterministic for
//! fixed inputs.

use crate::interval::{ClosedInterval, IntervalSet};
use crate::map::{MapError, MapKind, MapModel};
use crate::orbit::orbit;
use crate::rational::Rational;
use crate::verdict::Budget;

const SIZE: f64 = 560.0;
const MARGIN: f64 = 40.0;
const PLOT: f64 = SIZE - 2.0 * MARGIN;

/// Default truncation band for drawing the staircase's infinitely many
/// pieces.
pub const STAIRCASE_RENDER_BANDS: u32 = 8;

/// Format with 9 significant digits, deterministically.
fn sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).clamp(0, 12) as usize;
    format!("{v:.decimals$}")
}

struct Frame {
    lo: f64,
    hi: f64,
}

impl Frame {
    fn of(domain: &ClosedInterval) -> Frame {
        Frame { lo: domain.lo().to_f64_lossy(), hi: domain.hi().to_f64_lossy() }
    }

    fn x(&self, v: &Rational) -> f64 {
        let t = (v.to_f64_lossy() - self.lo) / (self.hi - self.lo);
        MARGIN + t * PLOT
    }

    fn y(&self, v: &Rational) -> f64 {
        let t = (v.to_f64_lossy() - self.lo) / (self.hi - self.lo);
        MARGIN + (1.0 - t) * PLOT
    }
}

fn polyline(points: &[(f64, f64)], style: &str) -> String {
    let coords: Vec<String> =
        points.iter().map(|(x, y)| format!("{},{}", sig(*x), sig(*y))).collect();
    format!("  <polyline fill=\"none\" {} points=\"{}\"/>\n", style, coords.join(" "))
}

fn header(title: &str, meta: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n<!-- {meta} | coordinates printed to 9 significant digits; rendering precision never feeds back into analysis -->\n  <title>{title}</title>\n  <rect x=\"0\" y=\"0\" width=\"{s}\" height=\"{s}\" fill=\"white\"/>\n",
        s = sig(SIZE),
    )
}

/// Cobweb diagram: the map graph, the diagonal, and the orbit path of
/// `seed` for `steps` steps (two segments per step). The staircase graph is
/// truncated at `STAIRCASE_RENDER_BANDS` bands, flagged in the output.
pub fn render_cobweb(
    m: &MapModel,
    seed: &Rational,
    steps: usize,
    budget: &Budget,
) -> Result<String, MapError> {
    let domain = m.domain();
    let frame = Frame::of(&domain);
    let record = orbit(m, seed, steps, budget.orbit_denom_bits)?;

    let graph_vertices: Vec<(Rational, Rational)> = match &m.kind {
        MapKind::Pl(pl) => pl.breakpoints().to_vec(),
        MapKind::Staircase(s) => s.graph_vertices(STAIRCASE_RENDER_BANDS),
    };
    let truncation_note = if m.is_staircase() {
        format!(" | staircase graph truncated at n={STAIRCASE_RENDER_BANDS}")
    } else {
        String::new()
    };

    let mut svg = header(
        &format!("cobweb: {} from {}", m.name, seed),
        &format!("devaney cobweb | map {} | seed {} | steps {}{}", m.name, seed, steps, truncation_note),
    );
    // frame and diagonal
    svg.push_str(&format!(
        "  <rect x=\"{m}\" y=\"{m}\" width=\"{p}\" height=\"{p}\" fill=\"none\" stroke=\"#ccc\"/>\n",
        m = sig(MARGIN),
        p = sig(PLOT),
    ));
    let dl = (frame.x(domain.lo()), frame.y(domain.lo()));
    let dh = (frame.x(domain.hi()), frame.y(domain.hi()));
    svg.push_str(&polyline(&[dl, dh], "stroke=\"#999\" stroke-dasharray=\"4 3\""));
    // map graph
    let graph: Vec<(f64, f64)> =
        graph_vertices.iter().map(|(x, y)| (frame.x(x), frame.y(y))).collect();
    svg.push_str(&polyline(&graph, "stroke=\"#1f6fb2\" stroke-width=\"1.6\""));
    // cobweb path
    let mut path: Vec<(f64, f64)> = Vec::with_capacity(1 + 2 * record.points.len());
    let first = &record.points[0];
    path.push((frame.x(first), frame.y(first)));
    for w in record.points.windows(2) {
        let (x, fx) = (&w[0], &w[1]);
        path.push((frame.x(x), frame.y(fx)));
        path.push((frame.x(fx), frame.y(fx)));
    }
    svg.push_str(&polyline(&path, "stroke=\"#c23b22\" stroke-width=\"1.0\""));
    if record.truncated {
        svg.push_str("  <!-- orbit truncated by denominator budget -->\n");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Horizontal bar chart: one row per labeled interval set, exact endpoints
/// in the tooltip of every bar. Degenerate components render as ticks;
/// empty sets render as an empty track.
pub fn render_sets(domain: &ClosedInterval, rows: &[(String, IntervalSet)]) -> String {
    let frame = Frame::of(domain);
    let row_height = 34.0;
    let bar_height = 16.0;
    let top = 48.0;
    let height = top + rows.len() as f64 * row_height + 24.0;
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n<!-- devaney set rows | domain {dom} | coordinates printed to 9 significant digits -->\n  <title>interval sets over {dom}</title>\n  <rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
        w = sig(SIZE),
        h = sig(height),
        dom = domain,
    );
    for (i, (label, set)) in rows.iter().enumerate() {
        let y = top + i as f64 * row_height;
        svg.push_str(&format!(
            "  <g class=\"row\">\n    <text x=\"{}\" y=\"{}\" font-size=\"12\" font-family=\"monospace\">{}</text>\n",
            sig(8.0),
            sig(y + bar_height - 3.0),
            label,
        ));
        // track
        svg.push_str(&format!(
            "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#ddd\"/>\n",
            sig(MARGIN),
            sig(y + bar_height / 2.0),
            sig(MARGIN + PLOT),
            sig(y + bar_height / 2.0),
        ));
        for c in set.components() {
            let x0 = frame.x(c.lo());
            let x1 = frame.x(c.hi());
            let w = (x1 - x0).max(1.2); // degenerate components stay visible
            svg.push_str(&format!(
                "    <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#1f6fb2\" fill-opacity=\"0.75\"><title>{}</title></rect>\n",
                sig(x0),
                sig(y),
                sig(w),
                sig(bar_height),
                c,
            ));
        }
        svg.push_str("  </g>\n");
    }
    svg.push_str("</svg>\n");
    svg
}
