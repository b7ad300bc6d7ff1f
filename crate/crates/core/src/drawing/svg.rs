use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::geometry::{q, Point, Q};
use super::layout::LevelDrawing;

const SCALE: i64 = 60;
const MARGIN: i64 = 40;

/// `x` rounded half away from zero to six decimals.
pub fn fmt6(x: &Q) -> String {
    let scaled = x * Q::from_integer(BigInt::from(1_000_000));
    let (n, d) = (scaled.numer().abs(), scaled.denom().clone());
    let (mut whole, rem) = n.div_rem(&d);
    if rem * BigInt::from(2) >= d {
        whole += 1;
    }
    let (int, frac) = whole.div_rem(&BigInt::from(1_000_000));
    let sign = if x.is_negative() && !whole.is_zero() { "-" } else { "" };
    format!("{sign}{int}.{frac:06}")
}

fn area2(poly: &[Point]) -> Q {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (&poly[i], &poly[(i + 1) % n]);
            &a.x * &b.y - &b.x * &a.y
        })
        .fold(q(0), |acc, x| acc + x)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders a drawing with level 0 at the bottom. Coordinates are the exact
/// rationals scaled and rounded to six decimals.
pub fn emit_svg(d: &LevelDrawing) -> String {
    let all: Vec<&Point> = d.points.values().chain(d.regions.values().flatten()).collect();
    let min_x = all.iter().map(|p| p.x.clone()).min().unwrap_or_else(|| q(0));
    let max_x = all.iter().map(|p| p.x.clone()).max().unwrap_or_else(|| q(0));
    let min_y = all.iter().map(|p| p.y.clone()).min().unwrap_or_else(|| q(0));
    let max_y = all.iter().map(|p| p.y.clone()).max().unwrap_or_else(|| q(0));
    let sx = |x: &Q| fmt6(&((x - &min_x) * q(SCALE) + q(MARGIN)));
    let sy = |y: &Q| fmt6(&((&max_y - y) * q(SCALE) + q(MARGIN)));
    let width = fmt6(&((&max_x - &min_x) * q(SCALE) + q(2 * MARGIN)));
    let height = fmt6(&((&max_y - &min_y) * q(SCALE) + q(2 * MARGIN)));

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let levels: std::collections::BTreeSet<Q> = d.points.values().map(|p| p.y.clone()).collect();
    for y in &levels {
        let _ = writeln!(
            s,
            r##"  <line class="level" x1="0.000000" y1="{0}" x2="{width}" y2="{0}" stroke="#ddd" stroke-dasharray="4 4"/>"##,
            sy(y)
        );
    }
    // outer regions first so nested ones stay visible
    let mut regions: Vec<(&String, &Vec<Point>)> = d.regions.iter().collect();
    regions.sort_by(|a, b| area2(b.1).cmp(&area2(a.1)).then(a.0.cmp(b.0)));
    for (id, r) in regions {
        let pts: Vec<String> = r.iter().map(|p| format!("{},{}", sx(&p.x), sy(&p.y))).collect();
        let _ = writeln!(
            s,
            r##"  <polygon class="cluster" data-id="{}" points="{}" fill="#4a90d9" fill-opacity="0.08" stroke="#4a90d9"/>"##,
            escape(id),
            pts.join(" ")
        );
    }
    for line in &d.edges {
        let pts: Vec<String> = line
            .iter()
            .map(|id| format!("{},{}", sx(&d.points[id].x), sy(&d.points[id].y)))
            .collect();
        let _ = writeln!(
            s,
            r#"  <polyline class="edge" points="{}" fill="none" stroke="black"/>"#,
            pts.join(" ")
        );
    }
    for (id, p) in &d.points {
        if d.bends.contains(id) {
            continue;
        }
        let (x, y) = (sx(&p.x), sy(&p.y));
        let _ = writeln!(s, r#"  <circle class="vertex" cx="{x}" cy="{y}" r="4"/>"#);
        let _ = writeln!(
            s,
            r#"  <text x="{x}" y="{y}" dx="6" dy="-6" font-size="11">{}</text>"#,
            escape(id)
        );
    }
    s.push_str("</svg>\n");
    s
}
