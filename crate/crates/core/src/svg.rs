//! SVG drawing of γ₀ against a column of pegs.

use std::fmt::Write;

use crate::standard::{top_alexander, ParamSeq};

/// Pixels per unit of Alexander grading.
pub const UNIT: i64 = 40;
const MARGIN: i64 = 80;
const MIN_HALF_WIDTH: i64 = 200;

/// Number of arcs bulging right and left.
pub fn arc_counts(s: &ParamSeq) -> (usize, usize) {
    let right = s.entries().iter().filter(|&&e| e > 0).count();
    (right, s.len() - right)
}

/// Render γ₀: pegs at every integer height in [-topA, topA] on a vertical
/// line, the curve passing through that line at the walk heights, with a right
/// semicircle for each positive entry and a left one for each negative entry.
pub fn render_svg(s: &ParamSeq) -> String {
    let top = top_alexander(s);
    let walk = s.a_walk();
    let y_of = |a: i64| (top + 1 - a) * UNIT;
    let max_radius = walk
        .windows(2)
        .map(|w| (w[1] - w[0]).abs() * UNIT / 2)
        .max()
        .unwrap_or(0);
    let half = MIN_HALF_WIDTH.max(max_radius + MARGIN);
    let (width, height) = (2 * half, (2 * top + 2) * UNIT);
    let cx = half;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, r#"  <title>{s}</title>"#);
    let _ = writeln!(
        out,
        r##"  <line class="axis" x1="{cx}" y1="0" x2="{cx}" y2="{height}" stroke="#bbbbbb" stroke-dasharray="4 4"/>"##
    );
    for a in -top..=top {
        let _ = writeln!(
            out,
            r#"  <circle class="peg" cx="{cx}" cy="{}" r="4" fill="black"/>"#,
            y_of(a)
        );
    }
    let stroke = r##"fill="none" stroke="#c0392b" stroke-width="2""##;
    let y0 = y_of(walk[0]);
    let _ = writeln!(
        out,
        r#"  <line class="lead" x1="0" y1="{y0}" x2="{cx}" y2="{y0}" {stroke}/>"#
    );
    for (i, &e) in s.entries().iter().enumerate() {
        let (ya, yb) = (y_of(walk[i]), y_of(walk[i + 1]));
        let r = (yb - ya).abs() / 2;
        let right = e > 0;
        let sweep = u8::from(right == (yb > ya));
        let side = if right { "right" } else { "left" };
        let _ = writeln!(
            out,
            r#"  <path class="arc {side}" d="M {cx} {ya} A {r} {r} 0 0 {sweep} {cx} {yb}" {stroke}/>"#
        );
    }
    let yn = y_of(walk[s.len()]);
    let _ = writeln!(
        out,
        r#"  <line class="lead" x1="{cx}" y1="{yn}" x2="{width}" y2="{yn}" {stroke}/>"#
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknot_is_one_line() {
        let svg = render_svg(&ParamSeq::unknot());
        assert_eq!(svg.matches("<path").count(), 0);
        assert_eq!(svg.matches("class=\"peg\"").count(), 1);
        assert_eq!(svg.matches("class=\"lead\"").count(), 2);
    }

    #[test]
    fn t45_arcs() {
        let s: ParamSeq = "[1,-3,2,-2,3,-1]".parse().unwrap();
        let svg = render_svg(&s);
        assert_eq!(svg.matches("class=\"arc right\"").count(), 3);
        assert_eq!(svg.matches("class=\"arc left\"").count(), 3);
        assert_eq!(svg.matches("class=\"peg\"").count(), 13);
        assert_eq!(arc_counts(&s), (3, 3));
        assert_eq!(render_svg(&s), svg);
    }
}
