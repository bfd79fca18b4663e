use std::fmt::Write;

use crate::polygon::{Dim, Polygon};

/// Polyline snapshot of a polygon. Space polygons are projected by
/// dropping the coordinate axis with the least variance.
pub fn svg_snapshot(polygon: &Polygon, title: &str) -> String {
    let (ax, ay, note) = match polygon.dim() {
        Dim::Two => (0, 1, String::new()),
        Dim::Three => {
            let c = polygon.centroid();
            let var = |j: usize| polygon.vertices().iter().map(|v| (v[j] - c[j]).powi(2)).sum::<f64>();
            let drop = (0..3).min_by(|&a, &b| var(a).total_cmp(&var(b))).unwrap_or(2);
            let keep: Vec<usize> = (0..3).filter(|&j| j != drop).collect();
            (keep[0], keep[1], format!("projection: dropped axis {}", ["x", "y", "z"][drop]))
        }
    };
    let pts: Vec<(f64, f64)> = polygon.vertices().iter().map(|v| (v[ax], -v[ay])).collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let pad = 0.05 * span;
    let stroke = span / 200.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        x0 - pad,
        y0 - pad,
        x1 - x0 + 2.0 * pad,
        y1 - y0 + 2.0 * pad
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    if !note.is_empty() {
        let _ = writeln!(s, "<desc>{note}</desc>");
    }
    let tag = if polygon.is_closed() { "polygon" } else { "polyline" };
    let list: Vec<String> = pts.iter().map(|(x, y)| format!("{x},{y}")).collect();
    let _ = writeln!(s, r#"<{tag} points="{}" fill="none" stroke="black" stroke-width="{stroke}"/>"#, list.join(" "));
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
