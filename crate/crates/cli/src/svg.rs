//! Barcode plot of a persistence diagram.

use std::fmt::Write as _;

use persistent_cycles::{Death, Interval};

const WIDTH: f64 = 640.0;
const MARGIN: f64 = 40.0;
const ROW: f64 = 8.0;
const COLORS: [&str; 4] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a"];

/// One horizontal bar per interval over filtration indices `1..=len`.
/// Bars that never die run to the right edge and end in an arrow.
pub fn barcode(intervals: &[Interval], len: usize) -> String {
    let span = len.max(1) as f64;
    let x = |i: usize| MARGIN + (i as f64 - 1.0) / span * (WIDTH - 2.0 * MARGIN);
    let height = 2.0 * MARGIN + ROW * intervals.len() as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let axis = height - MARGIN / 2.0;
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{axis}" x2="{}" y2="{axis}" stroke="black"/>"#,
        x(1),
        x(len + 1)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="10">1</text>"#,
        x(1),
        axis + 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="10" text-anchor="end">{len}</text>"#,
        x(len + 1),
        axis + 12.0
    );
    for (row, iv) in intervals.iter().enumerate() {
        let y = MARGIN + ROW * row as f64 + ROW / 2.0;
        let color = COLORS[iv.dim % COLORS.len()];
        let (end, open) = match iv.death {
            Death::At(j) => (x(j), false),
            Death::Never => (x(len + 1), true),
        };
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{y}" x2="{end}" y2="{y}" stroke="{color}" stroke-width="{}"><title>H{} {iv}</title></line>"#,
            x(iv.birth),
            ROW * 0.6,
            iv.dim
        );
        if open {
            let _ = writeln!(
                s,
                r#"<polygon points="{end},{} {},{y} {end},{}" fill="{color}"/>"#,
                y - ROW / 2.0,
                end + ROW / 2.0,
                y + ROW / 2.0
            );
        }
    }
    s.push_str("</svg>\n");
    s
}
