//! Ternary SVG of preferred-tile regions for three tiles.
//!
//! Each player gets a 200×200 panel holding a triangle with tile 1 at the
//! bottom left, tile 2 at the bottom right and tile 3 at the top. Every pixel
//! is colored by the set of tiles the player prefers at its barycentric
//! coordinates; equal runs within a row become one rectangle.

use std::fmt::Write;

use efl_core::preferences::preferred_tiles;
use efl_core::{Cut, PreferenceOracle};

pub const SAMPLES: usize = 200;
const MARGIN: f64 = 20.0;
const LABEL: f64 = 24.0;
const LEGEND: f64 = 40.0;

/// Indexed by tile bitmask.
const PALETTE: [&str; 8] = [
    "#ffffff", "#e41a1c", "#377eb8", "#984ea3", "#4daf4a", "#ff7f00", "#17becf", "#999999",
];

/// Barycentric coordinates of pixel centre `(col, row)`, or `None` outside the triangle.
fn barycentric(col: usize, row: usize) -> Option<[f64; 3]> {
    let n = SAMPLES as f64;
    let x = (col as f64 + 0.5) / n;
    let y = (row as f64 + 0.5) / n;
    // top vertex (0.5, 0), bottom-left (0, 1), bottom-right (1, 1)
    let l3 = 1.0 - y;
    let l2 = x - 0.5 * l3;
    let l1 = 1.0 - l2 - l3;
    if l1 < 0.0 || l2 < 0.0 || l3 < 0.0 {
        return None;
    }
    Some([l1, l2, l3])
}

/// Panel coordinates of a cut.
pub fn position(cut: &Cut) -> (f64, f64) {
    let l = cut.lengths();
    let n = SAMPLES as f64;
    let x = (l[1] + 0.5 * l[2]) * n;
    let y = (1.0 - l[2]) * n;
    (x, y)
}

fn panel_rows(oracle: &dyn PreferenceOracle, player: usize) -> Vec<Vec<(usize, usize, u64)>> {
    (0..SAMPLES)
        .map(|row| {
            let mut runs: Vec<(usize, usize, u64)> = Vec::new();
            for col in 0..SAMPLES {
                let Some(l) = barycentric(col, row) else { continue };
                let cut = Cut::project(l.to_vec()).expect("pixel inside the simplex");
                let bits = preferred_tiles(oracle, &cut, player).map(|s| s.bits()).unwrap_or(0);
                match runs.last_mut() {
                    Some((start, len, b)) if *b == bits && *start + *len == col => *len += 1,
                    _ => runs.push((col, 1, bits)),
                }
            }
            runs
        })
        .collect()
}

pub fn render(oracle: &dyn PreferenceOracle, cuts: &[Cut]) -> String {
    let players = oracle.players();
    let n = SAMPLES as f64;
    let width = MARGIN + players as f64 * (n + MARGIN);
    let height = LABEL + n + MARGIN + LEGEND;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" shape-rendering="crispEdges" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{width}" height="{height}" fill="{}"/>"#, PALETTE[0]);
    for player in 0..players {
        let ox = MARGIN + player as f64 * (n + MARGIN);
        let oy = LABEL;
        let _ = writeln!(svg, r#"<g transform="translate({ox},{oy})">"#);
        let _ = writeln!(svg, r#"<text x="{}" y="-8" text-anchor="middle">player {}</text>"#, n / 2.0, player + 1);
        for (row, runs) in panel_rows(oracle, player).iter().enumerate() {
            for &(col, len, bits) in runs {
                let _ = writeln!(
                    svg,
                    r#"<rect x="{col}" y="{row}" width="{len}" height="1" fill="{}"/>"#,
                    PALETTE[bits as usize & 7]
                );
            }
        }
        let _ = writeln!(
            svg,
            r#"<polygon points="0,{n} {n},{n} {},0" fill="none" stroke="black"/>"#,
            n / 2.0
        );
        for cut in cuts {
            let (x, y) = position(cut);
            let _ = writeln!(
                svg,
                r#"<circle class="cut" cx="{x:.3}" cy="{y:.3}" r="3" fill="black" stroke="white"/>"#
            );
        }
        let _ = writeln!(svg, "</g>");
    }
    let ly = LABEL + n + MARGIN;
    for (i, bits) in [1usize, 2, 4, 3, 5, 6, 7].iter().enumerate() {
        let x = MARGIN + i as f64 * 70.0;
        let tiles: Vec<String> = (0..3).filter(|t| bits & (1 << t) != 0).map(|t| (t + 1).to_string()).collect();
        let _ = writeln!(svg, r#"<rect x="{x}" y="{ly}" width="12" height="12" fill="{}"/>"#, PALETTE[*bits]);
        let _ = writeln!(svg, r#"<text x="{}" y="{}">{{{}}}</text>"#, x + 16.0, ly + 11.0, tiles.join(","));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corners_and_centre() {
        assert!(barycentric(0, 0).is_none());
        let c = barycentric(100, 133).unwrap();
        assert!(c.iter().all(|&l| (l - 1.0 / 3.0).abs() < 0.01));
        let (x, y) = position(&Cut::barycenter(3).unwrap());
        assert!((x - 100.0).abs() < 1e-9 && (y - 400.0 / 3.0).abs() < 1e-9);
    }
}
