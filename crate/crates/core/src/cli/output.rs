//! CSV tables and the SVG diagonal plot. Both are plain text with fixed
//! formatting, so identical inputs give identical bytes.

use std::fmt::Write as _;

use crate::gamma_tools::GammaEstimateReport;
use crate::module_theory::InvariantReport;
use crate::tower_sim::{TowerRecord, TowerTable};

pub const TOWER_HEADER: &str = "n,m,e,rank,certified";
pub const REPORT_HEADER: &str = "m,e,rank,max_exponent,certified,residual";
pub const GAMMA_HEADER: &str = "n,e,e_torsion,lhs,rhs";

pub fn tower_csv(table: &TowerTable) -> String {
    let mut out = String::from(TOWER_HEADER);
    out.push('\n');
    for c in table.records() {
        let _ = writeln!(out, "{},{},{},{},{}", c.n, c.m, c.e, c.rank, c.certified);
    }
    out
}

pub fn report_csv(report: &InvariantReport) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for (rec, res) in report.records.iter().zip(&report.residuals) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            rec.m, rec.e, rec.rank, rec.max_exponent, rec.certified, res
        );
    }
    out
}

pub fn gamma_csv(report: &GammaEstimateReport) -> String {
    let mut out = String::from(GAMMA_HEADER);
    out.push('\n');
    for row in &report.rows {
        let _ = writeln!(out, "{},{},{},{},{}", row.n, row.e, row.e_torsion, row.lhs, row.rhs);
    }
    out
}

type Series = (&'static str, &'static str, fn(&TowerRecord) -> f64);

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

/// `e_{n,n}` and `rank_{n,n}` against `n` with a logarithmic y axis.
/// Zero values sit on the bottom edge as hollow markers.
pub fn diagonal_svg(diagonal: &[TowerRecord], title: &str) -> String {
    let max_value = diagonal
        .iter()
        .flat_map(|c| [c.e as f64, c.rank as f64])
        .fold(1.0, f64::max);
    let decades = max_value.log10().ceil().max(1.0);
    let n_lo = diagonal.iter().map(|c| c.n).min().unwrap_or(0) as f64;
    let n_hi = diagonal.iter().map(|c| c.n).max().unwrap_or(1) as f64;
    let span = (n_hi - n_lo).max(1.0);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x = |n: u32| LEFT + (n as f64 - n_lo) / span * plot_w;
    let y = |v: f64| {
        let l = if v >= 1.0 { v.log10() } else { 0.0 };
        TOP + plot_h - l / decades * plot_h
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    for k in 0..=decades as u32 {
        let yy = y(10f64.powi(k as i32));
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{yy:.1}" x2="{:.1}" y2="{yy:.1}" stroke="#ddd"/>"##,
            WIDTH - RIGHT
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">1e{k}</text>"#,
            LEFT - 8.0,
            yy + 4.0
        );
    }
    for c in diagonal {
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            x(c.n),
            HEIGHT - BOTTOM + 18.0,
            c.n
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">n = m</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        s,
        r##"<rect x="{LEFT}" y="{TOP}" width="{plot_w:.1}" height="{plot_h:.1}" fill="none" stroke="#333"/>"##
    );
    let series: [Series; 2] = [
        ("e", "#1f5fa8", |c| c.e as f64),
        ("rank", "#c0392b", |c| c.rank as f64),
    ];
    for (i, (name, colour, value)) in series.iter().enumerate() {
        let points: Vec<String> = diagonal
            .iter()
            .map(|c| format!("{:.1},{:.1}", x(c.n), y(value(c))))
            .collect();
        if points.len() > 1 {
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="2"/>"#,
                points.join(" ")
            );
        }
        for c in diagonal {
            let v = value(c);
            let fill = if v >= 1.0 { *colour } else { "white" };
            let _ = writeln!(
                s,
                r#"<circle cx="{:.1}" cy="{:.1}" r="4" fill="{fill}" stroke="{colour}"/>"#,
                x(c.n),
                y(v)
            );
        }
        let ly = TOP + 16.0 + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<circle cx="{:.1}" cy="{:.1}" r="4" fill="{colour}"/><text x="{:.1}" y="{:.1}">{name}</text>"#,
            LEFT + 16.0,
            ly - 4.0,
            LEFT + 26.0,
            ly
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(n: u32, e: u64, rank: usize) -> TowerRecord {
        TowerRecord {
            n,
            m: n,
            e,
            rank,
            max_exponent: 0,
            certified: true,
        }
    }

    #[test]
    fn csv_layout() {
        let t = TowerTable::new(vec![rec(1, 3, 0), rec(0, 1, 2)]);
        assert_eq!(tower_csv(&t), "n,m,e,rank,certified\n0,0,1,2,true\n1,1,3,0,true\n");
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let svg = diagonal_svg(&[rec(0, 1, 1), rec(1, 0, 3), rec(2, 120, 9)], "a < b");
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(svg.contains("a &lt; b"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(">1e3<"));
    }
}
