//! ASCII and SVG diagrams of mountain ranges and quotient images.
//!
//! `tb` runs down the page, `r` across. ASCII uses one character per lattice
//! point in the bounding box of the window:
//!
//! | cell | meaning |
//! |------|---------|
//! | `P`  | peak (some class over the point has no parent) |
//! | `V`  | valley |
//! | `2`..`9` | number of classes over a nonsimple point (`*` above 9) |
//! | `o`  | ordinary member |
//! | `.`  | not in the image |
//!
//! Each row starts with its `tb` value. SVG draws one circle per image point
//! with `data-tb`, `data-r` and `data-fiber` attributes and a `class` of
//! `peak`, `valley`, `nonsimple` or `member`; nonsimple points also get their
//! class count as a text label. Stabilization edges are drawn as lines.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use crate::composite::QuotientPoset;
use crate::mountain_range::{MountainRange, Point, Sign};
use crate::poset_analysis::{detect_peaks, detect_valleys, TruncatedPoset};

pub const EMPTY_PLACEHOLDER: &str = "(empty diagram)";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderSpec {
    pub format: RenderFormat,
    pub tb_min: i64,
}

pub enum RenderModel<'a> {
    Range(&'a MountainRange),
    Quotient(&'a QuotientPoset),
}

#[derive(Debug, Clone, Copy, Default)]
struct Cell {
    peak: bool,
    valley: bool,
    fiber: usize,
}

impl Cell {
    fn kind(&self) -> &'static str {
        if self.fiber > 1 {
            "nonsimple"
        } else if self.peak {
            "peak"
        } else if self.valley {
            "valley"
        } else {
            "member"
        }
    }

    fn glyph(&self) -> char {
        match self.fiber {
            0 | 1 if self.peak => 'P',
            0 | 1 if self.valley => 'V',
            0 | 1 => 'o',
            k if k <= 9 => char::from_digit(k as u32, 10).expect("single digit"),
            _ => '*',
        }
    }
}

struct Diagram {
    cells: BTreeMap<Point, Cell>,
    edges: BTreeSet<(Point, Point)>,
}

fn range_diagram(range: &MountainRange, tb_min: i64) -> Diagram {
    let mut cells: BTreeMap<Point, Cell> = range
        .points_down_to(tb_min)
        .into_iter()
        .map(|p| (p, Cell { fiber: 1, ..Cell::default() }))
        .collect();
    for p in &range.peaks {
        if let Some(c) = cells.get_mut(p) {
            c.peak = true;
        }
    }
    if let Ok(vs) = range.valleys() {
        for v in vs {
            if let Some(c) = cells.get_mut(&v.point()) {
                c.valley = true;
            }
        }
    }
    let mut edges = BTreeSet::new();
    for &p in cells.keys() {
        for s in Sign::BOTH {
            let q = p.stabilized(s);
            if cells.contains_key(&q) {
                edges.insert((p, q));
            }
        }
    }
    Diagram { cells, edges }
}

fn quotient_diagram(q: &QuotientPoset, tb_min: i64) -> Diagram {
    let poset = TruncatedPoset::from_quotient(q);
    let mut cells: BTreeMap<Point, Cell> = BTreeMap::new();
    for (&p, ids) in q.fibers() {
        if p.tb >= tb_min {
            cells.insert(p, Cell { fiber: ids.len(), ..Cell::default() });
        }
    }
    for id in detect_peaks(&poset) {
        if let Some(c) = cells.get_mut(&q.nodes[id].point) {
            c.peak = true;
        }
    }
    for id in detect_valleys(&poset) {
        if let Some(c) = cells.get_mut(&q.nodes[id].point) {
            c.valley = true;
        }
    }
    let edges = q
        .edges
        .iter()
        .map(|e| (q.nodes[e.parent].point, q.nodes[e.child].point))
        .filter(|(a, b)| cells.contains_key(a) && cells.contains_key(b))
        .collect();
    Diagram { cells, edges }
}

pub fn render(model: &RenderModel<'_>, spec: &RenderSpec) -> Vec<u8> {
    let d = match model {
        RenderModel::Range(r) => range_diagram(r, spec.tb_min),
        RenderModel::Quotient(q) => quotient_diagram(q, spec.tb_min),
    };
    let text = match spec.format {
        RenderFormat::Ascii => ascii(&d),
        RenderFormat::Svg => svg(&d),
    };
    text.into_bytes()
}

/// The placeholder drawn for a window with no points.
pub fn empty_diagram(format: RenderFormat) -> Vec<u8> {
    let d = Diagram {
        cells: BTreeMap::new(),
        edges: BTreeSet::new(),
    };
    match format {
        RenderFormat::Ascii => ascii(&d),
        RenderFormat::Svg => svg(&d),
    }
    .into_bytes()
}

struct Bounds {
    top: i64,
    bottom: i64,
    left: i64,
    right: i64,
}

fn bounds(d: &Diagram) -> Option<Bounds> {
    let first = d.cells.keys().next()?;
    let mut b = Bounds {
        top: first.tb,
        bottom: first.tb,
        left: first.r,
        right: first.r,
    };
    for p in d.cells.keys() {
        b.top = b.top.max(p.tb);
        b.bottom = b.bottom.min(p.tb);
        b.left = b.left.min(p.r);
        b.right = b.right.max(p.r);
    }
    Some(b)
}

fn ascii(d: &Diagram) -> String {
    let Some(b) = bounds(d) else {
        return format!("{EMPTY_PLACEHOLDER}\n");
    };
    let width = [b.top, b.bottom]
        .iter()
        .map(|t| t.to_string().len())
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    for tb in (b.bottom..=b.top).rev() {
        let row: String = (b.left..=b.right)
            .map(|r| d.cells.get(&Point::new(tb, r)).map_or('.', Cell::glyph))
            .collect();
        writeln!(out, "{tb:>width$} {row}").expect("writing to a String");
    }
    out
}

const STEP: i64 = 24;
const MARGIN: i64 = 24;

fn svg(d: &Diagram) -> String {
    let Some(b) = bounds(d) else {
        return format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"160\" height=\"40\">\n\
             <text x=\"8\" y=\"24\">{EMPTY_PLACEHOLDER}</text>\n</svg>\n"
        );
    };
    let x = |r: i64| MARGIN + (r - b.left) * STEP;
    let y = |tb: i64| MARGIN + (b.top - tb) * STEP;
    let width = 2 * MARGIN + (b.right - b.left) * STEP;
    let height = 2 * MARGIN + (b.top - b.bottom) * STEP;
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(
        w,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(
        w,
        "<style>line{{stroke:#999;stroke-width:1}}circle{{stroke:#000;stroke-width:1}}\
         .member{{fill:#fff}}.peak{{fill:#2a6}}.valley{{fill:#26c}}.nonsimple{{fill:#d33}}\
         text{{font:10px sans-serif;text-anchor:middle}}</style>"
    );
    for (p, q) in &d.edges {
        let _ = writeln!(
            w,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            x(p.r),
            y(p.tb),
            x(q.r),
            y(q.tb)
        );
    }
    for (p, c) in &d.cells {
        let radius = if c.fiber > 1 { 8 } else { 5 };
        let _ = writeln!(
            w,
            "<circle class=\"{}\" cx=\"{}\" cy=\"{}\" r=\"{radius}\" data-tb=\"{}\" data-r=\"{}\" data-fiber=\"{}\"/>",
            c.kind(),
            x(p.r),
            y(p.tb),
            p.tb,
            p.r,
            c.fiber
        );
        if c.fiber > 1 {
            let _ = writeln!(
                w,
                "<text x=\"{}\" y=\"{}\">{}</text>",
                x(p.r),
                y(p.tb) + 4,
                c.fiber
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composite::{build_quotient, SumSpec, Summand};
    use std::sync::Arc;

    fn a() -> MountainRange {
        MountainRange::new("A", vec![Point::new(0, -2), Point::new(0, 2)])
    }

    fn text(model: RenderModel<'_>, format: RenderFormat, tb_min: i64) -> String {
        String::from_utf8(render(&model, &RenderSpec { format, tb_min })).unwrap()
    }

    #[test]
    fn range_a_ascii_golden() {
        let got = text(RenderModel::Range(&a()), RenderFormat::Ascii, -3);
        let want = concat!(
            " 0 ...P...P...\n",
            "-1 ..o.o.o.o..\n",
            "-2 .o.o.V.o.o.\n",
            "-3 o.o.o.o.o.o\n",
        );
        assert_eq!(got, want);
    }

    #[test]
    fn cells_follow_level_points() {
        let range = a();
        let got = text(RenderModel::Range(&range), RenderFormat::Ascii, -5);
        let rows: Vec<&str> = got.lines().collect();
        let left = -7;
        for (i, tb) in (-5..=0).rev().enumerate() {
            let row = rows[i].split_whitespace().nth(1).unwrap();
            let marked: Vec<i64> = row
                .chars()
                .enumerate()
                .filter(|(_, ch)| *ch != '.')
                .map(|(j, _)| left + j as i64)
                .collect();
            assert_eq!(marked, range.level_points(tb), "tb = {tb}");
        }
    }

    #[test]
    fn b2_svg_marks_multiplicity() {
        let b = MountainRange::new(
            "B",
            vec![Point::new(0, -4), Point::new(0, 0), Point::new(0, 4)],
        );
        let spec = SumSpec::new(vec![Summand {
            range: Arc::new(b),
            count: 2,
        }])
        .unwrap();
        let q = build_quotient(&spec, -1).unwrap();
        let svg = text(RenderModel::Quotient(&q), RenderFormat::Svg, -1);
        let at_top: Vec<&str> = svg.lines().filter(|l| l.contains("data-tb=\"1\" data-r=\"0\"")).collect();
        assert_eq!(at_top.len(), 1);
        assert!(at_top[0].starts_with("<circle class=\"nonsimple\""), "{}", at_top[0]);
        assert!(at_top[0].ends_with("data-fiber=\"2\"/>"), "{}", at_top[0]);
        let ascii = text(RenderModel::Quotient(&q), RenderFormat::Ascii, -1);
        assert_eq!(ascii.lines().next().unwrap(), " 1 ..P...P...2...P...P..");
    }

    #[test]
    fn empty_window_placeholder() {
        let range = a();
        assert_eq!(text(RenderModel::Range(&range), RenderFormat::Ascii, 1), "(empty diagram)\n");
        assert!(text(RenderModel::Range(&range), RenderFormat::Svg, 1).contains(EMPTY_PLACEHOLDER));
    }

    #[test]
    fn deterministic() {
        let range = a();
        let one = text(RenderModel::Range(&range), RenderFormat::Svg, -4);
        let two = text(RenderModel::Range(&range), RenderFormat::Svg, -4);
        assert_eq!(one, two);
    }
}
