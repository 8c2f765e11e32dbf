//! Serializable reports. Every list is in a fixed order, so equal inputs give
//! byte-identical JSON.

use serde::Serialize;

use crate::composite::{build_quotient, QuotientEdge, QuotientPoset, SumSpec, TupleClass};
use crate::mountain_range::{KnotId, MountainRange, Point, Valley, Violation};
use crate::poset_analysis::{detect_peaks, detect_valleys, nonsimple_report, NonsimpleReport, TruncatedPoset};
use crate::simplicity::{criterion, CriterionVerdict, SimplicityError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RangeReport {
    pub knot: KnotId,
    pub prime: bool,
    pub genus: Option<u32>,
    pub peaks: Vec<Point>,
    pub valleys: Vec<Valley>,
    pub valid: bool,
    pub violations: Vec<Violation>,
}

pub fn range_report(range: &MountainRange) -> RangeReport {
    let report = range.validate();
    RangeReport {
        knot: range.knot_id.clone(),
        prime: range.prime,
        genus: range.genus,
        peaks: range.peaks.clone(),
        valleys: range.valleys().unwrap_or_default(),
        valid: report.is_valid(),
        violations: report.violations,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SummandEntry {
    pub knot: KnotId,
    pub count: usize,
    pub peaks: usize,
}

pub fn summand_entries(spec: &SumSpec) -> Vec<SummandEntry> {
    spec.summands()
        .iter()
        .map(|s| SummandEntry {
            knot: s.range.knot_id.clone(),
            count: s.count,
            peaks: s.range.peaks.len(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeEntry {
    pub id: usize,
    pub point: Point,
    pub representative: TupleClass,
    pub tuples: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientReport {
    pub summands: Vec<SummandEntry>,
    pub tb_min: i64,
    pub top_tb: i64,
    pub max_fiber_size: usize,
    pub nodes: Vec<NodeEntry>,
    pub edges: Vec<QuotientEdge>,
    pub peaks: Vec<usize>,
    pub valleys: Vec<usize>,
}

pub fn quotient_report(spec: &SumSpec, q: &QuotientPoset) -> QuotientReport {
    let poset = TruncatedPoset::from_quotient(q);
    QuotientReport {
        summands: summand_entries(spec),
        tb_min: q.tb_min,
        top_tb: q.top_tb,
        max_fiber_size: q.max_fiber_size(),
        nodes: q
            .nodes
            .iter()
            .map(|n| NodeEntry {
                id: n.id,
                point: n.point,
                representative: n.representative.clone(),
                tuples: n.members.len(),
            })
            .collect(),
        edges: q.edges.clone(),
        peaks: detect_peaks(&poset),
        valleys: detect_valleys(&poset),
    }
}

/// Everything computed for one sum in one window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumAnalysis {
    pub criterion: CriterionVerdict,
    pub simple_in_window: bool,
    pub quotient: QuotientReport,
    pub nonsimple: NonsimpleReport,
}

pub fn sum_analysis(spec: &SumSpec, tb_min: i64) -> Result<SumAnalysis, SimplicityError> {
    let verdict = criterion(spec)?;
    let q = build_quotient(spec, tb_min)?;
    let nonsimple = nonsimple_report(&TruncatedPoset::from_quotient(&q));
    Ok(SumAnalysis {
        criterion: verdict,
        simple_in_window: nonsimple.nonsimple.is_empty(),
        quotient: quotient_report(spec, &q),
        nonsimple,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}
