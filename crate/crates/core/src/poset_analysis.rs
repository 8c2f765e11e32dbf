//! Peaks, valleys and maximal nonsimple points of window-truncated class posets.
//!
//! A window only cuts the poset from below, so everything above a node is
//! present: parent and ancestor queries are exact. Only child queries at the
//! floor are missing, and none of the analyses here depend on them.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::composite::{QuotientEdge, QuotientPoset};
use crate::mountain_range::{Point, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("edge {parent} -> {child} references a node outside the poset")]
    DanglingEdge { parent: usize, child: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PosetNode {
    pub point: Point,
    pub label: String,
}

/// A class poset truncated at `tb_min`. Nodes carry their `(tb, r)` image;
/// edges go from parent to its `sign`-stabilization.
#[derive(Debug, Clone)]
pub struct TruncatedPoset {
    pub tb_min: i64,
    pub top_tb: i64,
    pub nodes: Vec<PosetNode>,
    pub edges: Vec<QuotientEdge>,
    parents: Vec<Vec<(Sign, usize)>>,
    children: Vec<Vec<(Sign, usize)>>,
    fibers: BTreeMap<Point, Vec<usize>>,
}

impl TruncatedPoset {
    pub fn new(
        tb_min: i64,
        top_tb: i64,
        nodes: Vec<PosetNode>,
        edges: Vec<QuotientEdge>,
    ) -> Result<Self, AnalysisError> {
        let mut parents = vec![Vec::new(); nodes.len()];
        let mut children = vec![Vec::new(); nodes.len()];
        for e in &edges {
            if e.parent >= nodes.len() || e.child >= nodes.len() {
                return Err(AnalysisError::DanglingEdge {
                    parent: e.parent,
                    child: e.child,
                });
            }
            parents[e.child].push((e.sign, e.parent));
            children[e.parent].push((e.sign, e.child));
        }
        for v in parents.iter_mut().chain(children.iter_mut()) {
            v.sort();
            v.dedup();
        }
        let mut fibers: BTreeMap<Point, Vec<usize>> = BTreeMap::new();
        for (id, n) in nodes.iter().enumerate() {
            fibers.entry(n.point).or_default().push(id);
        }
        Ok(TruncatedPoset {
            tb_min,
            top_tb,
            nodes,
            edges,
            parents,
            children,
            fibers,
        })
    }

    pub fn from_quotient(q: &QuotientPoset) -> Self {
        let nodes = q
            .nodes
            .iter()
            .map(|n| PosetNode {
                point: n.point,
                label: n.representative.to_string(),
            })
            .collect();
        TruncatedPoset::new(q.tb_min, q.top_tb, nodes, q.edges.clone())
            .expect("quotient edges always reference quotient nodes")
    }

    pub fn parents(&self, id: usize) -> &[(Sign, usize)] {
        &self.parents[id]
    }

    pub fn children(&self, id: usize) -> &[(Sign, usize)] {
        &self.children[id]
    }

    pub fn fiber(&self, p: Point) -> &[usize] {
        self.fibers.get(&p).map_or(&[], Vec::as_slice)
    }

    pub fn fibers(&self) -> &BTreeMap<Point, Vec<usize>> {
        &self.fibers
    }

    fn child(&self, id: usize, sign: Sign) -> Option<usize> {
        self.children[id]
            .iter()
            .find(|(s, _)| *s == sign)
            .map(|&(_, c)| c)
    }

    fn image_contains(&self, p: Point) -> bool {
        self.fibers.contains_key(&p)
    }

    /// Node ids in top-down order (tb descending, then id).
    fn top_down(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.nodes.len()).collect();
        ids.sort_by_key(|&i| (std::cmp::Reverse(self.nodes[i].point.tb), i));
        ids
    }
}

/// Structural defects of a poset: wrong child counts, edges that do not move
/// by a stabilization, or failures of `S+ S- = S- S+`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StructureIssue {
    ChildCount { node: usize, sign: Sign, count: usize },
    EdgeGeometry { parent: usize, child: usize },
    NonCommuting { node: usize },
}

pub fn check_structure(poset: &TruncatedPoset) -> Vec<StructureIssue> {
    let mut issues = Vec::new();
    for e in &poset.edges {
        let expected = poset.nodes[e.parent].point.stabilized(e.sign);
        if poset.nodes[e.child].point != expected {
            issues.push(StructureIssue::EdgeGeometry {
                parent: e.parent,
                child: e.child,
            });
        }
    }
    for (id, node) in poset.nodes.iter().enumerate() {
        if node.point.tb <= poset.tb_min {
            continue;
        }
        for sign in Sign::BOTH {
            let count = poset.children[id].iter().filter(|(s, _)| *s == sign).count();
            if count != 1 {
                issues.push(StructureIssue::ChildCount { node: id, sign, count });
            }
        }
        if node.point.tb >= poset.tb_min + 2 {
            let pm = poset
                .child(id, Sign::Plus)
                .and_then(|c| poset.child(c, Sign::Minus));
            let mp = poset
                .child(id, Sign::Minus)
                .and_then(|c| poset.child(c, Sign::Plus));
            if pm != mp {
                issues.push(StructureIssue::NonCommuting { node: id });
            }
        }
    }
    issues
}

/// Nodes with no parent.
pub fn detect_peaks(poset: &TruncatedPoset) -> Vec<usize> {
    (0..poset.nodes.len())
        .filter(|&id| poset.parents[id].is_empty())
        .collect()
}

/// Nodes with two distinct parents that share no common parent.
pub fn detect_valleys(poset: &TruncatedPoset) -> Vec<usize> {
    (0..poset.nodes.len())
        .filter(|&id| {
            let ps: BTreeSet<usize> = poset.parents[id].iter().map(|&(_, p)| p).collect();
            let ps: Vec<usize> = ps.into_iter().collect();
            ps.iter().enumerate().any(|(i, &a)| {
                ps[i + 1..].iter().any(|&b| {
                    let ga: BTreeSet<usize> = poset.parents[a].iter().map(|&(_, g)| g).collect();
                    poset.parents[b].iter().all(|(_, g)| !ga.contains(g))
                })
            })
        })
        .collect()
}

/// Nonsimple points whose every strict ancestor lies over a simple point.
pub fn find_nmax(poset: &TruncatedPoset) -> Vec<Point> {
    // tainted[id]: some strict ancestor of id sits over a nonsimple point
    let mut tainted = vec![false; poset.nodes.len()];
    for id in poset.top_down() {
        tainted[id] = poset.parents[id].iter().any(|&(_, p)| {
            tainted[p] || poset.fiber(poset.nodes[p].point).len() >= 2
        });
    }
    let mut out: Vec<Point> = poset
        .fibers
        .iter()
        .filter(|(_, ids)| ids.len() >= 2 && ids.iter().all(|&i| !tainted[i]))
        .map(|(&p, _)| p)
        .collect();
    out.sort_by_key(|p| (std::cmp::Reverse(p.tb), p.r));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dichotomy {
    /// The fiber contains a class with no parent.
    PeakInFiber,
    /// Exactly two classes, and the point is a valley of the image.
    ValleyPair,
    Violation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NmaxVerdict {
    pub point: Point,
    pub fiber_size: usize,
    pub verdict: Dichotomy,
}

/// A point is a valley of the image when both parent points are present and
/// the common grandparent point is not.
fn is_image_valley(poset: &TruncatedPoset, p: Point) -> bool {
    poset.image_contains(p.parent_point(Sign::Plus))
        && poset.image_contains(p.parent_point(Sign::Minus))
        && !poset.image_contains(Point::new(p.tb + 2, p.r))
}

pub fn check_nmax_dichotomy(poset: &TruncatedPoset) -> Vec<NmaxVerdict> {
    find_nmax(poset)
        .into_iter()
        .map(|point| {
            let ids = poset.fiber(point);
            let verdict = if ids.iter().any(|&i| poset.parents[i].is_empty()) {
                Dichotomy::PeakInFiber
            } else if ids.len() == 2 && is_image_valley(poset, point) {
                Dichotomy::ValleyPair
            } else {
                Dichotomy::Violation
            };
            NmaxVerdict {
                point,
                fiber_size: ids.len(),
                verdict,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonsimplePoint {
    pub point: Point,
    pub fiber_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonsimpleReport {
    pub tb_min: i64,
    pub top_tb: i64,
    pub nonsimple: Vec<NonsimplePoint>,
    pub nmax: Vec<NmaxVerdict>,
}

pub fn nonsimple_report(poset: &TruncatedPoset) -> NonsimpleReport {
    let mut nonsimple: Vec<NonsimplePoint> = poset
        .fibers
        .iter()
        .filter(|(_, ids)| ids.len() >= 2)
        .map(|(&point, ids)| NonsimplePoint {
            point,
            fiber_size: ids.len(),
        })
        .collect();
    nonsimple.sort_by_key(|n| (std::cmp::Reverse(n.point.tb), n.point.r));
    NonsimpleReport {
        tb_min: poset.tb_min,
        top_tb: poset.top_tb,
        nonsimple,
        nmax: check_nmax_dichotomy(poset),
    }
}

/// A hand-built poset that breaks the N_max dichotomy: three classes over one
/// point, none of them a peak, with all ancestors simple. It cannot come from
/// a real quotient (a parent would need two `+`-children) and serves as a
/// negative control.
pub fn dichotomy_violation_fixture() -> TruncatedPoset {
    let node = |tb, r, label: &str| PosetNode {
        point: Point::new(tb, r),
        label: label.to_string(),
    };
    let nodes = vec![
        node(1, -1, "P"),
        node(1, 1, "Q"),
        node(0, 0, "X1"),
        node(0, 0, "X2"),
        node(0, 0, "X3"),
    ];
    let edge = |parent, child, sign| QuotientEdge { parent, child, sign };
    let edges = vec![
        edge(0, 2, Sign::Plus),
        edge(0, 3, Sign::Plus),
        edge(1, 4, Sign::Minus),
    ];
    TruncatedPoset::new(0, 1, nodes, edges).expect("fixture edges are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composite::{build_quotient, peaks_of_sum, SumSpec, Summand};
    use crate::mountain_range::MountainRange;
    use std::sync::Arc;

    fn spec(parts: &[(&str, &[(i64, i64)], usize)]) -> SumSpec {
        SumSpec::new(
            parts
                .iter()
                .map(|(id, peaks, count)| Summand {
                    range: Arc::new(MountainRange::new(
                        *id,
                        peaks.iter().map(|&(tb, r)| Point::new(tb, r)).collect(),
                    )),
                    count: *count,
                })
                .collect(),
        )
        .unwrap()
    }

    const A: &[(i64, i64)] = &[(0, -2), (0, 2)];
    const B: &[(i64, i64)] = &[(0, -4), (0, 0), (0, 4)];
    const C: &[(i64, i64)] = &[(1, 0)];

    fn poset(s: &SumSpec, depth: i64) -> TruncatedPoset {
        TruncatedPoset::from_quotient(&build_quotient(s, s.top_tb() - depth).unwrap())
    }

    #[test]
    fn peak_counts() {
        assert_eq!(detect_peaks(&poset(&spec(&[("A", A, 2)]), 4)).len(), 3);
        assert_eq!(detect_peaks(&poset(&spec(&[("C", C, 1)]), 4)).len(), 1);
        let b2 = spec(&[("B", B, 2)]);
        let p = poset(&b2, 4);
        let mut got: Vec<Point> = detect_peaks(&p).iter().map(|&i| p.nodes[i].point).collect();
        let mut want: Vec<Point> = peaks_of_sum(&b2).iter().map(|x| x.point).collect();
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn valley_detection() {
        let p = poset(&spec(&[("A", A, 1)]), 4);
        let v: Vec<Point> = detect_valleys(&p).iter().map(|&i| p.nodes[i].point).collect();
        assert_eq!(v, vec![Point::new(-2, 0)]);
        assert!(detect_valleys(&poset(&spec(&[("C", C, 1)]), 4)).is_empty());
        let p = poset(&spec(&[("A", A, 2)]), 6);
        assert_eq!(detect_valleys(&p).len(), 2);
    }

    #[test]
    fn valley_one_below_top_is_found() {
        // peaks (0,0) and (0,2) meet at (-1,1), one level below the top
        let p = poset(&spec(&[("N", &[(0, 0), (0, 2)], 1)]), 3);
        let v: Vec<Point> = detect_valleys(&p).iter().map(|&i| p.nodes[i].point).collect();
        assert_eq!(v, vec![Point::new(-1, 1)]);
    }

    #[test]
    fn nmax_examples() {
        let b2 = spec(&[("B", B, 2)]);
        let p = poset(&b2, 4);
        assert_eq!(find_nmax(&p), vec![Point::new(1, 0)]);
        let verdicts = check_nmax_dichotomy(&p);
        assert_eq!(verdicts[0].verdict, Dichotomy::PeakInFiber);
        assert!(find_nmax(&poset(&spec(&[("A", A, 2)]), 6)).is_empty());
        assert!(find_nmax(&poset(&spec(&[("C", C, 1)]), 6)).is_empty());
        assert!(check_nmax_dichotomy(&poset(&spec(&[("C", C, 1)]), 6)).is_empty());
    }

    #[test]
    fn fixture_is_flagged() {
        let p = dichotomy_violation_fixture();
        let v = check_nmax_dichotomy(&p);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].verdict, Dichotomy::Violation);
        assert_eq!(v[0].fiber_size, 3);
        assert!(!check_structure(&p).is_empty());
    }

    #[test]
    fn built_quotients_are_well_formed() {
        for s in [spec(&[("B", B, 2)]), spec(&[("A", A, 1), ("C", C, 2)])] {
            assert_eq!(check_structure(&poset(&s, 5)), vec![]);
        }
    }

    #[test]
    fn dangling_edges_rejected() {
        let err = TruncatedPoset::new(
            0,
            0,
            vec![],
            vec![QuotientEdge {
                parent: 0,
                child: 1,
                sign: Sign::Plus,
            }],
        )
        .unwrap_err();
        assert_eq!(err, AnalysisError::DanglingEdge { parent: 0, child: 1 });
    }
}
