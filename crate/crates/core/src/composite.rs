//! Connected sums of simple knots.
//!
//! A class of `K_1 # ... # K_n` is a tuple of factor classes modulo two moves:
//! transferring a stabilization from one factor to another, and permuting
//! factors of the same knot type. Permutations are absorbed by keeping tuples
//! in canonical order; transfers are resolved per `(tb, r)` fiber with a
//! disjoint-set union, which is exact because transfers never change the
//! invariants of the sum.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dsu::DisjointSets;
use crate::mountain_range::{KnotId, MountainRange, Point, Sign, SimpleClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("sum has no summands")]
    Empty,
    #[error("summand {knot} has count 0")]
    ZeroCount { knot: KnotId },
    #[error("knot {knot} appears more than once")]
    DuplicateKnot { knot: KnotId },
    #[error("summand {knot} is not usable: {reason}")]
    InvalidSummand { knot: KnotId, reason: String },
    #[error("unknown knot {knot}")]
    UnknownKnot { knot: KnotId },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompositeError {
    #[error("factor multiset does not match summand multiplicities")]
    MultiplicityMismatch,
    #[error("window floor {tb_min} is above the top level {top_tb}")]
    WindowEmpty { tb_min: i64, top_tb: i64 },
}

#[derive(Debug, Clone)]
pub struct Summand {
    pub range: Arc<MountainRange>,
    pub count: usize,
}

/// A connected-sum description: distinct prime summands with multiplicities.
#[derive(Debug, Clone)]
pub struct SumSpec {
    summands: Vec<Summand>,
    // slot index -> summand index
    slot_group: Vec<usize>,
    group_start: Vec<usize>,
}

impl SumSpec {
    /// Rejects empty specs, zero counts, repeated knots, invalid ranges and
    /// summands not declared prime.
    pub fn new(summands: Vec<Summand>) -> Result<Self, SpecError> {
        if summands.is_empty() {
            return Err(SpecError::Empty);
        }
        let mut seen = BTreeSet::new();
        for s in &summands {
            let knot = s.range.knot_id.clone();
            if !seen.insert(knot.clone()) {
                return Err(SpecError::DuplicateKnot { knot });
            }
            if s.count == 0 {
                return Err(SpecError::ZeroCount { knot });
            }
            check_summand(&s.range)?;
        }
        let mut slot_group = Vec::new();
        let mut group_start = Vec::new();
        for (g, s) in summands.iter().enumerate() {
            group_start.push(slot_group.len());
            slot_group.extend(std::iter::repeat_n(g, s.count));
        }
        Ok(SumSpec {
            summands,
            slot_group,
            group_start,
        })
    }

    /// Builds a spec from `(knot, count)` entries resolved against `registry`.
    pub fn from_registry(
        registry: &BTreeMap<KnotId, Arc<MountainRange>>,
        entries: &[(KnotId, usize)],
    ) -> Result<Self, SpecError> {
        let summands = entries
            .iter()
            .map(|(knot, count)| {
                registry
                    .get(knot)
                    .map(|range| Summand {
                        range: Arc::clone(range),
                        count: *count,
                    })
                    .ok_or_else(|| SpecError::UnknownKnot { knot: knot.clone() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        SumSpec::new(summands)
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    /// Total number of factors.
    pub fn n(&self) -> usize {
        self.slot_group.len()
    }

    pub fn slot_group(&self, slot: usize) -> usize {
        self.slot_group[slot]
    }

    pub fn slot_range(&self, slot: usize) -> &MountainRange {
        &self.summands[self.slot_group[slot]].range
    }

    pub fn group_slots(&self, group: usize) -> std::ops::Range<usize> {
        let start = self.group_start[group];
        start..start + self.summands[group].count
    }

    /// Highest tb reached by the sum: all factors at their highest peaks.
    pub fn top_tb(&self) -> i64 {
        let factors: i64 = self
            .summands
            .iter()
            .map(|s| s.range.top_tb() * s.count as i64)
            .sum();
        factors + self.n() as i64 - 1
    }

    /// Lowest factor tb that can occur in a tuple whose sum has `tb >= tb_min`.
    pub fn factor_floor(&self, tb_min: i64) -> i64 {
        (0..self.n())
            .map(|slot| self.slot_floor(slot, tb_min))
            .min()
            .unwrap_or(tb_min)
    }

    fn slot_floor(&self, slot: usize, tb_min: i64) -> i64 {
        let others: i64 = (0..self.n())
            .filter(|&j| j != slot)
            .map(|j| self.slot_range(j).top_tb())
            .sum();
        tb_min - (self.n() as i64 - 1) - others
    }

    /// Attach knot identities to the factors of a tuple.
    pub fn label(&self, tuple: &TupleClass) -> Vec<SimpleClass> {
        tuple
            .factors
            .iter()
            .enumerate()
            .map(|(slot, &p)| SimpleClass::new(self.slot_range(slot).knot_id.clone(), p))
            .collect()
    }

    /// Re-sorts each group of same-knot factors into canonical order.
    fn canonicalize_points(&self, factors: &mut [Point]) {
        for g in 0..self.summands.len() {
            factors[self.group_slots(g)].sort_by_key(|p| p.desc_key());
        }
    }
}

fn check_summand(range: &MountainRange) -> Result<(), SpecError> {
    let report = range.validate();
    if !report.is_valid() {
        let reason = report
            .violations
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ");
        return Err(SpecError::InvalidSummand {
            knot: range.knot_id.clone(),
            reason,
        });
    }
    if !range.prime {
        return Err(SpecError::InvalidSummand {
            knot: range.knot_id.clone(),
            reason: "not declared prime".into(),
        });
    }
    Ok(())
}

/// A canonical tuple of factor classes. Factors are grouped by summand in spec
/// order and sorted descending by `(tb, r)` within each group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TupleClass {
    pub factors: Vec<Point>,
}

impl Ord for TupleClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.factors
            .iter()
            .map(|p| p.desc_key())
            .cmp(other.factors.iter().map(|p| p.desc_key()))
    }
}

impl PartialOrd for TupleClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for TupleClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[i64; 2]> = self.factors.iter().map(|p| [p.tb, p.r]).collect();
        pairs.serialize(s)
    }
}

impl std::fmt::Display for TupleClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

impl TupleClass {
    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn invariants(&self) -> Point {
        sum_invariants(self)
    }
}

/// `tb` of a connected sum adds plus one per gluing; `r` adds.
pub fn sum_invariants(tuple: &TupleClass) -> Point {
    let n = tuple.factors.len() as i64;
    let tb: i64 = tuple.factors.iter().map(|p| p.tb).sum();
    let r: i64 = tuple.factors.iter().map(|p| p.r).sum();
    Point::new(tb + n - 1, r)
}

/// Puts factor classes into the canonical grouping of `spec`. Input order is
/// irrelevant; the multiset of knot ids must match the multiplicities.
pub fn canonicalize_tuple(
    factors: &[SimpleClass],
    spec: &SumSpec,
) -> Result<TupleClass, CompositeError> {
    if factors.len() != spec.n() {
        return Err(CompositeError::MultiplicityMismatch);
    }
    let mut points = Vec::with_capacity(spec.n());
    for (g, s) in spec.summands.iter().enumerate() {
        let group: Vec<Point> = factors
            .iter()
            .filter(|c| c.knot_id == s.range.knot_id)
            .map(SimpleClass::point)
            .collect();
        if group.len() != s.count {
            return Err(CompositeError::MultiplicityMismatch);
        }
        debug_assert_eq!(points.len(), spec.group_slots(g).start);
        points.extend(group);
    }
    spec.canonicalize_points(&mut points);
    Ok(TupleClass { factors: points })
}

/// All tuples reached by one stabilization transfer: factor `i` is replaced by
/// its `s`-parent and factor `j` by its `s`-stabilization.
pub fn relation_neighbors(spec: &SumSpec, tuple: &TupleClass) -> BTreeSet<TupleClass> {
    let mut out = BTreeSet::new();
    let n = tuple.factors.len();
    for i in 0..n {
        let range = spec.slot_range(i);
        for sign in Sign::BOTH {
            let Some(parent) = range.parent_of(tuple.factors[i], sign) else {
                continue;
            };
            for j in (0..n).filter(|&j| j != i) {
                let mut factors = tuple.factors.clone();
                factors[i] = parent;
                factors[j] = factors[j].stabilized(sign);
                spec.canonicalize_points(&mut factors);
                out.insert(TupleClass { factors });
            }
        }
    }
    out
}

/// Canonical tuples of factor classes with factor-tb sum at least `min_factor_tb`
/// (and exactly `exact` when given).
fn enumerate_tuples(spec: &SumSpec, min_factor_tb: i64, exact: Option<i64>) -> Vec<TupleClass> {
    let n = spec.n();
    let tops: Vec<i64> = (0..n).map(|s| spec.slot_range(s).top_tb()).collect();
    // suffix_top[k] = sum of tops of slots k..n
    let mut suffix_top = vec![0i64; n + 1];
    for k in (0..n).rev() {
        suffix_top[k] = suffix_top[k + 1] + tops[k];
    }
    let candidates: Vec<Vec<Point>> = spec
        .summands
        .iter()
        .map(|s| {
            let floor = min_factor_tb - (suffix_top[0] - s.range.top_tb());
            let mut pts = s.range.points_down_to(floor);
            pts.sort_by_key(|p| p.desc_key());
            pts
        })
        .collect();

    struct Walk<'a> {
        spec: &'a SumSpec,
        candidates: &'a [Vec<Point>],
        suffix_top: &'a [i64],
        min: i64,
        exact: Option<i64>,
        n: usize,
        current: Vec<Point>,
        out: Vec<TupleClass>,
    }

    impl Walk<'_> {
        fn go(&mut self, slot: usize, start: usize, tb_sum: i64) {
            if slot == self.n {
                if self.exact.is_none_or(|t| t == tb_sum) {
                    self.out.push(TupleClass {
                        factors: self.current.clone(),
                    });
                }
                return;
            }
            let group = self.spec.slot_group(slot);
            let last_in_group = self.spec.group_slots(group).end == slot + 1;
            let rest = self.suffix_top[slot + 1];
            let cands = &self.candidates[group];
            for idx in start..cands.len() {
                let p = cands[idx];
                // candidates are tb-descending, so later ones only get worse
                if tb_sum + p.tb + rest < self.min {
                    break;
                }
                if let Some(t) = self.exact {
                    if tb_sum + p.tb + rest < t {
                        break;
                    }
                }
                self.current.push(p);
                let next_start = if last_in_group { 0 } else { idx };
                self.go(slot + 1, next_start, tb_sum + p.tb);
                self.current.pop();
            }
        }
    }

    let mut walk = Walk {
        spec,
        candidates: &candidates,
        suffix_top: &suffix_top,
        min: exact.unwrap_or(min_factor_tb).max(min_factor_tb),
        exact,
        n,
        current: Vec::with_capacity(n),
        out: Vec::new(),
    };
    walk.go(0, 0, 0);
    walk.out
}

/// One equivalence class inside a fiber; `members` is ascending, so the first
/// member is the class's representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberClass {
    pub members: Vec<TupleClass>,
}

impl FiberClass {
    pub fn representative(&self) -> &TupleClass {
        &self.members[0]
    }

    pub fn contains(&self, tuple: &TupleClass) -> bool {
        self.members.binary_search(tuple).is_ok()
    }
}

fn partition_fiber(spec: &SumSpec, mut tuples: Vec<TupleClass>) -> Vec<FiberClass> {
    tuples.sort();
    tuples.dedup();
    let index: HashMap<&TupleClass, usize> = tuples.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut dsu = DisjointSets::new(tuples.len());
    for (i, t) in tuples.iter().enumerate() {
        for nb in relation_neighbors(spec, t) {
            let j = *index
                .get(&nb)
                .expect("stabilization transfer left the fiber");
            dsu.union(i, j);
        }
    }
    dsu.groups()
        .into_iter()
        .map(|g| FiberClass {
            members: g.into_iter().map(|i| tuples[i].clone()).collect(),
        })
        .collect()
}

/// The classes of the sum with invariants `(tb, r)`; empty if the point is
/// not reached.
pub fn enumerate_fiber(spec: &SumSpec, tb: i64, r: i64) -> Vec<FiberClass> {
    let target = tb - (spec.n() as i64 - 1);
    let tuples: Vec<TupleClass> = enumerate_tuples(spec, target, Some(target))
        .into_iter()
        .filter(|t| t.factors.iter().map(|p| p.r).sum::<i64>() == r)
        .collect();
    partition_fiber(spec, tuples)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientNode {
    pub id: usize,
    pub point: Point,
    pub representative: TupleClass,
    pub members: Vec<TupleClass>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct QuotientEdge {
    pub parent: usize,
    pub child: usize,
    pub sign: Sign,
}

/// The classes of a connected sum with `tb >= tb_min`, joined by signed
/// stabilization edges.
#[derive(Debug, Clone)]
pub struct QuotientPoset {
    pub tb_min: i64,
    pub top_tb: i64,
    pub nodes: Vec<QuotientNode>,
    pub edges: Vec<QuotientEdge>,
    index: HashMap<TupleClass, usize>,
    children: Vec<[Option<usize>; 2]>,
    parents: Vec<Vec<(Sign, usize)>>,
    fibers: BTreeMap<Point, Vec<usize>>,
}

fn sign_slot(sign: Sign) -> usize {
    match sign {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

impl QuotientPoset {
    pub fn node_of(&self, tuple: &TupleClass) -> Option<usize> {
        self.index.get(tuple).copied()
    }

    /// `None` when the node sits on the window floor.
    pub fn child(&self, id: usize, sign: Sign) -> Option<usize> {
        self.children[id][sign_slot(sign)]
    }

    pub fn parents(&self, id: usize) -> &[(Sign, usize)] {
        &self.parents[id]
    }

    pub fn fiber(&self, point: Point) -> &[usize] {
        self.fibers.get(&point).map_or(&[], Vec::as_slice)
    }

    /// Points of the window image with their class ids.
    pub fn fibers(&self) -> &BTreeMap<Point, Vec<usize>> {
        &self.fibers
    }

    pub fn max_fiber_size(&self) -> usize {
        self.fibers.values().map(Vec::len).max().unwrap_or(0)
    }
}

pub fn build_quotient(spec: &SumSpec, tb_min: i64) -> Result<QuotientPoset, CompositeError> {
    let top_tb = spec.top_tb();
    if tb_min > top_tb {
        return Err(CompositeError::WindowEmpty { tb_min, top_tb });
    }
    let n = spec.n() as i64;
    let mut by_point: BTreeMap<Point, Vec<TupleClass>> = BTreeMap::new();
    for t in enumerate_tuples(spec, tb_min - (n - 1), None) {
        by_point.entry(sum_invariants(&t)).or_default().push(t);
    }
    // BTreeMap order on Point is tb ascending; nodes are listed top-down.
    let fibers: Vec<(Point, Vec<TupleClass>)> = by_point.into_iter().rev().collect();
    let mut partitioned: Vec<(Point, Vec<FiberClass>)> = fibers
        .into_par_iter()
        .map(|(p, tuples)| (p, partition_fiber(spec, tuples)))
        .collect();
    partitioned.sort_by_key(|(p, _)| (std::cmp::Reverse(p.tb), p.r));

    let mut nodes = Vec::new();
    let mut index = HashMap::new();
    let mut fiber_ids: BTreeMap<Point, Vec<usize>> = BTreeMap::new();
    for (point, classes) in partitioned {
        for class in classes {
            let id = nodes.len();
            for m in &class.members {
                index.insert(m.clone(), id);
            }
            fiber_ids.entry(point).or_default().push(id);
            nodes.push(QuotientNode {
                id,
                point,
                representative: class.members[0].clone(),
                members: class.members,
            });
        }
    }

    let children: Vec<[Option<usize>; 2]> = nodes
        .par_iter()
        .map(|node| {
            if node.point.tb <= tb_min {
                return [None, None];
            }
            Sign::BOTH.map(|sign| {
                let mut factors = node.representative.factors.clone();
                factors[0] = factors[0].stabilized(sign);
                spec.canonicalize_points(&mut factors);
                let child = index
                    .get(&TupleClass { factors })
                    .copied()
                    .expect("stabilization of a window class missing from window");
                Some(child)
            })
        })
        .collect();

    let mut parents: Vec<Vec<(Sign, usize)>> = vec![Vec::new(); nodes.len()];
    let mut edges = Vec::new();
    for (id, ch) in children.iter().enumerate() {
        for sign in Sign::BOTH {
            if let Some(c) = ch[sign_slot(sign)] {
                parents[c].push((sign, id));
                edges.push(QuotientEdge {
                    parent: id,
                    child: c,
                    sign,
                });
            }
        }
    }
    for p in &mut parents {
        p.sort();
    }

    Ok(QuotientPoset {
        tb_min,
        top_tb,
        nodes,
        edges,
        index,
        children,
        parents,
        fibers: fiber_ids,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumPeak {
    pub tuple: TupleClass,
    pub point: Point,
}

/// Canonical tuples whose every factor is a peak of its range.
pub fn peaks_of_sum(spec: &SumSpec) -> Vec<SumPeak> {
    let mut partial: Vec<Vec<Point>> = vec![Vec::new()];
    for s in &spec.summands {
        let mut peaks = s.range.peaks.clone();
        peaks.sort_by_key(|p| p.desc_key());
        let multisets = multisets(&peaks, s.count);
        partial = partial
            .into_iter()
            .flat_map(|prefix| {
                multisets.iter().map(move |m| {
                    let mut v = prefix.clone();
                    v.extend_from_slice(m);
                    v
                })
            })
            .collect();
    }
    let mut out: Vec<SumPeak> = partial
        .into_iter()
        .map(|factors| {
            let tuple = TupleClass { factors };
            SumPeak {
                point: sum_invariants(&tuple),
                tuple,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        (std::cmp::Reverse(a.point.tb), a.point.r, &a.tuple)
            .cmp(&(std::cmp::Reverse(b.point.tb), b.point.r, &b.tuple))
    });
    out
}

// Nondecreasing index sequences of length k over `items`.
fn multisets(items: &[Point], k: usize) -> Vec<Vec<Point>> {
    fn rec(items: &[Point], k: usize, start: usize, cur: &mut Vec<Point>, out: &mut Vec<Vec<Point>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}
