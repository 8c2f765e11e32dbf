//! Legendrian simplicity of connected sums.
//!
//! [`criterion`] decides simplicity from peak counts and multiplicities alone.
//! [`simplicity_in_window`] is the brute-force counterpart over a finite
//! window, and [`nonsimplicity_witness`] builds the explicit pair of distinct
//! classes with equal invariants. For powers of a two-peak knot,
//! [`canonical_form`] and [`xy_invariants`] give the normal form
//! `S+^a S-^b (p·P1 # q·P2)` of every class.

use serde::Serialize;
use thiserror::Error;

use crate::composite::{
    build_quotient, canonicalize_tuple, enumerate_fiber, CompositeError, SumSpec, TupleClass,
};
use crate::mountain_range::{KnotId, MountainRange, Point, SimpleClass, Valley};
use crate::poset_analysis::{find_nmax, TruncatedPoset};

/// Default window depth below the top level for oracle checks.
pub const DEFAULT_DEPTH: i64 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplicityError {
    #[error("summand {knot} is not usable: {reason}")]
    InvalidSummand { knot: KnotId, reason: String },
    #[error("the sum is simple; there is no witness")]
    NotApplicable,
    #[error("range has {found} peaks, expected 2")]
    WrongPeakCount { found: usize },
    #[error("n must be at least 1")]
    ZeroPower,
    #[error("({tb},{r}) has the wrong parity for this sum")]
    ParityObstruction { tb: i64, r: i64 },
    #[error("constructed witness tuples are equivalent")]
    WitnessCollapsed,
    #[error(transparent)]
    Composite(#[from] CompositeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionCase {
    /// Every summand has a single peak.
    AllOnePeak,
    /// One two-peak summand with multiplicity at least 2, the rest single-peak.
    TwoPeakPower,
    /// One summand with several peaks and multiplicity 1, the rest single-peak.
    ManyPeaksOnce,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SummandPeaks {
    pub knot: KnotId,
    pub peaks: usize,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionVerdict {
    pub simple: bool,
    pub matched_case: CriterionCase,
    pub peak_counts: Vec<SummandPeaks>,
}

fn summand_check(spec: &SumSpec) -> Result<(), SimplicityError> {
    for s in spec.summands() {
        let report = s.range.validate();
        if !report.is_valid() || !s.range.prime {
            let reason = if s.range.prime {
                format!("{} range violation(s)", report.violations.len())
            } else {
                "not declared prime".into()
            };
            return Err(SimplicityError::InvalidSummand {
                knot: s.range.knot_id.clone(),
                reason,
            });
        }
    }
    Ok(())
}

pub fn criterion(spec: &SumSpec) -> Result<CriterionVerdict, SimplicityError> {
    summand_check(spec)?;
    let peak_counts: Vec<SummandPeaks> = spec
        .summands()
        .iter()
        .map(|s| SummandPeaks {
            knot: s.range.knot_id.clone(),
            peaks: s.range.peaks.len(),
            count: s.count,
        })
        .collect();
    let multi: Vec<&SummandPeaks> = peak_counts.iter().filter(|s| s.peaks >= 2).collect();
    let matched_case = match multi.as_slice() {
        [] => CriterionCase::AllOnePeak,
        [s] if s.peaks == 2 && s.count >= 2 => CriterionCase::TwoPeakPower,
        // a single two-peak summand taken once is just as simple as a
        // single summand with more peaks taken once
        [s] if s.count == 1 => CriterionCase::ManyPeaksOnce,
        _ => CriterionCase::None,
    };
    Ok(CriterionVerdict {
        simple: matched_case != CriterionCase::None,
        matched_case,
        peak_counts,
    })
}

/// `prod_i C(|Peak(K_i)| + a_i - 1, a_i)`: multisets of peaks per summand.
pub fn peak_count_formula(spec: &SumSpec) -> u64 {
    spec.summands()
        .iter()
        .map(|s| multiset_coefficient(s.range.peaks.len() as u64, s.count as u64))
        .product()
}

fn multiset_coefficient(kinds: u64, k: u64) -> u64 {
    // C(kinds + k - 1, k), computed incrementally so every division is exact
    (1..=k).fold(1u64, |acc, i| acc * (kinds + i - 1) / i)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowWitness {
    pub point: Point,
    pub first: TupleClass,
    pub second: TupleClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowVerdict {
    pub tb_min: i64,
    pub top_tb: i64,
    pub simple_in_window: bool,
    pub max_fiber_size: usize,
    pub witness: Option<WindowWitness>,
}

/// Exhaustive check that every fiber with `tb >= tb_min` holds one class.
/// A failing window reports a maximal nonsimple point and two of its classes.
pub fn simplicity_in_window(spec: &SumSpec, tb_min: i64) -> Result<WindowVerdict, SimplicityError> {
    let q = build_quotient(spec, tb_min)?;
    let poset = TruncatedPoset::from_quotient(&q);
    let witness = find_nmax(&poset).first().map(|&point| {
        let ids = q.fiber(point);
        WindowWitness {
            point,
            first: q.nodes[ids[0]].representative.clone(),
            second: q.nodes[ids[1]].representative.clone(),
        }
    });
    Ok(WindowVerdict {
        tb_min,
        top_tb: q.top_tb,
        simple_in_window: witness.is_none(),
        max_fiber_size: q.max_fiber_size(),
        witness,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonsimplicityWitness {
    pub point: Point,
    pub first: TupleClass,
    pub second: TupleClass,
    /// Labeled forms of the two tuples, in spec order.
    pub first_classes: Vec<SimpleClass>,
    pub second_classes: Vec<SimpleClass>,
}

// Left and right parents of a valley.
fn valley_parents(v: &Valley) -> (Point, Point) {
    (Point::new(v.tb + 1, v.r - 1), Point::new(v.tb + 1, v.r + 1))
}

/// The explicit pair of inequivalent classes with equal invariants.
///
/// With a summand of three or more peaks used at least twice, two of its
/// valleys `V1` (left) and `V2` are taken: one tuple holds the outer parents
/// (left of `V1`, right of `V2`), the other the inner parents. With two
/// summands of two or more peaks, one valley of each is used: left parent of
/// the first with right parent of the second, against the opposite choice.
/// All other slots hold a fixed maximal peak. The pair is confirmed
/// inequivalent by exact fiber enumeration.
pub fn nonsimplicity_witness(spec: &SumSpec) -> Result<NonsimplicityWitness, SimplicityError> {
    if criterion(spec)?.simple {
        return Err(SimplicityError::NotApplicable);
    }
    let summands = spec.summands();
    let fill = |group: usize| -> Point {
        summands[group]
            .range
            .maximal_peak()
            .expect("validated ranges have peaks")
    };
    let mut first: Vec<SimpleClass> = Vec::with_capacity(spec.n());
    let mut second: Vec<SimpleClass> = Vec::with_capacity(spec.n());
    let valleys_of = |g: usize| -> Vec<Valley> {
        summands[g]
            .range
            .valleys()
            .expect("validated ranges have valleys")
    };

    let repeated_big = summands
        .iter()
        .position(|s| s.range.peaks.len() >= 3 && s.count >= 2);
    // (group, left slot content for first/second), per special slot
    let mut special: Vec<(usize, Point, Point)> = Vec::new();
    if let Some(g) = repeated_big {
        let vs = valleys_of(g);
        let (v1_left, v1_right) = valley_parents(&vs[0]);
        let (v2_left, v2_right) = valley_parents(&vs[1]);
        special.push((g, v1_left, v1_right));
        special.push((g, v2_right, v2_left));
    } else {
        let big: Vec<usize> = (0..summands.len())
            .filter(|&g| summands[g].range.peaks.len() >= 2)
            .take(2)
            .collect();
        let [g1, g2] = big[..] else {
            unreachable!("nonsimple verdict needs a repeated big summand or two multi-peak summands")
        };
        let (l1, l1p) = valley_parents(&valleys_of(g1)[0]);
        let (l2, l2p) = valley_parents(&valleys_of(g2)[0]);
        special.push((g1, l1, l1p));
        special.push((g2, l2p, l2));
    }

    for (g, s) in summands.iter().enumerate() {
        let mine: Vec<&(usize, Point, Point)> = special.iter().filter(|x| x.0 == g).collect();
        for &&(_, a, b) in &mine {
            first.push(SimpleClass::new(s.range.knot_id.clone(), a));
            second.push(SimpleClass::new(s.range.knot_id.clone(), b));
        }
        for _ in mine.len()..s.count {
            first.push(SimpleClass::new(s.range.knot_id.clone(), fill(g)));
            second.push(SimpleClass::new(s.range.knot_id.clone(), fill(g)));
        }
    }

    let first = canonicalize_tuple(&first, spec)?;
    let second = canonicalize_tuple(&second, spec)?;
    let point = first.invariants();
    debug_assert_eq!(point, second.invariants());
    let fiber = enumerate_fiber(spec, point.tb, point.r);
    if fiber
        .iter()
        .any(|c| c.contains(&first) && c.contains(&second))
    {
        return Err(SimplicityError::WitnessCollapsed);
    }
    Ok(NonsimplicityWitness {
        point,
        first_classes: spec.label(&first),
        second_classes: spec.label(&second),
        first,
        second,
    })
}

/// `S+^a S-^b ((#^p P1) # (#^q P2))` for a two-peak knot, `p + q = n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CanonicalForm {
    pub a: u64,
    pub b: u64,
    pub p: u64,
    pub q: u64,
}

impl CanonicalForm {
    /// Invariants of the class this form names.
    pub fn invariants(&self, range: &MountainRange) -> Point {
        let (p1, p2) = (range.peaks[0], range.peaks[1]);
        let (a, b, p, q) = (self.a as i64, self.b as i64, self.p as i64, self.q as i64);
        let n = p + q;
        Point::new(
            p * p1.tb + q * p2.tb + (n - 1) - a - b,
            p * p1.r + q * p2.r + a - b,
        )
    }

    /// A concrete tuple of factor classes with all stabilizations on one factor.
    pub fn to_factors(&self, range: &MountainRange) -> Vec<SimpleClass> {
        let (p1, p2) = (range.peaks[0], range.peaks[1]);
        let mut pts: Vec<Point> = std::iter::repeat_n(p1, self.p as usize)
            .chain(std::iter::repeat_n(p2, self.q as usize))
            .collect();
        let (a, b) = (self.a as i64, self.b as i64);
        pts[0] = Point::new(pts[0].tb - a - b, pts[0].r + a - b);
        pts.into_iter()
            .map(|p| SimpleClass::new(range.knot_id.clone(), p))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[allow(non_snake_case)]
pub struct XYInvariants {
    pub X: i64,
    pub Y: i64,
}

fn two_peak_check(range: &MountainRange, n: i64) -> Result<Valley, SimplicityError> {
    if range.peaks.len() != 2 {
        return Err(SimplicityError::WrongPeakCount {
            found: range.peaks.len(),
        });
    }
    if n < 1 {
        return Err(SimplicityError::ZeroPower);
    }
    let v = range.valleys().map_err(|e| SimplicityError::InvalidSummand {
        knot: range.knot_id.clone(),
        reason: e.to_string(),
    })?;
    Ok(v[0])
}

/// `X = q·r'(P2) - b` and `Y = p·r'(P1) + a`, read off from `(tb, r)` alone.
pub fn xy_invariants(
    range: &MountainRange,
    n: i64,
    tb: i64,
    r: i64,
) -> Result<XYInvariants, SimplicityError> {
    let v = two_peak_check(range, n)?;
    let x2 = (tb + r) - n * (v.tb + v.r) - (n - 1);
    let y2 = (tb - r) - n * (v.tb - v.r) - (n - 1);
    if x2.rem_euclid(2) != 0 || y2.rem_euclid(2) != 0 {
        return Err(SimplicityError::ParityObstruction { tb, r });
    }
    Ok(XYInvariants {
        X: x2 / 2,
        Y: -y2 / 2,
    })
}

/// The representation of `(tb, r)` in `#^n K` with the fewest copies of the
/// right peak, or `None` if no class of the sum has these invariants.
pub fn canonical_form(
    range: &MountainRange,
    n: i64,
    tb: i64,
    r: i64,
) -> Result<Option<CanonicalForm>, SimplicityError> {
    let v = two_peak_check(range, n)?;
    let xy = match xy_invariants(range, n, tb, r) {
        Ok(xy) => xy,
        Err(SimplicityError::ParityObstruction { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let r1 = range.peaks[0].r - v.r; // negative
    let r2 = range.peaks[1].r - v.r; // positive
    let q = div_ceil(xy.X, r2).max(0);
    if q > n {
        return Ok(None);
    }
    let p = n - q;
    let b = q * r2 - xy.X;
    let a = xy.Y - p * r1;
    if a < 0 || b < 0 {
        return Ok(None);
    }
    Ok(Some(CanonicalForm {
        a: a as u64,
        b: b as u64,
        p: p as u64,
        q: q as u64,
    }))
}

fn div_ceil(x: i64, d: i64) -> i64 {
    debug_assert!(d > 0);
    -((-x).div_euclid(d))
}
