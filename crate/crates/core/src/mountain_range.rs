//! Mountain ranges of Legendrian-simple knots.
//!
//! A simple knot type is modeled by its finite set of peaks on the `(tb, r)`
//! lattice. Every Legendrian class is `S+^a S-^b` of some peak, so the full
//! range is the union of the downward cones below the peaks.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A lattice point `(tb, r)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub tb: i64,
    pub r: i64,
}

/// Peaks are plain lattice points; the name documents intent at use sites.
pub type Peak = Point;

impl Point {
    pub const fn new(tb: i64, r: i64) -> Self {
        Point { tb, r }
    }

    /// `S_sign` applied to this point.
    pub const fn stabilized(self, sign: Sign) -> Point {
        Point {
            tb: self.tb - 1,
            r: self.r + sign.delta(),
        }
    }

    /// The unique point whose `sign`-stabilization is `self`.
    pub const fn parent_point(self, sign: Sign) -> Point {
        Point {
            tb: self.tb + 1,
            r: self.r - sign.delta(),
        }
    }

    pub const fn parity(self) -> i64 {
        (self.tb + self.r).rem_euclid(2)
    }

    /// Sort key used for canonical factor ordering: descending by `(tb, r)`.
    pub(crate) fn desc_key(self) -> (std::cmp::Reverse<i64>, std::cmp::Reverse<i64>) {
        (std::cmp::Reverse(self.tb), std::cmp::Reverse(self.r))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.tb, self.r)
    }
}

/// Sign of a stabilization.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub const fn delta(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Opaque knot identifier. Distinct identifiers are treated as relatively prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KnotId(Arc<str>);

impl KnotId {
    pub fn new(name: impl AsRef<str>) -> Self {
        KnotId(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for KnotId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for KnotId {
    fn from(s: &str) -> Self {
        KnotId::new(s)
    }
}

/// One Legendrian class of a simple knot, identified with its lattice point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimpleClass {
    pub knot_id: KnotId,
    pub tb: i64,
    pub r: i64,
}

impl SimpleClass {
    pub fn new(knot_id: KnotId, point: Point) -> Self {
        SimpleClass {
            knot_id,
            tb: point.tb,
            r: point.r,
        }
    }

    pub fn point(&self) -> Point {
        Point::new(self.tb, self.r)
    }
}

/// Stabilizations always exist and stay inside the range (cones are downward closed).
pub fn stabilize(class: &SimpleClass, sign: Sign) -> SimpleClass {
    SimpleClass::new(class.knot_id.clone(), class.point().stabilized(sign))
}

/// A valley between two adjacent peaks.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Valley {
    pub tb: i64,
    pub r: i64,
    pub left_peak_index: usize,
    pub right_peak_index: usize,
}

impl Valley {
    pub fn point(&self) -> Point {
        Point::new(self.tb, self.r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValleyError {
    #[error("valley between peaks {left} and {right} is not a lattice point")]
    NonIntegralValley { left: usize, right: usize },
    #[error("valley between peaks {left} and {right} lies at r = {r}, not strictly between them")]
    MisplacedValley { left: usize, right: usize, r: i64 },
}

/// One violated invariant of a mountain range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NoPeaks,
    NotIncreasing { index: usize },
    Parity { index: usize },
    Dominated { dominating: usize, dominated: usize },
    NonIntegralValley { left: usize, right: usize },
    MisplacedValley { left: usize, right: usize, r: i64 },
    Bennequin { index: usize, bound: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoPeaks => write!(f, "range has no peaks"),
            Violation::NotIncreasing { index } => {
                write!(f, "peak {index} does not have strictly larger r than peak {}", index - 1)
            }
            Violation::Parity { index } => {
                write!(f, "peak {index} has tb + r parity different from peak 0")
            }
            Violation::Dominated { dominating, dominated } => {
                write!(f, "peak {dominated} is dominated by peak {dominating}")
            }
            Violation::NonIntegralValley { left, right } => {
                write!(f, "valley between peaks {left} and {right} is not a lattice point")
            }
            Violation::MisplacedValley { left, right, r } => write!(
                f,
                "valley between peaks {left} and {right} at r = {r} is not strictly between them"
            ),
            Violation::Bennequin { index, bound } => {
                write!(f, "peak {index} violates tb + |r| <= {bound}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Membership verdict with the indices of every peak whose cone contains the point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    pub dominating_peaks: Vec<usize>,
}

/// The mountain range of a Legendrian-simple knot type.
///
/// Construction does not validate; call [`MountainRange::validate`] before
/// relying on the range invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MountainRange {
    pub knot_id: KnotId,
    pub peaks: Vec<Peak>,
    pub genus: Option<u32>,
    pub prime: bool,
}

impl MountainRange {
    pub fn new(knot_id: impl Into<KnotId>, peaks: Vec<Peak>) -> Self {
        MountainRange {
            knot_id: knot_id.into(),
            peaks,
            genus: None,
            prime: true,
        }
    }

    pub fn with_genus(mut self, genus: Option<u32>) -> Self {
        self.genus = genus;
        self
    }

    pub fn with_prime(mut self, prime: bool) -> Self {
        self.prime = prime;
        self
    }

    /// Largest tb over all peaks.
    pub fn top_tb(&self) -> i64 {
        self.peaks.iter().map(|p| p.tb).max().unwrap_or(i64::MIN)
    }

    /// A maximal peak: largest tb, leftmost on ties.
    pub fn maximal_peak(&self) -> Option<Peak> {
        let top = self.top_tb();
        self.peaks.iter().copied().find(|p| p.tb == top)
    }

    pub fn validate(&self) -> ValidationReport {
        validate_range(self)
    }

    pub fn is_valid(&self) -> bool {
        validate_range(self).is_valid()
    }

    pub fn valleys(&self) -> Result<Vec<Valley>, ValleyError> {
        valleys(self)
    }

    pub fn contains(&self, tb: i64, r: i64) -> Membership {
        contains(self, tb, r)
    }

    pub fn is_member(&self, p: Point) -> bool {
        self.peaks.iter().any(|&peak| in_cone(peak, p))
    }

    /// The `sign`-parent of `class`, if it is a member of the range.
    pub fn destabilize(&self, class: &SimpleClass, sign: Sign) -> Option<SimpleClass> {
        let parent = class.point().parent_point(sign);
        self.is_member(parent)
            .then(|| SimpleClass::new(class.knot_id.clone(), parent))
    }

    pub fn parent_of(&self, p: Point, sign: Sign) -> Option<Point> {
        let parent = p.parent_point(sign);
        self.is_member(parent).then_some(parent)
    }

    pub fn level_points(&self, tb: i64) -> Vec<i64> {
        level_points(self, tb)
    }

    /// Every member point with `tb >= tb_min`, ordered by tb descending then r ascending.
    pub fn points_down_to(&self, tb_min: i64) -> Vec<Point> {
        let top = self.top_tb();
        (tb_min..=top)
            .rev()
            .flat_map(|tb| self.level_points(tb).into_iter().map(move |r| Point::new(tb, r)))
            .collect()
    }

    /// Same range shifted by `(dtb, dr)`.
    pub fn translated(&self, knot_id: impl Into<KnotId>, dtb: i64, dr: i64) -> MountainRange {
        MountainRange {
            knot_id: knot_id.into(),
            peaks: self
                .peaks
                .iter()
                .map(|p| Point::new(p.tb + dtb, p.r + dr))
                .collect(),
            genus: None,
            prime: self.prime,
        }
    }
}

/// `p` lies in the downward stabilization cone of `peak`.
fn in_cone(peak: Peak, p: Point) -> bool {
    let drop = peak.tb - p.tb;
    drop >= 0 && (p.r - peak.r).abs() <= drop && (drop + p.r - peak.r) % 2 == 0
}

pub fn validate_range(range: &MountainRange) -> ValidationReport {
    let mut violations = Vec::new();
    let peaks = &range.peaks;
    if peaks.is_empty() {
        violations.push(Violation::NoPeaks);
        return ValidationReport { violations };
    }

    for i in 1..peaks.len() {
        if peaks[i].r <= peaks[i - 1].r {
            violations.push(Violation::NotIncreasing { index: i });
        }
    }
    let parity = peaks[0].parity();
    for (i, p) in peaks.iter().enumerate().skip(1) {
        if p.parity() != parity {
            violations.push(Violation::Parity { index: i });
        }
    }
    for (i, a) in peaks.iter().enumerate() {
        for (j, b) in peaks.iter().enumerate() {
            if i != j && a.tb - b.tb >= (a.r - b.r).abs() {
                violations.push(Violation::Dominated {
                    dominating: i,
                    dominated: j,
                });
            }
        }
    }
    for (left, pair) in peaks.windows(2).enumerate() {
        if let Err(e) = valley_between(pair[0], pair[1], left) {
            violations.push(match e {
                ValleyError::NonIntegralValley { left, right } => {
                    Violation::NonIntegralValley { left, right }
                }
                ValleyError::MisplacedValley { left, right, r } => {
                    Violation::MisplacedValley { left, right, r }
                }
            });
        }
    }
    if let Some(genus) = range.genus {
        let bound = 2 * i64::from(genus) - 1;
        for (i, p) in peaks.iter().enumerate() {
            if p.tb + p.r.abs() > bound {
                violations.push(Violation::Bennequin { index: i, bound });
            }
        }
    }
    ValidationReport { violations }
}

// The valley is where the right slope of `left` meets the left slope of `right`.
fn valley_between(left: Peak, right: Peak, left_index: usize) -> Result<Valley, ValleyError> {
    let twice_r = left.r + right.r + left.tb - right.tb;
    if twice_r.rem_euclid(2) != 0 {
        return Err(ValleyError::NonIntegralValley {
            left: left_index,
            right: left_index + 1,
        });
    }
    let r = twice_r / 2;
    if !(left.r < r && r < right.r) {
        return Err(ValleyError::MisplacedValley {
            left: left_index,
            right: left_index + 1,
            r,
        });
    }
    Ok(Valley {
        tb: left.tb - (r - left.r),
        r,
        left_peak_index: left_index,
        right_peak_index: left_index + 1,
    })
}

pub fn valleys(range: &MountainRange) -> Result<Vec<Valley>, ValleyError> {
    range
        .peaks
        .windows(2)
        .enumerate()
        .map(|(i, pair)| valley_between(pair[0], pair[1], i))
        .collect()
}

pub fn contains(range: &MountainRange, tb: i64, r: i64) -> Membership {
    let p = Point::new(tb, r);
    let dominating_peaks: Vec<usize> = range
        .peaks
        .iter()
        .enumerate()
        .filter(|&(_, &peak)| in_cone(peak, p))
        .map(|(i, _)| i)
        .collect();
    Membership {
        member: !dominating_peaks.is_empty(),
        dominating_peaks,
    }
}

pub fn level_points(range: &MountainRange, tb: i64) -> Vec<i64> {
    let mut rs: Vec<i64> = range
        .peaks
        .iter()
        .filter(|p| p.tb >= tb)
        .flat_map(|p| {
            let drop = p.tb - tb;
            (0..=drop).map(move |k| p.r - drop + 2 * k)
        })
        .collect();
    rs.sort_unstable();
    rs.dedup();
    rs
}
