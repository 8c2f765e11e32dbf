//! Path words over `{S0, S+^±1, S-^±1}` and their realization.
//!
//! Words are written the usual way, `S_{e_k}^{h_k} ... S_{e_1}^{h_1}`: the
//! rightmost letter acts first. `letters` stores them in written order.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::composite::{sum_invariants, QuotientPoset, SumSpec, TupleClass};
use crate::mountain_range::{MountainRange, Point, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("step leaves the window at node {node}")]
    Truncated { node: usize },
    #[error("expected {expected} words of equal length")]
    LengthMismatch { expected: usize },
    #[error("invariant mismatch: {start} vs {end}")]
    InvariantMismatch { start: Point, end: Point },
    #[error("summands must be distinct knots")]
    NotRelativelyPrime,
    #[error("bad path token {0:?}")]
    BadToken(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathLetter {
    /// `S0`: stay put.
    Idle,
    /// `S_sign`: move down to the stabilization.
    Stabilize(Sign),
    /// `S_sign^{-1}`: move up to the `sign`-parent.
    Destabilize(Sign),
}

impl PathLetter {
    pub fn reversed(self) -> PathLetter {
        match self {
            PathLetter::Idle => PathLetter::Idle,
            PathLetter::Stabilize(s) => PathLetter::Destabilize(s),
            PathLetter::Destabilize(s) => PathLetter::Stabilize(s),
        }
    }
}

impl fmt::Display for PathLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathLetter::Idle => f.write_str("0"),
            PathLetter::Stabilize(s) => write!(f, "{s}"),
            PathLetter::Destabilize(s) => write!(f, "{s}^-1"),
        }
    }
}

impl FromStr for PathLetter {
    type Err = PathError;

    fn from_str(tok: &str) -> Result<Self, Self::Err> {
        let bare = tok.strip_prefix('S').unwrap_or(tok);
        let (head, inverse) = match bare.strip_suffix("^-1") {
            Some(h) => (h, true),
            None => (bare, false),
        };
        let sign = match head {
            "0" => return Ok(PathLetter::Idle),
            "+" => Sign::Plus,
            "-" => Sign::Minus,
            _ => return Err(PathError::BadToken(tok.to_string())),
        };
        Ok(if inverse {
            PathLetter::Destabilize(sign)
        } else {
            PathLetter::Stabilize(sign)
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PathWord {
    pub letters: Vec<PathLetter>,
}

impl PathWord {
    pub fn new(letters: Vec<PathLetter>) -> Self {
        PathWord { letters }
    }

    pub fn empty() -> Self {
        PathWord::default()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letters in the order they act.
    pub fn steps(&self) -> impl Iterator<Item = PathLetter> + '_ {
        self.letters.iter().rev().copied()
    }
}

impl fmt::Display for PathWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for PathWord {
    type Err = PathError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<_>, _>>()
            .map(PathWord::new)
    }
}

impl Serialize for PathWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Negates every exponent; not the group inverse.
pub fn reverse(word: &PathWord) -> PathWord {
    PathWord::new(word.letters.iter().map(|l| l.reversed()).collect())
}

/// The word that applies `first`, then `second`.
pub fn concat(second: &PathWord, first: &PathWord) -> PathWord {
    let mut letters = second.letters.clone();
    letters.extend_from_slice(&first.letters);
    PathWord::new(letters)
}

/// A poset of classes on which words can be traced.
pub trait ClassPoset {
    type Class: Copy + Ord;

    fn stabilize(&self, c: Self::Class, sign: Sign) -> Result<Self::Class, PathError>;

    fn sign_parents(&self, c: Self::Class, sign: Sign) -> Vec<Self::Class>;
}

impl ClassPoset for MountainRange {
    type Class = Point;

    fn stabilize(&self, c: Point, sign: Sign) -> Result<Point, PathError> {
        Ok(c.stabilized(sign))
    }

    fn sign_parents(&self, c: Point, sign: Sign) -> Vec<Point> {
        self.parent_of(c, sign).into_iter().collect()
    }
}

impl ClassPoset for QuotientPoset {
    type Class = usize;

    fn stabilize(&self, c: usize, sign: Sign) -> Result<usize, PathError> {
        self.child(c, sign).ok_or(PathError::Truncated { node: c })
    }

    fn sign_parents(&self, c: usize, sign: Sign) -> Vec<usize> {
        self.parents(c)
            .iter()
            .filter(|(s, _)| *s == sign)
            .map(|&(_, p)| p)
            .collect()
    }
}

/// All possible ends of sequences the word realizes from `start`; empty when
/// the word is not realizable there.
pub fn realize<P: ClassPoset>(
    word: &PathWord,
    start: P::Class,
    model: &P,
) -> Result<BTreeSet<P::Class>, PathError> {
    let mut current = BTreeSet::from([start]);
    for letter in word.steps() {
        let mut next = BTreeSet::new();
        for &c in &current {
            match letter {
                PathLetter::Idle => {
                    next.insert(c);
                }
                PathLetter::Stabilize(s) => {
                    next.insert(model.stabilize(c, s)?);
                }
                PathLetter::Destabilize(s) => next.extend(model.sign_parents(c, s)),
            }
        }
        if next.is_empty() {
            return Ok(next);
        }
        current = next;
    }
    Ok(current)
}

// Exactly one S_e and one S_e^{-1} for a single sign e, the rest S0.
fn level_is_transfer(letters: &[PathLetter]) -> bool {
    let moving: Vec<PathLetter> = letters
        .iter()
        .copied()
        .filter(|l| *l != PathLetter::Idle)
        .collect();
    match moving.as_slice() {
        [x, y] => x.reversed() == *y && *x != *y,
        _ => false,
    }
}

// Perfect matching of slots to end slots within each knot group.
fn has_matching(spec: &SumSpec, allowed: &[Vec<bool>]) -> bool {
    let n = allowed.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    fn augment(
        i: usize,
        allowed: &[Vec<bool>],
        owner: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for j in 0..allowed.len() {
            if allowed[i][j] && !seen[j] {
                seen[j] = true;
                if owner[j].is_none_or(|k| augment(k, allowed, owner, seen)) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    debug_assert!((0..n).all(|i| (0..n).all(|j| !allowed[i][j] || spec.slot_group(i) == spec.slot_group(j))));
    (0..n).all(|i| augment(i, allowed, &mut owner, &mut vec![false; n]))
}

/// Checks a family of per-factor words against the transfer decomposition:
/// some knot-preserving permutation sends every start factor along its word
/// to an end factor, and at every position the letters form one transfer.
pub fn check_multipath(
    spec: &SumSpec,
    words: &[PathWord],
    start: &TupleClass,
    end: &TupleClass,
) -> Result<bool, PathError> {
    let n = spec.n();
    if words.len() != n || start.n() != n || end.n() != n {
        return Err(PathError::LengthMismatch { expected: n });
    }
    let k = words[0].len();
    if words.iter().any(|w| w.len() != k) {
        return Err(PathError::LengthMismatch { expected: n });
    }
    for pos in 0..k {
        let level: Vec<PathLetter> = words.iter().map(|w| w.letters[pos]).collect();
        if !level_is_transfer(&level) {
            return Ok(false);
        }
    }
    let mut allowed = vec![vec![false; n]; n];
    for i in 0..n {
        let range = spec.slot_range(i);
        let ends = realize(&words[i], start.factors[i], range)?;
        for j in 0..n {
            allowed[i][j] =
                spec.slot_group(i) == spec.slot_group(j) && ends.contains(&end.factors[j]);
        }
    }
    Ok(has_matching(spec, &allowed))
}

/// Breadth-first search for a word `g` with `l1' in g(l1)` and
/// `l2' in reverse(g)(l2)`, keeping each factor at `tb >= tb_floor` and using
/// at most `max_len` letters. `None` only means no word exists within those
/// bounds.
#[allow(clippy::too_many_arguments)]
pub fn find_connecting_path(
    k1: &MountainRange,
    l1: Point,
    l1_end: Point,
    k2: &MountainRange,
    l2: Point,
    l2_end: Point,
    tb_floor: i64,
    max_len: usize,
) -> Result<Option<PathWord>, PathError> {
    if k1.knot_id == k2.knot_id {
        return Err(PathError::NotRelativelyPrime);
    }
    let inv = |a: Point, b: Point| Point::new(a.tb + b.tb + 1, a.r + b.r);
    let (s, e) = (inv(l1, l2), inv(l1_end, l2_end));
    if s != e {
        return Err(PathError::InvariantMismatch { start: s, end: e });
    }

    const MOVES: [PathLetter; 4] = [
        PathLetter::Destabilize(Sign::Plus),
        PathLetter::Destabilize(Sign::Minus),
        PathLetter::Stabilize(Sign::Plus),
        PathLetter::Stabilize(Sign::Minus),
    ];
    let step = |range: &MountainRange, p: Point, l: PathLetter| -> Option<Point> {
        let q = match l {
            PathLetter::Idle => p,
            PathLetter::Stabilize(s) => p.stabilized(s),
            PathLetter::Destabilize(s) => range.parent_of(p, s)?,
        };
        (q.tb >= tb_floor).then_some(q)
    };

    let start = (l1, l2);
    let goal = (l1_end, l2_end);
    let mut prev: HashMap<(Point, Point), ((Point, Point), PathLetter)> = HashMap::new();
    let mut depth: HashMap<(Point, Point), usize> = HashMap::from([(start, 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(state) = queue.pop_front() {
        if state == goal {
            let mut applied = Vec::new();
            let mut cur = state;
            while let Some(&(p, l)) = prev.get(&cur) {
                applied.push(l);
                cur = p;
            }
            // `applied` runs last-to-first, which is written order
            return Ok(Some(PathWord::new(applied)));
        }
        let d = depth[&state];
        if d == max_len {
            continue;
        }
        for letter in MOVES {
            let Some(x1) = step(k1, state.0, letter) else { continue };
            let Some(x2) = step(k2, state.1, letter.reversed()) else { continue };
            let next = (x1, x2);
            if let std::collections::hash_map::Entry::Vacant(e) = depth.entry(next) {
                e.insert(d + 1);
                prev.insert(next, (state, letter));
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

/// Invariants of `l1 # l2`, for callers that check preconditions themselves.
pub fn pair_invariants(l1: Point, l2: Point) -> Point {
    sum_invariants(&TupleClass {
        factors: vec![l1, l2],
    })
}
