//! Randomized invariant checks shared by the property tests and the
//! acceptance run. Each check returns the failing case as a message.

use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use legendrian::composite::{canonicalize_tuple, enumerate_fiber, relation_neighbors, sum_invariants};
use legendrian::mountain_range::{Violation, stabilize};
use legendrian::paths::{find_connecting_path, realize, reverse};
use legendrian::{MountainRange, PathLetter, PathWord, Point, Sign, SimpleClass, SumSpec, Summand};

/// Valid ranges built from valleys: each next peak climbs `m` from a valley
/// `k` steps down the previous peak's right slope.
pub fn range_strategy(name: &'static str) -> impl Strategy<Value = MountainRange> {
    (-3i64..=3, -3i64..=3, prop::collection::vec((1i64..=3, 1i64..=3), 0..=3)).prop_map(
        move |(tb, r, steps)| {
            let mut peaks = vec![Point::new(tb, r)];
            for (k, m) in steps {
                let p = *peaks.last().unwrap();
                peaks.push(Point::new(p.tb - k + m, p.r + k + m));
            }
            MountainRange::new(name, peaks)
        },
    )
}

/// A range and one of its members, `S+^a S-^b` of a peak.
pub fn member_strategy() -> impl Strategy<Value = (MountainRange, Point)> {
    range_strategy("K").prop_flat_map(|range| {
        let n = range.peaks.len();
        (Just(range), 0..n, 0i64..=4, 0i64..=4).prop_map(|(range, i, a, b)| {
            let p = range.peaks[i];
            let q = Point::new(p.tb - a - b, p.r + a - b);
            (range, q)
        })
    })
}

fn word_strategy(max: usize) -> impl Strategy<Value = PathWord> {
    let letter = prop_oneof![
        Just(PathLetter::Idle),
        Just(PathLetter::Stabilize(Sign::Plus)),
        Just(PathLetter::Stabilize(Sign::Minus)),
        Just(PathLetter::Destabilize(Sign::Plus)),
        Just(PathLetter::Destabilize(Sign::Minus)),
    ];
    prop::collection::vec(letter, 0..=max).prop_map(PathWord::new)
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn outcome<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

pub fn generated_ranges_are_valid(cases: u32) -> Result<(), String> {
    outcome(runner(cases).run(&range_strategy("K"), |range| {
        prop_assert!(range.is_valid(), "{:?}", range.validate());
        Ok(())
    }))
}

pub fn peaks_exceed_valleys_by_one(cases: u32) -> Result<(), String> {
    outcome(runner(cases).run(&range_strategy("K"), |range| {
        let v = range.valleys().map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(range.peaks.len(), v.len() + 1);
        for v in &v {
            let (l, r) = (range.peaks[v.left_peak_index], range.peaks[v.right_peak_index]);
            prop_assert!(l.r < v.r && v.r < r.r);
            prop_assert!(range.is_member(v.point()));
            prop_assert!(!range.is_member(Point::new(v.tb + 2, v.r)));
        }
        Ok(())
    }))
}

pub fn stabilizations_commute(cases: u32) -> Result<(), String> {
    outcome(runner(cases).run(&member_strategy(), |(range, p)| {
        prop_assert!(range.is_member(p));
        let pm = p.stabilized(Sign::Plus).stabilized(Sign::Minus);
        let mp = p.stabilized(Sign::Minus).stabilized(Sign::Plus);
        prop_assert_eq!(pm, mp);
        let c = SimpleClass::new(range.knot_id.clone(), p);
        let cm = stabilize(&stabilize(&c, Sign::Plus), Sign::Minus);
        let mc = stabilize(&stabilize(&c, Sign::Minus), Sign::Plus);
        prop_assert_eq!(cm, mc);
        Ok(())
    }))
}

pub fn parity_is_conserved(cases: u32) -> Result<(), String> {
    outcome(runner(cases).run(&member_strategy(), |(range, p)| {
        let parity = range.peaks[0].parity();
        prop_assert_eq!(p.parity(), parity);
        for s in Sign::BOTH {
            prop_assert_eq!(p.stabilized(s).parity(), parity);
        }
        for q in range.points_down_to(p.tb) {
            prop_assert_eq!(q.parity(), parity);
        }
        Ok(())
    }))
}

pub fn cones_are_closed(cases: u32) -> Result<(), String> {
    outcome(runner(cases).run(&member_strategy(), |(range, p)| {
        for s in Sign::BOTH {
            let q = p.stabilized(s);
            prop_assert!(range.is_member(q));
            prop_assert_eq!(range.parent_of(q, s), Some(p));
            if let Some(up) = range.parent_of(p, s) {
                prop_assert!(range.is_member(up));
                prop_assert_eq!(up.stabilized(s), p);
            }
        }
        // every destabilizable member has a member parent, peaks have none
        let is_peak = range.peaks.contains(&p);
        let has_parent = Sign::BOTH.iter().any(|&s| range.parent_of(p, s).is_some());
        prop_assert_eq!(is_peak, !has_parent);
        Ok(())
    }))
}

pub fn bennequin_bound(cases: u32) -> Result<(), String> {
    outcome(runner(cases).run(&range_strategy("K"), |range| {
        let worst = range.peaks.iter().map(|p| p.tb + p.r.abs()).max().unwrap();
        // smallest genus with worst <= 2g - 1
        let g = ((worst + 1 + 1).div_euclid(2)).max(0);
        let ok = range.clone().with_genus(Some(g as u32));
        prop_assert!(ok.is_valid(), "{:?}", ok.validate());
        if g >= 1 {
            let tight = range.with_genus(Some(g as u32 - 1));
            let report = tight.validate();
            let bennequin = report.violations.iter().any(|v| matches!(v, Violation::Bennequin { .. }));
            prop_assert!(bennequin, "genus {} accepted", g - 1);
        }
        Ok(())
    }))
}

fn two_knot_spec(k1: MountainRange, k2: MountainRange, c1: usize, c2: usize) -> SumSpec {
    SumSpec::new(vec![
        Summand {
            range: Arc::new(k1),
            count: c1,
        },
        Summand {
            range: Arc::new(k2),
            count: c2,
        },
    ])
    .unwrap()
}

fn tuple_strategy() -> impl Strategy<Value = (SumSpec, Vec<SimpleClass>)> {
    (range_strategy("K1"), range_strategy("K2"), 1usize..=2, 1usize..=2).prop_flat_map(|(k1, k2, c1, c2)| {
        let spec = two_knot_spec(k1, k2, c1, c2);
        let n = spec.n();
        let picks = prop::collection::vec((0usize..4, 0i64..=3, 0i64..=3), n);
        (Just(spec), picks).prop_map(|(spec, picks)| {
            let classes = picks
                .into_iter()
                .enumerate()
                .map(|(slot, (i, a, b))| {
                    let range = spec.slot_range(slot);
                    let p = range.peaks[i % range.peaks.len()];
                    SimpleClass::new(range.knot_id.clone(), Point::new(p.tb - a - b, p.r + a - b))
                })
                .collect();
            (spec, classes)
        })
    })
}

pub fn sum_invariants_add(cases: u32) -> Result<(), String> {
    outcome(runner(cases).run(&tuple_strategy(), |(spec, classes)| {
        let t = canonicalize_tuple(&classes, &spec).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let tb: i64 = classes.iter().map(|c| c.tb).sum();
        let r: i64 = classes.iter().map(|c| c.r).sum();
        prop_assert_eq!(sum_invariants(&t), Point::new(tb + spec.n() as i64 - 1, r));
        // stabilizing any factor stabilizes the sum
        for slot in 0..classes.len() {
            for s in Sign::BOTH {
                let mut moved = classes.clone();
                moved[slot] = stabilize(&moved[slot], s);
                let u = canonicalize_tuple(&moved, &spec).unwrap();
                prop_assert_eq!(sum_invariants(&u), sum_invariants(&t).stabilized(s));
            }
        }
        Ok(())
    }))
}

pub fn generators_preserve_invariants(cases: u32) -> Result<(), String> {
    outcome(runner(cases).run(&tuple_strategy(), |(spec, classes)| {
        let t = canonicalize_tuple(&classes, &spec).unwrap();
        for nb in relation_neighbors(&spec, &t) {
            prop_assert_eq!(nb.invariants(), t.invariants());
            prop_assert!(relation_neighbors(&spec, &nb).contains(&t), "transfer is not symmetric");
        }
        Ok(())
    }))
}

pub fn canonicalization_is_stable(cases: u32) -> Result<(), String> {
    let strat = (tuple_strategy(), any::<prop::sample::Index>());
    outcome(runner(cases).run(&strat, |((spec, classes), idx)| {
        let t = canonicalize_tuple(&classes, &spec).unwrap();
        let again = canonicalize_tuple(&spec.label(&t), &spec).unwrap();
        prop_assert_eq!(&again, &t);
        let mut shuffled = classes.clone();
        let k = shuffled.len();
        shuffled.rotate_left(idx.index(k));
        shuffled.reverse();
        prop_assert_eq!(canonicalize_tuple(&shuffled, &spec).unwrap(), t);
        Ok(())
    }))
}

pub fn fiber_sizes_are_translation_invariant(cases: u32) -> Result<(), String> {
    let strat = (range_strategy("K"), -2i64..=2, -2i64..=2, 0i64..=3, any::<prop::sample::Index>());
    outcome(runner(cases).run(&strat, |(range, dtb, dr, depth, idx)| {
        let moved = range.translated("K", dtb, dr);
        let spec = SumSpec::new(vec![Summand { range: Arc::new(range), count: 2 }]).unwrap();
        let spec_t = SumSpec::new(vec![Summand { range: Arc::new(moved), count: 2 }]).unwrap();
        let tb = spec.top_tb() - depth;
        let level: Vec<i64> = (-20..=20).collect();
        let r = level[idx.index(level.len())];
        let a = enumerate_fiber(&spec, tb, r).len();
        let b = enumerate_fiber(&spec_t, tb + 2 * dtb, r + 2 * dr).len();
        prop_assert_eq!(a, b);
        Ok(())
    }))
}

pub fn reverse_is_an_involution(cases: u32) -> Result<(), String> {
    outcome(runner(cases).run(&word_strategy(12), |w| {
        prop_assert_eq!(reverse(&reverse(&w)), w.clone());
        prop_assert_eq!(reverse(&w).len(), w.len());
        let parsed: PathWord = w.to_string().parse().map_err(|e: legendrian::paths::PathError| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(parsed, w);
        Ok(())
    }))
}

pub fn realization_is_sound(cases: u32) -> Result<(), String> {
    let strat = (member_strategy(), word_strategy(8));
    outcome(runner(cases).run(&strat, |((range, p), w)| {
        let ends = realize(&w, p, &range).unwrap();
        let (mut dtb, mut dr) = (0, 0);
        for l in w.steps() {
            match l {
                PathLetter::Idle => {}
                PathLetter::Stabilize(s) => {
                    dtb -= 1;
                    dr += s.delta();
                }
                PathLetter::Destabilize(s) => {
                    dtb += 1;
                    dr -= s.delta();
                }
            }
        }
        for e in ends {
            prop_assert!(range.is_member(e));
            prop_assert_eq!(e, Point::new(p.tb + dtb, p.r + dr));
        }
        Ok(())
    }))
}

/// Runs a random transfer word on a pair, then asks the search to get back
/// to the end pair within the same length.
pub fn connecting_paths_are_found_and_sound(cases: u32) -> Result<(), String> {
    let strat = (member_strategy(), member_strategy(), word_strategy(5));
    outcome(runner(cases).run(&strat, |((k1, l1), (k2, l2), w)| {
        let k2 = MountainRange::new("K2", k2.peaks);
        let w = PathWord::new(w.letters.into_iter().filter(|l| *l != PathLetter::Idle).collect());
        let (Some(&e1), Some(&e2)) = (
            realize(&w, l1, &k1).unwrap().iter().next(),
            realize(&reverse(&w), l2, &k2).unwrap().iter().next(),
        ) else {
            return Ok(());
        };
        let floor = [l1.tb, l2.tb, e1.tb, e2.tb].into_iter().min().unwrap() - w.len() as i64;
        let g = find_connecting_path(&k1, l1, e1, &k2, l2, e2, floor, w.len())
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let g = g.ok_or_else(|| TestCaseError::fail(format!("no path for {w}")))?;
        prop_assert!(g.len() <= w.len());
        prop_assert!(realize(&g, l1, &k1).unwrap().contains(&e1));
        prop_assert!(realize(&reverse(&g), l2, &k2).unwrap().contains(&e2));
        Ok(())
    }))
}

pub type Check = (&'static str, fn(u32) -> Result<(), String>);

pub const ALL: &[Check] = &[
    ("generated ranges are valid", generated_ranges_are_valid),
    ("peaks exceed valleys by one", peaks_exceed_valleys_by_one),
    ("stabilizations commute", stabilizations_commute),
    ("parity is conserved", parity_is_conserved),
    ("cones are closed", cones_are_closed),
    ("Bennequin bound", bennequin_bound),
    ("sum invariants add", sum_invariants_add),
    ("generators preserve invariants", generators_preserve_invariants),
    ("canonicalization is stable", canonicalization_is_stable),
    ("fiber sizes are translation invariant", fiber_sizes_are_translation_invariant),
    ("reverse is an involution", reverse_is_an_involution),
    ("realization is sound", realization_is_sound),
    ("connecting paths are found and sound", connecting_paths_are_found_and_sound),
];

