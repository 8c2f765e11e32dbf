#![allow(dead_code)]

pub mod props;

use std::path::PathBuf;
use std::sync::Arc;

use legendrian::io::KnotRegistry;
use legendrian::{MountainRange, SumSpec, Summand};

pub fn catalog_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("catalog")
}

pub fn catalog() -> KnotRegistry {
    let mut reg = KnotRegistry::new();
    reg.load_path(&catalog_dir().join("knots")).expect("catalog loads");
    reg
}

pub fn knot(reg: &KnotRegistry, name: &str) -> Arc<MountainRange> {
    Arc::clone(reg.get(name).unwrap_or_else(|| panic!("catalog has no {name}")))
}

pub fn spec(reg: &KnotRegistry, parts: &[(&str, usize)]) -> SumSpec {
    SumSpec::new(
        parts
            .iter()
            .map(|&(name, count)| Summand {
                range: knot(reg, name),
                count,
            })
            .collect(),
    )
    .expect("grid specs are valid")
}

pub const GRID_KNOTS: [&str; 5] = ["U1", "C", "A", "B", "Ap"];

/// Every multiplicity vector over the grid knots with total between 1 and `max_n`.
pub fn grid(reg: &KnotRegistry, max_n: usize) -> Vec<(String, SumSpec)> {
    fn go(i: usize, left: usize, counts: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == counts.len() {
            if counts.iter().sum::<usize>() > 0 {
                out.push(counts.clone());
            }
            return;
        }
        for c in 0..=left {
            counts[i] = c;
            go(i + 1, left - c, counts, out);
        }
        counts[i] = 0;
    }
    let mut vectors = Vec::new();
    go(0, max_n, &mut vec![0; GRID_KNOTS.len()], &mut vectors);
    vectors
        .into_iter()
        .map(|counts| {
            let parts: Vec<(&str, usize)> = GRID_KNOTS
                .iter()
                .zip(&counts)
                .filter(|(_, &c)| c > 0)
                .map(|(&k, &c)| (k, c))
                .collect();
            let name = parts
                .iter()
                .map(|(k, c)| format!("{k}:{c}"))
                .collect::<Vec<_>>()
                .join(",");
            (format!("{{{name}}}"), spec(reg, &parts))
        })
        .collect()
}
