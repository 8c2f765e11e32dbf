//! Knot and sum documents.
//!
//! Knot document (one per knot):
//!
//! ```json
//! {"name":"A","prime":true,"genus":null,"peaks":[[0,-2],[0,2]]}
//! ```
//!
//! `peaks` are `[tb, r]` pairs in strictly ascending `r`. Sum document:
//!
//! ```json
//! {"summands":[{"knot":"A","count":2}]}
//! ```
//!
//! Knot names in a sum are resolved against explicitly loaded knot files
//! first, then against `<name>.json` next to the sum file or in a sibling
//! `knots/` directory.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::composite::{SpecError, SumSpec, Summand};
use crate::mountain_range::{KnotId, MountainRange, Point, ValidationReport};

#[derive(Debug, Error)]
pub enum DocError {
    #[error("{source_name}: line {line}, column {column}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{source_name}: {location}: {message}")]
    Schema {
        source_name: String,
        location: String,
        message: String,
    },
    #[error("{source_name}: knot {name} is not a valid mountain range: {}", describe(report))]
    RangeInvalid {
        source_name: String,
        name: String,
        report: ValidationReport,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("knot {0} not found in any loaded file or next to the sum file")]
    UnresolvedKnot(String),
    #[error("knot {0} loaded twice")]
    DuplicateKnot(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

fn describe(report: &ValidationReport) -> String {
    report
        .violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnotDocument {
    pub name: String,
    pub prime: bool,
    #[serde(default)]
    pub genus: Option<u32>,
    pub peaks: Vec<[i64; 2]>,
}

impl KnotDocument {
    pub fn to_range(&self) -> MountainRange {
        MountainRange::new(
            self.name.as_str(),
            self.peaks.iter().map(|&[tb, r]| Point::new(tb, r)).collect(),
        )
        .with_genus(self.genus)
        .with_prime(self.prime)
    }

    pub fn from_range(range: &MountainRange) -> Self {
        KnotDocument {
            name: range.knot_id.to_string(),
            prime: range.prime,
            genus: range.genus,
            peaks: range.peaks.iter().map(|p| [p.tb, p.r]).collect(),
        }
    }

    /// Canonical one-line serialization followed by a newline.
    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string(self).expect("knot documents always serialize");
        s.push('\n');
        s
    }
}

fn json_error(source_name: &str, e: serde_json::Error) -> DocError {
    use serde_json::error::Category;
    match e.classify() {
        Category::Data => DocError::Schema {
            source_name: source_name.to_string(),
            location: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        },
        _ => DocError::Parse {
            source_name: source_name.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        },
    }
}

/// Parses and validates a knot document.
pub fn parse_knot_file(bytes: &[u8]) -> Result<KnotDocument, DocError> {
    parse_knot_named(bytes, "<input>")
}

fn parse_knot_named(bytes: &[u8], source_name: &str) -> Result<KnotDocument, DocError> {
    let doc: KnotDocument =
        serde_json::from_slice(bytes).map_err(|e| json_error(source_name, e))?;
    if doc.name.is_empty() {
        return Err(DocError::Schema {
            source_name: source_name.to_string(),
            location: "name".into(),
            message: "knot name must not be empty".into(),
        });
    }
    for i in 1..doc.peaks.len() {
        if doc.peaks[i][1] <= doc.peaks[i - 1][1] {
            return Err(DocError::Schema {
                source_name: source_name.to_string(),
                location: format!("peaks[{i}]"),
                message: "peaks must be listed in strictly ascending r".into(),
            });
        }
    }
    let report = doc.to_range().validate();
    if !report.is_valid() {
        return Err(DocError::RangeInvalid {
            source_name: source_name.to_string(),
            name: doc.name.clone(),
            report,
        });
    }
    Ok(doc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SumEntry {
    pub knot: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SumDocument {
    pub summands: Vec<SumEntry>,
}

pub fn parse_sum_file(bytes: &[u8]) -> Result<SumDocument, DocError> {
    parse_sum_named(bytes, "<input>")
}

fn parse_sum_named(bytes: &[u8], source_name: &str) -> Result<SumDocument, DocError> {
    let doc: SumDocument =
        serde_json::from_slice(bytes).map_err(|e| json_error(source_name, e))?;
    if doc.summands.is_empty() {
        return Err(DocError::Schema {
            source_name: source_name.to_string(),
            location: "summands".into(),
            message: "at least one summand is required".into(),
        });
    }
    for (i, s) in doc.summands.iter().enumerate() {
        if s.count == 0 {
            return Err(DocError::Schema {
                source_name: source_name.to_string(),
                location: format!("summands[{i}].count"),
                message: "count must be at least 1".into(),
            });
        }
    }
    Ok(doc)
}

fn read(path: &Path) -> Result<Vec<u8>, DocError> {
    fs::read(path).map_err(|source| DocError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_knot(path: &Path) -> Result<MountainRange, DocError> {
    let bytes = read(path)?;
    Ok(parse_knot_named(&bytes, &path.display().to_string())?.to_range())
}

/// Knots by name.
#[derive(Debug, Clone, Default)]
pub struct KnotRegistry {
    knots: BTreeMap<KnotId, Arc<MountainRange>>,
}

impl KnotRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, range: MountainRange) -> Result<(), DocError> {
        let id = range.knot_id.clone();
        if self.knots.contains_key(&id) {
            return Err(DocError::DuplicateKnot(id.to_string()));
        }
        self.knots.insert(id, Arc::new(range));
        Ok(())
    }

    /// Loads a knot file, or every `*.json` file of a directory (sorted by name).
    pub fn load_path(&mut self, path: &Path) -> Result<(), DocError> {
        if path.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(path)
                .map_err(|source| DocError::Io {
                    path: path.to_path_buf(),
                    source,
                })?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            files.sort();
            for f in files {
                self.insert(load_knot(&f)?)?;
            }
            Ok(())
        } else {
            self.insert(load_knot(path)?)
        }
    }

    pub fn get(&self, name: &str) -> Option<&Arc<MountainRange>> {
        self.knots.get(&KnotId::new(name))
    }

    pub fn ranges(&self) -> impl Iterator<Item = &Arc<MountainRange>> {
        self.knots.values()
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    /// Resolves a sum document; unknown names are looked up next to `base_dir`.
    pub fn resolve_sum(
        &mut self,
        doc: &SumDocument,
        base_dir: Option<&Path>,
    ) -> Result<SumSpec, DocError> {
        let mut summands = Vec::with_capacity(doc.summands.len());
        for entry in &doc.summands {
            if self.get(&entry.knot).is_none() {
                let found = base_dir.and_then(|dir| {
                    [dir.join(format!("{}.json", entry.knot)), dir.join("knots").join(format!("{}.json", entry.knot)), dir.join("..").join("knots").join(format!("{}.json", entry.knot))]
                        .into_iter()
                        .find(|p| p.is_file())
                });
                match found {
                    Some(p) => {
                        let range = load_knot(&p)?;
                        if range.knot_id.as_str() != entry.knot {
                            return Err(DocError::UnresolvedKnot(entry.knot.clone()));
                        }
                        self.insert(range)?;
                    }
                    None => return Err(DocError::UnresolvedKnot(entry.knot.clone())),
                }
            }
            let range = Arc::clone(self.get(&entry.knot).expect("inserted above"));
            summands.push(Summand {
                range,
                count: entry.count,
            });
        }
        Ok(SumSpec::new(summands)?)
    }

    pub fn load_sum(&mut self, path: &Path) -> Result<SumSpec, DocError> {
        let bytes = read(path)?;
        let doc = parse_sum_named(&bytes, &path.display().to_string())?;
        self.resolve_sum(&doc, path.parent())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valid_document_parses() {
        let doc = parse_knot_file(br#"{"name":"A","prime":true,"genus":null,"peaks":[[0,-2],[0,2]]}"#)
            .unwrap();
        assert_eq!(doc.peaks, vec![[0, -2], [0, 2]]);
        assert_eq!(
            doc.to_canonical_string(),
            "{\"name\":\"A\",\"prime\":true,\"genus\":null,\"peaks\":[[0,-2],[0,2]]}\n"
        );
    }

    #[test]
    fn out_of_order_peaks_are_schema_errors() {
        let err = parse_knot_file(br#"{"name":"A","prime":true,"genus":null,"peaks":[[0,2],[0,-2]]}"#)
            .unwrap_err();
        match err {
            DocError::Schema { location, .. } => assert_eq!(location, "peaks[1]"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn misplaced_valley_is_range_invalid() {
        let err = parse_knot_file(br#"{"name":"A","prime":true,"genus":null,"peaks":[[0,0],[-1,1]]}"#)
            .unwrap_err();
        assert!(matches!(err, DocError::RangeInvalid { .. }), "{err}");
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_knot_file(b"{\n  \"name\": \"A\",\n  oops\n}").unwrap_err();
        match err {
            DocError::Parse { line, .. } => assert_eq!(line, 3),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn unknown_and_missing_fields_are_schema_errors() {
        let err = parse_knot_file(br#"{"name":"A","prime":true,"peaks":[],"color":1}"#).unwrap_err();
        assert!(matches!(err, DocError::Schema { .. }), "{err}");
        let err = parse_knot_file(br#"{"name":"A","peaks":[[0,0]]}"#).unwrap_err();
        assert!(matches!(err, DocError::Schema { .. }), "{err}");
        let err = parse_knot_file(br#"{"name":"A","prime":true,"genus":-1,"peaks":[[0,0]]}"#).unwrap_err();
        assert!(matches!(err, DocError::Schema { .. }), "{err}");
    }

    #[test]
    fn sum_document_checks_counts() {
        let doc = parse_sum_file(br#"{"summands":[{"knot":"A","count":2}]}"#).unwrap();
        assert_eq!(doc.summands[0].count, 2);
        assert!(matches!(
            parse_sum_file(br#"{"summands":[{"knot":"A","count":0}]}"#),
            Err(DocError::Schema { .. })
        ));
        assert!(matches!(parse_sum_file(br#"{"summands":[]}"#), Err(DocError::Schema { .. })));
    }

    #[test]
    fn registry_resolves_names() {
        let mut reg = KnotRegistry::new();
        reg.insert(MountainRange::new("C", vec![Point::new(1, 0)])).unwrap();
        let doc = parse_sum_file(br#"{"summands":[{"knot":"C","count":3}]}"#).unwrap();
        let spec = reg.resolve_sum(&doc, None).unwrap();
        assert_eq!(spec.n(), 3);
        let doc = parse_sum_file(br#"{"summands":[{"knot":"Z","count":1}]}"#).unwrap();
        assert!(matches!(reg.resolve_sum(&doc, None), Err(DocError::UnresolvedKnot(_))));
        assert!(matches!(
            reg.insert(MountainRange::new("C", vec![Point::new(1, 0)])),
            Err(DocError::DuplicateKnot(_))
        ));
    }
}
