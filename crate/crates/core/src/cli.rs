//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when the input is well-formed but the
//! computation fails or reports invalid data, 2 on usage errors. `--format json`
//! switches every command except `render` to a pretty JSON document.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::composite::{build_quotient, enumerate_fiber, peaks_of_sum, FiberClass, SumPeak, SumSpec, TupleClass};
use crate::io::{parse_knot_file, KnotRegistry};
use crate::mountain_range::{MountainRange, Point};
use crate::paths::{find_connecting_path, PathWord};
use crate::poset_analysis::{detect_peaks, detect_valleys, nonsimple_report, Dichotomy, TruncatedPoset};
use crate::render::{empty_diagram, render, RenderFormat, RenderModel, RenderSpec};
use crate::report::{quotient_report, range_report, summand_entries, to_json, SummandEntry};
use crate::simplicity::{
    canonical_form, criterion, nonsimplicity_witness, simplicity_in_window, xy_invariants, CanonicalForm,
    CriterionCase, XYInvariants, DEFAULT_DEPTH,
};

#[derive(Parser, Debug)]
#[command(name = "legendrian", version, about = "Mountain ranges and connected sums of Legendrian knots")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RenderKind {
    Ascii,
    Svg,
}

#[derive(Args, Debug)]
struct Inputs {
    /// Sum document
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Knot document or directory of knot documents (repeatable)
    #[arg(long)]
    knot: Vec<PathBuf>,
}

#[derive(Args, Debug)]
struct SpecInputs {
    /// Sum document
    #[arg(long)]
    spec: PathBuf,
    /// Knot document or directory of knot documents (repeatable)
    #[arg(long)]
    knot: Vec<PathBuf>,
}

#[derive(Args, Debug)]
struct Window {
    /// Window floor; overrides --depth
    #[arg(long, allow_negative_numbers = true)]
    tb_min: Option<i64>,
    /// Window depth below the top level
    #[arg(long, default_value_t = DEFAULT_DEPTH, value_parser = clap::value_parser!(i64).range(0..))]
    depth: i64,
}

impl Window {
    fn floor(&self, top: i64) -> i64 {
        self.tb_min.unwrap_or(top - self.depth)
    }
}

#[derive(Args, Debug)]
struct At {
    #[arg(long, allow_negative_numbers = true)]
    tb: i64,
    #[arg(long, allow_negative_numbers = true)]
    r: i64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check knot documents (or a sum document and its knots)
    Validate(Inputs),
    /// Draw a range or the image of a sum
    Render {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        window: Window,
        #[arg(long, value_enum, default_value_t = RenderKind::Ascii)]
        render: RenderKind,
    },
    /// Peaks of a range or a sum
    Peaks(Inputs),
    /// Valleys of a range, or of a sum within the window
    Valleys {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        window: Window,
    },
    /// Build the window quotient of a sum
    Sum {
        #[command(flatten)]
        inputs: SpecInputs,
        #[command(flatten)]
        window: Window,
    },
    /// Classes of a sum over one point
    Fiber {
        #[command(flatten)]
        inputs: SpecInputs,
        #[command(flatten)]
        at: At,
    },
    /// Exhaustive simplicity check within the window
    Simple {
        #[command(flatten)]
        inputs: SpecInputs,
        #[command(flatten)]
        window: Window,
    },
    /// Decide simplicity from peak counts and multiplicities
    Criterion(SpecInputs),
    /// Two inequivalent classes with equal invariants
    Witness(SpecInputs),
    /// Canonical form of a class of a two-peak power
    Canonical {
        #[command(flatten)]
        inputs: SpecInputs,
        #[command(flatten)]
        at: At,
    },
    /// X and Y of a point of a two-peak power
    Xy {
        #[command(flatten)]
        inputs: SpecInputs,
        #[command(flatten)]
        at: At,
    },
    /// Search for a word connecting two pairs of a two-summand sum
    PathSearch {
        #[command(flatten)]
        inputs: SpecInputs,
        #[command(flatten)]
        window: Window,
        /// Start pair as tb1,r1,tb2,r2
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        /// End pair as tb1,r1,tb2,r2
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Longest word to try; defaults to 4 x depth
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Maximal nonsimple points and their dichotomy verdicts
    Nmax {
        #[command(flatten)]
        inputs: SpecInputs,
        #[command(flatten)]
        window: Window,
    },
}

enum CliError {
    Usage(String),
    Domain(String),
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

struct Outcome {
    body: Vec<u8>,
    code: i32,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome {
            body: body.into_bytes(),
            code: 0,
        }
    }
}

/// Runs one invocation and returns its exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                2
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &outcome.body)
                    .map_err(|e| format!("{}: {e}", path.display())),
                None => out.write_all(&outcome.body).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => outcome.code,
                Err(msg) => {
                    let _ = writeln!(err, "error: {msg}");
                    1
                }
            }
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(CliError::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

enum Model {
    Knot(Arc<MountainRange>),
    Sum(SumSpec),
}

fn registry(knots: &[PathBuf]) -> Result<KnotRegistry, CliError> {
    let mut reg = KnotRegistry::new();
    for k in knots {
        reg.load_path(k).map_err(domain)?;
    }
    Ok(reg)
}

fn load_spec(spec: &Path, knots: &[PathBuf]) -> Result<SumSpec, CliError> {
    registry(knots)?.load_sum(spec).map_err(domain)
}

fn model(inputs: &Inputs) -> Result<Model, CliError> {
    if let Some(spec) = &inputs.spec {
        return Ok(Model::Sum(load_spec(spec, &inputs.knot)?));
    }
    if inputs.knot.is_empty() {
        return Err(CliError::Usage("one of --spec or --knot is required".into()));
    }
    let reg = registry(&inputs.knot)?;
    let mut ranges = reg.ranges();
    match (ranges.next(), ranges.next()) {
        (Some(r), None) => Ok(Model::Knot(Arc::clone(r))),
        _ => Err(CliError::Usage(format!(
            "--knot loaded {} knots; give exactly one, or use --spec",
            reg.len()
        ))),
    }
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce(&T) -> String) -> Outcome {
    Outcome::ok(match format {
        Format::Json => to_json(value),
        Format::Text => text(value),
    })
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let f = cli.format;
    match &cli.command {
        Command::Validate(inputs) => validate(f, inputs),
        Command::Render { inputs, window, render: kind } => render_cmd(inputs, window, *kind),
        Command::Peaks(inputs) => peaks(f, inputs),
        Command::Valleys { inputs, window } => valleys(f, inputs, window),
        Command::Sum { inputs, window } => {
            let spec = load_spec(&inputs.spec, &inputs.knot)?;
            let q = build_quotient(&spec, window.floor(spec.top_tb())).map_err(domain)?;
            let report = quotient_report(&spec, &q);
            Ok(emit(f, &report, |r| {
                let mut s = String::new();
                let _ = writeln!(s, "sum {}", describe_summands(&r.summands));
                let _ = writeln!(s, "window tb >= {} (top {})", r.tb_min, r.top_tb);
                let _ = writeln!(
                    s,
                    "{} classes, {} edges, largest fiber {}",
                    r.nodes.len(),
                    r.edges.len(),
                    r.max_fiber_size
                );
                for n in &r.nodes {
                    let _ = writeln!(s, "  #{} {} {}", n.id, n.point, n.representative);
                }
                s
            }))
        }
        Command::Fiber { inputs, at } => {
            let spec = load_spec(&inputs.spec, &inputs.knot)?;
            let report = FiberReport {
                point: Point::new(at.tb, at.r),
                classes: enumerate_fiber(&spec, at.tb, at.r),
            };
            Ok(emit(f, &report, |r| {
                let mut s = String::new();
                let _ = writeln!(s, "{}: {} classes", r.point, r.classes.len());
                for (i, c) in r.classes.iter().enumerate() {
                    let _ = writeln!(s, "  class {}: {}", i + 1, c.representative());
                    for m in &c.members[1..] {
                        let _ = writeln!(s, "    ~ {m}");
                    }
                }
                s
            }))
        }
        Command::Simple { inputs, window } => {
            let spec = load_spec(&inputs.spec, &inputs.knot)?;
            let v = simplicity_in_window(&spec, window.floor(spec.top_tb())).map_err(domain)?;
            Ok(emit(f, &v, |v| {
                let mut s = String::new();
                let verdict = if v.simple_in_window { "simple" } else { "not simple" };
                let _ = writeln!(s, "window tb >= {} (top {}): {verdict}", v.tb_min, v.top_tb);
                let _ = writeln!(s, "largest fiber: {}", v.max_fiber_size);
                if let Some(w) = &v.witness {
                    let _ = writeln!(s, "witness at {}: {} vs {}", w.point, w.first, w.second);
                }
                s
            }))
        }
        Command::Criterion(inputs) => {
            let spec = load_spec(&inputs.spec, &inputs.knot)?;
            let v = criterion(&spec).map_err(domain)?;
            Ok(emit(f, &v, |v| {
                let mut s = String::new();
                let _ = writeln!(s, "verdict: {}", if v.simple { "simple" } else { "not simple" });
                let _ = writeln!(s, "case: {}", case_label(v.matched_case));
                for p in &v.peak_counts {
                    let _ = writeln!(s, "  {}: {} peaks, count {}", p.knot, p.peaks, p.count);
                }
                s
            }))
        }
        Command::Witness(inputs) => {
            let spec = load_spec(&inputs.spec, &inputs.knot)?;
            let w = nonsimplicity_witness(&spec).map_err(domain)?;
            Ok(emit(f, &w, |w| {
                let mut s = String::new();
                let _ = writeln!(s, "point: {}", w.point);
                let _ = writeln!(s, "first:  {}", w.first);
                let _ = writeln!(s, "second: {}", w.second);
                s
            }))
        }
        Command::Canonical { inputs, at } => {
            let spec = load_spec(&inputs.spec, &inputs.knot)?;
            let (range, n) = power(&spec)?;
            let form = canonical_form(range, n, at.tb, at.r).map_err(domain)?;
            let xy = xy_invariants(range, n, at.tb, at.r).ok();
            let report = CanonicalReport {
                point: Point::new(at.tb, at.r),
                n,
                form,
                xy,
            };
            Ok(emit(f, &report, |r| match r.form {
                Some(c) => format!(
                    "{}: S+^{} S-^{} ({} x P1 # {} x P2)\n",
                    r.point, c.a, c.b, c.p, c.q
                ),
                None => format!("{}: no class of the sum\n", r.point),
            }))
        }
        Command::Xy { inputs, at } => {
            let spec = load_spec(&inputs.spec, &inputs.knot)?;
            let (range, n) = power(&spec)?;
            let xy = xy_invariants(range, n, at.tb, at.r).map_err(domain)?;
            Ok(emit(f, &xy, |xy| format!("X = {}\nY = {}\n", xy.X, xy.Y)))
        }
        Command::PathSearch {
            inputs,
            window,
            from,
            to,
            max_len,
        } => path_search(f, inputs, window, from, to, *max_len),
        Command::Nmax { inputs, window } => {
            let spec = load_spec(&inputs.spec, &inputs.knot)?;
            let q = build_quotient(&spec, window.floor(spec.top_tb())).map_err(domain)?;
            let report = nonsimple_report(&TruncatedPoset::from_quotient(&q));
            Ok(emit(f, &report, |r| {
                let mut s = String::new();
                let _ = writeln!(
                    s,
                    "window tb >= {} (top {}): {} nonsimple points",
                    r.tb_min,
                    r.top_tb,
                    r.nonsimple.len()
                );
                for v in &r.nmax {
                    let verdict = match v.verdict {
                        Dichotomy::PeakInFiber => "peak in fiber",
                        Dichotomy::ValleyPair => "valley pair",
                        Dichotomy::Violation => "VIOLATION",
                    };
                    let _ = writeln!(s, "  N_max {}: {} classes, {verdict}", v.point, v.fiber_size);
                }
                s
            }))
        }
    }
}

fn case_label(case: CriterionCase) -> &'static str {
    match case {
        CriterionCase::AllOnePeak => "1 (all-one-peak)",
        CriterionCase::TwoPeakPower => "2 (two-peak-power)",
        CriterionCase::ManyPeaksOnce => "3 (many-peaks-once)",
        CriterionCase::None => "none",
    }
}

fn peak_word(n: usize) -> String {
    if n == 1 {
        "1 peak".into()
    } else {
        format!("{n} peaks")
    }
}

fn describe_summands(entries: &[SummandEntry]) -> String {
    entries
        .iter()
        .map(|e| format!("{}x{}", e.knot, e.count))
        .collect::<Vec<_>>()
        .join(" # ")
}

fn power(spec: &SumSpec) -> Result<(&MountainRange, i64), CliError> {
    match spec.summands() {
        [s] => Ok((&s.range, s.count as i64)),
        _ => Err(CliError::Domain(
            "canonical forms need a sum of copies of a single knot".into(),
        )),
    }
}

#[derive(Serialize)]
struct ValidateEntry {
    path: String,
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    knot: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    peaks: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn knot_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(p)
                .map_err(|e| domain(format!("{}: {e}", p.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "json"))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

fn validate(f: Format, inputs: &Inputs) -> Result<Outcome, CliError> {
    if inputs.spec.is_none() && inputs.knot.is_empty() {
        return Err(CliError::Usage("one of --spec or --knot is required".into()));
    }
    let mut entries = Vec::new();
    if let Some(spec) = &inputs.spec {
        let entry = match load_spec(spec, &inputs.knot) {
            Ok(s) => ValidateEntry {
                path: spec.display().to_string(),
                valid: true,
                knot: Some(describe_summands(&summand_entries(&s))),
                peaks: None,
                error: None,
            },
            Err(CliError::Domain(msg) | CliError::Usage(msg)) => ValidateEntry {
                path: spec.display().to_string(),
                valid: false,
                knot: None,
                peaks: None,
                error: Some(msg),
            },
        };
        entries.push(entry);
    } else {
        for path in knot_files(&inputs.knot)? {
            let parsed = std::fs::read(&path)
                .map_err(|e| e.to_string())
                .and_then(|bytes| parse_knot_file(&bytes).map_err(|e| e.to_string()));
            entries.push(match parsed {
                Ok(doc) => ValidateEntry {
                    path: path.display().to_string(),
                    valid: true,
                    knot: Some(doc.name.clone()),
                    peaks: Some(doc.peaks.len()),
                    error: None,
                },
                Err(msg) => ValidateEntry {
                    path: path.display().to_string(),
                    valid: false,
                    knot: None,
                    peaks: None,
                    error: Some(msg),
                },
            });
        }
    }
    let code = if entries.iter().all(|e| e.valid) { 0 } else { 1 };
    let mut outcome = emit(f, &entries, |entries| {
        let mut s = String::new();
        for e in entries {
            match (&e.error, &e.knot) {
                (Some(msg), _) => {
                    let _ = writeln!(s, "{}: invalid: {msg}", e.path);
                }
                (None, Some(k)) => match e.peaks {
                    Some(p) => {
                        let _ = writeln!(s, "{}: ok ({k}, {})", e.path, peak_word(p));
                    }
                    None => {
                        let _ = writeln!(s, "{}: ok ({k})", e.path);
                    }
                },
                (None, None) => {
                    let _ = writeln!(s, "{}: ok", e.path);
                }
            }
        }
        s
    });
    outcome.code = code;
    Ok(outcome)
}

fn render_cmd(inputs: &Inputs, window: &Window, kind: RenderKind) -> Result<Outcome, CliError> {
    let format = match kind {
        RenderKind::Ascii => RenderFormat::Ascii,
        RenderKind::Svg => RenderFormat::Svg,
    };
    let body = match model(inputs)? {
        Model::Knot(range) => {
            let tb_min = window.floor(range.top_tb());
            render(&RenderModel::Range(&range), &RenderSpec { format, tb_min })
        }
        Model::Sum(spec) => {
            let tb_min = window.floor(spec.top_tb());
            if tb_min > spec.top_tb() {
                empty_diagram(format)
            } else {
                let q = build_quotient(&spec, tb_min).map_err(domain)?;
                render(&RenderModel::Quotient(&q), &RenderSpec { format, tb_min })
            }
        }
    };
    Ok(Outcome { body, code: 0 })
}

#[derive(Serialize)]
struct SumPeaksReport {
    summands: Vec<SummandEntry>,
    formula: u64,
    detected: usize,
    peaks: Vec<SumPeak>,
}

fn peaks(f: Format, inputs: &Inputs) -> Result<Outcome, CliError> {
    match model(inputs)? {
        Model::Knot(range) => {
            let report = range_report(&range);
            Ok(emit(f, &report, |r| {
                let mut s = String::new();
                let _ = writeln!(s, "{}: {}", r.knot, peak_word(r.peaks.len()));
                for p in &r.peaks {
                    let _ = writeln!(s, "  {p}");
                }
                s
            }))
        }
        Model::Sum(spec) => {
            let peaks = peaks_of_sum(&spec);
            let lowest = peaks.iter().map(|p| p.point.tb).min().unwrap_or(spec.top_tb());
            let q = build_quotient(&spec, lowest).map_err(domain)?;
            let report = SumPeaksReport {
                summands: summand_entries(&spec),
                formula: crate::simplicity::peak_count_formula(&spec),
                detected: detect_peaks(&TruncatedPoset::from_quotient(&q)).len(),
                peaks,
            };
            Ok(emit(f, &report, |r| {
                let mut s = String::new();
                let _ = writeln!(
                    s,
                    "{}: {} peaks (formula {}, detected {})",
                    describe_summands(&r.summands),
                    r.peaks.len(),
                    r.formula,
                    r.detected
                );
                for p in &r.peaks {
                    let _ = writeln!(s, "  {} {}", p.point, p.tuple);
                }
                s
            }))
        }
    }
}

#[derive(Serialize)]
struct ValleyEntry {
    id: usize,
    point: Point,
    representative: TupleClass,
}

fn valleys(f: Format, inputs: &Inputs, window: &Window) -> Result<Outcome, CliError> {
    match model(inputs)? {
        Model::Knot(range) => {
            let vs = range.valleys().map_err(domain)?;
            Ok(emit(f, &vs, |vs| {
                let mut s = String::new();
                let _ = writeln!(s, "{}: {} valleys", range.knot_id, vs.len());
                for v in vs {
                    let _ = writeln!(
                        s,
                        "  {} between peaks {} and {}",
                        v.point(),
                        v.left_peak_index,
                        v.right_peak_index
                    );
                }
                s
            }))
        }
        Model::Sum(spec) => {
            let q = build_quotient(&spec, window.floor(spec.top_tb())).map_err(domain)?;
            let entries: Vec<ValleyEntry> = detect_valleys(&TruncatedPoset::from_quotient(&q))
                .into_iter()
                .map(|id| ValleyEntry {
                    id,
                    point: q.nodes[id].point,
                    representative: q.nodes[id].representative.clone(),
                })
                .collect();
            Ok(emit(f, &entries, |es| {
                let mut s = String::new();
                let _ = writeln!(s, "{} valleys in window tb >= {}", es.len(), q.tb_min);
                for e in es {
                    let _ = writeln!(s, "  #{} {} {}", e.id, e.point, e.representative);
                }
                s
            }))
        }
    }
}

#[derive(Serialize)]
struct FiberReport {
    point: Point,
    classes: Vec<FiberClass>,
}

#[derive(Serialize)]
struct CanonicalReport {
    point: Point,
    n: i64,
    form: Option<CanonicalForm>,
    xy: Option<XYInvariants>,
}

#[derive(Serialize)]
struct PathReport {
    from: [Point; 2],
    to: [Point; 2],
    tb_floor: i64,
    max_len: usize,
    word: Option<PathWord>,
}

fn parse_pair(flag: &str, s: &str) -> Result<[Point; 2], CliError> {
    let nums: Result<Vec<i64>, _> = s.split(',').map(|t| t.trim().parse::<i64>()).collect();
    match nums.as_deref() {
        Ok([a, b, c, d]) => Ok([Point::new(*a, *b), Point::new(*c, *d)]),
        _ => Err(CliError::Usage(format!(
            "--{flag} expects four integers tb1,r1,tb2,r2, got {s:?}"
        ))),
    }
}

fn path_search(
    f: Format,
    inputs: &SpecInputs,
    window: &Window,
    from: &str,
    to: &str,
    max_len: Option<usize>,
) -> Result<Outcome, CliError> {
    let start = parse_pair("from", from)?;
    let end = parse_pair("to", to)?;
    let spec = load_spec(&inputs.spec, &inputs.knot)?;
    let (k1, k2) = match spec.summands() {
        [a, b] if a.count == 1 && b.count == 1 => (&a.range, &b.range),
        _ => {
            return Err(CliError::Domain(
                "path-search needs a sum of two distinct knots, each with count 1".into(),
            ))
        }
    };
    for (k, p) in [(k1, start[0]), (k2, start[1]), (k1, end[0]), (k2, end[1])] {
        if !k.is_member(p) {
            return Err(CliError::Domain(format!("{p} is not in the range of {}", k.knot_id)));
        }
    }
    let tb_floor = spec.factor_floor(window.floor(spec.top_tb()));
    let max_len = max_len.unwrap_or(4 * window.depth as usize);
    let word = find_connecting_path(k1, start[0], end[0], k2, start[1], end[1], tb_floor, max_len)
        .map_err(domain)?;
    let report = PathReport {
        from: start,
        to: end,
        tb_floor,
        max_len,
        word,
    };
    Ok(emit(f, &report, |r| match &r.word {
        Some(w) if w.is_empty() => "word: (empty)\n".to_string(),
        Some(w) => format!("word: {w}\nlength: {}\n", w.len()),
        None => format!("no connecting word within {} letters\n", r.max_len),
    }))
}
