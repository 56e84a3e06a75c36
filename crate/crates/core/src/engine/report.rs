//! Homology tables and their three renderings.
//!
//! # Text
//!
//! A title line, an aligned table (one row per `q`, one column per degree), then
//! `errors:`, `warnings:` and `trail:` blocks when non-empty. Cells show the canonical
//! group rendering; a bounded value shows as `[lower ; upper]`, a failed cell as
//! `error`. The E₂ layout lists `q` in decreasing order and closes with the column
//! bound. Lines end in `\n`, columns are separated by two spaces, and trailing
//! spaces are trimmed.
//!
//! # Records
//!
//! UTF-8, one line per item, fields separated by a tab (written `\t` below):
//!
//! ```text
//! #ring\tZ
//! #n\t3
//! #layout\ttable
//! #warning\t<text>            (zero or more, in order)
//! p\tq\tgroup\tflag\ttrail
//! ```
//!
//! `flag` is `exact`, `bounded` or `error`; for `error` the group field holds the
//! message. Trail items are joined by ` | `. Cells are listed by increasing `q`,
//! then `p`. [`parse_records`] inverts [`render_records`].
//!
//! # LaTeX
//!
//! A `tabular` environment with the groups in math mode.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::abelian::{AbelianGroup, ExtNat, GroupValue};
use crate::error::ProfileError;

use super::TOP_DEGREE;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    Table,
    E2Page,
}

impl Layout {
    fn tag(self) -> &'static str {
        match self {
            Layout::Table => "table",
            Layout::E2Page => "e2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CellValue {
    Group(GroupValue),
    Error(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub p: usize,
    pub q: i64,
    pub value: CellValue,
    pub trail: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyReport {
    pub layout: Layout,
    pub ring: String,
    pub n: u64,
    warnings: Vec<String>,
    cells: BTreeMap<(i64, usize), Cell>,
}

impl HomologyReport {
    pub fn new(layout: Layout, ring: &str, n: u64) -> Self {
        HomologyReport {
            layout,
            ring: ring.to_string(),
            n,
            warnings: Vec::new(),
            cells: BTreeMap::new(),
        }
    }

    /// Adds a warning unless it is already present.
    pub fn add_warning(&mut self, w: impl Into<String>) {
        let w = clean(&w.into());
        if !self.warnings.contains(&w) {
            self.warnings.push(w);
        }
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn insert(&mut self, cell: Cell) {
        self.cells.insert((cell.q, cell.p), cell);
    }

    pub fn cell(&self, p: usize, q: i64) -> Option<&Cell> {
        self.cells.get(&(q, p))
    }

    pub fn cells(&self) -> impl Iterator<Item = &Cell> {
        self.cells.values()
    }

    /// The group at `(p, q)`; degrees above 3 are zero for every computed row.
    pub fn value(&self, p: usize, q: i64) -> Option<GroupValue> {
        if p > TOP_DEGREE {
            return self.cells.contains_key(&(q, 0)).then(GroupValue::zero);
        }
        match self.cell(p, q).map(|c| &c.value) {
            Some(CellValue::Group(v)) => Some(v.clone()),
            _ => None,
        }
    }

    pub fn q_values(&self) -> Vec<i64> {
        let mut qs: Vec<i64> = self.cells.keys().map(|(q, _)| *q).collect();
        qs.dedup();
        qs
    }

    pub fn has_bounded(&self) -> bool {
        self.cells
            .values()
            .any(|c| matches!(&c.value, CellValue::Group(v) if !v.is_exact()))
    }

    pub fn has_errors(&self) -> bool {
        self.cells
            .values()
            .any(|c| matches!(c.value, CellValue::Error(_)))
    }
}

fn clean(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn cell_text(c: Option<&Cell>) -> String {
    match c.map(|c| &c.value) {
        Some(CellValue::Group(v)) => v.to_string(),
        Some(CellValue::Error(_)) => "error".to_string(),
        None => String::new(),
    }
}

fn rows_in_order(r: &HomologyReport) -> Vec<i64> {
    let mut qs = r.q_values();
    if r.layout == Layout::E2Page {
        qs.reverse();
    }
    qs
}

fn push_line(out: &mut String, line: &str) {
    out.push_str(line.trim_end());
    out.push('\n');
}

pub fn render_text(r: &HomologyReport) -> String {
    let mut out = String::new();
    let title = match r.layout {
        Layout::Table => format!("H_p^vc(A_{}; K_q({}[-]))", r.n, r.ring),
        Layout::E2Page => format!("E^2_{{p,q}} = H_p^vc(A_{}; K_q({}[-]))", r.n, r.ring),
    };
    push_line(&mut out, &title);
    out.push('\n');

    let corner = match r.layout {
        Layout::Table => "q",
        Layout::E2Page => "q\\p",
    };
    let mut grid: Vec<Vec<String>> = Vec::new();
    let mut header = vec![corner.to_string()];
    header.extend((0..=TOP_DEGREE).map(|p| match r.layout {
        Layout::Table => format!("H_{p}"),
        Layout::E2Page => p.to_string(),
    }));
    grid.push(header);
    for q in rows_in_order(r) {
        let mut line = vec![q.to_string()];
        line.extend((0..=TOP_DEGREE).map(|p| cell_text(r.cell(p, q))));
        grid.push(line);
    }
    let widths: Vec<usize> = (0..=TOP_DEGREE + 1)
        .map(|j| grid.iter().map(|l| l[j].chars().count()).max().unwrap_or(0))
        .collect();
    for line in &grid {
        let padded: Vec<String> = line
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:<w$}"))
            .collect();
        push_line(&mut out, &padded.join("  "));
    }

    let errors: Vec<&Cell> = r
        .cells()
        .filter(|c| matches!(c.value, CellValue::Error(_)))
        .collect();
    if !errors.is_empty() {
        out.push_str("\nerrors:\n");
        for c in errors {
            if let CellValue::Error(e) = &c.value {
                push_line(&mut out, &format!("  H_{} at q = {}: {e}", c.p, c.q));
            }
        }
    }
    if !r.warnings.is_empty() {
        out.push_str("\nwarnings:\n");
        for w in &r.warnings {
            push_line(&mut out, &format!("  {w}"));
        }
    }
    let trails: Vec<&Cell> = r.cells().filter(|c| !c.trail.is_empty()).collect();
    if !trails.is_empty() {
        out.push_str("\ntrail:\n");
        for c in trails {
            push_line(&mut out, &format!("  ({}, {}): {}", c.p, c.q, c.trail.join("; ")));
        }
    }
    if r.layout == Layout::E2Page {
        out.push('\n');
        push_line(
            &mut out,
            "columns p >= 4 vanish; the spectral sequence collapses at the latest at E^5",
        );
    }
    out
}

pub fn render_records(r: &HomologyReport) -> String {
    let mut out = String::new();
    writeln!(out, "#ring\t{}", clean(&r.ring)).unwrap();
    writeln!(out, "#n\t{}", r.n).unwrap();
    writeln!(out, "#layout\t{}", r.layout.tag()).unwrap();
    for w in &r.warnings {
        writeln!(out, "#warning\t{w}").unwrap();
    }
    for c in r.cells() {
        let (group, flag) = match &c.value {
            CellValue::Group(v) if v.is_exact() => (v.to_string(), "exact"),
            CellValue::Group(v) => (v.to_string(), "bounded"),
            CellValue::Error(e) => (clean(e), "error"),
        };
        let trail: Vec<String> = c.trail.iter().map(|t| clean(t)).collect();
        writeln!(out, "{}\t{}\t{group}\t{flag}\t{}", c.p, c.q, trail.join(" | ")).unwrap();
    }
    out
}

fn record_error(line: usize, message: impl Into<String>) -> ProfileError {
    ProfileError::Parse {
        line,
        column: 1,
        message: message.into(),
    }
}

pub fn parse_records(source: &str) -> Result<HomologyReport, ProfileError> {
    let mut ring = None;
    let mut n = None;
    let mut layout = None;
    let mut warnings = Vec::new();
    let mut cells = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            let (key, value) = meta
                .split_once('\t')
                .ok_or_else(|| record_error(lineno, "metadata line needs a tab"))?;
            match key {
                "ring" => ring = Some(value.to_string()),
                "n" => {
                    n = Some(value.parse::<u64>().map_err(|_| record_error(lineno, "bad n"))?)
                }
                "layout" => {
                    layout = Some(match value {
                        "table" => Layout::Table,
                        "e2" => Layout::E2Page,
                        other => return Err(record_error(lineno, format!("unknown layout `{other}`"))),
                    })
                }
                "warning" => warnings.push(value.to_string()),
                other => return Err(record_error(lineno, format!("unknown metadata `{other}`"))),
            }
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 5 {
            return Err(record_error(lineno, format!("expected 5 fields, found {}", fields.len())));
        }
        let p: usize = fields[0].parse().map_err(|_| record_error(lineno, "bad p"))?;
        let q: i64 = fields[1].parse().map_err(|_| record_error(lineno, "bad q"))?;
        let value = match fields[3] {
            "exact" | "bounded" => {
                let v: GroupValue = fields[2]
                    .parse()
                    .map_err(|e| record_error(lineno, format!("{e}")))?;
                if v.is_exact() != (fields[3] == "exact") {
                    return Err(record_error(lineno, "flag does not match the group"));
                }
                CellValue::Group(v)
            }
            "error" => CellValue::Error(fields[2].to_string()),
            other => return Err(record_error(lineno, format!("unknown flag `{other}`"))),
        };
        let trail = if fields[4].is_empty() {
            Vec::new()
        } else {
            fields[4].split(" | ").map(str::to_string).collect()
        };
        cells.push(Cell { p, q, value, trail });
    }
    let missing = |what: &str| record_error(1, format!("missing #{what}"));
    let mut r = HomologyReport::new(
        layout.ok_or_else(|| missing("layout"))?,
        &ring.ok_or_else(|| missing("ring"))?,
        n.ok_or_else(|| missing("n"))?,
    );
    for w in warnings {
        r.add_warning(w);
    }
    for c in cells {
        r.insert(c);
    }
    Ok(r)
}

fn latex_term(base: &str, mult: ExtNat, wrap: bool) -> String {
    match mult {
        ExtNat::Fin(1) => base.to_string(),
        ExtNat::Fin(m) if wrap => format!("({base})^{{{m}}}"),
        ExtNat::Fin(m) => format!("{base}^{{{m}}}"),
        ExtNat::Omega => format!("\\bigoplus_{{\\aleph_0}} {base}"),
    }
}

/// A group in LaTeX math notation.
pub fn latex_group(g: &AbelianGroup) -> String {
    if g.is_zero() {
        return "0".to_string();
    }
    let mut terms = Vec::new();
    if !g.free_mult().is_zero() {
        terms.push(latex_term("\\mathbb{Z}", g.free_mult(), false));
    }
    for s in g.symbolic_ranks() {
        terms.push(format!("\\mathbb{{Z}}^{{{}}}", s.name()));
    }
    for (order, mult) in g.factors() {
        if let Some(o) = order.order() {
            terms.push(latex_term(&format!("\\mathbb{{Z}}/{o}"), mult, true));
        }
    }
    terms.join(" \\oplus ")
}

fn latex_value(c: Option<&Cell>) -> String {
    match c.map(|c| &c.value) {
        Some(CellValue::Group(GroupValue::Exact(g))) => format!("${}$", latex_group(g)),
        Some(CellValue::Group(GroupValue::Bounded { lower, upper })) => format!(
            "${} \\subseteq \\cdot \\subseteq {}$",
            latex_group(lower),
            latex_group(upper)
        ),
        Some(CellValue::Error(_)) => "--".to_string(),
        None => String::new(),
    }
}

pub fn render_latex(r: &HomologyReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "% H_p^vc(A_{}; K_q({}[-]))",
        r.n,
        r.ring
    )
    .unwrap();
    out.push_str("\\begin{tabular}{c|cccc}\n");
    out.push_str("$q$ & $H_0$ & $H_1$ & $H_2$ & $H_3$ \\\\\n\\hline\n");
    for q in rows_in_order(r) {
        let cols: Vec<String> = (0..=TOP_DEGREE).map(|p| latex_value(r.cell(p, q))).collect();
        writeln!(out, "${q}$ & {} \\\\", cols.join(" & ")).unwrap();
    }
    out.push_str("\\end{tabular}\n");
    out
}
