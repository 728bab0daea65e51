//! Text and JSON renderings of an analysis.

use std::fmt::Write as _;

use clap::ValueEnum;
use nodesum_core::nodecount::{FacetReport, FormulaOutcome};
use nodesum_core::{AnalysisReport, AssumptionReport, ExtendedNat, FiberPolygon, Int};
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Formula {
    Closure,
    Punctured,
    Conjecture,
    All,
}

impl Formula {
    pub fn closure(self) -> bool {
        matches!(self, Self::Closure | Self::All)
    }

    pub fn punctured(self) -> bool {
        matches!(self, Self::Punctured | Self::All)
    }

    pub fn conjecture(self) -> bool {
        matches!(self, Self::Conjecture | Self::All)
    }
}

pub fn int_json(x: &Int) -> Value {
    Value::Number(x.to_string().parse().expect("integers are valid JSON numbers"))
}

fn ints_json(xs: &[Int]) -> Value {
    Value::Array(xs.iter().map(int_json).collect())
}

fn extended_json(x: &ExtendedNat) -> Value {
    match x {
        ExtendedNat::Finite(v) => int_json(v),
        ExtendedNat::Infinity => Value::String("inf".into()),
    }
}

pub fn tuple(xs: &[Int]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn facet_json(f: &FacetReport<Int>) -> Value {
    json!({
        "id": f.facet_id,
        "normal": ints_json(&f.normal),
        "offset": int_json(&f.offset),
        "horizontal": f.horizontal,
        "volume": int_json(&f.volume),
        "multiplier": int_json(&f.multiplier),
        "sequence": f.sequence.values.iter().map(extended_json).collect::<Vec<_>>(),
        "sequence_start": f.sequence.shift_r,
        "excess": int_json(&f.excess),
    })
}

pub fn assumptions_json(a: &AssumptionReport) -> Value {
    json!({
        "contains_origin": a.contains_origin,
        "ind_v_is_one": a.ind_v_is_one,
        "primitive_ok": a.primitive_ok,
        "primitive_offenders": a.primitive_offenders,
        "horiz_latt_ok": a.horiz_latt_ok,
        "horiz_latt_offenders": a.horiz_latt_offenders,
        "horizontal_ok": a.horizontal_ok,
        "horizontal_offenders": a.horizontal_offenders,
        "developed": a.developed,
    })
}

pub fn polygon_json(p: &FiberPolygon) -> Value {
    json!({
        "vertices": p.vertices.iter().map(|v| ints_json(v)).collect::<Vec<_>>(),
        "edges": p
            .edges
            .iter()
            .zip(p.edge_vectors())
            .map(|((normal, len), vector)| json!({"normal": ints_json(normal), "length": int_json(len), "vector": ints_json(&vector)}))
            .collect::<Vec<_>>(),
        "norm_area": int_json(&p.norm_area),
    })
}

fn blocked_reasons(outcome: &FormulaOutcome<Int>) -> Option<Vec<String>> {
    match outcome {
        FormulaOutcome::Value(_) => None,
        FormulaOutcome::Blocked(failures) => Some(failures.iter().map(ToString::to_string).collect()),
    }
}

pub fn json_report(name: &str, r: &AnalysisReport, formula: Formula) -> Value {
    let mut d = Map::new();
    let mut blocked = Map::new();
    if formula.closure() {
        d.insert("closure".into(), int_json(&r.d_closure));
    }
    let optional = [
        ("punctured", formula.punctured(), &r.d_punctured),
        ("conjecture", formula.conjecture(), &r.d_conjecture),
    ];
    for (key, selected, outcome) in optional {
        if !selected {
            continue;
        }
        match outcome {
            FormulaOutcome::Value(v) => {
                d.insert(key.into(), int_json(v));
            }
            FormulaOutcome::Blocked(_) => {
                blocked.insert(key.into(), json!(blocked_reasons(outcome)));
            }
        }
    }
    json!({
        "schema_version": SCHEMA_VERSION,
        "name": name,
        "n": r.n,
        "volume": int_json(&r.norm_volume_delta),
        "fiber_area": int_json(&r.fiber_area),
        "fiber_polygon": polygon_json(&r.fiber),
        "facets": r.facets.iter().map(facet_json).collect::<Vec<_>>(),
        "assumptions": assumptions_json(&r.assumptions),
        "D": Value::Object(d),
        "blocked": Value::Object(blocked),
        "chi_curve": int_json(&r.chi_curve),
        "notes": r.notes,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn ids(xs: &[usize]) -> String {
    if xs.is_empty() {
        String::new()
    } else {
        let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
        format!(" (facets {})", parts.join(", "))
    }
}

pub fn assumptions_text(a: &AssumptionReport) -> String {
    let rows = [
        ("contains_origin", a.contains_origin, String::new()),
        ("ind_v_is_one", a.ind_v_is_one, String::new()),
        ("primitive_ok", a.primitive_ok, ids(&a.primitive_offenders)),
        ("horiz_latt_ok", a.horiz_latt_ok, ids(&a.horiz_latt_offenders)),
        ("horizontal_ok", a.horizontal_ok, ids(&a.horizontal_offenders)),
        ("developed", a.developed, String::new()),
    ];
    let mut out = String::new();
    for (label, ok, extra) in rows {
        writeln!(out, "  {label:<16} {}{extra}", yes_no(ok)).unwrap();
    }
    out
}

pub fn polygon_text(p: &FiberPolygon) -> String {
    let mut out = String::new();
    let vertices: Vec<String> = p.vertices.iter().map(|v| tuple(v)).collect();
    writeln!(out, "P vertices: {}", vertices.join(" ")).unwrap();
    let edges: Vec<String> = p.edge_vectors().iter().map(|e| tuple(e)).collect();
    writeln!(out, "P edges: {}", edges.join(" ")).unwrap();
    writeln!(out, "Area(P) = {}", p.norm_area).unwrap();
    out
}

/// Left-aligned columns separated by two spaces, no trailing blanks.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        writeln!(out, "{}", padded.join("  ").trim_end()).unwrap();
    };
    line(header.to_vec());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
    out
}

fn sum(xs: impl Iterator<Item = Int>) -> Int {
    xs.fold(Int::from(0), |acc, x| acc + x)
}

fn outcome_text(outcome: &FormulaOutcome<Int>) -> String {
    match outcome {
        FormulaOutcome::Value(v) => v.to_string(),
        FormulaOutcome::Blocked(failures) => {
            let reasons: Vec<String> = failures.iter().map(ToString::to_string).collect();
            format!("blocked: {}", reasons.join("; "))
        }
    }
}

pub fn text_report(name: &str, r: &AnalysisReport, formula: Formula) -> String {
    let mut out = String::new();
    writeln!(out, "name: {name}").unwrap();
    writeln!(out, "n = {}", r.n).unwrap();
    writeln!(out, "Vol(Delta) = {}", r.norm_volume_delta).unwrap();
    out.push_str(&polygon_text(&r.fiber));
    writeln!(out).unwrap();

    let header = [
        "facet", "normal", "offset", "H", "volume", "mult", "sequence", "excess", "H term", "excess term",
    ];
    let rows: Vec<Vec<String>> = r
        .facets
        .iter()
        .map(|f| {
            let h_term = if f.horizontal { f.volume.clone() } else { Int::from(0) };
            vec![
                f.facet_id.to_string(),
                tuple(&f.normal),
                f.offset.to_string(),
                yes_no(f.horizontal).into(),
                f.volume.to_string(),
                f.multiplier.to_string(),
                f.sequence.to_string(),
                f.excess.to_string(),
                h_term.to_string(),
                (f.volume.clone() * f.excess.clone()).to_string(),
            ]
        })
        .collect();
    out.push_str(&table(&header, &rows));
    writeln!(out).unwrap();

    let n1 = r.n + 1;
    let vol = &r.norm_volume_delta;
    let h_sum = sum(r.facets.iter().filter(|f| f.horizontal).map(|f| f.volume.clone()));
    let excess_nonh = sum(r.facets.iter().filter(|f| !f.horizontal).map(|f| f.volume.clone() * f.excess.clone()));
    let excess_all = sum(r.facets.iter().map(|f| f.volume.clone() * f.excess.clone()));
    let base = format!("{} - {n1}*{vol}", r.fiber_area);
    if formula.closure() {
        writeln!(out, "closure:    ({base} + {h_sum} - {excess_nonh}) / 2").unwrap();
        writeln!(out, "D_closure = {}", r.d_closure).unwrap();
    }
    if formula.punctured() {
        if r.d_punctured.value().is_some() {
            writeln!(out, "punctured:  ({base} + {h_sum} - {excess_all}) / 2").unwrap();
        }
        writeln!(out, "D_punctured = {}", outcome_text(&r.d_punctured)).unwrap();
    }
    if formula.conjecture() {
        if r.d_conjecture.value().is_some() {
            let weighted = sum(r.facets.iter().filter(|f| f.horizontal).map(|f| {
                let i1 = f.sequence.first().finite().cloned().unwrap_or_default();
                f.volume.clone() * (Int::from(2) * i1.clone() - i1.clone() * i1)
            }));
            writeln!(out, "conjecture: ({base} + {weighted} - {excess_all}) / 2").unwrap();
            writeln!(out, "D_conjecture = {} (conjectural)", outcome_text(&r.d_conjecture)).unwrap();
        } else {
            writeln!(out, "D_conjecture = {}", outcome_text(&r.d_conjecture)).unwrap();
        }
    }
    writeln!(out, "chi_curve = {}", r.chi_curve).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "assumptions:").unwrap();
    out.push_str(&assumptions_text(&r.assumptions));
    writeln!(out, "notes:").unwrap();
    for note in &r.notes {
        writeln!(out, "  - {note}").unwrap();
    }
    out
}
