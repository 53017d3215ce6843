//! Rendering of results as text or JSON, and reading JSON representatives
//! back.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use atiyah_core::atiyah::{
    ChainMapFailure, ClassChernRep, ClassicalAtiyahRep, ClassicalDegree, Cochain, CochainValue, TruncChernRep,
    TruncatedAtiyahRep, TruncatedDegree,
};
use atiyah_core::complexes::{BundleComplex, Matrix, ValidationFailure};
use atiyah_core::geometry::{AmbientForm, ChartSet, CoveredScheme, LocalFraction};
use atiyah_core::ring::parse_poly;

use crate::problem::chart_names;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// What a command prints, and whether its checks passed.
#[derive(Debug, Clone)]
pub struct Report {
    pub passed: bool,
    pub json: Value,
    pub text: String,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut out = serde_json::to_string_pretty(&self.json).expect("serializable");
                out.push('\n');
                out
            }
            Format::Text => self.text.clone(),
        }
    }
}

pub fn status(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "fail"
    }
}

pub fn names_of(scheme: &CoveredScheme, charts: &[usize]) -> Vec<String> {
    let names = chart_names(scheme);
    charts.iter().map(|&i| names[i].clone()).collect()
}

fn text_fraction(a: &LocalFraction) -> String {
    let a = a.normalized();
    if a.pow() == 0 {
        a.num().to_string()
    } else {
        format!("({})/f^{}", a.num(), a.pow())
    }
}

fn text_form(w: &AmbientForm) -> String {
    let vars = w.chart().ring().vars();
    let parts: Vec<String> = w
        .coeffs()
        .iter()
        .zip(vars)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, v)| format!("{}*d{v}", text_fraction(c)))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Values that can be written as JSON and read back on a given chart set.
pub trait JsonValue: CochainValue {
    fn to_json(&self) -> Value;
    fn to_text(&self) -> String;
    fn from_json(v: &Value, chart: &ChartSet) -> Result<Self, CliError>;
}

fn bad(what: &str) -> CliError {
    CliError::Schema(format!("malformed {what}"))
}

impl JsonValue for LocalFraction {
    fn to_json(&self) -> Value {
        let a = self.normalized();
        json!({"num": a.num().to_string(), "pow": a.pow()})
    }

    fn to_text(&self) -> String {
        text_fraction(self)
    }

    fn from_json(v: &Value, chart: &ChartSet) -> Result<Self, CliError> {
        let num = v.get("num").and_then(Value::as_str).ok_or_else(|| bad("fraction"))?;
        let pow = match v.get("pow") {
            None => 0,
            Some(Value::Number(n)) => n.as_u64().ok_or_else(|| bad("pow"))? as u32,
            Some(Value::String(s)) => s.trim().parse().map_err(|_| bad("pow"))?,
            Some(_) => return Err(bad("pow")),
        };
        let num = parse_poly(num, chart.ring()).map_err(|e| CliError::Schema(e.to_string()))?;
        Ok(LocalFraction::new(num, pow, chart))
    }
}

/// Forms are objects keyed `d<var>`; zero coefficients are omitted.
impl JsonValue for AmbientForm {
    fn to_json(&self) -> Value {
        let vars = self.chart().ring().vars();
        let mut out = Map::new();
        for (c, v) in self.coeffs().iter().zip(vars) {
            if !c.is_zero() {
                out.insert(format!("d{v}"), c.to_json());
            }
        }
        Value::Object(out)
    }

    fn to_text(&self) -> String {
        text_form(self)
    }

    fn from_json(v: &Value, chart: &ChartSet) -> Result<Self, CliError> {
        let obj = v.as_object().ok_or_else(|| bad("form"))?;
        let vars = chart.ring().vars();
        for key in obj.keys() {
            if !vars.iter().any(|v| format!("d{v}") == *key) {
                return Err(CliError::Schema(format!("unknown form coordinate `{key}`")));
            }
        }
        let coeffs = vars
            .iter()
            .map(|v| match obj.get(&format!("d{v}")) {
                Some(c) => LocalFraction::from_json(c, chart),
                None => Ok(LocalFraction::zero(chart)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        AmbientForm::new(chart, coeffs).map_err(|e| CliError::Schema(e.to_string()))
    }
}

pub fn cochain_json<T: JsonValue>(scheme: &CoveredScheme, c: &Cochain<T>) -> Value {
    let entries: Vec<Value> = c
        .entries()
        .iter()
        .map(|(lam, m)| {
            let rows: Vec<Value> =
                (0..m.rows()).map(|r| Value::Array((0..m.cols()).map(|k| m.get(r, k).to_json()).collect())).collect();
            json!({"charts": names_of(scheme, lam), "matrix": rows})
        })
        .collect();
    json!({"r": c.r(), "s": c.s(), "t": c.t(), "entries": entries})
}

/// Scalar cochains print their single entry; others print whole matrices.
pub fn cochain_text<T: JsonValue>(scheme: &CoveredScheme, label: &str, c: &Cochain<T>, out: &mut String) {
    let _ = writeln!(out, "  {label} (r = {}, E^{} -> E^{}):", c.r(), c.s(), c.t());
    let mut any = false;
    for (lam, m) in c.entries() {
        if m.entries().iter().all(|v| v.is_zero_mod_ring()) {
            continue;
        }
        any = true;
        let charts = names_of(scheme, lam).join(",");
        if m.shape() == (1, 1) {
            let _ = writeln!(out, "    [{charts}] {}", m.get(0, 0).to_text());
        } else {
            let _ = writeln!(out, "    [{charts}]");
            for r in 0..m.rows() {
                let row: Vec<String> = (0..m.cols()).map(|k| m.get(r, k).to_text()).collect();
                let _ = writeln!(out, "      {}", row.join(" | "));
            }
        }
    }
    if !any {
        let _ = writeln!(out, "    0");
    }
}

trait ExactZero {
    fn is_zero_mod_ring(&self) -> bool;
}

impl<T: CochainValue> ExactZero for T {
    fn is_zero_mod_ring(&self) -> bool {
        self.normalized_string() == "0"
    }
}

/// Reads a cochain of the given type for `e`; every nonempty chart set
/// must be present.
pub fn cochain_from_json<T: JsonValue>(
    e: &BundleComplex,
    v: &Value,
    r: usize,
    s: i64,
    t: i64,
) -> Result<Cochain<T>, CliError> {
    let scheme = e.scheme();
    let names = chart_names(scheme);
    let entries = v.get("entries").and_then(Value::as_array).ok_or_else(|| bad("cochain"))?;
    let mut by_charts: BTreeMap<Vec<usize>, &Value> = BTreeMap::new();
    for entry in entries {
        let charts = entry.get("charts").and_then(Value::as_array).ok_or_else(|| bad("cochain entry"))?;
        let idx = charts
            .iter()
            .map(|c| {
                let name = c.as_str().ok_or_else(|| bad("chart name"))?;
                names.iter().position(|n| n == name).ok_or_else(|| CliError::Schema(format!("unknown chart `{name}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        by_charts.insert(idx, entry.get("matrix").ok_or_else(|| bad("cochain entry"))?);
    }
    Cochain::build(e, r, s, t, |lam, chart| {
        let rows = by_charts
            .get(lam)
            .and_then(|m| m.as_array())
            .ok_or_else(|| atiyah_core::atiyah::AtiyahError::Dimension(format!("missing entry on {lam:?}")))?;
        let rows_n = e.rank(lam[0], t);
        let cols_n = e.rank(lam[0], s);
        let mut data = Vec::new();
        for row in rows {
            let row = row.as_array().ok_or_else(|| atiyah_core::atiyah::AtiyahError::Dimension("row".into()))?;
            if row.len() != cols_n {
                return Err(atiyah_core::atiyah::AtiyahError::Dimension(format!("row length on {lam:?}")));
            }
            for x in row {
                data.push(T::from_json(x, chart).map_err(|err| atiyah_core::atiyah::AtiyahError::Dimension(err.to_string()))?);
            }
        }
        if data.len() != rows_n * cols_n || (rows_n > 0 && rows.len() != rows_n) {
            return Err(atiyah_core::atiyah::AtiyahError::Dimension(format!("entry shape on {lam:?}")));
        }
        Matrix::from_vec(rows_n, cols_n, chart, data).map_err(Into::into)
    })
    .map_err(|err| CliError::Schema(err.to_string()))
}

const TRUNCATED_FAMILIES: [&str; 5] = ["t1", "t2", "t3", "t4", "t5"];

pub fn truncated_json(scheme: &CoveredScheme, name: &str, rep: &TruncatedAtiyahRep) -> Value {
    let degrees: Vec<Value> = rep
        .degrees
        .iter()
        .map(|(s, d)| {
            json!({
                "s": s,
                "t1": cochain_json(scheme, &d.t1),
                "t2": cochain_json(scheme, &d.t2),
                "t3": cochain_json(scheme, &d.t3),
                "t4": cochain_json(scheme, &d.t4),
                "t5": cochain_json(scheme, &d.t5),
            })
        })
        .collect();
    json!({"command": "atiyah", "complex": name, "kind": "truncated", "status": "pass", "degrees": degrees})
}

pub fn truncated_text(scheme: &CoveredScheme, name: &str, rep: &TruncatedAtiyahRep) -> String {
    let mut out = format!("truncated Atiyah cocycle of {name}\n");
    for (s, d) in &rep.degrees {
        let _ = writeln!(out, "degree {s}");
        cochain_text(scheme, TRUNCATED_FAMILIES[0], &d.t1, &mut out);
        cochain_text(scheme, TRUNCATED_FAMILIES[1], &d.t2, &mut out);
        cochain_text(scheme, TRUNCATED_FAMILIES[2], &d.t3, &mut out);
        cochain_text(scheme, TRUNCATED_FAMILIES[3], &d.t4, &mut out);
        cochain_text(scheme, TRUNCATED_FAMILIES[4], &d.t5, &mut out);
    }
    out
}

pub fn classical_json(scheme: &CoveredScheme, name: &str, rep: &ClassicalAtiyahRep) -> Value {
    let degrees: Vec<Value> = rep
        .degrees
        .iter()
        .map(|(s, d)| json!({"s": s, "p1": cochain_json(scheme, &d.p1), "p2": cochain_json(scheme, &d.p2)}))
        .collect();
    json!({"command": "atiyah", "complex": name, "kind": "classical", "status": "pass", "degrees": degrees})
}

pub fn classical_text(scheme: &CoveredScheme, name: &str, rep: &ClassicalAtiyahRep) -> String {
    let mut out = format!("classical Atiyah cocycle of {name}\n");
    for (s, d) in &rep.degrees {
        let _ = writeln!(out, "degree {s}");
        cochain_text(scheme, "p1", &d.p1, &mut out);
        cochain_text(scheme, "p2", &d.p2, &mut out);
    }
    out
}

fn degree_list(v: &Value) -> Result<Vec<(i64, &Value)>, CliError> {
    let degrees = v.get("degrees").and_then(Value::as_array).ok_or_else(|| bad("representative"))?;
    degrees
        .iter()
        .map(|d| Ok((d.get("s").and_then(Value::as_i64).ok_or_else(|| bad("degree"))?, d)))
        .collect()
}

fn family<'a>(d: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    d.get(key).ok_or_else(|| CliError::Schema(format!("missing family `{key}`")))
}

pub fn truncated_from_json(e: &BundleComplex, v: &Value) -> Result<TruncatedAtiyahRep, CliError> {
    let mut degrees = BTreeMap::new();
    for (s, d) in degree_list(v)? {
        degrees.insert(
            s,
            TruncatedDegree {
                t1: cochain_from_json(e, family(d, "t1")?, 2, s, s)?,
                t2: cochain_from_json(e, family(d, "t2")?, 1, s, s)?,
                t3: cochain_from_json(e, family(d, "t3")?, 1, s, s + 1)?,
                t4: cochain_from_json(e, family(d, "t4")?, 0, s, s + 1)?,
                t5: cochain_from_json(e, family(d, "t5")?, 0, s, s + 2)?,
            },
        );
    }
    Ok(TruncatedAtiyahRep { degrees })
}

pub fn classical_from_json(e: &BundleComplex, v: &Value) -> Result<ClassicalAtiyahRep, CliError> {
    let mut degrees = BTreeMap::new();
    for (s, d) in degree_list(v)? {
        degrees.insert(
            s,
            ClassicalDegree {
                p1: cochain_from_json(e, family(d, "p1")?, 1, s, s)?,
                p2: cochain_from_json(e, family(d, "p2")?, 0, s, s + 1)?,
            },
        );
    }
    Ok(ClassicalAtiyahRep { degrees })
}

/// Scalar cochain entries as `{"charts", "value"}` records.
fn scalar_entries<T: JsonValue>(scheme: &CoveredScheme, c: &Cochain<T>) -> Vec<Value> {
    c.entries()
        .iter()
        .map(|(lam, m)| json!({"charts": names_of(scheme, lam), "value": m.get(0, 0).to_json()}))
        .collect()
}

fn scalar_text<T: JsonValue>(scheme: &CoveredScheme, label: &str, c: &Cochain<T>, out: &mut String) {
    let _ = writeln!(out, "{label}:");
    for (lam, m) in c.entries() {
        let _ = writeln!(out, "  [{}] {}", names_of(scheme, lam).join(","), m.get(0, 0).to_text());
    }
}

pub fn trunc_chern_report(scheme: &CoveredScheme, name: &str, c: &TruncChernRep) -> Report {
    let json = json!({
        "command": "chern",
        "complex": name,
        "kind": "truncated",
        "status": "pass",
        "c2": scalar_entries(scheme, &c.c2),
        "c1w": scalar_entries(scheme, &c.c1w),
    });
    let mut text = format!("first truncated Chern class of {name}\n");
    scalar_text(scheme, "c2 (conormal, triples)", &c.c2, &mut text);
    scalar_text(scheme, "c1w (forms, pairs)", &c.c1w, &mut text);
    Report { passed: true, json, text }
}

pub fn class_chern_report(scheme: &CoveredScheme, name: &str, c: &ClassChernRep) -> Report {
    let json = json!({
        "command": "chern",
        "complex": name,
        "kind": "classical",
        "status": "pass",
        "c1": scalar_entries(scheme, &c.c1),
    });
    let mut text = format!("first classical Chern class of {name}\n");
    scalar_text(scheme, "c1 (forms, pairs)", &c.c1, &mut text);
    Report { passed: true, json, text }
}

fn scalar_from_json<T: JsonValue>(e: &BundleComplex, v: &Value, key: &str, r: usize) -> Result<Cochain<T>, CliError> {
    let list = v.get(key).and_then(Value::as_array).ok_or_else(|| CliError::Schema(format!("missing `{key}`")))?;
    let entries: Vec<Value> = list
        .iter()
        .map(|x| {
            let value = x.get("value").cloned().ok_or_else(|| bad("entry"))?;
            Ok(json!({"charts": x.get("charts").cloned().ok_or_else(|| bad("entry"))?, "matrix": [[value]]}))
        })
        .collect::<Result<_, CliError>>()?;
    cochain_from_json_scalar(e, &json!({ "entries": entries }), r)
}

/// Chern cochains are `1 × 1` on every chart set regardless of ranks.
fn cochain_from_json_scalar<T: JsonValue>(e: &BundleComplex, v: &Value, r: usize) -> Result<Cochain<T>, CliError> {
    let line = atiyah_core::corpus::trivial_line_bundle(e.scheme()).into_complex();
    cochain_from_json(&line, v, r, 0, 0)
}

pub fn trunc_chern_from_json(e: &BundleComplex, v: &Value) -> Result<TruncChernRep, CliError> {
    Ok(TruncChernRep { c2: scalar_from_json(e, v, "c2", 2)?, c1w: scalar_from_json(e, v, "c1w", 1)? })
}

pub fn class_chern_from_json(e: &BundleComplex, v: &Value) -> Result<ClassChernRep, CliError> {
    Ok(ClassChernRep { c1: scalar_from_json(e, v, "c1", 1)? })
}

pub fn validation_failure_json(scheme: &CoveredScheme, f: &ValidationFailure) -> Value {
    json!({
        "condition": f.condition.to_string(),
        "s": f.s,
        "charts": names_of(scheme, &f.charts),
        "row": f.row,
        "col": f.col,
        "defect": f.defect,
    })
}

pub fn validation_failure_text(scheme: &CoveredScheme, f: &ValidationFailure) -> String {
    format!(
        "condition ({}) fails on [{}] in degree {} at ({}, {}): {}",
        f.condition,
        names_of(scheme, &f.charts).join(","),
        f.s,
        f.row,
        f.col,
        f.defect
    )
}

pub fn chain_failure_json(scheme: &CoveredScheme, f: &ChainMapFailure) -> Value {
    json!({
        "s": f.s,
        "summand": f.summand,
        "charts": names_of(scheme, &f.charts),
        "row": f.row,
        "col": f.col,
        "defect": f.defect,
    })
}

pub fn chain_failure_text(scheme: &CoveredScheme, f: &ChainMapFailure) -> String {
    format!(
        "summand {} fails for s = {} on [{}] at ({}, {}): {}",
        f.summand,
        f.s,
        names_of(scheme, &f.charts).join(","),
        f.row,
        f.col,
        f.defect
    )
}
