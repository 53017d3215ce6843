//! Problem files: a covered scheme plus named bundle complexes, as JSON.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use atiyah_core::complexes::{validate_complex, BundleComplex, FractionMatrix, ValidationReport};
use atiyah_core::geometry::{ChartSet, CoveredScheme, LocalFraction};
use atiyah_core::ring::parse_poly;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub variables: Vec<String>,
    #[serde(default)]
    pub ideal: Vec<String>,
    pub charts: Vec<ChartSpec>,
    #[serde(default)]
    pub complexes: serde_json::Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub name: String,
    pub f: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub degrees: [i64; 2],
    /// `chart → degree → rank`; absent entries are zero.
    pub ranks: BTreeMap<String, BTreeMap<String, usize>>,
    /// `"A->B@s"` → rows of fractions.
    pub transitions: BTreeMap<String, Vec<Vec<FractionSpec>>>,
    #[serde(default)]
    pub differentials: BTreeMap<String, Vec<Vec<FractionSpec>>>,
}

/// `num / f_Λ^pow` for the chart set the matrix lives on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FractionSpec {
    pub num: String,
    #[serde(default)]
    pub pow: Pow,
}

/// Accepts `1` as well as `"1"`; always written as an integer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Pow {
    Int(u32),
    Text(String),
}

impl Default for Pow {
    fn default() -> Self {
        Pow::Int(0)
    }
}

impl Pow {
    fn value(&self) -> Result<u32, CliError> {
        match self {
            Pow::Int(k) => Ok(*k),
            Pow::Text(t) => t.trim().parse().map_err(|_| CliError::Schema(format!("bad pow `{t}`"))),
        }
    }
}

/// A parsed problem. Complexes keep file order.
pub struct Problem {
    pub scheme: Arc<CoveredScheme>,
    pub complexes: Vec<(String, BundleComplex)>,
}

impl Problem {
    pub fn complex(&self, name: &str) -> Result<&BundleComplex, CliError> {
        self.complexes
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e)
            .ok_or_else(|| CliError::Usage(format!("no complex named `{name}`")))
    }

    pub fn chart_names(&self) -> Vec<String> {
        chart_names(&self.scheme)
    }

    pub fn validate(&self) -> Vec<(String, ValidationReport)> {
        self.complexes.iter().map(|(n, e)| (n.clone(), validate_complex(e))).collect()
    }
}

pub fn chart_names(scheme: &CoveredScheme) -> Vec<String> {
    scheme.cover().charts().iter().map(|c| c.name().to_string()).collect()
}

pub fn read_problem(path: &Path) -> Result<Problem, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_problem(&text)
}

/// Schema and cover checks only; see [`Problem::validate`] for the lifts.
pub fn parse_problem(text: &str) -> Result<Problem, CliError> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
    build_problem(&file)
}

pub fn build_problem(file: &ProblemFile) -> Result<Problem, CliError> {
    let schema = |e: &dyn std::fmt::Display| CliError::Schema(e.to_string());
    let vars: Vec<&str> = file.variables.iter().map(String::as_str).collect();
    let ideal: Vec<&str> = file.ideal.iter().map(String::as_str).collect();
    let charts: Vec<(&str, &str)> = file.charts.iter().map(|c| (c.name.as_str(), c.f.as_str())).collect();
    let mut seen = std::collections::HashSet::new();
    if let Some(dup) = charts.iter().find(|(n, _)| !seen.insert(*n)) {
        return Err(CliError::Schema(format!("duplicate chart name `{}`", dup.0)));
    }
    let scheme = CoveredScheme::parse(&vars, &ideal, &charts).map_err(|e| schema(&e))?;
    let mut complexes = Vec::new();
    for (name, value) in &file.complexes {
        let spec: ComplexSpec =
            serde_json::from_value(value.clone()).map_err(|e| CliError::Schema(format!("complex `{name}`: {e}")))?;
        let e = build_complex(&scheme, &spec).map_err(|e| match e {
            CliError::Schema(m) => CliError::Schema(format!("complex `{name}`: {m}")),
            other => other,
        })?;
        complexes.push((name.clone(), e));
    }
    Ok(Problem { scheme, complexes })
}

fn chart_index(names: &[String], name: &str) -> Result<usize, CliError> {
    names.iter().position(|n| n == name).ok_or_else(|| CliError::Schema(format!("unknown chart `{name}`")))
}

fn parse_degree(text: &str, key: &str) -> Result<i64, CliError> {
    text.trim().parse().map_err(|_| CliError::Schema(format!("bad degree in `{key}`")))
}

fn build_matrix(
    scheme: &CoveredScheme,
    chart: &ChartSet,
    rows: usize,
    cols: usize,
    data: &[Vec<FractionSpec>],
    key: &str,
) -> Result<FractionMatrix, CliError> {
    if rows == 0 && data.is_empty() {
        return Ok(FractionMatrix::zero(0, cols, chart));
    }
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return Err(CliError::Schema(format!("`{key}` must be {rows}x{cols}")));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for spec in data.iter().flatten() {
        let num = parse_poly(&spec.num, scheme.ring())
            .map_err(|e| CliError::Schema(format!("`{key}`: `{}`: {e}", spec.num)))?;
        entries.push(LocalFraction::new(num, spec.pow.value()?, chart));
    }
    FractionMatrix::from_vec(rows, cols, chart, entries).map_err(|e| CliError::Schema(e.to_string()))
}

fn build_complex(scheme: &Arc<CoveredScheme>, spec: &ComplexSpec) -> Result<BundleComplex, CliError> {
    let names = chart_names(scheme);
    let r = names.len();
    let [smin, smax] = spec.degrees;
    if smin > smax {
        return Err(CliError::Schema(format!("empty degree range [{smin}, {smax}]")));
    }
    let width = (smax - smin + 1) as usize;
    let mut ranks = vec![vec![0usize; width]; r];
    for (chart, per_degree) in &spec.ranks {
        let i = chart_index(&names, chart)?;
        for (deg, &m) in per_degree {
            let s = parse_degree(deg, chart)?;
            if !(smin..=smax).contains(&s) {
                return Err(CliError::Schema(format!("rank for degree {s} outside [{smin}, {smax}]")));
            }
            ranks[i][(s - smin) as usize] = m;
        }
    }
    let rank = |i: usize, s: i64| if (smin..=smax).contains(&s) { ranks[i][(s - smin) as usize] } else { 0 };
    let mut transitions = HashMap::new();
    for (key, data) in &spec.transitions {
        let (pair, deg) =
            key.rsplit_once('@').ok_or_else(|| CliError::Schema(format!("transition key `{key}` needs `@s`")))?;
        let (a, b) =
            pair.split_once("->").ok_or_else(|| CliError::Schema(format!("transition key `{key}` needs `->`")))?;
        let (i, j, s) = (chart_index(&names, a.trim())?, chart_index(&names, b.trim())?, parse_degree(deg, key)?);
        if i == j || !(smin..=smax).contains(&s) {
            return Err(CliError::Schema(format!("unexpected transition `{key}`")));
        }
        let chart = scheme.chart_set(&[i, j]).map_err(|e| CliError::Schema(e.to_string()))?;
        transitions.insert((i, j, s), build_matrix(scheme, &chart, rank(i, s), rank(j, s), data, key)?);
    }
    for i in 0..r {
        for j in 0..r {
            for s in smin..=smax {
                if i != j && !transitions.contains_key(&(i, j, s)) {
                    return Err(CliError::Schema(format!("missing transition `{}->{}@{s}`", names[i], names[j])));
                }
            }
        }
    }
    let mut differentials = HashMap::new();
    for (key, data) in &spec.differentials {
        let (a, deg) =
            key.rsplit_once('@').ok_or_else(|| CliError::Schema(format!("differential key `{key}` needs `@s`")))?;
        let (i, s) = (chart_index(&names, a.trim())?, parse_degree(deg, key)?);
        if !(smin..=smax).contains(&s) {
            return Err(CliError::Schema(format!("unexpected differential `{key}`")));
        }
        let chart = scheme.chart_set(&[i]).map_err(|e| CliError::Schema(e.to_string()))?;
        differentials.insert((i, s), build_matrix(scheme, &chart, rank(i, s + 1), rank(i, s), data, key)?);
    }
    BundleComplex::new(scheme.clone(), (smin, smax), ranks, transitions, differentials)
        .map_err(|e| CliError::Schema(e.to_string()))
}

pub fn fraction_spec(a: &LocalFraction) -> FractionSpec {
    let a = a.normalized();
    FractionSpec { num: a.num().to_string(), pow: Pow::Int(a.pow()) }
}

fn matrix_spec(m: &FractionMatrix) -> Vec<Vec<FractionSpec>> {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| fraction_spec(m.get(r, c))).collect()).collect()
}

/// The file form of `e`; zero differentials are omitted.
pub fn complex_spec(e: &BundleComplex) -> ComplexSpec {
    let names = chart_names(e.scheme());
    let (smin, smax) = e.degrees();
    let mut ranks = BTreeMap::new();
    let mut transitions = BTreeMap::new();
    let mut differentials = BTreeMap::new();
    for (i, name) in names.iter().enumerate() {
        ranks.insert(name.clone(), (smin..=smax).map(|s| (s.to_string(), e.rank(i, s))).collect());
        for s in smin..=smax {
            for (j, other) in names.iter().enumerate() {
                if j != i {
                    transitions.insert(format!("{name}->{other}@{s}"), matrix_spec(&e.transition(i, j, s)));
                }
            }
            let d = e.differential(i, s);
            if !d.is_zero_repr() {
                differentials.insert(format!("{name}@{s}"), matrix_spec(&d));
            }
        }
    }
    ComplexSpec { degrees: [smin, smax], ranks, transitions, differentials }
}

/// The file form of a scheme with named complexes in the given order.
pub fn problem_file(scheme: &CoveredScheme, complexes: &[(String, BundleComplex)]) -> ProblemFile {
    let ring = scheme.ring();
    ProblemFile {
        variables: ring.vars().to_vec(),
        ideal: scheme.subscheme().ideal_gens().iter().map(ToString::to_string).collect(),
        charts: scheme.cover().charts().iter().map(|c| ChartSpec { name: c.name().into(), f: c.f().to_string() }).collect(),
        complexes: complexes
            .iter()
            .map(|(n, e)| (n.clone(), serde_json::to_value(complex_spec(e)).expect("serializable")))
            .collect(),
    }
}

pub fn write_problem_string(file: &ProblemFile) -> String {
    let mut out = serde_json::to_string_pretty(file).expect("serializable");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use atiyah_core::corpus::{nodal_cubic, nodal_defect_bundle, standard_line_bundle};

    fn same_lifts(a: &BundleComplex, b: &BundleComplex) -> bool {
        let (lo, hi) = a.degrees();
        let same = |x: &FractionMatrix, y: &FractionMatrix| {
            x.shape() == y.shape() && x.entries().iter().zip(y.entries()).all(|(p, q)| p.ring_eq(q).unwrap())
        };
        a.degrees() == b.degrees()
            && (lo..=hi).all(|s| {
                (0..a.ncharts()).all(|i| {
                    same(&a.differential(i, s), &b.differential(i, s))
                        && (0..a.ncharts()).all(|j| i == j || same(&a.transition(i, j, s), &b.transition(i, j, s)))
                })
            })
    }

    #[test]
    fn pow_accepts_strings_and_integers() {
        let a: FractionSpec = serde_json::from_str(r#"{"num": "x", "pow": "2"}"#).unwrap();
        let b: FractionSpec = serde_json::from_str(r#"{"num": "x", "pow": 2}"#).unwrap();
        assert_eq!(a.pow.value().unwrap(), 2);
        assert_eq!(b.pow.value().unwrap(), 2);
        assert_eq!(serde_json::to_string(&fraction_spec(&LocalFraction::zero(&nodal_cubic(false).chart_set(&[0]).unwrap()))).unwrap(), r#"{"num":"0","pow":0}"#);
    }

    #[test]
    fn file_round_trip_keeps_lifts() {
        let s = nodal_cubic(false);
        let named = vec![
            ("L".to_string(), nodal_defect_bundle(&s, "x*(y^2 - x^3 - x^2)").into_complex()),
            ("S".to_string(), standard_line_bundle(&s).into_complex()),
        ];
        let text = write_problem_string(&problem_file(&s, &named));
        let p = parse_problem(&text).unwrap();
        assert_eq!(p.complexes.len(), 2);
        for ((n, a), (m, b)) in named.iter().zip(&p.complexes) {
            assert_eq!(n, m);
            assert!(same_lifts(a, b), "{n}");
        }
        assert!(p.validate().iter().all(|(_, r)| r.is_valid()));
        let again = write_problem_string(&problem_file(&p.scheme, &p.complexes));
        assert_eq!(text, again);
    }

    #[test]
    fn schema_errors_are_reported() {
        let base = r#"{"variables": ["x"], "ideal": [], "charts": [{"name": "U1", "f": "x"}, {"name": "U2", "f": "x - 1"}],
            "complexes": {"L": {"degrees": [0, 0], "ranks": {"U1": {"0": 1}, "U2": {"0": 1}},
            "transitions": {"U1->U2@0": [[{"num": "x", "pow": 0}]]}}}}"#;
        match parse_problem(base) {
            Err(CliError::Schema(m)) => assert!(m.contains("missing transition `U2->U1@0`"), "{m}"),
            other => panic!("{:?}", other.err()),
        }
        let bad_chart = base.replace("U1->U2@0", "U1->U9@0");
        assert!(matches!(parse_problem(&bad_chart), Err(CliError::Schema(_))));
        let not_cover = base.replace(r#""f": "x - 1""#, r#""f": "x^2""#);
        assert!(matches!(parse_problem(&not_cover), Err(CliError::Schema(m)) if m.contains("cover")));
        assert!(matches!(parse_problem("{"), Err(CliError::Schema(_))));
        let unknown = base.replace(r#""ideal": [],"#, r#""ideal": [], "extra": 1,"#);
        assert!(matches!(parse_problem(&unknown), Err(CliError::Schema(_))));
    }
}
