//! JSON algebra files: sparse bracket entries with 1-based indices and
//! `i < j`, an optional Hermitian metric and an optional name.
//!
//! ```json
//! {"name": "heisenberg3", "dim": 3, "brackets": [{"i": 1, "j": 2, "k": 3, "re": 1.0, "im": 0.0}]}
//! ```

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use hcf_core::linalg::{check_positive_definite, hermitian_defect, max_abs};
use hcf_core::{validate, Bracket, Descriptor, Matrix, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Hermitian defect tolerated in a metric, relative to its largest entry.
const METRIC_HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub brackets: Vec<BracketEntry>,
    /// Row-major `[re, im]` pairs, `dim²` of them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<[f64; 2]>>,
}

/// `μ(e_i, e_j)` has component `re + i·im` along `e_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, try_from = "RawEntry")]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    i: usize,
    j: usize,
    k: usize,
    re: f64,
    im: f64,
}

impl TryFrom<RawEntry> for BracketEntry {
    type Error = String;

    fn try_from(r: RawEntry) -> std::result::Result<Self, String> {
        if r.i == 0 || r.j == 0 || r.k == 0 {
            return Err("indices are 1-based".into());
        }
        if r.i == r.j {
            return Err(format!("i = j = {} (entries need i < j)", r.i));
        }
        if r.i > r.j {
            return Err(format!(
                "i = {} > j = {} (store the entry as ({}, {}) with the value negated)",
                r.i, r.j, r.j, r.i
            ));
        }
        Ok(BracketEntry {
            i: r.i,
            j: r.j,
            k: r.k,
            re: r.re,
            im: r.im,
        })
    }
}

/// A parsed file, validated.
#[derive(Debug, Clone)]
pub struct ParsedAlgebra {
    pub file: AlgebraFile,
    pub descriptor: Descriptor,
    pub metric: Option<Matrix>,
}

pub fn parse_algebra(path: &Path) -> Result<ParsedAlgebra> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_algebra_str(&text)
}

pub fn parse_algebra_str(text: &str) -> Result<ParsedAlgebra> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: AlgebraFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::Parse {
            line: Some(inner.line()),
            column: Some(inner.column()),
            field: (path != ".").then_some(path),
            message: strip_position(&inner.to_string()),
        }
    })?;
    load(file)
}

/// serde_json appends " at line L column C", which is already in the fields.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(p) => msg[..p].to_string(),
        None => msg.to_string(),
    }
}

/// Checks ranges and duplicates, builds the bracket and validates it, and
/// checks the metric.
pub fn load(file: AlgebraFile) -> Result<ParsedAlgebra> {
    let n = file.dim;
    if n == 0 {
        return Err(CliError::field("dim", "must be at least 1"));
    }
    let mut seen: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for (idx, e) in file.brackets.iter().enumerate() {
        for (name, v) in [("j", e.j), ("k", e.k)] {
            if v > n {
                return Err(CliError::field(
                    format!("brackets[{idx}].{name}"),
                    format!("index {v} out of range 1..={n}"),
                ));
            }
        }
        if !e.re.is_finite() || !e.im.is_finite() {
            return Err(CliError::field(format!("brackets[{idx}]"), "non-finite value"));
        }
        if let Some(first) = seen.insert((e.i, e.j, e.k), idx) {
            return Err(CliError::field(
                format!("brackets[{idx}]"),
                format!("duplicate of brackets[{first}] ({}, {}, {})", e.i, e.j, e.k),
            ));
        }
    }
    let bracket = Bracket::from_entries(
        n,
        file.brackets
            .iter()
            .map(|e| (e.i - 1, e.j - 1, e.k - 1, C64::new(e.re, e.im))),
    )?;
    let descriptor = validate(bracket)?;
    let metric = match &file.metric {
        None => None,
        Some(pairs) => Some(metric_from_pairs(n, pairs)?),
    };
    Ok(ParsedAlgebra {
        file,
        descriptor,
        metric,
    })
}

fn metric_from_pairs(n: usize, pairs: &[[f64; 2]]) -> Result<Matrix> {
    if pairs.len() != n * n {
        return Err(CliError::field(
            "metric",
            format!("expected {} [re, im] pairs, found {}", n * n, pairs.len()),
        ));
    }
    let h = Matrix::from_fn(n, n, |r, c| {
        let [re, im] = pairs[r * n + c];
        C64::new(re, im)
    });
    let scale = max_abs(&h).max(1.0);
    let defect = hermitian_defect(&h);
    if !(defect <= METRIC_HERMITIAN_TOL * scale) {
        return Err(CliError::BadMetric(format!("not Hermitian (defect {defect:e})")));
    }
    check_positive_definite(&h).map_err(|e| CliError::BadMetric(e.to_string()))?;
    Ok(h)
}

/// Writes every stored component whose bit pattern is not `+0.0`, so that
/// parsing the result reproduces the bracket bit for bit (signed zeros
/// included).
pub fn to_file(bracket: &Bracket, name: Option<&str>, metric: Option<&Matrix>) -> AlgebraFile {
    let n = bracket.dim();
    let mut brackets = Vec::new();
    for (i, j) in bracket.pairs() {
        for k in 0..n {
            let v = bracket.get(i, j, k);
            if v.re.to_bits() != 0 || v.im.to_bits() != 0 {
                brackets.push(BracketEntry {
                    i: i + 1,
                    j: j + 1,
                    k: k + 1,
                    re: v.re,
                    im: v.im,
                });
            }
        }
    }
    AlgebraFile {
        name: name.map(str::to_string),
        dim: n,
        brackets,
        metric: metric.map(|h| {
            (0..n)
                .flat_map(|r| (0..n).map(move |c| (r, c)))
                .map(|(r, c)| [h[(r, c)].re, h[(r, c)].im])
                .collect()
        }),
    }
}

pub fn emit_algebra(file: &AlgebraFile) -> Result<String> {
    Ok(serde_json::to_string_pretty(file)?)
}

pub fn write_algebra(path: &Path, file: &AlgebraFile) -> Result<()> {
    let mut text = emit_algebra(file)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_err(text: &str) -> CliError {
        parse_algebra_str(text).unwrap_err()
    }

    #[test]
    fn heisenberg_file() {
        let p = parse_algebra_str(r#"{"dim":3,"brackets":[{"i":1,"j":2,"k":3,"re":1,"im":0}]}"#).unwrap();
        assert!(p.descriptor.is_two_step);
        assert_eq!(p.descriptor.center_dim(), 1);
        assert_eq!(p.descriptor.bracket.get(0, 1, 2), C64::new(1.0, 0.0));
        assert_eq!(p.descriptor.bracket.get(1, 0, 2), C64::new(-1.0, 0.0));
    }

    #[test]
    fn diagonal_entry_is_a_parse_error_with_location() {
        let e = parse_err("{\"dim\":3,\n\"brackets\":[{\"i\":2,\"j\":2,\"k\":3,\"re\":1,\"im\":0}]}");
        match e {
            CliError::Parse { line, field, .. } => {
                assert_eq!(line, Some(2));
                assert_eq!(field.as_deref(), Some("brackets[0]"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn semantic_errors_name_the_field() {
        let cases = [
            (r#"{"dim":3,"brackets":[{"i":1,"j":2,"k":4,"re":1,"im":0}]}"#, "brackets[0].k"),
            (r#"{"dim":3,"brackets":[{"i":1,"j":2,"k":3,"re":1,"im":0},{"i":1,"j":2,"k":3,"re":2,"im":0}]}"#, "brackets[1]"),
            (r#"{"dim":2,"brackets":[],"metric":[[1,0]]}"#, "metric"),
            (r#"{"dim":0,"brackets":[]}"#, "dim"),
        ];
        for (text, want) in cases {
            match parse_err(text) {
                CliError::Parse { field, .. } => assert_eq!(field.as_deref(), Some(want), "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert!(matches!(parse_err(r#"{"dim":3,"brackets":[],"extra":1}"#), CliError::Parse { .. }));
        assert!(matches!(parse_err(r#"{"dim":3,"brackets":[{"i":2,"j":1,"k":3,"re":1,"im":0}]}"#), CliError::Parse { .. }));
    }

    #[test]
    fn jacobi_violation_surfaces_the_triple() {
        // [e1,e2]=e3, [e1,e3]=e1: the Jacobi sum on (e1,e2,e3) is e3.
        let text = r#"{"dim":3,"brackets":[
            {"i":1,"j":2,"k":3,"re":1,"im":0},
            {"i":1,"j":3,"k":1,"re":1,"im":0}]}"#;
        let e = parse_err(text);
        assert!(matches!(e, CliError::Core(hcf_core::Error::JacobiViolation { .. })), "{e:?}");
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn non_nilpotent_file_validates() {
        let p = parse_algebra_str(r#"{"dim":2,"brackets":[{"i":1,"j":2,"k":2,"re":1,"im":0}]}"#).unwrap();
        assert!(!p.descriptor.is_two_step);
    }

    #[test]
    fn metric_checks() {
        let ok = r#"{"dim":2,"brackets":[],"metric":[[2,0],[0,1],[0,-1],[3,0]]}"#;
        assert!(parse_algebra_str(ok).unwrap().metric.is_some());
        let not_herm = r#"{"dim":2,"brackets":[],"metric":[[2,0],[0,1],[0,1],[3,0]]}"#;
        assert!(matches!(parse_err(not_herm), CliError::BadMetric(_)));
        let indefinite = r#"{"dim":2,"brackets":[],"metric":[[1,0],[2,0],[2,0],[1,0]]}"#;
        assert!(matches!(parse_err(indefinite), CliError::BadMetric(_)));
    }

    #[test]
    fn emit_keeps_signed_zeros() {
        let mut mu = Bracket::zeros(3);
        mu.set(0, 1, 2, C64::new(-0.0, 1.0));
        mu.set(0, 2, 1, C64::new(-0.0, 0.0));
        let f = to_file(&mu, None, None);
        assert_eq!(f.brackets.len(), 2);
        let back = parse_algebra_str(&emit_algebra(&f).unwrap()).unwrap();
        assert_eq!(back.descriptor.bracket.get(0, 2, 1).re.to_bits(), (-0.0f64).to_bits());
    }
}
