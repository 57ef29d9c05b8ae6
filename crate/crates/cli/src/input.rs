//! Reading curve-level inputs from files and flags.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::Args;
use serde::de::DeserializeOwned;

use twistab_core::curve::{CurveGraph, MonodromyAssignment, WeightVector};
use twistab_core::groups::{FiniteGroup, GroupSpec};
use twistab_core::json::{json_error, GroupInput, InputDocument, InputError, MonodromyDoc};
use twistab_core::rational::{parse_rational, Rational};

#[derive(Args, Debug, Clone, Default)]
pub struct CurveArgs {
    /// Combined document with `curve`, `weights`, `group` and `monodromy`.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Curve JSON file (overrides `curve` in --input).
    #[arg(long, value_name = "FILE")]
    pub curve: Option<PathBuf>,
    /// Comma-separated weights such as "1/2,1/2,1".
    #[arg(long, allow_hyphen_values = true)]
    pub weights: Option<String>,
    /// Group name (S3, D4, C2xC2, Q8, ...) or a JSON group specification.
    #[arg(long)]
    pub group: Option<String>,
    /// Monodromy JSON file.
    #[arg(long, value_name = "FILE")]
    pub monodromy: Option<PathBuf>,
}

pub struct Loaded {
    pub graph: CurveGraph,
    pub weights: Option<WeightVector>,
    pub mono: MonodromyAssignment,
}

impl Loaded {
    pub fn require_weights(&self) -> Result<&WeightVector, InputError> {
        self.weights.as_ref().ok_or_else(|| InputError::new("missing_input", "weights are required", "weights"))
    }
}

pub fn read_file(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError::new("io_error", e.to_string(), path.display().to_string()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T, InputError> {
    let text = read_file(path)?;
    serde_json::from_str(&text).map_err(|e| json_error(&e, what))
}

pub fn parse_weights(s: &str) -> Result<WeightVector, InputError> {
    s.parse().map_err(|e: twistab_core::curve::CurveError| InputError::new("bad_weights", e.to_string(), "weights"))
}

pub fn parse_group(s: &str) -> Result<FiniteGroup, InputError> {
    let input = if s.trim_start().starts_with('{') {
        let spec: GroupSpec = serde_json::from_str(s).map_err(|e| json_error(&e, "group"))?;
        GroupInput::Spec(spec)
    } else {
        GroupInput::Name(s.to_string())
    };
    input.build()
}

pub fn parse_orders(s: &str) -> Result<Vec<u64>, InputError> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| match x.parse::<u64>() {
            Ok(r) if r > 0 => Ok(r),
            _ => Err(InputError::new("bad_orders", format!("{x:?} is not a positive integer"), "orders")),
        })
        .collect()
}

pub fn parse_monoid(s: &str, dim: Option<usize>) -> Result<(usize, Vec<Vec<Rational>>), InputError> {
    let raw: Vec<Vec<String>> = serde_json::from_str(s).map_err(|e| json_error(&e, "monoid"))?;
    let gens = raw
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.iter()
                .enumerate()
                .map(|(j, x)| {
                    parse_rational(x).map_err(|e| InputError::new("bad_monoid", e, format!("monoid[{i}][{j}]")))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let n = match (dim, gens.first()) {
        (Some(d), _) => d,
        (None, Some(g)) => g.len(),
        (None, None) => {
            return Err(InputError::new("bad_monoid", "an empty generator list needs --dim", "monoid"));
        }
    };
    if let Some(i) = gens.iter().position(|g| g.len() != n) {
        return Err(InputError::new("bad_monoid", format!("expected {n} coordinates"), format!("monoid[{i}]")));
    }
    Ok((n, gens))
}

impl CurveArgs {
    pub fn load(&self) -> Result<Loaded, InputError> {
        let doc: Option<InputDocument> = self.input.as_deref().map(|p| read_json(p, "input")).transpose()?;
        let graph = match (&self.curve, &doc) {
            (Some(p), _) => read_json(p, "curve")?,
            (None, Some(d)) => d.curve.clone(),
            (None, None) => return Err(InputError::new("missing_input", "a curve is required", "curve")),
        };
        let weights = match (&self.weights, &doc) {
            (Some(s), _) => Some(parse_weights(s)?),
            (None, Some(d)) => d.weights.clone(),
            _ => None,
        };
        let group = match (&self.group, doc.as_ref().and_then(|d| d.group.as_ref())) {
            (Some(s), _) => parse_group(s)?,
            (None, Some(g)) => g.build()?,
            (None, None) => FiniteGroup::trivial(),
        };
        let mono_doc: Option<MonodromyDoc> = match (&self.monodromy, &doc) {
            (Some(p), _) => Some(read_json(p, "monodromy")?),
            (None, Some(d)) => d.monodromy.clone(),
            _ => None,
        };
        let group = Arc::new(group);
        let mono = mono_doc.unwrap_or_default().to_assignment(&graph, group)?;
        Ok(Loaded { graph, weights, mono })
    }
}
