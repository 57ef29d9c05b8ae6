//! JSON documents for curves, weights, groups and monodromy.
//!
//! Output is canonical: keys sorted, rationals as reduced fraction strings,
//! group elements in cycle notation (or label / index for table groups).

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::curve::{CurveGraph, MonodromyAssignment, PointRef, SpecialPointDatum, WeightVector};
use crate::groups::{FiniteGroup, GroupSpec};

/// A located input error.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputError {
    pub code: String,
    pub message: String,
    pub location: String,
}

impl InputError {
    pub fn new(code: &str, message: impl Into<String>, location: impl Into<String>) -> Self {
        InputError { code: code.into(), message: message.into(), location: location.into() }
    }
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} at {}: {}", self.code, self.location, self.message)
    }
}

impl std::error::Error for InputError {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDoc {
    pub point: PointRef,
    #[serde(rename = "loop")]
    pub loop_elem: String,
    /// Image subgroup of a cluster; omitted when it is generated by the loop.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image: Option<Vec<String>>,
}

/// Per-vertex ordered loop lists.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MonodromyDoc(pub BTreeMap<String, Vec<PointDoc>>);

impl MonodromyDoc {
    pub fn from_assignment(m: &MonodromyAssignment) -> Self {
        let g = m.group();
        let docs = m
            .data()
            .iter()
            .map(|(v, pts)| {
                let pts = pts
                    .iter()
                    .map(|d| {
                        let cyc = g.generated_subgroup(&[d.loop_elem]).expect("own element");
                        let image =
                            (d.image != cyc).then(|| d.image.elements(g).map(|x| g.format_element(x)).collect());
                        PointDoc { point: d.point.clone(), loop_elem: g.format_element(d.loop_elem), image }
                    })
                    .collect();
                (v.clone(), pts)
            })
            .collect();
        MonodromyDoc(docs)
    }

    /// Resolves element names in `group`. Vertices missing from the document get
    /// trivial loops in the default order.
    pub fn to_assignment(
        &self,
        graph: &CurveGraph,
        group: Arc<FiniteGroup>,
    ) -> Result<MonodromyAssignment, InputError> {
        let g = &*group;
        let base = MonodromyAssignment::identity_on(graph, group.clone());
        let mut data: BTreeMap<String, Vec<SpecialPointDatum>> = base.data().clone();
        for (v, pts) in &self.0 {
            let mut list = Vec::with_capacity(pts.len());
            for (i, p) in pts.iter().enumerate() {
                let loc = format!("monodromy.{v}[{i}]");
                let x =
                    g.parse_element(&p.loop_elem).map_err(|e| InputError::new("bad_element", e.to_string(), &loc))?;
                let image = match &p.image {
                    None => g.generated_subgroup(&[x]).expect("own element"),
                    Some(names) => {
                        let els = names
                            .iter()
                            .map(|s| g.parse_element(s))
                            .collect::<Result<Vec<_>, _>>()
                            .map_err(|e| InputError::new("bad_element", e.to_string(), format!("{loc}.image")))?;
                        g.subgroup_from_elements(&els).ok_or_else(|| {
                            InputError::new(
                                "not_a_subgroup",
                                "image is not closed under multiplication",
                                format!("{loc}.image"),
                            )
                        })?
                    }
                };
                list.push(SpecialPointDatum { point: p.point.clone(), loop_elem: x, image });
            }
            data.insert(v.clone(), list);
        }
        Ok(MonodromyAssignment::new(group, data))
    }
}

/// A group given either by its JSON specification or a short name such as `"S3"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupInput {
    Name(String),
    Spec(GroupSpec),
}

impl GroupInput {
    pub fn build(&self) -> Result<FiniteGroup, InputError> {
        let spec = match self {
            GroupInput::Name(s) => {
                GroupSpec::parse_short(s).map_err(|e| InputError::new("bad_group", e.to_string(), "group"))?
            }
            GroupInput::Spec(s) => s.clone(),
        };
        FiniteGroup::from_spec(&spec).map_err(|e| InputError::new("bad_group", e.to_string(), "group"))
    }
}

/// Everything a curve-level command reads.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDocument {
    pub curve: CurveGraph,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monodromy: Option<MonodromyDoc>,
}

/// Sorted-key pretty JSON.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    serde_json::to_string_pretty(&v).expect("serializable")
}

/// Sorted-key compact JSON.
pub fn to_compact_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    serde_json::to_string(&v).expect("serializable")
}

pub fn parse_curve(text: &str) -> Result<CurveGraph, InputError> {
    serde_json::from_str(text).map_err(|e| json_error(&e, "curve"))
}

pub fn parse_monodromy(text: &str) -> Result<MonodromyDoc, InputError> {
    serde_json::from_str(text).map_err(|e| json_error(&e, "monodromy"))
}

pub fn json_error(e: &serde_json::Error, what: &str) -> InputError {
    InputError::new("parse_error", e.to_string(), format!("{what}:{}:{}", e.line(), e.column()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const CURVE: &str = r#"{
        "n": 2, "genus": 1,
        "vertices": [
            {"id": "a", "genus": 1, "degree": 0, "clusters": []},
            {"id": "t", "genus": 0, "degree": 0, "clusters": [{"markings": [1], "root_order": 2}, {"markings": [2], "root_order": 2}]}
        ],
        "edges": [{"id": "e", "ends": [["a", 0], ["t", 0]], "order": 1}]
    }"#;

    const MONO: &str = r#"{
        "a": [{"point": "edge:e:0", "loop": "()"}],
        "t": [{"point": "edge:e:1", "loop": "()"}, {"point": "cluster:0", "loop": "(1 2)"}, {"point": "cluster:1", "loop": "(1 2)"}]
    }"#;

    #[test]
    fn round_trip() {
        let c = parse_curve(CURVE).unwrap();
        let g = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let m = parse_monodromy(MONO).unwrap().to_assignment(&c, g).unwrap();
        assert!(crate::curve::validate(&c, None, Some(&m)).is_empty());
        let back = MonodromyDoc::from_assignment(&m);
        assert_eq!(back, parse_monodromy(MONO).unwrap());
        let c2 = parse_curve(&to_canonical_json(&c)).unwrap();
        assert_eq!(c2, c);
        assert_eq!(to_canonical_json(&c2), to_canonical_json(&c));
    }

    #[test]
    fn bad_element_is_located() {
        let c = parse_curve(CURVE).unwrap();
        let g = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let doc = parse_monodromy(r#"{"t": [{"point": "cluster:0", "loop": "(1 4)"}]}"#).unwrap();
        let e = doc.to_assignment(&c, g).unwrap_err();
        assert_eq!(e.location, "monodromy.t[0]");
    }

    #[test]
    fn group_inputs() {
        let a: GroupInput = serde_json::from_str(r#""S3""#).unwrap();
        let b: GroupInput = serde_json::from_str(r#"{"kind":"symmetric","degree":3}"#).unwrap();
        assert_eq!(a.build().unwrap().order(), 6);
        assert_eq!(b.build().unwrap().order(), 6);
    }

    #[test]
    fn sorted_keys() {
        let c = parse_curve(CURVE).unwrap();
        let s = to_compact_json(&c);
        assert!(s.starts_with(r#"{"edges":"#), "{s}");
    }
}
