//! Proof files: a JSON array with one object per line.
//!
//! Each object has `i`, `cirquent` (surface text), `rule` (lower-case name or
//! `axiom`), `premises`, and exactly the descriptor fields its rule uses:
//! `variant`, `path`, `innerPath`, `cluster`, `choice`, `letter`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Justification, Proof, ProofLine, Rule, RuleDescriptor, Variant};
use crate::syntax::{parse, ClusterId, Letter, ParseError, Path, Side, SyntaxError};

#[derive(Debug, Error)]
pub enum ProofFileError {
    #[error("malformed proof file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("entry {entry}: {msg}")]
    Entry { entry: usize, msg: String },
    #[error("entry {entry}: cirquent: {source}")]
    Cirquent { entry: usize, source: ParseError },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LineRepr {
    i: usize,
    cirquent: String,
    rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    variant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    path: Option<String>,
    #[serde(default, rename = "innerPath", skip_serializing_if = "Option::is_none")]
    inner_path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cluster: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    choice: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    letter: Option<String>,
    #[serde(default)]
    premises: Vec<usize>,
}

impl LineRepr {
    fn bare(line: &ProofLine, rule: &str, premises: Vec<usize>) -> LineRepr {
        LineRepr {
            i: line.index,
            cirquent: line.cirquent.to_string(),
            rule: rule.to_string(),
            variant: None,
            path: None,
            inner_path: None,
            cluster: None,
            choice: None,
            letter: None,
            premises,
        }
    }
}

fn to_repr(line: &ProofLine) -> LineRepr {
    let Justification::Step { descriptor, premises } = &line.justification else {
        return LineRepr::bare(line, "axiom", Vec::new());
    };
    let mut r = LineRepr::bare(line, descriptor.rule().name(), premises.clone());
    r.variant = descriptor.variant().map(|v| v.to_string());
    r.path = descriptor.path().map(|p| p.to_string());
    match descriptor {
        RuleDescriptor::Choosing { cluster, choice } => {
            r.cluster = Some(cluster.to_string());
            r.choice = Some(choice.index());
        }
        RuleDescriptor::Cleansing { inner_path, .. } => r.inner_path = Some(inner_path.to_string()),
        RuleDescriptor::Trivialization { letter, .. } => r.letter = Some(letter.to_string()),
        RuleDescriptor::Quadrilemma { cluster, .. } | RuleDescriptor::Splitting { cluster } => {
            r.cluster = Some(cluster.to_string())
        }
        _ => {}
    }
    r
}

fn from_repr(entry: usize, mut r: LineRepr) -> Result<ProofLine, ProofFileError> {
    let err = |msg: String| ProofFileError::Entry { entry, msg };
    let cirquent = parse(&r.cirquent).map_err(|source| ProofFileError::Cirquent { entry, source })?;

    if r.rule == "axiom" {
        if r.variant.is_some()
            || r.path.is_some()
            || r.inner_path.is_some()
            || r.cluster.is_some()
            || r.choice.is_some()
            || r.letter.is_some()
            || !r.premises.is_empty()
        {
            return Err(err("axiom lines take no rule fields or premises".into()));
        }
        return Ok(ProofLine { index: r.i, cirquent, justification: Justification::Axiom });
    }
    let rule = Rule::from_name(&r.rule).ok_or_else(|| err(format!("unknown rule `{}`", r.rule)))?;

    let take = |name: &str, field: &mut Option<String>| {
        field.take().ok_or_else(|| err(format!("{rule} requires `{name}`")))
    };
    let path_of = |s: String| s.parse::<Path>().map_err(|e: SyntaxError| err(e.to_string()));
    let cluster_of = |s: String| s.parse::<ClusterId>().map_err(|e: SyntaxError| err(e.to_string()));
    let variant_of = |s: String| match s.as_str() {
        "a" => Ok(Variant::A),
        "b" => Ok(Variant::B),
        _ => Err(err(format!("bad variant `{s}`"))),
    };

    let descriptor = match rule {
        Rule::Commutativity | Rule::Associativity | Rule::Identity | Rule::Domination | Rule::Distribution => {
            let variant = variant_of(take("variant", &mut r.variant)?)?;
            let path = path_of(take("path", &mut r.path)?)?;
            match rule {
                Rule::Commutativity => RuleDescriptor::Commutativity { variant, path },
                Rule::Associativity => RuleDescriptor::Associativity { variant, path },
                Rule::Identity => RuleDescriptor::Identity { variant, path },
                Rule::Domination => RuleDescriptor::Domination { variant, path },
                _ => RuleDescriptor::Distribution { variant, path },
            }
        }
        Rule::Choosing => {
            let cluster = cluster_of(take("cluster", &mut r.cluster)?)?;
            let from_variant = r.variant.take().map(variant_of).transpose()?.map(|v| match v {
                Variant::A => Side::Left,
                Variant::B => Side::Right,
            });
            let from_choice = r
                .choice
                .take()
                .map(|n| Side::from_index(n).ok_or_else(|| err(format!("bad choice {n}"))))
                .transpose()?;
            let choice = match (from_variant, from_choice) {
                (Some(a), Some(b)) if a != b => return Err(err("variant and choice disagree".into())),
                (Some(s), _) | (None, Some(s)) => s,
                (None, None) => return Err(err("choosing requires `choice`".into())),
            };
            RuleDescriptor::Choosing { cluster, choice }
        }
        Rule::Cleansing => RuleDescriptor::Cleansing {
            variant: variant_of(take("variant", &mut r.variant)?)?,
            path: path_of(take("path", &mut r.path)?)?,
            inner_path: path_of(take("innerPath", &mut r.inner_path)?)?,
        },
        Rule::Trivialization => {
            let path = path_of(take("path", &mut r.path)?)?;
            let letter = take("letter", &mut r.letter)?;
            RuleDescriptor::Trivialization { path, letter: Letter::new(&letter).map_err(|e| err(e.to_string()))? }
        }
        Rule::Quadrilemma => RuleDescriptor::Quadrilemma {
            path: path_of(take("path", &mut r.path)?)?,
            cluster: cluster_of(take("cluster", &mut r.cluster)?)?,
        },
        Rule::Splitting => RuleDescriptor::Splitting { cluster: cluster_of(take("cluster", &mut r.cluster)?)? },
    };

    let leftover = [
        ("variant", r.variant.is_some()),
        ("path", r.path.is_some()),
        ("innerPath", r.inner_path.is_some()),
        ("cluster", r.cluster.is_some()),
        ("choice", r.choice.is_some()),
        ("letter", r.letter.is_some()),
    ];
    if let Some((name, _)) = leftover.iter().find(|(_, present)| *present) {
        return Err(err(format!("{rule} does not take `{name}`")));
    }
    Ok(ProofLine { index: r.i, cirquent, justification: Justification::Step { descriptor, premises: r.premises } })
}

impl Proof {
    pub fn to_json_value(&self) -> serde_json::Value {
        let reprs: Vec<LineRepr> = self.lines().iter().map(to_repr).collect();
        serde_json::to_value(reprs).expect("proof lines serialize")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("proof lines serialize")
    }

    pub fn from_json(text: &str) -> Result<Proof, ProofFileError> {
        let reprs: Vec<LineRepr> = serde_json::from_str(text)?;
        let lines = reprs.into_iter().enumerate().map(|(n, r)| from_repr(n + 1, r)).collect::<Result<_, _>>()?;
        Ok(Proof::from_lines(lines))
    }
}
