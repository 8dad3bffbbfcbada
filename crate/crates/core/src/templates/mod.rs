// Copyright 2026 The lnnsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Nearest-neighbour identity templates and the rewriting engine built on
//! them.
//!
//! A template is an identity circuit `t_0 .. t_{d-1}`. Whenever more than
//! half of a rotation of it appears in a circuit, those `m` gates equal the
//! inverse of the other `d - m` gates and can be replaced by them.

mod discover;
mod prim;
mod rewrite;

use std::fmt::Write as _;

use thiserror::Error;

pub use discover::{find_templates, DistanceOracle};
pub use rewrite::{
    gate_cancel_merge, match_and_reduce, optimize, MatchResult, OptimizeError, RewriteStep,
    RewriteTrace,
};

use crate::circuit::{Circuit, Gate};
use crate::real::{RealDocument, RealError};
use crate::semantics::circuit_unitary;

#[derive(Debug, Error)]
pub enum TemplateError {
    #[error("template `{0}` does not simulate to the identity")]
    NotIdentity(String),
    #[error("template `{0}` has a gate on non-adjacent lines")]
    NotLnn(String),
    #[error("template `{0}` contains a gate with more than one control")]
    NotPrimitive(String),
    #[error("template file line {line}: {msg}")]
    Header { line: usize, msg: String },
    #[error("template `{name}`: {source}")]
    Real {
        name: String,
        #[source]
        source: RealError,
    },
    #[error("template `{name}` declares {declared} gates but has {found}")]
    SizeMismatch {
        name: String,
        declared: usize,
        found: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    name: String,
    circuit: Circuit,
}

impl Template {
    /// Checks that the circuit is a nearest-neighbour identity of
    /// single-control gates.
    pub fn new(name: impl Into<String>, circuit: Circuit) -> Result<Template, TemplateError> {
        let name = name.into();
        if circuit
            .gates()
            .iter()
            .any(|g| prim::Prim::from_gate(g).is_none())
        {
            return Err(TemplateError::NotPrimitive(name));
        }
        if !circuit.is_lnn() {
            return Err(TemplateError::NotLnn(name));
        }
        if !circuit_unitary(&circuit).is_identity() {
            return Err(TemplateError::NotIdentity(name));
        }
        Ok(Template { name, circuit })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn size(&self) -> usize {
        self.circuit.len()
    }
}

fn parse_compact(text: &str) -> Template {
    let mut gates = Vec::new();
    let mut lines = 0;
    for tok in text.split('|') {
        let parts: Vec<&str> = tok.split_whitespace().collect();
        let l: Vec<usize> = parts[1..].iter().map(|x| x.parse().unwrap()).collect();
        lines = lines.max(*l.iter().max().unwrap() + 1);
        gates.push(match parts[0] {
            "n" => crate::Gate::not(l[0]),
            "c" => crate::Gate::cnot(l[0], l[1]),
            "v" => crate::Gate::cv(l[0], l[1]),
            "v+" => crate::Gate::cvdg(l[0], l[1]),
            other => panic!("bad builtin gate {other}"),
        });
    }
    Circuit::from_gates(lines, gates)
        .map(|c| Template {
            name: String::new(),
            circuit: c,
        })
        .expect("builtin template")
}

const BUILTIN: &[(&str, &str)] = &[
    ("cnot-6", "c 0 1|c 1 0|c 0 1|c 1 0|c 0 1|c 1 0"),
    (
        "cnot-9a",
        "c 1 2|c 0 1|c 1 2|c 0 1|c 1 0|c 0 1|c 1 2|c 0 1|c 1 0",
    ),
    (
        "cnot-9b",
        "c 1 2|c 0 1|c 1 2|c 2 1|c 0 1|c 1 2|c 0 1|c 1 2|c 2 1",
    ),
    (
        "cnot-10",
        "c 1 0|c 0 1|c 1 2|c 0 1|c 1 0|c 2 1|c 1 2|c 0 1|c 1 2|c 2 1",
    ),
    (
        "toffoli-18",
        "v 1 2|c 0 1|v+ 1 2|c 0 1|c 1 0|c 0 1|v 1 2|c 0 1|c 1 0|\
         v 1 2|c 0 1|v+ 1 2|c 1 0|c 0 1|c 1 0|v 1 2|c 0 1|c 1 0",
    ),
    ("not-pair", "n 0|n 0"),
    ("cnot-pair", "c 0 1|c 0 1"),
    ("v-pair", "v 0 1|v+ 0 1"),
    ("v-merge", "v 0 1|v 0 1|c 0 1"),
    ("vdg-merge", "v+ 0 1|v+ 0 1|c 0 1"),
];

/// Five known nearest-neighbour CNOT and Toffoli templates plus gate
/// cancellation and merge identities.
pub fn builtin_templates() -> Vec<Template> {
    BUILTIN
        .iter()
        .map(|(name, text)| {
            let t = parse_compact(text);
            Template::new(*name, t.circuit).expect("builtin templates are identities")
        })
        .collect()
}

/// The syntactic commutation rule used when matching: disjoint gates
/// commute, equal SWAPs commute, and otherwise two gates commute when
/// neither one's target is a control of the other.
pub fn gates_commute(a: &Gate, b: &Gate) -> Result<bool, OptimizeError> {
    let prim =
        |g: &Gate| prim::Prim::from_gate(g).ok_or_else(|| OptimizeError::NotPrimitive(g.clone()));
    Ok(prim::commutes(prim(a)?, prim(b)?))
}

/// An ordered set of templates, largest first.
#[derive(Clone, Debug)]
pub struct TemplateBase {
    templates: Vec<Template>,
    pub(crate) index: rewrite::Index,
}

/// Version line written at the top of template files.
pub const TEMPLATE_FILE_VERSION: &str = "# lnnsynth template base v1";

const FROZEN: &str = include_str!("../../templates/base-v1.txt");

impl TemplateBase {
    pub fn new(mut templates: Vec<Template>) -> TemplateBase {
        templates.sort_by(|a, b| b.size().cmp(&a.size()).then(a.name.cmp(&b.name)));
        let index = rewrite::Index::build(&templates);
        TemplateBase { templates, index }
    }

    pub fn builtin() -> TemplateBase {
        TemplateBase::new(builtin_templates())
    }

    /// The shipped base: the builtins plus the frozen discovered templates.
    pub fn standard() -> TemplateBase {
        let mut all = builtin_templates();
        all.extend(parse_template_file(FROZEN).expect("shipped template base is valid"));
        TemplateBase::new(all)
    }

    pub fn templates(&self) -> &[Template] {
        &self.templates
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn to_file(&self) -> String {
        write_template_file(&self.templates)
    }
}

/// Serialises templates as `#template d=<size> name=<name>` headers each
/// followed by a REAL fragment.
pub fn write_template_file(templates: &[Template]) -> String {
    let mut out = String::new();
    writeln!(out, "{TEMPLATE_FILE_VERSION}").unwrap();
    for t in templates {
        writeln!(out, "#template d={} name={}", t.size(), t.name).unwrap();
        out.push_str(&RealDocument::from_circuit(t.circuit.clone()).write());
    }
    out
}

pub fn parse_template_file(text: &str) -> Result<Vec<Template>, TemplateError> {
    let mut out = Vec::new();
    let mut current: Option<(usize, String, usize, String)> = None;
    let finish = |cur: Option<(usize, String, usize, String)>,
                  out: &mut Vec<Template>|
     -> Result<(), TemplateError> {
        if let Some((_, name, declared, body)) = cur {
            let doc = RealDocument::parse(&body).map_err(|source| TemplateError::Real {
                name: name.clone(),
                source,
            })?;
            let found = doc.circuit.len();
            if found != declared {
                return Err(TemplateError::SizeMismatch {
                    name,
                    declared,
                    found,
                });
            }
            out.push(Template::new(name, doc.circuit)?);
        }
        Ok(())
    };
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if let Some(rest) = line.strip_prefix("#template") {
            finish(current.take(), &mut out)?;
            let mut size = None;
            let mut name = format!("template-{lineno}");
            for field in rest.split_whitespace() {
                match field.split_once('=') {
                    Some(("d", v)) => size = v.parse().ok(),
                    Some(("name", v)) => name = v.to_string(),
                    _ => {
                        return Err(TemplateError::Header {
                            line: lineno,
                            msg: format!("unexpected field `{field}`"),
                        })
                    }
                }
            }
            let size = size.ok_or_else(|| TemplateError::Header {
                line: lineno,
                msg: "missing d=<size>".into(),
            })?;
            current = Some((lineno, name, size, String::new()));
        } else if let Some((_, _, _, body)) = current.as_mut() {
            body.push_str(line);
            body.push('\n');
        } else if !(line.trim().is_empty() || line.starts_with('#')) {
            return Err(TemplateError::Header {
                line: lineno,
                msg: "content before the first #template header".into(),
            });
        }
    }
    finish(current, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_valid() {
        let b = builtin_templates();
        assert_eq!(b.len(), 10);
        for t in &b {
            assert!(t.circuit().is_lnn());
            assert!(circuit_unitary(t.circuit()).is_identity(), "{}", t.name());
        }
        assert_eq!(b[4].size(), 18);
    }

    #[test]
    fn rejects_non_identity() {
        let c = Circuit::from_gates(2, [crate::Gate::cnot(0, 1)]).unwrap();
        assert!(matches!(
            Template::new("x", c),
            Err(TemplateError::NotIdentity(_))
        ));
        let c = Circuit::from_gates(3, [crate::Gate::cnot(0, 2), crate::Gate::cnot(0, 2)]).unwrap();
        assert!(matches!(
            Template::new("y", c),
            Err(TemplateError::NotLnn(_))
        ));
    }

    #[test]
    fn file_round_trip() {
        let b = builtin_templates();
        let text = write_template_file(&b);
        let back = parse_template_file(&text).unwrap();
        assert_eq!(back, b);
        assert!(parse_template_file("#template name=x\n").is_err());
        let wrong = text.replacen("d=6", "d=7", 1);
        assert!(matches!(
            parse_template_file(&wrong),
            Err(TemplateError::SizeMismatch { .. })
        ));
    }
}
