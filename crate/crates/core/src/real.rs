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

//! RevKit `.real` netlists.
//!
//! Gate tokens: `tN` (multiple-control Toffoli over N lines, last line is the
//! target), `v` / `v+` (controlled-V and its inverse), `f2` or `swap`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, GateKind};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RealError {
    #[error("line {line}: missing .numvars before {what}")]
    MissingNumvars { line: usize, what: String },
    #[error("line {line}: .variables lists {found} names but .numvars is {expected}")]
    VariableCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: unknown gate token `{token}`")]
    UnknownGate { line: usize, token: String },
    #[error("line {line}: unknown variable `{name}`")]
    UnknownVariable { line: usize, name: String },
    #[error("line {line}: gate `{token}` expects {expected} lines, got {found}")]
    GateArity {
        line: usize,
        token: String,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: {source}")]
    Gate { line: usize, source: CircuitError },
    #[error("line {line}: malformed directive `{text}`")]
    Directive { line: usize, text: String },
    #[error("missing .begin / .end block")]
    MissingBody,
}

/// A parsed `.real` document. Keeps variable names and the leading comment
/// block so that a canonical file is reproduced byte for byte.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealDocument {
    pub comments: Vec<String>,
    pub version: Option<String>,
    pub variables: Vec<String>,
    pub inputs: Option<String>,
    pub outputs: Option<String>,
    pub constants: Option<String>,
    pub garbage: Option<String>,
    pub circuit: Circuit,
}

impl RealDocument {
    /// Wraps a circuit with generated variable names `x0 … x{n-1}`.
    pub fn from_circuit(circuit: Circuit) -> RealDocument {
        RealDocument {
            comments: Vec::new(),
            version: Some("1.0".into()),
            variables: default_names(circuit.num_lines()),
            inputs: None,
            outputs: None,
            constants: None,
            garbage: None,
            circuit,
        }
    }

    /// Same header, different body. Falls back to generated names when the
    /// line count changed.
    pub fn with_circuit(&self, circuit: Circuit) -> RealDocument {
        if circuit.num_lines() == self.variables.len() {
            RealDocument {
                circuit,
                ..self.clone()
            }
        } else {
            RealDocument {
                comments: self.comments.clone(),
                ..RealDocument::from_circuit(circuit)
            }
        }
    }

    pub fn parse(text: &str) -> Result<RealDocument, RealError> {
        let mut comments = Vec::new();
        let mut header_done = false;
        let mut version = None;
        let mut numvars: Option<usize> = None;
        let mut variables: Option<Vec<String>> = None;
        let (mut inputs, mut outputs, mut constants, mut garbage) = (None, None, None, None);
        let mut circuit: Option<Circuit> = None;
        let mut in_body = false;
        let mut ended = false;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(comment) = trimmed.strip_prefix('#') {
                if !header_done {
                    comments.push(comment.to_string());
                }
                continue;
            }
            header_done = true;
            if ended {
                continue;
            }
            let mut parts = trimmed.split_whitespace();
            let head = parts.next().unwrap();
            if let Some(directive) = head.strip_prefix('.') {
                let rest = trimmed[head.len()..].trim().to_string();
                match directive.to_ascii_lowercase().as_str() {
                    "version" => version = Some(rest),
                    "numvars" => {
                        let n = rest.parse::<usize>().map_err(|_| RealError::Directive {
                            line,
                            text: trimmed.to_string(),
                        })?;
                        numvars = Some(n);
                    }
                    "variables" => {
                        let n = numvars.ok_or_else(|| RealError::MissingNumvars {
                            line,
                            what: ".variables".into(),
                        })?;
                        let names: Vec<String> = parts.map(str::to_string).collect();
                        if names.len() != n {
                            return Err(RealError::VariableCount {
                                line,
                                expected: n,
                                found: names.len(),
                            });
                        }
                        variables = Some(names);
                    }
                    "inputs" => inputs = Some(rest),
                    "outputs" => outputs = Some(rest),
                    "constants" => constants = Some(rest),
                    "garbage" => garbage = Some(rest),
                    "begin" => {
                        let n = numvars.ok_or_else(|| RealError::MissingNumvars {
                            line,
                            what: ".begin".into(),
                        })?;
                        if variables.is_none() {
                            variables = Some(default_names(n));
                        }
                        circuit = Some(
                            Circuit::new(n).map_err(|source| RealError::Gate { line, source })?,
                        );
                        in_body = true;
                    }
                    "end" => {
                        if !in_body {
                            return Err(RealError::MissingBody);
                        }
                        in_body = false;
                        ended = true;
                    }
                    "model" | "define" | "enddefine" => {}
                    _ => {
                        return Err(RealError::Directive {
                            line,
                            text: trimmed.to_string(),
                        })
                    }
                }
                continue;
            }
            if !in_body {
                return Err(RealError::MissingBody);
            }
            let names = variables.as_ref().unwrap();
            let mut lines = Vec::new();
            for name in parts {
                let idx = names.iter().position(|v| v == name).ok_or_else(|| {
                    RealError::UnknownVariable {
                        line,
                        name: name.to_string(),
                    }
                })?;
                lines.push(idx);
            }
            let gate = parse_gate(head, &lines, line)?;
            circuit
                .as_mut()
                .unwrap()
                .push(gate)
                .map_err(|source| RealError::Gate { line, source })?;
        }
        if !ended {
            return Err(RealError::MissingBody);
        }
        Ok(RealDocument {
            comments,
            version,
            variables: variables.unwrap(),
            inputs,
            outputs,
            constants,
            garbage,
            circuit: circuit.unwrap(),
        })
    }

    pub fn write(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            writeln!(out, "#{c}").unwrap();
        }
        if let Some(v) = &self.version {
            writeln!(out, ".version {v}").unwrap();
        }
        writeln!(out, ".numvars {}", self.variables.len()).unwrap();
        writeln!(out, ".variables {}", self.variables.join(" ")).unwrap();
        for (key, val) in [
            ("inputs", &self.inputs),
            ("outputs", &self.outputs),
            ("constants", &self.constants),
            ("garbage", &self.garbage),
        ] {
            if let Some(v) = val {
                writeln!(out, ".{key} {v}").unwrap();
            }
        }
        out.push_str(".begin\n");
        for g in self.circuit.gates() {
            let token = match g.kind() {
                GateKind::ControlledV => "v".to_string(),
                GateKind::ControlledVdg => "v+".to_string(),
                GateKind::Swap => "f2".to_string(),
                _ => format!("t{}", g.controls().len() + 1),
            };
            out.push_str(&token);
            for l in g.lines() {
                out.push(' ');
                out.push_str(&self.variables[l]);
            }
            out.push('\n');
        }
        out.push_str(".end\n");
        out
    }
}

fn default_names(n: usize) -> Vec<String> {
    const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
    if n <= LETTERS.len() {
        LETTERS[..n]
            .iter()
            .map(|&b| (b as char).to_string())
            .collect()
    } else {
        (0..n).map(|i| format!("x{i}")).collect()
    }
}

fn parse_gate(token: &str, lines: &[usize], line: usize) -> Result<Gate, RealError> {
    let arity = |expected: usize| {
        if lines.len() == expected {
            Ok(())
        } else {
            Err(RealError::GateArity {
                line,
                token: token.to_string(),
                expected,
                found: lines.len(),
            })
        }
    };
    let wrap = |r: Result<Gate, CircuitError>| r.map_err(|source| RealError::Gate { line, source });
    let lower = token.to_ascii_lowercase();
    match lower.as_str() {
        "v" => {
            arity(2)?;
            wrap(Gate::new(GateKind::ControlledV, [lines[0]], &[lines[1]]))
        }
        "v+" => {
            arity(2)?;
            wrap(Gate::new(GateKind::ControlledVdg, [lines[0]], &[lines[1]]))
        }
        "f2" | "swap" => {
            arity(2)?;
            wrap(Gate::new(GateKind::Swap, [], lines))
        }
        _ => {
            let n = lower
                .strip_prefix('t')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(|| RealError::UnknownGate {
                    line,
                    token: token.to_string(),
                })?;
            arity(n)?;
            let (target, controls) = lines.split_last().unwrap();
            wrap(Gate::mct(controls.iter().copied(), *target))
        }
    }
}

pub fn parse_real(text: &str) -> Result<Circuit, RealError> {
    RealDocument::parse(text).map(|d| d.circuit)
}

pub fn write_real(circuit: &Circuit) -> String {
    RealDocument::from_circuit(circuit.clone()).write()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_toffoli() {
        let c = parse_real(".numvars 3\n.variables a b c\n.begin\nt3 a b c\n.end\n").unwrap();
        assert_eq!(c, Circuit::from_gates(3, [Gate::toffoli(0, 1, 2)]).unwrap());
    }

    #[test]
    fn round_trip_all_kinds() {
        let c = Circuit::from_gates(
            5,
            [
                Gate::not(4),
                Gate::cnot(0, 3),
                Gate::toffoli(0, 1, 3),
                Gate::mct([0, 1, 2], 4).unwrap(),
                Gate::cv(2, 1),
                Gate::cvdg(1, 2),
                Gate::swap(0, 4),
            ],
        )
        .unwrap();
        let text = write_real(&c);
        assert_eq!(parse_real(&text).unwrap(), c);
        // writing a parsed canonical document is byte-identical
        assert_eq!(RealDocument::parse(&text).unwrap().write(), text);
    }

    #[test]
    fn keeps_comments_and_names() {
        let src = "# source: somewhere\n.version 1.0\n.numvars 2\n.variables p q\n.constants --\n.begin\nt2 q p\nv p q\n.end\n";
        let doc = RealDocument::parse(src).unwrap();
        assert_eq!(doc.write(), src);
        assert_eq!(doc.circuit.gates()[0], Gate::cnot(1, 0));
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(matches!(
            parse_real(".numvars 3\n.variables a b c\n.begin\nt2 a a\n.end\n"),
            Err(RealError::Gate { line: 4, .. })
        ));
        assert!(matches!(
            parse_real(".numvars 2\n.variables a b\n.begin\nq2 a b\n.end\n"),
            Err(RealError::UnknownGate { line: 4, .. })
        ));
        assert!(matches!(
            parse_real(".numvars 3\n.variables a b\n"),
            Err(RealError::VariableCount {
                line: 2,
                expected: 3,
                found: 2
            })
        ));
        assert!(matches!(
            parse_real(".variables a b\n"),
            Err(RealError::MissingNumvars { line: 1, .. })
        ));
        assert!(matches!(
            parse_real(".numvars 2\n.variables a b\n.begin\nt3 a b\n.end\n"),
            Err(RealError::GateArity {
                line: 4,
                expected: 3,
                found: 2,
                ..
            })
        ));
        assert!(matches!(
            parse_real(".numvars 2\n.variables a b\n.begin\nt2 a z\n.end\n"),
            Err(RealError::UnknownVariable { line: 4, .. })
        ));
        assert_eq!(
            parse_real(".numvars 2\n.variables a b\n.begin\nt2 a b\n"),
            Err(RealError::MissingBody)
        );
    }
}
