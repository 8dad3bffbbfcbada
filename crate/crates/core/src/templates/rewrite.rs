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

//! Gate cancellation, template matching and the optimisation loop.

use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use super::prim::{combine, commutes, Prim};
use super::{Template, TemplateBase};
use crate::circuit::{Circuit, Gate};
use crate::fourval::{self, FourValuedImage};
use crate::semantics::{circuit_unitary, UnitaryMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OptimizeError {
    #[error("cannot rewrite {0}: only NOT, CNOT, CV, CV+ and SWAP gates are supported")]
    NotPrimitive(Gate),
}

/// Where a template matched.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchResult {
    pub template: String,
    /// Positions of the matched gates in the subject circuit.
    pub indices: Vec<usize>,
    /// Matched against the template's inverse (reversed gate order).
    pub reversed: bool,
    /// Matched against the template mirrored top to bottom.
    pub reflected: bool,
    /// Line shift applied to the template.
    pub offset: i32,
    /// Template gate aligned with the first matched gate.
    pub rotation: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RewriteStep {
    pub rule: String,
    pub before: usize,
    pub after: usize,
}

/// Applied rewrites in order; sizes never increase.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RewriteTrace {
    pub steps: Vec<RewriteStep>,
}

impl RewriteTrace {
    fn push(&mut self, rule: impl Into<String>, before: usize, after: usize) {
        self.steps.push(RewriteStep {
            rule: rule.into(),
            before,
            after,
        });
    }
}

#[derive(Clone, Debug)]
struct Variant {
    template: usize,
    gates: Vec<Prim>,
    span: u8,
    reversed: bool,
    reflected: bool,
}

/// Every variant of every template, indexed by the shape of each gate.
#[derive(Clone, Debug, Default)]
pub(crate) struct Index {
    names: Vec<String>,
    variants: Vec<Variant>,
    /// shape -> (variant, rotation), larger templates first
    by_shape: FxHashMap<Prim, Vec<(u32, u32)>>,
}

impl Index {
    pub fn build(templates: &[Template]) -> Index {
        let mut index = Index {
            names: templates.iter().map(|t| t.name().to_string()).collect(),
            ..Index::default()
        };
        for (ti, t) in templates.iter().enumerate() {
            let prims: Vec<Prim> = t
                .circuit()
                .gates()
                .iter()
                .map(|g| Prim::from_gate(g).expect("validated template"))
                .collect();
            let lo = prims.iter().map(|p| p.min_line()).min().unwrap_or(0);
            let hi = prims.iter().map(|p| p.max_line()).max().unwrap_or(0);
            let span = hi - lo + 1;
            let base: Vec<Prim> = prims.iter().map(|p| p.shifted(-i32::from(lo))).collect();
            let inv: Vec<Prim> = base.iter().rev().map(|p| p.inverse()).collect();
            let mut seen: Vec<Vec<Prim>> = Vec::new();
            for (reversed, seq) in [(false, base), (true, inv)] {
                for reflected in [false, true] {
                    let gates: Vec<Prim> = if reflected {
                        seq.iter().map(|p| p.reflected(span)).collect()
                    } else {
                        seq.clone()
                    };
                    if seen.contains(&gates) {
                        continue;
                    }
                    seen.push(gates.clone());
                    index.variants.push(Variant {
                        template: ti,
                        gates,
                        span,
                        reversed,
                        reflected,
                    });
                }
            }
        }
        for (vi, v) in index.variants.iter().enumerate() {
            for (r, p) in v.gates.iter().enumerate() {
                index
                    .by_shape
                    .entry(p.shape())
                    .or_default()
                    .push((vi as u32, r as u32));
            }
        }
        let sizes: Vec<usize> = index.variants.iter().map(|v| v.gates.len()).collect();
        for list in index.by_shape.values_mut() {
            list.sort_by_key(|&(v, r)| (std::cmp::Reverse(sizes[v as usize]), v, r));
        }
        index
    }
}

fn to_prims(c: &Circuit) -> Result<Vec<Prim>, OptimizeError> {
    c.gates()
        .iter()
        .map(|g| Prim::from_gate(g).ok_or_else(|| OptimizeError::NotPrimitive(g.clone())))
        .collect()
}

fn to_circuit(n: usize, prims: &[Prim]) -> Circuit {
    Circuit::from_gates(n, prims.iter().map(|p| p.to_gate())).expect("lines stay in range")
}

/// The function a circuit must keep realising while it is rewritten.
enum Reference {
    /// Non-entangling input: rewrites must stay non-entangling.
    Image(FourValuedImage),
    Unitary(UnitaryMatrix),
}

impl Reference {
    fn of(c: &Circuit) -> Reference {
        match fourval::simulate(c) {
            Some(img) => Reference::Image(img),
            None => Reference::Unitary(circuit_unitary(c)),
        }
    }

    fn accepts(&self, c: &Circuit) -> bool {
        match self {
            Reference::Image(img) => fourval::simulate(c).as_ref() == Some(img),
            Reference::Unitary(u) => circuit_unitary(c) == *u,
        }
    }
}

/// One pass of cancellations and merges; returns the rule applied, if any.
fn cancel_merge_once(gates: &mut Vec<Prim>) -> Option<&'static str> {
    for i in 0..gates.len() {
        for j in i + 1..gates.len() {
            if let Some(r) = combine(gates[i], gates[j]) {
                // gates[i] commutes with everything strictly between
                let rule = match r {
                    None => {
                        gates.remove(j);
                        "cancel"
                    }
                    Some(g) => {
                        gates[j] = g;
                        "merge"
                    }
                };
                gates.remove(i);
                return Some(rule);
            }
            if !commutes(gates[i], gates[j]) {
                break;
            }
        }
    }
    None
}

fn cancel_merge(gates: &mut Vec<Prim>, n: usize, reference: &Reference, trace: &mut RewriteTrace) {
    loop {
        let before = gates.len();
        let Some(rule) = cancel_merge_once(gates) else {
            return;
        };
        assert!(
            reference.accepts(&to_circuit(n, gates)),
            "gate {rule} changed the circuit's function"
        );
        trace.push(rule, before, gates.len());
    }
}

/// Deletes inverse pairs and merges CV/CV+/CNOT pairs on the same lines,
/// moving gates past commuting neighbours, until nothing applies.
pub fn gate_cancel_merge(c: &Circuit) -> Result<Circuit, OptimizeError> {
    let mut gates = to_prims(c)?;
    let reference = Reference::of(c);
    cancel_merge(
        &mut gates,
        c.num_lines(),
        &reference,
        &mut RewriteTrace::default(),
    );
    Ok(to_circuit(c.num_lines(), &gates))
}

/// Longest stretch of the subject scanned for one template match.
const SCAN_LIMIT: usize = 64;

struct Candidate {
    variant: u32,
    rotation: u32,
    offset: i32,
    matched: Vec<usize>,
    size: usize,
}

fn try_match(
    gates: &[Prim],
    n: usize,
    start: usize,
    v: &Variant,
    rotation: usize,
) -> Option<(i32, Vec<usize>)> {
    let d = v.gates.len();
    let first = v.gates[rotation];
    let offset = i32::from(gates[start].min_line()) - i32::from(first.min_line());
    if offset < 0 || offset + i32::from(v.span) > n as i32 {
        return None;
    }
    if first.shifted(offset) != gates[start] {
        return None;
    }
    let mut matched = vec![start];
    let mut skipped: Vec<usize> = Vec::new();
    let mut j = start + 1;
    while matched.len() < d && j < gates.len() && j - start <= SCAN_LIMIT {
        let want = v.gates[(rotation + matched.len()) % d].shifted(offset);
        let g = gates[j];
        if g == want {
            if skipped.iter().all(|&s| commutes(gates[s], g)) {
                matched.push(j);
                j += 1;
                continue;
            }
            break;
        }
        if !commutes(g, want) {
            break;
        }
        skipped.push(j);
        j += 1;
    }
    (2 * matched.len() > d).then_some((offset, matched))
}

fn candidates(gates: &[Prim], n: usize, index: &Index) -> Vec<Candidate> {
    let mut out = Vec::new();
    for start in 0..gates.len() {
        let Some(list) = index.by_shape.get(&gates[start].shape()) else {
            continue;
        };
        for &(vi, r) in list {
            let v = &index.variants[vi as usize];
            if let Some((offset, matched)) = try_match(gates, n, start, v, r as usize) {
                out.push(Candidate {
                    variant: vi,
                    rotation: r,
                    offset,
                    matched,
                    size: v.gates.len(),
                });
            }
        }
    }
    // largest template first, then leftmost, then the biggest saving
    out.sort_by_key(|c| {
        (
            std::cmp::Reverse(c.size),
            c.matched[0],
            std::cmp::Reverse(c.matched.len()),
        )
    });
    out
}

fn rewrite(gates: &[Prim], index: &Index, c: &Candidate) -> Vec<Prim> {
    let v = &index.variants[c.variant as usize];
    let d = v.gates.len();
    let m = c.matched.len();
    let (first, last) = (c.matched[0], *c.matched.last().unwrap());
    let mut out = Vec::with_capacity(gates.len());
    out.extend_from_slice(&gates[..first]);
    for k in (m..d).rev() {
        let g = v.gates[(c.rotation as usize + k) % d];
        out.push(g.inverse().shifted(c.offset));
    }
    out.extend(
        (first..=last)
            .filter(|i| c.matched.binary_search(i).is_err())
            .map(|i| gates[i]),
    );
    out.extend_from_slice(&gates[last + 1..]);
    out
}

/// Applies the best accepted template rewrite; `None` if nothing matched.
fn reduce_once(
    gates: &[Prim],
    n: usize,
    base: &TemplateBase,
    reference: &Reference,
) -> Option<(Vec<Prim>, MatchResult)> {
    let index = &base.index;
    for cand in candidates(gates, n, index) {
        let next = rewrite(gates, index, &cand);
        if !reference.accepts(&to_circuit(n, &next)) {
            continue;
        }
        let v = &index.variants[cand.variant as usize];
        let m = MatchResult {
            template: index.names[v.template].clone(),
            indices: cand.matched,
            reversed: v.reversed,
            reflected: v.reflected,
            offset: cand.offset,
            rotation: cand.rotation as usize,
        };
        return Some((next, m));
    }
    None
}

/// Repeatedly replaces template windows until no template matches.
pub fn match_and_reduce(
    c: &Circuit,
    base: &TemplateBase,
) -> Result<(Circuit, RewriteTrace), OptimizeError> {
    let n = c.num_lines();
    let mut gates = to_prims(c)?;
    let reference = Reference::of(c);
    let mut trace = RewriteTrace::default();
    while let Some((next, m)) = reduce_once(&gates, n, base, &reference) {
        trace.push(m.template, gates.len(), next.len());
        gates = next;
    }
    Ok((to_circuit(n, &gates), trace))
}

/// Alternates cancellation/merging with template reduction to a fixpoint.
/// Every intermediate circuit is checked against the input's function, and
/// non-entangling inputs stay non-entangling.
pub fn optimize(
    c: &Circuit,
    base: &TemplateBase,
) -> Result<(Circuit, RewriteTrace), OptimizeError> {
    let n = c.num_lines();
    let mut gates = to_prims(c)?;
    let reference = Reference::of(c);
    let mut trace = RewriteTrace::default();
    loop {
        cancel_merge(&mut gates, n, &reference, &mut trace);
        match reduce_once(&gates, n, base, &reference) {
            Some((next, m)) => {
                trace.push(m.template, gates.len(), next.len());
                gates = next;
            }
            None => break,
        }
    }
    Ok((to_circuit(n, &gates), trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::equivalent;

    fn circ(n: usize, gates: impl IntoIterator<Item = Gate>) -> Circuit {
        Circuit::from_gates(n, gates).unwrap()
    }

    #[test]
    fn cancel_and_merge_examples() {
        let c = circ(2, [Gate::cv(0, 1), Gate::cv(0, 1)]);
        assert_eq!(gate_cancel_merge(&c).unwrap().gates(), [Gate::cnot(0, 1)]);
        let c = circ(2, [Gate::cnot(0, 1), Gate::cnot(0, 1)]);
        assert!(gate_cancel_merge(&c).unwrap().is_empty());
        let c = circ(3, [Gate::cv(0, 1), Gate::cnot(1, 2), Gate::cvdg(0, 1)]);
        assert_eq!(gate_cancel_merge(&c).unwrap(), c);
        // through a commuting gate on a shared control
        let c = circ(3, [Gate::cv(1, 2), Gate::cnot(1, 0), Gate::cvdg(1, 2)]);
        assert_eq!(gate_cancel_merge(&c).unwrap().gates(), [Gate::cnot(1, 0)]);
    }

    #[test]
    fn six_cnot_template_removes_swap_pairs() {
        let base = TemplateBase::builtin();
        // four alternating CNOTs equal the other two in reverse
        let c = circ(
            2,
            [
                Gate::cnot(0, 1),
                Gate::cnot(1, 0),
                Gate::cnot(0, 1),
                Gate::cnot(1, 0),
            ],
        );
        let (out, trace) = match_and_reduce(&c, &base).unwrap();
        assert_eq!(out.len(), 2);
        assert!(equivalent(&out, &c).unwrap());
        assert_eq!(trace.steps[0].rule, "cnot-6");
    }

    #[test]
    fn unmatched_circuit_is_unchanged() {
        let base = TemplateBase::builtin();
        let c = circ(3, [Gate::cnot(0, 1), Gate::cv(1, 2), Gate::not(0)]);
        let (out, trace) = optimize(&c, &base).unwrap();
        assert_eq!(out, c);
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn rejects_toffoli() {
        let c = circ(3, [Gate::toffoli(0, 1, 2)]);
        assert!(optimize(&c, &TemplateBase::builtin()).is_err());
    }
}
