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

//! Template discovery from minimal circuits.
//!
//! A window `W` whose proper sub-windows are all minimal but which is not
//! minimal itself yields the identity `W R^-1`, where `R` is a minimal
//! circuit for the same function. Such a template cannot be shortened by a
//! smaller one, because any `floor(d/2) + 1` consecutive gates inside `W`
//! are minimal. The search stays within non-entangling circuits, where the
//! four-valued images give exact minimal sizes.

use std::collections::BTreeSet;

use rustc_hash::FxHashMap;

use super::prim::Prim;
use super::rewrite::gate_cancel_merge;
use super::Template;
use crate::circuit::{Circuit, Gate};
use crate::search::{lnn_gate_library, Bfs, Exec, Limits, SearchSpace, SeparableSpace};

/// Minimal sizes of non-entangling circuits up to a depth.
pub struct DistanceOracle {
    bfs: Bfs<SeparableSpace>,
    location: FxHashMap<u64, (u8, u32)>,
}

impl DistanceOracle {
    pub fn new(num_lines: usize, max_depth: usize, exec: Exec) -> DistanceOracle {
        let mut bfs = Bfs::new(SeparableSpace::new(num_lines, lnn_gate_library(num_lines)));
        bfs.run(
            Limits {
                max_depth: Some(max_depth),
                ..Limits::default()
            },
            exec,
        );
        let mut location = FxHashMap::default();
        for (d, level) in bfs.levels().iter().enumerate() {
            for (i, &k) in level.keys.iter().enumerate() {
                location.insert(k, (d as u8, i as u32));
            }
        }
        DistanceOracle { bfs, location }
    }

    pub fn space(&self) -> &SeparableSpace {
        self.bfs.space()
    }

    pub fn max_depth(&self) -> usize {
        self.bfs.depth()
    }

    /// Minimal size of the state, or `None` when it lies deeper than the
    /// oracle was built.
    pub fn distance(&self, key: u64) -> Option<usize> {
        self.location.get(&key).map(|&(d, _)| d as usize)
    }

    /// The lexicographically smallest minimal circuit reaching `key`.
    pub fn witness(&self, key: u64) -> Option<Vec<Gate>> {
        let &(d, i) = self.location.get(&key)?;
        Some(self.bfs.path(d as usize, i as usize))
    }
}

/// Lexicographically smallest rotation, inversion, reflection and
/// translation of an identity sequence.
fn canonical(seq: &[Prim]) -> Vec<Prim> {
    let lo = seq.iter().map(|p| p.min_line()).min().unwrap_or(0);
    let hi = seq.iter().map(|p| p.max_line()).max().unwrap_or(0);
    let base: Vec<Prim> = seq.iter().map(|p| p.shifted(-i32::from(lo))).collect();
    let span = hi - lo + 1;
    let inv: Vec<Prim> = base.iter().rev().map(|p| p.inverse()).collect();
    let mut best: Option<Vec<Prim>> = None;
    for s in [&base, &inv] {
        for reflect in [false, true] {
            let v: Vec<Prim> = if reflect {
                s.iter().map(|p| p.reflected(span)).collect()
            } else {
                s.to_vec()
            };
            for r in 0..v.len() {
                let rot: Vec<Prim> = v[r..].iter().chain(&v[..r]).copied().collect();
                if best.as_ref().is_none_or(|b| rot < *b) {
                    best = Some(rot);
                }
            }
        }
    }
    best.unwrap_or_default()
}

struct Finder<'a> {
    oracle: &'a DistanceOracle,
    library: Vec<Gate>,
    max_size: usize,
    found: BTreeSet<Vec<Prim>>,
}

impl Finder<'_> {
    fn visit(&mut self, seq: &mut Vec<Gate>, full: u64, tail: u64) {
        let space = self.oracle.space();
        let len = seq.len();
        for gi in 0..self.library.len() {
            let g = self.library[gi].clone();
            let Some(full2) = space.apply_gate(full, &g) else {
                continue;
            };
            let tail2 = if len == 0 {
                tail
            } else {
                match space.apply_gate(tail, &g) {
                    Some(t) => t,
                    None => continue,
                }
            };
            let Some(cost) = self.oracle.distance(full2) else {
                continue;
            };
            seq.push(g);
            if cost == len + 1 {
                if 2 * (len + 1) <= self.max_size {
                    self.visit(seq, full2, tail2);
                }
            } else if self.oracle.distance(tail2) == Some(len) && len + 1 + cost <= self.max_size {
                self.record(seq, full2);
            }
            seq.pop();
        }
    }

    fn record(&mut self, window: &[Gate], key: u64) {
        let n = self.oracle.space().num_lines();
        let w = Circuit::from_gates(n, window.iter().cloned()).expect("library gates");
        // already handled by cancellation, merging and commuting moves
        if gate_cancel_merge(&w).expect("primitive").len() < w.len() {
            return;
        }
        let witness = self.oracle.witness(key).expect("reached state");
        let prims: Vec<Prim> = window
            .iter()
            .chain(witness.iter().rev())
            .enumerate()
            .map(|(i, g)| {
                let p = Prim::from_gate(g).expect("library gate");
                if i < window.len() {
                    p
                } else {
                    p.inverse()
                }
            })
            .collect();
        self.found.insert(canonical(&prims));
    }
}

/// Discovers identity templates of at most `max_size` gates on
/// `line_count <= 3` lines, one per equivalence class under rotation,
/// inversion, reflection and translation. Templates that only restate gate
/// cancellation, merging or commutation are left out.
pub fn find_templates(max_size: usize, line_count: usize) -> Vec<Template> {
    find_templates_with(max_size, line_count, Exec::Parallel)
}

pub(crate) fn find_templates_with(max_size: usize, line_count: usize, exec: Exec) -> Vec<Template> {
    let oracle = DistanceOracle::new(line_count, max_size / 2 + 1, exec);
    let mut finder = Finder {
        oracle: &oracle,
        library: lnn_gate_library(line_count),
        max_size,
        found: BTreeSet::new(),
    };
    let root = oracle.space().root();
    finder.visit(&mut Vec::new(), root, root);
    let mut out: Vec<Vec<Prim>> = finder.found.into_iter().collect();
    out.sort_by_key(|t| t.len());
    out.iter()
        .enumerate()
        .map(|(i, seq)| {
            let lines = seq.iter().map(|p| p.max_line()).max().unwrap_or(0) as usize + 1;
            let c = Circuit::from_gates(lines, seq.iter().map(|p| p.to_gate())).expect("fits");
            Template::new(format!("found-{}-{i}", seq.len()), c).expect("discovered identity")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::circuit_unitary;

    #[test]
    fn small_sizes() {
        // pairs and merges are covered by the cancellation rules
        assert!(find_templates_with(3, 2, Exec::Sequential).is_empty());
        let six = find_templates_with(6, 2, Exec::Sequential);
        assert!(six
            .iter()
            .all(|t| circuit_unitary(t.circuit()).is_identity()));
        let cnot6: Vec<Prim> = [(0, 1), (1, 0), (0, 1), (1, 0), (0, 1), (1, 0)]
            .iter()
            .map(|&(c, t)| Prim::from_gate(&Gate::cnot(c, t)).unwrap())
            .collect();
        let want = canonical(&cnot6);
        assert!(six.iter().any(|t| {
            let p: Vec<Prim> = t
                .circuit()
                .gates()
                .iter()
                .map(|g| Prim::from_gate(g).unwrap())
                .collect();
            p == want
        }));
    }

    #[test]
    fn canonical_is_invariant() {
        let seq: Vec<Prim> = [Gate::cnot(1, 2), Gate::cv(2, 1), Gate::not(1)]
            .iter()
            .map(|g| Prim::from_gate(g).unwrap())
            .collect();
        let rotated: Vec<Prim> = seq[1..].iter().chain(&seq[..1]).copied().collect();
        let inv: Vec<Prim> = seq.iter().rev().map(|p| p.inverse()).collect();
        let refl: Vec<Prim> = seq.iter().map(|p| p.reflected(3)).collect();
        let c = canonical(&seq);
        assert_eq!(canonical(&rotated), c);
        assert_eq!(canonical(&inv), c);
        assert_eq!(canonical(&refl), c);
    }
}
