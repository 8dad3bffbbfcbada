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

//! Compact two-line gates for the rewriting engine.

use crate::circuit::{Gate, GateKind};

pub(crate) const NO_LINE: u8 = u8::MAX;

/// A gate with at most one control. `c` is [`NO_LINE`] for NOT; for SWAP,
/// `c` and `t` are its two lines in increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Prim {
    pub kind: GateKind,
    pub c: u8,
    pub t: u8,
}

impl Prim {
    pub fn from_gate(g: &Gate) -> Option<Prim> {
        let line = |l: usize| u8::try_from(l).ok().filter(|&x| x != NO_LINE);
        match g.kind() {
            GateKind::Not => Some(Prim {
                kind: GateKind::Not,
                c: NO_LINE,
                t: line(g.target().get())?,
            }),
            GateKind::Cnot | GateKind::ControlledV | GateKind::ControlledVdg => Some(Prim {
                kind: g.kind(),
                c: line(g.controls()[0].get())?,
                t: line(g.target().get())?,
            }),
            GateKind::Swap => {
                let (a, b) = g.pair();
                Some(Prim {
                    kind: GateKind::Swap,
                    c: line(a.min(b))?,
                    t: line(a.max(b))?,
                })
            }
            GateKind::Toffoli | GateKind::Mct => None,
        }
    }

    pub fn to_gate(self) -> Gate {
        match self.kind {
            GateKind::Not => Gate::not(self.t as usize),
            k => Gate::two_qubit(k, self.c as usize, self.t as usize),
        }
    }

    pub fn min_line(self) -> u8 {
        if self.c == NO_LINE {
            self.t
        } else {
            self.c.min(self.t)
        }
    }

    pub fn max_line(self) -> u8 {
        if self.c == NO_LINE {
            self.t
        } else {
            self.c.max(self.t)
        }
    }

    /// Shifts every line by `offset`; the caller keeps lines in range.
    pub fn shifted(self, offset: i32) -> Prim {
        let s = |l: u8| (i32::from(l) + offset) as u8;
        Prim {
            kind: self.kind,
            c: if self.c == NO_LINE {
                NO_LINE
            } else {
                s(self.c)
            },
            t: s(self.t),
        }
    }

    /// Mirrors lines `0..span` top to bottom.
    pub fn reflected(self, span: u8) -> Prim {
        let r = |l: u8| span - 1 - l;
        match self.kind {
            GateKind::Not => Prim {
                t: r(self.t),
                ..self
            },
            GateKind::Swap => Prim {
                kind: GateKind::Swap,
                c: r(self.t),
                t: r(self.c),
            },
            _ => Prim {
                c: r(self.c),
                t: r(self.t),
                ..self
            },
        }
    }

    pub fn inverse(self) -> Prim {
        let kind = match self.kind {
            GateKind::ControlledV => GateKind::ControlledVdg,
            GateKind::ControlledVdg => GateKind::ControlledV,
            k => k,
        };
        Prim { kind, ..self }
    }

    /// Translation-invariant shape: the gate moved to line 0.
    pub fn shape(self) -> Prim {
        self.shifted(-i32::from(self.min_line()))
    }

    fn touches(self, l: u8) -> bool {
        self.t == l || self.c == l
    }

    fn disjoint(self, other: Prim) -> bool {
        !other.touches(self.t) && (self.c == NO_LINE || !other.touches(self.c))
    }

    fn targets_hit_controls(self, other: Prim) -> bool {
        other.c != NO_LINE && self.t == other.c
    }
}

/// Syntactic commutation: gates on disjoint lines commute, identical SWAPs
/// commute, and otherwise two gates commute when no target of one is a
/// control of the other. Every target action is a polynomial in X and every
/// control is diagonal, so the rule is sound.
pub(crate) fn commutes(a: Prim, b: Prim) -> bool {
    if a.disjoint(b) {
        return true;
    }
    if a.kind == GateKind::Swap || b.kind == GateKind::Swap {
        return a == b;
    }
    !a.targets_hit_controls(b) && !b.targets_hit_controls(a)
}

/// Result of fusing two gates on the same lines: `Some(None)` when they
/// cancel, `Some(Some(g))` when they merge into `g`.
pub(crate) fn combine(a: Prim, b: Prim) -> Option<Option<Prim>> {
    use GateKind::*;
    if a.c != b.c || a.t != b.t {
        return None;
    }
    let merged = |kind| Some(Some(Prim { kind, ..a }));
    match (a.kind, b.kind) {
        (Not, Not) | (Cnot, Cnot) | (Swap, Swap) => Some(None),
        (ControlledV, ControlledVdg) | (ControlledVdg, ControlledV) => Some(None),
        (ControlledV, ControlledV) | (ControlledVdg, ControlledVdg) => merged(Cnot),
        (Cnot, ControlledV) | (ControlledV, Cnot) => merged(ControlledVdg),
        (Cnot, ControlledVdg) | (ControlledVdg, Cnot) => merged(ControlledV),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::lnn_gate_library;
    use crate::semantics::gate_unitary;

    fn all_prims(n: usize) -> Vec<Prim> {
        let mut v: Vec<Prim> = lnn_gate_library(n)
            .iter()
            .map(|g| Prim::from_gate(g).unwrap())
            .collect();
        for a in 0..n - 1 {
            v.push(Prim::from_gate(&Gate::swap(a, a + 1)).unwrap());
        }
        v
    }

    #[test]
    fn commutation_matches_unitaries() {
        let prims = all_prims(3);
        for &a in &prims {
            for &b in &prims {
                let ua = gate_unitary(&a.to_gate(), 3);
                let ub = gate_unitary(&b.to_gate(), 3);
                let oracle = ua.matmul(&ub) == ub.matmul(&ua);
                assert_eq!(commutes(a, b), oracle, "{} / {}", a.to_gate(), b.to_gate());
            }
        }
    }

    #[test]
    fn combination_is_exact() {
        let prims = all_prims(3);
        for &a in &prims {
            for &b in &prims {
                let Some(r) = combine(a, b) else { continue };
                let both = gate_unitary(&b.to_gate(), 3).matmul(&gate_unitary(&a.to_gate(), 3));
                match r {
                    None => assert!(both.is_identity()),
                    Some(g) => assert_eq!(both, gate_unitary(&g.to_gate(), 3)),
                }
            }
        }
    }

    #[test]
    fn reflection_and_shape() {
        let p = Prim::from_gate(&Gate::cv(2, 3)).unwrap();
        assert_eq!(p.shape().to_gate(), Gate::cv(0, 1));
        assert_eq!(p.reflected(5).to_gate(), Gate::cv(2, 1));
        let s = Prim::from_gate(&Gate::swap(1, 0)).unwrap();
        assert_eq!(s.reflected(3).to_gate(), Gate::swap(1, 2));
    }
}
