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

//! Gate and circuit data model.
//!
//! Lines are numbered from 0 at the top of a circuit diagram. A circuit is an
//! ordered gate list applied left to right.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("circuit must have at least one line")]
    NoLines,
    #[error("line {line} used more than once in a {kind} gate")]
    DuplicateLine { kind: GateKind, line: usize },
    #[error("line {line} out of range for a circuit with {num_lines} lines")]
    LineOutOfRange { line: usize, num_lines: usize },
    #[error("{kind} gate cannot have {controls} controls and {targets} targets")]
    Arity {
        kind: GateKind,
        controls: usize,
        targets: usize,
    },
    #[error("{0} is not a two-qubit gate")]
    NotTwoQubit(GateKind),
    #[error("{0} is not a Toffoli gate")]
    NotToffoli(GateKind),
    #[error("quantum cost is only defined for primitive-level circuits ({0} gate found)")]
    NotPrimitive(GateKind),
    #[error("line counts differ: {0} vs {1}")]
    LineCountMismatch(usize, usize),
}

/// Position of a circuit line, 0-based from the top.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LineIndex(u32);

impl LineIndex {
    pub fn new(index: usize) -> Self {
        LineIndex(u32::try_from(index).expect("line index exceeds u32"))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for LineIndex {
    fn from(i: usize) -> Self {
        LineIndex::new(i)
    }
}

impl fmt::Display for LineIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GateKind {
    Not,
    Cnot,
    /// Two controls.
    Toffoli,
    /// Three or more controls.
    Mct,
    ControlledV,
    ControlledVdg,
    Swap,
}

impl GateKind {
    /// Quantum primitives plus SWAP; everything except Toffoli/Mct.
    pub fn is_primitive(self) -> bool {
        !matches!(self, GateKind::Toffoli | GateKind::Mct)
    }

    pub fn is_two_qubit(self) -> bool {
        matches!(
            self,
            GateKind::Cnot | GateKind::ControlledV | GateKind::ControlledVdg | GateKind::Swap
        )
    }

    fn check_arity(self, controls: usize, targets: usize) -> bool {
        match self {
            GateKind::Not => controls == 0 && targets == 1,
            GateKind::Cnot | GateKind::ControlledV | GateKind::ControlledVdg => {
                controls == 1 && targets == 1
            }
            GateKind::Toffoli => controls == 2 && targets == 1,
            GateKind::Mct => controls >= 3 && targets == 1,
            GateKind::Swap => controls == 0 && targets == 2,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GateKind::Not => "NOT",
            GateKind::Cnot => "CNOT",
            GateKind::Toffoli => "Toffoli",
            GateKind::Mct => "MCT",
            GateKind::ControlledV => "CV",
            GateKind::ControlledVdg => "CV+",
            GateKind::Swap => "SWAP",
        };
        f.write_str(s)
    }
}

/// A single gate. Controls are kept sorted; a SWAP has two targets and no
/// controls, every other kind has exactly one target.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Gate {
    kind: GateKind,
    controls: Vec<LineIndex>,
    targets: [LineIndex; 2],
}

impl Gate {
    pub fn new(
        kind: GateKind,
        controls: impl IntoIterator<Item = usize>,
        targets: &[usize],
    ) -> Result<Gate, CircuitError> {
        let mut controls: Vec<LineIndex> = controls.into_iter().map(LineIndex::new).collect();
        if !kind.check_arity(controls.len(), targets.len()) {
            return Err(CircuitError::Arity {
                kind,
                controls: controls.len(),
                targets: targets.len(),
            });
        }
        controls.sort_unstable();
        let mut seen: Vec<usize> = controls.iter().map(|c| c.get()).collect();
        seen.extend_from_slice(targets);
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(CircuitError::DuplicateLine { kind, line: w[0] });
        }
        let t0 = LineIndex::new(targets[0]);
        let t1 = targets.get(1).map_or(t0, |&t| LineIndex::new(t));
        Ok(Gate {
            kind,
            controls,
            targets: [t0, t1],
        })
    }

    /// Multiple-control Toffoli with the kind chosen from the control count
    /// (0 → NOT, 1 → CNOT, 2 → Toffoli, more → MCT).
    pub fn mct(
        controls: impl IntoIterator<Item = usize>,
        target: usize,
    ) -> Result<Gate, CircuitError> {
        let controls: Vec<usize> = controls.into_iter().collect();
        let kind = match controls.len() {
            0 => GateKind::Not,
            1 => GateKind::Cnot,
            2 => GateKind::Toffoli,
            _ => GateKind::Mct,
        };
        Gate::new(kind, controls, &[target])
    }

    /// # Panics
    /// The convenience constructors below panic when lines coincide.
    pub fn not(target: usize) -> Gate {
        Gate::new(GateKind::Not, [], &[target]).unwrap()
    }

    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::new(GateKind::Cnot, [control], &[target]).expect("invalid CNOT")
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Gate {
        Gate::new(GateKind::Toffoli, [c1, c2], &[target]).expect("invalid Toffoli")
    }

    pub fn cv(control: usize, target: usize) -> Gate {
        Gate::new(GateKind::ControlledV, [control], &[target]).expect("invalid CV")
    }

    pub fn cvdg(control: usize, target: usize) -> Gate {
        Gate::new(GateKind::ControlledVdg, [control], &[target]).expect("invalid CV+")
    }

    pub fn swap(a: usize, b: usize) -> Gate {
        Gate::new(GateKind::Swap, [], &[a, b]).expect("invalid SWAP")
    }

    /// A two-line gate of the same kind acting on other lines.
    pub(crate) fn two_qubit(kind: GateKind, control: usize, target: usize) -> Gate {
        match kind {
            GateKind::Swap => Gate::swap(control, target),
            _ => Gate::new(kind, [control], &[target]).expect("invalid two-qubit gate"),
        }
    }

    #[inline]
    pub fn kind(&self) -> GateKind {
        self.kind
    }

    #[inline]
    pub fn controls(&self) -> &[LineIndex] {
        &self.controls
    }

    /// The (first) target. For SWAP this is the first of the two lines.
    #[inline]
    pub fn target(&self) -> LineIndex {
        self.targets[0]
    }

    pub fn targets(&self) -> &[LineIndex] {
        if self.kind == GateKind::Swap {
            &self.targets
        } else {
            &self.targets[..1]
        }
    }

    /// Controls followed by targets.
    pub fn lines(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls
            .iter()
            .chain(self.targets().iter())
            .map(|l| l.get())
    }

    pub fn min_line(&self) -> usize {
        self.lines().min().unwrap()
    }

    pub fn max_line(&self) -> usize {
        self.lines().max().unwrap()
    }

    /// Nearest neighbour cost `|c - t| - 1` of a two-qubit gate.
    pub fn nnc(&self) -> Result<usize, CircuitError> {
        if !self.kind.is_two_qubit() {
            return Err(CircuitError::NotTwoQubit(self.kind));
        }
        let (a, b) = self.pair();
        Ok(a.abs_diff(b) - 1)
    }

    /// Control and target of a two-qubit gate (the two lines of a SWAP).
    pub(crate) fn pair(&self) -> (usize, usize) {
        match self.kind {
            GateKind::Swap => (self.targets[0].get(), self.targets[1].get()),
            _ => (self.controls[0].get(), self.targets[0].get()),
        }
    }

    /// True when the gate's lines form one contiguous block. For two-qubit
    /// gates this is `nnc == 0`; NOT gates are always adjacent.
    pub fn is_adjacent(&self) -> bool {
        let n = self.controls.len() + self.targets().len();
        self.max_line() - self.min_line() + 1 == n
    }

    pub fn inverse(&self) -> Gate {
        let mut g = self.clone();
        g.kind = match self.kind {
            GateKind::ControlledV => GateKind::ControlledVdg,
            GateKind::ControlledVdg => GateKind::ControlledV,
            k => k,
        };
        g
    }

    /// Same gate with every line mapped through `f`.
    pub fn map_lines(&self, mut f: impl FnMut(usize) -> usize) -> Gate {
        let controls: Vec<usize> = self.controls.iter().map(|c| f(c.get())).collect();
        let targets: Vec<usize> = self.targets().iter().map(|t| f(t.get())).collect();
        Gate::new(self.kind, controls, &targets).expect("line map must stay injective")
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.kind)?;
        let mut first = true;
        for l in self.lines() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{l}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateLevel {
    /// May contain Toffoli and MCT gates.
    Mct,
    /// NOT, CNOT, CV, CV+ and SWAP only.
    Primitive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum T3Case {
    /// Target outside the span of the controls.
    Case1,
    /// Target between the controls.
    Case2,
}

/// Free-line counts of a Toffoli gate. In case 1, `q` counts lines between the
/// controls and `p` lines between the nearer control and the target; in case 2,
/// `p` and `q` count lines between the target and the upper/lower control.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct T3Layout {
    pub case: T3Case,
    pub p: usize,
    pub q: usize,
}

pub fn t3_layout(gate: &Gate) -> Result<T3Layout, CircuitError> {
    if gate.kind() != GateKind::Toffoli {
        return Err(CircuitError::NotToffoli(gate.kind()));
    }
    let c1 = gate.controls()[0].get();
    let c2 = gate.controls()[1].get();
    let t = gate.target().get();
    Ok(if c1 < t && t < c2 {
        T3Layout {
            case: T3Case::Case2,
            p: t - c1 - 1,
            q: c2 - t - 1,
        }
    } else {
        let p = if t > c2 { t - c2 - 1 } else { c1 - t - 1 };
        T3Layout {
            case: T3Case::Case1,
            p,
            q: c2 - c1 - 1,
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Circuit {
    num_lines: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_lines: usize) -> Result<Circuit, CircuitError> {
        if num_lines == 0 {
            return Err(CircuitError::NoLines);
        }
        Ok(Circuit {
            num_lines,
            gates: Vec::new(),
        })
    }

    pub fn from_gates(
        num_lines: usize,
        gates: impl IntoIterator<Item = Gate>,
    ) -> Result<Circuit, CircuitError> {
        let mut c = Circuit::new(num_lines)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        let max = gate.max_line();
        if max >= self.num_lines {
            return Err(CircuitError::LineOutOfRange {
                line: max,
                num_lines: self.num_lines,
            });
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends all gates of `other`, which must have the same line count.
    pub fn append(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        if other.num_lines != self.num_lines {
            return Err(CircuitError::LineCountMismatch(
                self.num_lines,
                other.num_lines,
            ));
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    #[inline]
    pub fn num_lines(&self) -> usize {
        self.num_lines
    }

    #[inline]
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    pub fn level(&self) -> GateLevel {
        if self.gates.iter().all(|g| g.kind().is_primitive()) {
            GateLevel::Primitive
        } else {
            GateLevel::Mct
        }
    }

    /// Number of gates of a primitive-level circuit.
    pub fn quantum_cost(&self) -> Result<usize, CircuitError> {
        match self.gates.iter().find(|g| !g.kind().is_primitive()) {
            Some(g) => Err(CircuitError::NotPrimitive(g.kind())),
            None => Ok(self.gates.len()),
        }
    }

    /// Every gate acts on adjacent lines.
    pub fn is_lnn(&self) -> bool {
        self.gates.iter().all(Gate::is_adjacent)
    }

    /// Reversed gate order with CV and CV+ exchanged.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_lines: self.num_lines,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// The circuit mirrored top to bottom (line `i` becomes `n - 1 - i`).
    pub fn reflect(&self) -> Circuit {
        let n = self.num_lines;
        Circuit {
            num_lines: n,
            gates: self
                .gates
                .iter()
                .map(|g| g.map_lines(|l| n - 1 - l))
                .collect(),
        }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} lines]", self.num_lines)?;
        for g in &self.gates {
            write!(f, " {g}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nnc_of_two_qubit_gates() {
        assert_eq!(Gate::cnot(0, 1).nnc(), Ok(0));
        assert_eq!(Gate::cnot(0, 2).nnc(), Ok(1));
        assert_eq!(Gate::cnot(0, 5).nnc(), Ok(4));
        assert_eq!(Gate::cv(3, 1).nnc(), Ok(1));
        assert_eq!(Gate::swap(4, 0).nnc(), Ok(3));
        assert_eq!(
            Gate::toffoli(0, 1, 2).nnc(),
            Err(CircuitError::NotTwoQubit(GateKind::Toffoli))
        );
        assert!(Gate::not(0).nnc().is_err());
    }

    #[test]
    fn t3_layouts() {
        let l = t3_layout(&Gate::toffoli(0, 1, 5)).unwrap();
        assert_eq!((l.case, l.p, l.q), (T3Case::Case1, 3, 0));
        let l = t3_layout(&Gate::toffoli(0, 4, 2)).unwrap();
        assert_eq!((l.case, l.p, l.q), (T3Case::Case2, 1, 1));
        let l = t3_layout(&Gate::toffoli(0, 2, 1)).unwrap();
        assert_eq!((l.case, l.p, l.q), (T3Case::Case2, 0, 0));
        let l = t3_layout(&Gate::toffoli(3, 5, 0)).unwrap();
        assert_eq!((l.case, l.p, l.q), (T3Case::Case1, 2, 1));
        assert!(t3_layout(&Gate::cnot(0, 1)).is_err());
    }

    #[test]
    fn gate_validation() {
        assert!(matches!(
            Gate::new(GateKind::Cnot, [1], &[1]),
            Err(CircuitError::DuplicateLine { line: 1, .. })
        ));
        assert!(matches!(
            Gate::new(GateKind::Toffoli, [0], &[1]),
            Err(CircuitError::Arity { .. })
        ));
        assert!(Gate::new(GateKind::Mct, [0, 1], &[2]).is_err());
        assert_eq!(Gate::mct([0, 1, 2], 3).unwrap().kind(), GateKind::Mct);
        assert_eq!(Gate::mct([], 3).unwrap().kind(), GateKind::Not);
        assert!(Circuit::from_gates(2, [Gate::cnot(0, 2)]).is_err());
        assert!(Circuit::new(0).is_err());
    }

    #[test]
    fn cost_and_lnn() {
        let empty = Circuit::new(3).unwrap();
        assert_eq!(empty.quantum_cost(), Ok(0));
        assert!(empty.is_lnn());
        let swap =
            Circuit::from_gates(2, [Gate::cnot(0, 1), Gate::cnot(1, 0), Gate::cnot(0, 1)]).unwrap();
        assert_eq!(swap.quantum_cost(), Ok(3));
        assert!(swap.is_lnn());
        let far = Circuit::from_gates(3, [Gate::cnot(0, 2)]).unwrap();
        assert!(!far.is_lnn());
        let mct = Circuit::from_gates(3, [Gate::toffoli(0, 1, 2)]).unwrap();
        assert_eq!(mct.level(), GateLevel::Mct);
        assert!(mct.quantum_cost().is_err());
    }

    #[test]
    fn inverse_swaps_v_kinds() {
        let c = Circuit::from_gates(3, [Gate::cv(0, 1), Gate::cnot(1, 2)]).unwrap();
        let inv = c.inverse();
        assert_eq!(inv.gates(), &[Gate::cnot(1, 2), Gate::cvdg(0, 1)]);
        assert_eq!(inv.inverse(), c);
        let single = Circuit::from_gates(2, [Gate::cnot(0, 1)]).unwrap();
        assert_eq!(single.inverse(), single);
    }
}
