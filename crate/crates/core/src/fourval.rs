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

//! Four-valued simulation of non-entangling circuits.
//!
//! Starting from a computational basis state, a circuit built from NOT, CNOT,
//! CV, CV+, SWAP and MCT gates keeps every line in one of four exact
//! single-qubit states as long as no gate is conditioned on a line in
//! superposition:
//!
//! ```text
//! 0  = |0>        V0 = V|0> = (1+i)/2 (|0> - i|1>)
//! 1  = |1>        V1 = V|1> = (1+i)/2 (-i|0> + |1>)
//! ```
//!
//! A gate whose controls are all 1 except for at least one V-valued line
//! produces an entangled state, and simulation stops there. A control at 0
//! disables the gate outright. Because the four values are exact vectors, the
//! per-input images determine the unitary of a non-entangling circuit.

use crate::circuit::{Circuit, Gate, GateKind};
use crate::dyadic::DyadicGaussian;
use crate::semantics::{Permutation, UnitaryMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum LineValue {
    Zero = 0,
    One = 1,
    V0 = 2,
    V1 = 3,
}

impl LineValue {
    fn from_bits(bits: u64) -> LineValue {
        match bits & 3 {
            0 => LineValue::Zero,
            1 => LineValue::One,
            2 => LineValue::V0,
            _ => LineValue::V1,
        }
    }

    pub fn is_classical(self) -> bool {
        matches!(self, LineValue::Zero | LineValue::One)
    }

    /// Amplitudes of |0> and |1>.
    pub fn amplitudes(self) -> [DyadicGaussian; 2] {
        let h = DyadicGaussian::half_one_plus_i();
        let hmi = -&h.mul_i();
        match self {
            LineValue::Zero => [DyadicGaussian::one(), DyadicGaussian::zero()],
            LineValue::One => [DyadicGaussian::zero(), DyadicGaussian::one()],
            LineValue::V0 => [h, hmi],
            LineValue::V1 => [hmi, h],
        }
    }

    fn not(self) -> LineValue {
        match self {
            LineValue::Zero => LineValue::One,
            LineValue::One => LineValue::Zero,
            LineValue::V0 => LineValue::V1,
            LineValue::V1 => LineValue::V0,
        }
    }

    fn v(self) -> LineValue {
        match self {
            LineValue::Zero => LineValue::V0,
            LineValue::One => LineValue::V1,
            LineValue::V0 => LineValue::One,
            LineValue::V1 => LineValue::Zero,
        }
    }

    fn vdg(self) -> LineValue {
        match self {
            LineValue::Zero => LineValue::V1,
            LineValue::One => LineValue::V0,
            LineValue::V0 => LineValue::Zero,
            LineValue::V1 => LineValue::One,
        }
    }
}

/// Packed product state, two bits per line, line `l` at bits `2l..2l+2`.
pub type PackedState = u64;

pub const MAX_LINES: usize = 32;

#[inline]
pub fn line_value(state: PackedState, line: usize) -> LineValue {
    LineValue::from_bits(state >> (2 * line))
}

#[inline]
fn with_line(state: PackedState, line: usize, v: LineValue) -> PackedState {
    (state & !(3 << (2 * line))) | ((v as u64) << (2 * line))
}

/// The basis state `|x>` with line 0 as the most significant bit.
pub fn basis_state(num_lines: usize, x: usize) -> PackedState {
    (0..num_lines).fold(0, |s, l| {
        s | ((((x >> (num_lines - 1 - l)) & 1) as u64) << (2 * l))
    })
}

/// Applies one gate; `None` if the gate entangles.
#[inline]
pub fn step(state: PackedState, gate: &Gate) -> Option<PackedState> {
    let mut quantum_control = false;
    for c in gate.controls() {
        match line_value(state, c.get()) {
            LineValue::Zero => return Some(state),
            LineValue::One => {}
            _ => quantum_control = true,
        }
    }
    if quantum_control {
        return None;
    }
    let t = gate.target().get();
    let tv = line_value(state, t);
    Some(match gate.kind() {
        GateKind::Not | GateKind::Cnot | GateKind::Toffoli | GateKind::Mct => {
            with_line(state, t, tv.not())
        }
        GateKind::ControlledV => with_line(state, t, tv.v()),
        GateKind::ControlledVdg => with_line(state, t, tv.vdg()),
        GateKind::Swap => {
            let u = gate.targets()[1].get();
            let uv = line_value(state, u);
            with_line(with_line(state, t, uv), u, tv)
        }
    })
}

/// Images of all `2^n` basis inputs under a non-entangling circuit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FourValuedImage {
    num_lines: usize,
    states: Vec<PackedState>,
}

impl FourValuedImage {
    pub fn identity(num_lines: usize) -> Self {
        assert!(num_lines <= MAX_LINES);
        FourValuedImage {
            num_lines,
            states: (0..1usize << num_lines)
                .map(|x| basis_state(num_lines, x))
                .collect(),
        }
    }

    pub fn num_lines(&self) -> usize {
        self.num_lines
    }

    pub fn states(&self) -> &[PackedState] {
        &self.states
    }

    /// Applies `gate` to every image; `None` if any input becomes entangled.
    pub fn apply(&self, gate: &Gate) -> Option<Self> {
        let states = self
            .states
            .iter()
            .map(|&s| step(s, gate))
            .collect::<Option<Vec<_>>>()?;
        Some(FourValuedImage {
            num_lines: self.num_lines,
            states,
        })
    }

    pub fn apply_mut(&mut self, gate: &Gate) -> bool {
        for s in self.states.iter_mut() {
            match step(*s, gate) {
                Some(n) => *s = n,
                None => return false,
            }
        }
        true
    }

    /// The permutation realised when every output line is classical.
    pub fn as_permutation(&self) -> Option<Permutation> {
        let n = self.num_lines;
        let images = self
            .states
            .iter()
            .map(|&s| {
                (0..n).try_fold(0u32, |acc, l| match line_value(s, l) {
                    LineValue::Zero => Some(acc << 1),
                    LineValue::One => Some(acc << 1 | 1),
                    _ => None,
                })
            })
            .collect::<Option<Vec<_>>>()?;
        Permutation::new(images).ok()
    }

    /// The exact unitary, column `x` being the product state of input `x`.
    pub fn to_unitary(&self) -> UnitaryMatrix {
        let n = self.num_lines;
        let cols: Vec<Vec<DyadicGaussian>> = self
            .states
            .iter()
            .map(|&s| {
                let qubits: Vec<_> = (0..n).map(|l| line_value(s, l).amplitudes()).collect();
                crate::semantics::StateVector::product(&qubits)
                    .amps()
                    .to_vec()
            })
            .collect();
        UnitaryMatrix::from_columns(n, cols)
    }
}

/// Simulates the circuit; `None` if any basis input becomes entangled at any
/// point.
pub fn simulate(circuit: &Circuit) -> Option<FourValuedImage> {
    let mut img = FourValuedImage::identity(circuit.num_lines());
    circuit
        .gates()
        .iter()
        .all(|g| img.apply_mut(g))
        .then_some(img)
}

pub fn is_non_entangled(circuit: &Circuit) -> bool {
    simulate(circuit).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{circuit_unitary, StateVector};

    #[test]
    fn values_are_images_of_v() {
        for (input, via_v, via_vdg) in [
            (LineValue::Zero, LineValue::V0, LineValue::V1),
            (LineValue::One, LineValue::V1, LineValue::V0),
            (LineValue::V0, LineValue::One, LineValue::Zero),
            (LineValue::V1, LineValue::Zero, LineValue::One),
        ] {
            // control line 0 held at |1>, target on line 1
            let one = LineValue::One.amplitudes();
            let mut s = StateVector::product(&[one.clone(), input.amplitudes()]);
            s.apply(&Gate::cv(0, 1));
            assert_eq!(s, StateVector::product(&[one.clone(), via_v.amplitudes()]));
            let mut s = StateVector::product(&[one.clone(), input.amplitudes()]);
            s.apply(&Gate::cvdg(0, 1));
            assert_eq!(s, StateVector::product(&[one, via_vdg.amplitudes()]));
        }
    }

    #[test]
    fn quantum_control_entangles() {
        let c = Circuit::from_gates(2, [Gate::cv(0, 1), Gate::cnot(1, 0)]).unwrap();
        assert!(!is_non_entangled(&c));
        let ok =
            Circuit::from_gates(2, [Gate::cv(0, 1), Gate::cnot(0, 1), Gate::cvdg(0, 1)]).unwrap();
        let img = simulate(&ok).unwrap();
        assert_eq!(img.to_unitary(), circuit_unitary(&ok));
    }

    #[test]
    fn zero_control_disables_gate() {
        // line 0 in V0 but line 1 at |0>: Toffoli does nothing
        let s = with_line(basis_state(3, 0), 0, LineValue::V0);
        assert_eq!(step(s, &Gate::toffoli(0, 1, 2)), Some(s));
        let s1 = with_line(s, 1, LineValue::One);
        assert_eq!(step(s1, &Gate::toffoli(0, 1, 2)), None);
    }

    #[test]
    fn toffoli_permutation() {
        let c = Circuit::from_gates(3, [Gate::toffoli(0, 1, 2)]).unwrap();
        let p = simulate(&c).unwrap().as_permutation().unwrap();
        assert_eq!(p.images(), &[0, 1, 2, 3, 4, 5, 7, 6]);
    }
}
