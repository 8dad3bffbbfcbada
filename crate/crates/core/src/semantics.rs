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

//! Exact simulation over dyadic Gaussian amplitudes.
//!
//! Basis index convention: line 0 is the most significant bit, so on three
//! lines `|110>` is index 6.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, GateKind};
use crate::dyadic::DyadicGaussian;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermutationError {
    #[error("permutation length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("image {0} repeated or out of range")]
    NotBijective(u32),
}

/// A reversible Boolean function as a bijection on `0..2^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self, PermutationError> {
        let len = images.len();
        if !len.is_power_of_two() {
            return Err(PermutationError::NotPowerOfTwo(len));
        }
        let mut seen = vec![false; len];
        for &x in &images {
            match seen.get_mut(x as usize) {
                Some(s) if !*s => *s = true,
                _ => return Err(PermutationError::NotBijective(x)),
            }
        }
        Ok(Permutation { images })
    }

    pub fn identity(num_lines: usize) -> Self {
        Permutation {
            images: (0..1u32 << num_lines).collect(),
        }
    }

    pub fn num_lines(&self) -> usize {
        self.images.len().trailing_zeros() as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Permutation) -> Permutation {
        Permutation {
            images: self.images.iter().map(|&x| next.apply(x)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }
}

#[inline]
fn line_mask(num_lines: usize, line: usize) -> usize {
    1 << (num_lines - 1 - line)
}

/// Applies `gate` to a vector of `2^n` amplitudes in place.
pub(crate) fn apply_gate(amps: &mut [DyadicGaussian], num_lines: usize, gate: &Gate) {
    let cmask: usize = gate
        .controls()
        .iter()
        .map(|c| line_mask(num_lines, c.get()))
        .sum();
    let t = line_mask(num_lines, gate.target().get());
    match gate.kind() {
        GateKind::Not | GateKind::Cnot | GateKind::Toffoli | GateKind::Mct => {
            for i in 0..amps.len() {
                if i & t == 0 && i & cmask == cmask {
                    amps.swap(i, i | t);
                }
            }
        }
        GateKind::Swap => {
            let u = line_mask(num_lines, gate.targets()[1].get());
            for i in 0..amps.len() {
                if i & t != 0 && i & u == 0 {
                    amps.swap(i, i ^ t ^ u);
                }
            }
        }
        GateKind::ControlledV | GateKind::ControlledVdg => {
            // V = (1+i)/2 [[1, -i], [-i, 1]],  V+ = (1-i)/2 [[1, i], [i, 1]]
            let dagger = gate.kind() == GateKind::ControlledVdg;
            let h = if dagger {
                DyadicGaussian::new(1, -1, 1)
            } else {
                DyadicGaussian::half_one_plus_i()
            };
            for i in 0..amps.len() {
                if i & t == 0 && i & cmask == cmask {
                    let j = i | t;
                    let (x0, x1) = (&amps[i], &amps[j]);
                    let (ix0, ix1) = (x0.mul_i(), x1.mul_i());
                    let (n0, n1) = if dagger {
                        (x0 + &ix1, &ix0 + x1)
                    } else {
                        (x0 - &ix1, x1 - &ix0)
                    };
                    amps[i] = &h * &n0;
                    amps[j] = &h * &n1;
                }
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateVector {
    num_lines: usize,
    amps: Vec<DyadicGaussian>,
}

impl StateVector {
    pub fn basis(num_lines: usize, index: usize) -> Self {
        let mut amps = vec![DyadicGaussian::zero(); 1 << num_lines];
        amps[index] = DyadicGaussian::one();
        StateVector { num_lines, amps }
    }

    /// Amplitudes need not be normalised; separability does not depend on
    /// scale.
    pub fn from_amps(num_lines: usize, amps: Vec<DyadicGaussian>) -> Self {
        assert_eq!(amps.len(), 1 << num_lines, "amplitude count must be 2^n");
        StateVector { num_lines, amps }
    }

    /// Tensor product of single-qubit states, line 0 first.
    pub fn product(qubits: &[[DyadicGaussian; 2]]) -> Self {
        let mut amps = vec![DyadicGaussian::one()];
        for q in qubits {
            amps = amps.iter().flat_map(|a| [a * &q[0], a * &q[1]]).collect();
        }
        StateVector {
            num_lines: qubits.len(),
            amps,
        }
    }

    pub fn num_lines(&self) -> usize {
        self.num_lines
    }

    pub fn amps(&self) -> &[DyadicGaussian] {
        &self.amps
    }

    pub fn apply(&mut self, gate: &Gate) {
        apply_gate(&mut self.amps, self.num_lines, gate);
    }

    /// Sum of squared magnitudes.
    pub fn norm_sqr(&self) -> DyadicGaussian {
        self.amps
            .iter()
            .fold(DyadicGaussian::zero(), |acc, a| &acc + &a.norm_sqr())
    }

    /// True iff the state is a tensor product of single-qubit states.
    ///
    /// The leading qubit factors off iff the two halves of the amplitude
    /// vector are proportional, i.e. every 2x2 minor `x0[i] x1[j] - x0[j] x1[i]`
    /// vanishes; the remaining factor is then either (non-zero) half.
    pub fn is_separable(&self) -> bool {
        let mut cur: Vec<DyadicGaussian> = self.amps.clone();
        while cur.len() > 2 {
            let half = cur.len() / 2;
            let (x0, x1) = cur.split_at(half);
            let Some(p) = (0..half).find(|&i| !x0[i].is_zero() || !x1[i].is_zero()) else {
                return true;
            };
            // rank <= 1 iff every column is proportional to the pivot column
            for j in 0..half {
                if &x0[p] * &x1[j] != &x0[j] * &x1[p] {
                    return false;
                }
            }
            cur = if x0.iter().any(|a| !a.is_zero()) {
                x0.to_vec()
            } else {
                x1.to_vec()
            };
        }
        true
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.amps.iter()).finish()
    }
}

/// A `2^n x 2^n` unitary stored column by column.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnitaryMatrix {
    num_lines: usize,
    dim: usize,
    entries: Vec<DyadicGaussian>,
}

impl UnitaryMatrix {
    pub fn identity(num_lines: usize) -> Self {
        let dim = 1 << num_lines;
        let mut entries = vec![DyadicGaussian::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = DyadicGaussian::one();
        }
        UnitaryMatrix {
            num_lines,
            dim,
            entries,
        }
    }

    pub(crate) fn from_columns(num_lines: usize, cols: Vec<Vec<DyadicGaussian>>) -> Self {
        let dim = 1 << num_lines;
        assert_eq!(cols.len(), dim);
        let entries: Vec<_> = cols.into_iter().flatten().collect();
        assert_eq!(entries.len(), dim * dim);
        UnitaryMatrix {
            num_lines,
            dim,
            entries,
        }
    }

    pub fn num_lines(&self) -> usize {
        self.num_lines
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &DyadicGaussian {
        &self.entries[col * self.dim + row]
    }

    pub fn column(&self, col: usize) -> &[DyadicGaussian] {
        &self.entries[col * self.dim..(col + 1) * self.dim]
    }

    /// Left-multiplies by the gate's matrix (the gate is applied after `self`).
    pub fn apply(&mut self, gate: &Gate) {
        for col in self.entries.chunks_mut(self.dim) {
            apply_gate(col, self.num_lines, gate);
        }
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        assert_eq!(self.dim, rhs.dim);
        let dim = self.dim;
        let mut entries = vec![DyadicGaussian::zero(); dim * dim];
        for c in 0..dim {
            for k in 0..dim {
                let b = rhs.get(k, c);
                if b.is_zero() {
                    continue;
                }
                for r in 0..dim {
                    let a = self.get(r, k);
                    if !a.is_zero() {
                        let e = &mut entries[c * dim + r];
                        *e = &*e + &(a * b);
                    }
                }
            }
        }
        UnitaryMatrix {
            num_lines: self.num_lines,
            dim,
            entries,
        }
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        let dim = self.dim;
        let mut entries = vec![DyadicGaussian::zero(); dim * dim];
        for c in 0..dim {
            for r in 0..dim {
                entries[r * dim + c] = self.get(r, c).conj();
            }
        }
        UnitaryMatrix {
            num_lines: self.num_lines,
            dim,
            entries,
        }
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|c| {
            (0..self.dim).all(|r| {
                let e = self.get(r, c);
                if r == c {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    /// The permutation realised by this matrix when every column is a
    /// standard basis vector with entry exactly 1.
    pub fn as_permutation(&self) -> Option<Permutation> {
        let mut images = Vec::with_capacity(self.dim);
        for c in 0..self.dim {
            let col = self.column(c);
            let mut hit = None;
            for (r, e) in col.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                if hit.is_some() || !e.is_one() {
                    return None;
                }
                hit = Some(r as u32);
            }
            images.push(hit?);
        }
        Permutation::new(images).ok()
    }

    /// Like [`as_permutation`](Self::as_permutation) but accepts a common
    /// global phase on all entries.
    pub fn as_permutation_up_to_phase(&self) -> Option<Permutation> {
        let mut phase: Option<&DyadicGaussian> = None;
        let mut images = Vec::with_capacity(self.dim);
        for c in 0..self.dim {
            let mut hit = None;
            for (r, e) in self.column(c).iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                if hit.is_some() {
                    return None;
                }
                match phase {
                    None => phase = Some(e),
                    Some(p) if p == e => {}
                    Some(_) => return None,
                }
                hit = Some(r as u32);
            }
            images.push(hit?);
        }
        if !phase?.norm_sqr().is_one() {
            return None;
        }
        Permutation::new(images).ok()
    }

    /// Equality up to a global phase factor.
    pub fn eq_up_to_phase(&self, other: &UnitaryMatrix) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let Some(pivot) = self.entries.iter().position(|e| !e.is_zero()) else {
            return false;
        };
        let (a, b) = (&self.entries[pivot], &other.entries[pivot]);
        if b.is_zero() {
            return false;
        }
        // self = (a/b) other  <=>  b * self == a * other entrywise
        self.entries
            .iter()
            .zip(&other.entries)
            .all(|(x, y)| b * x == a * y)
    }
}

impl fmt::Debug for UnitaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "UnitaryMatrix({} lines)", self.num_lines)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

pub fn gate_unitary(gate: &Gate, num_lines: usize) -> UnitaryMatrix {
    assert!(gate.max_line() < num_lines, "gate outside the register");
    let mut u = UnitaryMatrix::identity(num_lines);
    u.apply(gate);
    u
}

/// Product of the gate matrices, the leftmost gate applied first. MCT gates
/// are simulated directly as permutations.
pub fn circuit_unitary(circuit: &Circuit) -> UnitaryMatrix {
    let mut u = UnitaryMatrix::identity(circuit.num_lines());
    for g in circuit.gates() {
        u.apply(g);
    }
    u
}

/// True when some computational basis input drives the circuit through a
/// non-separable state. Every intermediate state is checked, not only the
/// output: a circuit that realises a permutation can still entangle its
/// lines half way through.
pub fn is_entangled_circuit(circuit: &Circuit) -> bool {
    entangling_input(circuit).is_some()
}

/// The smallest basis input that drives the circuit through a non-separable
/// state.
pub fn entangling_input(circuit: &Circuit) -> Option<usize> {
    let n = circuit.num_lines();
    (0..1usize << n).find(|&input| {
        let mut s = StateVector::basis(n, input);
        circuit.gates().iter().any(|g| {
            s.apply(g);
            !s.is_separable()
        })
    })
}

/// Exact functional equality of two circuits.
pub fn equivalent(a: &Circuit, b: &Circuit) -> Result<bool, CircuitError> {
    if a.num_lines() != b.num_lines() {
        return Err(CircuitError::LineCountMismatch(
            a.num_lines(),
            b.num_lines(),
        ));
    }
    Ok(circuit_unitary(a) == circuit_unitary(b))
}

/// Functional equality up to a global phase.
pub fn equivalent_up_to_phase(a: &Circuit, b: &Circuit) -> Result<bool, CircuitError> {
    if a.num_lines() != b.num_lines() {
        return Err(CircuitError::LineCountMismatch(
            a.num_lines(),
            b.num_lines(),
        ));
    }
    Ok(circuit_unitary(a).eq_up_to_phase(&circuit_unitary(b)))
}

/// The permutation a circuit realises, if any.
pub fn circuit_permutation(circuit: &Circuit) -> Option<Permutation> {
    circuit_unitary(circuit).as_permutation()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dg(a: i64, b: i64, k: u32) -> DyadicGaussian {
        DyadicGaussian::new(a, b, k)
    }

    fn v0() -> [DyadicGaussian; 2] {
        let h = DyadicGaussian::half_one_plus_i();
        [h.clone(), -&h.mul_i()]
    }

    fn circ(n: usize, gates: impl IntoIterator<Item = Gate>) -> Circuit {
        Circuit::from_gates(n, gates).unwrap()
    }

    #[test]
    fn v_squared_is_not() {
        let cv = gate_unitary(&Gate::cv(0, 1), 2);
        assert_eq!(cv.matmul(&cv), gate_unitary(&Gate::cnot(0, 1), 2));
        let cvdg = gate_unitary(&Gate::cvdg(0, 1), 2);
        assert!(cvdg.matmul(&cv).is_identity());
        // the control=1 block of CV^2 is X
        let sq = cv.matmul(&cv);
        assert!(sq.get(3, 2).is_one() && sq.get(2, 3).is_one());
    }

    #[test]
    fn v_entries_match_definition() {
        let u = gate_unitary(&Gate::cv(0, 1), 2);
        assert_eq!(*u.get(2, 2), dg(1, 1, 1));
        assert_eq!(*u.get(3, 2), dg(1, -1, 1));
        assert_eq!(*u.get(2, 3), dg(1, -1, 1));
        assert_eq!(*u.get(3, 3), dg(1, 1, 1));
        assert!(u.get(0, 0).is_one());
    }

    #[test]
    fn toffoli_swaps_six_and_seven() {
        let p = gate_unitary(&Gate::toffoli(0, 1, 2), 3)
            .as_permutation()
            .unwrap();
        assert_eq!(p.images(), &[0, 1, 2, 3, 4, 5, 7, 6]);
    }

    #[test]
    fn library_gates_are_unitary() {
        for g in [
            Gate::cv(2, 0),
            Gate::cvdg(1, 2),
            Gate::swap(0, 2),
            Gate::toffoli(0, 2, 1),
        ] {
            let u = gate_unitary(&g, 3);
            assert!(u.matmul(&u.adjoint()).is_identity(), "{g}");
        }
    }

    #[test]
    fn three_cnots_make_a_swap() {
        let c = circ(2, [Gate::cnot(0, 1), Gate::cnot(1, 0), Gate::cnot(0, 1)]);
        let p = circuit_permutation(&c).unwrap();
        assert_eq!(p.images(), &[0, 2, 1, 3]);
        assert_eq!(circuit_unitary(&c), gate_unitary(&Gate::swap(0, 1), 2));
    }

    #[test]
    fn permutation_extraction() {
        assert!(UnitaryMatrix::identity(2)
            .as_permutation()
            .unwrap()
            .is_identity());
        assert!(gate_unitary(&Gate::cv(0, 1), 2).as_permutation().is_none());
    }

    #[test]
    fn phase_variants() {
        let mut u = UnitaryMatrix::identity(1);
        for e in u.entries.iter_mut() {
            *e = e.mul_i();
        }
        assert!(u.as_permutation().is_none());
        assert!(u.as_permutation_up_to_phase().unwrap().is_identity());
        assert!(u.eq_up_to_phase(&UnitaryMatrix::identity(1)));
        assert!(!gate_unitary(&Gate::not(0), 1).eq_up_to_phase(&UnitaryMatrix::identity(1)));
    }

    #[test]
    fn separability() {
        let zero = [DyadicGaussian::one(), DyadicGaussian::zero()];
        let one = [DyadicGaussian::zero(), DyadicGaussian::one()];
        let s = StateVector::product(&[v0(), zero, one]);
        assert!(s.is_separable());
        assert!(s.norm_sqr().is_one());
        // (|00> + i|01> + i|10> + |11>)/2 : l1 l4 = 1/4, l2 l3 = -1/4
        let e = StateVector::from_amps(2, vec![dg(1, 0, 1), dg(0, 1, 1), dg(0, 1, 1), dg(1, 0, 1)]);
        assert!(!e.is_separable());
        let bell =
            StateVector::from_amps(2, vec![dg(1, 0, 0), dg(0, 0, 0), dg(0, 0, 0), dg(1, 0, 0)]);
        assert!(!bell.is_separable());
    }

    #[test]
    fn entangled_example_circuit() {
        // CNOT(0,1) CV(1,2) CNOT(0,1) CNOT(2,1)
        let c = circ(
            3,
            [
                Gate::cnot(0, 1),
                Gate::cv(1, 2),
                Gate::cnot(0, 1),
                Gate::cnot(2, 1),
            ],
        );
        assert!(is_entangled_circuit(&c));
        let mut s = StateVector::basis(3, 0b011);
        for g in c.gates() {
            s.apply(g);
        }
        assert!(!s.is_separable());
    }

    #[test]
    fn equivalence_checks_line_count() {
        let a = circ(2, [Gate::cnot(0, 1)]);
        let b = circ(2, [Gate::cnot(1, 0)]);
        assert_eq!(equivalent(&a, &b), Ok(false));
        assert_eq!(equivalent(&a, &a), Ok(true));
        assert!(equivalent(&a, &circ(3, [])).is_err());
    }
}
