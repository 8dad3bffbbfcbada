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

//! Exhaustive searches for minimal circuits on three lines.

mod engine;
mod spaces;

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use engine::{Bfs, Exec, Level, Limits, SearchSpace, StopReason};
pub use spaces::{MctSpace, SeparableSpace, UnitarySpace};

use crate::circuit::{Circuit, Gate, GateKind};
use crate::semantics::Permutation;

/// What counts as two circuits realising the same state during search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Equal unitaries.
    Exact,
    /// Unitaries equal up to a global phase.
    Phase,
    /// Circuits that never entangle a basis input, compared by their
    /// four-valued images.
    #[default]
    Separable,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Exact => "exact",
            Convention::Phase => "phase",
            Convention::Separable => "separable",
        })
    }
}

impl FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(Convention::Exact),
            "phase" => Ok(Convention::Phase),
            "separable" => Ok(Convention::Separable),
            _ => Err(format!(
                "unknown convention `{s}` (exact, phase, separable)"
            )),
        }
    }
}

/// NOT on every line plus CNOT, CV and CV+ on every ordered pair of
/// neighbouring lines, sorted. Fifteen gates on three lines.
pub fn lnn_gate_library(num_lines: usize) -> Vec<Gate> {
    let mut gates: Vec<Gate> = (0..num_lines).map(Gate::not).collect();
    for kind in [
        GateKind::Cnot,
        GateKind::ControlledV,
        GateKind::ControlledVdg,
    ] {
        for l in 0..num_lines.saturating_sub(1) {
            gates.push(Gate::two_qubit(kind, l, l + 1));
            gates.push(Gate::two_qubit(kind, l + 1, l));
        }
    }
    gates.sort();
    gates
}

/// NOT, CNOT and Toffoli gates in every placement on three lines, sorted.
pub fn mct_gate_library() -> Vec<Gate> {
    let mut gates = Vec::new();
    for t in 0..3 {
        let others: Vec<usize> = (0..3).filter(|&l| l != t).collect();
        gates.push(Gate::not(t));
        for &c in &others {
            gates.push(Gate::cnot(c, t));
        }
        gates.push(Gate::toffoli(others[0], others[1], t));
    }
    gates.sort();
    gates
}

/// Number of functions whose minimal circuit has each size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostHistogram {
    pub counts: BTreeMap<usize, u64>,
    pub total: u64,
    /// Every reachable function has been found.
    pub complete: bool,
    /// Deepest level fully explored.
    pub completed_depth: usize,
}

impl CostHistogram {
    pub fn from_counts(counts: &[u64], complete: bool) -> Self {
        CostHistogram {
            counts: counts.iter().copied().enumerate().collect(),
            total: counts.iter().sum(),
            complete,
            completed_depth: counts.len().saturating_sub(1),
        }
    }

    pub fn count(&self, size: usize) -> u64 {
        self.counts.get(&size).copied().unwrap_or(0)
    }

    /// Mean minimal size over the counted functions.
    pub fn average(&self) -> f64 {
        let weighted: u64 = self.counts.iter().map(|(&s, &c)| s as u64 * c).sum();
        weighted as f64 / self.total.max(1) as f64
    }
}

fn histogram<S: SearchSpace>(bfs: &Bfs<S>) -> CostHistogram {
    CostHistogram::from_counts(&bfs.function_counts(), bfs.is_exhausted())
}

/// A finished or partial search for minimal nearest-neighbour circuits.
pub enum LnnSearch {
    Separable(Bfs<SeparableSpace>),
    Unitary(Bfs<UnitarySpace>),
}

impl LnnSearch {
    pub fn new(convention: Convention) -> Self {
        let gates = lnn_gate_library(3);
        match convention {
            Convention::Separable => LnnSearch::Separable(Bfs::new(SeparableSpace::new(3, gates))),
            Convention::Exact => LnnSearch::Unitary(Bfs::new(UnitarySpace::new(3, gates, false))),
            Convention::Phase => LnnSearch::Unitary(Bfs::new(UnitarySpace::new(3, gates, true))),
        }
    }

    /// Continues a search saved with [`LnnSearch::save_checkpoint`] under the
    /// same convention.
    pub fn load_checkpoint(convention: Convention, r: &mut impl io::Read) -> io::Result<Self> {
        Ok(match LnnSearch::new(convention) {
            LnnSearch::Separable(b) => {
                LnnSearch::Separable(Bfs::load_checkpoint(b.into_space(), r)?)
            }
            LnnSearch::Unitary(b) => LnnSearch::Unitary(Bfs::load_checkpoint(b.into_space(), r)?),
        })
    }

    pub fn save_checkpoint(&self, w: &mut impl io::Write) -> io::Result<()> {
        match self {
            LnnSearch::Separable(b) => b.save_checkpoint(w),
            LnnSearch::Unitary(b) => b.save_checkpoint(w),
        }
    }

    pub fn run(&mut self, limits: Limits, exec: Exec) -> StopReason {
        match self {
            LnnSearch::Separable(b) => b.run(limits, exec),
            LnnSearch::Unitary(b) => b.run(limits, exec),
        }
    }

    pub fn histogram(&self) -> CostHistogram {
        match self {
            LnnSearch::Separable(b) => histogram(b),
            LnnSearch::Unitary(b) => histogram(b),
        }
    }

    /// Every function found so far.
    pub fn functions(&self) -> Vec<Permutation> {
        match self {
            LnnSearch::Separable(b) => b.functions().map(|(f, _)| f.clone()).collect(),
            LnnSearch::Unitary(b) => b.functions().map(|(f, _)| f.clone()).collect(),
        }
    }

    pub fn witness(&self, f: &Permutation) -> Option<Circuit> {
        match self {
            LnnSearch::Separable(b) => b.witness(f),
            LnnSearch::Unitary(b) => b.witness(f),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            LnnSearch::Separable(b) => b.depth(),
            LnnSearch::Unitary(b) => b.depth(),
        }
    }

    pub fn is_exhausted(&self) -> bool {
        match self {
            LnnSearch::Separable(b) => b.is_exhausted(),
            LnnSearch::Unitary(b) => b.is_exhausted(),
        }
    }

    pub fn num_states(&self) -> usize {
        match self {
            LnnSearch::Separable(b) => b.num_states(),
            LnnSearch::Unitary(b) => b.num_states(),
        }
    }

    /// Minimal size of `f`, or `Unknown` if it lies beyond the explored depth.
    pub fn optimal_cost(&self, f: &Permutation) -> OptimalCost {
        let found = match self {
            LnnSearch::Separable(b) => b.cost(f),
            LnnSearch::Unitary(b) => b.cost(f),
        };
        match found {
            Some(d) => OptimalCost::Exact(d),
            None => OptimalCost::Unknown {
                beyond: self.depth(),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OptimalCost {
    Exact(usize),
    Unknown { beyond: usize },
}

/// Minimal nearest-neighbour circuits over the 15-gate library on three
/// lines, up to `limits`.
pub fn enumerate_optimal_lnn(convention: Convention, limits: Limits, exec: Exec) -> LnnSearch {
    let mut search = LnnSearch::new(convention);
    search.run(limits, exec);
    search
}

/// Complete minimal-MCT search over three lines.
pub fn enumerate_optimal_mct(exec: Exec) -> Bfs<MctSpace> {
    let mut bfs = Bfs::new(MctSpace::new(mct_gate_library()));
    bfs.run(Limits::default(), exec);
    bfs
}

/// Minimal cost of `f` according to a search run.
pub fn optimal_lnn_cost(search: &LnnSearch, f: &Permutation) -> OptimalCost {
    search.optimal_cost(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourval;
    use crate::semantics::{circuit_unitary, gate_unitary};

    #[test]
    fn library_shapes() {
        let lib = lnn_gate_library(3);
        assert_eq!(lib.len(), 15);
        assert!(lib
            .iter()
            .all(|g| g.kind() == GateKind::Not || g.nnc() == Ok(0)));
        assert!(lib.iter().all(|g| g.kind() != GateKind::Swap));
        assert_eq!(mct_gate_library().len(), 12);
    }

    #[test]
    fn shallow_counts_all_conventions() {
        for conv in [Convention::Separable, Convention::Exact, Convention::Phase] {
            let s = enumerate_optimal_lnn(
                conv,
                Limits {
                    max_depth: Some(3),
                    ..Limits::default()
                },
                Exec::Sequential,
            );
            let h = s.histogram();
            assert_eq!(
                (0..=3).map(|d| h.count(d)).collect::<Vec<_>>(),
                [1, 7, 29, 82],
                "{conv}"
            );
        }
    }

    #[test]
    fn toffoli_costs_nine() {
        let s = enumerate_optimal_lnn(
            Convention::Separable,
            Limits {
                max_depth: Some(9),
                ..Limits::default()
            },
            Exec::Parallel,
        );
        let tof = gate_unitary(&Gate::toffoli(0, 1, 2), 3)
            .as_permutation()
            .unwrap();
        assert_eq!(s.optimal_cost(&tof), OptimalCost::Exact(9));
        let w = s.witness(&tof).unwrap();
        assert_eq!(
            circuit_unitary(&w),
            gate_unitary(&Gate::toffoli(0, 1, 2), 3)
        );
        assert!(fourval::is_non_entangled(&w));
        let cnot = gate_unitary(&Gate::cnot(0, 1), 3).as_permutation().unwrap();
        assert_eq!(s.optimal_cost(&cnot), OptimalCost::Exact(1));
        assert_eq!(
            s.optimal_cost(&Permutation::identity(3)),
            OptimalCost::Exact(0)
        );
    }

    #[test]
    fn mct_search_is_complete() {
        let bfs = enumerate_optimal_mct(Exec::Sequential);
        assert_eq!(bfs.num_functions(), 40320);
        assert!(bfs.is_exhausted());
        assert_eq!(bfs.witness(&Permutation::identity(3)).unwrap().len(), 0);
    }

    #[test]
    fn checkpoint_round_trip() {
        let mut bfs = Bfs::new(SeparableSpace::new(3, lnn_gate_library(3)));
        bfs.run(
            Limits {
                max_depth: Some(4),
                ..Limits::default()
            },
            Exec::Sequential,
        );
        let mut buf = Vec::new();
        bfs.save_checkpoint(&mut buf).unwrap();
        let mut back = Bfs::load_checkpoint(
            SeparableSpace::new(3, lnn_gate_library(3)),
            &mut buf.as_slice(),
        )
        .unwrap();
        assert_eq!(back.function_counts(), bfs.function_counts());
        back.step(Exec::Sequential);
        bfs.step(Exec::Sequential);
        assert_eq!(back.function_counts(), bfs.function_counts());
        let wrong = Bfs::load_checkpoint(MctSpace::new(mct_gate_library()), &mut buf.as_slice());
        assert!(wrong.is_err());
    }
}
