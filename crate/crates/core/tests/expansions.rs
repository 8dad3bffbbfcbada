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

//! Every ladder expansion and Toffoli placement on up to six lines, checked
//! against the exact unitary of its source gate.

use lnnsynth::circuit::{t3_layout, T3Case};
use lnnsynth::fourval;
use lnnsynth::semantics::{circuit_unitary, gate_unitary};
use lnnsynth::transform::{
    model1_expand, model2_expand, model3_expand, synthesize_lnn, t3_make_adjacent, Direction,
    TransformOptions,
};
use lnnsynth::{Circuit, Gate, GateKind};

const MAX_LINES: usize = 6;

fn on(n: usize, c: &Circuit) -> Circuit {
    Circuit::from_gates(n, c.gates().iter().cloned()).unwrap()
}

fn long_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |c| {
        (0..n)
            .filter(move |&t| c.abs_diff(t) >= 2)
            .map(move |t| (c, t))
    })
}

fn toffolis(n: usize) -> Vec<Gate> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for t in (0..n).filter(|&t| t != a && t != b) {
                out.push(Gate::toffoli(a, b, t));
            }
        }
    }
    out
}

fn assert_faithful(src: &Gate, out: &Circuit, n: usize) {
    let out = on(n, out);
    assert_eq!(circuit_unitary(&out), gate_unitary(src, n), "{src}");
    for g in out.gates() {
        assert_ne!(g.kind(), GateKind::Swap, "{src}");
        assert!(
            g.min_line() >= src.min_line() && g.max_line() <= src.max_line(),
            "{src}: {g}"
        );
    }
}

#[test]
fn ladder_models_are_exact_for_every_placement() {
    for n in 3..=MAX_LINES {
        for (c, t) in long_pairs(n) {
            let k = c.abs_diff(t) - 1;
            let cnot = Gate::cnot(c, t);
            let m1 = model1_expand(&cnot).unwrap();
            assert_eq!(m1.len(), 4 * k);
            assert_faithful(&cnot, &m1, n);
            for expand in [model2_expand, model3_expand] {
                let m = expand(&cnot).unwrap();
                assert_eq!(m.len(), 4 * k + 1);
                assert!(m.is_lnn());
                assert_faithful(&cnot, &m, n);
            }
            for g in [Gate::cv(c, t), Gate::cvdg(c, t)] {
                let m = model2_expand(&g).unwrap();
                assert_eq!(m.len(), 4 * k + 1);
                assert!(m.is_lnn());
                assert_faithful(&g, &m, n);
            }
        }
    }
}

#[test]
fn model1_gate_counts() {
    for k in 1..=4 {
        assert_eq!(model1_expand(&Gate::cnot(0, k + 1)).unwrap().len(), 4 * k);
        assert_eq!(model1_expand(&Gate::cnot(k + 1, 0)).unwrap().len(), 4 * k);
    }
}

#[test]
fn toffoli_placements_are_exact_with_expected_counts() {
    for n in 3..=MAX_LINES {
        for g in toffolis(n) {
            for dir in [Direction::TowardSmaller, Direction::TowardLarger] {
                let opts = TransformOptions {
                    direction_tiebreak: dir,
                    ..TransformOptions::default()
                };
                let layout = t3_layout(&g).unwrap();
                let expected = match layout.case {
                    T3Case::Case1 => 4 * (layout.p + layout.q) + 9,
                    T3Case::Case2 => 4 * (layout.p + layout.q + 1) + 9,
                };
                let moved = t3_make_adjacent(&g, &opts).unwrap();
                assert_faithful(&g, &moved, n);
                let toffolis = moved
                    .gates()
                    .iter()
                    .filter(|x| x.kind() == GateKind::Toffoli);
                assert_eq!(toffolis.count(), 1);
                assert_eq!(moved.len() - 1 + 9, expected, "{g} {dir:?}");
                let lnn =
                    synthesize_lnn(&Circuit::from_gates(n, [g.clone()]).unwrap(), &opts).unwrap();
                assert_eq!(lnn.len(), expected, "{g} {dir:?}");
                assert!(lnn.is_lnn());
                assert_faithful(&g, &lnn, n);
                assert!(fourval::is_non_entangled(&lnn), "{g}");
            }
        }
    }
}

#[test]
fn middle_target_with_adjacent_controls_costs_thirteen() {
    let lnn = synthesize_lnn(
        &Circuit::from_gates(3, [Gate::toffoli(0, 2, 1)]).unwrap(),
        &TransformOptions::default(),
    )
    .unwrap();
    assert_eq!(lnn.len(), 13);
}

#[test]
fn synthesized_circuits_never_entangle() {
    use lnnsynth::semantics::is_entangled_circuit;
    let n = 5;
    let mut gates = vec![Gate::not(1), Gate::swap(0, 3), Gate::cnot(3, 0)];
    gates.extend(toffolis(n).into_iter().step_by(5));
    gates.push(Gate::mct([0, 1, 3], 2).unwrap());
    let c = Circuit::from_gates(n, gates).unwrap();
    let lnn = synthesize_lnn(&c, &TransformOptions::default()).unwrap();
    assert!(lnn.is_lnn());
    assert!(!is_entangled_circuit(&lnn));
    assert_eq!(circuit_unitary(&lnn), circuit_unitary(&c));
}
