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

//! Rewriting MCT circuits into nearest-neighbour primitive circuits.
//!
//! The pipeline decomposes large MCT gates into Toffolis, brings each Toffoli
//! onto three consecutive lines with CNOT ladders, substitutes the 9-gate
//! nearest-neighbour Toffoli, and expands the remaining long-range two-qubit
//! gates with one of three ladder models.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{t3_layout, Circuit, CircuitError, Gate, GateKind, T3Case};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("{0} already acts on adjacent lines")]
    AlreadyAdjacent(Gate),
    #[error("{model:?} cannot expand a {kind} gate")]
    UnsupportedKind { model: ModelKind, kind: GateKind },
    #[error("{gate} needs {needed} working line(s) but only {available} are free")]
    InsufficientWorkingLines {
        gate: Gate,
        needed: usize,
        available: usize,
    },
    #[error("working line count must be at least 1")]
    NoWorkingLines,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    /// Chain of CNOTs carrying the control's parity along the line; 4k CNOTs.
    Model1,
    /// Moves the control next to the target; the only model for CV and CV+.
    Model2,
    /// Moves the target next to the control.
    Model3,
}

impl ModelKind {
    pub fn supports(self, kind: GateKind) -> bool {
        match self {
            ModelKind::Model2 => matches!(
                kind,
                GateKind::Cnot | GateKind::ControlledV | GateKind::ControlledVdg
            ),
            _ => kind == GateKind::Cnot,
        }
    }
}

/// Which way the target travels when a Toffoli's target sits between its
/// controls.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[default]
    TowardSmaller,
    TowardLarger,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformOptions {
    /// Ladder models in order of preference; the first one that supports a
    /// gate is used.
    pub model_preference: Vec<ModelKind>,
    /// Free lines MCT decomposition may borrow. Borrowed lines are restored.
    pub mct_working_lines: usize,
    pub direction_tiebreak: Direction,
    /// Realisation index (see [`lnn_toffoli3_variant`]) for each Toffoli in
    /// the order they are emitted. Toffolis past the end use realisation 0.
    #[serde(default)]
    pub toffoli_variants: Vec<usize>,
}

impl Default for TransformOptions {
    fn default() -> Self {
        TransformOptions {
            model_preference: vec![ModelKind::Model1, ModelKind::Model2, ModelKind::Model3],
            mct_working_lines: 1,
            direction_tiebreak: Direction::TowardSmaller,
            toffoli_variants: Vec::new(),
        }
    }
}

/// Maps local ladder coordinates onto real lines: local 0 is `origin` and
/// local `i` lies `i` steps towards `toward`.
fn frame(origin: usize, toward: usize) -> impl Fn(usize) -> usize {
    move |i| {
        if toward >= origin {
            origin + i
        } else {
            origin - i
        }
    }
}

fn cnots(pairs: &[(usize, usize)], map: &impl Fn(usize) -> usize) -> Vec<Gate> {
    pairs
        .iter()
        .map(|&(c, t)| Gate::cnot(map(c), map(t)))
        .collect()
}

fn mirrored(mut ladder: Vec<Gate>, centre: Vec<Gate>) -> Vec<Gate> {
    let back: Vec<Gate> = ladder.iter().rev().map(Gate::inverse).collect();
    ladder.extend(centre);
    ladder.extend(back);
    ladder
}

fn span_circuit(gates: Vec<Gate>) -> Circuit {
    let n = gates.iter().map(Gate::max_line).max().unwrap_or(0) + 1;
    Circuit::from_gates(n, gates).expect("gates fit their own span")
}

fn long_range(g: &Gate, model: ModelKind) -> Result<(usize, usize, usize), TransformError> {
    if !model.supports(g.kind()) {
        return Err(TransformError::UnsupportedKind {
            model,
            kind: g.kind(),
        });
    }
    let k = g.nnc()?;
    if k == 0 {
        return Err(TransformError::AlreadyAdjacent(g.clone()));
    }
    let (c, t) = g.pair();
    Ok((c, t, k))
}

fn model1_gates(c: usize, t: usize, k: usize) -> Vec<Gate> {
    let pass: Vec<(usize, usize)> = (0..=k)
        .map(|i| (i, i + 1))
        .chain((1..k).rev().map(|i| (i, i + 1)))
        .collect();
    let map = frame(c, t);
    let mut gates = cnots(&pass, &map);
    gates.extend_from_slice(&gates.clone());
    gates
}

fn model2_gates(kind: GateKind, c: usize, t: usize, k: usize) -> Vec<Gate> {
    let map = frame(c, t);
    let ladder: Vec<(usize, usize)> = (0..k).flat_map(|i| [(i + 1, i), (i, i + 1)]).collect();
    let centre = Gate::new(kind, [map(k)], &[map(k + 1)]).expect("distinct lines");
    mirrored(cnots(&ladder, &map), vec![centre])
}

fn model3_gates(c: usize, t: usize, k: usize) -> Vec<Gate> {
    let map = frame(c, t);
    let ladder: Vec<(usize, usize)> = (2..=k + 1)
        .rev()
        .flat_map(|i| [(i, i - 1), (i - 1, i)])
        .collect();
    mirrored(cnots(&ladder, &map), vec![Gate::cnot(map(0), map(1))])
}

/// Expands a long-range CNOT into `4k` adjacent CNOTs.
pub fn model1_expand(g: &Gate) -> Result<Circuit, TransformError> {
    let (c, t, k) = long_range(g, ModelKind::Model1)?;
    Ok(span_circuit(model1_gates(c, t, k)))
}

/// Expands a long-range CNOT, CV or CV+ by walking the control next to the
/// target and back; `4k + 1` gates.
pub fn model2_expand(g: &Gate) -> Result<Circuit, TransformError> {
    let (c, t, k) = long_range(g, ModelKind::Model2)?;
    Ok(span_circuit(model2_gates(g.kind(), c, t, k)))
}

/// Expands a long-range CNOT by walking the target next to the control and
/// back; `4k + 1` gates.
pub fn model3_expand(g: &Gate) -> Result<Circuit, TransformError> {
    let (c, t, k) = long_range(g, ModelKind::Model3)?;
    Ok(span_circuit(model3_gates(c, t, k)))
}

/// Expands a two-qubit gate with the given model.
pub fn model_expand(g: &Gate, model: ModelKind) -> Result<Circuit, TransformError> {
    match model {
        ModelKind::Model1 => model1_expand(g),
        ModelKind::Model2 => model2_expand(g),
        ModelKind::Model3 => model3_expand(g),
    }
}

/// Conjugates a Toffoli by CNOT ladders so that the remaining Toffoli acts on
/// three consecutive lines with its target at one end.
///
/// Target outside the controls: the far control walks next to the near one
/// and the target walks next to the pair, `4(p+q)` CNOTs. Target between the
/// controls: both controls walk next to the target, then four CNOTs move the
/// target to one end, `4(p+q+1)` CNOTs.
pub fn t3_make_adjacent(g: &Gate, opts: &TransformOptions) -> Result<Circuit, TransformError> {
    let layout = t3_layout(g)?;
    let c1 = g.controls()[0].get();
    let c2 = g.controls()[1].get();
    let t = g.target().get();
    let gates = match layout.case {
        T3Case::Case1 => {
            // local 0 is the far control
            let map = frame(if t > c2 { c1 } else { c2 }, t);
            let (q, p) = (layout.q, layout.p);
            let near = q + 1;
            let lt = near + p + 1;
            let ladder: Vec<(usize, usize)> = (0..q)
                .flat_map(|i| [(i + 1, i), (i, i + 1)])
                .chain((near + 2..=lt).rev().flat_map(|i| [(i, i - 1), (i - 1, i)]))
                .collect();
            let toffoli = Gate::toffoli(map(near - 1), map(near), map(near + 1));
            mirrored(cnots(&ladder, &map), vec![toffoli])
        }
        T3Case::Case2 => {
            let id = |i: usize| i;
            let ladder: Vec<(usize, usize)> = (c1..t - 1)
                .flat_map(|i| [(i + 1, i), (i, i + 1)])
                .chain((t + 2..=c2).rev().flat_map(|i| [(i - 1, i), (i, i - 1)]))
                .collect();
            let centre = match opts.direction_tiebreak {
                Direction::TowardSmaller => mirrored(
                    vec![Gate::cnot(t, t - 1), Gate::cnot(t - 1, t)],
                    vec![Gate::toffoli(t, t + 1, t - 1)],
                ),
                Direction::TowardLarger => mirrored(
                    vec![Gate::cnot(t, t + 1), Gate::cnot(t + 1, t)],
                    vec![Gate::toffoli(t - 1, t, t + 1)],
                ),
            };
            mirrored(cnots(&ladder, &id), centre)
        }
    };
    Ok(span_circuit(gates))
}

/// Placement of the nearest-neighbour Toffoli on three lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ToffoliOrientation {
    /// Controls on lines 0 and 1, target on line 2.
    TargetBelow,
    /// Controls on lines 1 and 2, target on line 0.
    TargetAbove,
}

/// Every 9-gate nearest-neighbour circuit realising a Toffoli with controls
/// on lines 0 and 1 and target on line 2. `v`/`w` are CV/CV+ on (1,2), `a`
/// is CNOT(0,1) and `b` is CNOT(1,0). Entry 0 is the default.
const LNN_TOFFOLIS: [&str; 84] = [
    "vawbabvab",
    "abavabwav",
    "abavawbav",
    "abawabvaw",
    "abawavbaw",
    "abvabwabw",
    "abvabwawb",
    "abvawabaw",
    "abvawbabw",
    "abvawbawb",
    "abwabvabv",
    "abwabvavb",
    "abwavabav",
    "abwavbabv",
    "abwavbavb",
    "avabawabw",
    "avabawawb",
    "avabwawab",
    "avawbawab",
    "avbabwabw",
    "avbabwawb",
    "avbawabaw",
    "avbawbabw",
    "avbawbawb",
    "awabavabv",
    "awabavavb",
    "awabvavab",
    "awavbavab",
    "awbabvabv",
    "awbabvavb",
    "awbavabav",
    "awbavbabv",
    "awbavbavb",
    "babvabwav",
    "babvawbav",
    "babwabvaw",
    "babwavbaw",
    "bavabawav",
    "bavabvawa",
    "bavavbawa",
    "bavbabwav",
    "bavbawbav",
    "bawabavaw",
    "bawabwava",
    "bawawbava",
    "bawbabvaw",
    "bawbavbaw",
    "bvabvabwa",
    "bvabvawba",
    "bvavabawa",
    "bvavbabwa",
    "bvavbawba",
    "bwabwabva",
    "bwabwavba",
    "bwawabava",
    "bwawbabva",
    "bwawbavba",
    "vabavabwa",
    "vabavawba",
    "vabwabvab",
    "vabwavaba",
    "vabwavbab",
    "vawabavab",
    "vawbavaba",
    "vawbavbab",
    "vbabvabwa",
    "vbabvawba",
    "vbavabawa",
    "vbavbabwa",
    "vbavbawba",
    "wabawabva",
    "wabawavba",
    "wabvabwab",
    "wabvawaba",
    "wabvawbab",
    "wavabawab",
    "wavbabwab",
    "wavbawaba",
    "wavbawbab",
    "wbabwabva",
    "wbabwavba",
    "wbawabava",
    "wbawbabva",
    "wbawbavba",
];

/// Number of distinct 9-gate nearest-neighbour Toffoli realisations.
pub const LNN_TOFFOLI_VARIANTS: usize = LNN_TOFFOLIS.len();

/// The default 9-gate nearest-neighbour realisation of a Toffoli on three
/// lines.
pub fn lnn_toffoli3(orientation: ToffoliOrientation) -> Circuit {
    lnn_toffoli3_variant(orientation, 0)
}

/// Realisation `index` (taken modulo [`LNN_TOFFOLI_VARIANTS`]) of the
/// nearest-neighbour Toffoli. All of them have 9 gates.
pub fn lnn_toffoli3_variant(orientation: ToffoliOrientation, index: usize) -> Circuit {
    let map = |l: usize| match orientation {
        ToffoliOrientation::TargetBelow => l,
        ToffoliOrientation::TargetAbove => 2 - l,
    };
    let gates = LNN_TOFFOLIS[index % LNN_TOFFOLI_VARIANTS].bytes().map(|b| {
        let (k, c, t) = match b {
            b'v' => (GateKind::ControlledV, 1, 2),
            b'w' => (GateKind::ControlledVdg, 1, 2),
            b'a' => (GateKind::Cnot, 0, 1),
            _ => (GateKind::Cnot, 1, 0),
        };
        Gate::two_qubit(k, map(c), map(t))
    });
    Circuit::from_gates(3, gates).expect("three lines")
}

/// A realisation placed on the lines of an adjacent Toffoli whose target is
/// at one end.
fn lnn_toffoli_gates(g: &Gate, variant: usize) -> Vec<Gate> {
    let lo = g.min_line();
    let t = g.target().get();
    debug_assert!(g.is_adjacent() && (t == lo || t == lo + 2));
    let orientation = if t == lo {
        ToffoliOrientation::TargetAbove
    } else {
        ToffoliOrientation::TargetBelow
    };
    lnn_toffoli3_variant(orientation, variant)
        .into_gates()
        .into_iter()
        .map(|x| x.map_lines(|l| l + lo))
        .collect()
}

/// Decomposes an MCT gate with three or more controls into Toffoli gates,
/// borrowing up to `opts.mct_working_lines` free lines of an `num_lines`-line
/// register. Borrowed lines may hold any value and are restored.
///
/// With `k` controls and at least `k - 2` borrowed lines this is a ladder of
/// `4(k - 2)` Toffolis. With fewer, the controls are split in two halves
/// around one borrowed line and each half is decomposed recursively with the
/// other half's lines as its working lines.
pub fn decompose_mct(
    g: &Gate,
    num_lines: usize,
    opts: &TransformOptions,
) -> Result<Circuit, TransformError> {
    if opts.mct_working_lines == 0 {
        return Err(TransformError::NoWorkingLines);
    }
    let mut out = Circuit::new(num_lines)?;
    if g.kind() != GateKind::Mct {
        out.push(g.clone())?;
        return Ok(out);
    }
    let used: Vec<usize> = g.lines().collect();
    let t = g.target().get();
    let mut free: Vec<usize> = (0..num_lines).filter(|l| !used.contains(l)).collect();
    if free.len() < opts.mct_working_lines {
        return Err(TransformError::InsufficientWorkingLines {
            gate: g.clone(),
            needed: opts.mct_working_lines,
            available: free.len(),
        });
    }
    free.sort_by_key(|&l| (l.abs_diff(t), l));
    free.truncate(opts.mct_working_lines);
    let controls: Vec<usize> = g.controls().iter().map(|c| c.get()).collect();
    for gate in best_mct_split(&controls, t, &free) {
        out.push(gate)?;
    }
    Ok(out)
}

fn toffoli_cost(c1: usize, c2: usize, t: usize) -> usize {
    let g = Gate::toffoli(c1, c2, t);
    let l = t3_layout(&g).expect("toffoli");
    match l.case {
        T3Case::Case1 => 4 * (l.p + l.q) + 9,
        T3Case::Case2 => 4 * (l.p + l.q + 1) + 9,
    }
}

fn chain_cost(gates: &[Gate]) -> usize {
    gates
        .iter()
        .map(|g| {
            let c = g.controls();
            toffoli_cost(c[0].get(), c[1].get(), g.target().get())
        })
        .sum()
}

/// Tries control orderings (exhaustively for small gates) and keeps the
/// Toffoli network that is cheapest once made nearest-neighbour.
fn best_mct_split(controls: &[usize], target: usize, work: &[usize]) -> Vec<Gate> {
    let mut best: Option<(usize, Vec<Gate>)> = None;
    let mut order = controls.to_vec();
    let mut consider = |order: &[usize]| {
        let gates = mct_network(order, target, work);
        let cost = chain_cost(&gates);
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, gates));
        }
    };
    if controls.len() <= 6 {
        permutations(&mut order, 0, &mut consider);
    } else {
        consider(&order);
    }
    best.expect("at least one ordering").1
}

fn permutations(items: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, f);
        items.swap(k, i);
    }
}

/// Toffoli network for `controls -> target` using the listed working lines.
fn mct_network(controls: &[usize], target: usize, work: &[usize]) -> Vec<Gate> {
    let k = controls.len();
    match k {
        0 => return vec![Gate::not(target)],
        1 => return vec![Gate::cnot(controls[0], target)],
        2 => return vec![Gate::toffoli(controls[0], controls[1], target)],
        _ => {}
    }
    if work.len() >= k - 2 {
        return dirty_ladder(controls, target, &work[..k - 2]);
    }
    // split around one borrowed line
    let a = work[0];
    let m1 = k.div_ceil(2);
    let (left, right) = controls.split_at(m1);
    let mut right_a = right.to_vec();
    right_a.push(a);
    let mut left_work: Vec<usize> = right.to_vec();
    left_work.push(target);
    left_work.extend_from_slice(&work[1..]);
    let mut right_work: Vec<usize> = left.to_vec();
    right_work.extend_from_slice(&work[1..]);
    let first = mct_network(left, a, &left_work);
    let second = mct_network(&right_a, target, &right_work);
    let mut gates = Vec::new();
    for _ in 0..2 {
        gates.extend_from_slice(&first);
        gates.extend_from_slice(&second);
    }
    gates
}

/// `4(k-2)` Toffolis computing `controls -> target` with `k-2` borrowed lines
/// in arbitrary states.
fn dirty_ladder(controls: &[usize], target: usize, work: &[usize]) -> Vec<Gate> {
    let k = controls.len();
    let top = Gate::toffoli(controls[k - 1], work[k - 3], target);
    let mut down: Vec<Gate> = (2..k - 1)
        .rev()
        .map(|i| Gate::toffoli(controls[i], work[i - 2], work[i - 1]))
        .collect();
    let bottom = Gate::toffoli(controls[0], controls[1], work[0]);
    let up: Vec<Gate> = down.iter().rev().cloned().collect();
    down.push(bottom);
    down.extend(up);
    let mut gates = vec![top.clone()];
    gates.extend_from_slice(&down);
    gates.push(top);
    gates.extend(down);
    gates
}

/// Expands one gate to nearest-neighbour primitives.
fn synthesize_gate(
    g: &Gate,
    num_lines: usize,
    opts: &TransformOptions,
    out: &mut Vec<Gate>,
    placed: &mut Vec<Gate>,
) -> Result<(), TransformError> {
    match g.kind() {
        GateKind::Mct => {
            for x in decompose_mct(g, num_lines, opts)?.gates() {
                synthesize_gate(x, num_lines, opts, out, placed)?;
            }
        }
        GateKind::Toffoli => {
            for x in t3_make_adjacent(g, opts)?.into_gates() {
                if x.kind() == GateKind::Toffoli {
                    let v = opts.toffoli_variants.get(placed.len()).copied();
                    out.extend(lnn_toffoli_gates(&x, v.unwrap_or(0)));
                    placed.push(x);
                } else {
                    out.push(x);
                }
            }
        }
        GateKind::Swap => {
            let (a, b) = g.pair();
            for x in [Gate::cnot(a, b), Gate::cnot(b, a), Gate::cnot(a, b)] {
                synthesize_gate(&x, num_lines, opts, out, placed)?;
            }
        }
        GateKind::Not => out.push(g.clone()),
        GateKind::Cnot | GateKind::ControlledV | GateKind::ControlledVdg => {
            if g.is_adjacent() {
                out.push(g.clone());
            } else {
                let model = opts
                    .model_preference
                    .iter()
                    .copied()
                    .chain([ModelKind::Model2])
                    .find(|m| m.supports(g.kind()))
                    .expect("Model2 supports every controlled primitive");
                out.extend(model_expand(g, model)?.into_gates());
            }
        }
    }
    Ok(())
}

fn synthesize(
    c: &Circuit,
    opts: &TransformOptions,
) -> Result<(Vec<Gate>, Vec<Gate>), TransformError> {
    let mut out = Vec::with_capacity(c.len() * 4);
    let mut placed = Vec::new();
    for g in c.gates() {
        synthesize_gate(g, c.num_lines(), opts, &mut out, &mut placed)?;
    }
    Ok((out, placed))
}

/// Turns any circuit into an equivalent nearest-neighbour primitive circuit.
pub fn synthesize_lnn(c: &Circuit, opts: &TransformOptions) -> Result<Circuit, TransformError> {
    let (out, _) = synthesize(c, opts)?;
    Ok(Circuit::from_gates(c.num_lines(), out)?)
}

/// The adjacent Toffolis [`synthesize_lnn`] realises, in emission order.
/// Entry `i` is the gate whose realisation `opts.toffoli_variants[i]` picks.
pub fn placed_toffolis(c: &Circuit, opts: &TransformOptions) -> Result<Vec<Gate>, TransformError> {
    Ok(synthesize(c, opts)?.1)
}

/// Adjacent transpositions turning the line order `from` into `to`.
fn bubble_swaps(from: &[usize], to: &[usize]) -> Vec<(usize, usize)> {
    let rank: Vec<usize> = {
        let mut r = vec![0; from.len()];
        for (pos, &item) in to.iter().enumerate() {
            r[item] = pos;
        }
        r
    };
    let mut cur: Vec<usize> = from.to_vec();
    let mut swaps = Vec::new();
    loop {
        let mut done = true;
        for i in 0..cur.len().saturating_sub(1) {
            if rank[cur[i]] > rank[cur[i + 1]] {
                cur.swap(i, i + 1);
                swaps.push((i, i + 1));
                done = false;
            }
        }
        if done {
            return swaps;
        }
    }
}

/// Cheapest sequence of adjacent SWAPs that puts a Toffoli's lines on three
/// consecutive positions with the target at an end, and the resulting gate.
fn toffoli_swap_route(g: &Gate, n: usize) -> (Vec<(usize, usize)>, Gate) {
    let c = [g.controls()[0].get(), g.controls()[1].get()];
    let t = g.target().get();
    let ident: Vec<usize> = (0..n).collect();
    let mut best: Option<(Vec<(usize, usize)>, Gate)> = None;
    for w in 0..n - 2 {
        for arrangement in [
            [c[0], c[1], t],
            [c[1], c[0], t],
            [t, c[0], c[1]],
            [t, c[1], c[0]],
        ] {
            let others = ident.iter().copied().filter(|l| !arrangement.contains(l));
            let mut order: Vec<usize> = others.collect();
            for (i, &l) in arrangement.iter().enumerate() {
                order.insert(w + i, l);
            }
            let swaps = bubble_swaps(&ident, &order);
            if best.as_ref().is_none_or(|(s, _)| swaps.len() < s.len()) {
                let tpos = if arrangement[0] == t { w } else { w + 2 };
                let cs: Vec<usize> = (w..w + 3).filter(|&p| p != tpos).collect();
                best = Some((swaps, Gate::toffoli(cs[0], cs[1], tpos)));
            }
        }
    }
    best.expect("at least three lines")
}

/// Reference flow: long-range CNOTs use the 4k-gate chain, controlled-V
/// gates use the control ladder, and Toffolis are moved into place with
/// adjacent SWAPs (three CNOTs each) that are undone afterwards.
pub fn swap_insert_baseline(c: &Circuit) -> Result<Circuit, TransformError> {
    let n = c.num_lines();
    let opts = TransformOptions::default();
    let mut out = Vec::new();
    let swap3 = |(a, b): (usize, usize)| [Gate::cnot(a, b), Gate::cnot(b, a), Gate::cnot(a, b)];
    for g in c.gates() {
        let toffolis = match g.kind() {
            GateKind::Mct => decompose_mct(g, n, &opts)?.into_gates(),
            GateKind::Toffoli => vec![g.clone()],
            _ => {
                synthesize_gate(g, n, &opts, &mut out, &mut Vec::new())?;
                continue;
            }
        };
        for x in toffolis {
            if x.kind() != GateKind::Toffoli {
                synthesize_gate(&x, n, &opts, &mut out, &mut Vec::new())?;
                continue;
            }
            let (swaps, placed) = toffoli_swap_route(&x, n);
            out.extend(swaps.iter().copied().flat_map(swap3));
            out.extend(lnn_toffoli_gates(&placed, 0));
            out.extend(swaps.iter().rev().copied().flat_map(swap3));
        }
    }
    Ok(Circuit::from_gates(n, out)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourval;
    use crate::semantics::{circuit_unitary, equivalent, gate_unitary};

    fn single(g: &Gate, n: usize) -> Circuit {
        Circuit::from_gates(n, [g.clone()]).unwrap()
    }

    fn pairs(s: &[Gate]) -> Vec<(usize, usize)> {
        s.iter().map(Gate::pair).collect()
    }

    #[test]
    fn model1_small_case() {
        let c = model1_expand(&Gate::cnot(0, 2)).unwrap();
        assert_eq!(pairs(c.gates()), [(0, 1), (1, 2), (0, 1), (1, 2)]);
        assert_eq!(model1_expand(&Gate::cnot(0, 5)).unwrap().len(), 16);
    }

    #[test]
    fn model2_and_model3_small_cases() {
        let c = model2_expand(&Gate::cnot(0, 2)).unwrap();
        assert_eq!(pairs(c.gates()), [(1, 0), (0, 1), (1, 2), (0, 1), (1, 0)]);
        let c = model3_expand(&Gate::cnot(0, 2)).unwrap();
        assert_eq!(pairs(c.gates()), [(2, 1), (1, 2), (0, 1), (1, 2), (2, 1)]);
        assert_eq!(model3_expand(&Gate::cnot(0, 3)).unwrap().len(), 9);
        let cv = model2_expand(&Gate::cv(0, 2)).unwrap();
        assert_eq!(cv.len(), 5);
        assert_eq!(cv.gates()[2], Gate::cv(1, 2));
    }

    #[test]
    fn models_reject_bad_inputs() {
        assert!(matches!(
            model1_expand(&Gate::cnot(1, 2)),
            Err(TransformError::AlreadyAdjacent(_))
        ));
        assert!(matches!(
            model3_expand(&Gate::cv(0, 2)),
            Err(TransformError::UnsupportedKind { .. })
        ));
        assert!(model1_expand(&Gate::toffoli(0, 1, 2)).is_err());
    }

    #[test]
    fn lnn_toffoli_is_exact_and_separable() {
        for (o, g) in [
            (ToffoliOrientation::TargetBelow, Gate::toffoli(0, 1, 2)),
            (ToffoliOrientation::TargetAbove, Gate::toffoli(1, 2, 0)),
        ] {
            let u = gate_unitary(&g, 3);
            let mut seen = std::collections::HashSet::new();
            for v in 0..LNN_TOFFOLI_VARIANTS {
                let c = lnn_toffoli3_variant(o, v);
                assert_eq!(c.len(), 9);
                assert!(c.is_lnn());
                assert_eq!(circuit_unitary(&c), u, "variant {v}");
                assert!(fourval::is_non_entangled(&c));
                assert!(seen.insert(c));
            }
            assert_eq!(lnn_toffoli3(o), lnn_toffoli3_variant(o, 0));
        }
    }

    #[test]
    fn toffoli_layout_examples() {
        let opts = TransformOptions::default();
        let c = t3_make_adjacent(&Gate::toffoli(0, 1, 3), &opts).unwrap();
        assert_eq!(
            pairs(c.gates()),
            [(3, 2), (2, 3), (0, 2), (2, 3), (3, 2)],
            "target walks up one line"
        );
        let c = t3_make_adjacent(&Gate::toffoli(0, 2, 1), &opts).unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c.gates()[2], Gate::toffoli(1, 2, 0));
        let larger = TransformOptions {
            direction_tiebreak: Direction::TowardLarger,
            ..opts
        };
        let c = t3_make_adjacent(&Gate::toffoli(0, 2, 1), &larger).unwrap();
        assert_eq!(c.gates()[2], Gate::toffoli(0, 1, 2));
    }

    #[test]
    fn mct_network_restores_work_lines() {
        let t4 = Gate::mct([0, 1, 2], 4).unwrap();
        let c = decompose_mct(&t4, 5, &TransformOptions::default()).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.gates().iter().all(|g| g.kind() == GateKind::Toffoli));
        assert!(equivalent(&c, &single(&t4, 5)).unwrap());
        let crowded = Gate::mct([0, 1, 2], 3).unwrap();
        let none = decompose_mct(&crowded, 4, &TransformOptions::default());
        assert!(matches!(
            none,
            Err(TransformError::InsufficientWorkingLines { .. })
        ));
    }

    #[test]
    fn mct_network_variants() {
        for (controls, target, n, work) in [
            (vec![0, 1, 2, 3], 4, 6, 1),
            (vec![0, 1, 2, 3], 4, 7, 2),
            (vec![0, 2, 4, 5, 6], 1, 8, 1),
            (vec![0, 2, 4, 5, 6], 1, 8, 2),
            (vec![0, 2, 4, 5, 6], 7, 10, 3),
        ] {
            let g = Gate::mct(controls, target).unwrap();
            let opts = TransformOptions {
                mct_working_lines: work,
                ..TransformOptions::default()
            };
            let c = decompose_mct(&g, n, &opts).unwrap();
            assert!(c.gates().iter().all(|x| x.kind() == GateKind::Toffoli));
            let want = fourval::simulate(&single(&g, n)).unwrap().as_permutation();
            let got = fourval::simulate(&c).unwrap().as_permutation();
            assert_eq!(got, want, "{g} with {work} working lines");
        }
    }

    #[test]
    fn toffoli_passes_through_decomposition() {
        let g = Gate::toffoli(0, 1, 2);
        let c = decompose_mct(&g, 3, &TransformOptions::default()).unwrap();
        assert_eq!(c.gates(), [g]);
    }

    #[test]
    fn synthesis_fixpoint_on_lnn_input() {
        let c = Circuit::from_gates(3, [Gate::cnot(0, 1), Gate::cv(2, 1), Gate::not(0)]).unwrap();
        assert_eq!(synthesize_lnn(&c, &TransformOptions::default()).unwrap(), c);
    }

    #[test]
    fn synthesis_of_two_gate_example() {
        let c = Circuit::from_gates(4, [Gate::toffoli(0, 1, 3), Gate::cnot(0, 3)]).unwrap();
        let out = synthesize_lnn(&c, &TransformOptions::default()).unwrap();
        assert!(out.is_lnn());
        assert_eq!(out.len(), 4 + 9 + 8);
        assert!(equivalent(&out, &c).unwrap());
        assert!(fourval::is_non_entangled(&out));
    }

    #[test]
    fn baseline_examples() {
        let c = Circuit::from_gates(3, [Gate::toffoli(0, 2, 1)]).unwrap();
        let b = swap_insert_baseline(&c).unwrap();
        assert_eq!(b.len(), 15);
        assert!(b.is_lnn());
        assert!(equivalent(&b, &c).unwrap());
        let adj = Circuit::from_gates(3, [Gate::cnot(1, 2), Gate::not(0)]).unwrap();
        assert_eq!(swap_insert_baseline(&adj).unwrap(), adj);
        let t4 = Circuit::from_gates(5, [Gate::mct([0, 1, 2], 4).unwrap()]).unwrap();
        let b = swap_insert_baseline(&t4).unwrap();
        assert!(b.is_lnn());
        assert!(equivalent(&b, &t4).unwrap());
    }

    #[test]
    fn bubble_swaps_sorts() {
        let to = [2, 0, 1, 3];
        let mut cur = vec![0, 1, 2, 3];
        for (a, b) in bubble_swaps(&[0, 1, 2, 3], &to) {
            cur.swap(a, b);
        }
        assert_eq!(cur, to);
    }
}
