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

//! Breadth-first search over a state space with deterministic witnesses.
//!
//! Each level is kept in the lexicographic order of its smallest witness
//! circuit, so the parent link stored for a state always spells the
//! lexicographically smallest minimal gate sequence reaching it. Expansion of
//! a level is data-parallel; the merge into the visited set is sequential and
//! keeps the first candidate in `(parent, move)` order, which makes levels,
//! counts and witnesses independent of the thread schedule.

use std::hash::Hash;
use std::io::{self, Read, Write};

use rustc_hash::{FxHashMap, FxHashSet};

use crate::circuit::{Circuit, Gate};
use crate::semantics::Permutation;

/// How a level is expanded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    /// Uses the rayon pool when the `parallel` feature is enabled.
    #[default]
    Parallel,
    Sequential,
}

/// A finite search space whose moves are gates.
pub trait SearchSpace: Sync {
    /// Compact canonical encoding of a state; equal keys mean equal states.
    type Key: Clone + Eq + Hash + Send + Sync;

    fn num_lines(&self) -> usize;
    fn root(&self) -> Self::Key;
    /// Gates in lexicographic order; move `i` applies `moves()[i]`.
    fn moves(&self) -> &[Gate];
    /// `None` when the move is not allowed from this state.
    fn apply(&self, key: &Self::Key, mv: usize) -> Option<Self::Key>;
    /// The reversible function a state realises, if it realises one.
    fn function(&self, key: &Self::Key) -> Option<Permutation>;
    /// Approximate heap plus inline bytes held per stored key.
    fn key_bytes(&self, key: &Self::Key) -> usize;
    fn write_key(&self, key: &Self::Key, out: &mut Vec<u8>);
    fn read_key(&self, input: &mut &[u8]) -> io::Result<Self::Key>;
    /// Short identifier stored in checkpoints.
    fn tag(&self) -> String;
}

#[derive(Clone, Debug, Default)]
pub struct Level<K> {
    pub keys: Vec<K>,
    parents: Vec<u32>,
    moves: Vec<u8>,
}

impl<K> Level<K> {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Limits {
    /// Deepest level to build.
    pub max_depth: Option<usize>,
    /// Stop before a level whose estimated footprint would exceed this.
    pub mem_budget: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// No new states: every reachable state has been visited.
    Exhausted,
    DepthLimit,
    MemoryBudget,
}

pub struct Bfs<S: SearchSpace> {
    space: S,
    levels: Vec<Level<S::Key>>,
    visited: FxHashSet<S::Key>,
    found: FxHashMap<Permutation, (u32, u32)>,
    bytes: usize,
    stop: Option<StopReason>,
}

const CHUNK: usize = 4096;

impl<S: SearchSpace> Bfs<S> {
    pub fn new(space: S) -> Self {
        let root = space.root();
        let mut bfs = Bfs {
            space,
            levels: Vec::new(),
            visited: FxHashSet::default(),
            found: FxHashMap::default(),
            bytes: 0,
            stop: None,
        };
        bfs.push_level(vec![(root, 0, 0)]);
        bfs
    }

    pub fn space(&self) -> &S {
        &self.space
    }

    pub fn into_space(self) -> S {
        self.space
    }

    pub fn levels(&self) -> &[Level<S::Key>] {
        &self.levels
    }

    /// Deepest fully built level.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn stop_reason(&self) -> Option<StopReason> {
        self.stop
    }

    /// True once the whole reachable space has been visited.
    pub fn is_exhausted(&self) -> bool {
        self.stop == Some(StopReason::Exhausted)
    }

    pub fn num_states(&self) -> usize {
        self.visited.len()
    }

    /// Estimated bytes held by the visited set and the levels.
    pub fn footprint(&self) -> usize {
        self.bytes
    }

    fn push_level(&mut self, entries: Vec<(S::Key, u32, u8)>) {
        let depth = self.levels.len() as u32;
        let mut level = Level {
            keys: Vec::with_capacity(entries.len()),
            parents: Vec::with_capacity(entries.len()),
            moves: Vec::with_capacity(entries.len()),
        };
        for (key, parent, mv) in entries {
            let inserted = self.visited.insert(key.clone());
            assert!(inserted, "state stored twice");
            self.bytes += 2 * self.space.key_bytes(&key) + 16;
            if let Some(f) = self.space.function(&key) {
                let idx = level.keys.len() as u32;
                let prev = self.found.insert(f, (depth, idx));
                assert!(prev.is_none(), "function reached at two depths");
            }
            level.keys.push(key);
            level.parents.push(parent);
            level.moves.push(mv);
        }
        self.levels.push(level);
    }

    fn expand_chunk(&self, offset: usize, chunk: &[S::Key]) -> Vec<(S::Key, u32, u8)> {
        let mut local: FxHashSet<S::Key> = FxHashSet::default();
        let mut out = Vec::new();
        for (i, key) in chunk.iter().enumerate() {
            for mv in 0..self.space.moves().len() {
                let Some(child) = self.space.apply(key, mv) else {
                    continue;
                };
                if self.visited.contains(&child) || !local.insert(child.clone()) {
                    continue;
                }
                out.push((child, (offset + i) as u32, mv as u8));
            }
        }
        out
    }

    /// Candidates for the next level, in `(parent, move)` order.
    fn expand(&self, exec: Exec) -> Vec<Vec<(S::Key, u32, u8)>> {
        let frontier = &self.levels.last().expect("root level").keys;
        #[cfg(feature = "parallel")]
        if exec == Exec::Parallel {
            use rayon::prelude::*;
            return frontier
                .par_chunks(CHUNK)
                .enumerate()
                .map(|(c, chunk)| self.expand_chunk(c * CHUNK, chunk))
                .collect();
        }
        let _ = exec;
        frontier
            .chunks(CHUNK)
            .enumerate()
            .map(|(c, chunk)| self.expand_chunk(c * CHUNK, chunk))
            .collect()
    }

    /// Builds one more level. Returns false when nothing new was reached.
    pub fn step(&mut self, exec: Exec) -> bool {
        let batches = self.expand(exec);
        let mut seen: FxHashSet<S::Key> = FxHashSet::default();
        let mut next = Vec::new();
        for batch in batches {
            for entry in batch {
                if seen.insert(entry.0.clone()) {
                    next.push(entry);
                }
            }
        }
        drop(seen);
        if next.is_empty() {
            self.stop = Some(StopReason::Exhausted);
            return false;
        }
        self.push_level(next);
        true
    }

    /// Builds levels until the space is exhausted or a limit is hit.
    pub fn run(&mut self, limits: Limits, exec: Exec) -> StopReason {
        loop {
            if self.stop == Some(StopReason::Exhausted) {
                return StopReason::Exhausted;
            }
            if limits.max_depth.is_some_and(|d| self.depth() >= d) {
                self.stop = Some(StopReason::DepthLimit);
                return StopReason::DepthLimit;
            }
            if let Some(budget) = limits.mem_budget {
                if self.estimate_next() > budget {
                    self.stop = Some(StopReason::MemoryBudget);
                    return StopReason::MemoryBudget;
                }
            }
            if !self.step(exec) {
                return StopReason::Exhausted;
            }
        }
    }

    /// Footprint after one more level, extrapolating the last growth ratio.
    fn estimate_next(&self) -> usize {
        let n = self.levels.len();
        let last = self.levels[n - 1].len().max(1);
        let prev = if n >= 2 {
            self.levels[n - 2].len().max(1)
        } else {
            1
        };
        let growth = (last as f64 / prev as f64).max(1.0);
        let per_state = self.bytes as f64 / self.visited.len().max(1) as f64;
        // expansion also holds the candidate lists
        let next = last as f64 * growth * per_state * 2.0;
        self.bytes + next as usize
    }

    /// Depth at which `f` was first reached.
    pub fn cost(&self, f: &Permutation) -> Option<usize> {
        self.found.get(f).map(|&(d, _)| d as usize)
    }

    pub fn functions(&self) -> impl Iterator<Item = (&Permutation, usize)> {
        self.found.iter().map(|(f, &(d, _))| (f, d as usize))
    }

    pub fn num_functions(&self) -> usize {
        self.found.len()
    }

    /// Functions first reached at each depth.
    pub fn function_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.levels.len()];
        for &(d, _) in self.found.values() {
            counts[d as usize] += 1;
        }
        counts
    }

    /// Gate sequence leading to the state at `(depth, index)`.
    pub fn path(&self, depth: usize, index: usize) -> Vec<Gate> {
        let mut gates = Vec::with_capacity(depth);
        let (mut d, mut i) = (depth, index);
        while d > 0 {
            let level = &self.levels[d];
            gates.push(self.space.moves()[level.moves[i] as usize].clone());
            i = level.parents[i] as usize;
            d -= 1;
        }
        gates.reverse();
        gates
    }

    /// The lexicographically smallest minimal circuit found for `f`.
    pub fn witness(&self, f: &Permutation) -> Option<Circuit> {
        let &(d, i) = self.found.get(f)?;
        let gates = self.path(d as usize, i as usize);
        Some(Circuit::from_gates(self.space.num_lines(), gates).expect("library gates fit"))
    }

    /// Writes every completed level.
    pub fn save_checkpoint(&self, w: &mut impl Write) -> io::Result<()> {
        let mut buf = Vec::new();
        buf.extend_from_slice(CHECKPOINT_MAGIC);
        let tag = self.space.tag();
        buf.extend_from_slice(&(tag.len() as u32).to_le_bytes());
        buf.extend_from_slice(tag.as_bytes());
        buf.push(u8::from(self.is_exhausted()));
        buf.extend_from_slice(&(self.levels.len() as u32).to_le_bytes());
        w.write_all(&buf)?;
        for level in &self.levels {
            buf.clear();
            buf.extend_from_slice(&(level.len() as u64).to_le_bytes());
            for i in 0..level.len() {
                buf.extend_from_slice(&level.parents[i].to_le_bytes());
                buf.push(level.moves[i]);
                self.space.write_key(&level.keys[i], &mut buf);
            }
            w.write_all(&buf)?;
        }
        Ok(())
    }

    /// Restores a search from a checkpoint written for the same space.
    pub fn load_checkpoint(space: S, r: &mut impl Read) -> io::Result<Self> {
        let mut data = Vec::new();
        r.read_to_end(&mut data)?;
        let mut input = data.as_slice();
        let bad = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
        if take(&mut input, CHECKPOINT_MAGIC.len())? != CHECKPOINT_MAGIC {
            return Err(bad("not a search checkpoint"));
        }
        let tag_len = read_u32(&mut input)? as usize;
        let tag = take(&mut input, tag_len)?;
        if tag != space.tag().as_bytes() {
            return Err(bad("checkpoint was written for a different search space"));
        }
        let exhausted = take(&mut input, 1)?[0] != 0;
        let num_levels = read_u32(&mut input)? as usize;
        let mut bfs = Bfs {
            space,
            levels: Vec::new(),
            visited: FxHashSet::default(),
            found: FxHashMap::default(),
            bytes: 0,
            stop: None,
        };
        for _ in 0..num_levels {
            let count = u64::from_le_bytes(take(&mut input, 8)?.try_into().unwrap()) as usize;
            let mut entries = Vec::with_capacity(count);
            for _ in 0..count {
                let parent = read_u32(&mut input)?;
                let mv = take(&mut input, 1)?[0];
                let key = bfs.space.read_key(&mut input)?;
                entries.push((key, parent, mv));
            }
            bfs.push_level(entries);
        }
        if bfs.levels.is_empty() || !input.is_empty() {
            return Err(bad("truncated or oversized checkpoint"));
        }
        if exhausted {
            bfs.stop = Some(StopReason::Exhausted);
        }
        Ok(bfs)
    }
}

const CHECKPOINT_MAGIC: &[u8; 8] = b"LNNBFS\x00\x01";

fn take<'a>(input: &mut &'a [u8], n: usize) -> io::Result<&'a [u8]> {
    if input.len() < n {
        return Err(io::Error::new(
            io::ErrorKind::UnexpectedEof,
            "truncated checkpoint",
        ));
    }
    let (head, tail) = input.split_at(n);
    *input = tail;
    Ok(head)
}

fn read_u32(input: &mut &[u8]) -> io::Result<u32> {
    Ok(u32::from_le_bytes(take(input, 4)?.try_into().unwrap()))
}

pub(crate) fn write_varint(mut v: u64, out: &mut Vec<u8>) {
    while v >= 0x80 {
        out.push((v as u8) | 0x80);
        v >>= 7;
    }
    out.push(v as u8);
}

pub(crate) fn read_varint(input: &mut &[u8]) -> io::Result<u64> {
    let mut v = 0u64;
    for shift in (0..64).step_by(7) {
        let b = take(input, 1)?[0];
        v |= u64::from(b & 0x7f) << shift;
        if b < 0x80 {
            return Ok(v);
        }
    }
    Err(io::Error::new(
        io::ErrorKind::InvalidData,
        "varint too long",
    ))
}
