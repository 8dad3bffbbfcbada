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

//! Concrete search spaces.

use std::io;

use ibig::IBig;

use super::engine::{read_varint, write_varint, SearchSpace};
use crate::circuit::{Gate, GateKind};
use crate::dyadic::DyadicGaussian;
use crate::fourval::{self, FourValuedImage, PackedState};
use crate::semantics::{Permutation, UnitaryMatrix};

/// Non-entangling circuits on up to three lines, tracked through their
/// four-valued images. The key packs the image of input `x` into bits
/// `2n*x .. 2n*(x+1)`.
pub struct SeparableSpace {
    num_lines: usize,
    gates: Vec<Gate>,
}

impl SeparableSpace {
    pub fn new(num_lines: usize, gates: Vec<Gate>) -> Self {
        assert!(
            (1..=3).contains(&num_lines),
            "packed images need at most 3 lines"
        );
        assert!(gates.iter().all(|g| g.max_line() < num_lines));
        SeparableSpace { num_lines, gates }
    }

    fn width(&self) -> usize {
        2 * self.num_lines
    }

    pub fn pack(&self, image: &FourValuedImage) -> u64 {
        let w = self.width();
        image
            .states()
            .iter()
            .enumerate()
            .fold(0, |k, (x, &s)| k | (s << (w * x)))
    }

    pub fn unpack(&self, key: u64) -> Vec<PackedState> {
        let w = self.width();
        let mask = (1u64 << w) - 1;
        (0..1usize << self.num_lines)
            .map(|x| (key >> (w * x)) & mask)
            .collect()
    }

    /// Applies `gate` to a packed image.
    pub fn apply_gate(&self, key: u64, gate: &Gate) -> Option<u64> {
        let w = self.width();
        let mask = (1u64 << w) - 1;
        let mut out = 0;
        for x in 0..1usize << self.num_lines {
            let s = fourval::step((key >> (w * x)) & mask, gate)?;
            out |= s << (w * x);
        }
        Some(out)
    }

    fn classical_image(&self, s: PackedState) -> Option<u32> {
        (0..self.num_lines).try_fold(0u32, |acc, l| match fourval::line_value(s, l) {
            fourval::LineValue::Zero => Some(acc << 1),
            fourval::LineValue::One => Some(acc << 1 | 1),
            _ => None,
        })
    }
}

impl SearchSpace for SeparableSpace {
    type Key = u64;

    fn num_lines(&self) -> usize {
        self.num_lines
    }

    fn root(&self) -> u64 {
        self.pack(&FourValuedImage::identity(self.num_lines))
    }

    fn moves(&self) -> &[Gate] {
        &self.gates
    }

    fn apply(&self, key: &u64, mv: usize) -> Option<u64> {
        self.apply_gate(*key, &self.gates[mv])
    }

    fn function(&self, key: &u64) -> Option<Permutation> {
        let images = self
            .unpack(*key)
            .into_iter()
            .map(|s| self.classical_image(s))
            .collect::<Option<Vec<_>>>()?;
        Permutation::new(images).ok()
    }

    fn key_bytes(&self, _: &u64) -> usize {
        8
    }

    fn write_key(&self, key: &u64, out: &mut Vec<u8>) {
        out.extend_from_slice(&key.to_le_bytes());
    }

    fn read_key(&self, input: &mut &[u8]) -> io::Result<u64> {
        if input.len() < 8 {
            return Err(io::ErrorKind::UnexpectedEof.into());
        }
        let (head, tail) = input.split_at(8);
        *input = tail;
        Ok(u64::from_le_bytes(head.try_into().unwrap()))
    }

    fn tag(&self) -> String {
        format!(
            "separable/{}/{}",
            self.num_lines,
            gate_list_tag(&self.gates)
        )
    }
}

fn gate_list_tag(gates: &[Gate]) -> String {
    gates
        .iter()
        .map(|g| g.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

/// Unitaries reachable from the identity, either exactly or up to a global
/// phase.
pub struct UnitarySpace {
    num_lines: usize,
    gates: Vec<Gate>,
    up_to_phase: bool,
}

impl UnitarySpace {
    pub fn new(num_lines: usize, gates: Vec<Gate>, up_to_phase: bool) -> Self {
        assert!(gates.iter().all(|g| g.max_line() < num_lines));
        UnitarySpace {
            num_lines,
            gates,
            up_to_phase,
        }
    }

    /// Compact canonical bytes of a unitary. Up to phase, the matrix is first
    /// rotated by the unit in {1, i, -1, -i} that puts its first non-zero
    /// entry in the quadrant `re > 0, im >= 0`; these are the only unit-modulus
    /// dyadic scalars, so two matrices differing by a phase share the key.
    pub fn encode(&self, u: &UnitaryMatrix) -> Box<[u8]> {
        let dim = u.dim();
        let mut rot = 0;
        if self.up_to_phase {
            let first = (0..dim)
                .flat_map(|c| (0..dim).map(move |r| (r, c)))
                .map(|(r, c)| u.get(r, c))
                .find(|e| !e.is_zero())
                .expect("unitary has a non-zero entry");
            let mut e = first.clone();
            while !(e.re_num() > &IBig::from(0u8) && e.im_num() >= &IBig::from(0u8)) {
                e = e.mul_i();
                rot += 1;
            }
        }
        let mut out = Vec::with_capacity(dim * dim * 2);
        for c in 0..dim {
            for r in 0..dim {
                let mut e = u.get(r, c).clone();
                for _ in 0..rot {
                    e = e.mul_i();
                }
                write_varint(u64::from(e.exp()), &mut out);
                write_varint(zigzag(e.re_num()), &mut out);
                write_varint(zigzag(e.im_num()), &mut out);
            }
        }
        out.into_boxed_slice()
    }

    pub fn decode(&self, key: &[u8]) -> UnitaryMatrix {
        let dim = 1usize << self.num_lines;
        let mut input = key;
        let mut cols = Vec::with_capacity(dim);
        for _ in 0..dim {
            let col = (0..dim)
                .map(|_| {
                    let exp = read_varint(&mut input).expect("valid key") as u32;
                    let re = unzigzag(read_varint(&mut input).expect("valid key"));
                    let im = unzigzag(read_varint(&mut input).expect("valid key"));
                    DyadicGaussian::new(re, im, exp)
                })
                .collect();
            cols.push(col);
        }
        UnitaryMatrix::from_columns(self.num_lines, cols)
    }
}

fn zigzag(x: &IBig) -> u64 {
    let v = i64::try_from(x).expect("numerator fits in 64 bits at searchable depths");
    ((v << 1) ^ (v >> 63)) as u64
}

fn unzigzag(v: u64) -> i64 {
    ((v >> 1) as i64) ^ -((v & 1) as i64)
}

impl SearchSpace for UnitarySpace {
    type Key = Box<[u8]>;

    fn num_lines(&self) -> usize {
        self.num_lines
    }

    fn root(&self) -> Box<[u8]> {
        self.encode(&UnitaryMatrix::identity(self.num_lines))
    }

    fn moves(&self) -> &[Gate] {
        &self.gates
    }

    fn apply(&self, key: &Box<[u8]>, mv: usize) -> Option<Box<[u8]>> {
        let mut u = self.decode(key);
        u.apply(&self.gates[mv]);
        Some(self.encode(&u))
    }

    fn function(&self, key: &Box<[u8]>) -> Option<Permutation> {
        let u = self.decode(key);
        if self.up_to_phase {
            u.as_permutation_up_to_phase()
        } else {
            u.as_permutation()
        }
    }

    fn key_bytes(&self, key: &Box<[u8]>) -> usize {
        key.len() + 16
    }

    fn write_key(&self, key: &Box<[u8]>, out: &mut Vec<u8>) {
        write_varint(key.len() as u64, out);
        out.extend_from_slice(key);
    }

    fn read_key(&self, input: &mut &[u8]) -> io::Result<Box<[u8]>> {
        let len = read_varint(input)? as usize;
        if input.len() < len {
            return Err(io::ErrorKind::UnexpectedEof.into());
        }
        let (head, tail) = input.split_at(len);
        *input = tail;
        Ok(head.into())
    }

    fn tag(&self) -> String {
        let kind = if self.up_to_phase { "phase" } else { "exact" };
        format!("{kind}/{}/{}", self.num_lines, gate_list_tag(&self.gates))
    }
}

/// Reversible functions on three lines reached by MCT gates. The key packs
/// `f(x)` into bits `3x .. 3x+3`.
pub struct MctSpace {
    gates: Vec<Gate>,
}

impl MctSpace {
    pub fn new(gates: Vec<Gate>) -> Self {
        assert!(gates.iter().all(|g| g.max_line() < 3
            && matches!(g.kind(), GateKind::Not | GateKind::Cnot | GateKind::Toffoli)));
        MctSpace { gates }
    }

    fn gate_image(gate: &Gate, x: u32) -> u32 {
        let bit = |l: usize| 1u32 << (2 - l);
        let cmask: u32 = gate.controls().iter().map(|c| bit(c.get())).sum();
        if x & cmask == cmask {
            x ^ bit(gate.target().get())
        } else {
            x
        }
    }
}

impl SearchSpace for MctSpace {
    type Key = u32;

    fn num_lines(&self) -> usize {
        3
    }

    fn root(&self) -> u32 {
        (0..8).fold(0, |k, x| k | (x << (3 * x)))
    }

    fn moves(&self) -> &[Gate] {
        &self.gates
    }

    fn apply(&self, key: &u32, mv: usize) -> Option<u32> {
        let g = &self.gates[mv];
        Some((0..8).fold(0, |k, x| {
            let y = (key >> (3 * x)) & 7;
            k | (Self::gate_image(g, y) << (3 * x))
        }))
    }

    fn function(&self, key: &u32) -> Option<Permutation> {
        Permutation::new((0..8).map(|x| (key >> (3 * x)) & 7).collect()).ok()
    }

    fn key_bytes(&self, _: &u32) -> usize {
        4
    }

    fn write_key(&self, key: &u32, out: &mut Vec<u8>) {
        out.extend_from_slice(&key.to_le_bytes());
    }

    fn read_key(&self, input: &mut &[u8]) -> io::Result<u32> {
        if input.len() < 4 {
            return Err(io::ErrorKind::UnexpectedEof.into());
        }
        let (head, tail) = input.split_at(4);
        *input = tail;
        Ok(u32::from_le_bytes(head.try_into().unwrap()))
    }

    fn tag(&self) -> String {
        format!("mct/3/{}", gate_list_tag(&self.gates))
    }
}
