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

//! Synthesis of reversible circuits for linear nearest neighbour
//! architectures.

pub mod circuit;
pub mod dyadic;
pub mod fourval;
pub mod pipeline;
pub mod real;
pub mod report;
pub mod search;
pub mod semantics;
pub mod templates;
pub mod transform;

pub use circuit::{Circuit, CircuitError, Gate, GateKind, LineIndex};
pub use semantics::{Permutation, StateVector, UnitaryMatrix};
