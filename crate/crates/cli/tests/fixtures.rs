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

//! Every shipped fixture parses, round-trips, and relates to its source
//! circuit as its header says.

use std::fs;
use std::path::{Path, PathBuf};

use lnnsynth::real::RealDocument;
use lnnsynth::semantics::{entangling_input, equivalent};
use lnnsynth::Circuit;

fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn doc(name: &str) -> RealDocument {
    let text = fs::read_to_string(dir().join(format!("{name}.real"))).unwrap();
    RealDocument::parse(&text).unwrap()
}

fn circuit(name: &str) -> Circuit {
    doc(name).circuit
}

#[test]
fn fixtures_round_trip_byte_for_byte() {
    let mut n = 0;
    for entry in fs::read_dir(dir()).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let d = RealDocument::parse(&text).unwrap();
        assert_eq!(d.write(), text, "{}", path.display());
        n += 1;
    }
    assert!(n >= 40);
}

#[test]
fn realisations_match_their_sources() {
    let pairs = [
        ("toffoli-adjacent", "toffoli-lnn9"),
        ("toffoli-split", "toffoli-split-quantum"),
        ("toffoli-split", "toffoli-split-lnn13"),
        ("toffoli-cnot", "toffoli-cnot-swaps"),
        ("toffoli-cnot", "toffoli-cnot-swap-sequences"),
        ("toffoli-cnot", "toffoli-cnot-lnn13"),
        ("toffoli-cnot", "toffoli-cnot-lnn13b"),
        ("cnot-nnc1", "cnot-nnc1-model1"),
        ("cnot-nnc1", "cnot-nnc1-model2"),
        ("cnot-nnc1", "cnot-nnc1-model3"),
        ("cnot-nnc4", "cnot-nnc4-step1"),
        ("cnot-nnc4", "cnot-nnc4-step2"),
        ("cnot-nnc4", "cnot-nnc4-model1"),
        ("cnot-nnc4", "cnot-nnc4-move1"),
        ("cnot-nnc4", "cnot-nnc4-model2"),
        ("toffoli-6lines", "toffoli-6lines-adjacent"),
        ("toffoli-5lines", "toffoli-5lines-step1"),
        ("toffoli-5lines", "toffoli-5lines-adjacent"),
        ("two-cnots", "two-cnots-model1"),
        ("two-cnots", "two-cnots-model2"),
        ("two-cnots", "two-cnots-model3"),
        ("t4", "t4-lnn26"),
    ];
    for (a, b) in pairs {
        assert!(equivalent(&circuit(a), &circuit(b)).unwrap(), "{a} vs {b}");
    }
}

#[test]
fn swap_realisations_and_templates_are_identities_where_expected() {
    let swap = Circuit::from_gates(2, [lnnsynth::Gate::swap(0, 1)]).unwrap();
    for name in ["swap-cnots-a", "swap-cnots-b"] {
        assert!(equivalent(&circuit(name), &swap).unwrap(), "{name}");
    }
    for name in [
        "template-cnot6",
        "template-cnot9a",
        "template-cnot9b",
        "template-cnot10",
        "template-toffoli18",
    ] {
        let c = circuit(name);
        assert!(c.is_lnn());
        assert!(
            equivalent(&c, &Circuit::new(c.num_lines()).unwrap()).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn entanglement_of_fixtures() {
    assert_eq!(entangling_input(&circuit("entangled-cascade")), Some(0b010));
    assert!(entangling_input(&circuit("toffoli-split-lnn13")).is_some());
    for name in [
        "toffoli-lnn9",
        "toffoli-cnot-lnn13",
        "toffoli-cnot-lnn13b",
        "t4-lnn26",
        "toffoli-split-quantum",
    ] {
        assert_eq!(entangling_input(&circuit(name)), None, "{name}");
    }
}
