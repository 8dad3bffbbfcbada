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

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lnnsynth::search::{enumerate_optimal_lnn, enumerate_optimal_mct, Convention, Exec, Limits};

fn execs() -> [(&'static str, Exec); 2] {
    [
        ("parallel", Exec::Parallel),
        ("sequential", Exec::Sequential),
    ]
}

fn lnn_prefix(c: &mut Criterion) {
    let mut group = c.benchmark_group("lnn-bfs");
    group.sample_size(10);
    for depth in [8, 11] {
        for (name, exec) in execs() {
            group.bench_with_input(BenchmarkId::new(name, depth), &depth, |b, &d| {
                b.iter(|| {
                    let limits = Limits {
                        max_depth: Some(d),
                        mem_budget: None,
                    };
                    enumerate_optimal_lnn(Convention::Separable, limits, exec).num_states()
                })
            });
        }
    }
    group.finish();
}

fn mct(c: &mut Criterion) {
    let mut group = c.benchmark_group("mct-bfs");
    for (name, exec) in execs() {
        group.bench_function(name, |b| {
            b.iter(|| enumerate_optimal_mct(exec).num_functions())
        });
    }
    group.finish();
}

criterion_group!(benches, lnn_prefix, mct);
criterion_main!(benches);
