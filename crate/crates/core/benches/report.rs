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

use criterion::{criterion_group, criterion_main, Criterion};
use lnnsynth::pipeline::Effort;
use lnnsynth::report::{table_report, ReportOptions};
use lnnsynth::search::Exec;
use lnnsynth::templates::TemplateBase;

fn report(c: &mut Criterion) {
    let base = TemplateBase::standard();
    let mut group = c.benchmark_group("report");
    group.sample_size(10);
    for (name, exec) in [
        ("parallel", Exec::Parallel),
        ("sequential", Exec::Sequential),
    ] {
        let opts = ReportOptions {
            effort: Effort::Fixed,
            exec,
            ..ReportOptions::default()
        };
        group.bench_function(name, |b| {
            b.iter(|| table_report(&base, &opts, None).unwrap().averages.opt_m)
        });
    }
    group.finish();
}

criterion_group!(benches, report);
criterion_main!(benches);
