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

//! Per-size comparison of the synthesis flows over every 3-line reversible
//! function, starting from minimal MCT circuits.

use std::collections::BTreeMap;
use std::fmt;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::Circuit;
use crate::pipeline::{synthesize_optimized, Effort, PipelineError};
use crate::search::{enumerate_optimal_mct, CostHistogram, Exec, LnnSearch};
use crate::templates::TemplateBase;
use crate::transform::{swap_insert_baseline, synthesize_lnn, TransformOptions};

#[derive(Clone, Debug, Default)]
pub struct ReportOptions {
    pub transform: TransformOptions,
    pub effort: Effort,
    pub exec: Exec,
}

/// Number of functions whose circuit has `size` gates, per column.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub size: usize,
    pub lnn: u64,
    pub mct: u64,
    pub ms: u64,
    pub m: u64,
    pub opt_m: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Averages {
    /// `None` unless the optimal search reached every function.
    pub lnn: Option<f64>,
    pub mct: f64,
    pub ms: f64,
    pub m: f64,
    pub opt_m: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub functions: usize,
    pub effort: Effort,
    pub lnn: Option<CostHistogram>,
    pub rows: Vec<ReportRow>,
    pub averages: Averages,
    /// Mean of `1 - opt_m / m` over functions with a non-empty M circuit.
    pub mean_reduction: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Sizes of one function's circuits in each flow.
#[derive(Clone, Copy, Debug)]
struct Sizes {
    mct: usize,
    ms: usize,
    m: usize,
    opt_m: usize,
}

fn sizes(c: &Circuit, base: &TemplateBase, opts: &ReportOptions) -> Result<Sizes, PipelineError> {
    let m = synthesize_lnn(c, &opts.transform)?.len();
    let opt_m = synthesize_optimized(c, &opts.transform, base, opts.effort)?
        .circuit
        .len();
    Ok(Sizes {
        mct: c.len(),
        ms: swap_insert_baseline(c)?.len(),
        m,
        opt_m,
    })
}

fn mean(values: impl Iterator<Item = usize>, n: usize) -> f64 {
    values.sum::<usize>() as f64 / n as f64
}

/// Runs every flow on a minimal MCT circuit of each 3-line function. `lnn`
/// supplies the optimal column when given.
pub fn table_report(
    base: &TemplateBase,
    opts: &ReportOptions,
    lnn: Option<&LnnSearch>,
) -> Result<Report, PipelineError> {
    let mct = enumerate_optimal_mct(opts.exec);
    let mut witnesses: Vec<Circuit> = mct
        .functions()
        .map(|(f, _)| mct.witness(f).expect("every found function has a witness"))
        .collect();
    witnesses.sort_by(|a, b| a.gates().cmp(b.gates()));
    let all: Vec<Sizes> = match opts.exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => witnesses
            .par_iter()
            .map(|c| sizes(c, base, opts))
            .collect::<Result<_, _>>()?,
        _ => witnesses
            .iter()
            .map(|c| sizes(c, base, opts))
            .collect::<Result<_, _>>()?,
    };
    let hist = lnn.map(LnnSearch::histogram);
    let mut rows: BTreeMap<usize, ReportRow> = BTreeMap::new();
    fn row(rows: &mut BTreeMap<usize, ReportRow>, size: usize) -> &mut ReportRow {
        rows.entry(size).or_insert(ReportRow {
            size,
            ..ReportRow::default()
        })
    }
    for s in &all {
        row(&mut rows, s.mct).mct += 1;
        row(&mut rows, s.ms).ms += 1;
        row(&mut rows, s.m).m += 1;
        row(&mut rows, s.opt_m).opt_m += 1;
    }
    if let Some(h) = &hist {
        for (&size, &count) in &h.counts {
            row(&mut rows, size).lnn += count;
        }
    }
    let n = all.len();
    let reductions: Vec<f64> = all
        .iter()
        .filter(|s| s.m > 0)
        .map(|s| 1.0 - s.opt_m as f64 / s.m as f64)
        .collect();
    Ok(Report {
        functions: n,
        effort: opts.effort,
        averages: Averages {
            lnn: hist
                .as_ref()
                .filter(|h| h.complete)
                .map(CostHistogram::average),
            mct: mean(all.iter().map(|s| s.mct), n),
            ms: mean(all.iter().map(|s| s.ms), n),
            m: mean(all.iter().map(|s| s.m), n),
            opt_m: mean(all.iter().map(|s| s.opt_m), n),
        },
        lnn: hist,
        rows: rows.into_values().collect(),
        mean_reduction: reductions.iter().sum::<f64>() / reductions.len().max(1) as f64,
    })
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>4} {:>7} {:>7} {:>7} {:>7} {:>7}",
            "size", "LNN", "MCT", "MS", "M", "Opt(M)"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>4} {:>7} {:>7} {:>7} {:>7} {:>7}",
                r.size, r.lnn, r.mct, r.ms, r.m, r.opt_m
            )?;
        }
        let a = &self.averages;
        let lnn = a.lnn.map_or("-".to_string(), |v| format!("{v:.2}"));
        writeln!(
            f,
            "{:>4} {:>7} {:>7.2} {:>7.2} {:>7.2} {:>7.2}",
            "AVG", lnn, a.mct, a.ms, a.m, a.opt_m
        )?;
        write!(
            f,
            "{} functions, mean Opt(M) reduction {:.1}%",
            self.functions,
            100.0 * self.mean_reduction
        )
    }
}
