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

//! Nearest-neighbour synthesis followed by template optimisation, trying
//! several transformation choices and keeping the smallest result.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::Circuit;
use crate::templates::{optimize, OptimizeError, RewriteTrace, TemplateBase};
use crate::transform::{
    placed_toffolis, synthesize_lnn, Direction, ModelKind, TransformError, TransformOptions,
    LNN_TOFFOLI_VARIANTS,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Optimize(#[from] OptimizeError),
}

/// How much of the choice space to explore.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Effort {
    /// Use the given options only.
    Fixed,
    /// Also try each CNOT model first and both target directions.
    #[default]
    Quick,
    /// Additionally pick a realisation for every Toffoli by coordinate
    /// descent.
    Thorough,
}

impl fmt::Display for Effort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Effort::Fixed => "fixed",
            Effort::Quick => "quick",
            Effort::Thorough => "thorough",
        })
    }
}

impl FromStr for Effort {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fixed" => Ok(Effort::Fixed),
            "quick" => Ok(Effort::Quick),
            "thorough" => Ok(Effort::Thorough),
            _ => Err(format!("unknown effort `{s}` (fixed, quick, thorough)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    /// Result of the transformation before optimisation.
    pub unoptimized: Circuit,
    pub circuit: Circuit,
    pub options: TransformOptions,
    pub trace: RewriteTrace,
}

fn run(
    c: &Circuit,
    opts: &TransformOptions,
    base: &TemplateBase,
) -> Result<Synthesis, PipelineError> {
    let unoptimized = synthesize_lnn(c, opts)?;
    let (circuit, trace) = optimize(&unoptimized, base)?;
    Ok(Synthesis {
        unoptimized,
        circuit,
        options: opts.clone(),
        trace,
    })
}

fn keep_better(best: &mut Synthesis, candidate: Synthesis) -> bool {
    if candidate.circuit.len() < best.circuit.len() {
        *best = candidate;
        true
    } else {
        false
    }
}

fn model_variants(opts: &TransformOptions) -> Vec<TransformOptions> {
    let mut out = vec![opts.clone()];
    for first in [ModelKind::Model1, ModelKind::Model2, ModelKind::Model3] {
        for dir in [Direction::TowardSmaller, Direction::TowardLarger] {
            let mut pref = vec![first];
            pref.extend(opts.model_preference.iter().filter(|&&m| m != first));
            let v = TransformOptions {
                model_preference: pref,
                direction_tiebreak: dir,
                ..opts.clone()
            };
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

/// Picks a realisation per Toffoli: first the same one everywhere, then per
/// group of Toffolis on the same lines, then per Toffoli, until no single
/// change helps.
fn descend_variants(
    c: &Circuit,
    best: &mut Synthesis,
    base: &TemplateBase,
) -> Result<(), PipelineError> {
    let sites = placed_toffolis(c, &best.options)?;
    if sites.is_empty() {
        return Ok(());
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut keys = Vec::new();
    for (i, g) in sites.iter().enumerate() {
        match keys.iter().position(|k| k == g) {
            Some(j) => groups[j].push(i),
            None => {
                keys.push(g.clone());
                groups.push(vec![i]);
            }
        }
    }
    let singles: Vec<Vec<usize>> = (0..sites.len()).map(|i| vec![i]).collect();
    let everything = vec![(0..sites.len()).collect::<Vec<_>>()];
    let chosen = &best.options.toffoli_variants;
    let mut current: Vec<usize> = (0..sites.len())
        .map(|i| chosen.get(i).copied().unwrap_or(0))
        .collect();
    for moves in [&everything, &groups, &singles] {
        loop {
            let mut improved = false;
            for members in moves.iter() {
                for v in 0..LNN_TOFFOLI_VARIANTS {
                    if members.iter().all(|&i| current[i] == v) {
                        continue;
                    }
                    let mut trial = current.clone();
                    for &i in members {
                        trial[i] = v;
                    }
                    let opts = TransformOptions {
                        toffoli_variants: trial.clone(),
                        ..best.options.clone()
                    };
                    if keep_better(best, run(c, &opts, base)?) {
                        current = trial;
                        improved = true;
                    }
                }
            }
            if !improved || moves.len() == 1 {
                break;
            }
        }
    }
    Ok(())
}

/// Transforms `c` into a nearest-neighbour circuit and optimises it with
/// `base`, returning the smallest circuit found under `effort`.
pub fn synthesize_optimized(
    c: &Circuit,
    opts: &TransformOptions,
    base: &TemplateBase,
    effort: Effort,
) -> Result<Synthesis, PipelineError> {
    let mut best = run(c, opts, base)?;
    if effort == Effort::Fixed {
        return Ok(best);
    }
    for v in model_variants(opts).into_iter().skip(1) {
        keep_better(&mut best, run(c, &v, base)?);
    }
    if effort == Effort::Thorough {
        descend_variants(c, &mut best, base)?;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::semantics::equivalent;

    #[test]
    fn fixed_effort_is_plain_transform_then_optimize() {
        let c = Circuit::from_gates(4, [Gate::toffoli(0, 1, 3), Gate::cnot(0, 3)]).unwrap();
        let opts = TransformOptions::default();
        let s = synthesize_optimized(&c, &opts, &TemplateBase::builtin(), Effort::Fixed).unwrap();
        assert_eq!(s.unoptimized, synthesize_lnn(&c, &opts).unwrap());
        assert!(s.circuit.len() <= s.unoptimized.len());
    }

    #[test]
    fn quick_effort_reaches_thirteen_gates_on_toffoli_plus_cnot() {
        let c = Circuit::from_gates(4, [Gate::toffoli(0, 1, 3), Gate::cnot(0, 3)]).unwrap();
        let s = synthesize_optimized(
            &c,
            &TransformOptions::default(),
            &TemplateBase::builtin(),
            Effort::Quick,
        )
        .unwrap();
        assert_eq!(s.circuit.len(), 13);
        assert!(s.circuit.is_lnn());
        assert!(equivalent(&s.circuit, &c).unwrap());
    }
}
