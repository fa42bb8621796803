//! Family-level dispatch between the recurrences and the oracle.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::Counter;
use crate::cycles::{CycleCountKey, Source, Sourced};
use crate::error::{Error, Result};
use crate::structure::StructureSpec;
use crate::tight::{tight_path_outside_stated_range, TightKey};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Formula,
    Oracle,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Formula => "formula",
            Engine::Oracle => "oracle",
        }
    }
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "formula" => Ok(Engine::Formula),
            "oracle" => Ok(Engine::Oracle),
            other => Err(Error::invalid(format!("unknown engine `{other}`"))),
        }
    }
}

/// A count table together with notes about how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tabulated {
    pub counts: Vec<BigUint>,
    pub notes: Vec<String>,
}

fn check_k(k: usize) -> Result<()> {
    if k < 1 {
        Err(Error::invalid("run bound k must be >= 1"))
    } else {
        Ok(())
    }
}

/// Caveats worth reporting alongside formula results for `spec`.
pub fn formula_notes(spec: &StructureSpec, k: usize) -> Vec<String> {
    let mut notes = Vec::new();
    match *spec {
        StructureSpec::TightPath { r, .. } if tight_path_outside_stated_range(r, k) => {
            notes.push(format!(
                "tight-path reduction used with k={k} <= r={r}; checked against the oracle"
            ));
        }
        StructureSpec::LooseCycle { r, n } if r == 2 && n < 4 || r >= 3 && n <= k + 2 => {
            notes.push(format!(
                "no cycle recurrence for n={n}, k={k}: counts delegated to the oracle"
            ));
        }
        StructureSpec::MTightPath { r, m, .. } if m != 1 && m != r - 1 => {
            notes.push(format!(
                "no recurrence for overlap m={m}: counts delegated to the oracle"
            ));
        }
        _ => {}
    }
    notes
}

/// One count for `spec` with run bound `k` and `j` blue vertices.
pub fn count(
    counter: &Counter,
    spec: StructureSpec,
    k: usize,
    j: i64,
    engine: Engine,
) -> Result<Sourced> {
    spec.validate()?;
    check_k(k)?;
    let formula = |value| {
        Ok(Sourced {
            value,
            source: Source::Formula,
        })
    };
    match (engine, spec) {
        (Engine::Oracle, _) => Ok(Sourced {
            value: counter.oracle().count(spec, k, j)?,
            source: Source::Oracle,
        }),
        (Engine::Formula, StructureSpec::LoosePath { r, n }) => formula(counter.path(r, n, k, j)?),
        (Engine::Formula, StructureSpec::LooseCycle { r, n }) => {
            counter.c_loose(CycleCountKey::new(r, n, k, j))
        }
        (Engine::Formula, StructureSpec::TightPath { r, n }) => {
            formula(counter.t_tight(TightKey::path(r, n, k, j))?)
        }
        (Engine::Formula, StructureSpec::TightCycle { r, n }) => {
            formula(counter.tc_tight(TightKey::cycle(r, n, k, j))?)
        }
        (Engine::Formula, StructureSpec::MTightPath { r, m, n }) => {
            if m == 1 {
                formula(counter.path(r, n, k, j)?)
            } else if m == r - 1 {
                formula(counter.t_tight(TightKey::path(r, n, k, j))?)
            } else {
                Ok(Sourced {
                    value: counter.m_tight_oracle_count(r, m, n, k, j)?,
                    source: Source::Oracle,
                })
            }
        }
    }
}

/// Counts for every `j` in `0..=vertex_count`.
pub fn table(
    counter: &Counter,
    spec: StructureSpec,
    k: usize,
    engine: Engine,
) -> Result<Tabulated> {
    spec.validate()?;
    check_k(k)?;
    let mut notes = Vec::new();
    let counts = match (engine, spec) {
        (Engine::Oracle, _) => counter.oracle().count_table(spec, k)?,
        (Engine::Formula, StructureSpec::LoosePath { r, n }) => counter.path_table(r, n, k)?,
        (Engine::Formula, _) => {
            notes.extend(formula_notes(&spec, k));
            let v = spec.vertex_count() as i64;
            let results: Result<Vec<Sourced>> = (0..=v)
                .into_par_iter()
                .map(|j| count(counter, spec, k, j, engine))
                .collect();
            results?.into_iter().map(|s| s.value).collect()
        }
    };
    Ok(Tabulated { counts, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Oracle;

    #[test]
    fn formula_and_oracle_tables_agree() {
        let c = Counter::with_oracle(Oracle::with_budget(26));
        let specs = [
            StructureSpec::LoosePath { r: 3, n: 4 },
            StructureSpec::LooseCycle { r: 3, n: 5 },
            StructureSpec::LooseCycle { r: 3, n: 4 },
            StructureSpec::LooseCycle { r: 2, n: 5 },
            StructureSpec::TightPath { r: 4, n: 5 },
            StructureSpec::TightCycle { r: 3, n: 7 },
            StructureSpec::MTightPath { r: 4, m: 2, n: 3 },
            StructureSpec::MTightPath { r: 4, m: 3, n: 4 },
        ];
        for spec in specs {
            for k in 1..=3 {
                let f = table(&c, spec, k, Engine::Formula).unwrap();
                let o = table(&c, spec, k, Engine::Oracle).unwrap();
                assert_eq!(f.counts, o.counts, "{spec} k={k}");
            }
        }
    }

    #[test]
    fn notes_flag_delegation() {
        assert!(formula_notes(&StructureSpec::LooseCycle { r: 3, n: 4 }, 2)[0].contains("oracle"));
        assert!(formula_notes(&StructureSpec::LooseCycle { r: 3, n: 6 }, 2).is_empty());
        assert!(!formula_notes(&StructureSpec::TightPath { r: 3, n: 6 }, 2).is_empty());
        assert!(formula_notes(&StructureSpec::TightPath { r: 3, n: 6 }, 4).is_empty());
    }
}
