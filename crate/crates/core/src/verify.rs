//! Formula-versus-oracle verification runs.
//!
//! Each [`Theorem`] names one recurrence or reduction. A run evaluates it on
//! every applicable point of a parameter grid and compares the result with
//! exhaustive enumeration (filtered to the matching case where the formula
//! counts only part of the colorings). Suspect variants, exactly as they are
//! commonly written down, are kept so that the harness can show where they
//! go wrong.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::{base_case, binom, Counter};
use crate::cycles::{
    blue_run_predicate, not_blue_case_predicates, CycleCountKey, CycleLabels, RunMultiplicity,
};
use crate::error::{Error, Result};
use crate::oracle::Predicate;
use crate::structure::StructureSpec;
use crate::tight::{tight_path_outside_stated_range, TightKey};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    BaseCases,
    StarLemma,
    SingleEdge,
    Graph,
    ThreeUniform,
    General,
    GeneralAsPrinted,
    Prefix,
    PrefixAsPrinted,
    TightPath,
    TightCycle,
    TightCycleAsPrinted,
    TwoCycle,
    CycleSplit,
    CycleNotBlue,
    CycleBlue,
    CycleBlueAsPrinted,
    CycleBlueRunPlusOne,
}

impl Theorem {
    pub const ALL: [Theorem; 18] = [
        Theorem::BaseCases,
        Theorem::StarLemma,
        Theorem::SingleEdge,
        Theorem::Graph,
        Theorem::ThreeUniform,
        Theorem::General,
        Theorem::GeneralAsPrinted,
        Theorem::Prefix,
        Theorem::PrefixAsPrinted,
        Theorem::TightPath,
        Theorem::TightCycle,
        Theorem::TightCycleAsPrinted,
        Theorem::TwoCycle,
        Theorem::CycleSplit,
        Theorem::CycleNotBlue,
        Theorem::CycleBlue,
        Theorem::CycleBlueAsPrinted,
        Theorem::CycleBlueRunPlusOne,
    ];

    /// Identifier accepted by `verify --theorem`.
    pub fn id(self) -> &'static str {
        match self {
            Theorem::BaseCases => "prop3.2",
            Theorem::StarLemma => "lemma3.6",
            Theorem::SingleEdge => "thm3.7",
            Theorem::Graph => "thm3.8",
            Theorem::ThreeUniform => "thm3.9",
            Theorem::General => "thm3.10",
            Theorem::GeneralAsPrinted => "thm3.10-as-printed",
            Theorem::Prefix => "prop3.11",
            Theorem::PrefixAsPrinted => "prop3.11-as-printed",
            Theorem::TightPath => "thm4.2",
            Theorem::TightCycle => "thm4.6",
            Theorem::TightCycleAsPrinted => "thm4.6-as-printed",
            Theorem::TwoCycle => "thm4.8",
            Theorem::CycleSplit => "thm4.9",
            Theorem::CycleNotBlue => "thm4.10",
            Theorem::CycleBlue => "thm4.11",
            Theorem::CycleBlueAsPrinted => "thm4.11-as-printed",
            Theorem::CycleBlueRunPlusOne => "thm4.11-multiplicity-l+1",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.id() == id)
            .ok_or_else(|| Error::invalid(format!("unknown theorem id `{id}`")))
    }

    /// Variants kept to demonstrate known errors; excluded from default runs.
    pub fn is_suspect(self) -> bool {
        matches!(
            self,
            Theorem::GeneralAsPrinted
                | Theorem::PrefixAsPrinted
                | Theorem::TightCycleAsPrinted
                | Theorem::CycleBlueAsPrinted
                | Theorem::CycleBlueRunPlusOne
        )
    }

    pub fn defaults() -> Vec<Theorem> {
        Theorem::ALL
            .into_iter()
            .filter(|t| !t.is_suspect())
            .collect()
    }

    fn applies(self, r: usize, n: usize, k: usize) -> bool {
        match self {
            Theorem::BaseCases => n >= k,
            Theorem::StarLemma => n >= 1,
            Theorem::SingleEdge => r >= 3 && k == 1 && n >= 2,
            Theorem::Graph => r == 2 && n > k,
            Theorem::ThreeUniform => r == 3 && k > 1 && n > k,
            Theorem::General | Theorem::GeneralAsPrinted => r >= 4 && k > 1 && n > k,
            Theorem::Prefix | Theorem::PrefixAsPrinted => r >= 3 && k > 1 && n > k,
            Theorem::TightPath => r >= 3 && n >= 1,
            Theorem::TightCycle | Theorem::TightCycleAsPrinted => r >= 3 && n >= 2 * r,
            Theorem::TwoCycle => r == 2 && n >= 4,
            Theorem::CycleSplit | Theorem::CycleNotBlue | Theorem::CycleBlue => r >= 3 && n > k + 2,
            Theorem::CycleBlueAsPrinted | Theorem::CycleBlueRunPlusOne => {
                r >= 3 && k > 1 && n > k + 2
            }
        }
    }

    fn spec(self, r: usize, n: usize) -> StructureSpec {
        match self {
            Theorem::TightPath => StructureSpec::TightPath { r, n },
            Theorem::TightCycle | Theorem::TightCycleAsPrinted => {
                StructureSpec::TightCycle { r, n }
            }
            Theorem::TwoCycle
            | Theorem::CycleSplit
            | Theorem::CycleNotBlue
            | Theorem::CycleBlue
            | Theorem::CycleBlueAsPrinted
            | Theorem::CycleBlueRunPlusOne => StructureSpec::LooseCycle { r, n },
            _ => StructureSpec::LoosePath { r, n },
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Parameter ranges swept by a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub preset: Option<String>,
    pub r: Vec<usize>,
    pub n: Vec<usize>,
    pub k: Vec<usize>,
}

impl Grid {
    pub fn new(r: Vec<usize>, n: Vec<usize>, k: Vec<usize>) -> Self {
        Grid {
            preset: None,
            r,
            n,
            k,
        }
    }

    pub fn small() -> Self {
        Grid {
            preset: Some("small".into()),
            r: vec![2, 3, 4],
            n: (1..=7).collect(),
            k: vec![1, 2, 3],
        }
    }

    pub fn full() -> Self {
        Grid {
            preset: Some("full".into()),
            r: vec![2, 3, 4, 5],
            n: (1..=9).collect(),
            k: vec![1, 2, 3],
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "small" => Ok(Grid::small()),
            "full" => Ok(Grid::full()),
            other => Err(Error::invalid(format!("unknown grid preset `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Params {
    pub r: usize,
    pub n: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub j: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub case: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub theorem: String,
    pub params: Params,
    pub formula: Option<String>,
    pub oracle: Option<String>,
    /// `None` for skipped instances.
    #[serde(rename = "match")]
    pub matched: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Summary {
    /// Compared instances (skipped ones excluded).
    pub total: usize,
    pub mismatches: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorems: Vec<String>,
    pub grid: Grid,
    pub results: Vec<Record>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn all_matched(&self) -> bool {
        self.summary.mismatches == 0
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &Record> {
        self.results.iter().filter(|r| r.matched == Some(false))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

fn record(theorem: Theorem, params: Params, formula: &BigUint, oracle: &BigUint) -> Record {
    Record {
        theorem: theorem.id().to_string(),
        params,
        formula: Some(formula.to_string()),
        oracle: Some(oracle.to_string()),
        matched: Some(formula == oracle),
        note: None,
    }
}

fn at(table: &[BigUint], j: usize) -> BigUint {
    table.get(j).cloned().unwrap_or_else(BigUint::zero)
}

/// Runs every theorem in `theorems` over `grid`.
pub fn run(counter: &Counter, theorems: &[Theorem], grid: &Grid) -> VerificationReport {
    let mut groups = Vec::new();
    for &t in theorems {
        for &r in &grid.r {
            for &n in &grid.n {
                for &k in &grid.k {
                    if r >= 2 && k >= 1 && t.applies(r, n, k) {
                        groups.push((t, r, n, k));
                    }
                }
            }
        }
    }
    let results: Vec<Record> = groups
        .par_iter()
        .map(|&(t, r, n, k)| run_group(counter, t, r, n, k))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let summary = Summary {
        total: results.iter().filter(|r| r.matched.is_some()).count(),
        mismatches: results.iter().filter(|r| r.matched == Some(false)).count(),
        skipped: results.iter().filter(|r| r.matched.is_none()).count(),
    };
    VerificationReport {
        theorems: theorems.iter().map(|t| t.id().to_string()).collect(),
        grid: grid.clone(),
        results,
        summary,
    }
}

fn run_group(counter: &Counter, t: Theorem, r: usize, n: usize, k: usize) -> Vec<Record> {
    let spec = t.spec(r, n);
    let base = Params {
        r,
        n,
        k,
        ..Params::default()
    };
    match group_records(counter, t, spec, r, n, k) {
        Ok(records) => records,
        Err(e) => vec![Record {
            theorem: t.id().to_string(),
            params: base,
            formula: None,
            oracle: None,
            matched: None,
            note: Some(e.to_string()),
        }],
    }
}

fn group_records(
    counter: &Counter,
    t: Theorem,
    spec: StructureSpec,
    r: usize,
    n: usize,
    k: usize,
) -> Result<Vec<Record>> {
    let oracle = counter.oracle();
    let v = spec.vertex_count();
    let js = 0..=v as i64;
    let p = |j: i64| Params {
        r,
        n,
        k,
        j: Some(j),
        ..Params::default()
    };
    let ni = n as i64;
    let mut out = Vec::new();
    match t {
        Theorem::BaseCases => {
            let table = oracle.count_table(spec, k)?;
            for j in js {
                let key = crate::counting::CountKey::new(r, n, k, j);
                if let Some(b) = base_case(key) {
                    out.push(record(t, p(j), &b, &at(&table, j as usize)));
                }
            }
        }
        Theorem::StarLemma => {
            let table = oracle.count_filtered_table(spec, k, &Predicate::vertex_red(0))?;
            for j in js {
                out.push(record(
                    t,
                    p(j),
                    &counter.f_star(r, n, k, j)?,
                    &at(&table, j as usize),
                ));
            }
        }
        Theorem::SingleEdge
        | Theorem::Graph
        | Theorem::ThreeUniform
        | Theorem::General
        | Theorem::GeneralAsPrinted => {
            let table = oracle.count_table(spec, k)?;
            for j in js {
                let formula = match t {
                    Theorem::SingleEdge => counter.single_edge_rhs(r, ni, j),
                    Theorem::Graph => counter.graph_rhs(ni, k, j),
                    Theorem::ThreeUniform => counter.three_uniform_rhs(ni, k, j),
                    Theorem::General => counter.general_rhs(r, ni, k, j),
                    _ => general_as_printed(counter, r, ni, k, j),
                };
                out.push(record(t, p(j), &formula, &at(&table, j as usize)));
            }
        }
        Theorem::Prefix | Theorem::PrefixAsPrinted => {
            for l in 1..k {
                let table = oracle.count_filtered_table(spec, k, &Predicate::BluePrefix(l))?;
                for j in js.clone() {
                    let formula = if t == Theorem::Prefix {
                        counter.f_prefix(r, n, k, l, j)?
                    } else {
                        prefix_as_printed(counter, r, ni, k, l, j)
                    };
                    let params = Params { l: Some(l), ..p(j) };
                    out.push(record(t, params, &formula, &at(&table, j as usize)));
                }
            }
        }
        Theorem::TightPath => {
            let table = oracle.count_table(spec, k)?;
            let note = tight_path_outside_stated_range(r, k)
                .then(|| format!("k={k} <= r={r}: outside the originally stated range"));
            for j in js {
                let mut rec = record(
                    t,
                    p(j),
                    &counter.t_tight(TightKey::path(r, n, k, j))?,
                    &at(&table, j as usize),
                );
                rec.note = note.clone();
                out.push(rec);
            }
        }
        Theorem::TightCycle | Theorem::TightCycleAsPrinted => {
            let table = oracle.count_table(spec, k)?;
            for j in js {
                let key = TightKey::cycle(r, n, k, j);
                let mut rec = if t == Theorem::TightCycle {
                    record(t, p(j), &counter.tc_tight(key)?, &at(&table, j as usize))
                } else {
                    record(
                        t,
                        p(j),
                        &counter.tc_tight_as_printed(key)?,
                        &at(&table, j as usize),
                    )
                };
                if t == Theorem::TightCycleAsPrinted {
                    rec.note = Some(format!(
                        "left side: tight cycle on {n} vertices; right side: cycle graph on {} vertices",
                        r + n - 2
                    ));
                }
                out.push(rec);
            }
        }
        Theorem::TwoCycle => {
            let table = oracle.count_table(spec, k)?;
            for j in js {
                out.push(record(
                    t,
                    p(j),
                    &counter.c_two_cycle(n, k, j)?,
                    &at(&table, j as usize),
                ));
            }
        }
        Theorem::CycleSplit => {
            let table = oracle.count_table(spec, k)?;
            for j in js {
                let key = CycleCountKey::new(r, n, k, j);
                let formula = counter.c_nb(key)? + counter.c_b(key)?;
                out.push(record(t, p(j), &formula, &at(&table, j as usize)));
            }
        }
        Theorem::CycleNotBlue => {
            let en = CycleLabels::new(r, n).edge(n);
            let total = oracle.count_filtered_table(
                spec,
                k,
                &Predicate::negate(Predicate::EdgeBlue(en)),
            )?;
            let cases = not_blue_case_predicates(r, n);
            let mut case_tables = Vec::with_capacity(cases.len());
            for (_, pred) in &cases {
                case_tables.push(oracle.count_filtered_table(spec, k, pred)?);
            }
            for j in js {
                let terms = counter.c_nb_terms(CycleCountKey::new(r, n, k, j))?;
                let params = Params {
                    case: Some("total".into()),
                    ..p(j)
                };
                out.push(record(t, params, &terms.total(), &at(&total, j as usize)));
                for ((name, _), (value, table)) in
                    cases.iter().zip(terms.flatten().iter().zip(&case_tables))
                {
                    let params = Params {
                        case: Some(name.clone()),
                        ..p(j)
                    };
                    out.push(record(t, params, value, &at(table, j as usize)));
                }
            }
        }
        Theorem::CycleBlue | Theorem::CycleBlueAsPrinted | Theorem::CycleBlueRunPlusOne => {
            let en = CycleLabels::new(r, n).edge(n);
            let total = oracle.count_filtered_table(spec, k, &Predicate::EdgeBlue(en))?;
            let run_tables = if t == Theorem::CycleBlue {
                (1..k)
                    .map(|run| oracle.count_filtered_table(spec, k, &blue_run_predicate(r, n, run)))
                    .collect::<Result<Vec<_>>>()?
            } else {
                Vec::new()
            };
            for j in js {
                let key = CycleCountKey::new(r, n, k, j);
                let formula = match t {
                    Theorem::CycleBlue => counter.c_b(key)?,
                    Theorem::CycleBlueRunPlusOne => counter
                        .c_b_terms(key, RunMultiplicity::RunLengthPlusOne)?
                        .iter()
                        .map(|term| term.total())
                        .sum(),
                    _ => cycle_blue_as_printed(counter, r, ni, k, j),
                };
                let params = Params {
                    case: Some("total".into()),
                    ..p(j)
                };
                out.push(record(t, params, &formula, &at(&total, j as usize)));
                if t == Theorem::CycleBlue {
                    let terms = counter.c_b_terms(key, RunMultiplicity::RunLength)?;
                    for (term, table) in terms.iter().zip(&run_tables) {
                        let params = Params {
                            l: Some(term.run),
                            case: Some("run".into()),
                            ..p(j)
                        };
                        out.push(record(t, params, &term.total(), &at(table, j as usize)));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// General path recurrence with the index expressions as commonly printed:
/// the prefix sums use the summation index `i` where the edge count should
/// depend on the prefix length.
fn general_as_printed(c: &Counter, r: usize, n: i64, k: usize, j: i64) -> BigUint {
    let (ri, f) = (r as i64, |n: i64, j: i64| c.f(r, n, k, j));
    let mut total = BigUint::zero();
    for i in 0..=ri - 2 {
        total += f(n - 2, j - i - (ri - 1)) * binom(ri - 2, i);
        total += f(n - 1, j - i) * binom(ri - 1, i);
    }
    for l in 1..k as i64 {
        for i in 0..=ri - 3 {
            total += f(n - (i + 1), j - l * (ri - 1) - 1 - i) * binom(ri - 2, i);
        }
        for i in 0..=ri - 2 {
            total += f(n - (i + 2), j - (i + 1) * (ri - 1) - i) * binom(ri - 2, i);
        }
    }
    total
}

/// Prefix count with the edge offsets one smaller than they should be.
fn prefix_as_printed(c: &Counter, r: usize, n: i64, k: usize, l: usize, j: i64) -> BigUint {
    let (ri, li, f) = (r as i64, l as i64, |n: i64, j: i64| c.f(r, n, k, j));
    let mut total = BigUint::zero();
    for i in 0..=ri - 3 {
        total += f(n - li, j - li * (ri - 1) - 1 - i) * binom(ri - 2, i);
    }
    for i in 0..=ri - 2 {
        total += f(n - (li + 1), j - (li + 1) * (ri - 1) - i) * binom(ri - 2, i);
    }
    total
}

/// Blue-edge cycle count as commonly printed: the first term's edge count
/// is `k - l - 2` and its second interior index runs to `r - 2`.
fn cycle_blue_as_printed(c: &Counter, r: usize, n: i64, k: usize, j: i64) -> BigUint {
    let (ri, ki, f) = (r as i64, k as i64, |n: i64, j: i64| c.f(r, n, k, j));
    let mut total = BigUint::zero();
    for l in 1..ki {
        let rest = j - l * (ri - 1) - 1;
        for a in 0..=ri - 3 {
            for b in 0..=ri - 2 {
                let w = binom(ri - 2, a) * binom(ri - 2, b) * l as u64;
                total += f(ki - l - 2, rest - a - b) * &w;
                total += f(n - l - 3, rest - a - b - (ri - 2)) * &w * 2u32;
            }
        }
        for a in 0..=2 * ri - 4 {
            total += f(n - l - 4, rest - 2 * (ri - 2) - a) * binom(2 * ri - 4, a) * l as u64;
        }
    }
    total
}
