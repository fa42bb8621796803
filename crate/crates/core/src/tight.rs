//! Tight paths and cycles, and general overlap-`m` paths.
//!
//! In an (r-1)-tight structure a run of `k` consecutive blue edges is the
//! same thing as `k + r - 1` consecutive blue vertices, i.e. a run of
//! `k + r - 2` blue edges of the underlying path or cycle graph.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::counting::Counter;
use crate::error::{Error, Result};
use crate::structure::StructureSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TightKind {
    Path,
    Cycle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TightKey {
    pub r: usize,
    pub n: usize,
    pub k: usize,
    pub j: i64,
    pub kind: TightKind,
}

impl TightKey {
    pub fn path(r: usize, n: usize, k: usize, j: i64) -> Self {
        TightKey {
            r,
            n,
            k,
            j,
            kind: TightKind::Path,
        }
    }

    pub fn cycle(r: usize, n: usize, k: usize, j: i64) -> Self {
        TightKey {
            r,
            n,
            k,
            j,
            kind: TightKind::Cycle,
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self.kind {
            TightKind::Path => self.n + self.r - 1,
            TightKind::Cycle => self.n,
        }
    }

    pub fn spec(&self) -> StructureSpec {
        match self.kind {
            TightKind::Path => StructureSpec::TightPath {
                r: self.r,
                n: self.n,
            },
            TightKind::Cycle => StructureSpec::TightCycle {
                r: self.r,
                n: self.n,
            },
        }
    }

    fn validate(&self) -> Result<()> {
        self.spec().validate()?;
        if self.k < 1 {
            return Err(Error::invalid("run bound k must be >= 1"));
        }
        Ok(())
    }
}

/// Whether a reduction is being used outside the range where it was
/// originally stated (`k > r` for the tight path).
pub fn tight_path_outside_stated_range(r: usize, k: usize) -> bool {
    k <= r
}

impl Counter {
    /// `T_k(r, n, j) = F_{r+k-2}(2, r+n-2, j)`.
    pub fn t_tight(&self, key: TightKey) -> Result<BigUint> {
        let key = TightKey {
            kind: TightKind::Path,
            ..key
        };
        key.validate()?;
        self.path(2, key.r + key.n - 2, key.r + key.k - 2, key.j)
    }

    /// `TC_k(r, n, j)` on the `n`-vertex tight cycle, via the cycle graph on
    /// the same `n` vertices with run bound `k + r - 2`.
    ///
    /// The all-blue coloring is handled separately: the tight cycle has a
    /// window of `k` edges whenever `k <= n`, while the cycle graph needs
    /// `k + r - 2 <= n`.
    pub fn tc_tight(&self, key: TightKey) -> Result<BigUint> {
        let key = TightKey {
            kind: TightKind::Cycle,
            ..key
        };
        key.validate()?;
        let TightKey { r, n, k, j, .. } = key;
        if j == n as i64 {
            return Ok(if k > n {
                BigUint::one()
            } else {
                BigUint::zero()
            });
        }
        self.c_two_cycle(n, r + k - 2, j)
    }

    /// The identity `TC_k(r, n, j) = C_k(2, r+n-2, j)` exactly as it is
    /// sometimes stated. Its two sides range over `n` and `r + n - 2`
    /// vertices, so it is kept only to be checked against the oracle.
    pub fn tc_tight_as_printed(&self, key: TightKey) -> Result<BigUint> {
        let key = TightKey {
            kind: TightKind::Cycle,
            ..key
        };
        key.validate()?;
        self.cycle(2, key.r + key.n - 2, key.k, key.j)
    }

    /// Exhaustive count for the overlap-`m` r-path with `n` edges.
    pub fn m_tight_oracle_count(
        &self,
        r: usize,
        m: usize,
        n: usize,
        k: usize,
        j: i64,
    ) -> Result<BigUint> {
        let spec = StructureSpec::MTightPath { r, m, n };
        spec.validate()?;
        self.oracle().count(spec, k, j)
    }
}

/// One failed inequality in the overlap chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainViolation {
    pub j: usize,
    pub m: usize,
    pub tight: String,
    pub value: String,
    pub loose: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainRow {
    pub j: usize,
    /// Counts for `m = 1, ..., r - 1`, as decimal strings.
    pub counts: Vec<String>,
}

/// Result of checking `F(r-1) <= F(m) <= F(1)` for every overlap `m` and
/// every `j` on one `(r, n, k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub r: usize,
    pub n: usize,
    pub k: usize,
    pub vertex_counts: Vec<usize>,
    pub rows: Vec<ChainRow>,
    pub violations: Vec<ChainViolation>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub skipped: Option<String>,
}

impl ConjectureReport {
    pub fn holds(&self) -> bool {
        self.skipped.is_none() && self.violations.is_empty()
    }
}

/// Sweeps every overlap `m` in `1..r` and every `j` up to the loose path's
/// vertex count. Violations are recorded, not raised; a budget overrun
/// comes back as an error.
pub fn check_conjecture(
    counter: &Counter,
    r: usize,
    n: usize,
    k: usize,
) -> Result<ConjectureReport> {
    if r < 2 || n < 1 || k < 1 {
        return Err(Error::invalid(format!(
            "need r >= 2, n >= 1, k >= 1 (r={r}, n={n}, k={k})"
        )));
    }
    let specs: Vec<StructureSpec> = (1..r)
        .map(|m| StructureSpec::MTightPath { r, m, n })
        .collect();
    let mut tables = Vec::with_capacity(specs.len());
    for s in &specs {
        tables.push(counter.oracle().count_table(*s, k)?);
    }
    let max_v = specs
        .iter()
        .map(StructureSpec::vertex_count)
        .max()
        .unwrap_or(0);
    let at = |t: &Vec<BigUint>, j: usize| t.get(j).cloned().unwrap_or_else(BigUint::zero);
    let mut rows = Vec::with_capacity(max_v + 1);
    let mut violations = Vec::new();
    for j in 0..=max_v {
        let vals: Vec<BigUint> = tables.iter().map(|t| at(t, j)).collect();
        let loose = &vals[0];
        let tight = &vals[vals.len() - 1];
        for (idx, v) in vals.iter().enumerate() {
            if v < tight || v > loose {
                violations.push(ChainViolation {
                    j,
                    m: idx + 1,
                    tight: tight.to_string(),
                    value: v.to_string(),
                    loose: loose.to_string(),
                });
            }
        }
        rows.push(ChainRow {
            j,
            counts: vals.iter().map(BigUint::to_string).collect(),
        });
    }
    Ok(ConjectureReport {
        r,
        n,
        k,
        vertex_counts: specs.iter().map(StructureSpec::vertex_count).collect(),
        rows,
        violations,
        skipped: None,
    })
}
