//! Hypergraph family descriptors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Family tag, serialized with the same spelling the command line accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    LoosePath,
    LooseCycle,
    TightPath,
    TightCycle,
    MTightPath,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::LoosePath => "loose-path",
            Family::LooseCycle => "loose-cycle",
            Family::TightPath => "tight-path",
            Family::TightCycle => "tight-cycle",
            Family::MTightPath => "m-tight-path",
        }
    }

    pub fn is_cyclic(self) -> bool {
        matches!(self, Family::LooseCycle | Family::TightCycle)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "loose-path" => Ok(Family::LoosePath),
            "loose-cycle" => Ok(Family::LooseCycle),
            "tight-path" => Ok(Family::TightPath),
            "tight-cycle" => Ok(Family::TightCycle),
            "m-tight-path" => Ok(Family::MTightPath),
            other => Err(Error::invalid(format!("unknown family `{other}`"))),
        }
    }
}

/// One concrete member of a hypergraph family.
///
/// `r` is the uniformity and `n` the number of edges. For `MTightPath`,
/// `m` is the number of vertices shared by consecutive edges, so `m = 1`
/// is the loose path and `m = r - 1` the tight path. Tight paths and
/// cycles are always (r-1)-tight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureSpec {
    LoosePath { r: usize, n: usize },
    LooseCycle { r: usize, n: usize },
    TightPath { r: usize, n: usize },
    TightCycle { r: usize, n: usize },
    MTightPath { r: usize, m: usize, n: usize },
}

impl StructureSpec {
    /// Builds a spec from a family tag, checking the family's parameter rules.
    pub fn new(family: Family, r: usize, n: usize, m: Option<usize>) -> Result<Self> {
        let spec = match family {
            Family::LoosePath => StructureSpec::LoosePath { r, n },
            Family::LooseCycle => StructureSpec::LooseCycle { r, n },
            Family::TightPath => StructureSpec::TightPath { r, n },
            Family::TightCycle => StructureSpec::TightCycle { r, n },
            Family::MTightPath => {
                let m = m.ok_or_else(|| Error::invalid("m-tight-path requires m"))?;
                StructureSpec::MTightPath { r, m, n }
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn family(&self) -> Family {
        match self {
            StructureSpec::LoosePath { .. } => Family::LoosePath,
            StructureSpec::LooseCycle { .. } => Family::LooseCycle,
            StructureSpec::TightPath { .. } => Family::TightPath,
            StructureSpec::TightCycle { .. } => Family::TightCycle,
            StructureSpec::MTightPath { .. } => Family::MTightPath,
        }
    }

    pub fn r(&self) -> usize {
        match *self {
            StructureSpec::LoosePath { r, .. }
            | StructureSpec::LooseCycle { r, .. }
            | StructureSpec::TightPath { r, .. }
            | StructureSpec::TightCycle { r, .. }
            | StructureSpec::MTightPath { r, .. } => r,
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            StructureSpec::LoosePath { n, .. }
            | StructureSpec::LooseCycle { n, .. }
            | StructureSpec::TightPath { n, .. }
            | StructureSpec::TightCycle { n, .. }
            | StructureSpec::MTightPath { n, .. } => n,
        }
    }

    /// Overlap between consecutive edges, where the family has a fixed one.
    pub fn m(&self) -> Option<usize> {
        match *self {
            StructureSpec::MTightPath { m, .. } => Some(m),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.r();
        if r < 2 {
            return Err(Error::invalid(format!(
                "uniformity r must be >= 2, got {r}"
            )));
        }
        match *self {
            StructureSpec::LoosePath { .. } => Ok(()),
            StructureSpec::LooseCycle { n, .. } => {
                if n < 3 {
                    Err(Error::invalid(format!(
                        "loose cycle needs n >= 3 edges, got {n}"
                    )))
                } else {
                    Ok(())
                }
            }
            StructureSpec::TightPath { n, .. } => {
                if r < 3 {
                    Err(Error::invalid("tight path needs r >= 3"))
                } else if n < 1 {
                    Err(Error::invalid("tight path needs n >= 1"))
                } else {
                    Ok(())
                }
            }
            StructureSpec::TightCycle { n, .. } => {
                if r < 3 {
                    Err(Error::invalid("tight cycle needs r >= 3"))
                } else if n < 2 * r {
                    Err(Error::invalid(format!(
                        "tight cycle needs n >= 2r = {}, got {n}",
                        2 * r
                    )))
                } else {
                    Ok(())
                }
            }
            StructureSpec::MTightPath { m, n, .. } => {
                if m < 1 || m >= r {
                    Err(Error::invalid(format!(
                        "tightness m must lie in 1..={}, got {m}",
                        r - 1
                    )))
                } else if n < 1 {
                    Err(Error::invalid("m-tight path needs n >= 1"))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Number of vertices of the canonical construction.
    pub fn vertex_count(&self) -> usize {
        match *self {
            StructureSpec::LoosePath { r, n } => n * (r - 1) + 1,
            StructureSpec::LooseCycle { r, n } => n * (r - 1),
            StructureSpec::TightPath { r, n } => n + r - 1,
            StructureSpec::TightCycle { n, .. } => n,
            StructureSpec::MTightPath { r, m, n } => r + (n - 1) * (r - m),
        }
    }
}

impl fmt::Display for StructureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.m() {
            Some(m) => write!(f, "{} r={} m={} n={}", self.family(), self.r(), m, self.n()),
            None => write!(f, "{} r={} n={}", self.family(), self.r(), self.n()),
        }
    }
}
