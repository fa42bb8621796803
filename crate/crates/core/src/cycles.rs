//! Run-avoiding colorings of loose r-cycles.
//!
//! The loose r-cycle with `n` edges has `n(r-1)` vertices. Edges are
//! `E_1..E_n` with junction `s_i` shared by `E_i` and `E_{i+1}` (indices mod
//! `n`), so the distinguished edge `E_n` joins `s_{n-1}` to `s_0`. Counts are
//! split on whether `E_n` is fully blue.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::counting::{binom, Counter};
use crate::error::{Error, Result};
use crate::oracle::Predicate;
use crate::structure::StructureSpec;

/// Parameters of one loose-cycle count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CycleCountKey {
    pub r: usize,
    pub n: usize,
    pub k: usize,
    pub j: i64,
}

impl CycleCountKey {
    pub fn new(r: usize, n: usize, k: usize, j: i64) -> Self {
        CycleCountKey { r, n, k, j }
    }

    pub fn vertex_count(&self) -> usize {
        self.n * (self.r - 1)
    }

    pub fn spec(&self) -> StructureSpec {
        StructureSpec::LooseCycle {
            r: self.r,
            n: self.n,
        }
    }

    fn check_formula_domain(&self) -> Result<()> {
        if self.r < 3 {
            return Err(Error::invalid(format!(
                "split cycle counts need r >= 3, got {}",
                self.r
            )));
        }
        if self.k < 1 {
            return Err(Error::invalid("run bound k must be >= 1"));
        }
        if self.n <= self.k + 2 {
            return Err(Error::invalid(format!(
                "split cycle counts need n > k + 2 (n={}, k={}); use the oracle",
                self.n, self.k
            )));
        }
        Ok(())
    }
}

/// Where a value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Formula,
    Oracle,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Formula => "formula",
            Source::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sourced {
    pub value: BigUint,
    pub source: Source,
}

/// Which junction of `E_n` is blue when exactly one is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `s_0` blue, `s_{n-1}` red; the blue side continues into `E_1`.
    FirstBlue,
    /// `s_{n-1}` blue, `s_0` red; the blue side continues into `E_{n-1}`.
    LastBlue,
}

impl Orientation {
    pub const BOTH: [Orientation; 2] = [Orientation::FirstBlue, Orientation::LastBlue];
}

/// Terms of the one-blue-junction case for one orientation. `a` blue
/// interior vertices sit on the red side's neighbour edge; the blue side's
/// neighbour edge is either fully blue, missing an interior vertex, or has
/// its whole interior blue with the far junction red.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneBlueTerms {
    pub orientation: Orientation,
    pub neighbour_blue: BigUint,
    pub neighbour_interior_red: BigUint,
    pub neighbour_interior_blue: BigUint,
}

impl OneBlueTerms {
    pub fn total(&self) -> BigUint {
        &self.neighbour_blue + &self.neighbour_interior_red + &self.neighbour_interior_blue
    }
}

/// Case breakdown of colorings in which `E_n` is not fully blue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotBlueTerms {
    /// Interior of `E_n` has a red vertex.
    pub interior_red: BigUint,
    /// Interior of `E_n` all blue, both junctions red.
    pub junctions_red: BigUint,
    /// Interior of `E_n` all blue, exactly one junction blue.
    pub one_blue: [OneBlueTerms; 2],
}

impl NotBlueTerms {
    pub fn total(&self) -> BigUint {
        &self.interior_red
            + &self.junctions_red
            + self.one_blue[0].total()
            + self.one_blue[1].total()
    }
}

/// How many positions `E_n` may take inside a maximal blue run of `L` edges.
/// `RunLength` is correct; `RunLengthPlusOne` is kept so the alternative can
/// be checked against the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMultiplicity {
    RunLength,
    RunLengthPlusOne,
}

/// Colorings in which `E_n` lies on a maximal blue run of exactly `run` edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlueRunTerm {
    pub run: usize,
    /// Neither boundary edge has its whole interior blue.
    pub open_open: BigUint,
    /// Exactly one boundary edge has its whole interior blue (both sides).
    pub open_closed: BigUint,
    /// Both boundary edges have their whole interior blue.
    pub closed_closed: BigUint,
}

impl BlueRunTerm {
    pub fn total(&self) -> BigUint {
        &self.open_open + &self.open_closed + &self.closed_closed
    }
}

impl Counter {
    /// Cycle graph on `n` vertices (`r = 2`), split on the color of `V_n`.
    ///
    /// If `V_n` is red the rest is a path on `n - 1` vertices. If it is blue
    /// it sits on a maximal blue block of `l + 1` vertices bounded by red
    /// vertices; the block can be placed `l + 1` ways around `V_n`. The last
    /// two terms cover blocks that leave one red vertex or none, which only
    /// occur when `k >= n - 1`.
    pub fn c_two_cycle(&self, n: usize, k: usize, j: i64) -> Result<BigUint> {
        if n < 4 {
            return Err(Error::invalid(format!(
                "cycle formula needs n >= 4, got {n}; use the oracle"
            )));
        }
        if k < 1 {
            return Err(Error::invalid("run bound k must be >= 1"));
        }
        let ni = n as i64;
        let mut total = self.f(2, ni - 2, k, j);
        for l in 0..k.min(n - 2) as i64 {
            total += self.f(2, ni - l - 4, k, j - l - 1) * (l + 1) as u64;
        }
        if n - 2 < k && j == ni - 1 {
            total += (n - 1) as u64;
        }
        if n < k && j == ni {
            total += 1u32;
        }
        Ok(total)
    }

    /// `C^nb_k(r, n, j)` for `r >= 3`, `n > k + 2`.
    pub fn c_nb(&self, key: CycleCountKey) -> Result<BigUint> {
        Ok(self.c_nb_terms(key)?.total())
    }

    pub fn c_nb_terms(&self, key: CycleCountKey) -> Result<NotBlueTerms> {
        key.check_formula_domain()?;
        let CycleCountKey { r, n, k, j } = key;
        let (ni, ri) = (n as i64, r as i64);
        let f = |n: i64, j: i64| self.f(r, n, k, j);

        let mut interior_red = BigUint::zero();
        for i in 0..r - 2 {
            interior_red += f(ni - 1, j - i as i64) * binom(ri - 2, i as i64);
        }

        let mut junctions_red = BigUint::zero();
        for i in 0..=2 * r - 4 {
            junctions_red += f(ni - 3, j - (ri - 2) - i as i64) * binom(2 * ri - 4, i as i64);
        }

        let one_blue = Orientation::BOTH.map(|o| self.one_blue_terms(key, o));
        Ok(NotBlueTerms {
            interior_red,
            junctions_red,
            one_blue,
        })
    }

    /// One-blue-junction terms. The orientation only fixes which neighbour
    /// plays which role; the cycle's reflection makes both values equal.
    fn one_blue_terms(&self, key: CycleCountKey, orientation: Orientation) -> OneBlueTerms {
        let CycleCountKey { r, n, k, j } = key;
        let (ni, ri) = (n as i64, r as i64);
        let f = |n: i64, j: i64| self.f(r, n, k, j);
        let rest = j - (ri - 2);

        let mut neighbour_blue = BigUint::zero();
        let mut neighbour_interior_red = BigUint::zero();
        let mut neighbour_interior_blue = BigUint::zero();
        for a in 0..=r - 2 {
            let wa = binom(ri - 2, a as i64);
            let left = rest - a as i64;
            // The path between the two neighbours of E_n has n - 2 edges and
            // starts at the blue junction.
            let mut run = BigUint::zero();
            for l in 1..k {
                run += self.prefix_raw(r, ni - 2, k, l, left);
            }
            neighbour_blue += run * &wa;
            for b in 0..r - 2 {
                neighbour_interior_red +=
                    f(ni - 3, left - 1 - b as i64) * binom(ri - 2, b as i64) * &wa;
            }
            for b in 0..=r - 2 {
                neighbour_interior_blue +=
                    f(ni - 4, left - (ri - 2) - 1 - b as i64) * binom(ri - 2, b as i64) * &wa;
            }
        }
        OneBlueTerms {
            orientation,
            neighbour_blue,
            neighbour_interior_red,
            neighbour_interior_blue,
        }
    }

    /// `C^b_k(r, n, j)` for `r >= 3`, `n > k + 2`; zero when `k = 1`.
    pub fn c_b(&self, key: CycleCountKey) -> Result<BigUint> {
        Ok(self
            .c_b_terms(key, RunMultiplicity::RunLength)?
            .iter()
            .map(BlueRunTerm::total)
            .sum())
    }

    /// One term per maximal run length `L` in `1..k`, each already multiplied
    /// by the number of positions of `E_n` in the run.
    ///
    /// A run of `L` blue edges uses `L(r-1)+1` blue vertices; the two
    /// boundary edges are not blue and leave `n - L - 2` edges between them.
    pub fn c_b_terms(&self, key: CycleCountKey, mult: RunMultiplicity) -> Result<Vec<BlueRunTerm>> {
        key.check_formula_domain()?;
        let CycleCountKey { r, n, k, j } = key;
        let (ni, ri) = (n as i64, r as i64);
        let f = |n: i64, j: i64| self.f(r, n, k, j);
        let mut out = Vec::with_capacity(k.saturating_sub(1));
        for run in 1..k {
            let li = run as i64;
            let rest = j - li * (ri - 1) - 1;
            let mut open_open = BigUint::zero();
            let mut open_closed = BigUint::zero();
            for a in 0..r - 2 {
                let wa = binom(ri - 2, a as i64);
                for b in 0..r - 2 {
                    open_open +=
                        f(ni - li - 2, rest - (a + b) as i64) * &wa * binom(ri - 2, b as i64);
                }
                for b in 0..=r - 2 {
                    open_closed += f(ni - li - 3, rest - (ri - 2) - (a + b) as i64)
                        * &wa
                        * binom(ri - 2, b as i64);
                }
            }
            open_closed *= 2u32;
            let mut closed_closed = BigUint::zero();
            for c in 0..=2 * r - 4 {
                closed_closed +=
                    f(ni - li - 4, rest - 2 * (ri - 2) - c as i64) * binom(2 * ri - 4, c as i64);
            }
            let positions = match mult {
                RunMultiplicity::RunLength => run,
                RunMultiplicity::RunLengthPlusOne => run + 1,
            } as u64;
            out.push(BlueRunTerm {
                run,
                open_open: open_open * positions,
                open_closed: open_closed * positions,
                closed_closed: closed_closed * positions,
            });
        }
        Ok(out)
    }

    /// `C_k(r, n, j)`. Uses the cycle-graph formula for `r = 2` (`n >= 4`),
    /// the split formulas for `r >= 3`, `n > k + 2`, and the oracle otherwise.
    pub fn c_loose(&self, key: CycleCountKey) -> Result<Sourced> {
        let CycleCountKey { r, n, k, j } = key;
        key.spec().validate()?;
        if k < 1 {
            return Err(Error::invalid("run bound k must be >= 1"));
        }
        if j < 0 || j > key.vertex_count() as i64 {
            return Ok(Sourced {
                value: BigUint::zero(),
                source: Source::Formula,
            });
        }
        if j == 0 {
            return Ok(Sourced {
                value: BigUint::one(),
                source: Source::Formula,
            });
        }
        if r == 2 && n >= 4 {
            return Ok(Sourced {
                value: self.c_two_cycle(n, k, j)?,
                source: Source::Formula,
            });
        }
        if r >= 3 && n > k + 2 {
            return Ok(Sourced {
                value: self.c_nb(key)? + self.c_b(key)?,
                source: Source::Formula,
            });
        }
        Ok(Sourced {
            value: self.oracle().count(key.spec(), k, j)?,
            source: Source::Oracle,
        })
    }

    /// Shorthand returning only the value of [`Counter::c_loose`].
    pub fn cycle(&self, r: usize, n: usize, k: usize, j: i64) -> Result<BigUint> {
        Ok(self.c_loose(CycleCountKey::new(r, n, k, j))?.value)
    }
}

/// Vertex labels of the canonical loose cycle (see [`crate::oracle::build`]).
pub struct CycleLabels {
    r: usize,
    n: usize,
}

impl CycleLabels {
    pub fn new(r: usize, n: usize) -> Self {
        CycleLabels { r, n }
    }

    /// `s_i`, shared by `E_i` and `E_{i+1}`; `s_0 = s_n`.
    pub fn junction(&self, i: usize) -> usize {
        (i % self.n) * (self.r - 1)
    }

    /// Interior of `E_e` for `e` in `1..=n`.
    pub fn interior(&self, e: usize) -> Vec<usize> {
        let start = (e - 1) * (self.r - 1);
        (1..self.r - 1).map(|t| start + t).collect()
    }

    /// Zero-based edge index of `E_e`.
    pub fn edge(&self, e: usize) -> usize {
        (e + self.n - 1) % self.n
    }
}

/// Oracle predicates selecting each case of [`NotBlueTerms`], in the order
/// `interior_red, junctions_red, [neighbour_blue, neighbour_interior_red,
/// neighbour_interior_blue] per orientation`.
pub fn not_blue_case_predicates(r: usize, n: usize) -> Vec<(String, Predicate)> {
    let lab = CycleLabels::new(r, n);
    let en_interior = lab.interior(n);
    let interior_all_blue = Predicate::vertices_blue_exactly(&en_interior, (r - 2) as u32);
    let mut out = vec![
        (
            "interior-red".to_string(),
            Predicate::BlueCountIn {
                mask: en_interior.iter().fold(0, |m, &v| m | 1u64 << v),
                min: 0,
                max: (r - 3) as u32,
            },
        ),
        (
            "junctions-red".to_string(),
            Predicate::All(vec![
                interior_all_blue.clone(),
                Predicate::vertex_red(lab.junction(0)),
                Predicate::vertex_red(lab.junction(n - 1)),
            ]),
        ),
    ];
    for o in Orientation::BOTH {
        // (blue junction, red junction, blue-side neighbour, its far junction)
        let (blue_j, red_j, nb, far) = match o {
            Orientation::FirstBlue => (lab.junction(0), lab.junction(n - 1), 1, lab.junction(1)),
            Orientation::LastBlue => (
                lab.junction(n - 1),
                lab.junction(0),
                n - 1,
                lab.junction(n - 2),
            ),
        };
        let base = vec![
            interior_all_blue.clone(),
            Predicate::VertexBlue(blue_j),
            Predicate::vertex_red(red_j),
        ];
        let nb_interior = lab.interior(nb);
        let tag = match o {
            Orientation::FirstBlue => "first-blue",
            Orientation::LastBlue => "last-blue",
        };
        let with = |extra: Vec<Predicate>| {
            let mut v = base.clone();
            v.extend(extra);
            Predicate::All(v)
        };
        out.push((
            format!("{tag}/neighbour-blue"),
            with(vec![Predicate::EdgeBlue(lab.edge(nb))]),
        ));
        out.push((
            format!("{tag}/neighbour-interior-red"),
            with(vec![Predicate::BlueCountIn {
                mask: nb_interior.iter().fold(0, |m, &v| m | 1u64 << v),
                min: 0,
                max: (r - 3) as u32,
            }]),
        ));
        out.push((
            format!("{tag}/neighbour-interior-blue"),
            with(vec![
                Predicate::vertices_blue_exactly(&nb_interior, (r - 2) as u32),
                Predicate::vertex_red(far),
            ]),
        ));
    }
    out
}

impl NotBlueTerms {
    /// Values in the order of [`not_blue_case_predicates`].
    pub fn flatten(&self) -> Vec<BigUint> {
        let mut v = vec![self.interior_red.clone(), self.junctions_red.clone()];
        for t in &self.one_blue {
            v.push(t.neighbour_blue.clone());
            v.push(t.neighbour_interior_red.clone());
            v.push(t.neighbour_interior_blue.clone());
        }
        v
    }
}

/// Predicate for "`E_n` lies on a maximal blue run of `run` edges".
pub fn blue_run_predicate(r: usize, n: usize, run: usize) -> Predicate {
    let lab = CycleLabels::new(r, n);
    Predicate::RunThrough {
        edge: lab.edge(n),
        length: run,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Oracle;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn counter() -> Counter {
        Counter::with_oracle(Oracle::with_budget(26))
    }

    #[test]
    fn two_cycle_examples() {
        let c = counter();
        assert_eq!(c.c_two_cycle(4, 1, 2).unwrap(), big(2));
        assert_eq!(c.c_two_cycle(5, 1, 2).unwrap(), big(5));
        assert_eq!(c.c_two_cycle(6, 2, 0).unwrap(), big(1));
        assert!(c.c_two_cycle(3, 1, 1).is_err());
    }

    #[test]
    fn two_cycle_matches_oracle_for_long_runs() {
        let c = counter();
        for n in 4..=9 {
            for k in 1..=n + 1 {
                let table = c
                    .oracle()
                    .count_table(StructureSpec::LooseCycle { r: 2, n }, k)
                    .unwrap();
                for (j, expected) in table.iter().enumerate() {
                    assert_eq!(
                        &c.c_two_cycle(n, k, j as i64).unwrap(),
                        expected,
                        "n={n} k={k} j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn split_examples() {
        let c = counter();
        assert_eq!(c.c_nb(CycleCountKey::new(3, 4, 1, 0)).unwrap(), big(1));
        assert_eq!(c.c_b(CycleCountKey::new(3, 5, 1, 3)).unwrap(), big(0));
        assert!(c.c_nb(CycleCountKey::new(3, 4, 2, 1)).is_err());
        assert!(c.c_b(CycleCountKey::new(2, 6, 2, 1)).is_err());
    }

    #[test]
    fn split_matches_filtered_oracle() {
        let c = counter();
        let o = c.oracle();
        for (r, n, k, j) in [(3, 5, 2, 3), (4, 6, 2, 5), (3, 6, 2, 4), (3, 6, 3, 7)] {
            let key = CycleCountKey::new(r, n, k, j);
            let spec = key.spec();
            let en = CycleLabels::new(r, n).edge(n);
            let nb = o
                .count_filtered(spec, k, j, &Predicate::negate(Predicate::EdgeBlue(en)))
                .unwrap();
            let b = o
                .count_filtered(spec, k, j, &Predicate::EdgeBlue(en))
                .unwrap();
            assert_eq!(c.c_nb(key).unwrap(), nb, "nb r={r} n={n} k={k} j={j}");
            assert_eq!(c.c_b(key).unwrap(), b, "b r={r} n={n} k={k} j={j}");
        }
    }

    #[test]
    fn small_cycles_fall_back_to_oracle() {
        let c = counter();
        let s = c.c_loose(CycleCountKey::new(3, 4, 2, 3)).unwrap();
        assert_eq!(s.source, Source::Oracle);
        let s = c.c_loose(CycleCountKey::new(3, 5, 1, 0)).unwrap();
        assert_eq!(s.value, big(1));
        let s = c.c_loose(CycleCountKey::new(2, 5, 1, 2)).unwrap();
        assert_eq!((s.value, s.source), (big(5), Source::Formula));
        assert!(c.c_loose(CycleCountKey::new(3, 2, 1, 1)).is_err());
    }

    #[test]
    fn labels_match_construction() {
        let h = crate::oracle::build(StructureSpec::LooseCycle { r: 4, n: 5 }).unwrap();
        let lab = CycleLabels::new(4, 5);
        for e in 1..=5 {
            let mut expected = lab.interior(e);
            expected.push(lab.junction(e - 1));
            expected.push(lab.junction(e));
            expected.sort();
            assert_eq!(h.edge_vertices(lab.edge(e)), expected);
        }
    }
}
