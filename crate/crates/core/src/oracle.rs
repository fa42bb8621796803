//! Exhaustive-enumeration ground truth.
//!
//! Every family is materialized as an explicit vertex/edge list with edge
//! bitmasks, and colorings are enumerated directly. Nothing here depends on
//! the recurrences in [`crate::counting`]; the two are only ever compared.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::structure::StructureSpec;

/// Environment variable overriding the default vertex budget.
pub const BUDGET_ENV: &str = "HYPERRUN_ORACLE_BUDGET";
pub const DEFAULT_BUDGET: usize = 26;
/// Hard ceiling: colorings are `u64` bitmasks and counts are bucketed in `u64`.
pub const MAX_BUDGET: usize = 40;

/// Explicit labeled hypergraph. Vertices are `0..vertex_count`; each edge is
/// stored as a bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformHypergraph {
    spec: StructureSpec,
    vertex_count: usize,
    edges: Vec<u64>,
    cyclic: bool,
}

/// A red/blue coloring; set bits are blue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Coloring(pub u64);

impl Coloring {
    pub fn from_blue(blue: &[usize]) -> Self {
        Coloring(blue.iter().fold(0u64, |acc, &v| acc | (1u64 << v)))
    }

    pub fn blue_count(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_blue(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }
}

fn window(start: usize, len: usize, modulus: Option<usize>) -> u64 {
    (0..len).fold(0u64, |acc, t| {
        let v = match modulus {
            Some(md) => (start + t) % md,
            None => start + t,
        };
        acc | (1u64 << v)
    })
}

/// Builds the canonical labeled hypergraph for `spec`.
///
/// Loose path edge `i` is `{i(r-1), ..., i(r-1)+r-1}`; the loose cycle is the
/// same with labels taken mod `n(r-1)`. An overlap-`m` path shifts each edge
/// by `r - m`. The tight cycle on `n` vertices has the `n` windows of `r`
/// consecutive vertices mod `n`.
pub fn build(spec: StructureSpec) -> Result<UniformHypergraph> {
    spec.validate()?;
    let v = spec.vertex_count();
    if v > 64 {
        return Err(Error::invalid(format!(
            "{spec} has {v} vertices; explicit construction is limited to 64"
        )));
    }
    let (edges, cyclic) = match spec {
        StructureSpec::LoosePath { r, n } => (
            (0..n).map(|i| window(i * (r - 1), r, None)).collect(),
            false,
        ),
        StructureSpec::LooseCycle { r, n } => (
            (0..n).map(|i| window(i * (r - 1), r, Some(v))).collect(),
            true,
        ),
        StructureSpec::TightPath { r, n } => ((0..n).map(|i| window(i, r, None)).collect(), false),
        StructureSpec::TightCycle { r, n } => {
            ((0..n).map(|i| window(i, r, Some(n))).collect(), true)
        }
        StructureSpec::MTightPath { r, m, n } => (
            (0..n).map(|i| window(i * (r - m), r, None)).collect(),
            false,
        ),
    };
    Ok(UniformHypergraph {
        spec,
        vertex_count: v,
        edges,
        cyclic,
    })
}

impl UniformHypergraph {
    pub fn spec(&self) -> StructureSpec {
        self.spec
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn edge_mask(&self, i: usize) -> u64 {
        self.edges[i]
    }

    pub fn edge_vertices(&self, i: usize) -> Vec<usize> {
        let mask = self.edges[i];
        (0..self.vertex_count)
            .filter(|&v| mask >> v & 1 == 1)
            .collect()
    }

    /// Vertices of edge `i` that lie in no other edge.
    pub fn degree_one_vertices(&self, i: usize) -> Vec<usize> {
        let others = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(e, _)| e != i)
            .fold(0u64, |acc, (_, &m)| acc | m);
        let mask = self.edges[i] & !others;
        (0..self.vertex_count)
            .filter(|&v| mask >> v & 1 == 1)
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&m| m >> v & 1 == 1).count()
    }

    /// Bit `i` is set iff edge `i` is entirely blue.
    #[inline]
    pub fn blue_edges(&self, blue: u64) -> u64 {
        self.edges
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &e)| acc | (((blue & e == e) as u64) << i))
    }

    /// Longest run of consecutive fully blue edges containing edge `edge`
    /// (cyclically for cycle families); 0 if that edge is not blue.
    pub fn run_through(&self, blue: u64, edge: usize) -> usize {
        let flags = self.blue_edges(blue);
        let n = self.edges.len();
        if flags >> edge & 1 == 0 {
            return 0;
        }
        if self.cyclic && flags.count_ones() as usize == n {
            return n;
        }
        let is_blue = |i: usize| flags >> i & 1 == 1;
        let mut len = 1;
        let mut i = edge;
        loop {
            let next = if self.cyclic { (i + 1) % n } else { i + 1 };
            if next >= n || !is_blue(next) {
                break;
            }
            len += 1;
            i = next;
        }
        let mut i = edge;
        loop {
            let prev = if self.cyclic {
                (i + n - 1) % n
            } else if i == 0 {
                break;
            } else {
                i - 1
            };
            if !is_blue(prev) {
                break;
            }
            len += 1;
            i = prev;
        }
        len
    }

    #[inline]
    fn run_in_flags(&self, flags: u64, k: usize) -> bool {
        let n = self.edges.len();
        if k == 0 {
            return true;
        }
        if k > n {
            return false;
        }
        if self.cyclic {
            let doubled = flags as u128 | ((flags as u128) << n);
            let mut acc = doubled;
            for s in 1..k {
                acc &= doubled >> s;
            }
            acc & ((1u128 << n) - 1) != 0
        } else {
            let mut acc = flags;
            for s in 1..k {
                acc &= flags >> s;
            }
            acc != 0
        }
    }
}

/// True iff `k` consecutive edges (cyclically consecutive for cycles) are all
/// blue. A cycle with `n < k` edges never contains such a run.
pub fn has_forbidden_run(h: &UniformHypergraph, c: Coloring, k: usize) -> bool {
    h.run_in_flags(h.blue_edges(c.0), k)
}

/// Case predicates for filtered enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    Always,
    EdgeBlue(usize),
    VertexBlue(usize),
    /// The first `l` edges are blue and edge `l + 1` (index `l`), if it
    /// exists, is not.
    BluePrefix(usize),
    /// Number of blue vertices inside `mask` lies in `min..=max`.
    BlueCountIn {
        mask: u64,
        min: u32,
        max: u32,
    },
    /// The maximal run of blue edges through `edge` has exactly `length` edges.
    RunThrough {
        edge: usize,
        length: usize,
    },
    Not(Box<Predicate>),
    All(Vec<Predicate>),
    Any(Vec<Predicate>),
}

impl Predicate {
    pub fn negate(p: Predicate) -> Predicate {
        Predicate::Not(Box::new(p))
    }

    pub fn vertex_red(v: usize) -> Predicate {
        Predicate::negate(Predicate::VertexBlue(v))
    }

    pub fn vertices_blue_exactly(vertices: &[usize], count: u32) -> Predicate {
        Predicate::BlueCountIn {
            mask: Coloring::from_blue(vertices).0,
            min: count,
            max: count,
        }
    }

    pub fn holds(&self, h: &UniformHypergraph, c: Coloring) -> bool {
        let blue = c.0;
        match self {
            Predicate::Always => true,
            Predicate::EdgeBlue(i) => {
                let e = h.edges[*i];
                blue & e == e
            }
            Predicate::VertexBlue(v) => blue >> v & 1 == 1,
            Predicate::BluePrefix(l) => {
                let l = *l;
                let all_prefix = h.edges[..l].iter().all(|&e| blue & e == e);
                let next_ok = h.edges.get(l).is_none_or(|&e| blue & e != e);
                all_prefix && next_ok
            }
            Predicate::BlueCountIn { mask, min, max } => {
                let c = (blue & mask).count_ones();
                *min <= c && c <= *max
            }
            Predicate::RunThrough { edge, length } => h.run_through(blue, *edge) == *length,
            Predicate::Not(p) => !p.holds(h, c),
            Predicate::All(ps) => ps.iter().all(|p| p.holds(h, c)),
            Predicate::Any(ps) => ps.iter().any(|p| p.holds(h, c)),
        }
    }
}

fn binom_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Calls `visit` for every `size`-subset of `0..universe`, split into
/// independent tasks by the largest element.
fn subsets_of_size<F>(universe: usize, size: usize, parallel: bool, visit: F) -> u64
where
    F: Fn(u64) -> bool + Sync,
{
    if size > universe {
        return 0;
    }
    if size == 0 {
        return visit(0) as u64;
    }
    let with_top = |top: usize| -> u64 {
        let high = 1u64 << top;
        let rest = size - 1;
        let mut count = 0u64;
        if rest == 0 {
            return visit(high) as u64;
        }
        let limit = 1u64 << top;
        let mut x: u64 = (1u64 << rest) - 1;
        while x < limit {
            if visit(x | high) {
                count += 1;
            }
            // Gosper's hack: next larger integer with the same popcount.
            let c = x & x.wrapping_neg();
            let r = x + c;
            x = (((r ^ x) >> 2) / c) | r;
        }
        count
    };
    if parallel {
        (size - 1..universe).into_par_iter().map(with_top).sum()
    } else {
        (size - 1..universe).map(with_top).sum()
    }
}

const CHUNK_BITS: usize = 14;

/// Sweeps all `2^v` colorings once and buckets accepted ones by popcount.
fn sweep_all<F>(v: usize, parallel: bool, accept: F) -> Vec<u64>
where
    F: Fn(u64) -> bool + Sync,
{
    let total: u64 = 1u64 << v;
    let chunk = 1u64 << CHUNK_BITS.min(v);
    let chunks = total / chunk;
    let run_chunk = |ci: u64| -> Vec<u64> {
        let mut buckets = vec![0u64; v + 1];
        let start = ci * chunk;
        for blue in start..start + chunk {
            if accept(blue) {
                buckets[blue.count_ones() as usize] += 1;
            }
        }
        buckets
    };
    let add = |mut a: Vec<u64>, b: Vec<u64>| {
        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        a
    };
    if parallel {
        (0..chunks)
            .into_par_iter()
            .map(run_chunk)
            .reduce(|| vec![0u64; v + 1], add)
    } else {
        (0..chunks).map(run_chunk).fold(vec![0u64; v + 1], add)
    }
}

/// Exhaustive counter with a vertex budget and a per-instance table cache.
#[derive(Debug)]
pub struct Oracle {
    budget: usize,
    parallel: bool,
    tables: Mutex<HashMap<(StructureSpec, usize), Vec<u64>>>,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle::from_env()
    }
}

impl Clone for Oracle {
    fn clone(&self) -> Self {
        Oracle::with_budget(self.budget).parallel(self.parallel)
    }
}

impl Oracle {
    pub fn with_budget(budget: usize) -> Self {
        Oracle {
            budget: budget.min(MAX_BUDGET),
            parallel: true,
            tables: Mutex::new(HashMap::new()),
        }
    }

    /// Reads the budget from `HYPERRUN_ORACLE_BUDGET`, falling back to 26.
    pub fn from_env() -> Self {
        let budget = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_BUDGET);
        Oracle::with_budget(budget)
    }

    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn admits(&self, spec: &StructureSpec) -> bool {
        spec.vertex_count() <= self.budget
    }

    fn checked_build(&self, spec: StructureSpec) -> Result<UniformHypergraph> {
        spec.validate()?;
        let vertices = spec.vertex_count();
        if vertices > self.budget {
            return Err(Error::BudgetExceeded {
                vertices,
                budget: self.budget,
            });
        }
        build(spec)
    }

    fn check_k(k: usize) -> Result<()> {
        if k == 0 {
            Err(Error::invalid("run bound k must be >= 1"))
        } else {
            Ok(())
        }
    }

    fn raw_table(&self, spec: StructureSpec, k: usize) -> Result<Vec<u64>> {
        Self::check_k(k)?;
        if let Some(t) = self.tables.lock().unwrap().get(&(spec, k)) {
            return Ok(t.clone());
        }
        let h = self.checked_build(spec)?;
        let table = sweep_all(h.vertex_count, self.parallel, |blue| {
            !h.run_in_flags(h.blue_edges(blue), k)
        });
        self.tables.lock().unwrap().insert((spec, k), table.clone());
        Ok(table)
    }

    /// Run-free colorings for every `j` in `0..=vertex_count`.
    pub fn count_table(&self, spec: StructureSpec, k: usize) -> Result<Vec<BigUint>> {
        Ok(self
            .raw_table(spec, k)?
            .into_iter()
            .map(BigUint::from)
            .collect())
    }

    /// Number of run-free colorings with exactly `j` blue vertices.
    pub fn count(&self, spec: StructureSpec, k: usize, j: i64) -> Result<BigUint> {
        Self::check_k(k)?;
        let h = self.checked_build(spec)?;
        let v = h.vertex_count;
        if j < 0 || j as usize > v {
            return Ok(BigUint::from(0u32));
        }
        let j = j as usize;
        if let Some(t) = self.tables.lock().unwrap().get(&(spec, k)) {
            return Ok(BigUint::from(t[j]));
        }
        if binom_f64(v, j) < 2f64.powi(v as i32) / 8.0 {
            let c = subsets_of_size(v, j, self.parallel, |blue| {
                !h.run_in_flags(h.blue_edges(blue), k)
            });
            Ok(BigUint::from(c))
        } else {
            Ok(BigUint::from(self.raw_table(spec, k)?[j]))
        }
    }

    /// Like [`Oracle::count`], restricted to colorings satisfying `filter`.
    pub fn count_filtered(
        &self,
        spec: StructureSpec,
        k: usize,
        j: i64,
        filter: &Predicate,
    ) -> Result<BigUint> {
        let h = self.checked_build(spec)?;
        self.count_where(spec, k, j, |c| filter.holds(&h, c))
    }

    /// Filtered counts for every `j` from a single sweep.
    pub fn count_filtered_table(
        &self,
        spec: StructureSpec,
        k: usize,
        filter: &Predicate,
    ) -> Result<Vec<BigUint>> {
        Self::check_k(k)?;
        let h = self.checked_build(spec)?;
        Ok(sweep_all(h.vertex_count, self.parallel, |blue| {
            !h.run_in_flags(h.blue_edges(blue), k) && filter.holds(&h, Coloring(blue))
        })
        .into_iter()
        .map(BigUint::from)
        .collect())
    }

    /// Counts run-free colorings with `j` blue vertices accepted by `accept`.
    pub fn count_where<F>(
        &self,
        spec: StructureSpec,
        k: usize,
        j: i64,
        accept: F,
    ) -> Result<BigUint>
    where
        F: Fn(Coloring) -> bool + Sync,
    {
        Self::check_k(k)?;
        let h = self.checked_build(spec)?;
        let v = h.vertex_count;
        if j < 0 || j as usize > v {
            return Ok(BigUint::from(0u32));
        }
        let c = subsets_of_size(v, j as usize, self.parallel, |blue| {
            !h.run_in_flags(h.blue_edges(blue), k) && accept(Coloring(blue))
        });
        Ok(BigUint::from(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn builds_canonical_edges() {
        let h = build(StructureSpec::LoosePath { r: 3, n: 2 }).unwrap();
        assert_eq!(h.vertex_count(), 5);
        assert_eq!(h.edge_vertices(0), vec![0, 1, 2]);
        assert_eq!(h.edge_vertices(1), vec![2, 3, 4]);

        let h = build(StructureSpec::MTightPath { r: 4, m: 2, n: 3 }).unwrap();
        assert_eq!(h.vertex_count(), 8);
        assert_eq!(h.edge_vertices(0), vec![0, 1, 2, 3]);
        assert_eq!(h.edge_vertices(1), vec![2, 3, 4, 5]);
        assert_eq!(h.edge_vertices(2), vec![4, 5, 6, 7]);

        let h = build(StructureSpec::LooseCycle { r: 3, n: 3 }).unwrap();
        assert_eq!(h.vertex_count(), 6);
        assert_eq!(h.edge_vertices(2), vec![0, 4, 5]);
    }

    #[test]
    fn structural_invariants() {
        for r in 2..=5 {
            for n in 1..=6 {
                let h = build(StructureSpec::LoosePath { r, n }).unwrap();
                for a in 0..n {
                    assert_eq!(h.edge_mask(a).count_ones() as usize, r);
                    for b in a + 1..n {
                        let shared = (h.edge_mask(a) & h.edge_mask(b)).count_ones();
                        assert_eq!(shared, if b == a + 1 { 1 } else { 0 });
                    }
                }
            }
            for n in 3..=6 {
                let h = build(StructureSpec::LooseCycle { r, n }).unwrap();
                for e in 0..n {
                    let deg2 = h
                        .edge_vertices(e)
                        .into_iter()
                        .filter(|&v| h.degree(v) == 2)
                        .count();
                    assert_eq!(deg2, 2);
                    assert_eq!(h.degree_one_vertices(e).len(), r - 2);
                }
            }
        }
        // Removing r-1 consecutive edges of a tight cycle leaves a tight path.
        let h = build(StructureSpec::TightCycle { r: 3, n: 8 }).unwrap();
        for e in 0..8 {
            assert_eq!(h.edge_mask(e).count_ones(), 3);
            let next = (e + 1) % 8;
            assert_eq!((h.edge_mask(e) & h.edge_mask(next)).count_ones(), 2);
        }
    }

    #[test]
    fn forbidden_run_detection() {
        let path = build(StructureSpec::LoosePath { r: 3, n: 2 }).unwrap();
        assert!(!has_forbidden_run(&path, Coloring(0), 1));
        assert!(has_forbidden_run(&path, Coloring::from_blue(&[0, 1, 2]), 1));
        assert!(!has_forbidden_run(
            &path,
            Coloring::from_blue(&[0, 1, 2]),
            2
        ));

        let cycle = build(StructureSpec::LooseCycle { r: 2, n: 4 }).unwrap();
        assert!(!has_forbidden_run(&cycle, Coloring::from_blue(&[3, 0]), 2));
        assert!(has_forbidden_run(
            &cycle,
            Coloring::from_blue(&[3, 0, 1]),
            2
        ));
        // All blue: four blue edges, no window of five exists.
        assert!(has_forbidden_run(&cycle, Coloring(0b1111), 4));
        assert!(!has_forbidden_run(&cycle, Coloring(0b1111), 5));
    }

    #[test]
    fn run_through_wraps_on_cycles() {
        let cycle = build(StructureSpec::LooseCycle { r: 2, n: 6 }).unwrap();
        // Edges: 0:{0,1} 1:{1,2} ... 5:{5,0}. Blue 4,5,0,1 → edges 4,5,0 blue.
        let c = Coloring::from_blue(&[4, 5, 0, 1]).0;
        assert_eq!(cycle.run_through(c, 5), 3);
        assert_eq!(cycle.run_through(c, 0), 3);
        assert_eq!(cycle.run_through(c, 2), 0);
        assert_eq!(cycle.run_through(0b111111, 2), 6);
    }

    #[test]
    fn oracle_anchor_values() {
        let o = Oracle::with_budget(26);
        assert_eq!(
            o.count(StructureSpec::LoosePath { r: 3, n: 2 }, 1, 3)
                .unwrap(),
            big(8)
        );
        assert_eq!(
            o.count(StructureSpec::LooseCycle { r: 2, n: 5 }, 1, 2)
                .unwrap(),
            big(5)
        );
        assert_eq!(
            o.count(StructureSpec::LooseCycle { r: 4, n: 4 }, 2, 0)
                .unwrap(),
            big(1)
        );
        assert_eq!(
            o.count(StructureSpec::LoosePath { r: 3, n: 2 }, 1, -1)
                .unwrap(),
            big(0)
        );
        assert_eq!(
            o.count(StructureSpec::LoosePath { r: 3, n: 2 }, 1, 6)
                .unwrap(),
            big(0)
        );
    }

    #[test]
    fn filtered_counts_split() {
        let o = Oracle::with_budget(26);
        let spec = StructureSpec::LooseCycle { r: 3, n: 5 };
        for j in 0..=10 {
            let all = o.count(spec, 2, j).unwrap();
            let blue = o
                .count_filtered(spec, 2, j, &Predicate::EdgeBlue(4))
                .unwrap();
            let not_blue = o
                .count_filtered(spec, 2, j, &Predicate::negate(Predicate::EdgeBlue(4)))
                .unwrap();
            assert_eq!(all, blue + not_blue);
        }
        let table = o
            .count_filtered_table(spec, 2, &Predicate::EdgeBlue(4))
            .unwrap();
        for (j, t) in table.iter().enumerate() {
            let direct = o
                .count_filtered(spec, 2, j as i64, &Predicate::EdgeBlue(4))
                .unwrap();
            assert_eq!(&direct, t);
        }
        let k1 = o
            .count_filtered(spec, 1, 3, &Predicate::EdgeBlue(4))
            .unwrap();
        assert_eq!(k1, big(0));
    }

    #[test]
    fn budget_is_enforced() {
        let o = Oracle::with_budget(10);
        let err = o
            .count(StructureSpec::LoosePath { r: 3, n: 5 }, 1, 2)
            .unwrap_err();
        assert_eq!(
            err,
            Error::BudgetExceeded {
                vertices: 11,
                budget: 10
            }
        );
    }

    #[test]
    fn serial_and_parallel_agree() {
        let par = Oracle::with_budget(26);
        let ser = Oracle::with_budget(26).parallel(false);
        let spec = StructureSpec::LoosePath { r: 3, n: 7 };
        assert_eq!(
            par.count_table(spec, 2).unwrap(),
            ser.count_table(spec, 2).unwrap()
        );
        for j in [0, 3, 7, 12] {
            let a = par.count_where(spec, 2, j, |_| true).unwrap();
            let b = ser.count_where(spec, 2, j, |_| true).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn subset_strategy_matches_sweep() {
        let o = Oracle::with_budget(26);
        let spec = StructureSpec::LoosePath { r: 4, n: 5 };
        let table = Oracle::with_budget(26).count_table(spec, 2).unwrap();
        for (j, expected) in table.iter().enumerate() {
            assert_eq!(&o.count(spec, 2, j as i64).unwrap(), expected);
        }
    }
}
