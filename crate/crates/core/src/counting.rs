//! Run-avoiding colorings of loose r-paths.
//!
//! `F_k(r, n, j)` counts colorings of the loose r-path with `n` edges
//! (`n(r-1)+1` vertices) having exactly `j` blue vertices and no `k`
//! consecutive fully blue edges. Counts are computed by first-edge
//! recurrences over a shared memo cache.
//!
//! Label the junction vertices `s_0, ..., s_n` (edge `E_i` runs from
//! `s_{i-1}` to `s_i`) and call the other `r-2` vertices of an edge its
//! interior. Conditioning on the length `l` of the fully blue prefix
//! `E_1..E_l` gives `F = F^0 + F^1 + ... + F^{k-1}`, and each `F^l` peels
//! one or two edges off the front.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::oracle::Oracle;

/// Binomial coefficient, zero when either argument is negative or `b > a`.
pub fn binom(a: i64, b: i64) -> BigUint {
    if a < 0 || b < 0 || b > a {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(a as u64), BigUint::from(b as u64))
}

/// Small binomial for recurrence coefficients; `None` if it would not fit.
fn small_binom(a: usize, b: usize) -> Option<u64> {
    if b > a {
        return Some(0);
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc * (a - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

fn scaled(coeff_top: usize, coeff_bottom: usize, value: BigUint) -> BigUint {
    if value.is_zero() {
        return value;
    }
    match small_binom(coeff_top, coeff_bottom) {
        Some(c) => value * c,
        None => value * binom(coeff_top as i64, coeff_bottom as i64),
    }
}

/// Vertex count of a loose r-path with `n` edges; a zero-edge path is a
/// single vertex.
pub fn loose_path_vertex_count(r: usize, n: usize) -> Result<usize> {
    if r < 2 {
        return Err(Error::invalid(format!(
            "uniformity r must be >= 2, got {r}"
        )));
    }
    Ok(if n == 0 { 1 } else { n * (r - 1) + 1 })
}

/// Parameters of one path count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CountKey {
    pub r: usize,
    pub n: usize,
    pub k: usize,
    pub j: i64,
}

impl CountKey {
    pub fn new(r: usize, n: usize, k: usize, j: i64) -> Self {
        CountKey { r, n, k, j }
    }

    pub fn validate(&self) -> Result<()> {
        if self.r < 2 {
            return Err(Error::invalid(format!(
                "uniformity r must be >= 2, got {}",
                self.r
            )));
        }
        if self.k < 1 {
            return Err(Error::invalid("run bound k must be >= 1"));
        }
        Ok(())
    }
}

/// `M = n(r-1)+1` and `N = (k-1)(r-1)+2(r-2)+1` as used in the cycle
/// permissibility bound. Only the pieces are provided; counts do not gate on
/// the composite bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PermissibilityBound {
    pub vertices: usize,
    pub window: usize,
}

impl PermissibilityBound {
    pub fn new(r: usize, n: usize, k: usize) -> Self {
        assert!(r >= 2 && k >= 1);
        PermissibilityBound {
            vertices: n * (r - 1) + 1,
            window: (k - 1) * (r - 1) + 2 * (r - 2) + 1,
        }
    }

    /// Remainder of `a` divided by `b`.
    pub fn remainder(a: usize, b: usize) -> usize {
        a % b
    }
}

/// Fewest red vertices that break every window of `k` consecutive edges on a
/// loose path with `n >= k` edges: a red junction hits `k + 1` windows.
fn min_red(n: usize, k: usize) -> usize {
    (n - k + 1).div_ceil(k + 1)
}

/// Closed-form values for `n >= k`; `None` when `j` is permissible and a
/// recurrence is required.
pub fn base_case(key: CountKey) -> Option<BigUint> {
    let CountKey { r, n, k, j } = key;
    if n < k || r < 2 || k < 1 {
        return None;
    }
    let v = (n * (r - 1) + 1) as i64;
    if j < (k * (r - 1) + 1) as i64 {
        return Some(binom(v, j));
    }
    if n > k && j > v - min_red(n, k) as i64 {
        return Some(BigUint::zero());
    }
    if n == k && j >= v {
        return Some(BigUint::zero());
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    Plain,
    Prefix(usize),
    Star,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct MemoKey {
    kind: Kind,
    r: usize,
    n: i64,
    k: usize,
    j: i64,
}

/// Which first-edge recurrence resolves a permissible path count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathRecurrence {
    /// `k = 1`, `r >= 3`.
    SingleEdge,
    /// `r = 2`.
    Graph,
    /// `r = 3`, `k > 1`.
    ThreeUniform,
    /// `r >= 4`, `k > 1`.
    General,
}

impl PathRecurrence {
    pub fn for_params(r: usize, k: usize) -> Self {
        if r == 2 {
            PathRecurrence::Graph
        } else if k == 1 {
            PathRecurrence::SingleEdge
        } else if r == 3 {
            PathRecurrence::ThreeUniform
        } else {
            PathRecurrence::General
        }
    }
}

/// Evaluation session: memoized path counts plus the oracle used for the
/// cases no recurrence covers.
///
/// The cache is shared behind a lock and may be used from several threads;
/// every writer for a key computes the same value.
#[derive(Debug, Default)]
pub struct Counter {
    cache: RwLock<HashMap<MemoKey, BigUint>>,
    oracle: Oracle,
}

/// Above this edge count, single queries fill lower rows first so the
/// recursion stays shallow.
const WARM_THRESHOLD: usize = 48;

impl Counter {
    pub fn new() -> Self {
        Counter::with_oracle(Oracle::from_env())
    }

    pub fn with_oracle(oracle: Oracle) -> Self {
        Counter {
            cache: RwLock::new(HashMap::new()),
            oracle,
        }
    }

    pub fn oracle(&self) -> &Oracle {
        &self.oracle
    }

    pub fn cache_len(&self) -> usize {
        self.cache.read().unwrap().len()
    }

    pub fn clear_cache(&self) {
        self.cache.write().unwrap().clear();
    }

    fn lookup(&self, key: &MemoKey) -> Option<BigUint> {
        self.cache.read().unwrap().get(key).cloned()
    }

    fn store(&self, key: MemoKey, value: &BigUint) {
        let mut cache = self.cache.write().unwrap();
        if let Some(prev) = cache.get(&key) {
            debug_assert_eq!(prev, value, "memo entry {key:?} changed");
            return;
        }
        cache.insert(key, value.clone());
    }

    /// `F_k(r, n, j)`.
    pub fn f_loose(&self, key: CountKey) -> Result<BigUint> {
        key.validate()?;
        self.warm(key.r, key.k, key.n);
        Ok(self.f(key.r, key.n as i64, key.k, key.j))
    }

    /// Shorthand for [`Counter::f_loose`].
    pub fn path(&self, r: usize, n: usize, k: usize, j: i64) -> Result<BigUint> {
        self.f_loose(CountKey::new(r, n, k, j))
    }

    /// All of `F_k(r, n, 0..=V)`, evaluated concurrently over `j`.
    pub fn path_table(&self, r: usize, n: usize, k: usize) -> Result<Vec<BigUint>> {
        CountKey::new(r, n, k, 0).validate()?;
        self.warm(r, k, n);
        let v = loose_path_vertex_count(r, n)? as i64;
        Ok((0..=v)
            .into_par_iter()
            .map(|j| self.f(r, n as i64, k, j))
            .collect())
    }

    fn warm(&self, r: usize, k: usize, n: usize) {
        if n <= WARM_THRESHOLD {
            return;
        }
        for row in (WARM_THRESHOLD / 2..n).step_by(WARM_THRESHOLD / 2) {
            let v = (row * (r - 1) + 1) as i64;
            (0..=v)
                .into_par_iter()
                .for_each(|j| drop(self.f(r, row as i64, k, j)));
        }
    }

    /// Core evaluator. `n = -1` denotes the empty vertex set, which arises
    /// when a peeled edge ends exactly at the last vertex.
    pub(crate) fn f(&self, r: usize, n: i64, k: usize, j: i64) -> BigUint {
        if j < 0 {
            return BigUint::zero();
        }
        if n < 0 {
            return if j == 0 {
                BigUint::one()
            } else {
                BigUint::zero()
            };
        }
        if n == 0 {
            return if j <= 1 {
                BigUint::one()
            } else {
                BigUint::zero()
            };
        }
        if j == 0 {
            return BigUint::one();
        }
        let nu = n as usize;
        let v = (nu * (r - 1) + 1) as i64;
        if j > v {
            return BigUint::zero();
        }
        if nu < k {
            return binom(v, j);
        }
        if let Some(b) = base_case(CountKey::new(r, nu, k, j)) {
            return b;
        }
        let key = MemoKey {
            kind: Kind::Plain,
            r,
            n,
            k,
            j,
        };
        if let Some(hit) = self.lookup(&key) {
            return hit;
        }
        let value = match PathRecurrence::for_params(r, k) {
            PathRecurrence::SingleEdge => self.single_edge_rhs(r, n, j),
            PathRecurrence::Graph => self.graph_rhs(n, k, j),
            PathRecurrence::ThreeUniform => self.three_uniform_rhs(n, k, j),
            PathRecurrence::General => self.general_rhs(r, n, k, j),
        };
        self.store(key, &value);
        value
    }

    /// Recurrence for `k = 1`: either `E_1` keeps a red degree-1 vertex, or
    /// all `r-1` of them are blue, `s_1` is red, and the next edge's
    /// interior is free.
    pub fn single_edge_rhs(&self, r: usize, n: i64, j: i64) -> BigUint {
        let mut total = BigUint::zero();
        for i in 0..=r - 2 {
            total += scaled(r - 1, i, self.f(r, n - 1, 1, j - i as i64));
        }
        for i in 0..=r - 2 {
            total += scaled(r - 2, i, self.f(r, n - 2, 1, j - (r - 1) as i64 - i as i64));
        }
        total
    }

    /// Recurrence for ordinary paths (`r = 2`) by the first non-blue edge.
    pub fn graph_rhs(&self, n: i64, k: usize, j: i64) -> BigUint {
        let mut total = self.f(2, n - 2, k, j - 1) + self.f(2, n - 1, k, j);
        for i in 1..k as i64 {
            total += self.f(2, n - i - 2, k, j - i - 1);
        }
        total
    }

    /// Recurrence for 3-uniform paths with `k > 1`.
    pub fn three_uniform_rhs(&self, n: i64, k: usize, j: i64) -> BigUint {
        let f = |n, j| self.f(3, n, k, j);
        let mut total = f(n - 1, j) + f(n - 1, j - 1) * 2u32 + f(n - 2, j - 2) + f(n - 2, j - 3);
        for l in 1..k as i64 {
            total += f(n - (l + 1), j - 2 * l - 1);
            total += f(n - (l + 2), j - 2 * (l + 1));
            total += f(n - (l + 2), j - 2 * (l + 1) - 1);
        }
        total
    }

    /// Recurrence for `r >= 4`, `k > 1`: `F^0 + sum_l F^l`.
    pub fn general_rhs(&self, r: usize, n: i64, k: usize, j: i64) -> BigUint {
        let mut total = self.prefix_zero(r, n, k, j);
        for l in 1..k {
            total += self.prefix_raw(r, n, k, l, j);
        }
        total
    }

    /// `F^0_k(r, n, j)`: colorings whose first edge is not fully blue.
    pub fn f_prefix_zero(&self, r: usize, n: usize, k: usize, j: i64) -> Result<BigUint> {
        CountKey::new(r, n, k, j).validate()?;
        if n < 1 {
            return Err(Error::invalid("prefix counts need n >= 1"));
        }
        Ok(self.prefix_zero(r, n as i64, k, j))
    }

    fn prefix_zero(&self, r: usize, n: i64, k: usize, j: i64) -> BigUint {
        let ri = r as i64;
        let mut total = BigUint::zero();
        for i in 0..=r - 2 {
            total += scaled(r - 1, i, self.f(r, n - 1, k, j - i as i64));
        }
        for i in 0..=r - 2 {
            total += scaled(r - 2, i, self.f(r, n - 2, k, j - (ri - 1) - i as i64));
        }
        total
    }

    /// `F^l_k(r, n, j)`: `E_1..E_l` fully blue, `E_{l+1}` not.
    ///
    /// With the prefix blue, `s_l` is blue. If the interior of `E_{l+1}` has
    /// a red vertex the rest is an unconstrained path from `s_{l+1}`;
    /// otherwise `s_{l+1}` is red and the interior of `E_{l+2}` is free.
    pub fn f_prefix(&self, r: usize, n: usize, k: usize, l: usize, j: i64) -> Result<BigUint> {
        CountKey::new(r, n, k, j).validate()?;
        if l < 1 || l >= k {
            return Err(Error::invalid(format!(
                "prefix length l must lie in 1..={}, got {l}",
                k - 1
            )));
        }
        if n < l + 1 {
            return Err(Error::invalid(format!(
                "prefix length {l} needs at least {} edges, got {n}",
                l + 1
            )));
        }
        Ok(self.prefix_raw(r, n as i64, k, l, j))
    }

    pub(crate) fn prefix_raw(&self, r: usize, n: i64, k: usize, l: usize, j: i64) -> BigUint {
        if j < 0 {
            return BigUint::zero();
        }
        let key = MemoKey {
            kind: Kind::Prefix(l),
            r,
            n,
            k,
            j,
        };
        if let Some(hit) = self.lookup(&key) {
            return hit;
        }
        let (ri, li) = (r as i64, l as i64);
        let used = li * (ri - 1) + 1;
        let mut total = BigUint::zero();
        for i in 0..r.saturating_sub(2) {
            total += scaled(r - 2, i, self.f(r, n - (li + 1), k, j - used - i as i64));
        }
        for i in 0..=r - 2 {
            total += scaled(
                r - 2,
                i,
                self.f(r, n - (li + 2), k, j - (li + 1) * (ri - 1) - i as i64),
            );
        }
        self.store(key, &total);
        total
    }

    /// `F^*_k(r, m, i)`: a fixed degree-1 vertex of `E_1` is red.
    pub fn f_star(&self, r: usize, m: usize, k: usize, i: i64) -> Result<BigUint> {
        CountKey::new(r, m, k, i).validate()?;
        if m < 1 {
            return Err(Error::invalid("f_star needs m >= 1 edges"));
        }
        Ok(self.star_raw(r, m as i64, k, i))
    }

    pub(crate) fn star_raw(&self, r: usize, m: i64, k: usize, i: i64) -> BigUint {
        if i < 0 {
            return BigUint::zero();
        }
        if i == 0 {
            return BigUint::one();
        }
        let key = MemoKey {
            kind: Kind::Star,
            r,
            n: m,
            k,
            j: i,
        };
        if let Some(hit) = self.lookup(&key) {
            return hit;
        }
        let mut total = BigUint::zero();
        for b in 0..=r - 2 {
            total += scaled(r - 2, b, self.f(r, m - 1, k, i - b as i64));
        }
        self.store(key, &total);
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Oracle;
    use crate::structure::StructureSpec;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn binomial_conventions() {
        assert_eq!(binom(5, 2), big(10));
        assert_eq!(binom(-1, 0), big(0));
        assert_eq!(binom(3, -1), big(0));
        assert_eq!(binom(4, 7), big(0));
        assert_eq!(binom(0, 0), big(1));
        assert_eq!(small_binom(62, 31), Some(465428353255261088));
        assert_eq!(small_binom(80, 40), None);
    }

    #[test]
    fn vertex_count_examples() {
        assert_eq!(loose_path_vertex_count(3, 2).unwrap(), 5);
        assert_eq!(loose_path_vertex_count(2, 4).unwrap(), 5);
        assert_eq!(loose_path_vertex_count(3, 0).unwrap(), 1);
        assert!(loose_path_vertex_count(1, 3).is_err());
    }

    #[test]
    fn base_case_examples() {
        assert_eq!(base_case(CountKey::new(2, 3, 2, 2)), Some(big(6)));
        assert_eq!(base_case(CountKey::new(3, 1, 1, 3)), Some(big(0)));
        assert_eq!(base_case(CountKey::new(2, 5, 1, 4)), Some(big(0)));
        // F_1(2,5,3): three pairwise non-adjacent vertices on a 6-path.
        assert_eq!(base_case(CountKey::new(2, 5, 1, 3)), None);
        assert_eq!(base_case(CountKey::new(2, 2, 3, 1)), None);
    }

    #[test]
    fn max_blue_bound_matches_oracle() {
        let o = Oracle::with_budget(26);
        for r in 2..=4 {
            for k in 1..=3 {
                for n in k + 1..=6 {
                    let spec = StructureSpec::LoosePath { r, n };
                    if !o.admits(&spec) {
                        continue;
                    }
                    let table = o.count_table(spec, k).unwrap();
                    let last = table.iter().rposition(|c| !c.is_zero()).unwrap();
                    assert_eq!(
                        last,
                        spec.vertex_count() - min_red(n, k),
                        "r={r} n={n} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn path_examples() {
        let c = Counter::with_oracle(Oracle::with_budget(26));
        assert_eq!(c.path(3, 2, 1, 3).unwrap(), big(8));
        assert_eq!(c.path(3, 3, 1, 4).unwrap(), big(23));
        assert_eq!(c.path(2, 5, 2, 4).unwrap(), big(6));
        assert_eq!(c.path(5, 4, 3, 0).unwrap(), big(1));
        assert_eq!(c.path(3, 0, 2, 1).unwrap(), big(1));
        assert_eq!(c.path(3, 0, 2, 2).unwrap(), big(0));
        assert_eq!(c.path(3, 2, 1, -2).unwrap(), big(0));
        assert!(c.path(1, 2, 1, 1).is_err());
        assert!(c.path(3, 2, 0, 1).is_err());
    }

    #[test]
    fn single_edge_floor() {
        let c = Counter::new();
        for r in 2..=6 {
            for j in 0..=r as i64 {
                let expected = binom(r as i64, j) - if j == r as i64 { big(1) } else { big(0) };
                assert_eq!(c.path(r, 1, 1, j).unwrap(), expected);
            }
        }
    }

    #[test]
    fn star_examples() {
        let c = Counter::new();
        assert_eq!(c.f_star(3, 2, 1, 2).unwrap(), big(6));
        assert_eq!(c.f_star(2, 3, 1, 0).unwrap(), big(1));
        assert_eq!(c.f_star(3, 4, 2, -1).unwrap(), big(0));
        assert!(c.f_star(3, 0, 2, 1).is_err());
    }

    #[test]
    fn prefix_examples_and_errors() {
        let c = Counter::new();
        assert_eq!(c.f_prefix(3, 3, 2, 1, 2).unwrap(), big(0));
        assert!(c.f_prefix(3, 3, 2, 0, 2).is_err());
        assert!(c.f_prefix(3, 3, 2, 2, 2).is_err());
    }

    #[test]
    fn warm_and_cold_agree() {
        let warm = Counter::new();
        let _ = warm.path_table(3, 20, 2).unwrap();
        let cold = Counter::new();
        for j in [0, 5, 17, 30, 41] {
            assert_eq!(
                warm.path(3, 20, 2, j).unwrap(),
                cold.path(3, 20, 2, j).unwrap()
            );
        }
    }

    #[test]
    fn deep_rows_do_not_overflow_the_stack() {
        let c = Counter::new();
        let v = c.path(4, 300, 3, 450).unwrap();
        assert!(!v.is_zero());
    }

    #[test]
    fn permissibility_pieces() {
        let b = PermissibilityBound::new(4, 5, 3);
        assert_eq!(b.vertices, 16);
        assert_eq!(b.window, 2 * 3 + 4 + 1);
        assert_eq!(PermissibilityBound::remainder(16, 11), 5);
    }
}
