//! Survival probability of a system whose vertices fail independently with
//! probability `p` and which fails once a forbidden blue run appears:
//! `R(p) = sum_j count[j] * p^j * (1-p)^(V-j)`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::counting::binom;
use crate::error::{Error, Result};

/// Run-free coloring counts indexed by the number of blue vertices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CountTable {
    counts: Vec<BigUint>,
}

impl CountTable {
    pub fn new(counts: Vec<BigUint>) -> Self {
        CountTable { counts }
    }

    /// Count for `j`; zero outside the stored range.
    pub fn get(&self, j: usize) -> BigUint {
        self.counts.get(j).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn as_slice(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// `binom(V, j) - count[j]`: colorings that do contain a forbidden run.
    pub fn complement(&self, vertex_count: usize) -> CountTable {
        let v = vertex_count as i64;
        CountTable::new(
            (0..=vertex_count)
                .map(|j| binom(v, j as i64) - self.get(j))
                .collect(),
        )
    }
}

impl From<Vec<BigUint>> for CountTable {
    fn from(counts: Vec<BigUint>) -> Self {
        CountTable::new(counts)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReliabilityPolynomial {
    vertex_count: usize,
    counts: CountTable,
    /// `coefficients[d]` multiplies `p^d`.
    coefficients: Vec<BigInt>,
}

/// Expands the table into monomial form. Entries beyond `vertex_count` are
/// ignored; missing entries count as zero.
pub fn reliability_poly(table: &CountTable, vertex_count: usize) -> ReliabilityPolynomial {
    let v = vertex_count;
    let mut coefficients = vec![BigInt::zero(); v + 1];
    for j in 0..=v {
        let c = BigInt::from(table.get(j));
        if c.is_zero() {
            continue;
        }
        // p^j (1-p)^(v-j) = sum_t (-1)^t C(v-j, t) p^(j+t)
        for t in 0..=v - j {
            let term = &c * BigInt::from(binom((v - j) as i64, t as i64));
            if t % 2 == 0 {
                coefficients[j + t] += term;
            } else {
                coefficients[j + t] -= term;
            }
        }
    }
    let counts = CountTable::new((0..=v).map(|j| table.get(j)).collect());
    ReliabilityPolynomial {
        vertex_count: v,
        counts,
        coefficients,
    }
}

fn check_unit_rational(p: &BigRational) -> Result<()> {
    if p.is_negative() || *p > BigRational::one() {
        return Err(Error::ProbabilityOutOfRange(p.to_string()));
    }
    Ok(())
}

fn check_unit_f64(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p.to_string()));
    }
    Ok(())
}

impl ReliabilityPolynomial {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn counts(&self) -> &CountTable {
        &self.counts
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    /// Exact value at a rational `p`.
    pub fn eval_exact(&self, p: &BigRational) -> Result<BigRational> {
        check_unit_rational(p)?;
        let mut acc = BigRational::zero();
        for c in self.coefficients.iter().rev() {
            acc = acc * p + BigRational::from_integer(c.clone());
        }
        Ok(acc)
    }

    /// Exact derivative `R'(p)`.
    pub fn derivative_exact(&self, p: &BigRational) -> Result<BigRational> {
        check_unit_rational(p)?;
        let mut acc = BigRational::zero();
        for (d, c) in self.coefficients.iter().enumerate().skip(1).rev() {
            acc = acc * p + BigRational::from_integer(c * BigInt::from(d));
        }
        Ok(acc)
    }

    /// Floating-point value, summed in factored form. The monomial
    /// coefficients alternate in sign and cancel badly, the factored terms
    /// are all nonnegative.
    pub fn eval_f64(&self, p: f64) -> Result<f64> {
        check_unit_f64(p)?;
        let q = 1.0 - p;
        let v = self.vertex_count as i32;
        Ok(self
            .counts
            .as_slice()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| {
                let c = c.to_f64().unwrap_or(f64::INFINITY);
                c * p.powi(j as i32) * q.powi(v - j as i32)
            })
            .sum())
    }
}

/// Parses `a/b`, an integer, or a finite decimal into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().ok()?;
        let b: BigInt = b.trim().parse().ok()?;
        if b.is_zero() {
            return None;
        }
        return Some(BigRational::new(a, b));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = format!("{int}{frac}").parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        return Some(BigRational::new(digits, scale));
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(v: &[u64]) -> CountTable {
        CountTable::new(v.iter().map(|&x| BigUint::from(x)).collect())
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn three_vertex_path_values() {
        let poly = reliability_poly(&table(&[1, 3, 1, 0]), 3);
        assert_eq!(poly.eval_exact(&q(1, 2)).unwrap(), q(5, 8));
        assert_eq!(poly.eval_exact(&q(1, 3)).unwrap(), q(22, 27));
        assert_eq!(poly.eval_exact(&q(0, 1)).unwrap(), q(1, 1));
        assert_eq!(poly.eval_exact(&q(1, 1)).unwrap(), q(0, 1));
        // 1 - p^2 - ... expanded: (1-p)^3 + 3p(1-p)^2 + p^2(1-p) = 1 - 2p^2 + p^3
        let coeffs: Vec<i64> = poly
            .coefficients()
            .iter()
            .map(|c| c.try_into().unwrap())
            .collect();
        assert_eq!(coeffs, vec![1, 0, -2, 1]);
    }

    #[test]
    fn out_of_range_probability() {
        let poly = reliability_poly(&table(&[1, 3, 1, 0]), 3);
        assert!(poly.eval_exact(&q(3, 2)).is_err());
        assert!(poly.eval_exact(&q(-1, 2)).is_err());
        assert!(poly.eval_f64(1.5).is_err());
        assert!(poly.eval_f64(f64::NAN).is_err());
    }

    #[test]
    fn missing_entries_are_zero() {
        let short = reliability_poly(&table(&[1, 3, 1]), 3);
        let full = reliability_poly(&table(&[1, 3, 1, 0]), 3);
        assert_eq!(short, full);
    }

    #[test]
    fn float_agrees_with_exact() {
        let poly = reliability_poly(&table(&[1, 3, 1, 0]), 3);
        for tenth in 1..10 {
            let exact = poly.eval_exact(&q(tenth, 10)).unwrap().to_f64().unwrap();
            let float = poly.eval_f64(tenth as f64 / 10.0).unwrap();
            assert!(((exact - float) / exact).abs() < 1e-12);
        }
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("1/2"), Some(q(1, 2)));
        assert_eq!(parse_rational("0.25"), Some(q(1, 4)));
        assert_eq!(parse_rational("1"), Some(q(1, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1e-3"), None);
    }
}
