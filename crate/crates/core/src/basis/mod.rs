//! Classical basis of the recursive Grassmann algebra.
//!
//! A [`BasisMonomial`] is an exterior product of monadics `ι(b)`, where each
//! body `b` is itself a basis monomial. The empty product is the unit `1`.
//! Factors are held in strictly decreasing serial order, which is the unique
//! normal form; the derived ordering on that representation coincides with
//! numeric order of serial numbers without ever materializing them.

mod render;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{PlexusError, Result};

pub use render::RenderFormat;

/// Default limit on the bit length of a materialized serial number.
pub const DEFAULT_BIT_BUDGET: u64 = 1 << 20;

/// Highest stage that can be enumerated (dimension 65536).
pub const MAX_ENUMERABLE_STAGE: usize = 4;

/// Exchange statistics of a basis monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> i8 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Parity::Even => '+',
            Parity::Odd => '-',
        }
    }
}

/// Arbitrary-precision serial number of a classical basis element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SerialNumber(pub BigUint);

impl SerialNumber {
    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn bits(&self) -> u64 {
        self.0.bits()
    }
}

impl From<u64> for SerialNumber {
    fn from(v: u64) -> Self {
        SerialNumber(BigUint::from(v))
    }
}

impl fmt::Display for SerialNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A unitized basis element `ι(body)`: degree 1, odd statistics.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monadic {
    body: Arc<BasisMonomial>,
}

impl Monadic {
    pub fn new(body: BasisMonomial) -> Self {
        Monadic { body: Arc::new(body) }
    }

    pub fn body(&self) -> &BasisMonomial {
        &self.body
    }

    pub fn rank(&self) -> usize {
        self.body.rank() + 1
    }
}

/// Canonical classical basis element: factors strictly decreasing.
///
/// Field order matters: the derived `Ord` compares the factor lists
/// lexicographically from the largest factor down, which is how binary
/// numbers compare by highest set bit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BasisMonomial {
    factors: Vec<Monadic>,
}

impl BasisMonomial {
    /// The empty product `1 = e_0`.
    pub fn unit() -> Self {
        BasisMonomial { factors: Vec::new() }
    }

    /// Builds a monomial from factors in any order. Returns `None` when a
    /// factor repeats (the product vanishes), otherwise the exchange sign and
    /// canonical monomial.
    pub fn from_factors(mut factors: Vec<Monadic>) -> Option<(i8, BasisMonomial)> {
        // Insertion sort into descending order, counting transpositions.
        let mut sign = 1i8;
        for i in 1..factors.len() {
            let mut j = i;
            while j > 0 && factors[j - 1] < factors[j] {
                factors.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
            if j > 0 && factors[j - 1] == factors[j] {
                return None;
            }
        }
        Some((sign, BasisMonomial { factors }))
    }

    pub fn factors(&self) -> &[Monadic] {
        &self.factors
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    /// `ι m`: the monadic wrapping `m`, as a degree-1 monomial.
    pub fn iota(&self) -> BasisMonomial {
        BasisMonomial { factors: vec![Monadic::new(self.clone())] }
    }

    /// Exterior product of two basis monomials with its exchange sign.
    /// Sign 0 (with the unit as placeholder) when a factor is shared.
    pub fn wedge(&self, other: &BasisMonomial) -> (i8, BasisMonomial) {
        let (a, b) = (&self.factors, &other.factors);
        let mut merged = Vec::with_capacity(a.len() + b.len());
        let mut swaps = 0usize;
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Greater => {
                    merged.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    // b[j] moves left past every remaining factor of a.
                    swaps += a.len() - i;
                    merged.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => return (0, BasisMonomial::unit()),
            }
        }
        merged.extend_from_slice(&a[i..]);
        merged.extend_from_slice(&b[j..]);
        let sign = if swaps.is_multiple_of(2) { 1 } else { -1 };
        (sign, BasisMonomial { factors: merged })
    }

    /// Number of top-level monadic factors.
    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    /// Nesting depth of ι.
    pub fn rank(&self) -> usize {
        self.factors.iter().map(Monadic::rank).max().unwrap_or(0)
    }

    /// Every monadic is odd, so the statistics is `(-1)^degree`.
    pub fn parity(&self) -> Parity {
        if self.degree().is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn serial(&self) -> Result<SerialNumber> {
        self.serial_with_budget(DEFAULT_BIT_BUDGET)
    }

    /// Serial number: sum over factors of `2^serial(body)`. Fails when a
    /// factor would need more than `budget` bits.
    pub fn serial_with_budget(&self, budget: u64) -> Result<SerialNumber> {
        let mut acc = BigUint::zero();
        for f in &self.factors {
            let exponent = f.body.serial_with_budget(budget)?.0;
            match exponent.to_u64() {
                Some(e) if e < budget => acc.set_bit(e, true),
                _ => {
                    return Err(PlexusError::BudgetExceeded {
                        budget,
                        exponent: exponent.to_string(),
                    })
                }
            }
        }
        Ok(SerialNumber(acc))
    }

    /// Serial as a machine word; only for monomials of rank at most 4.
    pub fn serial_u64(&self) -> Option<u64> {
        let mut acc = 0u64;
        for f in &self.factors {
            let e = f.body.serial_u64()?;
            if e >= 64 {
                return None;
            }
            acc |= 1 << e;
        }
        Some(acc)
    }

    /// Decodes a serial: bit `k` set means factor `ι(from_serial(k))`.
    pub fn from_serial(q: &SerialNumber) -> Self {
        let n = &q.0;
        let mut factors = Vec::with_capacity(n.count_ones() as usize);
        for k in (0..n.bits()).rev() {
            if n.bit(k) {
                factors.push(Monadic::new(Self::from_serial_u64(k)));
            }
        }
        BasisMonomial { factors }
    }

    pub fn from_serial_u64(q: u64) -> Self {
        let mut factors = Vec::with_capacity(q.count_ones() as usize);
        for k in (0..64).rev() {
            if q >> k & 1 == 1 {
                factors.push(Monadic::new(Self::from_serial_u64(k)));
            }
        }
        BasisMonomial { factors }
    }

    pub fn render(&self, format: RenderFormat) -> String {
        render::render(self, format)
    }
}

impl fmt::Display for BasisMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(RenderFormat::Expr))
    }
}

pub fn unit() -> BasisMonomial {
    BasisMonomial::unit()
}

pub fn iota_basis(m: &BasisMonomial) -> BasisMonomial {
    m.iota()
}

pub fn wedge_basis(a: &BasisMonomial, b: &BasisMonomial) -> (i8, BasisMonomial) {
    a.wedge(b)
}

/// Serial-order comparison, structural (never materializes serials).
pub fn compare(a: &BasisMonomial, b: &BasisMonomial) -> Ordering {
    a.cmp(b)
}

/// `Exp r` for materializable stages: 1, 2, 4, 16, 65536.
pub fn stage_dimension(r: usize) -> Result<u64> {
    let mut d = 1u64;
    for _ in 0..r {
        if d >= 64 {
            return Err(PlexusError::RankTooLarge { requested: r, max: MAX_ENUMERABLE_STAGE });
        }
        d = 1 << d;
    }
    Ok(d)
}

/// `Exp r` as a big integer, subject to a bit budget (`Exp 5` has 65537 bits).
pub fn hyperexp(r: usize, budget: u64) -> Result<BigUint> {
    let mut d = BigUint::one();
    for _ in 0..r {
        match d.to_u64() {
            Some(e) if e < budget => d = BigUint::one() << e,
            _ => return Err(PlexusError::BudgetExceeded { budget, exponent: d.to_string() }),
        }
    }
    Ok(d)
}

/// The `Exp(r-1)` monadics that generate stage `r`, ascending.
pub fn stage_monadics(r: usize) -> Result<Vec<BasisMonomial>> {
    if r == 0 {
        return Ok(Vec::new());
    }
    Ok(enumerate_stage(r - 1)?.map(|m| m.iota()).collect())
}

/// All `Exp r` basis monomials of stage `r` in serial order.
pub fn enumerate_stage(r: usize) -> Result<impl Iterator<Item = BasisMonomial>> {
    if r > MAX_ENUMERABLE_STAGE {
        return Err(PlexusError::RankTooLarge { requested: r, max: MAX_ENUMERABLE_STAGE });
    }
    let dim = stage_dimension(r)?;
    // Monadics of stage r, indexed by the serial of their body.
    let monadics: Vec<Monadic> = if r == 0 {
        Vec::new()
    } else {
        (0..stage_dimension(r - 1)?)
            .map(|k| Monadic::new(BasisMonomial::from_serial_u64(k)))
            .collect()
    };
    Ok((0..dim).map(move |q| {
        let factors = (0..monadics.len())
            .rev()
            .filter(|&k| q >> k & 1 == 1)
            .map(|k| monadics[k].clone())
            .collect();
        BasisMonomial { factors }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(q: u64) -> BasisMonomial {
        BasisMonomial::from_serial_u64(q)
    }

    #[test]
    fn unit_is_serial_zero() {
        let u = unit();
        assert_eq!(u.serial().unwrap(), SerialNumber::from(0));
        assert_eq!(u.degree(), 0);
        assert_eq!(u.rank(), 0);
        assert_eq!(u.parity(), Parity::Even);
    }

    #[test]
    fn iota_doubles_exponentially() {
        assert_eq!(iota_basis(&e(2)), e(4));
        assert_eq!(iota_basis(&unit()).serial_u64(), Some(1));
        assert_eq!(iota_basis(&e(15)).serial().unwrap(), SerialNumber::from(32768));
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge_basis(&e(2), &e(1)), (1, e(3)));
        assert_eq!(wedge_basis(&e(1), &e(2)), (-1, e(3)));
        assert_eq!(wedge_basis(&e(1), &e(1)), (0, unit()));
        assert_eq!(wedge_basis(&unit(), &e(7)), (1, e(7)));
    }

    #[test]
    fn rank_and_degree() {
        assert_eq!((e(12).rank(), e(12).degree()), (3, 2));
        assert_eq!((e(7).rank(), e(7).degree()), (3, 3));
    }

    #[test]
    fn parity_rule() {
        assert_eq!(e(4).parity(), Parity::Odd);
        assert_eq!(e(23).parity(), Parity::Even);
        assert_eq!(e(10).parity(), Parity::Even);
    }

    #[test]
    fn serials() {
        assert_eq!(e(4).iota().serial_u64(), Some(16));
        let m = [e(8), e(4), e(2), e(1)]
            .iter()
            .fold(unit(), |acc, x| acc.wedge(x).1);
        assert_eq!(m.serial_u64(), Some(15));
    }

    #[test]
    fn from_serial_decodes_bits() {
        let six = e(6);
        assert_eq!(six.factors().len(), 2);
        assert_eq!(six.factors()[0].body(), &e(2));
        assert_eq!(six.factors()[1].body(), &e(1));
        assert_eq!(e(0), unit());
        let q = SerialNumber::from(1 << 16);
        assert_eq!(BasisMonomial::from_serial(&q), e(16).iota());
    }

    #[test]
    fn structural_compare() {
        assert_eq!(compare(&e(3), &e(4)), Ordering::Less);
        assert_eq!(compare(&e(16).iota(), &e(15)), Ordering::Greater);
        assert_eq!(compare(&e(5), &e(5)), Ordering::Equal);
    }

    #[test]
    fn budget_limits() {
        // ι e_65536 has serial 2^65536: 65537 bits, inside the default budget.
        let big = e(16).iota().iota();
        assert_eq!(big.rank(), 6);
        assert_eq!(big.serial().unwrap().bits(), 65537);
        // One more ι needs 2^65536 bits.
        assert!(matches!(big.iota().serial(), Err(PlexusError::BudgetExceeded { .. })));
        assert!(matches!(e(20).serial_with_budget(4), Err(PlexusError::BudgetExceeded { .. })));
    }

    #[test]
    fn enumerate_small_stages() {
        let s2: Vec<_> = enumerate_stage(2).unwrap().collect();
        assert_eq!(s2, vec![e(0), e(1), e(2), e(3)]);
        let s3: Vec<_> = enumerate_stage(3).unwrap().collect();
        assert_eq!(s3.len(), 16);
        for (q, m) in s3.iter().enumerate() {
            assert_eq!(m.serial_u64(), Some(q as u64));
        }
        assert!(matches!(enumerate_stage(5), Err(PlexusError::RankTooLarge { .. })));
    }

    #[test]
    fn dimensions() {
        let dims: Vec<u64> = (0..=4).map(|r| stage_dimension(r).unwrap()).collect();
        assert_eq!(dims, vec![1, 2, 4, 16, 65536]);
        assert_eq!(hyperexp(5, DEFAULT_BIT_BUDGET).unwrap().bits(), 65537);
    }

    #[test]
    fn from_factors_sorts_with_sign() {
        let (s, m) = BasisMonomial::from_factors(vec![
            Monadic::new(e(0)),
            Monadic::new(e(1)),
            Monadic::new(e(2)),
        ])
        .unwrap();
        assert_eq!(m, e(7));
        assert_eq!(s, -1); // reversal of three factors: 3 transpositions
        assert!(BasisMonomial::from_factors(vec![Monadic::new(e(0)), Monadic::new(e(0))]).is_none());
    }
}
