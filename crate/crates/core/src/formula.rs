//! Closed forms for `m_n(G_k)` and `m_n(H_k)`, the degree of maximal subgroup
//! growth, and non-isomorphism certificates for the `H_k`.

use serde::Serialize;

use crate::arith::{classify_index, divides, primes_dividing, primes_up_to, IndexClass};
use crate::error::{Error, Result};
use crate::model::{Family, GroupSpec};

/// Which branch of the closed form produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    IndexOne,
    // G_k
    OddPrime,
    PrimeTwo,
    NotPrime,
    // H_k
    PrimeDividesKMinus2,
    PrimeDividesKPlus2,
    PrimeCoprime,
    PrimeSquareCoprime,
    PrimeSquareBlocked,
    HigherPrimePower,
    NotPrimePower,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::IndexOne => "index_one",
            CaseTag::OddPrime => "odd_prime",
            CaseTag::PrimeTwo => "prime_two",
            CaseTag::NotPrime => "not_prime",
            CaseTag::PrimeDividesKMinus2 => "prime_divides_k_minus_2",
            CaseTag::PrimeDividesKPlus2 => "prime_divides_k_plus_2",
            CaseTag::PrimeCoprime => "prime_coprime",
            CaseTag::PrimeSquareCoprime => "prime_square_coprime",
            CaseTag::PrimeSquareBlocked => "prime_square_blocked",
            CaseTag::HigherPrimePower => "higher_prime_power",
            CaseTag::NotPrimePower => "not_prime_power",
        }
    }

    pub fn is_zero_branch(&self) -> bool {
        matches!(
            self,
            CaseTag::IndexOne
                | CaseTag::NotPrime
                | CaseTag::PrimeSquareBlocked
                | CaseTag::HigherPrimePower
                | CaseTag::NotPrimePower
        )
    }
}

impl Serialize for CaseTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrowthValue {
    pub n: u64,
    pub count: u64,
    pub case: CaseTag,
}

fn positive_index(n: i64) -> Result<u64> {
    if n <= 0 {
        return Err(Error::InvalidParameter(format!("index must be positive, got {n}")));
    }
    Ok(n as u64)
}

/// `m_n(G_k)`: `1 + (k-1)n` at odd primes, `2^k - 1` at 2, zero elsewhere.
pub fn max_count_gk(k: i64, n: i64) -> Result<GrowthValue> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("G_k needs k >= 1, got {k}")));
    }
    let class = classify_index(n)?;
    let n = positive_index(n)?;
    let (count, case) = match class {
        IndexClass::One => (0, CaseTag::IndexOne),
        IndexClass::Prime(2) => {
            let count = 1u64
                .checked_shl(k as u32)
                .filter(|_| k < 64)
                .ok_or(Error::Overflow("2^k - 1"))?
                - 1;
            (count, CaseTag::PrimeTwo)
        }
        IndexClass::Prime(p) => {
            let count = (k as u64 - 1)
                .checked_mul(p)
                .and_then(|x| x.checked_add(1))
                .ok_or(Error::Overflow("1 + (k-1)n"))?;
            (count, CaseTag::OddPrime)
        }
        _ => (0, CaseTag::NotPrime),
    };
    Ok(GrowthValue { n, count, case })
}

/// `m_n(H_k)`, five cases tested in order; `p | 0` always holds.
pub fn max_count_hk(k: i64, n: i64) -> Result<GrowthValue> {
    let class = classify_index(n)?;
    let n = positive_index(n)?;
    let minus = |p: u64| divides(p, k - 2);
    let plus = |p: u64| divides(p, k + 2);
    let overflow = Error::Overflow("m_n(H_k)");
    let (count, case) = match class {
        IndexClass::One => (0, CaseTag::IndexOne),
        IndexClass::Prime(p) if minus(p) => {
            let c = p.checked_mul(p).and_then(|x| x.checked_add(p + 1)).ok_or(overflow)?;
            (c, CaseTag::PrimeDividesKMinus2)
        }
        IndexClass::Prime(p) if plus(p) && p > 2 => (2 * p + 1, CaseTag::PrimeDividesKPlus2),
        IndexClass::Prime(p) if !plus(p) => (p + 1, CaseTag::PrimeCoprime),
        IndexClass::Prime(_) => unreachable!("2 | k+2 implies 2 | k-2"),
        IndexClass::PrimeSquare(p) if !minus(p) && !plus(p) => (n, CaseTag::PrimeSquareCoprime),
        IndexClass::PrimeSquare(_) => (0, CaseTag::PrimeSquareBlocked),
        IndexClass::PrimePower(..) => (0, CaseTag::HigherPrimePower),
        IndexClass::Composite => (0, CaseTag::NotPrimePower),
    };
    Ok(GrowthValue { n, count, case })
}

pub fn max_count(spec: &GroupSpec, n: i64) -> Result<GrowthValue> {
    match spec.family() {
        Family::Gk => max_count_gk(spec.k(), n),
        Family::Hk => max_count_hk(spec.k(), n),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MdegValue {
    pub exact: u32,
    /// Largest `log m_p / log p` over the sampled primes.
    pub empirical_slope: f64,
    pub sample_lo: u64,
    pub sample_hi: u64,
}

pub fn exact_mdeg(spec: &GroupSpec) -> u32 {
    match (spec.family(), spec.k()) {
        (Family::Hk, 2) => 2,
        (Family::Hk, _) => 1,
        (Family::Gk, 1) => 0,
        (Family::Gk, _) => 1,
    }
}

/// Exact degree plus an empirical slope over the primes in
/// `(sample_limit / 10, sample_limit]`.
///
/// The slope is a limsup, so only the top decade is sampled: small primes
/// inflate `log(1 + (k-1)p) / log p` far above its limit.
pub fn mdeg(spec: &GroupSpec, sample_limit: u64) -> Result<MdegValue> {
    if sample_limit < 100 {
        return Err(Error::InvalidParameter(format!("sample limit must be at least 100, got {sample_limit}")));
    }
    let lo = sample_limit / 10;
    let mut slope = f64::NEG_INFINITY;
    for p in primes_up_to(sample_limit).into_iter().filter(|&p| p > lo) {
        let m = max_count(spec, p as i64)?.count;
        if m > 0 {
            slope = slope.max((m as f64).ln() / (p as f64).ln());
        }
    }
    Ok(MdegValue { exact: exact_mdeg(spec), empirical_slope: slope.max(0.0), sample_lo: lo + 1, sample_hi: sample_limit })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Minus,
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Certificate {
    pub prime: u64,
    pub side: Side,
    pub m_i: u64,
    pub m_j: u64,
}

/// A prime `p` with `m_p(H_i) != m_p(H_j)`, found from the prime divisors of
/// `i ± 2` and `j ± 2`. Returns the least such witness; a tie between the two
/// criteria is reported as `Plus`.
pub fn noniso_certificate(i: i64, j: i64) -> Result<Option<Certificate>> {
    let minus = primes_dividing(i - 2).least_difference(&primes_dividing(j - 2));
    let plus = primes_dividing(i + 2).least_difference(&primes_dividing(j + 2));
    let (prime, side) = match (minus, plus) {
        (None, None) => return Ok(None),
        (Some(m), None) => (m, Side::Minus),
        (None, Some(p)) => (p, Side::Plus),
        (Some(m), Some(p)) if m < p => (m, Side::Minus),
        (Some(_), Some(p)) => (p, Side::Plus),
    };
    let m_i = max_count_hk(i, prime as i64)?.count;
    let m_j = max_count_hk(j, prime as i64)?.count;
    Ok(Some(Certificate { prime, side, m_i, m_j }))
}
