//! Integer utilities: deterministic primality, factorization, and
//! classification of an index into the shapes the growth formulas care about.

use std::fmt;

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 10_000;

// Deterministic for every n < 2^64.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn miller_rabin(n: u64) -> bool {
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in MR_WITNESSES.iter() {
        if a % n == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    if n < TRIAL_LIMIT {
        let mut d = 41;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 2;
        }
        return true;
    }
    miller_rabin(n)
}

/// Iterator over the primes 2, 3, 5, ... in increasing order.
pub fn primes() -> impl Iterator<Item = u64> {
    std::iter::once(2).chain((3..).step_by(2).filter(|&n| is_prime(n)))
}

pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut sieve = vec![true; limit + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= limit {
        if sieve[i] {
            let mut j = i * i;
            while j <= limit {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(n, &p)| p.then_some(n as u64))
        .collect()
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// Pollard rho with Floyd cycle detection; n must be odd and composite.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn collect_factors(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    collect_factors(d, out);
    collect_factors(n / d, out);
}

/// Distinct prime divisors of `n` in increasing order (empty for n = 1).
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d < TRIAL_LIMIT && d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        collect_factors(n, &mut out);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// The set of primes dividing an integer. Zero is divisible by every prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PrimeSet {
    Finite(Vec<u64>),
    AllPrimes,
}

impl PrimeSet {
    pub fn contains(&self, p: u64) -> bool {
        match self {
            PrimeSet::Finite(ps) => ps.binary_search(&p).is_ok(),
            PrimeSet::AllPrimes => is_prime(p),
        }
    }

    /// Least prime lying in exactly one of the two sets.
    pub fn least_difference(&self, other: &PrimeSet) -> Option<u64> {
        match (self, other) {
            (PrimeSet::AllPrimes, PrimeSet::AllPrimes) => None,
            (PrimeSet::Finite(a), PrimeSet::Finite(b)) => {
                let only_a = a.iter().filter(|p| b.binary_search(p).is_err());
                let only_b = b.iter().filter(|p| a.binary_search(p).is_err());
                only_a.chain(only_b).min().copied()
            }
            (PrimeSet::AllPrimes, PrimeSet::Finite(f)) | (PrimeSet::Finite(f), PrimeSet::AllPrimes) => {
                primes().find(|p| f.binary_search(p).is_err())
            }
        }
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeSet::AllPrimes => write!(f, "all primes"),
            PrimeSet::Finite(ps) => {
                let parts: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
        }
    }
}

/// π(n): the primes dividing `n`, with π(0) = all primes.
pub fn primes_dividing(n: i64) -> PrimeSet {
    if n == 0 {
        PrimeSet::AllPrimes
    } else {
        PrimeSet::Finite(prime_divisors(n.unsigned_abs()))
    }
}

/// `p | n`, where every prime divides zero.
pub fn divides(p: u64, n: i64) -> bool {
    n.unsigned_abs().is_multiple_of(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexClass {
    One,
    Prime(u64),
    PrimeSquare(u64),
    PrimePower(u64, u32),
    Composite,
}

impl IndexClass {
    /// The prime and exponent when the index is a prime power.
    pub fn prime_power(&self) -> Option<(u64, u32)> {
        match *self {
            IndexClass::Prime(p) => Some((p, 1)),
            IndexClass::PrimeSquare(p) => Some((p, 2)),
            IndexClass::PrimePower(p, j) => Some((p, j)),
            IndexClass::One | IndexClass::Composite => None,
        }
    }
}

// floor(n^(1/j)) for j >= 2
fn integer_root(n: u64, j: u32) -> u64 {
    let mut r = (n as f64).powf(1.0 / j as f64).round() as u64;
    let fits = |r: u64| r.checked_pow(j).is_some_and(|v| v <= n);
    while r > 0 && !fits(r) {
        r -= 1;
    }
    while fits(r + 1) {
        r += 1;
    }
    r
}

pub fn classify_index(n: i64) -> Result<IndexClass> {
    if n <= 0 {
        return Err(Error::InvalidParameter(format!("index must be positive, got {n}")));
    }
    let n = n as u64;
    if n == 1 {
        return Ok(IndexClass::One);
    }
    if is_prime(n) {
        return Ok(IndexClass::Prime(n));
    }
    // the largest exponent with an exact root is the only one whose root can be prime
    for j in (2..64u32).rev() {
        let r = integer_root(n, j);
        if r < 2 || r.pow(j) != n {
            continue;
        }
        return Ok(match (is_prime(r), j) {
            (true, 2) => IndexClass::PrimeSquare(r),
            (true, _) => IndexClass::PrimePower(r, j),
            (false, _) => IndexClass::Composite,
        });
    }
    Ok(IndexClass::Composite)
}
