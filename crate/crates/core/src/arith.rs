//! Integer and rational helpers: squarefree parts, Kronecker symbols,
//! exact roots and small-integer factorization.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;
use thiserror::Error;

use crate::Rational;

/// Trial division limit used by [`squarefree_part`].
pub const TRIAL_BOUND: u64 = 1_000_000;

/// Largest cofactor accepted without further certification.
pub const RESIDUE_BOUND: u64 = 1_000_000_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("squarefree part of zero is undefined")]
    Zero,
    #[error("unfactored residue {0} left after trial division")]
    UnfactoredResidue(BigInt),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("value {0} does not fit in a machine integer")]
    Overflow(String),
}

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `p/q` or `p`.
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let s = s.trim();
    let bad = || ArithError::Parse(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Always emits `p/q`, with `q = 1` for integers.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_i64(n: &BigInt) -> Result<i64, ArithError> {
    n.to_i64().ok_or_else(|| ArithError::Overflow(n.to_string()))
}

pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Exact square root of a rational, if it has one.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    if is_square(n) && is_square(d) {
        Some(BigRational::new(n.sqrt(), d.sqrt()))
    } else {
        None
    }
}

/// Exact `k`-th root of a rational; negative inputs allowed for odd `k`.
pub fn rational_nth_root(r: &Rational, k: u32) -> Option<Rational> {
    if r.is_negative() {
        if k.is_multiple_of(2) {
            return None;
        }
        return rational_nth_root(&-r, k).map(|x| -x);
    }
    let root = |n: &BigInt| {
        let c = n.nth_root(k);
        (num_traits::pow(c.clone(), k as usize) == *n).then_some(c)
    };
    Some(BigRational::new(root(r.numer())?, root(r.denom())?))
}

fn modpow_u128(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for `n < 3.3e24`; cofactors reaching here are below 2^64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let n = n as u128;
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in BASES {
        let mut x = modpow_u128(a as u128, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = x * x % n;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization of `|n|` by trial division to [`TRIAL_BOUND`].
///
/// The remaining cofactor must be 1, a perfect square of a prime, or a prime
/// below 2^64; anything else is reported as an unfactored residue.
pub fn factor(n: &BigInt) -> Result<Vec<(BigInt, u32)>, ArithError> {
    if n.is_zero() {
        return Err(ArithError::Zero);
    }
    let mut m = n.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_BOUND {
        let bp = BigInt::from(p);
        if &bp * &bp > m {
            break;
        }
        let mut e = 0;
        while (&m % &bp).is_zero() {
            m /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m.is_one() {
        return Ok(out);
    }
    if let Some(v) = m.to_u64() {
        if is_prime_u64(v) {
            out.push((m, 1));
            return Ok(out);
        }
    }
    if is_square(&m) {
        let r = m.sqrt();
        if r.to_u64().is_some_and(is_prime_u64) {
            out.push((r, 2));
            return Ok(out);
        }
    }
    Err(ArithError::UnfactoredResidue(m))
}

/// Writes `n = s * m^2` with `s` squarefree and of the sign of `n`.
pub fn squarefree_part(n: &BigInt) -> Result<(BigInt, BigInt), ArithError> {
    if n.is_zero() {
        return Err(ArithError::Zero);
    }
    let mut s = BigInt::one();
    let mut m = BigInt::one();
    let mut rest = n.abs();
    let mut p = 2u64;
    while p <= TRIAL_BOUND {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        if e % 2 == 1 {
            s *= &bp;
        }
        m *= num_traits::pow(bp, (e / 2) as usize);
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        if is_square(&rest) {
            m *= rest.sqrt();
        } else if rest <= BigInt::from(RESIDUE_BOUND) || rest.to_u64().is_some_and(is_prime_u64) {
            // Below the bound the cofactor is prime because all smaller primes were removed.
            s *= rest;
        } else {
            return Err(ArithError::UnfactoredResidue(rest));
        }
    }
    if n.sign() == Sign::Minus {
        s = -s;
    }
    Ok((s, m))
}

/// Squarefree integer `s` with `r = s * q^2` for some rational `q`.
pub fn squarefree_of_rational(r: &Rational) -> Result<BigInt, ArithError> {
    let n = r.numer() * r.denom();
    Ok(squarefree_part(&n)?.0)
}

/// Convenience wrapper returning an `i64`.
pub fn sf_i64(r: &Rational) -> Result<i64, ArithError> {
    to_i64(&squarefree_of_rational(r)?)
}

/// Kronecker symbol `(a/n)`.
pub fn kronecker(a: i64, n: i64) -> i8 {
    kronecker_big(&BigInt::from(a), &BigInt::from(n))
}

pub fn kronecker_big(a: &BigInt, n: &BigInt) -> i8 {
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut a = a.clone();
    let mut n = n.clone();
    let mut res: i8 = 1;
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            res = -res;
        }
    }
    let two = BigInt::from(2);
    let mut v = 0u32;
    while n.is_even() {
        n /= &two;
        v += 1;
    }
    if v > 0 {
        if a.is_even() {
            return 0;
        }
        if v % 2 == 1 {
            let r = a.mod_floor(&BigInt::from(8)).to_u8().unwrap();
            if r == 3 || r == 5 {
                res = -res;
            }
        }
    }
    // Jacobi symbol (a/n) for odd positive n.
    a = a.mod_floor(&n);
    while !a.is_zero() {
        while a.is_even() {
            a /= &two;
            let r = n.mod_floor(&BigInt::from(8)).to_u8().unwrap();
            if r == 3 || r == 5 {
                res = -res;
            }
        }
        std::mem::swap(&mut a, &mut n);
        let four = BigInt::from(4);
        if a.mod_floor(&four) == BigInt::from(3) && n.mod_floor(&four) == BigInt::from(3) {
            res = -res;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        res
    } else {
        0
    }
}

/// Prime factorization of a positive machine integer.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor_u64(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_squarefree_u64(n: u64) -> bool {
    n > 0 && factor_u64(n).iter().all(|&(_, e)| e == 1)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Extended gcd: returns `(g, x, y)` with `a x + b y = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Serde adapters writing rationals as `"p/q"` strings.
pub mod serde_rational {
    use super::{format_rational, parse_rational};
    use crate::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&format_rational(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter().map(|s| parse_rational(s).map_err(D::Error::custom)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_squarefree(n: i64) -> (i64, i64) {
        let mut s = n.signum();
        let mut m = 1;
        let mut r = n.abs();
        let mut p = 2;
        while r > 1 {
            let mut e = 0;
            while r % p == 0 {
                r /= p;
                e += 1;
            }
            if e % 2 == 1 {
                s *= p;
            }
            for _ in 0..e / 2 {
                m *= p;
            }
            p += 1;
        }
        (s, m)
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&int(1)).unwrap(), (int(1), int(1)));
        assert_eq!(squarefree_part(&int(-136)).unwrap(), (int(-34), int(2)));
        let (s, m) = squarefree_part(&int(47433)).unwrap();
        assert_eq!(&s * &m * &m, int(47433));
        assert_eq!(naive_squarefree(47433), (to_i64(&s).unwrap(), to_i64(&m).unwrap()));
    }

    #[test]
    fn squarefree_matches_naive_to_1e6() {
        for n in (1..=1_000_000i64).step_by(97).chain(1..2000) {
            for v in [n, -n] {
                let (s, m) = squarefree_part(&int(v)).unwrap();
                assert_eq!((to_i64(&s).unwrap(), to_i64(&m).unwrap()), naive_squarefree(v));
            }
        }
    }

    #[test]
    fn squarefree_large_prime_square_cofactor() {
        let p = int(1_000_003);
        let n = &p * &p * int(6);
        assert_eq!(squarefree_part(&n).unwrap(), (int(6), p));
    }

    #[test]
    fn squarefree_rejects_unfactorable_residue() {
        let p = int(1_000_003);
        let q = int(1_000_033);
        let r = int(1_000_037);
        let big = &p * &q * &r;
        assert!(matches!(squarefree_part(&big), Err(ArithError::UnfactoredResidue(_))));
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-4, 7), -1);
        for a in -20..20 {
            assert_eq!(kronecker(a, 1), 1);
        }
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-7, 2), 1);
    }

    #[test]
    fn kronecker_matches_euler_criterion_on_odd_primes() {
        for p in [3i64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            for a in -40i64..40 {
                let r = a.rem_euclid(p);
                let e = modpow_u128(r as u128, ((p - 1) / 2) as u128, p as u128) as i64;
                let expected = if r == 0 {
                    0
                } else if e == 1 {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(a, p) as i64, expected, "({a}/{p})");
            }
        }
    }

    #[test]
    fn kronecker_multiplicative() {
        for a in -15..15 {
            for m in 1..15 {
                for n in 1..15 {
                    assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n));
                }
            }
        }
    }

    #[test]
    fn rational_round_trip() {
        for s in ["-4945/3", "7", "0", "12/8"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        assert_eq!(format_rational(&parse_rational("12/8").unwrap()), "3/2");
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn nth_roots() {
        assert_eq!(rational_nth_root(&rat(1, 1296), 4), Some(rat(1, 6)));
        assert_eq!(rational_nth_root(&rat(-8, 27), 3), Some(rat(-2, 3)));
        assert_eq!(rational_nth_root(&rat(-16, 1), 4), None);
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (2..200).filter(|&n| is_prime_u64(n)).collect();
        let sieve: Vec<u64> = (2..200u64).filter(|&n| (2..n).all(|d| n % d != 0)).collect();
        assert_eq!(small, sieve);
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1_000_000_007 * 3));
    }
}
