//! Integer arithmetic on exponents.
//!
//! Exponents of elements of F = GF(q) live modulo q-1, exponents of elements
//! of K = GF(q^2) modulo q^2-1, and exponents of unit-circle elements modulo
//! q+1. Fractional exponents such as `1/6` or `5/6` are resolved by modular
//! inversion.

use crate::error::{Error, Result};

/// Canonical non-negative residue of `e` modulo `modulus`.
pub fn reduce(e: i128, modulus: u128) -> u128 {
    assert!(modulus > 0, "zero modulus");
    let m = modulus as i128;
    (((e % m) + m) % m) as u128
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

pub fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Inverse of `e` modulo `modulus`, as a canonical residue.
pub fn mod_inverse(e: i128, modulus: u128) -> Result<u128> {
    let r = reduce(e, modulus);
    if modulus == 1 {
        return Ok(0);
    }
    let (g, x, _) = ext_gcd(r as i128, modulus as i128);
    if g != 1 {
        return Err(Error::NotInvertible {
            exponent: e,
            modulus,
        });
    }
    Ok(reduce(x, modulus))
}

/// The quotient `num / den` read modulo `modulus`, i.e. `num * den^{-1}`.
pub fn mod_fraction(num: i128, den: i128, modulus: u128) -> Result<u128> {
    let inv = mod_inverse(den, modulus)?;
    Ok(mul_mod(reduce(num, modulus), inv, modulus))
}

pub fn mul_mod(a: u128, b: u128, modulus: u128) -> u128 {
    (a % modulus) * (b % modulus) % modulus
}

/// Which modulus an exponent lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentModulus {
    /// q - 1, exponents of F*.
    BaseField,
    /// q^2 - 1, exponents of K*.
    ExtField,
    /// q + 1, exponents on the unit circle.
    UnitCircle,
}

impl ExponentModulus {
    pub fn value(self, m: u32) -> u128 {
        let q = 1u128 << m;
        match self {
            ExponentModulus::BaseField => q - 1,
            ExponentModulus::ExtField => q * q - 1,
            ExponentModulus::UnitCircle => q + 1,
        }
    }
}

/// `(1 - 2^r)^{-1}` modulo `q - 1` from the geometric-sum identity
/// `-(1 + 2^r + ... + 2^{r(s-1)})`, where `rs = 1 (mod m)`.
///
/// Fails when `gcd(r, m) != 1`.
pub fn translation_inverse_closed_form(m: u32, r: u32) -> Result<u128> {
    let modulus = ExponentModulus::BaseField.value(m);
    let s = mod_inverse(r as i128, m as u128)? as u32;
    let s = if s == 0 { m } else { s };
    let mut sum: u128 = 0;
    for j in 0..s {
        sum = (sum + pow_mod(2, (r * j) as u128, modulus)) % modulus;
    }
    Ok(reduce(-(sum as i128), modulus))
}

pub fn pow_mod(base: u128, mut e: u128, modulus: u128) -> u128 {
    if modulus == 1 {
        return 0;
    }
    let mut b = base % modulus;
    let mut r = 1u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % modulus;
        }
        b = b * b % modulus;
        e >>= 1;
    }
    r
}

/// Distinct prime factors of `n` by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_six_mod_31() {
        // (5q - 4)/6 with q = 32
        assert_eq!(mod_inverse(6, 31).unwrap(), 26);
        assert_eq!((5 * 32 - 4) / 6, 26);
    }

    #[test]
    fn inverse_of_five_mod_q2_minus_1() {
        // (3q^2 - 2)/5 with q = 32 is an integer and inverts 5 mod 1023
        assert_eq!((3 * 1024 - 2) % 5, 0);
        assert_eq!(mod_inverse(5, 1023).unwrap(), 614);
        assert_eq!((3 * 1024 - 2) / 5, 614);
        // the same integer also inverts 5 modulo q - 1
        assert_eq!(614 * 5 % 31, 1);
    }

    #[test]
    fn translation_closed_form_matches_direct_inverse() {
        assert_eq!(translation_inverse_closed_form(5, 2).unwrap(), 10);
        for m in 2..=12u32 {
            for r in 1..m {
                let modulus = (1u128 << m) - 1;
                let direct = mod_inverse(1 - (1i128 << r), modulus);
                let closed = translation_inverse_closed_form(m, r);
                if gcd(r as u128, m as u128) == 1 {
                    assert_eq!(closed.unwrap(), direct.unwrap(), "m={m} r={r}");
                } else {
                    assert!(closed.is_err());
                }
            }
        }
    }

    #[test]
    fn non_invertible() {
        assert!(mod_inverse(3, 15).is_err());
        assert!(mod_inverse(0, 7).is_err());
    }

    #[test]
    fn reduce_negative() {
        assert_eq!(reduce(-21, 31), 10);
        assert_eq!(reduce(-3, 33), 30);
    }

    #[test]
    fn factors() {
        assert_eq!(prime_factors(1023), vec![3, 11, 31]);
        assert_eq!(prime_factors(4294967295), vec![3, 5, 17, 257, 65537]);
        assert_eq!(prime_factors(1), Vec::<u64>::new());
    }
}
