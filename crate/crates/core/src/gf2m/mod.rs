//! Arithmetic in F = GF(2^m) and in its quadratic extension K = F(i).
//!
//! Elements of F are bit vectors in the power basis of a fixed irreducible
//! modulus. K is represented as F[z]/(z^2 + z + delta) with `tr(delta) = 1`;
//! the class of z is the element `i` with `T(i) = i + i^q = 1`. In this basis
//! conjugation, the relative trace and norm, and the bilinear form
//! `<x, y> = T(x conj(y))` all have short closed forms.
//!
//! For odd m the least `delta` with trace one is `1`, so `i` is a primitive
//! cube root of unity and coincides with the `omega` used by the closed forms
//! of the g-function catalog.

mod dickson;
pub mod exponent;
mod ext;

pub use ext::{Ext, Ke, UnitCircle};

use std::fmt;
use std::ops::{Add, AddAssign};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lexicographically least primitive polynomial of degree m, for m = 1..=16.
pub const DEFAULT_MODULI: [u32; 16] = [
    0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11d, 0x211, 0x409, 0x805, 0x1053, 0x201b, 0x402b,
    0x8003, 0x1002d,
];

pub const MAX_DEGREE: u32 = 16;

/// An element of F = GF(2^m), as its coefficient bits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn to_hex(self) -> String {
        format!("{:x}", self.0)
    }

    pub fn from_hex(s: &str) -> Result<Fe> {
        let s = s.trim().trim_start_matches("0x");
        u32::from_str_radix(s, 16)
            .map(Fe)
            .map_err(|e| Error::Parse(format!("{s}: {e}")))
    }
}

// characteristic 2: addition is XOR
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for Fe {
    type Output = Fe;
    #[inline]
    fn add(self, rhs: Fe) -> Fe {
        Fe(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl AddAssign for Fe {
    #[inline]
    fn add_assign(&mut self, rhs: Fe) {
        self.0 ^= rhs.0;
    }
}

impl Serialize for Fe {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Fe {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Fe, D::Error> {
        let s = String::deserialize(d)?;
        Fe::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

fn degree(p: u32) -> u32 {
    31 - p.leading_zeros()
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

fn clmul_mod(mut a: u32, mut b: u32, modulus: u32, m: u32) -> u32 {
    let mut r = 0;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if (a >> m) & 1 == 1 {
            a ^= modulus;
        }
    }
    r
}

/// Irreducibility over GF(2) by trial division with every polynomial of
/// degree at most half the degree of `p`.
pub fn is_irreducible(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let d = degree(p);
    for dd in 1..=d / 2 {
        for f in (1u32 << dd)..(1u32 << (dd + 1)) {
            if poly_rem(p, f) == 0 {
                return false;
            }
        }
    }
    true
}

/// Description of the field pair (F, K): the degree, the modulus of F and
/// the constant term `delta` of the defining polynomial of K over F.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldParams {
    pub m: u32,
    #[serde(rename = "modulus_bits", with = "hex_u32")]
    pub modulus: u32,
    #[serde(rename = "delta_bits", with = "hex_fe")]
    pub delta: Fe,
}

impl FieldParams {
    /// Validates `m` and the modulus (or picks the default one) and chooses
    /// the least `delta` with absolute trace one.
    pub fn new(m: u32, modulus: Option<u32>) -> Result<FieldParams> {
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(m));
        }
        let modulus = modulus.unwrap_or(DEFAULT_MODULI[m as usize - 1]);
        if modulus < 2 || degree(modulus) != m {
            return Err(Error::ModulusDegree { modulus, m });
        }
        if !is_irreducible(modulus) {
            return Err(Error::ReducibleModulus(modulus));
        }
        let base = Gf2m::from_modulus(m, modulus);
        let delta = (1..base.q())
            .map(Fe)
            .find(|&d| base.trace(d) == 1)
            .expect("trace is onto");
        Ok(FieldParams { m, modulus, delta })
    }

    pub fn q(&self) -> u32 {
        1 << self.m
    }
}

mod hex_u32 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u32, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{v:x}"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u32, D::Error> {
        let s = String::deserialize(d)?;
        u32::from_str_radix(&s, 16).map_err(serde::de::Error::custom)
    }
}

mod hex_fe {
    use super::Fe;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Fe, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_hex())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Fe, D::Error> {
        let s = String::deserialize(d)?;
        Fe::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

/// The field F = GF(2^m) with log/antilog tables.
#[derive(Clone, Debug)]
pub struct Gf2m {
    m: u32,
    modulus: u32,
    q: u32,
    // exp has length 2(q-1) so that exp[log a + log b] needs no reduction
    exp: Vec<u32>,
    log: Vec<u32>,
    trace_mask: u32,
    artin_schreier: OnceLock<Vec<u32>>,
}

impl Gf2m {
    /// Builds the tables for an irreducible `modulus` of degree `m`. The
    /// caller is responsible for irreducibility (see [`FieldParams::new`]).
    pub(crate) fn from_modulus(m: u32, modulus: u32) -> Gf2m {
        let q = 1u32 << m;
        let order = q - 1;
        let factors = exponent::prime_factors(order as u64);
        let pow_slow = |g: u32, mut e: u64| {
            let mut r = 1u32;
            let mut b = g;
            while e > 0 {
                if e & 1 == 1 {
                    r = clmul_mod(r, b, modulus, m);
                }
                b = clmul_mod(b, b, modulus, m);
                e >>= 1;
            }
            r
        };
        let gen = (1..q)
            .find(|&g| {
                pow_slow(g, order as u64) == 1
                    && factors.iter().all(|&p| pow_slow(g, order as u64 / p) != 1)
            })
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for k in 0..order {
            exp[k as usize] = x;
            exp[(k + order) as usize] = x;
            log[x as usize] = k;
            x = clmul_mod(x, gen, modulus, m);
        }
        let mut f = Gf2m {
            m,
            modulus,
            q,
            exp,
            log,
            trace_mask: 0,
            artin_schreier: OnceLock::new(),
        };
        let mut mask = 0;
        for k in 0..m {
            if f.trace_slow(Fe(1 << k)) == 1 {
                mask |= 1 << k;
            }
        }
        f.trace_mask = mask;
        f
    }

    pub fn new(params: &FieldParams) -> Gf2m {
        Gf2m::from_modulus(params.m, params.modulus)
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// All elements in canonical bit order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(Fe)
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            Fe::ZERO
        } else {
            Fe(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
        }
    }

    #[inline]
    pub fn square(&self, a: Fe) -> Fe {
        self.mul(a, a)
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.inv_or_zero(a))
        }
    }

    /// Multiplicative inverse extended by `0 -> 0`, i.e. `a^{q-2}`.
    #[inline]
    pub fn inv_or_zero(&self, a: Fe) -> Fe {
        if a.is_zero() {
            Fe::ZERO
        } else {
            let order = self.q - 1;
            Fe(self.exp[((order - self.log[a.0 as usize]) % order) as usize])
        }
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with `0^0 = 1`.
    pub fn pow(&self, a: Fe, e: u128) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let order = (self.q - 1) as u128;
        let l = (self.log[a.0 as usize] as u128 * (e % order)) % order;
        Fe(self.exp[l as usize])
    }

    /// Power with a signed exponent; negative exponents use the `0 -> 0`
    /// inverse.
    pub fn pow_signed(&self, a: Fe, e: i128) -> Fe {
        if e >= 0 {
            self.pow(a, e as u128)
        } else {
            self.pow(self.inv_or_zero(a), (-e) as u128)
        }
    }

    /// `a^{2^j}`.
    pub fn frob(&self, a: Fe, j: u32) -> Fe {
        let mut x = a;
        for _ in 0..(j % self.m.max(1)) {
            x = self.square(x);
        }
        x
    }

    /// The unique square root, `a^{2^{m-1}}`.
    pub fn sqrt(&self, a: Fe) -> Fe {
        self.frob(a, self.m - 1)
    }

    fn trace_slow(&self, a: Fe) -> u32 {
        let mut t = Fe::ZERO;
        let mut x = a;
        for _ in 0..self.m {
            t += x;
            x = self.square(x);
        }
        debug_assert!(t.0 <= 1);
        t.0
    }

    /// Absolute trace `tr: F -> GF(2)`.
    #[inline]
    pub fn trace(&self, a: Fe) -> u32 {
        (a.0 & self.trace_mask).count_ones() & 1
    }

    /// Discrete logarithm with respect to the table generator.
    pub fn log(&self, a: Fe) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize])
    }

    pub fn exp(&self, k: u32) -> Fe {
        Fe(self.exp[(k % (self.q - 1)) as usize])
    }

    /// A root `z` of `z^2 + z = c`, when `tr(c) = 0`.
    pub fn solve_artin_schreier(&self, c: Fe) -> Option<Fe> {
        let table = self.artin_schreier.get_or_init(|| {
            let mut t = vec![u32::MAX; self.q as usize];
            for z in 0..self.q {
                let c = self.square(Fe(z)) + Fe(z);
                if t[c.0 as usize] == u32::MAX {
                    t[c.0 as usize] = z;
                }
            }
            t
        });
        let z = table[c.0 as usize];
        (z != u32::MAX).then_some(Fe(z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_moduli_are_least_primitive() {
        for m in 1..=MAX_DEGREE {
            let modulus = DEFAULT_MODULI[m as usize - 1];
            assert_eq!(degree(modulus), m);
            assert!(is_irreducible(modulus), "m={m}");
            // primitive: x generates the multiplicative group
            let q = 1u64 << m;
            let x = if m == 1 { 1 } else { 2 };
            let order = q - 1;
            let f = Gf2m::from_modulus(m, modulus);
            let xo = Fe(x);
            assert_eq!(f.pow(xo, order as u128), Fe::ONE);
            for p in exponent::prime_factors(order) {
                assert_ne!(f.pow(xo, (order / p) as u128), Fe::ONE, "m={m}");
            }
            if (2..=12).contains(&m) {
                // no smaller polynomial of degree m is primitive
                for cand in (1u32 << m)..modulus {
                    if !is_irreducible(cand) {
                        continue;
                    }
                    let g = Gf2m::from_modulus(m, cand);
                    let primitive = exponent::prime_factors(order)
                        .iter()
                        .all(|&p| g.pow(Fe(x), (order / p) as u128) != Fe::ONE);
                    assert!(!primitive, "m={m} cand={cand:#x}");
                }
            }
        }
    }

    #[test]
    fn field_create_examples() {
        let p = FieldParams::new(3, None).unwrap();
        assert_eq!(p.modulus, 0b1011);
        assert_eq!(p.q(), 8);
        assert!(FieldParams::new(5, Some(0b100101)).is_ok());
        assert_eq!(
            FieldParams::new(3, Some(0b1111)),
            Err(Error::ReducibleModulus(0b1111))
        );
        assert_eq!(FieldParams::new(0, None), Err(Error::DegreeOutOfRange(0)));
        assert_eq!(FieldParams::new(17, None), Err(Error::DegreeOutOfRange(17)));
        assert!(matches!(
            FieldParams::new(4, Some(0b1011)),
            Err(Error::ModulusDegree { .. })
        ));
    }

    #[test]
    fn delta_has_trace_one() {
        for m in 1..=MAX_DEGREE {
            let p = FieldParams::new(m, None).unwrap();
            let f = Gf2m::new(&p);
            assert_eq!(f.trace(p.delta), 1);
            if m % 2 == 1 {
                assert_eq!(p.delta, Fe::ONE);
            }
            for d in 1..p.delta.0 {
                assert_eq!(f.trace(Fe(d)), 0);
            }
        }
    }

    #[test]
    fn params_json() {
        let p = FieldParams::new(5, None).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"m":5,"modulus_bits":"25","delta_bits":"1"}"#);
        let back: FieldParams = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn sqrt_and_inverse() {
        let f = Gf2m::new(&FieldParams::new(3, None).unwrap());
        for x in f.elements() {
            let r = f.sqrt(x);
            assert_eq!(f.mul(r, r), x);
        }
        assert_eq!(f.inv(Fe::ONE).unwrap(), Fe::ONE);
        assert_eq!(f.inv(Fe::ZERO), Err(Error::DivisionByZero));
        assert_eq!(f.inv_or_zero(Fe::ZERO), Fe::ZERO);
    }

    #[test]
    fn table_mul_matches_clmul() {
        for m in [1u32, 2, 5, 8] {
            let modulus = DEFAULT_MODULI[m as usize - 1];
            let f = Gf2m::from_modulus(m, modulus);
            for a in f.elements() {
                for b in f.elements().step_by(3) {
                    assert_eq!(f.mul(a, b).0, clmul_mod(a.0, b.0, modulus, m));
                }
            }
        }
    }

    #[test]
    fn artin_schreier() {
        let f = Gf2m::new(&FieldParams::new(6, None).unwrap());
        for c in f.elements() {
            match f.solve_artin_schreier(c) {
                Some(z) => assert_eq!(f.square(z) + z, c),
                None => assert_eq!(f.trace(c), 1),
            }
        }
    }
}
