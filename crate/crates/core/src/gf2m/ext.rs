use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use super::{exponent, Fe, FieldParams, Gf2m};
use crate::error::{Error, Result};

/// Largest degree for which discrete-log tables of K are built.
const EXT_TABLE_MAX_M: u32 = 10;

/// An element `a + b*i` of K.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct Ke {
    pub a: Fe,
    pub b: Fe,
}

impl Ke {
    pub const ZERO: Ke = Ke { a: Fe(0), b: Fe(0) };
    pub const ONE: Ke = Ke { a: Fe(1), b: Fe(0) };
    pub const I: Ke = Ke { a: Fe(0), b: Fe(1) };

    pub fn new(a: Fe, b: Fe) -> Ke {
        Ke { a, b }
    }

    pub fn from_base(a: Fe) -> Ke {
        Ke { a, b: Fe::ZERO }
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn in_base(self) -> bool {
        self.b.is_zero()
    }

    /// Canonical index `a | b << m`, also the truth-table position.
    #[inline]
    pub fn index(self, m: u32) -> usize {
        (self.a.0 | (self.b.0 << m)) as usize
    }

    #[inline]
    pub fn from_index(idx: usize, m: u32) -> Ke {
        let mask = (1u32 << m) - 1;
        Ke {
            a: Fe(idx as u32 & mask),
            b: Fe((idx as u32) >> m),
        }
    }

    pub fn to_hex(self, m: u32) -> String {
        format!("{:x}", self.index(m))
    }

    pub fn from_hex(s: &str, m: u32) -> Result<Ke> {
        let s = s.trim().trim_start_matches("0x");
        let v = u64::from_str_radix(s, 16).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
        if v >> (2 * m) != 0 {
            return Err(Error::Parse(format!("{s} does not fit in 2m = {} bits", 2 * m)));
        }
        Ok(Ke::from_index(v as usize, m))
    }
}

impl Add for Ke {
    type Output = Ke;
    #[inline]
    fn add(self, rhs: Ke) -> Ke {
        Ke {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
        }
    }
}

impl AddAssign for Ke {
    #[inline]
    fn add_assign(&mut self, rhs: Ke) {
        self.a += rhs.a;
        self.b += rhs.b;
    }
}

impl fmt::Display for Ke {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}i", self.a, self.b)
    }
}

/// The group S of norm-one elements, listed as powers of a generator.
#[derive(Clone, Debug)]
pub struct UnitCircle {
    pub generator: Ke,
    pub elements: Vec<Ke>,
    index: HashMap<Ke, usize>,
}

impl UnitCircle {
    #[inline]
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    #[inline]
    pub fn get(&self, k: usize) -> Ke {
        self.elements[k]
    }

    /// Position of `u` in the generator ordering, if `u` lies on S.
    #[inline]
    pub fn index_of(&self, u: Ke) -> Option<usize> {
        self.index.get(&u).copied()
    }

    /// Index of `u^e` given the index of `u`.
    pub fn pow_index(&self, k: usize, e: i128) -> usize {
        let n = self.len() as u128;
        ((k as u128 * exponent::reduce(e, n)) % n) as usize
    }

    /// Index of the conjugate (= inverse) of the element at index `k`.
    pub fn conj_index(&self, k: usize) -> usize {
        (self.len() - k) % self.len()
    }
}

/// The quadratic extension K = F(i), together with its unit circle.
#[derive(Clone, Debug)]
pub struct Ext {
    params: FieldParams,
    base: Gf2m,
    delta: Fe,
    circle: UnitCircle,
    // discrete logs in K for small m, with respect to `primitive`
    primitive: Ke,
    klog: Option<(Vec<u32>, Vec<u32>)>,
}

impl Ext {
    pub fn new(params: &FieldParams) -> Ext {
        let base = Gf2m::new(params);
        let mut ext = Ext {
            params: *params,
            base,
            delta: params.delta,
            circle: UnitCircle {
                generator: Ke::ONE,
                elements: vec![],
                index: HashMap::new(),
            },
            primitive: Ke::ONE,
            klog: None,
        };
        let q = ext.q() as u128;
        let order = q * q - 1;
        let factors = exponent::prime_factors(order as u64);
        let primitive = (1..(q * q) as usize)
            .map(|k| Ke::from_index(k, params.m))
            .find(|&v| {
                factors
                    .iter()
                    .all(|&p| ext.pow_slow(v, order / p as u128) != Ke::ONE)
            })
            .expect("K* is cyclic");
        ext.primitive = primitive;
        let mut w = ext.pow_slow(primitive, q - 1);
        if params.m % 2 == 1 {
            // pin the orientation so that w^{(q+1)/3} is the basis element i
            let omega = ext.pow_slow(w, (q + 1) / 3);
            if omega != Ke::I {
                debug_assert_eq!(omega, ext.conj(Ke::I));
                w = ext.conj(w);
            }
        }
        let mut elements = Vec::with_capacity(q as usize + 1);
        let mut x = Ke::ONE;
        for _ in 0..=q {
            elements.push(x);
            x = ext.mul(x, w);
        }
        debug_assert_eq!(x, Ke::ONE);
        let index = elements.iter().enumerate().map(|(k, &u)| (u, k)).collect();
        ext.circle = UnitCircle {
            generator: w,
            elements,
            index,
        };
        if params.m <= EXT_TABLE_MAX_M {
            let n = (q * q) as usize;
            let mut exp = vec![0u32; 2 * (n - 1)];
            let mut log = vec![0u32; n];
            let mut x = Ke::ONE;
            for k in 0..n - 1 {
                let idx = x.index(params.m) as u32;
                exp[k] = idx;
                exp[k + n - 1] = idx;
                log[idx as usize] = k as u32;
                x = ext.mul(x, primitive);
            }
            ext.klog = Some((exp, log));
        }
        ext
    }

    /// Convenience constructor with the default modulus.
    pub fn with_degree(m: u32) -> Result<Ext> {
        Ok(Ext::new(&FieldParams::new(m, None)?))
    }

    #[inline]
    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    #[inline]
    pub fn base(&self) -> &Gf2m {
        &self.base
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.params.m
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.base.q()
    }

    pub fn delta(&self) -> Fe {
        self.delta
    }

    #[inline]
    pub fn circle(&self) -> &UnitCircle {
        &self.circle
    }

    /// Generator of S.
    pub fn w(&self) -> Ke {
        self.circle.generator
    }

    /// Primitive cube root of unity `w^{(q+1)/3}`; exists iff m is odd.
    pub fn omega(&self) -> Option<Ke> {
        (self.m() % 2 == 1).then(|| self.circle.get((self.q() as usize + 1) / 3))
    }

    /// The primitive element of K* used for the log tables.
    pub fn primitive(&self) -> Ke {
        self.primitive
    }

    /// All elements of K in canonical index order.
    pub fn elements(&self) -> impl Iterator<Item = Ke> + '_ {
        let m = self.m();
        (0..(1usize << (2 * m))).map(move |k| Ke::from_index(k, m))
    }

    pub fn size(&self) -> usize {
        1usize << (2 * self.m())
    }

    #[inline]
    pub fn mul(&self, x: Ke, y: Ke) -> Ke {
        let f = &self.base;
        // (a + bi)(c + di) = (ac + bd delta) + (ad + bc + bd) i
        let ac = f.mul(x.a, y.a);
        let bd = f.mul(x.b, y.b);
        let s = f.mul(x.a + x.b, y.a + y.b);
        Ke {
            a: ac + f.mul(bd, self.delta),
            b: s + ac,
        }
    }

    #[inline]
    pub fn scale(&self, l: Fe, x: Ke) -> Ke {
        Ke {
            a: self.base.mul(l, x.a),
            b: self.base.mul(l, x.b),
        }
    }

    #[inline]
    pub fn square(&self, x: Ke) -> Ke {
        let f = &self.base;
        let bb = f.square(x.b);
        Ke {
            a: f.square(x.a) + f.mul(bb, self.delta),
            b: bb,
        }
    }

    /// `x^q`, which is `(a + b) + b i`.
    #[inline]
    pub fn conj(&self, x: Ke) -> Ke {
        Ke { a: x.a + x.b, b: x.b }
    }

    /// Relative trace `T(x) = x + x^q`.
    #[inline]
    pub fn t(&self, x: Ke) -> Fe {
        x.b
    }

    /// Absolute trace K -> GF(2).
    #[inline]
    pub fn tr_abs(&self, x: Ke) -> u32 {
        self.base.trace(x.b)
    }

    /// Relative norm `N(x) = x^{q+1}`.
    #[inline]
    pub fn norm(&self, x: Ke) -> Fe {
        let f = &self.base;
        f.square(x.a) + f.mul(x.a, x.b) + f.mul(self.delta, f.square(x.b))
    }

    /// `(T(z), Tr(z), N(z))`.
    pub fn traces_and_norm(&self, z: Ke) -> (Fe, u32, Fe) {
        (self.t(z), self.tr_abs(z), self.norm(z))
    }

    /// `<x, y> = T(x conj(y))`.
    #[inline]
    pub fn bilinear(&self, x: Ke, y: Ke) -> Fe {
        // b-part of x * conj(y) = a_x b_y + b_x a_y
        let f = &self.base;
        f.mul(x.a, y.b) + f.mul(x.b, y.a)
    }

    pub fn inv(&self, x: Ke) -> Result<Ke> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.base.inv(self.norm(x))?;
        Ok(self.scale(n, self.conj(x)))
    }

    /// Inverse extended by `0 -> 0`.
    pub fn inv_or_zero(&self, x: Ke) -> Ke {
        self.inv(x).unwrap_or(Ke::ZERO)
    }

    pub fn div(&self, x: Ke, y: Ke) -> Result<Ke> {
        Ok(self.mul(x, self.inv(y)?))
    }

    fn pow_slow(&self, x: Ke, mut e: u128) -> Ke {
        let mut r = Ke::ONE;
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.square(b);
            e >>= 1;
        }
        r
    }

    /// `x^e` with `0^0 = 1`, exponent reduced modulo q^2 - 1.
    pub fn pow(&self, x: Ke, e: u128) -> Ke {
        if e == 0 {
            return Ke::ONE;
        }
        if x.is_zero() {
            return Ke::ZERO;
        }
        let order = (self.q() as u128).pow(2) - 1;
        match &self.klog {
            Some((exp, log)) => {
                let l = log[x.index(self.m())] as u128 * (e % order) % order;
                Ke::from_index(exp[l as usize] as usize, self.m())
            }
            None => self.pow_slow(x, e % order),
        }
    }

    /// Signed power; negative exponents use the `0 -> 0` inverse.
    pub fn pow_signed(&self, x: Ke, e: i128) -> Ke {
        if e >= 0 {
            self.pow(x, e as u128)
        } else {
            self.pow(self.inv_or_zero(x), e.unsigned_abs())
        }
    }

    /// `x^{2^j}`.
    pub fn frob(&self, x: Ke, j: u32) -> Ke {
        let mut y = x;
        for _ in 0..(j % (2 * self.m())) {
            y = self.square(y);
        }
        y
    }

    /// Square root in K: `(a + bi)^2 = (a^2 + delta b^2) + b^2 i`.
    pub fn sqrt(&self, x: Ke) -> Ke {
        let f = &self.base;
        let b = f.sqrt(x.b);
        let a = f.sqrt(x.a + f.mul(self.delta, x.b));
        Ke { a, b }
    }

    /// The unique `(lambda, u)` with `x = lambda u`, `lambda in F*`, `u in S`.
    pub fn polar(&self, x: Ke) -> Result<(Fe, Ke)> {
        if x.is_zero() {
            return Err(Error::PolarOfZero);
        }
        let lambda = self.base.sqrt(self.norm(x));
        let u = self.scale(self.base.inv_or_zero(lambda), x);
        Ok((lambda, u))
    }

    /// Polar decomposition returning the unit-circle index of `u`.
    #[inline]
    pub fn polar_index(&self, x: Ke) -> Option<(Fe, usize)> {
        let (l, u) = self.polar(x).ok()?;
        Some((l, self.circle.index_of(u).expect("norm one")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext(m: u32) -> Ext {
        Ext::with_degree(m).unwrap()
    }

    #[test]
    fn basis_element_has_trace_one() {
        for m in 1..=8 {
            let k = ext(m);
            assert_eq!(k.t(Ke::I), Fe::ONE);
            // T(z) = z + z^q from the definition
            for z in k.elements().step_by(7) {
                let zq = k.pow(z, k.q() as u128);
                assert_eq!(zq, k.conj(z));
                let s = z + zq;
                assert!(s.in_base());
                assert_eq!(s.a, k.t(z));
                let n = k.mul(z, zq);
                assert!(n.in_base());
                assert_eq!(n.a, k.norm(z));
            }
        }
    }

    #[test]
    fn traces_of_zero_and_base() {
        let k = ext(4);
        assert_eq!(k.traces_and_norm(Ke::ZERO), (Fe::ZERO, 0, Fe::ZERO));
        for a in k.base().elements() {
            let (t, _, n) = k.traces_and_norm(Ke::from_base(a));
            assert_eq!(t, Fe::ZERO);
            assert_eq!(n, k.base().square(a));
        }
    }

    #[test]
    fn unit_circle_basics() {
        for m in 1..=9 {
            let k = ext(m);
            let s = k.circle();
            assert_eq!(s.len(), k.q() as usize + 1);
            assert_eq!(s.get(0), Ke::ONE);
            assert_eq!(k.pow(k.w(), k.q() as u128 + 1), Ke::ONE);
            for (idx, &u) in s.elements.iter().enumerate() {
                assert_eq!(k.norm(u), Fe::ONE);
                assert_eq!(s.index_of(u), Some(idx));
                assert_eq!(k.conj(u), s.get(s.conj_index(idx)));
            }
            let count = k.elements().filter(|&z| k.norm(z) == Fe::ONE).count();
            assert_eq!(count, s.len());
            if m % 2 == 1 {
                let om = k.omega().unwrap();
                assert_eq!(om, Ke::I);
                assert_eq!(k.square(om) + om + Ke::ONE, Ke::ZERO);
            } else {
                assert!(k.omega().is_none());
            }
        }
    }

    #[test]
    fn bilinear_examples() {
        let k = ext(3);
        assert_eq!(k.bilinear(Ke::I, Ke::ONE), Fe::ONE);
        for &u in &k.circle().elements {
            let s = u + k.conj(u);
            assert!(s.in_base());
            assert_eq!(k.bilinear(Ke::ONE, u), s.a);
        }
        for x in k.elements() {
            assert_eq!(k.bilinear(x, x), Fe::ZERO);
            // definition x conj(y) + conj(x) y
            for y in k.elements().step_by(5) {
                let d = k.mul(x, k.conj(y)) + k.mul(k.conj(x), y);
                assert!(d.in_base());
                assert_eq!(d.a, k.bilinear(x, y));
            }
            assert_eq!(k.bilinear(Ke::I, x), x.a);
            assert_eq!(k.bilinear(Ke::ONE, x), x.b);
        }
    }

    #[test]
    fn polar_roundtrip_exhaustive() {
        for m in 1..=4 {
            let k = ext(m);
            for x in k.elements().skip(1) {
                let (l, u) = k.polar(x).unwrap();
                assert!(!l.is_zero());
                assert_eq!(k.norm(u), Fe::ONE);
                assert_eq!(k.scale(l, u), x);
                // matches sqrt(x conj x), sqrt(x / conj x)
                let xx = k.mul(x, k.conj(x));
                assert_eq!(Ke::from_base(l), k.sqrt(xx));
                assert_eq!(u, k.sqrt(k.div(x, k.conj(x)).unwrap()));
            }
            assert_eq!(k.polar(Ke::ZERO), Err(Error::PolarOfZero));
            for l in k.base().elements().skip(1) {
                assert_eq!(k.polar(Ke::from_base(l)).unwrap(), (l, Ke::ONE));
            }
            for &u in &k.circle().elements {
                assert_eq!(k.polar(u).unwrap(), (Fe::ONE, u));
            }
        }
    }

    #[test]
    fn sqrt_and_inverse_in_k() {
        let k = ext(5);
        for x in k.elements() {
            let r = k.sqrt(x);
            assert_eq!(k.square(r), x);
            assert_eq!(k.mul(r, r), x);
            if !x.is_zero() {
                assert_eq!(k.mul(x, k.inv(x).unwrap()), Ke::ONE);
            }
        }
        assert_eq!(k.inv(Ke::ONE).unwrap(), Ke::ONE);
        assert_eq!(k.inv(Ke::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn table_pow_matches_square_and_multiply() {
        let k = ext(4);
        for x in k.elements() {
            for e in [0u128, 1, 2, 3, 17, 254, 255, 256, 1000] {
                let slow = if e == 0 {
                    Ke::ONE
                } else {
                    k.pow_slow(x, e)
                };
                assert_eq!(k.pow(x, e), slow, "x={x} e={e}");
            }
        }
    }

    #[test]
    fn large_degree_without_tables() {
        let k = ext(11);
        assert!(k.klog.is_none());
        let w = k.w();
        assert_eq!(k.pow(w, k.q() as u128 + 1), Ke::ONE);
        assert_ne!(k.pow(w, (k.q() as u128 + 1) / 3), Ke::ONE);
        let x = Ke::new(Fe(0x123), Fe(0x456));
        assert_eq!(k.mul(k.pow(x, 1000), k.pow(x, 24)), k.pow(x, 1024));
    }

    #[test]
    fn hex_roundtrip() {
        let m = 5;
        let x = Ke::new(Fe(3), Fe(17));
        assert_eq!(x.to_hex(m), "223");
        assert_eq!(Ke::from_hex("223", m).unwrap(), x);
        assert!(Ke::from_hex("400", m).is_err());
    }
}
