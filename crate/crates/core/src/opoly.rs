//! O-polynomials: permutations h of F such that
//! `D(h) = {(t : h(t) : 1)} + {(0:1:0), (1:0:0)}` is a hyperoval.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, PointH};
use crate::gf2m::exponent::{self, gcd};
use crate::gf2m::{Ext, Fe, Gf2m, Ke};

/// Known o-polynomial families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum OPolyFamily {
    /// `t^2`.
    Hyperconic,
    /// `t^{2^r}`.
    Translation { r: u32 },
    /// `t^6`, m odd.
    Segre,
    /// `t^{3 sigma + 4}`, m odd.
    Glynn1,
    /// `t^{sigma + gamma}`, m odd.
    Glynn2,
    /// `t^{1/6} + t^{1/2} + t^{5/6}`, m odd.
    Payne,
    /// `t^sigma + t^{sigma+2} + t^{3 sigma + 4}`, m odd.
    Cherowitzo,
    /// Subiaco with parameter d; `None` picks the least admissible d.
    Subiaco { d: Option<Fe> },
    /// Adelaide with `b in S \ {1}` (default: the generator of S) and
    /// `k = sign * (q-1)/3`.
    Adelaide { b: Option<Ke>, negative: bool },
    /// `t^{num/den}` with the exponent read modulo q - 1.
    Monomial { num: i64, den: i64 },
    /// Values `h(t)` listed in element order.
    Table { values: Vec<Fe> },
}

impl fmt::Display for OPolyFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OPolyFamily::Hyperconic => write!(f, "hyperconic"),
            OPolyFamily::Translation { r } => write!(f, "translation(r={r})"),
            OPolyFamily::Segre => write!(f, "segre"),
            OPolyFamily::Glynn1 => write!(f, "glynn1"),
            OPolyFamily::Glynn2 => write!(f, "glynn2"),
            OPolyFamily::Payne => write!(f, "payne"),
            OPolyFamily::Cherowitzo => write!(f, "cherowitzo"),
            OPolyFamily::Subiaco { .. } => write!(f, "subiaco"),
            OPolyFamily::Adelaide { .. } => write!(f, "adelaide"),
            OPolyFamily::Monomial { num, den } => write!(f, "t^({num}/{den})"),
            OPolyFamily::Table { .. } => write!(f, "table"),
        }
    }
}

/// `sigma = 2^{(m+1)/2}` for odd m.
pub fn glynn_sigma(m: u32) -> u128 {
    1u128 << m.div_ceil(2)
}

/// `gamma = 2^k` for `m = 4k - 1`, `2^{3k+1}` for `m = 4k + 1`.
pub fn glynn_gamma(m: u32) -> u128 {
    if m % 4 == 3 {
        1u128 << m.div_ceil(4)
    } else {
        1u128 << (3 * (m / 4) + 1)
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidFamily(msg.into())
}

fn require_odd(m: u32, min: u32, name: &str) -> Result<()> {
    if m % 2 == 0 || m < min {
        Err(invalid(format!("{name} needs odd m >= {min}, got m = {m}")))
    } else {
        Ok(())
    }
}

/// Least `d` with `tr(1/d) = 1`, avoiding GF(4) when `m = 2 (mod 4)`.
pub fn subiaco_default_d(f: &Gf2m) -> Option<Fe> {
    f.elements().skip(1).find(|&d| subiaco_d_ok(f, d))
}

fn in_gf4(f: &Gf2m, d: Fe) -> bool {
    f.pow(d, 4) == d
}

fn subiaco_d_ok(f: &Gf2m, d: Fe) -> bool {
    !d.is_zero()
        && f.trace(f.inv_or_zero(d)) == 1
        && !(f.m() % 4 == 2 && in_gf4(f, d))
}

impl OPolyFamily {
    /// Checks the parameter constraints of the family at degree m.
    pub fn validate(&self, k: &Ext) -> Result<()> {
        let m = k.m();
        let q = k.q() as u128;
        match self {
            OPolyFamily::Hyperconic => Ok(()),
            OPolyFamily::Translation { r } => {
                if *r == 0 || *r >= m.max(2) {
                    return Err(invalid(format!("translation needs 1 <= r < m, got r = {r}")));
                }
                Ok(())
            }
            OPolyFamily::Segre | OPolyFamily::Payne | OPolyFamily::Cherowitzo => {
                require_odd(m, 5, &self.to_string())
            }
            OPolyFamily::Glynn1 | OPolyFamily::Glynn2 => require_odd(m, 7, &self.to_string()),
            OPolyFamily::Subiaco { d } => {
                if subiaco_default_d(k.base()).is_none() {
                    return Err(invalid(format!("subiaco has no admissible d at m = {m}")));
                }
                match d {
                    Some(d) if d.0 >= k.q() || !subiaco_d_ok(k.base(), *d) => Err(invalid(
                        format!("subiaco parameter d = {d} needs tr(1/d) = 1 (and d outside GF(4) when m = 2 mod 4)"),
                    )),
                    _ => Ok(()),
                }
            }
            OPolyFamily::Adelaide { b, .. } => {
                if m % 2 == 1 || m < 2 {
                    return Err(invalid(format!("adelaide needs even m, got m = {m}")));
                }
                if let Some(b) = b {
                    if k.norm(*b) != Fe::ONE || *b == Ke::ONE {
                        return Err(invalid("adelaide parameter b must lie in S \\ {1}"));
                    }
                }
                Ok(())
            }
            OPolyFamily::Monomial { den, .. } => {
                exponent::mod_inverse(*den as i128, q - 1)?;
                Ok(())
            }
            OPolyFamily::Table { values } => {
                if values.len() != k.q() as usize || values.iter().any(|v| v.0 >= k.q()) {
                    Err(Error::Cardinality {
                        expected: k.q() as usize,
                        got: values.len(),
                    })
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Whether the family is guaranteed to be an o-polynomial by the
    /// classical theory (translation needs `gcd(r, m) = 1`).
    pub fn is_regular(&self, m: u32) -> bool {
        match self {
            OPolyFamily::Translation { r } => gcd(*r as u128, m as u128) == 1,
            _ => true,
        }
    }

    /// The table of the family over F.
    pub fn table(&self, k: &Ext) -> Result<OPolyTable> {
        self.validate(k)?;
        let f = k.base();
        let m = k.m();
        let q1 = k.q() as u128 - 1;
        let frac = |num: i128, den: i128| -> Result<u128> {
            let e = exponent::mod_fraction(num, den, q1.max(1))?;
            // t^{q-1} rather than t^0 so that 0 -> 0
            Ok(if e == 0 { q1.max(1) } else { e })
        };
        let mono = |e: u128| OPolyTable::from_fn(f, |t| f.pow(t, e));
        Ok(match self {
            OPolyFamily::Hyperconic => mono(2),
            OPolyFamily::Translation { r } => mono(1u128 << r),
            OPolyFamily::Segre => mono(6),
            OPolyFamily::Glynn1 => mono(3 * glynn_sigma(m) + 4),
            OPolyFamily::Glynn2 => mono(glynn_sigma(m) + glynn_gamma(m)),
            OPolyFamily::Payne => {
                let (a, b, c) = (frac(1, 6)?, frac(1, 2)?, frac(5, 6)?);
                OPolyTable::from_fn(f, |t| f.pow(t, a) + f.pow(t, b) + f.pow(t, c))
            }
            OPolyFamily::Cherowitzo => {
                let s = glynn_sigma(m);
                OPolyTable::from_fn(f, |t| {
                    f.pow(t, s) + f.pow(t, s + 2) + f.pow(t, 3 * s + 4)
                })
            }
            OPolyFamily::Subiaco { d } => {
                let d = d.or_else(|| subiaco_default_d(f)).expect("validated");
                subiaco(f, d)
            }
            OPolyFamily::Adelaide { b, negative } => {
                let b = b.unwrap_or_else(|| k.w());
                adelaide(k, b, *negative)?
            }
            OPolyFamily::Monomial { num, den } => mono(frac(*num as i128, *den as i128)?),
            OPolyFamily::Table { values } => OPolyTable {
                values: values.clone(),
            },
        })
    }

    /// Closed-form inverse where one is known, else `None`.
    pub fn closed_inverse(&self, k: &Ext) -> Result<Option<OPolyTable>> {
        self.validate(k)?;
        let f = k.base();
        let m = k.m();
        let qq1 = (k.q() as u128).pow(2) - 1;
        Ok(match self {
            OPolyFamily::Payne => {
                let inv5 = exponent::mod_inverse(5, qq1)?;
                Some(OPolyTable::from_fn(f, |t| f.pow(k.dickson(inv5, t), 6)))
            }
            OPolyFamily::Cherowitzo => {
                let s = glynn_sigma(m);
                Some(OPolyTable::from_fn(f, |t| {
                    let inner = f.pow(t, s + 1) + f.pow(t, 3) + t;
                    f.mul(t, f.pow(inner, s / 2 - 1))
                }))
            }
            OPolyFamily::Hyperconic => Some(OPolyTable::from_fn(f, |t| f.sqrt(t))),
            _ => None,
        })
    }
}

/// The Subiaco o-polynomial with parameter d.
fn subiaco(f: &Gf2m, d: Fe) -> OPolyTable {
    let d2 = f.square(d);
    let c = f.mul(d2, Fe::ONE + d + d2);
    OPolyTable::from_fn(f, |t| {
        let t2 = f.square(t);
        let num = f.mul(d2, f.pow(t, 4)) + f.mul(c, f.mul(t2, t)) + f.mul(c, t2) + f.mul(d2, t);
        let den = f.square(t2 + f.mul(d, t) + Fe::ONE);
        f.mul(num, f.inv_or_zero(den)) + f.sqrt(t)
    })
}

/// The Adelaide o-polynomial
/// `T(b^k)/T(b) (t+1) + T((bt + conj b)^k)/T(b) (t + T(b) t^{1/2} + 1)^{1-k} + t^{1/2}`.
fn adelaide(k: &Ext, b: Ke, negative: bool) -> Result<OPolyTable> {
    let f = k.base();
    let q = k.q() as i128;
    let kk = if negative { -(q - 1) / 3 } else { (q - 1) / 3 };
    let tb = k.t(b);
    let tb_inv = f.inv(tb)?;
    let c1 = f.mul(k.t(k.pow_signed(b, kk)), tb_inv);
    let e = exponent::reduce(1 - kk, (q - 1) as u128);
    let bc = k.conj(b);
    Ok(OPolyTable::from_fn(f, |t| {
        let st = f.sqrt(t);
        let x = k.scale(t, b) + bc;
        let c2 = f.mul(k.t(k.pow_signed(x, kk)), tb_inv);
        let base = t + f.mul(tb, st) + Fe::ONE;
        let p = if base.is_zero() { Fe::ZERO } else { f.pow(base, e) };
        f.mul(c1, t + Fe::ONE) + f.mul(c2, p) + st
    }))
}

/// A function F -> F stored as its table of values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OPolyTable {
    pub values: Vec<Fe>,
}

impl OPolyTable {
    pub fn from_fn(f: &Gf2m, h: impl Fn(Fe) -> Fe) -> OPolyTable {
        OPolyTable {
            values: f.elements().map(h).collect(),
        }
    }

    #[inline]
    pub fn eval(&self, t: Fe) -> Fe {
        self.values[t.0 as usize]
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.values.len()];
        for v in &self.values {
            match seen.get_mut(v.0 as usize) {
                Some(s) if !*s => *s = true,
                _ => return false,
            }
        }
        true
    }

    /// `h(0) = 0` and `h(1) = 1`.
    pub fn is_normalized(&self) -> bool {
        self.values[0] == Fe::ZERO && self.values.get(1).is_none_or(|&v| v == Fe::ONE)
    }

    /// Table inverse of a permutation.
    pub fn inverse(&self) -> Result<OPolyTable> {
        if !self.is_permutation() {
            return Err(Error::NotAnOPolynomial);
        }
        let mut values = vec![Fe::ZERO; self.values.len()];
        for (t, v) in self.values.iter().enumerate() {
            values[v.0 as usize] = Fe(t as u32);
        }
        Ok(OPolyTable { values })
    }

    /// The hyperoval D(h).
    pub fn hyperoval(&self) -> Vec<PointH> {
        let mut pts: Vec<PointH> = self
            .values
            .iter()
            .enumerate()
            .map(|(t, &h)| PointH::affine(Fe(t as u32), h))
            .collect();
        pts.push(PointH::Y_INF);
        pts.push(PointH::X_INF);
        pts
    }

    /// The oval E(h) = D(h) minus its nucleus (1:0:0).
    pub fn oval(&self) -> Vec<PointH> {
        let mut pts = self.hyperoval();
        pts.pop();
        pts
    }

    pub fn is_opolynomial(&self, f: &Gf2m) -> bool {
        self.values.len() == f.q() as usize
            && self.is_permutation()
            && geometry::is_hyperoval(f, &self.hyperoval()).unwrap_or(false)
    }

    /// One of the three standard transforms of an o-polynomial.
    ///
    /// * 1: `h^{-1}`
    /// * 2: `t h(1/t)`, with value 0 at 0
    /// * 3: `t + (t+1) h(t/(t+1))`, with value 1 at 1
    pub fn transform(&self, f: &Gf2m, which: u8) -> Result<OPolyTable> {
        if !self.is_opolynomial(f) {
            return Err(Error::NotAnOPolynomial);
        }
        match which {
            1 => self.inverse(),
            2 => Ok(OPolyTable::from_fn(f, |t| {
                if t.is_zero() {
                    Fe::ZERO
                } else {
                    f.mul(t, self.eval(f.inv_or_zero(t)))
                }
            })),
            3 => Ok(OPolyTable::from_fn(f, |t| {
                if t == Fe::ONE {
                    Fe::ONE
                } else {
                    let s = t + Fe::ONE;
                    t + f.mul(s, self.eval(f.mul(t, f.inv_or_zero(s))))
                }
            })),
            _ => Err(invalid(format!("unknown transform {which}"))),
        }
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["t_hex", "h_hex"])?;
        for (t, v) in self.values.iter().enumerate() {
            wr.write_record([format!("{t:x}"), v.to_hex()])?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: std::io::Read>(r: R) -> Result<OPolyTable> {
        let mut rd = csv::Reader::from_reader(r);
        let mut values = Vec::new();
        for (i, rec) in rd.records().enumerate() {
            let rec = rec?;
            let t = Fe::from_hex(rec.get(0).unwrap_or(""))?;
            if t.0 as usize != i {
                return Err(Error::Parse(format!("row {i} has t = {t}")));
            }
            values.push(Fe::from_hex(rec.get(1).unwrap_or(""))?);
        }
        Ok(OPolyTable { values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext(m: u32) -> Ext {
        Ext::with_degree(m).unwrap()
    }

    fn catalog(m: u32) -> Vec<OPolyFamily> {
        let mut v = vec![OPolyFamily::Hyperconic];
        for r in 1..m {
            if gcd(r as u128, m as u128) == 1 {
                v.push(OPolyFamily::Translation { r });
            }
        }
        if m % 2 == 1 && m >= 5 {
            v.extend([
                OPolyFamily::Segre,
                OPolyFamily::Payne,
                OPolyFamily::Cherowitzo,
            ]);
        }
        if m % 2 == 1 && m >= 7 {
            v.extend([OPolyFamily::Glynn1, OPolyFamily::Glynn2]);
        }
        if m != 2 {
            v.push(OPolyFamily::Subiaco { d: None });
        }
        if m % 2 == 0 {
            v.push(OPolyFamily::Adelaide {
                b: None,
                negative: false,
            });
            v.push(OPolyFamily::Adelaide {
                b: None,
                negative: true,
            });
        }
        v
    }

    #[test]
    fn catalog_is_opolynomial() {
        for m in 1..=7 {
            let k = ext(m);
            for fam in catalog(m) {
                let h = fam.table(&k).unwrap();
                assert!(h.is_opolynomial(k.base()), "m={m} {fam}");
                assert!(h.is_normalized(), "m={m} {fam}");
                for which in 1..=3 {
                    let t = h.transform(k.base(), which).unwrap();
                    assert!(t.is_opolynomial(k.base()), "m={m} {fam} pi{which}");
                    assert_eq!(t.transform(k.base(), which).unwrap(), h);
                }
            }
        }
    }

    #[test]
    fn glynn_parameters() {
        for m in (7..=15).step_by(2) {
            let q1 = (1u128 << m) - 1;
            let s = glynn_sigma(m);
            let g = glynn_gamma(m);
            assert_eq!(s * s % q1, 2);
            assert_eq!(exponent::pow_mod(g, 4, q1), 2, "m={m}");
        }
    }

    #[test]
    fn translation_gcd_condition() {
        // t^{2^r} is an o-polynomial exactly when gcd(r, m) = 1
        for m in 2..=8 {
            let k = ext(m);
            for r in 1..m {
                let h = OPolyFamily::Translation { r }.table(&k).unwrap();
                let expect = gcd(r as u128, m as u128) == 1;
                assert_eq!(h.is_opolynomial(k.base()), expect, "m={m} r={r}");
            }
        }
    }

    #[test]
    fn predicate_examples() {
        let k4 = ext(4);
        let cube = OPolyFamily::Monomial { num: 3, den: 1 }.table(&k4).unwrap();
        assert!(!cube.is_permutation());
        assert!(!cube.is_opolynomial(k4.base()));
        let k5 = ext(5);
        assert!(OPolyFamily::Segre
            .table(&k5)
            .unwrap()
            .is_opolynomial(k5.base()));
        assert!(OPolyFamily::Segre.table(&ext(6)).is_err());
        assert!(OPolyFamily::Adelaide {
            b: None,
            negative: false
        }
        .table(&k5)
        .is_err());
    }

    #[test]
    fn closed_form_inverses() {
        for m in [5u32, 7] {
            let k = ext(m);
            for fam in [OPolyFamily::Payne, OPolyFamily::Cherowitzo] {
                let h = fam.table(&k).unwrap();
                let inv = fam.closed_inverse(&k).unwrap().unwrap();
                assert_eq!(inv, h.inverse().unwrap(), "m={m} {fam}");
            }
        }
        let k = ext(6);
        let h = OPolyFamily::Hyperconic.table(&k).unwrap();
        assert_eq!(
            OPolyFamily::Hyperconic.closed_inverse(&k).unwrap().unwrap(),
            h.inverse().unwrap()
        );
    }

    #[test]
    fn transform_examples() {
        let k = ext(5);
        let f = k.base();
        let sq = OPolyFamily::Hyperconic.table(&k).unwrap();
        let half = OPolyFamily::Monomial { num: 1, den: 2 }.table(&k).unwrap();
        assert_eq!(sq.transform(f, 1).unwrap(), half);
        for r in [2u32, 3] {
            let h = OPolyFamily::Translation { r }.table(&k).unwrap();
            let expect = OPolyFamily::Monomial {
                num: 1 - (1 << r),
                den: 1,
            }
            .table(&k)
            .unwrap();
            assert_eq!(h.transform(f, 2).unwrap(), expect);
        }
        let segre = OPolyFamily::Segre.table(&k).unwrap();
        let h3 = segre.transform(f, 3).unwrap();
        for t in f.elements().filter(|&t| t != Fe::ONE) {
            let s = t + Fe::ONE;
            let direct = t + f.mul(s, f.pow(f.mul(t, f.inv_or_zero(s)), 6));
            assert_eq!(h3.eval(t), direct);
        }
        assert!(h3.is_opolynomial(f));
        // branch-point inverse (D_{1/5}(t + 1))^{q^2 - 2} + 1
        let inv5 = exponent::mod_inverse(5, 1023).unwrap();
        let closed = OPolyTable::from_fn(f, |t| {
            f.pow(k.dickson(inv5, t + Fe::ONE), 1024 - 2) + Fe::ONE
        });
        assert_eq!(closed, h3.inverse().unwrap());
    }

    #[test]
    fn payne_self_dual() {
        for m in [5u32, 7, 9] {
            let k = ext(m);
            let h = OPolyFamily::Payne.table(&k).unwrap();
            assert_eq!(h.transform(k.base(), 2).unwrap(), h);
        }
    }

    #[test]
    fn cherowitzo_permutes_gf32() {
        let k = ext(5);
        assert!(OPolyFamily::Cherowitzo
            .table(&k)
            .unwrap()
            .is_permutation());
    }

    #[test]
    fn csv_roundtrip() {
        let k = ext(3);
        let h = OPolyFamily::Hyperconic.table(&k).unwrap();
        let mut buf = Vec::new();
        h.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf.clone()).unwrap();
        assert!(s.starts_with("t_hex,h_hex\n0,0\n1,1\n2,4\n"));
        assert_eq!(OPolyTable::read_csv(&buf[..]).unwrap(), h);
    }
}
