//! g-functions `g: S -> F`, the bridge between ovals with nucleus at the
//! origin and Niho bent functions `f(lambda u) = tr(lambda g(u))`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bent;
use crate::error::{Error, Result};
use crate::geometry::{self, AffineLine, PointH};
use crate::gf2m::exponent;
use crate::gf2m::{Ext, Fe, FieldParams, Ke};
use crate::opoly::{glynn_gamma, glynn_sigma, OPolyFamily, OPolyTable};

/// A function on the unit circle, stored in generator order
/// (`values[k] = g(w^k)`).
#[derive(Clone, Debug, Eq)]
pub struct GFunction {
    pub values: Vec<Fe>,
    pub provenance: String,
}

impl PartialEq for GFunction {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}

impl GFunction {
    pub fn from_fn(k: &Ext, provenance: impl Into<String>, g: impl Fn(Ke) -> Fe) -> GFunction {
        GFunction {
            values: k.circle().elements.iter().map(|&u| g(u)).collect(),
            provenance: provenance.into(),
        }
    }

    pub fn constant(k: &Ext, c: Fe) -> GFunction {
        GFunction::from_fn(k, "constant", |_| c)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn at(&self, idx: usize) -> Fe {
        self.values[idx]
    }

    /// `g(u)` for `u in S`.
    pub fn eval(&self, k: &Ext, u: Ke) -> Result<Fe> {
        let idx = k
            .circle()
            .index_of(u)
            .ok_or_else(|| Error::InvalidGFunction(format!("{u} is not on the unit circle")))?;
        Ok(self.values[idx])
    }

    fn check_field(&self, k: &Ext) -> Result<()> {
        if self.values.len() != k.circle().len() {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// `g(u) + <c, u>`.
    pub fn add_linear(&self, k: &Ext, c: Ke) -> GFunction {
        GFunction {
            values: self
                .values
                .iter()
                .zip(&k.circle().elements)
                .map(|(&g, &u)| g + k.bilinear(c, u))
                .collect(),
            provenance: if c.is_zero() {
                self.provenance.clone()
            } else {
                format!("{} + <{}, u>", self.provenance, c.to_hex(k.m()))
            },
        }
    }

    /// `u -> g(w^v u)`: the g-function of the bent function `x -> f(w^v x)`.
    pub fn rotate(&self, v: usize) -> GFunction {
        let n = self.values.len();
        GFunction {
            values: (0..n).map(|i| self.values[(i + v) % n]).collect(),
            provenance: format!("{} rotated by w^{v}", self.provenance),
        }
    }

    /// Unit-circle indices where g vanishes.
    pub fn zeros(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&i| self.values[i].is_zero())
            .collect()
    }

    /// The point `u / g(u)` in homogeneous coordinates: `(<i,u> : <1,u> : g(u))`.
    /// A zero of g gives the point at infinity in direction u.
    pub fn oval_point(&self, k: &Ext, idx: usize) -> PointH {
        let u = k.circle().get(idx);
        PointH::new(k.base(), u.a, u.b, self.values[idx]).expect("u is nonzero")
    }

    /// `{ u / g(u) }`, in unit-circle order.
    pub fn oval(&self, k: &Ext) -> Vec<PointH> {
        (0..self.values.len()).map(|i| self.oval_point(k, i)).collect()
    }

    /// `{ u / g(u) } + {0}`; the origin is the last point.
    pub fn hyperoval(&self, k: &Ext) -> Vec<PointH> {
        let mut pts = self.oval(k);
        pts.push(PointH::ORIGIN);
        pts
    }

    /// `{ u / g(u) }` as elements of K; fails if g has a zero.
    pub fn affine_oval(&self, k: &Ext) -> Result<Vec<Ke>> {
        let f = k.base();
        self.values
            .iter()
            .zip(&k.circle().elements)
            .enumerate()
            .map(|(i, (&g, &u))| {
                if g.is_zero() {
                    Err(Error::GVanishes(i))
                } else {
                    Ok(k.scale(f.inv_or_zero(g), u))
                }
            })
            .collect()
    }

    /// The lines `L(u, g(u))`.
    pub fn lines(&self, k: &Ext) -> Vec<AffineLine> {
        self.values
            .iter()
            .zip(&k.circle().elements)
            .map(|(&mu, &u)| AffineLine { u, mu })
            .collect()
    }

    /// The oval `{u/g(u)}` has nucleus 0.
    pub fn is_oval_with_origin_nucleus(&self, k: &Ext) -> bool {
        geometry::is_hyperoval(k.base(), &self.hyperoval(k)).unwrap_or(false)
    }

    /// Whether `{L(u, g(u))}` is a line oval.
    pub fn is_line_oval(&self, k: &Ext) -> bool {
        geometry::is_line_oval(k, &self.lines(k))
    }

    pub fn header(&self, k: &Ext) -> GHeader {
        GHeader {
            params: *k.params(),
            generator_hex: k.w().to_hex(k.m()),
            provenance: self.provenance.clone(),
        }
    }

    /// CSV with columns `u_index, u_hex, g_hex`.
    pub fn write_csv<W: std::io::Write>(&self, k: &Ext, w: W) -> Result<()> {
        self.check_field(k)?;
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["u_index", "u_hex", "g_hex"])?;
        for (i, (&g, &u)) in self.values.iter().zip(&k.circle().elements).enumerate() {
            wr.write_record([i.to_string(), u.to_hex(k.m()), g.to_hex()])?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: std::io::Read>(k: &Ext, r: R, provenance: &str) -> Result<GFunction> {
        let mut rd = csv::Reader::from_reader(r);
        let mut values = Vec::new();
        for (i, rec) in rd.records().enumerate() {
            let rec = rec?;
            let idx: usize = rec
                .get(0)
                .unwrap_or("")
                .parse()
                .map_err(|e| Error::Parse(format!("u_index: {e}")))?;
            let u = Ke::from_hex(rec.get(1).unwrap_or(""), k.m())?;
            if idx != i || k.circle().index_of(u) != Some(i) {
                return Err(Error::Parse(format!("row {i} does not match the unit circle")));
            }
            let g = Fe::from_hex(rec.get(2).unwrap_or(""))?;
            if g.0 >= k.q() {
                return Err(Error::Parse(format!("g value {g} outside F")));
            }
            values.push(g);
        }
        let g = GFunction {
            values,
            provenance: provenance.into(),
        };
        g.check_field(k)?;
        Ok(g)
    }
}

/// Metadata written next to a g-function table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GHeader {
    pub params: FieldParams,
    pub generator_hex: String,
    pub provenance: String,
}

/// If `g1 + g2 = <c, u>` on all of S, returns c.
pub fn linear_shift_between(k: &Ext, g1: &GFunction, g2: &GFunction) -> Option<Ke> {
    if g1.len() != g2.len() {
        return None;
    }
    let f = k.base();
    let d: Vec<Fe> = g1.values.iter().zip(&g2.values).map(|(&a, &b)| a + b).collect();
    // <c, u> = c.a u.b + c.b u.a; at u = 1 this is c.b
    let cb = d[0];
    let s = k.circle();
    let j = (1..s.len()).find(|&j| !s.get(j).b.is_zero())?;
    let u = s.get(j);
    let ca = f.mul(d[j] + f.mul(cb, u.a), f.inv_or_zero(u.b));
    let c = Ke::new(ca, cb);
    s.elements
        .iter()
        .zip(&d)
        .all(|(&u, &v)| k.bilinear(c, u) == v)
        .then_some(c)
}

pub fn equal_up_to_linear_shift(k: &Ext, g1: &GFunction, g2: &GFunction) -> bool {
    linear_shift_between(k, g1, g2).is_some()
}

/// A sum `c + T(a_1 u^{e_1}) + ... + T(a_n u^{e_n})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceForm {
    pub constant: Fe,
    pub terms: Vec<(Ke, i64)>,
}

impl TraceForm {
    pub fn new(constant: Fe, terms: Vec<(Ke, i64)>) -> TraceForm {
        TraceForm { constant, terms }
    }

    pub fn eval(&self, k: &Ext, idx: usize) -> Fe {
        let s = k.circle();
        let mut acc = self.constant;
        for &(c, e) in &self.terms {
            acc += k.t(k.mul(c, s.get(s.pow_index(idx, e as i128))));
        }
        acc
    }

    pub fn to_g(&self, k: &Ext, provenance: impl Into<String>) -> GFunction {
        GFunction {
            values: (0..k.circle().len()).map(|i| self.eval(k, i)).collect(),
            provenance: provenance.into(),
        }
    }
}

/// `g(u) = h^{-1}(<i,u>/<1,u>) <1,u> + <i,u>`, `g(1) = 1`.
pub fn g_from_opoly(k: &Ext, h: &OPolyTable) -> Result<GFunction> {
    let f = k.base();
    if !h.is_opolynomial(f) {
        return Err(Error::NotAnOPolynomial);
    }
    let hinv = h.inverse()?;
    Ok(GFunction::from_fn(k, "o-polynomial", |u| {
        // <i,u> = u.a and <1,u> = u.b in the basis {1, i}
        if u.b.is_zero() {
            Fe::ONE
        } else {
            f.mul(hinv.eval(f.mul(u.a, f.inv_or_zero(u.b))), u.b) + u.a
        }
    }))
}

/// The monomial form `<i,u>^{s'} <1,u>^{q - s'}` with `s' = s^{-1} mod q-1`.
/// This is the variant without the `<i,u>` term, so `g(1) = 0`.
pub fn g_monomial(k: &Ext, s: i128) -> Result<GFunction> {
    let f = k.base();
    let q = k.q() as u128;
    let sp = exponent::mod_inverse(s, q - 1)?;
    let h = OPolyFamily::Monomial {
        num: s as i64,
        den: 1,
    }
    .table(k)?;
    if !h.is_opolynomial(f) {
        return Err(Error::NotAnOPolynomial);
    }
    let e2 = exponent::reduce(q as i128 - sp as i128, q - 1);
    Ok(GFunction::from_fn(k, format!("monomial s={s}"), |u| {
        if u.b.is_zero() {
            return Fe::ZERO;
        }
        f.mul(f.pow(u.a, sp), f.pow(u.b, if e2 == 0 { q - 1 } else { e2 }))
    }))
}

fn half_exponents(k: &Ext) -> Vec<u128> {
    let q = k.q() as u128;
    let order = q * q - 1;
    let inv2 = exponent::mod_inverse(2, order).expect("odd modulus");
    (0..=q)
        .map(|i| {
            let e = exponent::mul_mod((q - 1) * i % order, inv2, order);
            exponent::reduce(e as i128 - 1, order)
        })
        .collect()
}

/// `g(u) = sum_i a_i u^{i+1}` evaluated on S, with coefficients `a_i in K`.
fn g_from_coefficients(k: &Ext, a: &[Ke], provenance: String) -> Result<GFunction> {
    let s = k.circle();
    let n = s.len();
    let mut values = Vec::with_capacity(n);
    for idx in 0..n {
        let mut acc = Ke::ZERO;
        for (i, &ai) in a.iter().enumerate() {
            if !ai.is_zero() {
                acc += k.mul(ai, s.get(idx * (i + 1) % n));
            }
        }
        if !acc.in_base() {
            return Err(Error::InvalidGFunction(format!(
                "value at index {idx} is not in F"
            )));
        }
        values.push(acc.a);
    }
    Ok(GFunction { values, provenance })
}

fn check_affine_oval(k: &Ext, points: &[Ke]) -> Result<()> {
    let n = k.circle().len();
    if points.len() != n {
        return Err(Error::Cardinality {
            expected: n,
            got: points.len(),
        });
    }
    if points.iter().any(|p| p.is_zero()) {
        return Err(Error::InvalidGFunction("oval contains the origin".into()));
    }
    let mut hyper: Vec<PointH> = points
        .iter()
        .map(|p| PointH::affine(p.a, p.b))
        .collect();
    hyper.push(PointH::ORIGIN);
    if !geometry::is_hyperoval(k.base(), &hyper)? {
        return Err(Error::NotAnArc);
    }
    Ok(())
}

/// `g(u) = sum_{i=0}^{q} sum_{v in O} v^{(q-1)i/2 - 1} u^{i+1}`.
pub fn g_from_oval(k: &Ext, points: &[Ke]) -> Result<GFunction> {
    check_affine_oval(k, points)?;
    let a: Vec<Ke> = half_exponents(k)
        .into_iter()
        .map(|e| points.iter().fold(Ke::ZERO, |acc, &v| acc + k.pow(v, e)))
        .collect();
    g_from_coefficients(k, &a, "affine oval".into())
}

/// Direct route: write each `v in O` as `lambda u` and set `g(u) = 1/lambda`.
pub fn g_from_oval_polar(k: &Ext, points: &[Ke]) -> Result<GFunction> {
    check_affine_oval(k, points)?;
    let mut values = vec![None; k.circle().len()];
    for &v in points {
        let (l, idx) = k.polar_index(v).expect("nonzero");
        if values[idx].is_some() {
            return Err(Error::NotAnArc);
        }
        values[idx] = Some(k.base().inv_or_zero(l));
    }
    Ok(GFunction {
        values: values.into_iter().map(|v| v.expect("one point per direction")).collect(),
        provenance: "affine oval (polar)".into(),
    })
}

/// The oval `O_s = { v/g(v) + s/g(s) : v != s } + { s/g(s) }`.
pub fn shifted_oval(k: &Ext, g: &GFunction, s_idx: usize) -> Result<Vec<Ke>> {
    let pts = g.affine_oval(k)?;
    let ps = pts[s_idx];
    Ok(pts
        .iter()
        .enumerate()
        .map(|(i, &p)| if i == s_idx { ps } else { p + ps })
        .collect())
}

/// The g-function of `O_s`, with coefficients
/// `a_i = g(s) s^E + g(s) sum_{v != s} g(v) (g(s) v + s g(v))^E`,
/// `E = (q-1)i/2 - 1`.
pub fn g_shift(k: &Ext, g: &GFunction, s_idx: usize) -> Result<GFunction> {
    g.check_field(k)?;
    if let Some(&z) = g.zeros().first() {
        return Err(Error::GVanishes(z));
    }
    let circle = k.circle();
    let s = circle.get(s_idx);
    let gs = g.at(s_idx);
    let terms: Vec<(Fe, Ke)> = (0..circle.len())
        .filter(|&j| j != s_idx)
        .map(|j| {
            let v = circle.get(j);
            (g.at(j), k.scale(gs, v) + k.scale(g.at(j), s))
        })
        .collect();
    let a: Vec<Ke> = half_exponents(k)
        .into_iter()
        .map(|e| {
            let mut acc = k.pow(s, e);
            for &(gv, base) in &terms {
                acc += k.scale(gv, k.pow(base, e));
            }
            k.scale(gs, acc)
        })
        .collect();
    let mut out = g_from_coefficients(k, &a, String::new())?;
    out.provenance = format!("{} shifted to s = w^{s_idx}", g.provenance);
    Ok(out)
}

/// Adds `<c, u>` for the first c (in the order 0, then `lambda i`, then all
/// of K) that leaves g without zeros.
pub fn fix_zeros(k: &Ext, g: &GFunction) -> Result<(GFunction, Ke)> {
    let f = k.base();
    let candidates = std::iter::once(Ke::ZERO)
        .chain(f.elements().skip(1).map(|l| Ke::new(Fe::ZERO, l)))
        .chain(k.elements().skip(1));
    for c in candidates {
        let shifted = g.add_linear(k, c);
        if shifted.zeros().is_empty() {
            return Ok((shifted, c));
        }
    }
    Err(Error::InvalidGFunction(
        "no linear shift removes all zeros".into(),
    ))
}

/// The three equivalent validity conditions: line oval, oval with nucleus 0, bent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GReport {
    pub line_oval: bool,
    pub oval: bool,
    pub bent: bool,
}

impl GReport {
    pub fn consistent(&self) -> bool {
        self.line_oval == self.oval && self.oval == self.bent
    }

    pub fn valid(&self) -> bool {
        self.line_oval && self.oval && self.bent
    }
}

pub fn validate_g(k: &Ext, g: &GFunction) -> GReport {
    GReport {
        line_oval: g.is_line_oval(k),
        oval: g.is_oval_with_origin_nucleus(k),
        bent: bent::is_bent(&bent::bent_from_g(k, g)),
    }
}

/// Catalog of g-functions for the known hyperovals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GFamily {
    /// `g = 1`.
    Hyperconic,
    /// `(u u^{2^{m-r}} + conj) / (u^{2^{m-r}} + conj)`, `g(1) = 1`.
    Translation { r: u32 },
    Segre,
    Glynn1,
    Glynn2,
    Payne,
    Cherowitzo,
    OKeefePenttila,
    /// `1 + T(w^variant u^5)`.
    Subiaco { variant: u32 },
    /// `1 + T(u^{(q-1)/3})`.
    Adelaide,
    /// `1 + T(u^5)` at m = 4.
    LunelliSce,
}

impl fmt::Display for GFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GFamily::Hyperconic => write!(f, "hyperconic"),
            GFamily::Translation { r } => write!(f, "translation(r={r})"),
            GFamily::Segre => write!(f, "segre"),
            GFamily::Glynn1 => write!(f, "glynn1"),
            GFamily::Glynn2 => write!(f, "glynn2"),
            GFamily::Payne => write!(f, "payne"),
            GFamily::Cherowitzo => write!(f, "cherowitzo"),
            GFamily::OKeefePenttila => write!(f, "okeefe-penttila"),
            GFamily::Subiaco { variant } => write!(f, "subiaco(w^{variant})"),
            GFamily::Adelaide => write!(f, "adelaide"),
            GFamily::LunelliSce => write!(f, "lunelli-sce"),
        }
    }
}

fn need(cond: bool, fam: &GFamily, m: u32) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidFamily(format!("{fam} is not defined for m = {m}")))
    }
}

/// The root of `x^10 + x^6 + x^5 + x^3 + x^2 + x + 1` in K with the least
/// index (m = 5).
pub fn okeefe_penttila_epsilon(k: &Ext) -> Result<Ke> {
    if k.m() != 5 {
        return Err(Error::InvalidFamily("epsilon lives in GF(2^10)".into()));
    }
    let poly = [10u128, 6, 5, 3, 2, 1, 0];
    k.elements()
        .find(|&x| poly.iter().fold(Ke::ZERO, |acc, &e| acc + k.pow(x, e)).is_zero())
        .ok_or_else(|| Error::InvalidFamily("no root of the epsilon polynomial".into()))
}

/// The minimal polynomial of epsilon is irreducible over GF(2).
pub fn okeefe_penttila_poly_irreducible() -> bool {
    crate::gf2m::is_irreducible(0b100_0110_1111)
}

impl GFamily {
    pub fn validate(&self, m: u32) -> Result<()> {
        match self {
            GFamily::Hyperconic => Ok(()),
            GFamily::Translation { r } => need(
                *r >= 1 && *r < m.max(2) && exponent::gcd(*r as u128, m as u128) == 1,
                self,
                m,
            ),
            GFamily::Segre | GFamily::Payne | GFamily::Cherowitzo => {
                need(m % 2 == 1 && m >= 5, self, m)
            }
            GFamily::Glynn1 | GFamily::Glynn2 => need(m % 2 == 1 && m >= 7, self, m),
            GFamily::OKeefePenttila => need(m == 5, self, m),
            GFamily::Subiaco { variant } => need(
                m >= 3 && (*variant == 0 || (*variant == 1 && m % 4 == 2)),
                self,
                m,
            ),
            GFamily::Adelaide => need(m % 2 == 0 && m >= 4, self, m),
            GFamily::LunelliSce => need(m == 4, self, m),
        }
    }

    /// The o-polynomial of the family, when it has a standard one.
    pub fn opoly(&self) -> Option<OPolyFamily> {
        Some(match self {
            GFamily::Hyperconic => OPolyFamily::Hyperconic,
            GFamily::Translation { r } => OPolyFamily::Translation { r: *r },
            GFamily::Segre => OPolyFamily::Segre,
            GFamily::Glynn1 => OPolyFamily::Glynn1,
            GFamily::Glynn2 => OPolyFamily::Glynn2,
            GFamily::Payne => OPolyFamily::Payne,
            GFamily::Cherowitzo => OPolyFamily::Cherowitzo,
            GFamily::Subiaco { variant: 0 } => OPolyFamily::Subiaco { d: None },
            GFamily::Adelaide => OPolyFamily::Adelaide {
                b: None,
                negative: false,
            },
            _ => return None,
        })
    }

    /// The catalog g-function of the family at degree m.
    pub fn g(&self, k: &Ext) -> Result<GFunction> {
        let m = k.m();
        self.validate(m)?;
        let q = k.q() as i64;
        let name = format!("{self}");
        let one = Ke::ONE;
        let g = match self {
            GFamily::Hyperconic => GFunction::constant(k, Fe::ONE),
            GFamily::Translation { r } => translation_g(k, *r),
            GFamily::Segre if m == 5 => {
                let om = k.omega().expect("odd m");
                TraceForm::new(Fe::ONE, vec![(om, 9), (k.conj(om), 12)]).to_g(k, "")
            }
            GFamily::Segre => g_monomial(k, 6)?,
            GFamily::Glynn1 => g_monomial(k, 3 * glynn_sigma(m) as i128 + 4)?,
            GFamily::Glynn2 => g_monomial(k, (glynn_sigma(m) + glynn_gamma(m)) as i128)?,
            GFamily::Payne if m == 5 => {
                TraceForm::new(Fe::ONE, vec![(one, 5), (one, 1)]).to_g(k, "")
            }
            GFamily::Payne => {
                // { u + u^3 + u^{-3} } + {0}
                let s = k.circle();
                let pts: Vec<Ke> = (0..s.len())
                    .map(|i| s.get(i) + s.get(s.pow_index(i, 3)) + s.get(s.pow_index(i, -3)))
                    .collect();
                g_from_oval_polar(k, &pts)?
            }
            GFamily::Cherowitzo if m == 5 => {
                let om = k.omega().expect("odd m");
                TraceForm::new(
                    Fe::ZERO,
                    vec![(one, 5), (one, 8), (one, 9), (om, 12), (om, 13), (om, 16)],
                )
                .to_g(k, "")
            }
            GFamily::Cherowitzo => g_from_opoly(k, &OPolyFamily::Cherowitzo.table(k)?)?,
            GFamily::OKeefePenttila => {
                let eps = okeefe_penttila_epsilon(k)?;
                TraceForm::new(Fe::ONE, vec![(k.pow(eps, 123), 9), (one, 12)]).to_g(k, "")
            }
            GFamily::Subiaco { variant } => {
                let c = k.pow(k.w(), *variant as u128);
                TraceForm::new(Fe::ONE, vec![(c, 5)]).to_g(k, "")
            }
            GFamily::Adelaide => TraceForm::new(Fe::ONE, vec![(one, (q - 1) / 3)]).to_g(k, ""),
            GFamily::LunelliSce => TraceForm::new(Fe::ONE, vec![(one, 5)]).to_g(k, ""),
        };
        Ok(GFunction {
            values: g.values,
            provenance: name,
        })
    }
}

/// `g_r(u) = (u u^{2^{m-r}} + conj) / (u^{2^{m-r}} + conj)` with `g_r(1) = 1`.
pub fn translation_g(k: &Ext, r: u32) -> GFunction {
    let f = k.base();
    let m = k.m();
    let s = k.circle();
    let e = 1i128 << (m - r);
    GFunction {
        values: (0..s.len())
            .map(|i| {
                if r == 1 || i == 0 {
                    return Fe::ONE;
                }
                let ue = s.get(s.pow_index(i, e));
                let num = k.t(k.mul(s.get(i), ue));
                let den = k.t(ue);
                f.mul(num, f.inv_or_zero(den))
            })
            .collect(),
        provenance: format!("translation(r={r})"),
    }
}

/// The named g-functions listed for small m, as trace forms over S.
pub fn named_g(k: &Ext, name: &str) -> Result<GFunction> {
    let m = k.m();
    let one = Ke::ONE;
    let om = k.omega();
    let omb = om.map(|o| k.conj(o));
    let tf = |c: u32, terms: Vec<(Ke, i64)>| TraceForm::new(Fe(c), terms).to_g(k, name);
    let req = |mm: u32| -> Result<()> {
        if m == mm {
            Ok(())
        } else {
            Err(Error::InvalidFamily(format!("{name} is defined for m = {mm}")))
        }
    };
    Ok(match name {
        "m3-g1" => {
            req(3)?;
            tf(1, vec![(one, 4)])
        }
        "m4-g1" => {
            req(4)?;
            tf(1, vec![(one, 4), (one, 5), (one, 8)])
        }
        "translation-g3" => {
            req(5)?;
            tf(1, vec![(one, 8), (one, 9), (one, 16)])
        }
        "translation-gprime" => {
            req(5)?;
            let o = om.expect("odd m");
            tf(1, vec![(o, 4), (o, 5), (o, 8), (o, 9), (o, 12), (o, 13)])
        }
        "segre-class-form" => {
            req(5)?;
            let o = om.expect("odd m");
            tf(0, vec![(o, 4), (one, 5), (o, 8), (one, 9), (o, 12), (one, 13)])
        }
        "payne-g1" => {
            req(5)?;
            tf(1, vec![(one, 5), (one, 8), (one, 12), (one, 13)])
        }
        "payne-gomega" => {
            req(5)?;
            let (o, ob) = (om.expect("odd m"), omb.expect("odd m"));
            tf(0, vec![(one, 4), (o, 5), (ob, 9), (one, 12), (ob, 16)])
        }
        "cherowitzo-g1" => {
            req(5)?;
            let (o, ob) = (om.expect("odd m"), omb.expect("odd m"));
            tf(
                1,
                vec![(ob, 4), (o, 5), (one, 8), (ob, 9), (o, 12), (o, 13), (o, 16)],
            )
        }
        "cherowitzo-gomega" => {
            req(5)?;
            let (o, ob) = (om.expect("odd m"), omb.expect("odd m"));
            tf(0, vec![(o, 4), (o, 8), (one, 9), (ob, 12), (o, 13), (o, 16)])
        }
        "cherowitzo-gomegabar" => {
            req(5)?;
            let (o, ob) = (om.expect("odd m"), omb.expect("odd m"));
            tf(
                1,
                vec![(ob, 4), (one, 5), (ob, 8), (ob, 9), (o, 12), (ob, 13), (one, 16)],
            )
        }
        "subiaco-g1" => {
            req(6)?;
            let e = [4, 5, 9, 13, 17, 21, 24, 25, 29];
            tf(1, e.iter().map(|&e| (one, e)).collect())
        }
        "adelaide-g1" => {
            req(6)?;
            let e = [4, 5, 9, 12, 13, 16, 17, 20, 24, 25, 32];
            tf(1, e.iter().map(|&e| (one, e)).collect())
        }
        _ => return Err(Error::InvalidFamily(format!("unknown g-function {name}"))),
    })
}

/// Every name accepted by [`named_g`] with its degree.
pub const NAMED_G: [(&str, u32); 12] = [
    ("m3-g1", 3),
    ("m4-g1", 4),
    ("translation-g3", 5),
    ("translation-gprime", 5),
    ("segre-class-form", 5),
    ("payne-g1", 5),
    ("payne-gomega", 5),
    ("cherowitzo-g1", 5),
    ("cherowitzo-gomega", 5),
    ("cherowitzo-gomegabar", 5),
    ("subiaco-g1", 6),
    ("adelaide-g1", 6),
];

/// The catalog families defined at degree m (translation for every valid r).
pub fn catalog(m: u32) -> Vec<GFamily> {
    let mut v = vec![GFamily::Hyperconic];
    for r in 2..m {
        if exponent::gcd(r as u128, m as u128) == 1 {
            v.push(GFamily::Translation { r });
        }
    }
    v.extend(
        [
            GFamily::Segre,
            GFamily::Glynn1,
            GFamily::Glynn2,
            GFamily::Payne,
            GFamily::Cherowitzo,
            GFamily::OKeefePenttila,
            GFamily::Subiaco { variant: 0 },
            GFamily::Subiaco { variant: 1 },
            GFamily::Adelaide,
            GFamily::LunelliSce,
        ]
        .into_iter()
        .filter(|f| f.validate(m).is_ok()),
    );
    v
}
