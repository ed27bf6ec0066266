//! Niho bent functions: truth tables over K, Walsh spectra under the
//! scalar product `b.x = tr(<b, x>)`, duals and univariate forms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry;
use crate::gf2m::exponent;
use crate::gf2m::{Ext, Fe, Ke};
use crate::gfun::{self, GFunction};

/// Truth table over K, indexed by `Ke::index` (a-bits low, b-bits high).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BooleanFn {
    m: u32,
    bits: Vec<u8>,
}

impl BooleanFn {
    pub fn new(m: u32, bits: Vec<u8>) -> Result<BooleanFn> {
        if bits.len() != 1usize << (2 * m) {
            return Err(Error::Cardinality {
                expected: 1 << (2 * m),
                got: bits.len(),
            });
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Parse("truth table entries must be 0 or 1".into()));
        }
        Ok(BooleanFn { m, bits })
    }

    pub fn from_fn(k: &Ext, f: impl Fn(Ke) -> u32) -> BooleanFn {
        BooleanFn {
            m: k.m(),
            bits: k.elements().map(|x| (f(x) & 1) as u8).collect(),
        }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of variables, `n = 2m`.
    pub fn n(&self) -> u32 {
        2 * self.m
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn get(&self, x: Ke) -> u8 {
        self.bits[x.index(self.m)]
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// Indices where the function is 0.
    pub fn zero_set(&self) -> Vec<usize> {
        (0..self.bits.len()).filter(|&i| self.bits[i] == 0).collect()
    }

    pub fn add(&self, other: &BooleanFn) -> Result<BooleanFn> {
        if self.m != other.m {
            return Err(Error::FieldMismatch);
        }
        Ok(BooleanFn {
            m: self.m,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect(),
        })
    }

    /// Packed bits, least significant bit first within each byte.
    pub fn to_packed(&self) -> Vec<u8> {
        self.bits
            .chunks(8)
            .map(|c| c.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (b << i)))
            .collect()
    }

    pub fn from_packed(m: u32, bytes: &[u8]) -> Result<BooleanFn> {
        let n = 1usize << (2 * m);
        if bytes.len() != n.div_ceil(8) {
            return Err(Error::Cardinality {
                expected: n.div_ceil(8),
                got: bytes.len(),
            });
        }
        let bits = (0..n).map(|i| (bytes[i / 8] >> (i % 8)) & 1).collect();
        BooleanFn::new(m, bits)
    }
}

/// `f(lambda u) = tr(lambda g(u))`, `f(0) = 0`.
pub fn bent_from_g(k: &Ext, g: &GFunction) -> BooleanFn {
    let f = k.base();
    let m = k.m();
    let mut bits = vec![0u8; k.size()];
    for (&u, &gu) in k.circle().elements.iter().zip(&g.values) {
        for l in f.elements().skip(1) {
            bits[k.scale(l, u).index(m)] = f.trace(f.mul(l, gu)) as u8;
        }
    }
    BooleanFn { m, bits }
}

/// In-place Walsh-Hadamard butterfly: `v[b] <- sum_x v[x] (-1)^{popcount(b & x)}`.
pub fn fwht(v: &mut [i32]) {
    let n = v.len();
    assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        let step = |chunk: &mut [i32]| {
            let (lo, hi) = chunk.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        };
        if n >= 1 << 14 {
            v.par_chunks_mut(2 * h).for_each(step);
        } else {
            v.chunks_mut(2 * h).for_each(step);
        }
        h *= 2;
    }
}

/// The linear map `psi` with `psi(b) . x = tr(<b, x>)` on index bits.
///
/// `<b, x> = b.a x.b + b.b x.a`, so bit k of x.a pairs with `tr(b.b t^k)` and
/// bit k of x.b with `tr(b.a t^k)`.
fn scalar_product_map(k: &Ext) -> Vec<usize> {
    let f = k.base();
    let m = k.m();
    let row = |c: Fe| -> usize {
        (0..m).fold(0usize, |acc, j| {
            acc | ((f.trace(f.mul(c, Fe(1 << j))) as usize) << j)
        })
    };
    k.elements()
        .map(|b| row(b.b) | (row(b.a) << m))
        .collect()
}

/// The Walsh values `W_f(b)`, indexed by `b.index(m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalshSpectrum {
    pub m: u32,
    pub values: Vec<i32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub min: i32,
    pub max: i32,
    pub is_bent: bool,
}

impl WalshSpectrum {
    pub fn is_bent(&self) -> bool {
        let t = 1i32 << self.m;
        self.values.iter().all(|&w| w == t || w == -t)
    }

    pub fn parseval_holds(&self) -> bool {
        let s: i128 = self.values.iter().map(|&w| (w as i128) * (w as i128)).sum();
        s == 1i128 << (4 * self.m)
    }

    pub fn summary(&self) -> SpectrumSummary {
        SpectrumSummary {
            min: *self.values.iter().min().expect("nonempty"),
            max: *self.values.iter().max().expect("nonempty"),
            is_bent: self.is_bent(),
        }
    }

    /// Little-endian i32 words.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        self.values.iter().flat_map(|w| w.to_le_bytes()).collect()
    }
}

fn signs(f: &BooleanFn) -> Vec<i32> {
    f.bits.iter().map(|&b| 1 - 2 * b as i32).collect()
}

pub fn walsh_spectrum(k: &Ext, f: &BooleanFn) -> Result<WalshSpectrum> {
    if f.m != k.m() {
        return Err(Error::FieldMismatch);
    }
    let mut h = signs(f);
    fwht(&mut h);
    let psi = scalar_product_map(k);
    Ok(WalshSpectrum {
        m: f.m,
        values: psi.iter().map(|&p| h[p]).collect(),
    })
}

/// Bentness does not depend on the nondegenerate scalar product chosen.
pub fn is_bent(f: &BooleanFn) -> bool {
    let mut h = signs(f);
    fwht(&mut h);
    let t = 1i32 << f.m;
    h.iter().all(|&w| w == t || w == -t)
}

/// `(-1)^{dual(b)} 2^m = W_f(b)`.
pub fn dual(k: &Ext, f: &BooleanFn) -> Result<BooleanFn> {
    let w = walsh_spectrum(k, f)?;
    if !w.is_bent() {
        return Err(Error::NotBent);
    }
    Ok(BooleanFn {
        m: f.m,
        bits: w.values.iter().map(|&v| (v < 0) as u8).collect(),
    })
}

/// Compares the zero set of the dual of `f_g` with the points covered by the
/// line oval `{ L(u, g(u)) }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualLineOvalReport {
    pub dual_zeros: usize,
    pub covered_points: usize,
    pub expected: usize,
    pub sets_equal: bool,
}

impl DualLineOvalReport {
    pub fn ok(&self) -> bool {
        self.sets_equal && self.dual_zeros == self.expected
    }
}

pub fn dual_lineoval_check(k: &Ext, g: &GFunction) -> Result<DualLineOvalReport> {
    let f = bent_from_g(k, g);
    let d = dual(k, &f)?;
    let covered = geometry::line_oval_points(k, &g.lines(k))?;
    let mut covered_idx: Vec<usize> = covered.iter().map(|x| x.index(k.m())).collect();
    covered_idx.sort_unstable();
    let zeros = d.zero_set();
    let q = k.q() as usize;
    Ok(DualLineOvalReport {
        dual_zeros: zeros.len(),
        covered_points: covered_idx.len(),
        expected: q * (q + 1) / 2,
        sets_equal: zeros == covered_idx,
    })
}

/// A polynomial `sum c_e x^e` over K whose values lie in `{0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NihoPolynomial {
    /// Sorted by exponent; exponents reduced mod `q^2 - 1`, no zero coefficients.
    pub terms: Vec<(u128, Ke)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NihoTermJson {
    pub exp: u128,
    pub coeff_hex: String,
}

impl NihoPolynomial {
    pub fn from_terms(k: &Ext, terms: impl IntoIterator<Item = (u128, Ke)>) -> NihoPolynomial {
        let order = (k.size() - 1) as u128;
        let mut map = std::collections::BTreeMap::<u128, Ke>::new();
        for (e, c) in terms {
            // keep x^{q^2-1} distinct from x^0 so that 0^e = 0 for e > 0
            let e = if e == 0 { 0 } else { (e - 1) % order + 1 };
            *map.entry(e).or_default() += c;
        }
        NihoPolynomial {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn eval(&self, k: &Ext, x: Ke) -> Ke {
        self.terms
            .iter()
            .fold(Ke::ZERO, |acc, &(e, c)| acc + k.mul(c, k.pow(x, e)))
    }

    /// Tabulates the polynomial, failing if a value is not 0 or 1.
    pub fn to_boolean(&self, k: &Ext) -> Result<BooleanFn> {
        let mut bits = Vec::with_capacity(k.size());
        for x in k.elements() {
            let v = self.eval(k, x);
            if v != Ke::ZERO && v != Ke::ONE {
                return Err(Error::InvalidGFunction(format!(
                    "polynomial value {v} at {x} is not in GF(2)"
                )));
            }
            bits.push(v.a.0 as u8);
        }
        Ok(BooleanFn { m: k.m(), bits })
    }

    /// Applies the absolute trace `Tr: K -> GF(2)` pointwise.
    pub fn trace_to_boolean(&self, k: &Ext) -> BooleanFn {
        BooleanFn::from_fn(k, |x| k.tr_abs(self.eval(k, x)))
    }

    pub fn exponents(&self) -> Vec<u128> {
        self.terms.iter().map(|t| t.0).collect()
    }

    pub fn to_json(&self, k: &Ext) -> Vec<NihoTermJson> {
        self.terms
            .iter()
            .map(|&(exp, c)| NihoTermJson {
                exp,
                coeff_hex: c.to_hex(k.m()),
            })
            .collect()
    }

    pub fn from_json(k: &Ext, terms: &[NihoTermJson]) -> Result<NihoPolynomial> {
        let parsed = terms
            .iter()
            .map(|t| Ok((t.exp, Ke::from_hex(&t.coeff_hex, k.m())?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(NihoPolynomial::from_terms(k, parsed))
    }
}

/// Exponents `i(q-1) + 2^j`, `0 <= i <= q`, `0 <= j < m`, as `(j, e)`.
fn niho_exponents(k: &Ext) -> Vec<(u32, u128)> {
    let q = k.q() as u128;
    (0..k.m())
        .flat_map(|j| (0..=q).map(move |i| (j, i * (q - 1) + (1u128 << j))))
        .collect()
}

fn order(k: &Ext) -> u128 {
    (k.size() - 1) as u128
}

/// `f(x) = sum_j sum_i (sum_{v in O} v^{-(i(q-1)+2^j)}) x^{i(q-1)+2^j}` for an
/// affine oval O with nucleus at the origin.
pub fn f_univariate(k: &Ext, oval: &[Ke]) -> Result<NihoPolynomial> {
    // validates the oval
    gfun::g_from_oval_polar(k, oval)?;
    let ord = order(k);
    let inv: Vec<Ke> = oval.iter().map(|&v| k.inv_or_zero(v)).collect();
    let terms = niho_exponents(k).into_iter().map(|(_, e)| {
        let c = inv
            .iter()
            .fold(Ke::ZERO, |acc, &vi| acc + k.pow(vi, e % ord));
        (e, c)
    });
    Ok(NihoPolynomial::from_terms(k, terms))
}

/// The polynomial of the bent function attached to `O_s`, built from g
/// directly: coefficient of `x^e`, `e = i(q-1) + 2^j`, is
/// `g(s)^{2^j} / s^e + sum_{v != s} g(s)^{2^j} g(v)^{2^j} / (g(s) v + s g(v))^e`.
pub fn f_shift(k: &Ext, g: &GFunction, s_idx: usize) -> Result<NihoPolynomial> {
    if g.len() != k.circle().len() {
        return Err(Error::FieldMismatch);
    }
    if let Some(&z) = g.zeros().first() {
        return Err(Error::GVanishes(z));
    }
    let f = k.base();
    let circle = k.circle();
    let ord = order(k);
    let s = circle.get(s_idx);
    let gs = g.at(s_idx);
    let others: Vec<(Fe, Ke)> = (0..circle.len())
        .filter(|&j| j != s_idx)
        .map(|j| {
            let gv = g.at(j);
            let base = k.scale(gs, circle.get(j)) + k.scale(gv, s);
            (gv, k.inv_or_zero(base))
        })
        .collect();
    let sinv = k.inv_or_zero(s);
    let terms = niho_exponents(k).into_iter().map(|(j, e)| {
        let er = e % ord;
        let gs2 = f.frob(gs, j);
        let mut acc = k.pow(sinv, er);
        for &(gv, binv) in &others {
            acc += k.scale(f.frob(gv, j), k.pow(binv, er));
        }
        (e, k.scale(gs2, acc))
    });
    Ok(NihoPolynomial::from_terms(k, terms))
}

/// `d_i = (q-1) i 2^{-r} + 1 mod q^2-1`, `1 <= i < 2^{r-1}`.
pub fn translation_exponents(k: &Ext, r: u32) -> Result<Vec<u128>> {
    let ord = order(k);
    let q = k.q() as u128;
    let inv = exponent::mod_inverse(1i128 << r, ord)?;
    Ok((1..(1u128 << (r - 1)))
        .map(|i| (exponent::mul_mod((q - 1) * i % ord, inv, ord) + 1) % ord)
        .collect())
}

/// `Tr(a x^{q+1} + sum_i x^{d_i})`.
pub fn f_translation_poly(k: &Ext, r: u32, a: Ke) -> Result<NihoPolynomial> {
    let q = k.q() as u128;
    let mut terms = vec![(q + 1, a)];
    terms.extend(translation_exponents(k, r)?.into_iter().map(|d| (d, Ke::ONE)));
    Ok(NihoPolynomial::from_terms(k, terms))
}

/// Piecewise form: `tr(sqrt(x xbar))` on F, and
/// `tr((x x^{2^{m-r}} + conj) / (x^{2^{m-r}} + conj))` off F.
pub fn f_translation_piecewise(k: &Ext, r: u32) -> BooleanFn {
    let f = k.base();
    let e = 1u128 << (k.m() - r);
    BooleanFn::from_fn(k, |x| {
        if x.in_base() {
            f.trace(f.sqrt(k.norm(x)))
        } else {
            let xe = k.pow(x, e);
            f.trace(f.mul(k.t(k.mul(x, xe)), f.inv_or_zero(k.t(xe))))
        }
    })
}

/// Both closed forms of the translation bent function, checked to agree.
pub fn f_translation(k: &Ext, r: u32) -> Result<BooleanFn> {
    if r == 0 || r >= k.m().max(2) {
        return Err(Error::InvalidFamily(format!("r = {r} out of range")));
    }
    let piecewise = f_translation_piecewise(k, r);
    let poly = f_translation_poly(k, r, Ke::I)?.trace_to_boolean(k);
    if piecewise != poly {
        return Err(Error::InvalidGFunction(
            "translation closed forms disagree".into(),
        ));
    }
    Ok(piecewise)
}

/// Recovers g from a function that is F2-linear on every line `uF`:
/// `g(u)` is the `c in F` with `f(lambda u) = tr(lambda c)` for all lambda.
pub fn g_from_bent(k: &Ext, func: &BooleanFn, provenance: &str) -> Result<GFunction> {
    if func.m != k.m() {
        return Err(Error::FieldMismatch);
    }
    let f = k.base();
    let m = k.m();
    // c -> (tr(c t^j))_j is a bijection; invert it once
    let mut by_pattern = vec![Fe::ZERO; k.q() as usize];
    for c in f.elements() {
        let pat = (0..m).fold(0usize, |acc, j| {
            acc | ((f.trace(f.mul(c, Fe(1 << j))) as usize) << j)
        });
        by_pattern[pat] = c;
    }
    if func.get(Ke::ZERO) != 0 {
        return Err(Error::InvalidGFunction("f(0) must be 0".into()));
    }
    let mut values = Vec::with_capacity(k.circle().len());
    for &u in &k.circle().elements {
        let pat = (0..m).fold(0usize, |acc, j| {
            acc | ((func.get(k.scale(Fe(1 << j), u)) as usize) << j)
        });
        let c = by_pattern[pat];
        if f.elements().any(|l| func.get(k.scale(l, u)) as u32 != f.trace(f.mul(l, c))) {
            return Err(Error::InvalidGFunction(format!(
                "not linear on the spread line through {u}"
            )));
        }
        values.push(c);
    }
    Ok(GFunction {
        values,
        provenance: provenance.into(),
    })
}

/// `f(x) + tr(<c, x>)`.
pub fn add_linear(k: &Ext, f: &BooleanFn, c: Ke) -> BooleanFn {
    let fb = k.base();
    BooleanFn::from_fn(k, |x| f.get(x) as u32 ^ fb.trace(k.bilinear(c, x)))
}
