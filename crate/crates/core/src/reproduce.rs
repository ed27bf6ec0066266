//! Machine-checkable reproductions of the published tables, the small
//! dimension catalogue and the structural theorems.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bent::{self, BooleanFn, NihoPolynomial};
use crate::equiv::{self, Classification};
use crate::error::{Error, Result};
use crate::gf2m::exponent;
use crate::gf2m::{Ext, Fe, Ke};
use crate::gfun::{self, named_g, GFamily, GFunction};
use crate::opoly::{OPolyFamily, OPolyTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Table1,
    Table2,
    Sec46,
    Theorems,
}

impl FromStr for Target {
    type Err = Error;
    fn from_str(s: &str) -> Result<Target> {
        match s {
            "table1" => Ok(Target::Table1),
            "table2" => Ok(Target::Table2),
            "sec4.6" => Ok(Target::Sec46),
            "theorems" => Ok(Target::Theorems),
            _ => Err(Error::Parse(format!("unknown reproduce target {s}"))),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Table1 => "table1",
            Target::Table2 => "table2",
            Target::Sec46 => "sec4.6",
            Target::Theorems => "theorems",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub item: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub target: String,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(target: Target) -> Report {
        Report {
            target: target.to_string(),
            checks: Vec::new(),
        }
    }

    fn check(&mut self, item: impl Into<String>, expected: impl fmt::Display, computed: impl fmt::Display) {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        self.checks.push(Check {
            item: item.into(),
            pass: expected == computed,
            expected,
            computed,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Plain-text table: status, item, expected, computed.
    pub fn render(&self) -> String {
        let w = self.checks.iter().map(|c| c.item.len()).max().unwrap_or(0);
        let mut out = format!("reproduce {}\n", self.target);
        for c in &self.checks {
            let status = if c.pass { "ok  " } else { "FAIL" };
            out += &format!(
                "{status} {:<w$}  expected {}  computed {}\n",
                c.item, c.expected, c.computed
            );
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        out += &format!("{} checks, {} failed\n", self.checks.len(), failed);
        out
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    /// Enables the q = 128 classifications.
    pub allow_slow: bool,
}

pub fn run(target: Target, opts: Options) -> Result<Report> {
    match target {
        Target::Table1 => table1(),
        Target::Table2 => table2(),
        Target::Sec46 => sec46(),
        Target::Theorems => theorems(opts),
    }
}

fn ext(m: u32) -> Result<Ext> {
    Ext::with_degree(m)
}

fn sizes(v: &[usize]) -> String {
    format!("{v:?}")
}

/// The stabilizer of the hyperoval of g (moved off its zeros if needed).
pub fn hyperoval_stabilizer(k: &Ext, g: &GFunction) -> Result<equiv::OrbitDecomposition> {
    let (g, _) = gfun::fix_zeros(k, g)?;
    equiv::stabilizer(k.base(), &g.hyperoval(k))
}

pub fn classify(k: &Ext, g: &GFunction) -> Result<Classification> {
    let (g, _) = gfun::fix_zeros(k, g)?;
    equiv::classify_bent(k, &g)
}

/// Index of the class whose oval is equivalent to the oval of g.
pub fn class_of(k: &Ext, c: &Classification, g: &GFunction) -> Result<Option<usize>> {
    for (i, cl) in c.classes.iter().enumerate() {
        if equiv::g_equivalent(k, g, &cl.g)?.is_some() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

fn class_label(i: Option<usize>) -> String {
    i.map_or("none".into(), |i| format!("class {i}"))
}

/// `tr(P(x))` for a polynomial with values in F.
pub fn base_trace_fn(k: &Ext, terms: &[(u128, Ke)]) -> Result<BooleanFn> {
    let p = NihoPolynomial::from_terms(k, terms.iter().copied());
    let f = k.base();
    let mut bits = Vec::with_capacity(k.size());
    for x in k.elements() {
        let v = p.eval(k, x);
        if !v.in_base() {
            return Err(Error::InvalidGFunction(format!("value at {x} is not in F")));
        }
        bits.push(f.trace(v.a) as u8);
    }
    BooleanFn::new(k.m(), bits)
}

/// `Tr(P(x))` with the absolute trace of K.
pub fn abs_trace_fn(k: &Ext, terms: &[(u128, Ke)]) -> BooleanFn {
    NihoPolynomial::from_terms(k, terms.iter().copied()).trace_to_boolean(k)
}

fn table1() -> Result<Report> {
    let mut r = Report::new(Target::Table1);
    let k = ext(5)?;
    let rows = [
        ("hyperconic", GFamily::Hyperconic, 163_680u128),
        ("translation", GFamily::Translation { r: 2 }, 4960),
        ("segre", GFamily::Segre, 465),
        ("subiaco (payne)", GFamily::Payne, 10),
        ("cherowitzo", GFamily::Cherowitzo, 5),
        ("okeefe-penttila", GFamily::OKeefePenttila, 3),
    ];
    for (name, fam, order) in rows {
        let g = fam.g(&k)?;
        let rep = gfun::validate_g(&k, &g);
        r.check(format!("{name}: g gives a hyperoval"), true, rep.oval);
        r.check(format!("{name}: bent"), true, rep.bent);
        let d = hyperoval_stabilizer(&k, &g)?;
        r.check(format!("{name}: |Aut|"), order, d.stabilizer_order);
    }
    Ok(r)
}

fn table2() -> Result<Report> {
    let mut r = Report::new(Target::Table2);
    let k = ext(6)?;
    let rows = [
        ("hyperconic", GFamily::Hyperconic, 1_572_480u128),
        ("subiaco 1+T(u^5)", GFamily::Subiaco { variant: 0 }, 60),
        ("subiaco 1+T(w u^5)", GFamily::Subiaco { variant: 1 }, 15),
        ("adelaide", GFamily::Adelaide, 12),
    ];
    for (name, fam, order) in rows {
        let g = fam.g(&k)?;
        let rep = gfun::validate_g(&k, &g);
        r.check(format!("{name}: g gives a hyperoval"), true, rep.oval);
        r.check(format!("{name}: bent"), true, rep.bent);
        let d = hyperoval_stabilizer(&k, &g)?;
        r.check(format!("{name}: |Aut|"), order, d.stabilizer_order);
    }
    // the reading 1 + w u^5 + conj(w^5 u^5) does not take values in F
    let w = k.w();
    let w5 = k.pow(w, 5);
    let literal_in_f = k.circle().elements.iter().all(|&u| {
        let u5 = k.pow(u, 5);
        (Ke::ONE + k.mul(w, u5) + k.conj(k.mul(w5, u5))).in_base()
    });
    r.check("subiaco: coefficient conj(w)^5 reading is F-valued", false, literal_in_f);
    Ok(r)
}

/// Checks that each explicit function is bent and that the functions land in
/// pairwise distinct classes.
fn explicit_functions(
    r: &mut Report,
    k: &Ext,
    label: &str,
    c: &Classification,
    fns: &[(&str, BooleanFn)],
) -> Result<()> {
    let mut seen = Vec::new();
    for (name, f) in fns {
        r.check(format!("{label}: {name} is bent"), true, bent::is_bent(f));
        let g = bent::g_from_bent(k, f, name)?;
        let cls = class_of(k, c, &g)?;
        r.check(
            format!("{label}: {name} matches a class"),
            true,
            cls.is_some(),
        );
        seen.push(cls);
    }
    let mut distinct = seen.clone();
    distinct.sort();
    distinct.dedup();
    r.check(
        format!("{label}: explicit functions hit distinct classes"),
        fns.len(),
        distinct.len(),
    );
    Ok(())
}

fn sec46() -> Result<Report> {
    let mut r = Report::new(Target::Sec46);
    let one = Ke::ONE;
    let a = Ke::I;

    // m = 1, 2: transitive stabilizer, one class
    for (m, e) in [(1u32, 3u128), (2, 10)] {
        let k = ext(m)?;
        let c = classify(&k, &GFamily::Hyperconic.g(&k)?)?;
        r.check(format!("m={m} hyperconic classes"), 1, c.classes.len());
        let f = base_trace_fn(&k, &[(e, one)])?;
        explicit_functions(&mut r, &k, &format!("m={m}"), &c, &[(&format!("tr(x^{e})"), f)])?;
    }

    // m = 3
    let k = ext(3)?;
    let c = classify(&k, &GFamily::Hyperconic.g(&k)?)?;
    r.check("m=3 hyperconic classes", 2, c.classes.len());
    let f = base_trace_fn(&k, &[(36, one)])?;
    let fp = base_trace_fn(&k, &[(36, one), (22, one), (50, one)])?;
    r.check(
        "m=3 tr(x^36+x^22+x^50) = Tr(a x^36 + x^22)",
        true,
        fp == abs_trace_fn(&k, &[(36, a), (22, one)]),
    );
    explicit_functions(&mut r, &k, "m=3", &c, &[("tr(x^36)", f), ("tr(x^36+x^22+x^50)", fp)])?;
    let gp = named_g(&k, "m3-g1")?;
    r.check("m=3 g' = 1+T(u^4) is the second function", true, bent::bent_from_g(&k, &gp) == base_trace_fn(&k, &[(36, one), (22, one), (50, one)])?);

    // m = 4
    let k = ext(4)?;
    let hc = GFamily::Hyperconic.g(&k)?;
    let ls = GFamily::LunelliSce.g(&k)?;
    let c = classify(&k, &hc)?;
    r.check("m=4 hyperconic classes", 2, c.classes.len());
    let f = abs_trace_fn(&k, &[(136, a)]);
    let fp = abs_trace_fn(&k, &[(136, a), (106, one), (226, one), (76, one)]);
    explicit_functions(&mut r, &k, "m=4 hyperconic", &c, &[("Tr(a x^136)", f), ("Tr(a x^136+x^106+x^226+x^76)", fp.clone())])?;
    r.check("m=4 g' gives f'", true, bent::bent_from_g(&k, &named_g(&k, "m4-g1")?) == fp);
    let cl = classify(&k, &ls)?;
    r.check("m=4 lunelli-sce classes", 1, cl.classes.len());
    let fpp = abs_trace_fn(&k, &[(136, a), (226, one)]);
    explicit_functions(&mut r, &k, "m=4 lunelli-sce", &cl, &[("Tr(a x^136+x^226)", fpp.clone())])?;
    r.check("m=4 g'' gives f''", true, bent::bent_from_g(&k, &ls) == fpp);
    let inequivalent = equiv::are_equivalent(k.base(), &hc.hyperoval(&k), &ls.hyperoval(&k))?.is_none();
    r.check("m=4 hyperconic and lunelli-sce inequivalent", true, inequivalent);

    // m = 5
    let k = ext(5)?;
    let third = k.circle().len() / 3;
    for (fam, orbits, forms) in [
        (
            GFamily::Payne,
            vec![1usize, 1, 2, 10, 10, 10],
            vec![("payne-g1", 0usize), ("payne-gomega", 1)],
        ),
        (
            GFamily::Cherowitzo,
            vec![1, 1, 1, 1, 5, 5, 5, 5, 5, 5],
            vec![("cherowitzo-g1", 0), ("cherowitzo-gomega", 1), ("cherowitzo-gomegabar", 2)],
        ),
        (GFamily::OKeefePenttila, vec![1, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3], vec![]),
    ] {
        let g = fam.g(&k)?;
        let d = hyperoval_stabilizer(&k, &g)?;
        r.check(format!("m=5 {fam} orbit sizes"), sizes(&orbits), sizes(&d.sorted_sizes()));
        for (name, s) in forms {
            let gs = gfun::g_shift(&k, &g, s * third)?;
            let t = named_g(&k, name)?;
            r.check(
                format!("m=5 {name} is g_s up to <c,u>"),
                true,
                gfun::equal_up_to_linear_shift(&k, &gs, &t),
            );
        }
    }
    // O'Keefe-Penttila: the generator is x -> omega x (or its inverse)
    let g = GFamily::OKeefePenttila.g(&k)?;
    let h = g.hyperoval(&k);
    let d = equiv::stabilizer(k.base(), &h)?;
    let om = k.omega().expect("odd m");
    let scalar = |c: Ke| {
        h.iter().all(|p| {
            let img = d.generators[0].apply(k.base(), *p);
            let x = k.mul(c, Ke::new(p.x, p.y));
            !p.is_affine() || crate::geometry::PointH::affine(x.a, x.b) == img
        })
    };
    r.check(
        "m=5 okeefe-penttila generator is x -> omega^(+-1) x",
        true,
        scalar(om) || scalar(k.conj(om)),
    );

    // m = 6
    let k = ext(6)?;
    for (fam, orbits) in [
        (GFamily::Subiaco { variant: 0 }, vec![1usize, 5, 60]),
        (GFamily::Subiaco { variant: 1 }, vec![1, 5, 15, 15, 15, 15]),
        (GFamily::Adelaide, vec![1, 1, 4, 12, 12, 12, 12, 12]),
    ] {
        let g = fam.g(&k)?;
        let d = hyperoval_stabilizer(&k, &g)?;
        r.check(format!("m=6 {fam} orbit sizes"), sizes(&orbits), sizes(&d.sorted_sizes()));
        if fam == GFamily::Adelaide {
            let four = d.orbits.iter().find(|o| o.len() == 4).map(|o| d.stabilizer_order / o.len() as u128);
            r.check("m=6 adelaide point stabilizer on the 4-orbit", "Some(3)", format!("{four:?}"));
        }
    }
    for (fam, name) in [
        (GFamily::Subiaco { variant: 0 }, "subiaco-g1"),
        (GFamily::Adelaide, "adelaide-g1"),
    ] {
        let g = fam.g(&k)?;
        let g1 = gfun::g_shift(&k, &g, 0)?;
        r.check(format!("m=6 {name} = g_1"), true, g1 == named_g(&k, name)?);
    }
    Ok(r)
}

fn mono(k: &Ext, num: i64, den: i64) -> Result<OPolyTable> {
    OPolyFamily::Monomial { num, den }.table(k)
}

fn theorems(opts: Options) -> Result<Report> {
    let mut r = Report::new(Target::Theorems);

    // hyperconic: two classes for m >= 3
    for m in 3..=6 {
        let k = ext(m)?;
        let g = GFamily::Hyperconic.g(&k)?;
        let c = classify(&k, &g)?;
        r.check(format!("hyperconic m={m}: classes"), 2, c.classes.len());
        let g0 = gfun::g_from_opoly(&k, &mono(&k, 2, 1)?)?;
        let g1 = gfun::g_from_opoly(&k, &mono(&k, 1, 2)?)?;
        let gm1 = gfun::translation_g(&k, m - 1);
        r.check(format!("hyperconic m={m}: t^2 gives 1 + <c,u>"), true, gfun::equal_up_to_linear_shift(&k, &g0, &g));
        r.check(format!("hyperconic m={m}: t^(1/2) gives g_(m-1) + <c,u>"), true, gfun::equal_up_to_linear_shift(&k, &g1, &gm1));
        let classes: Vec<_> = [&g, &gm1].iter().map(|x| class_of(&k, &c, x)).collect::<Result<_>>()?;
        r.check(format!("hyperconic m={m}: g_1, g_(m-1) inequivalent"), true, classes[0] != classes[1] && classes.iter().all(|x| x.is_some()));
    }

    // translation g_r: closed forms agree
    for m in 3..=6u32 {
        let k = ext(m)?;
        for rr in 1..m {
            let ok = bent::f_translation(&k, rr)
                .map(|f| f == bent::bent_from_g(&k, &gfun::translation_g(&k, rr)))
                .unwrap_or(false);
            r.check(format!("f_r closed forms m={m} r={rr}"), true, ok);
        }
    }
    // t^(2^r) is an o-polynomial exactly when gcd(r, m) = 1
    for m in 3..=8u32 {
        let k = ext(m)?;
        let mut bad = Vec::new();
        for rr in 1..m {
            let is_o = mono(&k, 1 << rr, 1)?.is_opolynomial(k.base());
            if is_o != (exponent::gcd(rr as u128, m as u128) == 1) {
                bad.push(rr);
            }
        }
        r.check(format!("t^(2^r) o-polynomial iff gcd(r,m)=1, m={m}"), "[]", format!("{bad:?}"));
    }

    // translation m = 5: three classes with the listed g-functions
    let k = ext(5)?;
    let g2 = gfun::translation_g(&k, 2);
    let c = classify(&k, &g2)?;
    r.check("translation m=5: classes", 3, c.classes.len());
    let one = Ke::ONE;
    let g2_form = gfun::TraceForm::new(Fe::ONE, vec![(one, 16)]).to_g(&k, "");
    r.check("translation m=5: g_2 = 1+T(u^16)", true, g2 == g2_form);
    let g3 = gfun::translation_g(&k, 3);
    r.check("translation m=5: g_3 = 1+T(u^8+u^9+u^16)", true, g3 == named_g(&k, "translation-g3")?);
    let gp = named_g(&k, "translation-gprime")?;
    let om = k.omega().expect("odd m");
    let fp = abs_trace_fn(&k, &[528u128, 466, 962, 404, 900, 342, 838].map(|e| (e, om)));
    r.check("translation m=5: g' gives Tr(omega x^528 + ...)", true, bent::bent_from_g(&k, &gp) == fp);
    let cls: Vec<Option<usize>> = [&g2, &g3, &gp].iter().map(|x| class_of(&k, &c, x)).collect::<Result<_>>()?;
    let mut d = cls.clone();
    d.sort();
    d.dedup();
    r.check("translation m=5: g_2, g_3, g' cover three classes", 3, d.iter().filter(|x| x.is_some()).count());
    let n = k.circle().len();
    let g_om = gfun::g_shift(&k, &gfun::fix_zeros(&k, &g2)?.0, n / 3)?;
    r.check(
        "translation m=5: g'(u) = g_omega(conj(omega) u) + <c,u>",
        true,
        gfun::equal_up_to_linear_shift(&k, &gp, &g_om.rotate(2 * n / 3)),
    );
    let third = gfun::g_monomial(&k, -3)?;
    r.check("translation m=5: g' in the class of the monomial form", class_label(class_of(&k, &c, &third)?), class_label(cls[2]));
    for m in [5u32, 7] {
        let k = ext(m)?;
        for rr in 2..m - 1 {
            if exponent::gcd(rr as u128, m as u128) != 1 {
                continue;
            }
            let gr = gfun::translation_g(&k, rr);
            let ok = gfun::equal_up_to_linear_shift(&k, &gfun::g_from_opoly(&k, &mono(&k, 1 << rr, 1)?)?, &gr);
            r.check(format!("translation m={m} r={rr}: t^(2^r) gives g_r + <c,u>"), true, ok);
            let s = 1 - (1i64 << rr);
            let ok = gfun::equal_up_to_linear_shift(
                &k,
                &gfun::g_from_opoly(&k, &mono(&k, s, 1)?)?,
                &gfun::g_monomial(&k, s as i128)?,
            );
            r.check(format!("translation m={m} r={rr}: t^(1-2^r) gives the monomial form"), true, ok);
        }
    }

    // gcd(2^m+1, 2^r+-1) and the zeros of g_r
    for m in 1..=9u32 {
        let q1 = (1u128 << m) + 1;
        for rr in 1..=m {
            if exponent::gcd(rr as u128, m as u128) != 1 {
                continue;
            }
            let plus = exponent::gcd(q1, (1u128 << rr) + 1);
            let minus = exponent::gcd(q1, (1u128 << rr) - 1);
            let expect_plus = if m % 2 == 1 && rr % 2 == 1 { 3 } else { 1 };
            let expect_minus = if m % 2 == 1 && rr % 2 == 0 { 3 } else { 1 };
            r.check(format!("gcd(2^{m}+1, 2^{rr}+1)"), expect_plus, plus);
            r.check(format!("gcd(2^{m}+1, 2^{rr}-1)"), expect_minus, minus);
        }
    }
    for m in 3..=9u32 {
        let k = ext(m)?;
        let n = k.circle().len();
        let t = n / 3;
        for rr in 2..m - 1 {
            if exponent::gcd(rr as u128, m as u128) != 1 {
                continue;
            }
            let g = gfun::translation_g(&k, rr);
            let pair = if n % 3 == 0 { format!("{:?}", [t, n - t]) } else { "[]".into() };
            let e1 = if m % 2 == 1 && rr % 2 == 0 { pair.clone() } else { "[]".into() };
            let e2 = if m % 2 == 1 && rr % 2 == 1 { pair } else { "[]".into() };
            r.check(format!("zeros of g_r, m={m} r={rr}"), e1, format!("{:?}", g.zeros()));
            r.check(format!("zeros of g_r+u+ubar, m={m} r={rr}"), e2, format!("{:?}", g.add_linear(&k, Ke::ONE).zeros()));
        }
    }

    // Segre m = 5
    let k = ext(5)?;
    let f = k.base();
    let seg = GFamily::Segre.g(&k)?;
    let c = classify(&k, &seg)?;
    r.check("segre m=5: classes", 2, c.classes.len());
    let e6 = mono(&k, 6, 1)?;
    let h3 = e6.transform(f, 3)?;
    let ovals = [e6.oval(), mono(&k, 1, 6)?.oval(), mono(&k, -5, 1)?.oval()];
    r.check("segre m=5: E(t^6) ~ E(t^(1/6))", true, equiv::ovals_equivalent(f, &ovals[0], &ovals[1])?.is_some());
    r.check("segre m=5: E(t^6) ~ E(t^(1-6))", true, equiv::ovals_equivalent(f, &ovals[0], &ovals[2])?.is_some());
    r.check("segre m=5: E(t^6) !~ E(h_3)", true, equiv::ovals_equivalent(f, &ovals[0], &h3.oval())?.is_none());
    let q = k.q() as u128;
    let d15 = exponent::mod_inverse(5, q * q - 1)?;
    let dickson = GFunction::from_fn(&k, "", |u| {
        let t = k.t(u);
        let arg = f.mul(k.bilinear(k.conj(om), u), f.pow(t, q - 2));
        f.mul(f.pow(k.dickson(d15, arg), q * q - 2), t)
    });
    r.check(
        "segre m=5: Dickson form of g_3 = h_3 route + <c,u>",
        true,
        gfun::equal_up_to_linear_shift(&k, &dickson, &gfun::g_from_opoly(&k, &h3)?),
    );
    let forms = [seg.clone(), named_g(&k, "segre-class-form")?];
    let cls: Vec<Option<usize>> = forms.iter().map(|x| class_of(&k, &c, x)).collect::<Result<_>>()?;
    r.check("segre m=5: listed g-functions are the two classes", true, cls[0].is_some() && cls[1].is_some() && cls[0] != cls[1]);

    // Glynn m = 7
    let k = ext(7)?;
    for (fam, classes) in [(GFamily::Glynn1, 4usize), (GFamily::Glynn2, 2)] {
        let g = fam.g(&k)?;
        let rep = gfun::validate_g(&k, &g);
        r.check(format!("{fam} m=7: hyperoval"), true, rep.oval);
        r.check(format!("{fam} m=7: bent"), true, rep.bent);
        let from_o = gfun::g_from_opoly(&k, &fam.opoly().expect("o-polynomial").table(&k)?)?;
        r.check(format!("{fam} m=7: monomial form = o-polynomial route + <c,u>"), true, gfun::equal_up_to_linear_shift(&k, &g, &from_o));
        if opts.allow_slow {
            let c = classify(&k, &g)?;
            r.check(format!("{fam} m=7: classes"), classes, c.classes.len());
        }
    }
    Ok(r)
}
