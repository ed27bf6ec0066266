use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use niho::bent::{self, BooleanFn};
use niho::equiv::{self, ClassRep};
use niho::gfun::{self, GFamily, GFunction};
use niho::opoly::OPolyFamily;
use niho::reproduce::{self, Target};
use niho::{Ext, Fe, FieldParams};

#[derive(Parser)]
#[command(name = "niho", version, about = "Niho bent functions from hyperovals in PG(2, 2^m)")]
struct Cli {
    /// Worker threads for the transform and the stabilizer search.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Field parameters of GF(2^m) and GF(2^2m).
    Field(FieldArgs),
    /// O-polynomial table (CSV) or metadata (JSON).
    Opoly(FamilyArgs),
    /// g-function table (CSV) or validation report (JSON).
    Gfun(FamilyArgs),
    /// Niho bent function: truth table, Walsh spectrum and summary.
    Bent(FamilyArgs),
    /// Equivalence classes of the Niho bent functions of a hyperoval.
    Classify(FamilyArgs),
    /// Recompute a published table or theorem and compare.
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    m: u32,
    /// Irreducible modulus as a hex bit pattern, e.g. 25 for x^5+x^2+1.
    #[arg(long)]
    modulus_hex: Option<String>,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long)]
    m: u32,
    /// hyperconic, translation, segre, glynn1, glynn2, payne, cherowitzo,
    /// okeefe-penttila, subiaco, subiaco-w, adelaide, lunelli-sce
    #[arg(long)]
    family: String,
    /// Translation parameter.
    #[arg(long)]
    r: Option<u32>,
    /// Subiaco parameter d (o-polynomial only).
    #[arg(long)]
    d_hex: Option<String>,
    /// Move the nucleus to s = w^index before building g or f.
    #[arg(long)]
    s_index: Option<usize>,
    /// Output file (opoly, gfun) or directory (bent, classify).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    modulus_hex: Option<String>,
    /// Verify and exit 3 on failure.
    #[arg(long)]
    check: bool,
    /// Permit q = 128 classification.
    #[arg(long)]
    allow_slow: bool,
}

#[derive(Args)]
struct ReproduceArgs {
    /// table1, table2, sec4.6 or theorems
    target: String,
    #[arg(long, value_enum, default_value = "json")]
    format: ReportFormat,
    #[arg(long)]
    allow_slow: bool,
    /// Also write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Bits,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Table,
}

/// Nonzero outcomes: usage problems exit 2, failed checks exit 3.
enum Failure {
    Invalid(anyhow::Error),
    Mismatch(String),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure::Invalid(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let res = match cli.cmd {
        Cmd::Field(a) => cmd_field(a),
        Cmd::Opoly(a) => cmd_opoly(a),
        Cmd::Gfun(a) => cmd_gfun(a),
        Cmd::Bent(a) => cmd_bent(a),
        Cmd::Classify(a) => cmd_classify(a),
        Cmd::Reproduce(a) => cmd_reproduce(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("mismatch: {msg}");
            ExitCode::from(3)
        }
    }
}

fn parse_hex_u32(s: &str) -> anyhow::Result<u32> {
    u32::from_str_radix(s.trim_start_matches("0x"), 16).with_context(|| format!("bad hex value {s}"))
}

fn field(m: u32, modulus_hex: Option<&str>) -> anyhow::Result<Ext> {
    let modulus = modulus_hex.map(parse_hex_u32).transpose()?;
    Ok(Ext::new(&FieldParams::new(m, modulus)?))
}

fn g_family(a: &FamilyArgs) -> anyhow::Result<GFamily> {
    let fam = match a.family.as_str() {
        "hyperconic" => GFamily::Hyperconic,
        "translation" => GFamily::Translation {
            r: a.r.ok_or_else(|| anyhow!("translation needs --r"))?,
        },
        "segre" => GFamily::Segre,
        "glynn1" => GFamily::Glynn1,
        "glynn2" => GFamily::Glynn2,
        "payne" => GFamily::Payne,
        "cherowitzo" => GFamily::Cherowitzo,
        "okeefe-penttila" => GFamily::OKeefePenttila,
        "subiaco" => GFamily::Subiaco { variant: 0 },
        "subiaco-w" => GFamily::Subiaco { variant: 1 },
        "adelaide" => GFamily::Adelaide,
        "lunelli-sce" => GFamily::LunelliSce,
        other => bail!("unknown family {other}"),
    };
    fam.validate(a.m)?;
    Ok(fam)
}

fn o_family(a: &FamilyArgs) -> anyhow::Result<OPolyFamily> {
    if a.family == "translation" {
        // any 1 <= r < m is accepted here; the table check decides
        let r = a.r.ok_or_else(|| anyhow!("translation needs --r"))?;
        return Ok(OPolyFamily::Translation { r });
    }
    if a.family == "subiaco" {
        let d = a.d_hex.as_deref().map(Fe::from_hex).transpose()?;
        return Ok(OPolyFamily::Subiaco { d });
    }
    g_family(a)?
        .opoly()
        .ok_or_else(|| anyhow!("{} has no o-polynomial form", a.family))
}

/// The g-function of the family, moved to nucleus `w^s` when requested.
fn family_g(k: &Ext, a: &FamilyArgs) -> anyhow::Result<GFunction> {
    let g = g_family(a)?.g(k)?;
    Ok(match a.s_index {
        Some(s) => {
            if s > k.circle().len() {
                bail!("--s-index must be at most {}", k.circle().len());
            }
            gfun::g_shift(k, &g, s)?
        }
        None => g,
    })
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s.into_bytes()
}

fn cmd_field(a: FieldArgs) -> Outcome {
    let k = field(a.m, a.modulus_hex.as_deref())?;
    let v = json!({
        "params": k.params(),
        "q": k.q(),
        "i_norm_hex": k.delta().to_hex(),
        "unit_circle_generator_hex": k.w().to_hex(k.m()),
        "unit_circle_order": k.circle().len(),
        "omega_hex": k.omega().map(|o| o.to_hex(k.m())),
    });
    emit(None, &pretty(&v))?;
    Ok(())
}

fn cmd_opoly(a: FamilyArgs) -> Outcome {
    let k = field(a.m, a.modulus_hex.as_deref())?;
    let fam = o_family(&a)?;
    fam.validate(&k)?;
    let table = fam.table(&k)?;
    let is_o = table.is_opolynomial(k.base());
    match a.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            table.write_csv(&mut buf)?;
            emit(a.out.as_deref(), &buf)?;
        }
        Format::Json => {
            let v = json!({
                "family": fam,
                "m": k.m(),
                "params": k.params(),
                "regular": fam.is_regular(k.m()),
                "is_opolynomial": is_o,
            });
            emit(a.out.as_deref(), &pretty(&v))?;
        }
        Format::Bits => return Err(anyhow!("opoly supports csv or json").into()),
    }
    if a.check && !is_o {
        return Err(Failure::Mismatch(format!("{fam} is not an o-polynomial at m = {}", k.m())));
    }
    Ok(())
}

fn cmd_gfun(a: FamilyArgs) -> Outcome {
    let k = field(a.m, a.modulus_hex.as_deref())?;
    let g = family_g(&k, &a)?;
    let rep = gfun::validate_g(&k, &g);
    match a.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            g.write_csv(&k, &mut buf)?;
            emit(a.out.as_deref(), &buf)?;
        }
        Format::Json => {
            let v = json!({
                "header": g.header(&k),
                "zeros": g.zeros(),
                "validation": rep,
            });
            emit(a.out.as_deref(), &pretty(&v))?;
        }
        Format::Bits => return Err(anyhow!("gfun supports csv or json").into()),
    }
    if a.check && !(rep.valid() && rep.consistent()) {
        return Err(Failure::Mismatch(format!("{} fails validation: {rep:?}", g.provenance)));
    }
    Ok(())
}

fn cmd_bent(a: FamilyArgs) -> Outcome {
    let k = field(a.m, a.modulus_hex.as_deref())?;
    let g = family_g(&k, &a)?;
    let f = bent::bent_from_g(&k, &g);
    let spec = bent::walsh_spectrum(&k, &f)?;
    let summary = spec.summary();
    let poly = match a.s_index {
        Some(s) => Some(bent::f_shift(&k, &g_family(&a)?.g(&k)?, s)?),
        None => None,
    };
    let report = json!({
        "family": a.family,
        "m": k.m(),
        "s_index": a.s_index,
        "weight": f.weight(),
        "spectrum": summary,
        "parseval": spec.parseval_holds(),
        "niho_poly": poly.as_ref().map(|p| p.to_json(&k)),
    });
    match (&a.out, a.format.unwrap_or(Format::Json)) {
        (Some(dir), _) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join("truth.bits"), f.to_packed())?;
            fs::write(dir.join("walsh.bin"), spec.to_le_bytes())?;
            fs::write(dir.join("summary.json"), pretty(&report))?;
            if let Some(p) = &poly {
                fs::write(dir.join("niho_poly.json"), pretty(&json!(p.to_json(&k))))?;
            }
        }
        (None, Format::Bits) => emit(None, &f.to_packed())?,
        (None, Format::Json) => emit(None, &pretty(&report))?,
        (None, Format::Csv) => return Err(anyhow!("bent supports json or bits").into()),
    }
    if a.check {
        if !summary.is_bent {
            return Err(Failure::Mismatch(format!("{} is not bent", g.provenance)));
        }
        if let Some(p) = &poly {
            if p.to_boolean(&k)? != f {
                return Err(Failure::Mismatch("polynomial and table routes differ".into()));
            }
        }
    }
    Ok(())
}

fn class_json(k: &Ext, c: &equiv::BentClass, csv_ref: Option<String>, f: &BooleanFn) -> Value {
    let rep_s = match c.rep {
        ClassRep::Origin => Value::Null,
        ClassRep::Shift(s) => json!(s),
    };
    json!({
        "rep_s": rep_s,
        "orbit_size": c.orbit.len(),
        "g_csv_ref": csv_ref,
        "niho_poly": c.f.to_json(k),
        "bent_check": c.bent && bent::is_bent(f),
    })
}

fn cmd_classify(a: FamilyArgs) -> Outcome {
    if a.m >= 7 && !a.allow_slow {
        return Err(anyhow!("classification at m = {} needs --allow-slow", a.m).into());
    }
    let k = field(a.m, a.modulus_hex.as_deref())?;
    let g = family_g(&k, &a)?;
    let c = reproduce::classify(&k, &g)?;
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir)?;
    }
    let mut classes = Vec::new();
    for (i, cl) in c.classes.iter().enumerate() {
        let csv_ref = match &a.out {
            Some(dir) => {
                let name = format!("class_{i}.csv");
                let mut buf = Vec::new();
                cl.g.write_csv(&k, &mut buf)?;
                fs::write(dir.join(&name), buf)?;
                Some(name)
            }
            None => None,
        };
        classes.push(class_json(&k, cl, csv_ref, &bent::bent_from_g(&k, &cl.g)));
    }
    let report = json!({
        "family": a.family,
        "m": k.m(),
        "stabilizer_order": c.decomposition.stabilizer_order.to_string(),
        "orbit_sizes": c.decomposition.sorted_sizes(),
        "pairwise_inequivalent": c.pairwise_inequivalent,
        "classes": classes,
    });
    let bytes = pretty(&report);
    match &a.out {
        Some(dir) => fs::write(dir.join("classify.json"), &bytes)?,
        None => emit(None, &bytes)?,
    }
    if a.check && !(c.pairwise_inequivalent && c.classes.iter().all(|x| x.bent)) {
        return Err(Failure::Mismatch("classification self-check failed".into()));
    }
    Ok(())
}

fn cmd_reproduce(a: ReproduceArgs) -> Outcome {
    let target: Target = a.target.parse()?;
    let allow_slow = a.allow_slow || std::env::var_os("NIHO_ALLOW_SLOW").is_some();
    let report = reproduce::run(target, reproduce::Options { allow_slow })?;
    let js = pretty(&serde_json::to_value(&report)?);
    if let Some(p) = &a.out {
        fs::write(p, &js)?;
    }
    match a.format {
        ReportFormat::Json => emit(None, &js)?,
        ReportFormat::Table => emit(None, report.render().as_bytes())?,
    }
    if !report.passed() {
        let failed: Vec<_> = report.checks.iter().filter(|c| !c.pass).map(|c| c.item.as_str()).collect();
        return Err(Failure::Mismatch(failed.join("; ")));
    }
    Ok(())
}
