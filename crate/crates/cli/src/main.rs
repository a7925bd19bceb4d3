//! Batch command-line driver. Every invocation selects a model (height 1
//! at p ∈ {2, 3, 5} or height 2 at p = 2), runs one computation or
//! verification suite against it, and prints either human-readable lines
//! or — with `--json` — a machine-readable report.
//!
//! Exit codes: 0 when every check passed (or the computation succeeded),
//! 1 when some check failed, 2 on invalid input.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use morava::charfun::enum_subgroups;
use morava::freealg::AlgElt;
use morava::froblift::{
    congruence_check, factorization_report, frobenius_class_check, hecke_tp, index_lemma_report,
    sigma_can, theta, FrobeniusReport,
};
use morava::models::{height1_model, height2_model, Height1Model, Height2Model};
use morava::series::{BaseElt, SeriesRing};
use morava::{Error, Result};

#[derive(Parser)]
#[command(
    name = "morava",
    version,
    about = "Exact-arithmetic canonical Frobenius lifts, Hecke operators and theta-operations \
             on truncated Morava E-theory models"
)]
struct Cli {
    #[command(flatten)]
    cfg: ConfigArgs,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ConfigArgs {
    /// Work in the height-1 model (multiplicative formal group, p in {2, 3, 5})
    #[arg(long, global = true, conflicts_with = "height2")]
    height1: bool,

    /// Work in the height-2 model at p = 2 (the default)
    #[arg(long, global = true)]
    height2: bool,

    /// The prime p (height 2 fixes p = 2)
    #[arg(long, global = true, default_value_t = 2)]
    prime: u64,

    /// p-adic working precision N: coefficients live in Z/p^N
    #[arg(long, global = true, default_value_t = 16)]
    precision: u32,

    /// Total-degree cap D of the power-series base ring
    #[arg(long, global = true, default_value_t = 8)]
    degree: u32,

    /// Seed for the deterministic sample stream
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Number of pseudo-random samples in the congruence suite
    #[arg(long, global = true, default_value_t = 200)]
    samples: u32,

    /// Emit a JSON report instead of human-readable lines
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate the subgroups of (Z/p^k)^n
    Subgroups {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
    /// Print the selected model's presentation
    Model,
    /// Trace of multiplication by an element of the subgroup-classifier algebra
    SigmaCan {
        /// Element as JSON: an integer scalar, or an array of coordinates
        /// (one per power of x), each an integer or an array of
        /// [[exponents], coefficient] terms
        #[arg(long)]
        elt: String,
        /// Scale by the inverse of the rank so scalars are fixed
        #[arg(long)]
        normalized: bool,
    },
    /// Apply the p-th Hecke operator to a base-ring element
    Hecke {
        /// Element as JSON: an integer, or an array of [[exponents], coefficient] terms
        #[arg(long)]
        elt: String,
    },
    /// Apply the theta-operation (T_p(g) - g^p)/p to a base-ring element
    Theta {
        /// Element as JSON: an integer, or an array of [[exponents], coefficient] terms
        #[arg(long)]
        elt: String,
    },
    /// Run a named verification suite against the selected model
    Verify {
        #[arg(value_enum)]
        which: Suite,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    /// Every suite below, plus the headline operator values
    All,
    /// T_p(g) = g^p mod p over the seeded sample stream
    Congruence,
    /// sigma_can agrees mod p with the quotient-by-(y) map
    FrobeniusClass,
    /// The (restriction, quotient) inclusion has determinant p times a unit
    IndexLemma,
    /// The recorded roots split the modulus completely
    Factorization,
}

enum AnyModel {
    H1(Height1Model),
    H2(Height2Model),
}

impl AnyModel {
    fn build(cfg: &ConfigArgs) -> Result<Self> {
        if cfg.precision < 2 || cfg.degree < 2 {
            return Err(Error::ModelConstruction(
                "precision and degree must both be at least 2".into(),
            ));
        }
        if cfg.height1 {
            Ok(AnyModel::H1(height1_model(
                cfg.prime,
                cfg.precision,
                cfg.degree,
            )?))
        } else {
            if cfg.prime != 2 {
                return Err(Error::ModelConstruction(format!(
                    "the height-2 model fixes p = 2, got --prime {}",
                    cfg.prime
                )));
            }
            Ok(AnyModel::H2(height2_model(cfg.precision, cfg.degree)?))
        }
    }

    fn base(&self) -> &SeriesRing {
        match self {
            AnyModel::H1(m) => m.base(),
            AnyModel::H2(m) => m.base(),
        }
    }

    fn describe(&self) -> String {
        match self {
            AnyModel::H1(m) => m.describe(),
            AnyModel::H2(m) => m.describe(),
        }
    }

    fn sigma_elt(&self, coords: Vec<BaseElt>) -> AlgElt<BaseElt> {
        match self {
            AnyModel::H1(m) => m.sigma_algebra().element(coords),
            AnyModel::H2(m) => m.sigma_algebra().element(coords),
        }
    }

    fn sigma_can(&self, a: &AlgElt<BaseElt>, normalized: bool) -> BaseElt {
        match self {
            AnyModel::H1(m) => sigma_can(m, a, normalized),
            AnyModel::H2(m) => sigma_can(m, a, normalized),
        }
    }

    fn hecke(&self, g: &BaseElt) -> Result<BaseElt> {
        match self {
            AnyModel::H1(m) => hecke_tp(m, g),
            AnyModel::H2(m) => hecke_tp(m, g),
        }
    }

    fn theta(&self, g: &BaseElt) -> Result<BaseElt> {
        match self {
            AnyModel::H1(m) => theta(m, g),
            AnyModel::H2(m) => theta(m, g),
        }
    }

    fn frobenius_class(&self) -> FrobeniusReport {
        match self {
            AnyModel::H1(m) => frobenius_class_check(m),
            AnyModel::H2(m) => frobenius_class_check(m),
        }
    }

    fn congruence(&self, samples: u32, seed: u64) -> Result<FrobeniusReport> {
        match self {
            AnyModel::H1(m) => congruence_check(m, samples, seed),
            AnyModel::H2(m) => congruence_check(m, samples, seed),
        }
    }

    fn index_lemma(&self) -> Result<FrobeniusReport> {
        match self {
            AnyModel::H1(m) => index_lemma_report(m),
            AnyModel::H2(m) => index_lemma_report(m),
        }
    }

    fn factorization(&self) -> FrobeniusReport {
        match self {
            AnyModel::H1(m) => factorization_report(m),
            AnyModel::H2(m) => factorization_report(m),
        }
    }

    fn presentation(&self) -> serde_json::Value {
        match self {
            AnyModel::H1(m) => json!({
                "model": m.describe(),
                "prime": m.prime(),
                "height": 1,
                "rank": m.rank(),
                "modulus": m.sigma_algebra().modulus().to_string(),
                "full_modulus": m.full_modulus().to_string(),
                "power_image": serde_json::Value::Null,
                "roots": m.roots().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            }),
            AnyModel::H2(m) => json!({
                "model": m.describe(),
                "prime": m.prime(),
                "height": 2,
                "rank": m.rank(),
                "modulus": m.sigma_algebra().modulus().to_string(),
                "full_modulus": m.full_modulus().to_string(),
                "power_image": m.power_image().map(|i| i.to_string()),
                "roots": m.roots().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            }),
        }
    }
}

/// An integer is a constant; otherwise an array of [[exponents], coefficient]
/// pairs, e.g. `[[[1], 1]]` for u1 in the height-2 base ring.
fn base_from_value(ring: &SeriesRing, v: &serde_json::Value) -> Result<BaseElt> {
    if let Some(i) = v.as_i64() {
        return Ok(ring.constant(i as i128));
    }
    let arr = v
        .as_array()
        .ok_or_else(|| Error::BadElement(format!("expected an integer or a term array, got {v}")))?;
    let mut pairs = Vec::new();
    for term in arr {
        let pair = term.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
            Error::BadElement(format!("term must be [[exponents], coefficient], got {term}"))
        })?;
        let exps = pair[0]
            .as_array()
            .ok_or_else(|| Error::BadElement(format!("exponents must be an array, got {}", pair[0])))?
            .iter()
            .map(|e| {
                e.as_u64()
                    .map(|e| e as u32)
                    .ok_or_else(|| Error::BadElement(format!("bad exponent {e}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        let c = pair[1]
            .as_i64()
            .ok_or_else(|| Error::BadElement(format!("bad coefficient {}", pair[1])))?;
        pairs.push((exps, c as i128));
    }
    ring.from_pairs(&pairs)
}

fn parse_base_elt(ring: &SeriesRing, s: &str) -> Result<BaseElt> {
    let v: serde_json::Value =
        serde_json::from_str(s).map_err(|e| Error::BadElement(format!("invalid JSON: {e}")))?;
    base_from_value(ring, &v)
}

/// An integer is a scalar; otherwise an array of coordinates (one per
/// power of x), each in the base-element format.
fn parse_alg_elt(model: &AnyModel, s: &str) -> Result<AlgElt<BaseElt>> {
    let v: serde_json::Value =
        serde_json::from_str(s).map_err(|e| Error::BadElement(format!("invalid JSON: {e}")))?;
    let ring = model.base();
    if v.as_i64().is_some() {
        return Ok(model.sigma_elt(vec![base_from_value(ring, &v)?]));
    }
    let arr = v
        .as_array()
        .ok_or_else(|| Error::BadElement(format!("expected an integer or a coordinate array, got {v}")))?;
    let coords = arr
        .iter()
        .map(|c| base_from_value(ring, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(model.sigma_elt(coords))
}

/// One computed value, reported like a trivially passing check so that
/// JSON consumers see a single schema.
fn value_report(model: &AnyModel, op: &str, input: &str, result: &BaseElt) -> FrobeniusReport {
    FrobeniusReport {
        model: model.describe(),
        checks: vec![morava::froblift::CheckResult {
            check: op.to_string(),
            pass: true,
            witness: result.to_string(),
            detail: format!("input {input}"),
        }],
    }
}

fn emit(report: &FrobeniusReport, as_json: bool) -> ExitCode {
    if as_json {
        println!("{}", serde_json::to_string_pretty(report).expect("report serializes"));
    } else {
        for c in &report.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            println!("{tag}: {} — {}", c.check, c.witness);
        }
        let total = report.checks.len();
        let passed = report.checks.iter().filter(|c| c.pass).count();
        println!("{}: {passed}/{total} checks passed", report.model);
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn verify_all(model: &AnyModel, samples: u32, seed: u64) -> Result<FrobeniusReport> {
    let mut report = FrobeniusReport {
        model: model.describe(),
        checks: Vec::new(),
    };

    // headline operator values
    match model {
        AnyModel::H2(m) => {
            let u1 = m.base().var("u1")?;
            let t = hecke_tp(m, &u1)?;
            report.checks.push(morava::froblift::CheckResult {
                check: "T2(u1) = u1^2".into(),
                pass: t == u1.mul(&u1),
                witness: t.to_string(),
                detail: "the Hecke operator sends u1 to u1^2".into(),
            });
            let th = theta(m, &u1)?;
            report.checks.push(morava::froblift::CheckResult {
                check: "theta(u1) = 0".into(),
                pass: th.is_zero(),
                witness: th.to_string(),
                detail: "T_2(u1) - u1^2 vanishes, so theta(u1) = 0".into(),
            });
            let t1 = theta(m, &m.base().one())?;
            report.checks.push(morava::froblift::CheckResult {
                check: "theta(1) = 1".into(),
                pass: t1 == m.base().one(),
                witness: t1.to_string(),
                detail: "(T_2(1) - 1)/2 = (3 - 1)/2 = 1".into(),
            });
        }
        AnyModel::H1(m) => {
            let one = m.base().one();
            let t = hecke_tp(m, &one)?;
            report.checks.push(morava::froblift::CheckResult {
                check: "Tp(1) = 1".into(),
                pass: t == one,
                witness: t.to_string(),
                detail: "at height 1 the Hecke operator fixes constants".into(),
            });
        }
    }

    report.checks.extend(model.frobenius_class().checks);
    report.checks.extend(model.factorization().checks);
    report.checks.extend(model.index_lemma()?.checks);
    report.checks.extend(model.congruence(samples, seed)?.checks);
    Ok(report)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.cmd {
        Cmd::Subgroups { p, n, k } => {
            let table = enum_subgroups(*p, *n, *k)?;
            if cli.cfg.json {
                let doc = json!({
                    "p": table.p,
                    "n": table.n,
                    "k": table.k,
                    "count": table.count(),
                    "subgroups": table.subgroups,
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("table serializes"));
            } else {
                println!(
                    "(Z/{}^{})^{} has {} subgroups; generator matrices:",
                    p,
                    k,
                    n,
                    table.count()
                );
                for s in &table.subgroups {
                    println!("  {s:?}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Model => {
            let model = AnyModel::build(&cli.cfg)?;
            if cli.cfg.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&model.presentation()).expect("model serializes")
                );
            } else {
                let doc = model.presentation();
                println!("{}", doc["model"].as_str().expect("describe is a string"));
                println!("  modulus f: {}", doc["modulus"].as_str().expect("string"));
                println!("  full modulus y*f: {}", doc["full_modulus"].as_str().expect("string"));
                match doc["power_image"].as_str() {
                    Some(img) => println!("  power image of u1: {img}"),
                    None => println!("  power operation: scalar inclusion (rank 1)"),
                }
                println!("  roots: {}", doc["roots"].as_array().expect("array").len());
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::SigmaCan { elt, normalized } => {
            let model = AnyModel::build(&cli.cfg)?;
            let a = parse_alg_elt(&model, elt)?;
            let result = model.sigma_can(&a, *normalized);
            let op = if *normalized {
                "sigma_can (normalized)"
            } else {
                "sigma_can"
            };
            Ok(emit(&value_report(&model, op, elt, &result), cli.cfg.json))
        }
        Cmd::Hecke { elt } => {
            let model = AnyModel::build(&cli.cfg)?;
            let g = parse_base_elt(model.base(), elt)?;
            let result = model.hecke(&g)?;
            Ok(emit(&value_report(&model, "hecke", elt, &result), cli.cfg.json))
        }
        Cmd::Theta { elt } => {
            let model = AnyModel::build(&cli.cfg)?;
            let g = parse_base_elt(model.base(), elt)?;
            match model.theta(&g) {
                Ok(result) => Ok(emit(&value_report(&model, "theta", elt, &result), cli.cfg.json)),
                // a torsion obstruction is a mathematical failure, not an
                // input error: report it as a failing check
                Err(Error::TorsionObstruction { monomial, value }) => {
                    let report = FrobeniusReport {
                        model: model.describe(),
                        checks: vec![morava::froblift::CheckResult {
                            check: "theta".into(),
                            pass: false,
                            witness: format!("unit coefficient {value} at {monomial}"),
                            detail: format!("T_p(g) - g^p is not divisible by p for input {elt}"),
                        }],
                    };
                    Ok(emit(&report, cli.cfg.json))
                }
                Err(e) => Err(e),
            }
        }
        Cmd::Verify { which } => {
            let model = AnyModel::build(&cli.cfg)?;
            let report = match which {
                Suite::All => verify_all(&model, cli.cfg.samples, cli.cfg.seed)?,
                Suite::Congruence => model.congruence(cli.cfg.samples, cli.cfg.seed)?,
                Suite::FrobeniusClass => model.frobenius_class(),
                Suite::IndexLemma => model.index_lemma()?,
                Suite::Factorization => model.factorization(),
            };
            Ok(emit(&report, cli.cfg.json))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
