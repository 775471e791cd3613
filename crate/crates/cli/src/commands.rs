use std::fs;
use std::io::{self, BufReader, Read, Write};
use std::path::Path;

use mzn_core::coinv::{psi_on_curve, CoinvariantDivisor};
use mzn_core::combinat::{curve_family, enum_fcurves, CurveFamily, FCurve, LabelSet};
use mzn_core::divisors::{boundary_degree, Ambient, CurveFunctional, FunctionalJson, PairingCache};
use mzn_core::exactlin::io::read_matrix;
use mzn_core::exactlin::{smith, IntegerMatrix};
use mzn_core::verify::{
    knudsen_dual_basis, verify_cdint, verify_chargen, verify_charkap, verify_charknu,
    verify_charproj_certificate, verify_knu_rank, verify_knudual, verify_psi_extremal,
    verify_triple, CdintPart, Context, VerificationReport,
};
use mzn_core::{Error, Result};
use num_rational::BigRational;

use crate::config::{Cli, Command, Filter, Format, GlobalArgs, Theorem, VerifyArgs};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::AmbientMismatch { .. } | Error::Internal(_) => EXIT_MISMATCH,
        _ => EXIT_USAGE,
    }
}

/// A divisor given on the command line.
enum NamedDivisor {
    Coinvariant(CoinvariantDivisor),
    Psi(usize),
    Delta(LabelSet),
}

fn parse_divisor(spec: &str, n: usize) -> Result<NamedDivisor> {
    let spec = spec.trim();
    if let Some(i) = spec.strip_prefix("psi:") {
        let i: usize = i
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad psi index in {spec:?}")))?;
        if i == 0 || i > n {
            return Err(Error::InvalidArgument(format!("psi index {i} outside 1..={n}")));
        }
        return Ok(NamedDivisor::Psi(i));
    }
    if let Some(s) = spec.strip_prefix("delta:") {
        let set: LabelSet = s.parse()?;
        if !set.is_subset(LabelSet::full(n)) || set.len() < 2 || n < set.len() + 2 {
            return Err(Error::InvalidArgument(format!(
                "delta set {set} needs two points on each side in 1..={n}"
            )));
        }
        return Ok(NamedDivisor::Delta(set));
    }
    let d: CoinvariantDivisor = spec.parse()?;
    if d.n() != n {
        return Err(Error::AmbientMismatch { expected: n, found: d.n() });
    }
    Ok(NamedDivisor::Coinvariant(d))
}

/// Parses a curve for `--n n`; a well-formed curve on another ambient is a mismatch.
fn parse_curve(spec: &str, n: usize) -> Result<FCurve> {
    FCurve::parse(spec, n).map_err(|e| {
        let labels = spec
            .split(['|', ','])
            .filter_map(|t| t.trim().parse::<usize>().ok())
            .max();
        match labels {
            Some(m) if m != n && FCurve::parse(spec, m).is_ok() => {
                Error::AmbientMismatch { expected: n, found: m }
            }
            _ => e,
        }
    })
}

fn context(global: &GlobalArgs) -> Context {
    let ctx = Context::new(global.max_n);
    match global.cache_dir() {
        Some(dir) => ctx.with_cache(PairingCache::new(dir)),
        None => ctx,
    }
}

fn check_n(n: usize, global: &GlobalArgs) -> Result<()> {
    if n > global.max_n {
        return Err(Error::ResourceBound { n, max: global.max_n });
    }
    Ok(())
}

fn read_input(path: &Path) -> Result<String> {
    let mut text = String::new();
    if path == Path::new("-") {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = fs::read_to_string(path)?;
    }
    Ok(text)
}

fn configure_threads(threads: usize) -> Result<()> {
    #[cfg(feature = "parallel")]
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

pub fn run(cli: Cli) -> Result<u8> {
    let global = cli.global;
    if global.max_n < 4 {
        return Err(Error::InvalidArgument("--max-n must be at least 4".into()));
    }
    configure_threads(global.threads)?;
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Fcurves { n, filter } => {
            check_n(n, &global)?;
            let curves = match filter {
                Filter::All => enum_fcurves(n)?,
                Filter::Kap => curve_family(n, &CurveFamily::Kapranov)?,
                Filter::Keel => curve_family(n, &CurveFamily::Keel)?,
                Filter::Knu => curve_family(n, &CurveFamily::Knudsen)?,
            };
            let names: Vec<String> = curves.iter().map(FCurve::encode).collect();
            match global.format {
                Format::Plain => names.iter().try_for_each(|s| writeln!(out, "{s}"))?,
                Format::Json => writeln!(out, "{}", serde_json::to_string(&names)?)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(out);
                    w.write_record(["curve"])?;
                    for s in &names {
                        w.write_record([s])?;
                    }
                    w.flush()?;
                }
            }
            Ok(EXIT_PASS)
        }
        Command::Intersect { n, divisor, curve } => {
            check_n(n, &global)?;
            let d = parse_divisor(&divisor, n)?;
            let c = parse_curve(&curve, n)?;
            let value = match d {
                NamedDivisor::Coinvariant(d) => i64::from(d.intersect(&c)?),
                NamedDivisor::Psi(i) => i64::from(psi_on_curve(i, &c)?),
                NamedDivisor::Delta(s) => boundary_degree(s, &c),
            };
            match global.format {
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::json!({"divisor": divisor, "curve": c.encode(), "value": value})
                )?,
                Format::Plain | Format::Csv => writeln!(out, "{value}")?,
            }
            Ok(EXIT_PASS)
        }
        Command::Expand { n, divisor, functional } => {
            check_n(n, &global)?;
            let ctx = context(&global);
            let amb = ctx.ambient(n)?;
            let v = match (divisor, functional) {
                (Some(spec), _) => named_functional(&amb, parse_divisor(&spec, n)?)?,
                (None, Some(path)) => {
                    let j: FunctionalJson = serde_json::from_str(&read_input(&path)?)?;
                    amb.functional_from_json(&j)?
                }
                (None, None) => return Err(Error::InvalidArgument("need --divisor or --functional".into())),
            };
            match amb.expand(&v)? {
                None => {
                    writeln!(out, "not-realizable")?;
                    Ok(EXIT_FAIL)
                }
                Some(x) => {
                    let j = amb.class_to_json(&x)?;
                    match global.format {
                        Format::Csv => {
                            let mut w = csv::Writer::from_writer(out);
                            w.write_record(["bits", "value"])?;
                            for c in &j.coords {
                                w.write_record([&c.bits, &c.value])?;
                            }
                            w.flush()?;
                        }
                        Format::Plain | Format::Json => writeln!(out, "{}", serde_json::to_string(&j)?)?,
                    }
                    Ok(EXIT_PASS)
                }
            }
        }
        Command::Verify(args) => {
            check_n(args.n, &global)?;
            let ctx = context(&global);
            let report = run_verifier(&ctx, &args)?;
            print_report(&mut out, &report, global.format)?;
            Ok(if report.passed() { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Pairing { n } => {
            check_n(n, &global)?;
            let ctx = context(&global);
            let amb = ctx.ambient(n)?;
            mzn_core::divisors::write_pairing(amb.pairing(), &mut out)?;
            Ok(EXIT_PASS)
        }
        Command::Snf { matrix } => {
            let text = read_input(&matrix)?;
            let m = read_matrix(BufReader::new(text.as_bytes()))?;
            if !m.entries().iter().all(BigRational::is_integer) {
                return Err(Error::InvalidArgument("Smith normal form needs an integer matrix".into()));
            }
            let mi: IntegerMatrix = m.map(|x| x.to_integer());
            let s = smith(&mi)?;
            let divisors: Vec<String> = s.divisors.iter().map(ToString::to_string).collect();
            match global.format {
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::json!({"rows": mi.rows(), "cols": mi.cols(), "rank": s.rank(), "divisors": divisors})
                )?,
                Format::Plain | Format::Csv => writeln!(out, "{}", divisors.join(","))?,
            }
            Ok(EXIT_PASS)
        }
    }
}

fn named_functional(amb: &Ambient, d: NamedDivisor) -> Result<CurveFunctional> {
    match d {
        NamedDivisor::Psi(i) => amb.psi_functional(i),
        NamedDivisor::Delta(s) => amb.boundary_delta(s),
        NamedDivisor::Coinvariant(d) => Ok(CurveFunctional {
            n: amb.n(),
            values: d
                .functional(amb.curves())?
                .into_iter()
                .map(|v| BigRational::from_integer(v.into()))
                .collect(),
            realizable: false,
        }),
    }
}

fn require<T>(value: Option<T>, flag: &str, theorem: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidArgument(format!("{theorem} needs --{flag}")))
}

fn run_verifier(ctx: &Context, args: &VerifyArgs) -> Result<VerificationReport> {
    let n = args.n;
    match args.theorem {
        Theorem::Charkap => verify_charkap(ctx, n),
        Theorem::Charknu => verify_charknu(ctx, n),
        Theorem::Chargen => {
            let s: LabelSet = require(args.s.as_deref(), "s", "chargen")?.parse()?;
            let t: LabelSet = require(args.t.as_deref(), "t", "chargen")?.parse()?;
            verify_chargen(ctx, n, s, t)
        }
        Theorem::Knudual => {
            // Build the certificate first so search failures surface as errors.
            knudsen_dual_basis(ctx, n)?;
            verify_knudual(ctx, n)
        }
        Theorem::CharprojCert => {
            let i = require(args.i, "i", "charproj-cert")?;
            let j = require(args.j, "j", "charproj-cert")?;
            verify_charproj_certificate(ctx, n, i, j)
        }
        Theorem::Cdint => {
            let part = CdintPart::from_number(require(args.part, "part", "cdint")?)?;
            verify_cdint(ctx, n, part, args.m_max)
        }
        Theorem::PsiExtremal => verify_psi_extremal(ctx, n, require(args.i, "i", "psi-extremal")?),
        Theorem::KnuRank => {
            let curves = if args.all {
                curve_family(n, &CurveFamily::Knudsen)?
            } else {
                args.curves.iter().map(|c| parse_curve(c, n)).collect::<Result<_>>()?
            };
            verify_knu_rank(ctx, n, &curves)
        }
        Theorem::Triple => verify_triple(ctx, n, require(args.i, "i", "triple")?),
    }
}

fn print_report(out: &mut impl Write, r: &VerificationReport, format: Format) -> Result<()> {
    match format {
        Format::Plain => writeln!(out, "{}", serde_json::to_string_pretty(r)?)?,
        Format::Json => writeln!(out, "{}", serde_json::to_string(r)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["check", "expected", "computed", "ok"])?;
            for (k, e) in &r.expected {
                let c = r.computed.get(k).cloned().unwrap_or_default();
                let ok = (&c == e).to_string();
                w.write_record([k.as_str(), &e.to_string(), &c.to_string(), &ok])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
