//! Command-line front end for the `hahn` series engine.
//!
//! Every subcommand takes a series expression (or a program of `let`
//! bindings, in which case the last binding is the subject), either inline
//! or as a path to a file. Exit codes: 0 for definite answers, 2 for
//! UNKNOWN verdicts or values, 1 for errors. With `--json` the output is
//! byte-deterministic for a fixed configuration, and the configuration is
//! embedded in the output for replayability.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hahn::certifier::{certify, certify_plus_r, Certificate, Config};
use hahn::dsl::{format_series, parse_program_with_seed, parse_series_with_seed};
use hahn::exponent::Exponent;
use hahn::ordinal::Ordinal;
use hahn::coeff::Coeff;
use hahn::series::{Ladder, Series};
use hahn::valuation::{crit, crit_j, deg, deg_j, v_j};
use serde_json::json;

#[derive(Parser)]
#[command(name = "hahn", version, about = "exact generalized power series")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    opts: CommonOpts,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Emit machine-readable JSON with the configuration embedded.
    #[arg(long, global = true)]
    json: bool,
    /// Number of support points to list or sample.
    #[arg(long, global = true, default_value_t = 20)]
    count: usize,
    /// Lower exponent bound for enumerations, as a rational like -1/8.
    #[arg(long, global = true, allow_hyphen_values = true)]
    floor: Option<String>,
    /// Recursion budget for hereditary-independence search.
    #[arg(long, global = true, default_value_t = 3)]
    depth_budget: usize,
    /// Number of support points probed when hunting dependence witnesses.
    #[arg(long, global = true, default_value_t = 8)]
    probe_depth: usize,
    /// Offset added to every independence-ladder seed in parsed input.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u32,
}

#[derive(Subcommand)]
enum Verb {
    /// Order type of the support.
    Ot { expr: String },
    /// Ordinal value v_J.
    Vj { expr: String },
    /// Degree, and the degree relative to the ideal J.
    Deg { expr: String },
    /// Critical points crit and crit_J.
    Crit { expr: String },
    /// Truncation at an exponent: keep the points at or below it.
    Truncate {
        expr: String,
        /// Exponent gamma to truncate at, e.g. "-1/2" or "-1 + sqrt(2)".
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Shift the truncation by -gamma (the germ presentation).
        #[arg(long)]
        translated: bool,
    },
    /// Product of two series.
    Mul { lhs: String, rhs: String },
    /// List the first support points with their coefficients.
    Enumerate { expr: String },
    /// Cluster decomposition: one shifted part per support cluster.
    NormalForm { expr: String },
    /// Irreducibility certificate.
    Certify {
        expr: String,
        /// Also certify the sum with this series, reusing the base facts.
        #[arg(long)]
        plus_r: Option<String>,
    },
    /// Worked examples with pinned expected values.
    Demo {
        #[arg(value_parser = ["conway", "cancellation", "crit", "degrees", "omega2"])]
        name: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.verb, &cli.opts) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Inline expression text, or the contents of the file it names.
fn load(input: &str) -> Result<String, String> {
    if std::path::Path::new(input).is_file() {
        std::fs::read_to_string(input).map_err(|e| format!("{input}: {e}"))
    } else {
        Ok(input.to_string())
    }
}

/// A single series from an expression or the last binding of a program.
fn series_arg(input: &str, opts: &CommonOpts) -> Result<Series, String> {
    let text = load(input)?;
    if text.trim_start().starts_with("let ") {
        let bindings = parse_program_with_seed(&text, opts.seed).map_err(|e| e.to_string())?;
        bindings
            .into_iter()
            .last()
            .map(|(_, s)| s)
            .ok_or_else(|| "empty program".to_string())
    } else {
        parse_series_with_seed(&text, opts.seed).map_err(|e| e.to_string())
    }
}

fn parse_exponent(text: &str) -> Result<Exponent, String> {
    Exponent::parse(text).map_err(|e| format!("bad exponent {text:?}: {e}"))
}

fn config_of(opts: &CommonOpts) -> Result<Config, String> {
    let floor = opts.floor.as_deref().map(parse_exponent).transpose()?;
    Ok(Config {
        depth_budget: opts.depth_budget,
        probe_depth: opts.probe_depth,
        floor,
    })
}

fn config_json(opts: &CommonOpts) -> serde_json::Value {
    json!({
        "count": opts.count,
        "floor": opts.floor,
        "depth_budget": opts.depth_budget,
        "probe_depth": opts.probe_depth,
        "seed": opts.seed,
    })
}

fn ord_str(o: &Ordinal) -> String {
    o.to_string()
}

/// `Some(None)` is a definite -infinity, `None` an unknown.
fn deg_str(d: &Option<Option<Ordinal>>) -> Option<String> {
    d.as_ref()
        .map(|x| x.as_ref().map_or("-infinity".into(), ord_str))
}

/// Print `value` (or report it unknown) and return the matching exit code.
fn answer(
    opts: &CommonOpts,
    key: &str,
    value: Option<String>,
    extra: &[(&str, Option<String>)],
) -> ExitCode {
    if opts.json {
        let mut obj = serde_json::Map::new();
        obj.insert(key.into(), json!(value));
        for (k, v) in extra {
            obj.insert((*k).into(), json!(v));
        }
        obj.insert("config".into(), config_json(opts));
        println!("{}", serde_json::to_string_pretty(&obj).unwrap());
    } else {
        match &value {
            Some(v) => println!("{key} = {v}"),
            None => println!("{key} = UNKNOWN"),
        }
        for (k, v) in extra {
            match v {
                Some(v) => println!("{k} = {v}"),
                None => println!("{k} = UNKNOWN"),
            }
        }
    }
    if value.is_none() || extra.iter().any(|(_, v)| v.is_none()) {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn print_certificate(cert: &Certificate, opts: &CommonOpts) -> ExitCode {
    if opts.json {
        println!("{}", cert.to_json());
    } else {
        println!("input:    {}", cert.input);
        println!("ot:       {}", cert.ot.as_deref().unwrap_or("UNKNOWN"));
        println!("verdict:  {} ({})", cert.verdict, cert.theorem);
        if let Some(clause) = &cert.plus_r_clause {
            println!("also:     {clause}");
        }
        if let Some(cause) = &cert.cause {
            println!("cause:    {cause}");
        }
    }
    if cert.is_definite() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn run(verb: &Verb, opts: &CommonOpts) -> Result<ExitCode, String> {
    match verb {
        Verb::Ot { expr } => {
            let b = series_arg(expr, opts)?;
            Ok(answer(opts, "ot", b.ot().ok().as_ref().map(ord_str), &[]))
        }
        Verb::Vj { expr } => {
            let b = series_arg(expr, opts)?;
            Ok(answer(opts, "v_J", v_j(&b).ok().as_ref().map(ord_str), &[]))
        }
        Verb::Deg { expr } => {
            let b = series_arg(expr, opts)?;
            let d = deg_str(&deg(&b).ok());
            let dj = deg_str(&deg_j(&b).ok());
            Ok(answer(opts, "deg", d, &[("deg_J", dj)]))
        }
        Verb::Crit { expr } => {
            let b = series_arg(expr, opts)?;
            let c = crit(&b).ok().map(|e| e.to_string());
            let cj = crit_j(&b).ok().map(|e| e.to_string());
            Ok(answer(opts, "crit", c, &[("crit_J", cj)]))
        }
        Verb::Truncate {
            expr,
            at,
            translated,
        } => {
            let b = series_arg(expr, opts)?;
            let gamma = parse_exponent(at)?;
            let t = if *translated {
                b.translated_truncate(&gamma)
            } else {
                b.truncate(&gamma)
            };
            Ok(answer(opts, "series", Some(format_series(&t)), &[]))
        }
        Verb::Mul { lhs, rhs } => {
            let b = series_arg(lhs, opts)?;
            let c = series_arg(rhs, opts)?;
            Ok(answer(opts, "series", Some(format_series(&b.mul(&c))), &[]))
        }
        Verb::Enumerate { expr } => {
            let b = series_arg(expr, opts)?;
            let floor = opts.floor.as_deref().map(parse_exponent).transpose()?;
            let b = match &floor {
                Some(f) => b.sub(&b.truncate(f)).add(&coefficient_floor(&b, f)),
                None => b,
            };
            let (points, exhausted) = b.enumerate(opts.count);
            if opts.json {
                let list: Vec<_> = points
                    .iter()
                    .map(|(e, c)| json!({"exponent": e.to_string(), "coefficient": c.to_string()}))
                    .collect();
                let obj = json!({
                    "points": list,
                    "exhausted": exhausted,
                    "config": config_json(opts),
                });
                println!("{}", serde_json::to_string_pretty(&obj).unwrap());
            } else {
                for (e, c) in &points {
                    println!("{c}  at  t^({e})");
                }
                if exhausted {
                    println!("(support exhausted)");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Verb::NormalForm { expr } => {
            let b = series_arg(expr, opts)?;
            match b.normal_form() {
                Ok(parts) => {
                    if opts.json {
                        let list: Vec<_> = parts
                            .iter()
                            .map(|(g, p)| json!({"gamma": g.to_string(), "part": format_series(p)}))
                            .collect();
                        let obj = json!({"parts": list, "config": config_json(opts)});
                        println!("{}", serde_json::to_string_pretty(&obj).unwrap());
                    } else {
                        for (g, p) in &parts {
                            println!("t^({g}) * [ {} ]", format_series(p));
                        }
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    println!("normal form UNKNOWN: {e}");
                    Ok(ExitCode::from(2))
                }
            }
        }
        Verb::Certify { expr, plus_r } => {
            let b = series_arg(expr, opts)?;
            let config = config_of(opts)?;
            let cert = match plus_r {
                Some(r) => certify_plus_r(&b, &series_arg(r, opts)?, &config),
                None => certify(&b, &config),
            };
            Ok(print_certificate(&cert, opts))
        }
        Verb::Demo { name } => demo(name, opts),
    }
}

/// A one-point family (used to spell out finite prefixes of a ladder).
fn monomial_family(scalar: Coeff, base: Exponent) -> hahn::series::Family {
    hahn::series::Family {
        base,
        dims: Vec::new(),
        scalar,
        factors: Vec::new(),
    }
}

/// The part of the truncation that sits exactly at the floor, kept so the
/// floored enumeration still starts at a support point.
fn coefficient_floor(b: &Series, f: &Exponent) -> Series {
    let c = b.coefficient_at(f);
    if c.is_zero() {
        Series::zero()
    } else {
        Series::monomial(c, f.clone())
    }
}

/// A pinned expected value; the demo fails with a diff when one mismatches.
struct Check {
    label: String,
    expected: String,
    got: String,
}

impl Check {
    fn new(label: &str, expected: impl ToString, got: impl ToString) -> Check {
        Check {
            label: label.to_string(),
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }

    fn ok(&self) -> bool {
        self.expected == self.got
    }
}

fn finish_demo(narrative: String, checks: Vec<Check>) -> Result<ExitCode, String> {
    print!("{narrative}");
    let mut failed = false;
    for c in checks {
        if c.ok() {
            println!("  [ok]   {} = {}", c.label, c.got);
        } else {
            failed = true;
            println!("  [FAIL] {}: expected {}, got {}", c.label, c.expected, c.got);
        }
    }
    Ok(if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn demo(name: &str, opts: &CommonOpts) -> Result<ExitCode, String> {
    let config = config_of(opts)?;
    match name {
        "conway" => {
            let b = parse_series_with_seed("Sum[n: harm(1)](1 * t^(-1/(n+1)))", 0)
                .map_err(|e| e.to_string())?;
            let cert = certify_plus_r(&b, &Series::one(), &config);
            let mut out = String::new();
            writeln!(out, "The harmonic-support series plus one:").unwrap();
            writeln!(out, "  b = 1 + Sum[n: harm(1)](1 * t^(-1/(n+1)))").unwrap();
            if opts.json {
                out.push_str(&cert.to_json());
                out.push('\n');
            }
            let checks = vec![
                Check::new("ot(b)", "w + 1", cert.ot.as_deref().unwrap_or("UNKNOWN")),
                Check::new("verdict is definite", "true", cert.is_definite()),
                Check::new(
                    "irreducibility rule cited",
                    "true",
                    cert.to_json().contains("berarducci_10_5"),
                ),
            ];
            finish_demo(out, checks)
        }
        "cancellation" => {
            let ladder = Ladder::IndepHarmonic {
                scale: Exponent::from_int(1),
                seed: opts.seed,
            };
            let n = opts.count;
            // The 40x40 prefix of b = sum t^(s_n) and c = sum (-1)^n t^(s_n)
            // over one shared ladder; the product cancels structurally.
            let prefix = |signed: bool| {
                Series::from_families(
                    (0..n as u64)
                        .map(|i| {
                            let sign = if signed && i % 2 == 1 { -1 } else { 1 };
                            monomial_family(Coeff::from_int(sign), ladder.value(i))
                        })
                        .collect(),
                )
            };
            let p = prefix(false).mul(&prefix(true));
            let coeffs: std::collections::BTreeMap<Exponent, Coeff> = p
                .families()
                .iter()
                .map(|f| (f.base.clone(), f.scalar.clone()))
                .collect();
            let mut out = String::new();
            writeln!(out, "Product of plain and alternating series on one ladder;").unwrap();
            writeln!(out, "every cross exponent s_m + s_k with m - k odd cancels:").unwrap();
            let mut vanished = 0usize;
            let mut surviving = 0usize;
            for m in 0..n as u64 {
                for k in (m + 1)..n as u64 {
                    let e = ladder.value(m).add(&ladder.value(k));
                    let c = coeffs.get(&e).cloned().unwrap_or_else(Coeff::zero);
                    if (k - m) % 2 == 1 {
                        if c.is_zero() {
                            vanished += 1;
                            writeln!(out, "  vanished: s_{m} + s_{k} = {e}").unwrap();
                        } else {
                            writeln!(out, "  NONZERO at s_{m} + s_{k} = {e}: {c}").unwrap();
                        }
                    } else if !c.is_zero() {
                        surviving += 1;
                    }
                }
            }
            let odd_pairs: usize = (0..n)
                .map(|m| ((m + 1)..n).filter(|k| (k - m) % 2 == 1).count())
                .sum();
            let checks = vec![
                Check::new(
                    format!("vanished odd pairs among {n}x{n}").as_str(),
                    odd_pairs,
                    vanished,
                ),
                Check::new("even pairs survive", "true", surviving > 0),
            ];
            finish_demo(out, checks)
        }
        "crit" => {
            let b = parse_series_with_seed(
                "Sum[n: harm(1)](1 * t^(-2 - 1/(n+1))) \
                 + Sum[n: harm(1)](1 * t^(-1 - 1/(n+1))) \
                 + Sum[n: harm(1)](1 * t^(-1/(n+1)))",
                0,
            )
            .map_err(|e| e.to_string())?;
            let mut out = String::new();
            writeln!(out, "Three harmonic tails hanging off -2, -1 and 0:").unwrap();
            writeln!(out, "  the germ value peaks at -2, the J-critical point is -1.").unwrap();
            let checks = vec![
                Check::new("v_J", "w", v_j(&b).map_or("UNKNOWN".into(), |o| o.to_string())),
                Check::new("crit", "-2", crit(&b).map_or("UNKNOWN".into(), |e| e.to_string())),
                Check::new(
                    "crit_J",
                    "-1",
                    crit_j(&b).map_or("UNKNOWN".into(), |e| e.to_string()),
                ),
            ];
            finish_demo(out, checks)
        }
        "degrees" => {
            let d0 = parse_series_with_seed("t^(-sqrt(2)) + t^(-1) + 1", 0)
                .map_err(|e| e.to_string())?;
            let d1 = parse_series_with_seed(
                "Sum[n: harm(1)](1 * t^(-1 - 1/(n+1))) + Sum[n: harm(1)](1 * t^(-1/(n+1)))",
                0,
            )
            .map_err(|e| e.to_string())?;
            let d2 = parse_series_with_seed(
                "Sum[m: iharm(1,0), n: iharm(1,1)](1 * t^(-1 + s(m) + s(n))) \
                 + Sum[n: harm(1)](1 * t^(-1/(n+1)))",
                opts.seed,
            )
            .map_err(|e| e.to_string())?;
            let show = |b: &Series| deg_str(&deg(b).ok()).unwrap_or("UNKNOWN".into());
            let mut out = String::new();
            writeln!(out, "Finite supports have degree 0; each stacked tail adds one;").unwrap();
            writeln!(out, "a two-dimensional block below -1 counts for deg but not deg_J:").unwrap();
            let checks = vec![
                Check::new("deg(t^(-sqrt(2)) + t^(-1) + 1)", "0", show(&d0)),
                Check::new("deg of two stacked tails (ot w + w)", "1", show(&d1)),
                Check::new("deg of block-plus-tail", "2", show(&d2)),
                Check::new(
                    "deg_J of block-plus-tail",
                    "1",
                    deg_str(&deg_j(&d2).ok()).unwrap_or("UNKNOWN".into()),
                ),
            ];
            finish_demo(out, checks)
        }
        "omega2" => {
            let b = parse_series_with_seed(
                "Sum[m: iharm(1,0), n: iharm(1,1)](fresh(0) * t^(s(m) + s(n)))",
                opts.seed,
            )
            .map_err(|e| e.to_string())?;
            let cert = certify(&b, &config);
            let mut out = String::new();
            writeln!(out, "A two-dimensional series with fresh coefficients and").unwrap();
            writeln!(out, "pairwise-independent support tags, of order type w^2:").unwrap();
            if opts.json {
                out.push_str(&cert.to_json());
                out.push('\n');
            }
            let checks = vec![
                Check::new("ot", "w^2", cert.ot.as_deref().unwrap_or("UNKNOWN")),
                Check::new("verdict", "IRREDUCIBLE", &cert.verdict),
                Check::new("theorem", "printhm_2", &cert.theorem),
                Check::new("not_sum_of_reducibles", "true", cert.not_sum_of_reducibles),
            ];
            finish_demo(out, checks)
        }
        _ => Err(format!("unknown demo {name:?}")),
    }
}
