//! The `gdh` command line. `run` is the whole program minus process exit, so
//! tests can drive it in-process.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cache::{Cache, Rejected};
use crate::error::Error;
use crate::gd::GdContext;
use crate::kp::KpTable;
use crate::rational::Rational;
use crate::render::{self, Style};
use crate::selfcheck;
use crate::witten::{self, correlator, witten_truncation, CorrelatorKey, SignConvention, XPolynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Latex,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Sign {
    Literal,
    Frozen,
}

impl From<Sign> for SignConvention {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Literal => SignConvention::Literal,
            Sign::Frozen => SignConvention::Frozen,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "gdh", version, about = "Exact KP / Gelfand-Dikii equations and Witten-solution coefficients")]
pub struct Cli {
    /// Output format; correlators default to json, everything else to text.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Coefficient cache directory (GDH_CACHE takes precedence).
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Threads for table construction.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,
    /// Correlator sign convention.
    #[arg(long, global = true, value_enum, default_value_t = Sign::Frozen)]
    pub sign: Sign,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// A KP equation ∂_j∂_i v = …
    Kp {
        #[arg(long, value_parser = parse_pair)]
        pair: (u32, u32),
    },
    /// A reduced n-Gelfand-Dikii equation ∂_{i1}⋯∂_{ik} v = …
    Gd(GdArgs),
    /// The genus-G part of the Witten solution, truncated to k factors.
    Witten {
        #[arg(long, value_parser = parse_n)]
        n: u32,
        #[arg(long)]
        genus: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        kmax: u32,
    },
    /// One correlator ⟨τ_{k1,m1}⋯⟩_G.
    Correlators {
        #[arg(long, value_parser = parse_n)]
        n: u32,
        #[arg(long)]
        genus: u32,
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true, value_parser = parse_insertion)]
        insertions: Vec<(u32, u32)>,
    },
    /// Run every property suite.
    Selfcheck {
        /// Largest weight exercised by the property suites.
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(4..))]
        max_weight: u32,
        /// Seed for the randomized inputs.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
pub struct GdArgs {
    #[arg(long, value_parser = parse_n)]
    pub n: u32,
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub indices: Vec<u32>,
}

fn parse_n(s: &str) -> Result<u32, String> {
    let n: u32 = s.parse().map_err(|_| format!("{s:?} is not a non-negative integer"))?;
    if n < 2 {
        return Err(format!("n must be at least 2, got {n}"));
    }
    Ok(n)
}

fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [a, b] = parts.as_slice() else {
        return Err(format!("expected i,j, got {s:?}"));
    };
    let num = |x: &str| match x.trim().parse::<u32>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(format!("{x:?} is not a positive integer")),
    };
    Ok((num(a)?, num(b)?))
}

fn parse_insertion(item: &str) -> Result<(u32, u32), String> {
    let (k, m) = item.split_once(':').ok_or_else(|| format!("expected k:m, got {item:?}"))?;
    let k = k.trim().parse().map_err(|_| format!("bad k in {item:?}"))?;
    let m = m.trim().parse().map_err(|_| format!("bad m in {item:?}"))?;
    Ok((k, m))
}

#[derive(Serialize)]
struct EquationRecord<'a> {
    indices: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<u32>,
    equation: &'a crate::jet::JetPolynomial,
}

#[derive(Serialize)]
struct SeriesRecord<'a> {
    n: u32,
    genus: u32,
    kmax: u32,
    /// The one-factor stratum forced by the string equation (empty in genus 0).
    linear: &'a XPolynomial,
    terms: &'a XPolynomial,
}

#[derive(Serialize)]
struct CorrelatorRecord<'a> {
    n: u32,
    genus: u32,
    insertions: &'a [(u32, u32)],
    value: &'a Rational,
    abs_value: Rational,
    sign: i32,
    convention: &'static str,
    literal_sign_pattern: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    extrapolated: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostic: Option<&'a str>,
}

fn style(f: Format) -> Style {
    if f == Format::Latex {
        Style::Latex
    } else {
        Style::Text
    }
}

fn cache_dir(flag: &Option<PathBuf>) -> Option<PathBuf> {
    std::env::var_os("GDH_CACHE").filter(|v| !v.is_empty()).map(PathBuf::from).or_else(|| flag.clone())
}

fn note_rejection(err: &mut dyn Write, what: &str, r: &Option<Rejected>) {
    match r {
        None | Some(Rejected::Missing) => {}
        Some(other) => {
            let _ = writeln!(err, "warning: {what} cache ignored ({other:?}); rebuilt");
        }
    }
}

fn kp_table(cache: Option<&Cache>, weight: u32, err: &mut dyn Write) -> crate::Result<KpTable> {
    match cache {
        None => Ok(KpTable::built(weight)),
        Some(c) => {
            let (t, why) = c.kp(weight)?;
            note_rejection(err, "kp", &why);
            Ok(t)
        }
    }
}

fn gd_context(cache: Option<&Cache>, n: u32, err: &mut dyn Write) -> crate::Result<GdContext> {
    match cache {
        None => GdContext::new(n),
        Some(c) => {
            let (ctx, why) = c.gd(n, 0)?;
            note_rejection(err, &format!("gd n={n}"), &why);
            Ok(ctx)
        }
    }
}

/// Persists a context that grew while answering the command.
fn persist_gd(cache: Option<&Cache>, ctx: &GdContext, before: u32) -> crate::Result<()> {
    match cache {
        Some(c) if ctx.built_weight() > before => c.store_gd(ctx),
        _ => Ok(()),
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> crate::Result<i32> {
    let cache = cache_dir(&cli.cache).map(Cache::new);
    let cache = cache.as_ref();
    let io = |e: std::io::Error| Error::Domain(format!("writing output: {e}"));
    match &cli.command {
        Command::Kp { pair: (i, j) } => {
            let table = kp_table(cache, i + j, err)?;
            let eq = table.kp_equation(*i, *j)?;
            let fmt = cli.format.unwrap_or(Format::Text);
            match fmt {
                Format::Json => {
                    let rec = EquationRecord { indices: vec![*i, *j], n: None, equation: &eq };
                    writeln!(out, "{}", serde_json::to_string(&rec).expect("serializable")).map_err(io)?;
                }
                _ => writeln!(out, "{}", render::equation(&[*i, *j], &eq, style(fmt))).map_err(io)?,
            }
        }
        Command::Gd(args) => {
            if args.indices.len() < 2 {
                return Err(Error::Domain("--indices needs at least two indices".into()));
            }
            let mut ctx = gd_context(cache, args.n, err)?;
            let before = ctx.built_weight();
            let eq = ctx.gd_equation(&args.indices)?;
            persist_gd(cache, &ctx, before)?;
            let fmt = cli.format.unwrap_or(Format::Text);
            match fmt {
                Format::Json => {
                    let mut indices = args.indices.clone();
                    indices.sort_unstable();
                    let rec = EquationRecord { indices, n: Some(args.n), equation: &eq };
                    writeln!(out, "{}", serde_json::to_string(&rec).expect("serializable")).map_err(io)?;
                }
                _ => writeln!(out, "{}", render::equation(&args.indices, &eq, style(fmt))).map_err(io)?,
            }
        }
        Command::Witten { n, genus, kmax } => {
            let mut ctx = gd_context(cache, *n, err)?;
            let before = ctx.built_weight();
            let series = witten_truncation(&mut ctx, *genus, *kmax)?.pop().expect("one series per genus");
            let linear = witten::linear_stratum(&mut ctx, *genus)?;
            persist_gd(cache, &ctx, before)?;
            match cli.format.unwrap_or(Format::Text) {
                Format::Json => {
                    let rec =
                        SeriesRecord { n: *n, genus: *genus, kmax: *kmax, linear: &linear.terms, terms: &series.terms };
                    writeln!(out, "{}", serde_json::to_string(&rec).expect("serializable")).map_err(io)?;
                }
                fmt => {
                    let st = style(fmt);
                    let full = series.with_linear(&linear)?;
                    let lhs = match st {
                        Style::Text => format!("W{genus}"),
                        Style::Latex => format!("W^{{{genus}}}"),
                    };
                    writeln!(out, "{lhs} = {} + O(k > {kmax})", render::x_polynomial(&full.terms, st)).map_err(io)?;
                }
            }
        }
        Command::Correlators { n, genus, insertions } => {
            let key = CorrelatorKey { n: *n, genus: *genus, insertions: insertions.clone() };
            key.linear_indices()?;
            let mut ctx = gd_context(cache, *n, err)?;
            let before = ctx.built_weight();
            let c = correlator(&mut ctx, &key)?;
            persist_gd(cache, &ctx, before)?;
            let sign: SignConvention = cli.sign.into();
            let value = c.value(sign);
            let convention = match cli.sign {
                Sign::Literal => "literal",
                Sign::Frozen => "frozen",
            };
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let rec = CorrelatorRecord {
                        n: *n,
                        genus: *genus,
                        insertions,
                        value,
                        abs_value: value.abs(),
                        sign: sign_of(value),
                        convention,
                        literal_sign_pattern: c.sign_pattern(),
                        extrapolated: c.extrapolated(sign),
                        diagnostic: c.diagnostic.as_deref(),
                    };
                    writeln!(out, "{}", serde_json::to_string(&rec).expect("serializable")).map_err(io)?;
                }
                fmt => {
                    let st = style(fmt);
                    let taus: Vec<String> = insertions
                        .iter()
                        .map(|(k, m)| match st {
                            Style::Text => format!("tau_{k},{m}"),
                            Style::Latex => format!("\\tau_{{{k},{m}}}"),
                        })
                        .collect();
                    let mut line = match st {
                        Style::Text => format!("<{}>_{genus} = {}", taus.join(" "), render::rational(value, st)),
                        Style::Latex => format!(
                            "\\langle {} \\rangle_{{{genus}}} = {}",
                            taus.join(" "),
                            render::rational(value, st)
                        ),
                    };
                    line.push_str(&format!("  (|value| = {}, sign {}, {convention})", value.abs(), sign_of(value)));
                    if let Some(x) = c.extrapolated(sign) {
                        line.push_str(&format!("  extrapolated = {x}"));
                    }
                    writeln!(out, "{line}").map_err(io)?;
                    if let Some(d) = &c.diagnostic {
                        let _ = writeln!(err, "note: {d}");
                    }
                }
            }
        }
        Command::Selfcheck { max_weight, seed } => {
            let outcomes = selfcheck::run_all(*max_weight, *seed);
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            for o in &outcomes {
                let tag = if o.passed { "PASS" } else { "FAIL" };
                writeln!(out, "{tag} {}: {}", o.name, o.detail).map_err(io)?;
            }
            writeln!(out, "{} suites, {failed} failed", outcomes.len()).map_err(io)?;
            return Ok(if failed == 0 { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn sign_of(v: &Rational) -> i32 {
    if v.is_zero() {
        0
    } else if v.is_negative() {
        -1
    } else {
        1
    }
}

/// Parses `argv` (program name first) and runs the command. Returns the exit
/// code: 0 success, 2 usage or domain error, 1 invariant violation.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return if code == 0 { 0 } else { 2 };
        }
    };
    // Buffered so the pool's closure owns nothing thread-bound.
    let (mut obuf, mut ebuf) = (Vec::new(), Vec::new());
    let result = match cli.workers {
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w as usize).build() {
            Ok(pool) => pool.install(|| execute(&cli, &mut obuf, &mut ebuf)),
            Err(e) => Err(Error::Domain(format!("--workers: {e}"))),
        },
        None => execute(&cli, &mut obuf, &mut ebuf),
    };
    let _ = out.write_all(&obuf);
    let _ = err.write_all(&ebuf);
    match result {
        Ok(code) => code,
        Err(e @ Error::Invariant(_)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
