use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use betafibre_affine::{
    certify_delta, fibre_interval, hare_sidorov, point_in_fibre_rational, render_attractor, word_string, write_csv,
    AffineParams, DeltaCertificate, DeltaSearch, Raster, RenderMode,
};
use betafibre_expansion::{Alphabet, CanonicalIntervals};
use betafibre_frequency::{
    accumulation_expansion, frequency_expansion, hybrid_expansion, simply_normal_expansion, slow_growth_constant,
    slow_growth_expansion, window, ExpansionStream, GrowthFunction, Schedule,
};
use betafibre_numerics::interval::parse_decimal;
use betafibre_numerics::{BetaValue, RInterval};
use betafibre_synthesis::{build_partition_table, constants_from_table};
use betafibre_thuemorse::{base_ladder, dim_lower_bound, komornik_loreti, multinacci, multinacci_poly, quasi_greedy};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::args::{Cli, Command, ExpandArgs, ExpandKind, Format, Mode, RenderArgs, SearchArgs};
use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;
const DECIMALS: u32 = 20;

pub fn parse_beta(spec: &str) -> Result<BetaValue> {
    Ok(BetaValue::parse(spec)?)
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    Ok(parse_decimal(s)?)
}

fn iv(x: &RInterval) -> Value {
    json!([x.lo_decimal(DECIMALS), x.hi_decimal(DECIMALS)])
}

fn pair(p: &(RInterval, RInterval)) -> Value {
    json!({ "lo": iv(&p.0), "hi": iv(&p.1) })
}

fn beta_json(b: &BetaValue) -> Value {
    json!({ "definition": b.spec(), "enclosure": iv(&b.enclosure()) })
}

/// Run a parsed command line, writing to `--out` or to `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    match &cli.out {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            execute(&cli.command, &mut w)?;
            w.flush()?;
            Ok(())
        }
        None => execute(&cli.command, stdout),
    }
}

fn emit(v: &Value, out: &mut dyn Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn execute(cmd: &Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Constants { beta, alphabet } => emit(&constants_json(&parse_beta(beta)?, alphabet)?, out),
        Command::Table { beta, alphabet } => {
            let t = build_partition_table(&parse_beta(beta)?, Alphabet::parse(alphabet)?)?;
            emit(&t.to_json(), out)
        }
        Command::Expand(a) => expand(a, out),
        Command::Kl { bits } => emit(&kl_json(*bits)?, out),
        Command::Multinacci { n, len } => {
            let b = multinacci(*n)?;
            let len = len.unwrap_or(4 * (*n as usize + 1));
            let alpha: String = quasi_greedy(&b, len)?.iter().map(|d| char::from(b'0' + d)).collect();
            emit(
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "n": n,
                    "polynomial": multinacci_poly(*n).to_string(),
                    "beta": beta_json(&b),
                    "quasi_greedy_prefix": alpha,
                }),
                out,
            )
        }
        Command::Ladder { m } => {
            let l = base_ladder(*m)?;
            let rungs: Vec<Value> = l
                .rungs
                .iter()
                .enumerate()
                .map(|(i, b)| json!({ "m": i + 1, "beta": beta_json(b) }))
                .collect();
            emit(&json!({ "schema_version": SCHEMA_VERSION, "rungs": rungs }), out)
        }
        Command::Dim { k, beta } => {
            let b = parse_beta(beta)?;
            let d = dim_lower_bound(*k, &b)?;
            emit(
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "k": d.k,
                    "beta": beta_json(&b),
                    "count": d.count.to_string(),
                    "bound": iv(&d.value),
                }),
                out,
            )
        }
        Command::Delta { beta1, search } => {
            let cert = delta_certificate(&parse_beta(beta1)?, search)?;
            emit(&cert.to_json(), out)
        }
        Command::Fibre { beta1, beta2, beta3, x, y, digits, search } => {
            let params = AffineParams::parse(beta1, beta2, beta3)?;
            let cert = delta_certificate(&params.beta1, search)?;
            let x = parse_rational(x)?;
            let f = fibre_interval(&params, &x, &cert)?;
            let mut v = f.to_json();
            if let Some(y) = y {
                let w = point_in_fibre_rational(&f, &parse_rational(y)?, *digits)?;
                v["y"] = json!(y);
                v["lambda"] = json!(word_string(w.maps()));
            }
            emit(&v, out)
        }
        Command::Render(a) => render(a, out),
        Command::Hs { beta1, beta2 } => {
            let (b1, b2) = (parse_beta(beta1)?, parse_beta(beta2)?);
            let (verdict, value) = hare_sidorov(&b1, &b2)?;
            emit(
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "beta1": beta_json(&b1),
                    "beta2": beta_json(&b2),
                    "value": iv(&value),
                    "verdict": verdict.name(),
                }),
                out,
            )
        }
    }
}

pub fn constants_json(beta: &BetaValue, alphabet: &str) -> Result<Value> {
    let ci = CanonicalIntervals::new(beta, Alphabet::parse(alphabet)?)?;
    let table = build_partition_table(beta, Alphabet::ZeroOne)?;
    let c = constants_from_table(&table)?;
    let (lo, hi) = window(c.n);
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "beta": beta_json(beta),
        "alphabet": ci.alphabet.name(),
        "intervals": {
            "I": pair(&ci.i),
            "S": pair(&ci.s),
            "O": pair(&ci.o),
            "cal_I": pair(&ci.cal_i),
            "cal_J": pair(&ci.cal_j),
        },
        "constants": {
            "delta": iv(&c.delta),
            "delta_prime": iv(&c.delta_prime),
            "n1": c.n1,
            "n2": c.n2,
            "n_beta": c.n,
            "c": c.c().to_string(),
        },
        "frequency_window": [lo.to_string(), hi.to_string()],
    }))
}

pub fn kl_json(bits: u32) -> Result<Value> {
    let kl = komornik_loreti();
    let e = kl.enclose_bits(bits)?;
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "bits": bits,
        "enclosure": iv(&e),
        "width": e.width_f64(),
    }))
}

pub fn search_of(a: &SearchArgs) -> Result<DeltaSearch> {
    Ok(match &a.grid_step {
        Some(step) => DeltaSearch::Grid { step: parse_rational(step)?, max: parse_rational(&a.grid_max)? },
        None => DeltaSearch::Bisection { hi: parse_rational(&a.bisect_hi)?, iterations: a.bisect_iterations },
    })
}

fn delta_certificate(beta1: &BetaValue, a: &SearchArgs) -> Result<DeltaCertificate> {
    Ok(certify_delta(beta1, &search_of(a)?, &parse_rational(&a.c_threshold)?)?)
}

fn growth_of(s: &str) -> Result<GrowthFunction> {
    let bad = || CliError::Domain(format!("bad growth function '{s}'"));
    if s == "sqrt" {
        return Ok(GrowthFunction::sqrt());
    }
    if let Some(scale) = s.strip_prefix("linear:") {
        return Ok(GrowthFunction::linear(parse_rational(scale)?));
    }
    if let Some(e) = s.strip_prefix("pow:") {
        let (n, d) = e.split_once('/').ok_or_else(bad)?;
        let num = n.trim().parse().map_err(|_| bad())?;
        let den = d.trim().parse().map_err(|_| bad())?;
        return Ok(GrowthFunction::Power { num, den, scale: BigRational::from_integer(1.into()) });
    }
    Err(bad())
}

/// The stream for an `expand` invocation, before any digits are generated.
pub fn expansion_stream(a: &ExpandArgs) -> Result<ExpansionStream> {
    let beta = parse_beta(&a.beta)?;
    let x = parse_rational(&a.x)?;
    let alphabet = Alphabet::parse(&a.alphabet)?;
    Ok(match a.kind {
        ExpandKind::Freq => {
            let p = a.p.as_deref().ok_or_else(|| CliError::Domain("freq needs --p".into()))?;
            frequency_expansion(&x, &beta, &parse_rational(p)?, alphabet)?
        }
        ExpandKind::Accum => {
            let schedule = match &a.targets {
                Some(t) => Schedule::Cycle(t.split(',').map(parse_rational).collect::<Result<_>>()?),
                None => Schedule::Dyadic,
            };
            accumulation_expansion(&x, &beta, schedule, alphabet)?
        }
        ExpandKind::Normal => simply_normal_expansion(&x, &beta)?,
        ExpandKind::Hybrid => hybrid_expansion(&x, &beta)?,
        ExpandKind::Slowgrowth => slow_growth_expansion(&x, &beta, growth_of(&a.growth)?)?,
    })
}

fn expand(a: &ExpandArgs, out: &mut dyn Write) -> Result<()> {
    let mut s = expansion_stream(a)?;
    s.generate(a.n)?;
    s.write_digits(a.n, &mut &mut *out)?;
    if let Some(p) = &a.log {
        write_log(&s, a, p)?;
    }
    Ok(())
}

fn write_log(s: &ExpansionStream, a: &ExpandArgs, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let mut head = json!({
        "schema_version": SCHEMA_VERSION,
        "generator": s.kind().name(),
        "beta": beta_json(s.beta()),
        "alphabet": s.alphabet().name(),
        "x": a.x,
        "digits": a.n,
        "lambda0_len": s.lambda0_len(),
    });
    if a.kind == ExpandKind::Slowgrowth {
        let n = build_partition_table(s.beta(), Alphabet::PlusMinus)?.n_beta;
        head["bound_constant"] = json!(slow_growth_constant(n));
    }
    writeln!(w, "{head}")?;
    s.write_certificates(a.n, &mut w)?;
    w.flush()?;
    Ok(())
}

fn render(a: &RenderArgs, out: &mut dyn Write) -> Result<()> {
    let params = AffineParams::parse(&a.beta1, &a.beta2, &a.beta3)?;
    let mode = match a.mode {
        Mode::Chaos => RenderMode::Chaos { seed: a.seed, n_points: a.points },
        Mode::Depth => RenderMode::Depth { n_digits: a.depth },
    };
    let pts = render_attractor(&params, mode)?;
    match a.format {
        Format::Csv => write_csv(&pts, &mut &mut *out)?,
        Format::Pgm => Raster::from_points(&params, &pts, a.width, a.height).write_pgm(&mut &mut *out)?,
    }
    Ok(())
}
