use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quadapn::analysis::{
    ddt_csv, diff_uniformity_exhaustive, verify, walsh_row, walsh_spectrum, Method,
};
use quadapn::code::{
    build_code, compare_bundles, invariant_bundle_with_budget, DEFAULT_WEIGHT_BUDGET, ROW_LAYOUT,
};
use quadapn::family::{
    construct, known, specialize_n6, validate_params, FamilyParams, KnownFunction, ParamSpace,
};
use quadapn::io::{parse_field_descriptor, parse_hex, parse_spec_file, parse_table};
use quadapn::proof::proofcheck;
use quadapn::workflow::{proof_sweep, reproduce_n6, sample_params, Report};
use quadapn::{Elem, Error, FieldCtx, Result, VBFunction};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "quadapn",
    version,
    about = "Verify and classify quadratic APN functions over GF(2^n)"
)]
struct Cli {
    /// Worker threads for internal parallelism (default: all cores).
    #[arg(long, global = true, env = "QUADAPN_WORKERS")]
    workers: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Both for degree <= 2, exhaustive otherwise.
    Auto,
    Exhaustive,
    Quadratic,
    Both,
}

#[derive(Args, Clone)]
#[group(id = "source", required = true, multiple = false)]
struct Source {
    /// Family parameters, e.g. k=2,s=1,u=0x02,v=0x00,w=0x00.
    #[arg(long, group = "source")]
    params: Option<String>,
    /// Catalog function, e.g. gold:1, dillon:0x07, identity.
    #[arg(long, group = "source")]
    known: Option<String>,
    /// Function-spec JSON file.
    #[arg(long, group = "source")]
    spec: Option<PathBuf>,
    /// Table file, one hex value per line.
    #[arg(long, group = "source")]
    table: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct FunctionArgs {
    /// Field descriptor n=6[,modulus=0x43].
    #[arg(long)]
    field: Option<String>,
    #[command(flatten)]
    source: Source,
}

#[derive(Subcommand)]
enum Command {
    /// Check the APN property.
    Verify {
        #[command(flatten)]
        f: FunctionArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Pass iff the uniformity equals this value instead of 2.
        #[arg(long)]
        expect_uniformity: Option<u32>,
    },
    /// Differential and Walsh spectra.
    Spectrum {
        #[command(flatten)]
        f: FunctionArgs,
        /// Write the DDT as CSV to this file (n <= 8).
        #[arg(long)]
        ddt_csv: Option<PathBuf>,
    },
    /// Walsh spectrum, or one row W(., b) with --b.
    Walsh {
        #[command(flatten)]
        f: FunctionArgs,
        #[arg(long)]
        b: Option<String>,
    },
    /// Invariant bundle with content hash.
    Invariants {
        #[command(flatten)]
        f: FunctionArgs,
        /// Maximum code rank for weight enumeration.
        #[arg(long, default_value_t = DEFAULT_WEIGHT_BUDGET)]
        budget: u32,
        /// Write the code matrix as hex rows to this file.
        #[arg(long)]
        code_hex: Option<PathBuf>,
    },
    /// Compare invariant bundles of two functions.
    Compare {
        #[arg(long)]
        field: Option<String>,
        /// First function: known:<id>, params:<p>, spec:<file> or table:<file>.
        #[arg(long)]
        a: String,
        /// Second function, same syntax.
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = DEFAULT_WEIGHT_BUDGET)]
        budget: u32,
    },
    /// Stream every valid tuple for (k, s) as JSON lines.
    Enumerate {
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Replay the proof steps for one tuple, or for all/sampled tuples of (k, s).
    Proofcheck {
        #[arg(long)]
        field: Option<String>,
        #[arg(long, conflicts_with_all = ["k", "s"])]
        params: Option<String>,
        #[arg(long, requires = "s")]
        k: Option<u32>,
        #[arg(long, requires = "k")]
        s: Option<u32>,
        /// With --k/--s: number of seeded tuples (0 = all).
        #[arg(long, default_value_t = 0)]
        sample: usize,
        #[arg(long, default_value_t = 50)]
        theta_samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Reproduce the n = 6 classification.
    #[command(name = "reproduce-n6")]
    ReproduceN6,
    /// Field parameters.
    FieldInfo {
        #[arg(long)]
        field: String,
    },
}

/// Result of a command: the report and the exit status.
struct Outcome {
    json: Value,
    text: String,
    csv: Option<String>,
    pass: bool,
}

impl Outcome {
    fn new(json: Value, text: String, pass: bool) -> Self {
        Outcome {
            json,
            text,
            csv: None,
            pass,
        }
    }
}

fn field_of(desc: Option<&str>, default_n: u32) -> Result<Arc<FieldCtx>> {
    Ok(Arc::new(match desc {
        Some(d) => parse_field_descriptor(d)?,
        None => FieldCtx::new(default_n, None)?,
    }))
}

fn check_field(expected: Option<&str>, f: &VBFunction) -> Result<()> {
    if let Some(d) = expected {
        let ctx = parse_field_descriptor(d)?;
        if &ctx != f.field().as_ref() {
            return Err(Error::FieldMismatch {
                expected: ctx.n(),
                actual: f.field().n(),
            });
        }
    }
    Ok(())
}

fn from_params(field: Option<&str>, text: &str) -> Result<(VBFunction, Value)> {
    let p = FamilyParams::from_str(text)?;
    let ctx = field_of(field, p.n())?;
    let report = validate_params(&ctx, &p)?;
    if !report.is_ok() {
        return Err(Error::InvalidParams(report.to_string()));
    }
    Ok((construct(&ctx, &p)?, json!({ "params": p.to_string() })))
}

fn from_known(field: Option<&str>, text: &str) -> Result<(VBFunction, Value)> {
    let id = KnownFunction::from_str(text)?;
    let ctx = field_of(field, 6)?;
    Ok((known(&ctx, id)?, json!({ "known": id.label() })))
}

fn from_spec(field: Option<&str>, path: &PathBuf) -> Result<(VBFunction, Value)> {
    let f = parse_spec_file(&fs::read_to_string(path)?)?;
    check_field(field, &f)?;
    Ok((f, json!({ "spec": path.display().to_string() })))
}

fn from_table(field: Option<&str>, path: &PathBuf) -> Result<(VBFunction, Value)> {
    let text = fs::read_to_string(path)?;
    let ctx = match field {
        Some(d) => Arc::new(parse_field_descriptor(d)?),
        None => {
            let lines = text
                .lines()
                .filter(|l| !l.trim().is_empty() && !l.trim().starts_with('#'))
                .count();
            if !lines.is_power_of_two() {
                return Err(Error::Parse(format!(
                    "table has {lines} entries, not a power of two"
                )));
            }
            Arc::new(FieldCtx::new(lines.trailing_zeros(), None)?)
        }
    };
    Ok((
        parse_table(&ctx, &text)?,
        json!({ "table": path.display().to_string() }),
    ))
}

fn resolve(args: &FunctionArgs) -> Result<(VBFunction, Value)> {
    let field = args.field.as_deref();
    let s = &args.source;
    let (f, mut input) = if let Some(p) = &s.params {
        from_params(field, p)?
    } else if let Some(k) = &s.known {
        from_known(field, k)?
    } else if let Some(path) = &s.spec {
        from_spec(field, path)?
    } else if let Some(path) = &s.table {
        from_table(field, path)?
    } else {
        return Err(Error::Parse("no function source given".into()));
    };
    input["field_arg"] = json!(field);
    Ok((f, input))
}

/// `known:<id>`, `params:<p>`, `spec:<file>` or `table:<file>`.
fn resolve_tagged(field: Option<&str>, text: &str) -> Result<(VBFunction, Value)> {
    let (tag, rest) = text
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("expected <kind>:<value>, got {text:?}")))?;
    match tag {
        "known" => from_known(field, rest),
        "params" => from_params(field, rest),
        "spec" => from_spec(field, &PathBuf::from(rest)),
        "table" => from_table(field, &PathBuf::from(rest)),
        _ => Err(Error::Parse(format!("unknown source kind {tag:?}"))),
    }
}

fn envelope(ctx: &FieldCtx, input: Value, body: Value) -> Value {
    serde_json::to_value(Report::new(ctx, input, body)).expect("report serializes")
}

fn cmd_verify(args: &FunctionArgs, method: MethodArg, expect: Option<u32>) -> Result<Outcome> {
    let (f, mut input) = resolve(args)?;
    let method = match method {
        MethodArg::Auto if f.algebraic_degree() <= 2 => Method::Both,
        MethodArg::Auto | MethodArg::Exhaustive => Method::Exhaustive,
        MethodArg::Quadratic => Method::Quadratic,
        MethodArg::Both => Method::Both,
    };
    let v = verify(&f, method)?;
    let target = expect.unwrap_or(2);
    let pass = v.uniformity == target;
    input["method"] = json!(method);
    input["expect_uniformity"] = json!(expect);
    let text = format!(
        "uniformity {} ({}), {}{}",
        v.uniformity,
        serde_json::to_value(method).unwrap().as_str().unwrap_or(""),
        if v.is_apn() { "APN" } else { "not APN" },
        expect
            .map(|e| format!(", expected {e}: {}", if pass { "ok" } else { "mismatch" }))
            .unwrap_or_default()
    );
    let body = json!({ "verification": v, "apn": v.is_apn(), "pass": pass });
    Ok(Outcome::new(envelope(f.field(), input, body), text, pass))
}

fn cmd_spectrum(args: &FunctionArgs, ddt: Option<&PathBuf>) -> Result<Outcome> {
    let (f, input) = resolve(args)?;
    if let Some(path) = ddt {
        fs::write(path, ddt_csv(&f)?)?;
    }
    let d = diff_uniformity_exhaustive(&f);
    let w = walsh_spectrum(&f);
    let text = format!(
        "uniformity {}\nnonlinearity {}\ndifferential histogram {:?}\nwalsh |W| {:?}",
        d.uniformity, w.nonlinearity, d.histogram, w.values
    );
    let csv = std::iter::once("kind,value,count\n".to_string())
        .chain(d.histogram.iter().map(|(k, c)| format!("ddt,{k},{c}\n")))
        .chain(w.values.iter().map(|(k, c)| format!("walsh,{k},{c}\n")))
        .collect();
    let body = json!({
        "uniformity": d.uniformity,
        "histogram": d.histogram,
        "nonlinearity": w.nonlinearity,
        "walsh_values": w.values,
    });
    let mut out = Outcome::new(envelope(f.field(), input, body), text, true);
    out.csv = Some(csv);
    Ok(out)
}

fn cmd_walsh(args: &FunctionArgs, b: Option<&str>) -> Result<Outcome> {
    let (f, mut input) = resolve(args)?;
    match b {
        Some(b) => {
            let b = f.field().check(Elem(parse_hex(b)?))?;
            input["b"] = json!(b);
            let row = walsh_row(&f, b);
            let csv = std::iter::once("a,w\n".to_string())
                .chain(row.iter().enumerate().map(|(a, w)| format!("{a},{w}\n")))
                .collect();
            let text = format!("W(a, {b}) for a = 0..{}: {:?}", row.len(), row);
            let mut out = Outcome::new(
                envelope(f.field(), input, json!({ "b": b, "row": row })),
                text,
                true,
            );
            out.csv = Some(csv);
            Ok(out)
        }
        None => {
            let w = walsh_spectrum(&f);
            let text = format!(
                "nonlinearity {}\nparseval {}\n|W| {:?}",
                w.nonlinearity, w.parseval, w.values
            );
            let csv = std::iter::once("abs_w,count\n".to_string())
                .chain(w.values.iter().map(|(k, c)| format!("{k},{c}\n")))
                .collect();
            let mut out = Outcome::new(
                envelope(f.field(), input, serde_json::to_value(&w)?),
                text,
                w.parseval,
            );
            out.csv = Some(csv);
            Ok(out)
        }
    }
}

fn cmd_invariants(args: &FunctionArgs, budget: u32, code_hex: Option<&PathBuf>) -> Result<Outcome> {
    let (f, mut input) = resolve(args)?;
    input["budget"] = json!(budget);
    if let Some(path) = code_hex {
        let rows = build_code(&f).to_hex_rows();
        fs::write(path, rows.join("\n") + "\n")?;
    }
    let bundle = invariant_bundle_with_budget(&f, budget)?;
    let hash = bundle.content_hash();
    let text =
        format!(
        "hash {hash}\ncode dimension {}\nuniformity {}\northo-derivative {}\nalgebraic degree {}",
        bundle.code_dimension,
        bundle.diff_spectrum.uniformity,
        if bundle.ortho_derivative.is_some() { "present" } else { "absent" },
        bundle.algebraic_degree
    );
    let body = json!({ "hash": hash, "row_layout": ROW_LAYOUT, "bundle": bundle });
    Ok(Outcome::new(envelope(f.field(), input, body), text, true))
}

fn cmd_compare(field: Option<&str>, a: &str, b: &str, budget: u32) -> Result<Outcome> {
    let (f, ia) = resolve_tagged(field, a)?;
    let (g, ib) = resolve_tagged(field, b)?;
    let ba = invariant_bundle_with_budget(&f, budget)?;
    let bb = invariant_bundle_with_budget(&g, budget)?;
    let verdict = compare_bundles(&ba, &bb)?;
    let text = serde_json::to_string(&verdict)?;
    let input = json!({ "a": ia, "b": ib, "budget": budget });
    let body =
        json!({ "verdict": verdict, "hash_a": ba.content_hash(), "hash_b": bb.content_hash() });
    Ok(Outcome::new(envelope(f.field(), input, body), text, true))
}

fn cmd_enumerate(field: Option<&str>, k: u32, s: u32, limit: Option<usize>) -> Result<String> {
    let ctx = field_of(field, 3 * k)?;
    let space = ParamSpace::new(&ctx, k, s)?;
    let mut out = String::new();
    for p in space.iter().take(limit.unwrap_or(usize::MAX)) {
        let mut line = json!({
            "params": p.to_string(),
            "field": ctx.spec().descriptor(),
            "k": p.k, "s": p.s, "u": p.u, "v": p.v, "w": p.w,
        });
        if let Ok(tag) = specialize_n6(&p) {
            line["form"] = json!(tag);
        }
        out.push_str(&line.to_string());
        out.push('\n');
    }
    Ok(out)
}

struct ProofArgs<'a> {
    field: Option<&'a str>,
    params: Option<&'a str>,
    ks: Option<(u32, u32)>,
    sample: usize,
    theta_samples: usize,
    seed: u64,
}

fn cmd_proofcheck(a: ProofArgs) -> Result<Outcome> {
    let input = json!({
        "params": a.params, "ks": a.ks, "sample": a.sample,
        "theta_samples": a.theta_samples, "seed": a.seed,
    });
    if let Some(text) = a.params {
        let p = FamilyParams::from_str(text)?;
        let ctx = field_of(a.field, p.n())?;
        let report = proofcheck(&ctx, p, a.theta_samples, a.seed)?;
        let pass = report.all_pass();
        let summary = report
            .checks
            .iter()
            .map(|c| {
                format!(
                    "{} {} ({})",
                    if c.pass { "pass" } else { "FAIL" },
                    c.name,
                    c.instances
                )
            })
            .collect::<Vec<_>>()
            .join("\n");
        return Ok(Outcome::new(
            envelope(&ctx, input, serde_json::to_value(&report)?),
            summary,
            pass,
        ));
    }
    let (k, s) =
        a.ks.ok_or_else(|| Error::Parse("proofcheck needs --params or --k/--s".into()))?;
    let ctx = field_of(a.field, 3 * k)?;
    let space = ParamSpace::new(&ctx, k, s)?;
    let params = if a.sample == 0 {
        space.iter().collect()
    } else {
        sample_params(&space, a.sample, a.seed)
    };
    let sweep = proof_sweep(&ctx, &params, a.theta_samples, a.seed)?;
    let pass = sweep.all_pass();
    let text = format!(
        "{} tuples, {} with failing checks",
        sweep.tuples,
        sweep.failures.len()
    );
    Ok(Outcome::new(
        envelope(&ctx, input, serde_json::to_value(&sweep)?),
        text,
        pass,
    ))
}

fn cmd_reproduce() -> Result<Outcome> {
    let report = reproduce_n6()?;
    let b = &report.body;
    let mut text = format!(
        "{} tuples, {} APN by both methods\n",
        b.sweep.tuples, b.sweep.apn
    );
    for f in &b.forms {
        text += &format!(
            "{:<13} {:>3} tuples  exponents {:?}  bundle classes {}\n",
            f.form.name(),
            f.tuples,
            f.observed_exponents,
            f.bundle_hashes.len()
        );
    }
    let us: Vec<String> = b.dillon.apn_u.iter().map(|u| u.to_string()).collect();
    text += &format!(
        "APN u for x^3+x^10+ux^24: {}, using {}\n",
        us.join(" "),
        b.dillon.chosen
    );
    text += &format!(
        "binomial witness L = {:?} (invertible {}, {} points verified, found for {}/{})\n",
        b.binomial_witness.rows,
        b.binomial_witness.invertible,
        b.binomial_witness.verified_points,
        b.binomial_witness.found_for,
        b.binomial_witness.binomial_tuples
    );
    for v in &b.verdicts {
        text += &format!(
            "{} vs {}: claim {:?}, {}, {}\n",
            v.subject,
            v.reference,
            v.claim,
            serde_json::to_string(&v.verdict)?,
            if v.consistent {
                "consistent"
            } else {
                "INCONSISTENT"
            }
        );
    }
    text += if b.all_consistent {
        "all consistent"
    } else {
        "inconsistencies found"
    };
    let pass = b.all_consistent;
    Ok(Outcome::new(serde_json::to_value(&report)?, text, pass))
}

fn cmd_field_info(desc: &str) -> Result<Outcome> {
    let ctx = parse_field_descriptor(desc)?;
    let subfields: Vec<u32> = (1..=ctx.n()).filter(|d| ctx.n() % d == 0).collect();
    let body = json!({
        "size": ctx.size(),
        "order": ctx.order(),
        "order_factors": ctx.group_order_factors(),
        "generator": ctx.generator(),
        "primitive_elements": ctx.primitive_elements().count(),
        "trace_mask": format!("0x{:X}", ctx.trace_mask()),
        "subfield_degrees": subfields,
    });
    let text = format!(
        "GF(2^{}) modulus 0x{:X}, generator {}, {} primitive elements, 2^n-1 = {} = {:?}",
        ctx.n(),
        ctx.spec().modulus,
        ctx.generator(),
        ctx.primitive_elements().count(),
        ctx.order(),
        ctx.group_order_factors()
    );
    Ok(Outcome::new(
        envelope(&ctx, json!({ "field": desc }), body),
        text,
        true,
    ))
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Verify {
            f,
            method,
            expect_uniformity,
        } => cmd_verify(f, *method, *expect_uniformity),
        Command::Spectrum { f, ddt_csv } => cmd_spectrum(f, ddt_csv.as_ref()),
        Command::Walsh { f, b } => cmd_walsh(f, b.as_deref()),
        Command::Invariants {
            f,
            budget,
            code_hex,
        } => cmd_invariants(f, *budget, code_hex.as_ref()),
        Command::Compare {
            field,
            a,
            b,
            budget,
        } => cmd_compare(field.as_deref(), a, b, *budget),
        Command::Enumerate { .. } => unreachable!("streamed separately"),
        Command::Proofcheck {
            field,
            params,
            k,
            s,
            sample,
            theta_samples,
            seed,
        } => cmd_proofcheck(ProofArgs {
            field: field.as_deref(),
            params: params.as_deref(),
            ks: k.zip(*s),
            sample: *sample,
            theta_samples: *theta_samples,
            seed: *seed,
        }),
        Command::ReproduceN6 => cmd_reproduce(),
        Command::FieldInfo { field } => cmd_field_info(field),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut stdout = std::io::stdout().lock();
    if let Command::Enumerate { field, k, s, limit } = &cli.command {
        return match cmd_enumerate(field.as_deref(), *k, *s, *limit) {
            Ok(lines) => {
                let _ = stdout.write_all(lines.as_bytes());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        };
    }
    match run(&cli) {
        Ok(out) => {
            let rendered = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("json"),
                Format::Text => out.text,
                Format::Csv => match out.csv {
                    Some(c) => c.trim_end().to_string(),
                    None => {
                        eprintln!("error: csv output is not available for this command");
                        return ExitCode::from(2);
                    }
                },
            };
            let _ = writeln!(stdout, "{rendered}");
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
