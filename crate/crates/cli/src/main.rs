use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hyperlab_core::classify::{evaluate, replay, Property};
use hyperlab_core::harness::config::{parse_int_list, ring_tables};
use hyperlab_core::harness::{
    parse_ring, run_golden_examples, run_theorem_suite, ConfigError, Record, Report, RingFamilySpec,
};
use hyperlab_core::zphi::{self, PrincipalIdeal, Variant, ZPhiRing};
use hyperlab_core::{
    validate_hyperring, FiniteHyperring, HyperIdeal, RingContext, UVParams, Verdict, Witness,
};

const WORKERS_ENV: &str = "HYPERLAB_WORKERS";

#[derive(Parser)]
#[command(
    name = "hyperlab",
    version,
    about = "Finite multiplicative hyperrings and their hyperideals"
)]
struct Cli {
    #[command(flatten)]
    out: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Emit line-delimited JSON records instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Record wall time per verdict.
    #[arg(long, global = true)]
    timing: bool,
    /// List every verdict record in text output.
    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the hyperring laws on a ring.
    Validate {
        #[arg(long)]
        ring: String,
    },
    /// List every hyperideal with its classification.
    Ideals {
        #[arg(long)]
        ring: String,
    },
    /// Decide one property of one hyperideal.
    Check(CheckArgs),
    /// Run the theorem suite over a ring family.
    Sweep(SweepArgs),
    /// Bounded checks on a principal ideal of Z with a multiplier set.
    Zphi(ZphiArgs),
    /// Replay the reference integer computations.
    Golden,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    ring: String,
    /// Members of the hyperideal, comma separated.
    #[arg(long)]
    ideal: String,
    #[arg(long, value_parser = parse_property)]
    prop: Property,
    #[arg(long)]
    u: Option<usize>,
    #[arg(long)]
    v: Option<usize>,
    /// The ideal I for uv-i-primary.
    #[arg(long = "i-ideal", value_name = "LIST")]
    i_ideal: Option<String>,
    /// Re-check a witness such as "2,2|3" instead of searching.
    #[arg(long, value_name = "WITNESS")]
    replay: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    /// TOML family file; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_name = "LIST")]
    moduli: Option<String>,
    #[arg(long = "phi-sizes", value_name = "LIST")]
    phi_sizes: Option<String>,
    #[arg(long = "u-max")]
    u_max: Option<usize>,
    /// Leave out per-verdict records; tallies and violations remain.
    #[arg(long = "no-records")]
    no_records: bool,
}

#[derive(Args)]
struct ZphiArgs {
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    phi: String,
    #[arg(long)]
    d: i64,
    #[arg(long, value_parser = ["uv-primary", "uv-prime"])]
    prop: String,
    #[arg(long)]
    u: usize,
    #[arg(long)]
    v: usize,
    #[arg(long, default_value_t = 10)]
    window: i64,
    /// Re-check a witness such as "2,2|3" instead of searching.
    #[arg(long, value_name = "WITNESS", allow_hyphen_values = true)]
    replay: Option<String>,
}

fn parse_property(s: &str) -> Result<Property, String> {
    Property::parse(s).ok_or_else(|| {
        let names: Vec<&str> = Property::ALL.iter().map(Property::name).collect();
        format!("unknown property; expected one of {}", names.join(", "))
    })
}

/// Why a command stopped, mapped onto exit codes.
enum Failure {
    Usage(String),
    Structural(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Ring(_) | ConfigError::SizeMismatch { .. } => {
                Failure::Structural(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

/// Rendered output and whether it contains a violation or failed verdict.
struct Outcome {
    text: String,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(f) = configure_workers() {
        return report_failure(f);
    }
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(f) => return report_failure(f),
    };
    let written = match &cli.out.out {
        Some(path) => std::fs::write(path, &outcome.text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout()
            .lock()
            .write_all(outcome.text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(if outcome.ok { 0 } else { 1 })
}

fn report_failure(f: Failure) -> ExitCode {
    match f {
        Failure::Usage(m) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Failure::Structural(m) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn configure_workers() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        usage(format!(
            "{WORKERS_ENV} must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(usage)
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let o = &cli.out;
    match &cli.command {
        Command::Validate { ring } => validate(ring, o),
        Command::Ideals { ring } => ideals(ring, o),
        Command::Check(args) => check(args, o),
        Command::Sweep(args) => sweep(args, o),
        Command::Zphi(args) => zphi_check(args, o),
        Command::Golden => Ok(render(run_golden_examples(), o.json, o.verbose)),
    }
}

fn render(report: Report, json: bool, verbose: bool) -> Outcome {
    let text = if json {
        report.to_json_lines()
    } else {
        report.to_text(verbose)
    };
    Outcome {
        text,
        ok: report.passed(),
    }
}

fn json_line<T: Serialize>(out: &mut String, row: &T) {
    out.push_str(&serde_json::to_string(row).expect("rows serialize"));
    out.push('\n');
}

fn validate(spec: &str, o: &OutputArgs) -> Result<Outcome, Failure> {
    let (tables, label) = ring_tables(spec)?;
    let report = validate_hyperring(&tables).map_err(|e| Failure::Structural(e.to_string()))?;
    let identities = if report.passed() {
        FiniteHyperring::from_tables(&tables, &label)
            .ok()
            .map(|r| r.unit_report().identities.to_vec())
    } else {
        None
    };
    let mut text = String::new();
    if o.json {
        #[derive(Serialize)]
        struct Row<'a> {
            kind: &'static str,
            ring: &'a str,
            passed: bool,
            #[serde(flatten)]
            report: &'a hyperlab_core::ValidationReport,
            identities: Option<Vec<usize>>,
        }
        json_line(
            &mut text,
            &Row {
                kind: "validation",
                ring: &label,
                passed: report.passed(),
                report: &report,
                identities,
            },
        );
    } else {
        let _ = writeln!(text, "== validate {label} ({} elements)", report.n);
        for v in &report.violations {
            let _ = writeln!(text, "VIOLATION {} at {:?}", v.axiom, v.witness);
        }
        let _ = writeln!(
            text,
            "strongly distributive: {}",
            report.strongly_distributive
        );
        if let Some(w) = &report.strict_distributivity_witness {
            let _ = writeln!(text, "strict inclusion at {w:?}");
        }
        if let Some(ids) = &identities {
            let _ = writeln!(text, "identities: {ids:?}");
        }
        let _ = writeln!(text, "{}", if report.passed() { "PASS" } else { "FAIL" });
    }
    Ok(Outcome {
        text,
        ok: report.passed(),
    })
}

fn ideals(spec: &str, o: &OutputArgs) -> Result<Outcome, Failure> {
    let ctx = RingContext::new(parse_ring(spec)?);
    let lattice = ctx.lattice();
    #[derive(Serialize)]
    struct Row {
        kind: &'static str,
        ring: String,
        ideal: String,
        proper: bool,
        prime: bool,
        maximal: bool,
        c: bool,
        strong_c: bool,
        rad: String,
        rad_nilpotent: String,
    }
    let rows: Vec<Row> = lattice
        .all
        .iter()
        .enumerate()
        .map(|(k, i)| Row {
            kind: "ideal",
            ring: ctx.ring.label().to_string(),
            ideal: i.members().to_string(),
            proper: i.is_proper(&ctx.ring),
            prime: lattice.primes.contains(&k),
            maximal: lattice.maximals.contains(&k),
            c: ctx.is_c(i.members()).is_holds(),
            strong_c: ctx.is_strong_c(i.members()).is_holds(),
            rad: ctx.rad(i.members()).to_string(),
            rad_nilpotent: ctx.rad_nilpotent(i.members()).to_string(),
        })
        .collect();
    let mut text = String::new();
    if o.json {
        for r in &rows {
            json_line(&mut text, r);
        }
    } else {
        let _ = writeln!(
            text,
            "== hyperideals of {} ({} found, identities {})",
            ctx.ring.label(),
            rows.len(),
            ctx.units.identities
        );
        for r in &rows {
            let mut tags = Vec::new();
            for (on, tag) in [
                (r.prime, "prime"),
                (r.maximal, "maximal"),
                (r.c, "C"),
                (r.strong_c, "strong-C"),
            ] {
                if on {
                    tags.push(tag);
                }
            }
            let _ = writeln!(
                text,
                "{:<24} rad {:<16} nil-rad {:<16} {}",
                r.ideal,
                r.rad,
                r.rad_nilpotent,
                tags.join(" ")
            );
        }
    }
    Ok(Outcome { text, ok: true })
}

fn uv_params(u: Option<usize>, v: Option<usize>) -> Result<Option<UVParams>, Failure> {
    match (u, v) {
        (Some(u), Some(v)) => UVParams::new(u, v).map(Some).map_err(usage),
        (None, None) => Ok(None),
        _ => Err(usage("--u and --v go together")),
    }
}

fn element_list(ring: &FiniteHyperring, list: &str) -> Result<Vec<usize>, Failure> {
    parse_int_list(list)?
        .into_iter()
        .map(|x| {
            usize::try_from(x)
                .ok()
                .filter(|&x| x < ring.size())
                .ok_or_else(|| usage(format!("{x} is not an element of {}", ring.label())))
        })
        .collect()
}

fn hyperideal(ring: &FiniteHyperring, list: &str) -> Result<HyperIdeal, Failure> {
    let members = ring.set_of(element_list(ring, list)?);
    HyperIdeal::new(ring, members).map_err(usage)
}

/// `"2,2|3"` → parts `[[2,2],[3]]`.
fn parse_witness(s: &str) -> Result<Witness, Failure> {
    let parts = s
        .split('|')
        .map(parse_int_list)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Witness::new(parts, "replayed"))
}

fn replay_outcome(header: String, reproduced: bool, o: &OutputArgs) -> Outcome {
    let mut text = String::new();
    if o.json {
        #[derive(Serialize)]
        struct Row {
            kind: &'static str,
            check: String,
            reproduced: bool,
        }
        json_line(
            &mut text,
            &Row {
                kind: "replay",
                check: header,
                reproduced,
            },
        );
    } else {
        let verdict = if reproduced {
            "failure reproduced"
        } else {
            "witness does not show a failure"
        };
        let _ = writeln!(text, "{header}: {verdict}");
    }
    // A reproduced failure is a failed verdict.
    Outcome {
        text,
        ok: !reproduced,
    }
}

/// One verdict record; a failed verdict sets exit status 1.
fn single(record: &Record, verdict: &Verdict, o: &OutputArgs) -> Outcome {
    let mut text = String::new();
    if o.json {
        #[derive(Serialize)]
        struct Row<'a> {
            kind: &'static str,
            #[serde(flatten)]
            record: &'a Record,
        }
        json_line(
            &mut text,
            &Row {
                kind: "verdict",
                record,
            },
        );
    } else {
        let _ = writeln!(text, "{record}");
    }
    Outcome {
        text,
        ok: !verdict.is_fails(),
    }
}

fn check(args: &CheckArgs, o: &OutputArgs) -> Result<Outcome, Failure> {
    let ctx = RingContext::new(parse_ring(&args.ring)?);
    let p = hyperideal(&ctx.ring, &args.ideal)?;
    let uv = uv_params(args.u, args.v)?;
    if args.prop.needs_uv() && uv.is_none() {
        return Err(usage(format!("{} needs --u and --v", args.prop.name())));
    }
    let i = args
        .i_ideal
        .as_deref()
        .map(|l| hyperideal(&ctx.ring, l))
        .transpose()?;
    let params = uv.map(|uv| uv.to_string()).unwrap_or_default();
    let ideal_name = p.members().to_string();
    if let Some(w) = &args.replay {
        let witness = parse_witness(w)?;
        let reproduced = replay(&ctx, &p, args.prop, i.as_ref(), &witness);
        let header = format!(
            "{} {} {}{} witness {}",
            ctx.ring.label(),
            ideal_name,
            args.prop.name(),
            params,
            w
        );
        return Ok(replay_outcome(header, reproduced, o));
    }
    let start = Instant::now();
    let verdict = evaluate(&ctx, &p, args.prop, uv, i.as_ref()).map_err(usage)?;
    let mut record = Record::from_verdict(
        ctx.ring.label(),
        ideal_name,
        args.prop.name(),
        params,
        &verdict,
    );
    record.millis = o.timing.then(|| start.elapsed().as_millis() as u64);
    Ok(single(&record, &verdict, o))
}

fn sweep(args: &SweepArgs, o: &OutputArgs) -> Result<Outcome, Failure> {
    let mut spec = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            RingFamilySpec::from_toml(&text)?
        }
        None => RingFamilySpec::default(),
    };
    if let Some(m) = &args.moduli {
        spec.moduli = to_usizes(m)?;
    }
    if let Some(s) = &args.phi_sizes {
        spec.phi_sizes = to_usizes(s)?;
    }
    if let Some(u) = args.u_max {
        spec.u_max = u;
    }
    if args.no_records {
        spec.records = false;
    }
    spec.timing |= o.timing;
    let report = run_theorem_suite(&spec)?;
    Ok(render(report, o.json, o.verbose))
}

fn to_usizes(list: &str) -> Result<Vec<usize>, Failure> {
    parse_int_list(list)?
        .into_iter()
        .map(|x| usize::try_from(x).map_err(|_| usage(format!("{x} must be non-negative"))))
        .collect()
}

fn zphi_check(args: &ZphiArgs, o: &OutputArgs) -> Result<Outcome, Failure> {
    let ring = ZPhiRing::new(&parse_int_list(&args.phi)?).map_err(usage)?;
    let ideal = PrincipalIdeal::new(args.d).map_err(usage)?;
    let uv = UVParams::new(args.u, args.v).map_err(usage)?;
    let variant = match args.prop.as_str() {
        "uv-prime" => Variant::Prime,
        _ => Variant::Primary,
    };
    let label = format!("Z with Φ={{{}}}", args.phi);
    let ideal_name = format!("{}Z", ideal.generator());
    if let Some(w) = &args.replay {
        let witness = parse_witness(w)?;
        let reproduced = zphi::replay_witness(&ring, &ideal, variant, &witness);
        let header = format!("{label} {ideal_name} {}{uv} witness {w}", args.prop);
        return Ok(replay_outcome(header, reproduced, o));
    }
    let start = Instant::now();
    let verdict =
        zphi::bounded_uv_primary_check(&ring, &ideal, uv, args.window, variant).map_err(usage)?;
    let mut record = Record::from_verdict(&label, ideal_name, &args.prop, uv.to_string(), &verdict);
    record.millis = o.timing.then(|| start.elapsed().as_millis() as u64);
    Ok(single(&record, &verdict, o))
}
