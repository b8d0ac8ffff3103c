use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use unigroup::cases::{run_case, TableCase};
use unigroup::exactnum::{QuadField, QuadraticRational};
use unigroup::modelset::{macbeath_data, CutProjectScheme, Overlap, WindowSet};
use unigroup::pointset::{LengthFunction, PointSet1D};
use unigroup::presentation::tietze_simplify;
use unigroup::sequences::{factor_language, two_sided_window, SequenceSpec};
use unigroup::universal::{maxset_presentation, universal_group_sl, MaxsetSource};
use unigroup::verify::{run_suite, Suite, VerifyConfig};

#[derive(Parser)]
#[command(name = "unigroup", version, about = "Inverse semigroups of point sets and tilings, and their universal groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump a model set or a tiling window as exact points.
    Generate(GenerateArgs),
    /// Present the universal group of a reference case.
    Present(PresentArgs),
    /// Run property suites; exit status 1 if any check fails.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Output {
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print a plain-text summary instead of JSON.
    #[arg(long)]
    text: bool,
}

#[derive(Args)]
struct GenerateArgs {
    /// Cut-and-project scheme JSON: {"v1", "v2", "window"}.
    #[arg(long, conflicts_with_all = ["periodic", "splice", "fibonacci"])]
    spec: Option<PathBuf>,
    #[arg(long)]
    periodic: Option<String>,
    /// Left and right words, as `a,b` for ...aaa|bbb...
    #[arg(long)]
    splice: Option<String>,
    #[arg(long)]
    fibonacci: bool,
    /// Tile lengths, e.g. `a=2,b=1` or `a=1/2 + 1/2*sqrt(5),b=1`.
    #[arg(long)]
    lengths: Option<String>,
    #[arg(long, default_value_t = 50)]
    radius: i64,
    #[arg(long, default_value_t = 10)]
    half_width: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct PresentArgs {
    /// fib, periodic-ab-2-1, splice-irrational or splice-rational-3-2.
    #[arg(long, required_unless_present = "macbeath")]
    case: Option<TableCase>,
    #[arg(long)]
    half_width: Option<usize>,
    #[arg(long)]
    max_len: Option<usize>,
    /// Also report the rank of the free universal group of S(L).
    #[arg(long)]
    sl: bool,
    /// Add the abelian invariants of the (D − D, ⊕) table up to this bound.
    #[arg(long)]
    oplus_bound: Option<i64>,
    /// Macbeath data of V = [0, 1] in ℤ + ℤτ instead of a case.
    #[arg(long, conflicts_with = "case")]
    macbeath: bool,
    #[arg(long, default_value_t = 3)]
    coeff_bound: i64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run (repeatable); all suites when omitted.
    #[arg(long)]
    suite: Vec<Suite>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    pairs: usize,
    #[arg(long, default_value_t = 50)]
    radius: i64,
    /// Lattice box for brute-force empire comparison.
    #[arg(long, default_value_t = 60)]
    coeff_bound: i64,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[command(flatten)]
    output: Output,
}

fn emit(output: &Output, value: &Value, text: impl FnOnce() -> String) -> Result<()> {
    let body = if output.text { text() } else { serde_json::to_string_pretty(value)? };
    match &output.out {
        Some(path) => fs::write(path, body + "\n").with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

/// Lengths in the field of the first irrational value.
fn parse_lengths(text: &str) -> Result<LengthFunction> {
    let mut field = QuadField::rationals();
    for part in text.split(',') {
        let (_, v) = part.split_once('=').with_context(|| format!("expected letter=length, got {part:?}"))?;
        let v: QuadraticRational = v.trim().parse().with_context(|| format!("bad length {v:?}"))?;
        if !v.is_rational() {
            field = v.field();
            break;
        }
    }
    Ok(LengthFunction::parse(text, field)?)
}

fn generate(args: &GenerateArgs) -> Result<bool> {
    if let Some(path) = &args.spec {
        let raw = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let scheme: CutProjectScheme = serde_json::from_str(&raw).with_context(|| format!("invalid scheme in {}", path.display()))?;
        let ps = scheme.generate(&scheme.field().int(args.radius))?;
        let v = json!({ "kind": "model-set", "radius": args.radius, "pointset": ps.to_json() });
        emit(&args.output, &v, || format!("model set, radius {}: {} points", args.radius, ps.len()))?;
        return Ok(true);
    }
    let seq = match (&args.periodic, &args.splice, args.fibonacci) {
        (Some(w), None, false) => SequenceSpec::periodic(w),
        (None, Some(s), false) => {
            let (l, r) = s.split_once(',').context("--splice takes LEFT,RIGHT")?;
            SequenceSpec::spliced(l, r)
        }
        (None, None, true) => SequenceSpec::fibonacci(),
        _ => bail!("give exactly one of --spec, --periodic, --splice, --fibonacci"),
    };
    let lengths = match &args.lengths {
        Some(t) => parse_lengths(t)?,
        None if args.fibonacci => parse_lengths("a=1/2 + 1/2*sqrt(5),b=1")?,
        None => bail!("--lengths is required for this source"),
    };
    let word = two_sided_window(&seq, args.half_width)?;
    let zero = lengths.field().context("no lengths")?.zero();
    let ps = PointSet1D::build(&word, &lengths, &zero)?;
    let v = json!({
        "kind": "tiling-window",
        "half_width": args.half_width,
        "start_index": word.start_index,
        "word": word.word(),
        "gaps": ps.gaps().len(),
        "lengths": lengths,
        "pointset": ps.to_json(),
    });
    emit(&args.output, &v, || format!("window {} ({} gaps), {} points", word.word(), ps.gaps().len(), ps.len()))?;
    Ok(true)
}

fn present(args: &PresentArgs) -> Result<bool> {
    if args.macbeath {
        let g = QuadField::golden();
        let v = WindowSet::interval(g.zero(), g.one())?;
        let data = macbeath_data((&g.one(), &g.tau()), &v, args.coeff_bound, Overlap::Interior)?;
        let p = tietze_simplify(&maxset_presentation(MaxsetSource::Macbeath(&data))?, 10_000);
        let (free, torsion) = p.abelian_invariants();
        let value = json!({
            "kind": "macbeath",
            "coeff_bound": args.coeff_bound,
            "generators": data.generators.len(),
            "relations": data.relations.len(),
            "abelian_invariants": { "free_rank": free, "torsion": torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>() },
        });
        emit(&args.output, &value, || format!("Macbeath, bound {}: ℤ^{free}, torsion {torsion:?}", args.coeff_bound))?;
        return Ok(true);
    }
    let case = args.case.context("--case is required")?;
    let (dh, dn) = case.truncation();
    let (h, n) = (args.half_width.unwrap_or(dh), args.max_len.unwrap_or(dn));
    let report = run_case(case, h, n)?;
    let mut value = serde_json::to_value(&report)?;
    if args.sl {
        let lang = factor_language(&two_sided_window(&case.sequence(), h)?, n);
        let (p, rank) = universal_group_sl(&lang)?;
        value["s_l"] = json!({ "rank": rank, "generators": p.generators });
    }
    if let Some(b) = args.oplus_bound {
        let bound = case.lengths().field().context("no lengths")?.int(b);
        let (free, torsion) = unigroup::cases::oplus_invariants(case, h, &bound)?;
        value["oplus"] = json!({ "bound": b, "free_rank": free, "torsion": torsion });
    }
    let ok = report.g_d.equal_counts || !case.forces_equal_counts();
    emit(&args.output, &value, || {
        let mut s = format!(
            "{case} (h = {h}, max_len = {n})\n  G_D: {}  [table: {}]\n  H_D: {} basis {}  [table: {}]",
            report.g_d.label,
            report.table.0,
            report.h_d.label,
            report.h_d.basis.iter().map(QuadraticRational::compact).collect::<Vec<_>>().join(", "),
            report.table.1,
        );
        if !ok {
            s += "\n  error: a harvested pair has unequal letter counts";
        }
        if let Some(d) = &report.table_discrepancy {
            s += &format!("\n  note: {d}");
        }
        s
    })?;
    Ok(ok)
}

fn verify(args: &VerifyArgs) -> Result<bool> {
    let cfg = VerifyConfig {
        seed: args.seed,
        pairs: args.pairs,
        box_bound: args.coeff_bound,
        radius: args.radius,
        samples: args.samples,
        ..VerifyConfig::default()
    };
    let suites = if args.suite.is_empty() { Suite::ALL.to_vec() } else { args.suite.clone() };
    let reports: Vec<_> = suites.iter().map(|&s| run_suite(s, &cfg)).collect();
    let all = reports.iter().all(|r| r.passed);
    let value = json!({ "passed": all, "suites": reports });
    emit(&args.output, &value, || {
        reports
            .iter()
            .map(|r| format!("{}: {} ({} checks, {} failures)", r.suite, if r.passed { "PASS" } else { "FAIL" }, r.checks, r.failures.len()))
            .collect::<Vec<_>>()
            .join("\n")
    })?;
    Ok(all)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Present(a) => present(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
