//! Command-line front end: argument parsing, dispatch and report formatting.
//!
//! Exit codes are 0 for success, 1 when the checked property fails and 2 for
//! usage, parse and input errors.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use fuzzdec::decompose::{canonical_decompose, strong_decompose, verify_strong, verify_weak};
use fuzzdec::divisors::{divisor_intersection, one_interval, strong_existence, strong_uniqueness, zero_interval};
use fuzzdec::ops::{
    check_collapse_implies_absorption, check_first_coordinate_continuity, check_norm_axioms, check_strict_near_zero,
    check_strictly_increasing_first, parse_op_spec,
};
use fuzzdec::preference::{audit_fp_seeded, classify_rule, make_rule};
use fuzzdec::region::{restricted_decomposability, strong_region, transitivity_preserves_verdict, weak_region};
use fuzzdec::relation::format_degree;
use fuzzdec::tables::{default_lambda_samples, generate_table};
use fuzzdec::{
    BinaryOp, Decomposition, Error, Family, FuzzyRelation, Grid, Kind, Mode, PreferenceTriplet, SampleSpec, TableKind,
    TriState,
};

pub const SEED_ENV: &str = "FUZZDEC_SEED";
pub const DEFAULT_SEED: u64 = 0x5eed;

const SUCCESS: i32 = 0;
const PROPERTY_FAILS: i32 = 1;
const USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fuzzdec",
    version,
    about = "Decompose fuzzy relations into strict preference and indifference"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Canonical decomposition of a relation file.
    Decompose(DecomposeArgs),
    /// Preference axioms FP1–FP6 for the canonical rule applied to a relation.
    Audit(AuditArgs),
    /// Whether the canonical rule of an operator pair induces preferences.
    Classify(ClassifyArgs),
    /// Operator axioms and derived properties.
    CheckNorm(CheckNormArgs),
    /// 1- and 0-intervals and strong existence / uniqueness.
    Divisors(DivisorsArgs),
    /// Rasterised decomposability region written as CSV.
    Region(RegionArgs),
    /// Decomposability on a restricted domain of relations.
    Restricted(RestrictedArgs),
    /// Regenerates a verdict table and diffs it against the reference entries.
    Tables(TablesArgs),
}

#[derive(Debug, Args)]
struct Operators {
    /// Conorm spec, e.g. `max`, `lukasiewicz`, `schweizer_sklar:lambda=2`.
    #[arg(long)]
    conorm: String,
    /// Norm spec; selects strong decompositions.
    #[arg(long)]
    norm: Option<String>,
}

#[derive(Debug, Args)]
struct SeedArg {
    /// Seed for sampled checks; falls back to FUZZDEC_SEED.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Strong,
    Weak,
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    #[arg(long)]
    relation: PathBuf,
    #[command(flatten)]
    ops: Operators,
    /// Defaults to strong when a norm is given, weak otherwise.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Writes the strict part `P` as a relation file.
    #[arg(long)]
    strict_out: Option<PathBuf>,
    /// Writes the indifference `I` as a relation file.
    #[arg(long)]
    indifference_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AuditArgs {
    #[arg(long)]
    relation: PathBuf,
    #[command(flatten)]
    ops: Operators,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[command(flatten)]
    ops: Operators,
    #[command(flatten)]
    seed: SeedArg,
    /// Number of random relations drawn for sampled checks.
    #[arg(long, default_value_t = 50)]
    samples: usize,
    /// Prints the non-authoritative oracle verdict for open cases.
    #[arg(long)]
    speculate: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Norm,
    Conorm,
}

#[derive(Debug, Args)]
struct CheckNormArgs {
    /// Operator spec, including `custom:table=<path>`.
    #[arg(long)]
    op: String,
    /// Role of the operator; aliases such as `max` imply it.
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    /// Grid divisions for the sweeps.
    #[arg(long, default_value_t = 100)]
    resolution: usize,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("operator").required(true).multiple(true).args(["conorm", "norm"])))]
struct DivisorsArgs {
    #[arg(long)]
    conorm: Option<String>,
    #[arg(long)]
    norm: Option<String>,
    /// Values of `w`; defaults to 0, 0.1, …, 1.
    #[arg(long = "w", value_delimiter = ',')]
    w: Vec<f64>,
}

#[derive(Debug, Args)]
struct RegionArgs {
    #[command(flatten)]
    ops: Operators,
    /// Grid divisions per axis.
    #[arg(long, default_value_t = 200)]
    resolution: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("domain").required(true).args(["connected_by", "transitive_by"])))]
struct RestrictedArgs {
    /// Relations that are connected with respect to this conorm.
    #[arg(long)]
    connected_by: Option<String>,
    /// Relations that are transitive with respect to this norm.
    #[arg(long)]
    transitive_by: Option<String>,
    #[command(flatten)]
    ops: Operators,
    #[arg(long, default_value_t = 200)]
    resolution: usize,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long, default_value_t = 50)]
    samples: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Debug, Args)]
struct TablesArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    which: u8,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Prints oracle evidence for open cells, labelled non-authoritative.
    #[arg(long)]
    speculate: bool,
    #[command(flatten)]
    seed: SeedArg,
}

/// Failure that ends a command: usage and input problems exit 2.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = std::result::Result<(String, i32), Failure>;

/// Parses `argv` (program name first), runs the command and writes the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { SUCCESS };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = validate_paths(&cli.command).and_then(|()| dispatch(cli.command, err));
    match result {
        Ok((report, code)) => {
            let _ = out.write_all(report.as_bytes());
            code
        }
        Err(Failure(message)) => {
            let _ = writeln!(err, "error: {message}");
            USAGE
        }
    }
}

fn validate_paths(command: &Command) -> std::result::Result<(), Failure> {
    let input = |p: &Path| {
        if p.is_file() {
            Ok(())
        } else {
            Err(Failure(format!("cannot read {}: no such file", p.display())))
        }
    };
    let output = |p: &Path| match p.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => Err(Failure(format!(
            "cannot write {}: directory does not exist",
            p.display()
        ))),
        _ => Ok(()),
    };
    match command {
        Command::Decompose(a) => {
            input(&a.relation)?;
            a.strict_out
                .iter()
                .chain(&a.indifference_out)
                .try_for_each(|p| output(p))
        }
        Command::Audit(a) => input(&a.relation),
        Command::Region(a) => output(&a.out),
        _ => Ok(()),
    }
}

fn dispatch(command: Command, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Decompose(a) => decompose(a),
        Command::Audit(a) => audit(a),
        Command::Classify(a) => classify(a),
        Command::CheckNorm(a) => check_norm(a),
        Command::Divisors(a) => divisors(a),
        Command::Region(a) => region(a),
        Command::Restricted(a) => restricted(a),
        Command::Tables(a) => tables(a, err),
    }
}

fn resolve_seed(arg: &SeedArg) -> std::result::Result<u64, Failure> {
    if let Some(seed) = arg.seed {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure(format!("{SEED_ENV}=`{v}` is not an unsigned 64-bit integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn read_relation(path: &Path) -> std::result::Result<FuzzyRelation, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))?;
    FuzzyRelation::parse(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))
}

fn parse_ops(ops: &Operators) -> std::result::Result<(BinaryOp, Option<BinaryOp>), Failure> {
    let s = parse_op_spec(&ops.conorm, Kind::Conorm)?;
    let t = ops.norm.as_deref().map(|n| parse_op_spec(n, Kind::Norm)).transpose()?;
    Ok((s, t))
}

fn pair_name(t: Option<&BinaryOp>, s: &BinaryOp) -> String {
    match t {
        Some(t) => format!("(T = {}, S = {})", t.spec(), s.spec()),
        None => format!("S = {}", s.spec()),
    }
}

/// A decomposition failing to exist is a verdict, not a usage error.
fn verdict_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Discontinuous { .. } | Error::Unattained { .. } | Error::NoStrongDecomposition { .. }
    )
}

fn pair_lines(r: &FuzzyRelation, d: &Decomposition) -> String {
    let mut out = String::new();
    let labels = r.labels();
    for (x, y) in r.pairs().filter(|&(x, y)| x != y) {
        let _ = writeln!(
            out,
            "  P({a},{b}) = {}, I({a},{b}) = {}",
            format_degree(d.strict().get(x, y)),
            format_degree(d.indifference().get(x, y)),
            a = labels[x],
            b = labels[y],
        );
    }
    out
}

fn decompose(a: DecomposeArgs) -> Outcome {
    let r = read_relation(&a.relation)?;
    let (s, t) = parse_ops(&a.ops)?;
    let mode = match (a.mode, &t) {
        (Some(ModeArg::Strong), None) => return Err(Failure("strong mode needs --norm".into())),
        (Some(ModeArg::Weak), Some(_)) => return Err(Failure("--norm only applies to strong mode".into())),
        (_, Some(_)) => Mode::Strong,
        (_, None) => Mode::Weak,
    };
    let computed = match &t {
        Some(t) => strong_decompose(&r, t, &s),
        None => canonical_decompose(&r, &s),
    };
    let d = match computed {
        Ok(d) => d,
        Err(e) if verdict_error(&e) => {
            return Ok((
                format!(
                    "{mode} decomposition under {}: none\n  {e}\n",
                    pair_name(t.as_ref(), &s)
                ),
                PROPERTY_FAILS,
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let verdict = match &t {
        Some(t) => verify_strong(&r, &d, t)?,
        None => verify_weak(&r, &d)?,
    };

    let mut out = format!("{mode} decomposition under {}\n\n", pair_name(t.as_ref(), &s));
    let _ = writeln!(out, "# strict part P\n{}", d.strict().to_text());
    let _ = writeln!(out, "# indifference I\n{}", d.indifference().to_text());
    out.push_str("pairs:\n");
    out.push_str(&pair_lines(&r, &d));
    let _ = writeln!(out, "verification: {verdict}");
    if let Some(p) = &a.strict_out {
        write_file(p, &d.strict().to_text())?;
    }
    if let Some(p) = &a.indifference_out {
        write_file(p, &d.indifference().to_text())?;
    }
    Ok((out, if verdict.fails() { PROPERTY_FAILS } else { SUCCESS }))
}

fn audit(a: AuditArgs) -> Outcome {
    let seed = resolve_seed(&a.seed)?;
    let r = read_relation(&a.relation)?;
    let (s, t) = parse_ops(&a.ops)?;
    let applied = make_rule(&s, t.as_ref()).and_then(|rule| Ok((rule.apply(&r)?, rule)));
    let (d, rule) = match applied {
        Ok(x) => x,
        Err(e) if verdict_error(&e) => {
            return Ok((
                format!(
                    "canonical rule under {}: not applicable\n  {e}\n",
                    pair_name(t.as_ref(), &s)
                ),
                PROPERTY_FAILS,
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let report = audit_fp_seeded(&PreferenceTriplet::from_decomposition(&r, &d)?, seed)?;
    let mut out = format!("{} canonical rule under {}\n", rule.mode(), pair_name(t.as_ref(), &s));
    out.push_str(&pair_lines(&r, &d));
    let _ = writeln!(out, "{report}");
    Ok((out, if report.overall() { SUCCESS } else { PROPERTY_FAILS }))
}

fn classify(a: ClassifyArgs) -> Outcome {
    let seed = resolve_seed(&a.seed)?;
    let (s, t) = parse_ops(&a.ops)?;
    let spec = SampleSpec {
        count: a.samples,
        seed,
        ..SampleSpec::default()
    };
    let c = classify_rule(&s, t.as_ref(), &spec)?;
    let mut out = format!("rule under {}: {c}\n", pair_name(t.as_ref(), &s));
    if a.speculate {
        if let Some(v) = c.speculative {
            let _ = writeln!(out, "speculative, not authoritative: {v}");
        }
    }
    Ok((out, SUCCESS))
}

fn check_norm(a: CheckNormArgs) -> Outcome {
    let name = a.op.split(':').next().unwrap_or_default();
    let (_, implied) = Family::lookup(name)?;
    let kind = match (a.kind, implied) {
        (Some(KindArg::Norm), _) => Kind::Norm,
        (Some(KindArg::Conorm), _) => Kind::Conorm,
        (None, Some(k)) => k,
        (None, None) => Kind::Norm,
    };
    let op = parse_op_spec(&a.op, kind)?;
    let grid = Grid::uniform(a.resolution.max(1)).with_breakpoints(&op.breakpoints());
    let axioms = check_norm_axioms(&op, &grid);

    let mut out = format!("{} as a t-{}\n", op.spec(), kind.name());
    let _ = writeln!(out, "axioms on {} grid points: {axioms}", grid.len());
    let _ = writeln!(
        out,
        "continuous in the first coordinate: {}",
        check_first_coordinate_continuity(&op, a.resolution)
    );
    let _ = writeln!(
        out,
        "strictly increasing in the first coordinate: {}",
        check_strictly_increasing_first(&op, a.resolution)
    );
    if kind == Kind::Conorm {
        let _ = writeln!(
            out,
            "collapse implies absorption: {}",
            check_collapse_implies_absorption(&op, a.resolution)?
        );
        let _ = writeln!(out, "strict near zero: {}", check_strict_near_zero(&op, a.resolution)?);
    }
    Ok((out, if axioms.fails() { PROPERTY_FAILS } else { SUCCESS }))
}

fn divisors(a: DivisorsArgs) -> Outcome {
    let s = a
        .conorm
        .as_deref()
        .map(|c| parse_op_spec(c, Kind::Conorm))
        .transpose()?;
    let t = a.norm.as_deref().map(|n| parse_op_spec(n, Kind::Norm)).transpose()?;
    let ws: Vec<f64> = if a.w.is_empty() {
        (0..=10).map(|k| k as f64 / 10.0).collect()
    } else {
        a.w
    };
    if let Some(w) = ws.iter().find(|w| !(0.0..=1.0).contains(*w)) {
        return Err(Failure(format!("w = {w} is outside [0, 1]")));
    }

    let mut out = String::new();
    for &w in &ws {
        let mut parts = Vec::new();
        if let Some(s) = &s {
            parts.push(format!("D¹ = {}", one_interval(s, w)?));
        }
        if let Some(t) = &t {
            parts.push(format!("D⁰ = {}", zero_interval(t, w)?));
        }
        if let (Some(s), Some(t)) = (&s, &t) {
            parts.push(format!("D¹ ∩ D⁰ = {}", divisor_intersection(t, s, w)?));
        }
        let _ = writeln!(out, "w = {}: {}", format_degree(w), parts.join(", "));
    }
    let mut code = SUCCESS;
    if let (Some(s), Some(t)) = (&s, &t) {
        let grid = s.default_grid().with_breakpoints(&t.breakpoints());
        let existence = strong_existence(t, s, &grid)?;
        let _ = writeln!(out, "strong decompositions exist: {existence}");
        if existence.not_refuted() {
            let _ = writeln!(out, "strong decompositions unique: {}", strong_uniqueness(t, s, &grid)?);
        } else {
            code = PROPERTY_FAILS;
        }
    }
    Ok((out, code))
}

fn region(a: RegionArgs) -> Outcome {
    let (s, t) = parse_ops(&a.ops)?;
    let grid = match &t {
        Some(t) => strong_region(t, &s, a.resolution)?,
        None => weak_region(&s, a.resolution)?,
    };
    write_file(&a.out, &grid.to_csv())?;
    let kind = if t.is_some() { "strong" } else { "weak" };
    let out = format!(
        "{kind} region of {} at resolution 1/{}: {} of {} cells, written to {}\n",
        pair_name(t.as_ref(), &s),
        a.resolution,
        grid.count(),
        grid.side() * grid.side(),
        a.out.display()
    );
    Ok((out, SUCCESS))
}

fn restricted(a: RestrictedArgs) -> Outcome {
    let (s, t) = parse_ops(&a.ops)?;
    let (domain, verdict) = if let Some(spec) = &a.connected_by {
        let s_prime = parse_op_spec(spec, Kind::Conorm)?;
        let v = restricted_decomposability(&s_prime, &s, t.as_ref(), a.resolution)?;
        (format!("{}-connected relations", s_prime.spec()), v)
    } else {
        let spec = a.transitive_by.as_deref().unwrap_or_default();
        if t.is_some() {
            return Err(Failure(
                "--transitive-by checks weak decompositions; drop --norm".into(),
            ));
        }
        let t_prime = parse_op_spec(spec, Kind::Norm)?;
        let sample = SampleSpec {
            count: a.samples,
            seed: resolve_seed(&a.seed)?,
            ..SampleSpec::default()
        };
        let v = transitivity_preserves_verdict(&t_prime, &s, &sample)?;
        (format!("{}-transitive relations", t_prime.spec()), v)
    };
    let out = format!(
        "decomposability of {domain} under {}: {verdict}\n",
        pair_name(t.as_ref(), &s)
    );
    let code = match verdict {
        TriState::Fails(_) => PROPERTY_FAILS,
        _ => SUCCESS,
    };
    Ok((out, code))
}

fn tables(a: TablesArgs, err: &mut dyn Write) -> Outcome {
    let spec = SampleSpec {
        seed: resolve_seed(&a.seed)?,
        ..SampleSpec::default()
    };
    let kind = TableKind::from_number(a.which)?;
    let table = generate_table(kind, &default_lambda_samples(), &spec)?;
    let mismatches = table.mismatches().len();
    let out = match a.format {
        Format::Text => table.to_text(a.speculate),
        Format::Csv => {
            let _ = writeln!(err, "{} entries compared, {mismatches} mismatches", table.entry_count());
            table.to_csv()
        }
    };
    Ok((out, if mismatches == 0 { SUCCESS } else { PROPERTY_FAILS }))
}
