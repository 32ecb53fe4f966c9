//! `fockpoisson`: moments, partitions, operator words, Fock matrices and
//! Cauchy transforms of the s-weighted free Poisson law.
//!
//! Words are read left to right as `z₁ z₂ … z_n`, i.e. the first letter is
//! the operator applied to the vacuum first.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fockpoisson::analytic::{self, AnalyticParams, ComplexVal};
use fockpoisson::fock::{build_generators, check_relations, poisson_matrix, FockMatrix};
use fockpoisson::moments::{cfree_moments, moment_jacobi, Engine, MomentError, MomentTable, Specialization, VarLimit};
use fockpoisson::partitions::{count_by_blocks, for_each_in_family, PartitionError};
use fockpoisson::{DeformParams, EnumLimit, Family, MultiPoly, NCPartition, OperatorWord};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::json;

const MAX_N_ENV: &str = "FOCKPOISSON_MAX_N";

/// Moments of `Π^s_{t,λ}` for `λ = 1, s = 1, t → 0`, `n = 1..=10`.
const REFERENCE_SEQUENCE: [u64; 10] = [1, 2, 5, 14, 41, 123, 374, 1147, 3538, 10958];

#[derive(Parser, Debug)]
#[command(
    name = "fockpoisson",
    version,
    about = "Exact moments and partition statistics of the s-weighted free Poisson law"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moment table from one engine, or from all of them with an agreement check.
    Moments(MomentsArgs),
    /// Enumerate or count non-crossing partitions in a family.
    Partitions(PartitionsArgs),
    /// Admissibility, partition and card arrangement of an operator word.
    Words(WordsArgs),
    /// Truncated Fock space matrices and the commutation relation report.
    Fock(FockArgs),
    /// Continued fraction versus closed form Cauchy transform on a grid.
    Cauchy(CauchyArgs),
    /// The λ = 1, s = 1, t → 0 moment sequence.
    Sequence(SequenceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EngineChoice {
    Operator,
    Jacobi,
    Nc,
    Blockwise,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyChoice {
    Nc,
    Interval,
    AlmostInterval,
    Nc12Inner,
}

impl From<FamilyChoice> for Family {
    fn from(f: FamilyChoice) -> Self {
        match f {
            FamilyChoice::Nc => Family::Nc,
            FamilyChoice::Interval => Family::Interval,
            FamilyChoice::AlmostInterval => Family::AlmostInterval,
            FamilyChoice::Nc12Inner => Family::Nc12Inner,
        }
    }
}

#[derive(Args, Debug)]
struct CapArgs {
    /// Lift the enumeration cap to its hard maximum.
    #[arg(long)]
    force: bool,
}

#[derive(Args, Debug)]
struct MomentsArgs {
    #[arg(long, default_value_t = 7)]
    nmax: usize,
    #[arg(long, value_enum, default_value_t = EngineChoice::All)]
    engine: EngineChoice,
    /// Set s = 1.
    #[arg(long, group = "s_choice")]
    s_one: bool,
    /// Take s → 0.
    #[arg(long, group = "s_choice")]
    s_zero: bool,
    /// Evaluate at this s (rational in (0, 1]).
    #[arg(long, group = "s_choice")]
    s: Option<BigRational>,
    /// Set t = 1.
    #[arg(long, group = "t_choice")]
    t_one: bool,
    /// Take t → 0.
    #[arg(long, group = "t_choice")]
    t_zero: bool,
    /// Evaluate at this t (rational in (0, 1]).
    #[arg(long, group = "t_choice")]
    t: Option<BigRational>,
    /// Evaluate at this λ (positive rational).
    #[arg(long)]
    lambda: Option<BigRational>,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[command(flatten)]
    cap: CapArgs,
}

#[derive(Args, Debug)]
struct PartitionsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = FamilyChoice::Nc)]
    family: FamilyChoice,
    /// Only count members by number of blocks.
    #[arg(long)]
    count: bool,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[command(flatten)]
    cap: CapArgs,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct WordSource {
    /// Word over C (creation), A (annihilation), M (intermediate), K (scalar).
    #[arg(long)]
    check: Option<String>,
    /// Partition as a JSON array of blocks, e.g. [[1,2,6],[3,5],[4]].
    #[arg(long)]
    from_partition: Option<String>,
    /// List every admissible word of this length.
    #[arg(long)]
    list: Option<usize>,
}

#[derive(Args, Debug)]
struct WordsArgs {
    #[command(flatten)]
    source: WordSource,
    /// Degenerate intermediate cards (t = 1).
    #[arg(long)]
    degenerate: bool,
    /// Draw the card arrangement.
    #[arg(long)]
    cards: bool,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MatrixChoice {
    Poisson,
    Creation,
    Annihilation,
    Scalar,
    Intermediate,
}

#[derive(Args, Debug)]
struct FockArgs {
    /// Truncation level N (basis ξ^{⊗0..=N}).
    #[arg(long, default_value_t = 6)]
    n: usize,
    /// Dump this matrix as JSON instead of the relation report.
    #[arg(long, value_enum)]
    matrix: Option<MatrixChoice>,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

#[derive(Args, Debug)]
struct CauchyArgs {
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// s in [0, 1]; the closed form is reported only for s = 1, t = 0.
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    #[arg(long, default_value_t = 0.0)]
    t: f64,
    #[arg(long, default_value_t = 80)]
    depth: usize,
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    re_min: f64,
    #[arg(long, default_value_t = 6.0, allow_hyphen_values = true)]
    re_max: f64,
    #[arg(long, default_value_t = 0.5)]
    im_min: f64,
    #[arg(long, default_value_t = 3.0)]
    im_max: f64,
    /// Grid points per axis.
    #[arg(long, default_value_t = 5)]
    steps: usize,
}

#[derive(Args, Debug)]
struct SequenceArgs {
    #[arg(long, default_value_t = 10)]
    nmax: usize,
    #[command(flatten)]
    cap: CapArgs,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Limit(String),
    Disagreement(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Disagreement(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Limit(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Limit(m) | CliError::Disagreement(m) => m,
        }
    }
}

impl From<PartitionError> for CliError {
    fn from(e: PartitionError) -> Self {
        match e {
            PartitionError::LimitExceeded { .. } => CliError::Limit(format!("{e} (use --force or {MAX_N_ENV})")),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<MomentError> for CliError {
    fn from(e: MomentError) -> Self {
        match e {
            MomentError::Partition(p) => p.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

type CliResult = Result<String, CliError>;

fn enum_limit(cap: &CapArgs) -> Result<EnumLimit, CliError> {
    if cap.force {
        return Ok(EnumLimit::forced());
    }
    match std::env::var(MAX_N_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(EnumLimit::new)
            .map_err(|_| CliError::Usage(format!("{MAX_N_ENV}={v} is not a non-negative integer"))),
        Err(_) => Ok(EnumLimit::default()),
    }
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Moments(a) => run_moments(&a),
        Command::Partitions(a) => run_partitions(&a),
        Command::Words(a) => run_words(&a),
        Command::Fock(a) => run_fock(&a),
        Command::Cauchy(a) => run_cauchy(&a),
        Command::Sequence(a) => run_sequence(&a),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Disagreement(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

// ---------------------------------------------------------------- moments

struct Evaluation {
    lambda: BigRational,
    s: Option<BigRational>,
    t: Option<BigRational>,
}

fn moment_spec(a: &MomentsArgs) -> Specialization {
    let pick = |one, zero| match (one, zero) {
        (true, _) => VarLimit::One,
        (_, true) => VarLimit::Zero,
        _ => VarLimit::Keep,
    };
    Specialization {
        s: pick(a.s_one, a.s_zero),
        t: pick(a.t_one, a.t_zero),
    }
}

fn evaluation(a: &MomentsArgs) -> Result<Option<Evaluation>, CliError> {
    match (&a.lambda, &a.s, &a.t) {
        (None, None, None) => Ok(None),
        (None, _, _) => Err(CliError::Usage("--s and --t values need --lambda".into())),
        (Some(l), s, t) => Ok(Some(Evaluation {
            lambda: l.clone(),
            s: s.clone(),
            t: t.clone(),
        })),
    }
}

fn evaluate(p: &MultiPoly, ev: &Evaluation) -> Result<BigRational, CliError> {
    if p.mentions_s() && ev.s.is_none() {
        return Err(CliError::Usage(
            "the moments still depend on s: give --s, --s-one or --s-zero".into(),
        ));
    }
    if p.mentions_t() && ev.t.is_none() {
        return Err(CliError::Usage(
            "the moments still depend on t: give --t, --t-one or --t-zero".into(),
        ));
    }
    let one = BigRational::one();
    let params = DeformParams::new(
        ev.lambda.clone(),
        ev.s.clone().unwrap_or_else(|| one.clone()),
        ev.t.clone().unwrap_or(one),
    )
    .map_err(|e| CliError::Usage(e.to_string()))?;
    p.eval(&params).map_err(|e| CliError::Usage(e.to_string()))
}

fn moment_rows(table: &MomentTable, ev: Option<&Evaluation>) -> Result<Vec<String>, CliError> {
    table.m[1..]
        .iter()
        .map(|p| match ev {
            Some(ev) => evaluate(p, ev).map(|q| q.to_string()),
            None => Ok(p.to_string()),
        })
        .collect()
}

fn run_moments(a: &MomentsArgs) -> CliResult {
    if a.nmax == 0 {
        return Err(CliError::Usage("--nmax must be at least 1".into()));
    }
    let limit = enum_limit(&a.cap)?;
    let spec = moment_spec(a);
    let ev = evaluation(a)?;
    let engines: Vec<Engine> = match a.engine {
        EngineChoice::Operator => vec![Engine::Operator],
        EngineChoice::Jacobi => vec![Engine::Jacobi],
        EngineChoice::Nc => vec![Engine::Nc],
        EngineChoice::Blockwise => vec![Engine::Blockwise],
        EngineChoice::All => Engine::ALL.to_vec(),
    };
    let mut tables: Vec<(String, MomentTable)> = Vec::new();
    for e in &engines {
        tables.push((e.to_string(), e.table(a.nmax, limit)?.map(|p| spec.apply(p))));
    }
    if a.engine == EngineChoice::All && spec == Specialization::CFREE {
        tables.push(("nc12-inner-count".into(), cfree_moments(a.nmax, limit)?));
    }
    let agree = tables.windows(2).all(|w| w[0].1 == w[1].1);
    let rows = moment_rows(&tables[0].1, ev.as_ref())?;

    let mut out = String::new();
    match a.format {
        Format::Plain => {
            for (n, r) in rows.iter().enumerate() {
                writeln!(out, "m_{} = {r}", n + 1).unwrap();
            }
        }
        Format::Csv => {
            out.push_str("n,moment\n");
            for (n, r) in rows.iter().enumerate() {
                writeln!(out, "{},\"{r}\"", n + 1).unwrap();
            }
        }
        Format::Json => {
            let doc = json!({
                "engines": tables.iter().map(|(name, _)| name.as_str()).collect::<Vec<_>>(),
                "agree": agree,
                "moments": tables[0].1.m[1..].iter().zip(&rows).enumerate().map(|(i, (p, r))| json!({
                    "n": i + 1,
                    "display": r,
                    "terms": p,
                })).collect::<Vec<_>>(),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).unwrap();
        }
    }
    if tables.len() > 1 {
        if a.format != Format::Json {
            out.push_str(if agree { "ENGINES AGREE\n" } else { "ENGINES DISAGREE\n" });
        }
        if !agree {
            for (name, t) in &tables {
                for (n, p) in t.m.iter().enumerate().skip(1) {
                    if *p != tables[0].1.m[n] {
                        writeln!(out, "{name}: m_{n} = {p}").unwrap();
                    }
                }
            }
            return Err(CliError::Disagreement(out));
        }
    }
    Ok(out)
}

// ------------------------------------------------------------- partitions

fn run_partitions(a: &PartitionsArgs) -> CliResult {
    let limit = enum_limit(&a.cap)?;
    let family = Family::from(a.family);
    let mut out = String::new();
    if a.count {
        let counts = count_by_blocks(a.n, family, limit)?;
        let total: u64 = counts.iter().sum();
        match a.format {
            Format::Plain => {
                writeln!(out, "n = {}, family = {family}, total = {total}", a.n).unwrap();
                for (k, c) in counts.iter().enumerate() {
                    writeln!(out, "{} blocks: {c}", k + 1).unwrap();
                }
            }
            Format::Csv => {
                out.push_str("blocks,count\n");
                for (k, c) in counts.iter().enumerate() {
                    writeln!(out, "{},{c}", k + 1).unwrap();
                }
            }
            Format::Json => {
                let doc = json!({ "n": a.n, "family": family, "total": total, "by_blocks": counts });
                writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).unwrap();
            }
        }
        return Ok(out);
    }

    let mut records = Vec::new();
    for_each_in_family(a.n, family, limit, |p, st| records.push((p.clone(), st.clone())))?;
    match a.format {
        Format::Plain => {
            for (p, st) in &records {
                writeln!(out, "{p}  depths={:?} td1={} td2={}", st.block_depths, st.td1, st.td2).unwrap();
            }
            writeln!(out, "total = {}", records.len()).unwrap();
        }
        Format::Csv => {
            out.push_str("partition,blocks,td1,td2\n");
            for (p, st) in &records {
                writeln!(out, "\"{p}\",{},{},{}", p.num_blocks(), st.td1, st.td2).unwrap();
            }
        }
        Format::Json => {
            let doc: Vec<_> = records
                .iter()
                .map(|(p, st)| json!({ "blocks": p, "block_depths": st.block_depths, "td1": st.td1, "td2": st.td2 }))
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).unwrap();
        }
    }
    Ok(out)
}

// ------------------------------------------------------------------ words

fn describe_word(w: &OperatorWord, a: &WordsArgs) -> Result<(serde_json::Value, String), CliError> {
    let levels = w.levels();
    if !w.is_admissible() {
        let text = format!("word: {w}\nadmissible: no\nlevels: {levels:?}\n");
        return Ok((json!({ "word": w, "admissible": false, "levels": levels }), text));
    }
    let p = w.to_partition().map_err(|e| CliError::Usage(e.to_string()))?;
    let arr = w
        .arrangement(a.degenerate)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let labels: Vec<String> = arr.cards.iter().map(|c| c.label()).collect();
    let weight = arr.total_weight();
    let mut text = String::new();
    writeln!(text, "word: {w}").unwrap();
    writeln!(text, "admissible: yes").unwrap();
    writeln!(text, "levels: {levels:?}").unwrap();
    writeln!(text, "partition: {p}").unwrap();
    writeln!(text, "cards: {}", labels.join(" ")).unwrap();
    writeln!(text, "weight: {weight}").unwrap();
    if a.cards {
        text.push('\n');
        text.push_str(&arr.render_ascii());
    }
    let doc = json!({
        "word": w,
        "admissible": true,
        "levels": levels,
        "partition": p,
        "cards": labels,
        "weight": weight.to_string(),
        "weight_terms": weight,
    });
    Ok((doc, text))
}

fn run_words(a: &WordsArgs) -> CliResult {
    let words: Vec<OperatorWord> = if let Some(s) = &a.source.check {
        vec![OperatorWord::from_str(s).map_err(|e| CliError::Usage(e.to_string()))?]
    } else if let Some(s) = &a.source.from_partition {
        let p: NCPartition = serde_json::from_str(s).map_err(|e| CliError::Usage(format!("bad partition: {e}")))?;
        vec![OperatorWord::from_partition(&p)]
    } else {
        let n = a.source.list.expect("clap enforces one source");
        EnumLimit::default().check(n)?;
        OperatorWord::admissible_words(n)
    };
    let mut text = String::new();
    let mut docs = Vec::new();
    for (i, w) in words.iter().enumerate() {
        let (doc, t) = describe_word(w, a)?;
        if i > 0 {
            text.push('\n');
        }
        text.push_str(&t);
        docs.push(doc);
    }
    Ok(match a.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&docs).unwrap()),
        Format::Csv => {
            let mut out = String::from("word,admissible,partition,weight\n");
            for d in &docs {
                writeln!(
                    out,
                    "{},{},\"{}\",\"{}\"",
                    d["word"].as_str().unwrap_or_default(),
                    d["admissible"],
                    d.get("partition").map(|p| p.to_string()).unwrap_or_default(),
                    d.get("weight").and_then(|w| w.as_str()).unwrap_or_default()
                )
                .unwrap();
            }
            out
        }
        Format::Plain => text,
    })
}

// ------------------------------------------------------------------- fock

fn matrix_json(m: &FockMatrix) -> serde_json::Value {
    json!({ "dim": m.dim(), "entries": m.to_string_grid() })
}

fn run_fock(a: &FockArgs) -> CliResult {
    if a.n < 2 {
        return Err(CliError::Usage("truncation must be at least 2".into()));
    }
    if let Some(choice) = a.matrix {
        let g = build_generators(a.n);
        let m = match choice {
            MatrixChoice::Poisson => poisson_matrix(a.n),
            MatrixChoice::Creation => g.creation,
            MatrixChoice::Annihilation => g.annihilation,
            MatrixChoice::Scalar => g.scalar,
            MatrixChoice::Intermediate => g.intermediate,
        };
        return Ok(format!("{}\n", serde_json::to_string_pretty(&matrix_json(&m)).unwrap()));
    }
    let report = check_relations(a.n);
    if a.format == Format::Json {
        return Ok(format!("{}\n", serde_json::to_string_pretty(&report).unwrap()));
    }
    let mut out = String::new();
    writeln!(out, "truncation N = {}", report.truncation).unwrap();
    for r in &report.relations {
        let (lo, hi) = r.columns;
        let verdict = if r.holds() {
            "holds".to_string()
        } else {
            format!("FAILS at columns {:?}", r.failing_columns)
        };
        writeln!(out, "{:<20} m in {lo}..={hi}: {verdict}", r.name).unwrap();
    }
    out.push_str(if report.all_hold() {
        "ALL RELATIONS HOLD\n"
    } else {
        "SOME RELATIONS FAIL\n"
    });
    Ok(out)
}

// ----------------------------------------------------------------- cauchy

fn grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    (0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect()
}

fn run_cauchy(a: &CauchyArgs) -> CliResult {
    let params = AnalyticParams::new(a.lambda, a.s, a.t).map_err(|e| CliError::Usage(e.to_string()))?;
    if a.steps == 0 || a.depth == 0 {
        return Err(CliError::Usage("--steps and --depth must be positive".into()));
    }
    if a.im_min <= 0.0 {
        return Err(CliError::Usage("--im-min must be positive".into()));
    }
    let closed = a.s == 1.0 && a.t == 0.0;
    let mut out = String::from("re_z,im_z,re_g_cf,im_g_cf");
    out.push_str(if closed {
        ",re_g_closed,im_g_closed,abs_diff\n"
    } else {
        "\n"
    });
    for im in grid(a.im_min, a.im_max, a.steps) {
        for re in grid(a.re_min, a.re_max, a.steps) {
            let z = ComplexVal::new(re, im);
            let g = analytic::cauchy_cf(z, &params, a.depth).map_err(|e| CliError::Usage(e.to_string()))?;
            write!(
                out,
                "{},{},{},{}",
                fmt_float(re),
                fmt_float(im),
                fmt_float(g.re),
                fmt_float(g.im)
            )
            .unwrap();
            if closed {
                match analytic::cauchy_cfree_closed(z, a.lambda) {
                    Ok(h) => write!(
                        out,
                        ",{},{},{}",
                        fmt_float(h.re),
                        fmt_float(h.im),
                        fmt_float((g - h).norm())
                    )
                    .unwrap(),
                    Err(_) => out.push_str(",,,"),
                }
            }
            out.push('\n');
        }
    }
    Ok(out)
}

// --------------------------------------------------------------- sequence

fn run_sequence(a: &SequenceArgs) -> CliResult {
    let limit = enum_limit(&a.cap)?;
    let table = cfree_moments(a.nmax, limit)?;
    let values: Vec<BigInt> = table.m[1..]
        .iter()
        .map(|p| p.lambda_coefficients().expect("integral powers of λ").iter().sum())
        .collect();
    let jacobi: Vec<BigInt> = (1..=a.nmax)
        .map(|n| {
            Specialization::CFREE
                .apply(&moment_jacobi(n))
                .lambda_coefficients()
                .expect("integral")
                .iter()
                .sum()
        })
        .collect();
    let line = values.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    let mut out = format!("{line}\n");
    let reference_ok = values
        .iter()
        .zip(REFERENCE_SEQUENCE)
        .all(|(v, r)| v.to_u64() == Some(r));
    if values != jacobi || !reference_ok {
        out.push_str("SEQUENCE MISMATCH\n");
        return Err(CliError::Disagreement(out));
    }
    Ok(out)
}
