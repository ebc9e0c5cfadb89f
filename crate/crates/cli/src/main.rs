use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use liouville_core::dirichlet::{
    critical_line_width, critical_line_width_ln, f_by_towers, f_direct, zeta_ratio_reference, TowerTruncation,
};
use liouville_core::lambda_gen::generate_to;
use liouville_core::stats::{
    report_to_csv, rows_to_csv, table_report, ChiSquareRow, SegmentKind, SegmentSpec, TableId,
};
use liouville_core::summatory::{
    summatory_by_towers, summatory_l_checkpointed, summatory_range, CheckpointConfig, DEFAULT_CHECKPOINT_STRIDE,
};
use liouville_core::towers::{integer_of, tower_of, towers_up_to, triad_of, twin_integer, twin_tower};
use liouville_core::{liouville, liouville_segment, Error, TowerLabel, Triad};
use num_complex::Complex64;
use serde::Serialize;

mod svg;

const EXIT_INVALID: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

/// Exact computations with the Liouville function.
#[derive(Parser, Debug)]
#[command(name = "liouville", version)]
struct Cli {
    /// Output format for data; scalar commands print a plain line by default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true, env = "LIOUVILLE_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// λ(n), or λ over [n, to].
    Lambda {
        n: u64,
        #[arg(long)]
        to: Option<u64>,
    },
    /// Summatory function L(N).
    #[command(name = "L")]
    L(LArgs),
    /// Towers met by 2..=N with their member counts.
    Towers { n: u64 },
    /// Triad of n, or the integer of a triad with --inverse.
    Triad {
        #[arg(required_unless_present = "inverse")]
        n: Option<u64>,
        /// Triad tokens such as "m=39 p=17 k=1 u=1".
        #[arg(long, conflicts_with = "n", num_args = 1.., allow_hyphen_values = true)]
        inverse: Option<Vec<String>>,
    },
    /// Twin of an integer, or of a tower given as m:p:u.
    Twin {
        #[arg(required_unless_present = "tower")]
        n: Option<u64>,
        #[arg(long, conflicts_with = "n")]
        tower: Option<TowerLabel>,
    },
    /// Rectangular waves of every tower up to N, as data or SVG pages.
    Waves {
        #[arg(long)]
        max_n: u64,
        /// Write SVG here; more than 40 towers spill into numbered pages.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// χ² of one segment.
    Chi2 {
        #[arg(long)]
        start: u64,
        #[arg(long)]
        len: u64,
    },
    /// Recompute published segment tables.
    Tables {
        /// Table ids (1.1 1.2 1.3 1.4 2.1 3.1 3.2); all when omitted.
        ids: Vec<TableId>,
        /// Skip rows whose segment ends beyond this integer.
        #[arg(long, default_value_t = 100_000_000)]
        max_n: u64,
    },
    /// Σ λ(n)/n^s three ways.
    Fs {
        #[arg(long, allow_hyphen_values = true)]
        re: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        im: f64,
        /// Truncation point of the direct and tower sums.
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
    },
    /// ln ln ln n / ln n.
    Width {
        #[arg(required_unless_present = "log10")]
        n: Option<f64>,
        /// Give n as its decimal exponent, for n beyond floating range.
        #[arg(long, conflicts_with = "n")]
        log10: Option<f64>,
    },
    /// λ(1..=N) by repeated doubling.
    Generate {
        n: u64,
        /// Print the primes found along the way instead of λ.
        #[arg(long)]
        primes: bool,
    },
}

#[derive(Args, Debug)]
struct LArgs {
    n: u64,
    /// Resume from and append to this checkpoint file.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CHECKPOINT_STRIDE)]
    stride: u64,
    /// Count tower peaks instead of sieving.
    #[arg(long, conflicts_with = "checkpoint")]
    by_towers: bool,
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(io::Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_INVALID);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_RESOURCE);
        }
    }
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out).and_then(|()| out.flush().map_err(CliError::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = match &e {
                CliError::Core(Error::Resource { .. } | Error::Io(_)) | CliError::Io(_) => EXIT_RESOURCE,
                _ => EXIT_INVALID,
            };
            match e {
                CliError::Core(e) => eprintln!("error: {e}"),
                CliError::Io(e) => eprintln!("error: {e}"),
                CliError::Usage(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(code)
        }
    }
}

fn json_line<T: Serialize>(out: &mut impl Write, value: &T) -> CliResult<()> {
    serde_json::to_writer(&mut *out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: &Cli, out: &mut impl Write) -> CliResult<()> {
    let format = cli.format;
    match &cli.command {
        Command::Lambda { n, to } => lambda(*n, *to, format, out),
        Command::L(args) => summatory(args, format, out),
        Command::Towers { n } => towers(*n, format, out),
        Command::Triad { n, inverse } => match (n, inverse) {
            (_, Some(tokens)) => triad_inverse(&tokens.join(" "), format, out),
            (Some(n), None) => triad(*n, format, out),
            (None, None) => Err(CliError::Usage("triad needs N or --inverse".into())),
        },
        Command::Twin { n, tower } => twin(*n, *tower, format, out),
        Command::Waves { max_n, svg } => waves(*max_n, svg.as_deref(), format, out),
        Command::Chi2 { start, len } => {
            let spec = SegmentSpec::new(*start, *len, SegmentKind::Arbitrary)?;
            let l = summatory_range(*start, *len)?;
            write_rows(&[ChiSquareRow::from_sum(spec, l)], format, out)
        }
        Command::Tables { ids, max_n } => tables(ids, *max_n, format, out),
        Command::Fs { re, im, n } => dirichlet(Complex64::new(*re, *im), *n, format, out),
        Command::Width { n, log10 } => width(*n, *log10, format, out),
        Command::Generate { n, primes } => generate(*n, *primes, format, out),
    }
}

fn lambda(n: u64, to: Option<u64>, format: Option<Format>, out: &mut impl Write) -> CliResult<()> {
    #[derive(Serialize)]
    struct Row {
        n: u64,
        lambda: i8,
    }
    let Some(to) = to else {
        let v = liouville(n)?;
        match format {
            None => writeln!(out, "lambda({n}) = {v}")?,
            Some(Format::Csv) => write!(out, "n,lambda\n{n},{v}\n")?,
            Some(Format::Json) => json_line(out, &Row { n, lambda: v })?,
        }
        return Ok(());
    };
    let table = liouville_segment(n, to)?;
    let rows = table.values().iter().enumerate().map(|(i, &v)| Row { n: n + i as u64, lambda: v });
    match format {
        Some(Format::Json) => json_line(out, &rows.collect::<Vec<_>>())?,
        _ => {
            writeln!(out, "n,lambda")?;
            for r in rows {
                writeln!(out, "{},{}", r.n, r.lambda)?;
            }
        }
    }
    Ok(())
}

fn summatory(args: &LArgs, format: Option<Format>, out: &mut impl Write) -> CliResult<()> {
    #[derive(Serialize)]
    struct Row {
        #[serde(rename = "N")]
        n: u64,
        #[serde(rename = "L")]
        l: i64,
        #[serde(skip_serializing_if = "Option::is_none")]
        positive_steps: Option<u64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        negative_steps: Option<u64>,
    }
    let n = args.n;
    if n == 0 {
        return Err(Error::InvalidArgument("L(N) needs N >= 1".into()).into());
    }
    let mut row = Row { n, l: 0, positive_steps: None, negative_steps: None };
    if args.by_towers {
        let (l, peaks) = summatory_by_towers(n)?;
        row.l = l;
        row.positive_steps = Some(peaks.positive);
        row.negative_steps = Some(peaks.negative);
    } else if let Some(path) = &args.checkpoint {
        let cfg = CheckpointConfig { path: path.clone(), stride: args.stride };
        row.l = summatory_l_checkpointed(n, &cfg, |done, acc| eprintln!("L({done}) = {acc}"))?;
    } else {
        if args.stride == 0 {
            return Err(CliError::Usage("--stride must be positive".into()));
        }
        let (mut done, mut acc) = (0u64, 0i64);
        while done < n {
            let next = ((done / args.stride + 1) * args.stride).min(n);
            acc += summatory_range(done + 1, next - done)?;
            done = next;
            if done < n {
                eprintln!("L({done}) = {acc}");
            }
        }
        row.l = acc;
    }
    match format {
        None => {
            write!(out, "L({n}) = {}", row.l)?;
            if let (Some(p), Some(q)) = (row.positive_steps, row.negative_steps) {
                write!(out, " (up {p}, down {q})")?;
            }
            writeln!(out)?;
        }
        Some(Format::Csv) => match (row.positive_steps, row.negative_steps) {
            (Some(p), Some(q)) => write!(out, "N,L,positive_steps,negative_steps\n{n},{},{p},{q}\n", row.l)?,
            _ => write!(out, "N,L\n{n},{}\n", row.l)?,
        },
        Some(Format::Json) => json_line(out, &row)?,
    }
    Ok(())
}

fn towers(n: u64, format: Option<Format>, out: &mut impl Write) -> CliResult<()> {
    #[derive(Serialize)]
    struct Row {
        m: u64,
        p: u64,
        u: u64,
        base: u64,
        base_exponent: u32,
        members: u64,
    }
    let rows: Vec<Row> = towers_up_to(n)?
        .into_iter()
        .map(|(t, members)| {
            Ok(Row { m: t.m(), p: t.p(), u: t.u(), base: t.base()?, base_exponent: t.base_exponent(), members })
        })
        .collect::<Result<_, Error>>()?;
    if format == Some(Format::Json) {
        return json_line(out, &rows);
    }
    writeln!(out, "m,p,u,base,base_exponent,members")?;
    for r in rows {
        writeln!(out, "{},{},{},{},{},{}", r.m, r.p, r.u, r.base, r.base_exponent, r.members)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct TriadRow {
    #[serde(flatten)]
    triad: Triad,
    class: String,
    tower_base: u64,
}

fn triad_row(n: u64) -> CliResult<TriadRow> {
    let triad = triad_of(n)?;
    let tower_base = if n == 1 { 1 } else { tower_of(n)?.base()? };
    Ok(TriadRow { class: triad.class().to_string(), triad, tower_base })
}

fn triad(n: u64, format: Option<Format>, out: &mut impl Write) -> CliResult<()> {
    let row = triad_row(n)?;
    let t = &row.triad;
    match format {
        None => writeln!(out, "{t} class={} tower_base={}", row.class, row.tower_base)?,
        Some(Format::Csv) => write!(
            out,
            "n,m,p,k,u,class,tower_base\n{n},{},{},{},{},{},{}\n",
            t.m, t.p, t.k, t.u, row.class, row.tower_base
        )?,
        Some(Format::Json) => json_line(out, &row)?,
    }
    Ok(())
}

/// Reads `key=value` tokens; `class` and `tower_base` are accepted and
/// ignored so a printed triad line can be fed back unchanged.
fn parse_triad(text: &str) -> CliResult<Triad> {
    let (mut m, mut p, mut k, mut u) = (None, None, None, None);
    for token in text.split_whitespace() {
        let (key, value) =
            token.split_once('=').ok_or_else(|| CliError::Usage(format!("expected key=value, got {token:?}")))?;
        let parse = |v: &str| v.parse::<u64>().map_err(|_| CliError::Usage(format!("bad value in {token:?}")));
        match key {
            "m" => m = Some(parse(value)?),
            "p" => p = Some(parse(value)?),
            "k" => {
                k = Some(
                    u32::try_from(parse(value)?).map_err(|_| CliError::Usage(format!("k too large in {token:?}")))?,
                )
            }
            "u" => u = Some(parse(value)?),
            "class" | "tower_base" => {}
            _ => return Err(CliError::Usage(format!("unknown triad field {key:?}"))),
        }
    }
    match (m, p, k, u) {
        (Some(m), Some(p), Some(k), Some(u)) => Ok(Triad { m, p, k, u }),
        _ => Err(CliError::Usage("triad needs m, p, k and u".into())),
    }
}

fn triad_inverse(text: &str, format: Option<Format>, out: &mut impl Write) -> CliResult<()> {
    let triad = parse_triad(text)?;
    let n = if triad.is_trivial() { 1 } else { integer_of(&triad)? };
    match format {
        None => writeln!(out, "{n}")?,
        Some(Format::Csv) => write!(out, "m,p,k,u,n\n{},{},{},{},{n}\n", triad.m, triad.p, triad.k, triad.u)?,
        Some(Format::Json) => json_line(out, &serde_json::json!({ "triad": triad, "n": n }))?,
    }
    Ok(())
}

fn twin(n: Option<u64>, tower: Option<TowerLabel>, format: Option<Format>, out: &mut impl Write) -> CliResult<()> {
    if let Some(label) = tower {
        let twin = twin_tower(&label)?;
        match format {
            None => writeln!(out, "twin({label}) = {twin}")?,
            Some(Format::Csv) => write!(out, "tower,twin\n{label},{twin}\n")?,
            Some(Format::Json) => {
                json_line(out, &serde_json::json!({ "tower": label.to_string(), "twin": twin.to_string() }))?
            }
        }
        return Ok(());
    }
    let n = n.ok_or_else(|| CliError::Usage("twin needs N or --tower".into()))?;
    let t = twin_integer(n)?;
    let (a, b) = (liouville(n)?, liouville(t)?);
    match format {
        None => writeln!(out, "twin({n}) = {t}")?,
        Some(Format::Csv) => write!(out, "n,lambda,twin,twin_lambda\n{n},{a},{t},{b}\n")?,
        Some(Format::Json) => json_line(out, &serde_json::json!({ "n": n, "lambda": a, "twin": t, "twin_lambda": b }))?,
    }
    Ok(())
}

fn waves(max_n: u64, svg_path: Option<&Path>, format: Option<Format>, out: &mut impl Write) -> CliResult<()> {
    let waves = svg::collect_waves(max_n)?;
    if let Some(path) = svg_path {
        for written in svg::write_pages(path, &waves, max_n)? {
            writeln!(out, "{}", written.display())?;
        }
        return Ok(());
    }
    if format == Some(Format::Json) {
        #[derive(Serialize)]
        struct Wave {
            tower: String,
            steps: Vec<(u64, i64)>,
        }
        let rows: Vec<Wave> =
            waves.iter().map(|w| Wave { tower: w.label.to_string(), steps: w.steps.clone() }).collect();
        return json_line(out, &rows);
    }
    writeln!(out, "tower,n,contribution")?;
    for w in &waves {
        for (n, c) in &w.steps {
            writeln!(out, "{},{n},{c}", w.label)?;
        }
    }
    Ok(())
}

fn write_rows(rows: &[ChiSquareRow], format: Option<Format>, out: &mut impl Write) -> CliResult<()> {
    match format {
        Some(Format::Json) => json_line(out, &rows),
        _ => Ok(out.write_all(rows_to_csv(rows).as_bytes())?),
    }
}

fn tables(ids: &[TableId], max_n: u64, format: Option<Format>, out: &mut impl Write) -> CliResult<()> {
    let ids = if ids.is_empty() { TableId::ALL.to_vec() } else { ids.to_vec() };
    let mut reports = Vec::with_capacity(ids.len());
    for id in ids {
        let report = table_report(id, max_n)?;
        let computed = report.computed_rows().count();
        let mut note = format!("table {id}: {computed} of {} rows computed", report.rows.len());
        if let Some(m) = report.mean_chi2 {
            let _ = write!(note, ", mean chi2 {m:.4}");
        }
        if let Some(p) = report.printed_mean {
            let _ = write!(note, ", printed {p}");
        }
        let _ = write!(note, ", reference {:.4}", report.reference_mean);
        let mismatched: Vec<String> =
            report.rows.iter().filter(|r| r.l_matches() == Some(false)).map(|r| r.no.to_string()).collect();
        if !mismatched.is_empty() {
            let _ = write!(note, ", L differs from print in rows {}", mismatched.join(" "));
        }
        eprintln!("{note}");
        reports.push(report);
    }
    if format == Some(Format::Json) {
        return json_line(out, &reports);
    }
    for (i, report) in reports.iter().enumerate() {
        if i > 0 {
            writeln!(out)?;
        }
        out.write_all(report_to_csv(report).as_bytes())?;
    }
    Ok(())
}

fn dirichlet(s: Complex64, n: u64, format: Option<Format>, out: &mut impl Write) -> CliResult<()> {
    #[derive(Serialize)]
    struct Row {
        s: [f64; 2],
        n: u64,
        direct: [f64; 2],
        towers: [f64; 2],
        towers_with_tails: [f64; 2],
        reference: [f64; 2],
        direct_error: f64,
        towers_error: f64,
    }
    let pair = |z: Complex64| [z.re, z.im];
    let direct = f_direct(s, n)?;
    let towers = f_by_towers(s, n.max(2), TowerTruncation::SameCover)?;
    let tails = f_by_towers(s, n.max(2), TowerTruncation::ClosedFormTails)?;
    let reference = zeta_ratio_reference(s)?;
    let row = Row {
        s: pair(s),
        n,
        direct: pair(direct),
        towers: pair(towers),
        towers_with_tails: pair(tails),
        reference: pair(reference),
        direct_error: (direct - reference).norm(),
        towers_error: (towers - direct).norm(),
    };
    if format == Some(Format::Json) {
        return json_line(out, &row);
    }
    writeln!(
        out,
        "s_re,s_im,n,direct_re,direct_im,towers_re,towers_im,tails_re,tails_im,reference_re,reference_im,direct_error,towers_error"
    )?;
    let cells: Vec<String> = [s.re, s.im]
        .into_iter()
        .map(|v| v.to_string())
        .chain([n.to_string()])
        .chain(
            [row.direct, row.towers, row.towers_with_tails, row.reference]
                .into_iter()
                .flatten()
                .chain([row.direct_error, row.towers_error])
                .map(|v| format!("{v:e}")),
        )
        .collect();
    writeln!(out, "{}", cells.join(","))?;
    Ok(())
}

fn width(n: Option<f64>, log10: Option<f64>, format: Option<Format>, out: &mut impl Write) -> CliResult<()> {
    let (label, w) = match (n, log10) {
        (_, Some(d)) => (format!("1e{d}"), critical_line_width_ln(d * std::f64::consts::LN_10)?),
        (Some(n), None) => (n.to_string(), critical_line_width(n)?),
        (None, None) => return Err(CliError::Usage("width needs n or --log10".into())),
    };
    match format {
        None => writeln!(out, "width({label}) = {w}")?,
        Some(Format::Csv) => write!(out, "n,width\n{label},{w}\n")?,
        Some(Format::Json) => json_line(out, &serde_json::json!({ "n": label, "width": w }))?,
    }
    Ok(())
}

fn generate(n: u64, primes: bool, format: Option<Format>, out: &mut impl Write) -> CliResult<()> {
    let g = generate_to(n)?;
    match (primes, format) {
        (true, Some(Format::Json)) => json_line(out, &g.primes)?,
        (false, Some(Format::Json)) => json_line(out, &g.table.values())?,
        (true, _) => {
            writeln!(out, "p")?;
            for p in &g.primes {
                writeln!(out, "{p}")?;
            }
        }
        (false, _) => {
            writeln!(out, "n,lambda")?;
            for (i, v) in g.table.values().iter().enumerate() {
                writeln!(out, "{},{v}", i + 1)?;
            }
        }
    }
    Ok(())
}
