mod config;

use std::io::{BufRead, IsTerminal, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use labov_core::adjudication::{Adjudication, VoteField};
use labov_core::format::{parse_bundle, parse_lat, serialize_bundle, serialize_lat, Bundle};
use labov_core::label::ExactMatchMode;
use labov_core::lint::{lint_structure, LintFinding, Severity};
use labov_core::model::{ClauseId, Fragment};
use labov_core::report;
use labov_core::Label;
use labov_core::seg::BedMode;
use labov_core::wizard::{PartialAnswers, Step};
use labov_service::ops::{self, LabelField};
use serde::{Deserialize, Serialize};

use config::Config;

#[derive(Parser)]
#[command(name = "labov", version, about = "Annotation toolkit for Labovian oral-narrative structure")]
struct Cli {
    /// Output format. Defaults to a table on terminals and JSON otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// JSON file with defaults for nt, bed_mode, rules, chart and port.
    #[arg(long, global = true, env = "LABOV_CONFIG")]
    config: Option<PathBuf>,
    /// Add the generation time to reports.
    #[arg(long, global = true)]
    timestamps: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check `.lat.tsv` or `.bundle.json` files.
    Validate { files: Vec<PathBuf> },
    /// Run every lint; exits 1 if any finding is an error.
    Lint {
        files: Vec<PathBuf>,
        /// Lint settings (JSON): disabled rule ids and onset markers.
        #[arg(long)]
        rules: Option<PathBuf>,
    },
    /// Segmentation agreement (boundary similarity, kappa, BED) over bundles.
    AgreeSeg {
        bundles: Vec<PathBuf>,
        #[arg(long)]
        nt: Option<usize>,
        #[arg(long, value_enum)]
        bed_mode: Option<BedModeArg>,
    },
    /// Label agreement (alpha, exact match, confusion) over bundles.
    AgreeLabels {
        bundles: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "micro")]
        field: FieldArg,
        #[arg(long, value_enum, default_value = "any-chose")]
        mode: ModeArg,
    },
    /// Majority vote over a bundle's layers; optionally write the gold table.
    Adjudicate {
        bundle: PathBuf,
        /// JSON array of `{field, clause, resolution, resolvers, note, at}`.
        #[arg(long)]
        resolutions: Option<PathBuf>,
        /// Write the gold `.lat.tsv` here, with an `.audit.json` sidecar next to it.
        #[arg(long)]
        gold: Option<PathBuf>,
    },
    /// Label and span statistics over gold tables or bundles with gold.
    Stats { files: Vec<PathBuf> },
    /// Random-segmentation baseline sized from the bundles' human layers.
    Baseline {
        bundles: Vec<PathBuf>,
        /// Inclusive seed range such as `0..99`, or one seed.
        #[arg(long, default_value = "0..99")]
        seeds: String,
        #[arg(long)]
        nt: Option<usize>,
        #[arg(long, value_enum)]
        bed_mode: Option<BedModeArg>,
    },
    /// Convert between `.lat.tsv` and `.bundle.json`.
    Convert {
        input: PathBuf,
        output: PathBuf,
        /// When writing a table from a bundle, use this annotator's layer instead of the gold.
        #[arg(long)]
        annotator: Option<String>,
    },
    /// Walk the micro-label chart. Prints the next question, or the label once decided.
    Wizard {
        #[arg(long)]
        hypothetical_only: Option<bool>,
        #[arg(long)]
        event: Option<bool>,
        #[arg(long)]
        entire_period: Option<bool>,
        /// Ask the remaining questions on stdin.
        #[arg(long, short)]
        interactive: bool,
        /// Chart definition (JSON) replacing the built-in one.
        #[arg(long)]
        chart: Option<PathBuf>,
    },
    /// Serve the HTTP API over a directory of bundles.
    Serve {
        #[arg(default_value = ".")]
        data_dir: PathBuf,
        #[arg(long)]
        port: Option<u16>,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        #[arg(long)]
        rules: Option<PathBuf>,
        #[arg(long)]
        chart: Option<PathBuf>,
        #[arg(long)]
        nt: Option<usize>,
        /// Print the API reference as markdown and exit.
        #[arg(long)]
        print_api: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BedModeArg {
    Pooled,
    PerFragment,
}

impl From<BedModeArg> for BedMode {
    fn from(m: BedModeArg) -> Self {
        match m {
            BedModeArg::Pooled => BedMode::Pooled,
            BedModeArg::PerFragment => BedMode::PerFragment,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Micro,
    Macro,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    AnyChose,
    Majority,
}

/// What a subcommand hands back: the document to print and whether it counts as failure.
struct Outcome {
    json: serde_json::Value,
    table: String,
    failed: bool,
}

impl Outcome {
    fn ok<T: Serialize>(value: &T, table: String) -> Result<Self> {
        Ok(Outcome { json: serde_json::to_value(value)?, table, failed: false })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let config = Config::load(cli.config.as_deref())?;
    let format = cli.format.or(config.format).unwrap_or_else(|| {
        if std::io::stdout().is_terminal() {
            Format::Table
        } else {
            Format::Json
        }
    });
    let outcome = match cli.command {
        Command::Serve { data_dir, port, host, rules, chart, nt, print_api } => {
            if print_api {
                print!("{}", labov_service::api::api_markdown());
                return Ok(true);
            }
            let mut service = labov_service::ServiceConfig::new(data_dir);
            service.lint = config.lint(rules.as_deref())?;
            service.chart = config.chart(chart.as_deref())?;
            service.n_t = nt.or(config.nt).unwrap_or(service.n_t);
            let addr = SocketAddr::new(host, port.or(config.port).unwrap_or(8080));
            eprintln!("serving {} on http://{addr}", service.data_dir.display());
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(labov_service::serve(service, addr))?;
            return Ok(true);
        }
        Command::Validate { files } => validate(&files)?,
        Command::Lint { files, rules } => lint(&files, &config.lint(rules.as_deref())?)?,
        Command::AgreeSeg { bundles, nt, bed_mode } => {
            let bundles = read_bundles(&bundles)?;
            let r = ops::segmentation_report(&bundles, config.nt(nt), config.bed_mode(bed_mode.map(Into::into)))?;
            Outcome::ok(&r, report::seg_agreement(&r))?
        }
        Command::AgreeLabels { bundles, field, mode } => {
            let bundles = read_bundles(&bundles)?;
            let field = match field {
                FieldArg::Micro => LabelField::Micro,
                FieldArg::Macro => LabelField::Macro,
            };
            let mode = match mode {
                ModeArg::AnyChose => ExactMatchMode::AnyChose,
                ModeArg::Majority => ExactMatchMode::Majority,
            };
            let r = ops::label_report(&bundles, field, mode)?;
            Outcome::ok(&r, report::label_agreement(&r))?
        }
        Command::Adjudicate { bundle, resolutions, gold } => adjudicate(&bundle, resolutions.as_deref(), gold.as_deref())?,
        Command::Stats { files } => {
            let mut gold = Vec::new();
            for f in &files {
                match read_doc(f)? {
                    Doc::Table(t) => gold.push(t),
                    Doc::Bundle(b) => gold.extend(b.gold),
                }
            }
            let s = labov_core::adjudication::corpus_stats(&gold);
            Outcome::ok(&s, report::corpus_stats(&s))?
        }
        Command::Baseline { bundles, seeds, nt, bed_mode } => {
            let bundles = read_bundles(&bundles)?;
            let seeds = parse_seeds(&seeds)?;
            let r = ops::baseline_report(&bundles, &seeds, config.nt(nt), config.bed_mode(bed_mode.map(Into::into)))?;
            Outcome::ok(&r, report::baseline(&r))?
        }
        Command::Convert { input, output, annotator } => convert(&input, &output, annotator.as_deref())?,
        Command::Wizard { hypothetical_only, event, entire_period, interactive, chart } => {
            let chart = config.chart(chart.as_deref())?;
            let mut answers = PartialAnswers {
                in_hypothetical_only: hypothetical_only,
                reports_event_or_discovery: event,
                holds_entire_period: entire_period,
            };
            let mut step = chart.next_question(&answers);
            if interactive {
                let stdin = std::io::stdin();
                let mut lines = stdin.lock().lines();
                while let Step::Question { field, question_en, question_ja, number, .. } = &step {
                    eprint!("{number}. {question_en}\n   {question_ja}\n   [y/n] ");
                    std::io::stderr().flush()?;
                    let line = lines.next().ok_or_else(|| anyhow!("input ended before a label was decided"))??;
                    let yes = match line.trim().to_lowercase().as_str() {
                        "y" | "yes" => true,
                        "n" | "no" => false,
                        other => {
                            eprintln!("   answer y or n (got {other:?})");
                            continue;
                        }
                    };
                    match field {
                        labov_core::wizard::ChartField::InHypotheticalOnly => answers.in_hypothetical_only = Some(yes),
                        labov_core::wizard::ChartField::ReportsEventOrDiscovery => {
                            answers.reports_event_or_discovery = Some(yes)
                        }
                        labov_core::wizard::ChartField::HoldsEntirePeriod => answers.holds_entire_period = Some(yes),
                    }
                    step = chart.next_question(&answers);
                }
            }
            let table = match &step {
                Step::Question { number, question_en, question_ja, examples, .. } => {
                    let mut t = format!("{number}. {question_en}\n   {question_ja}\n");
                    for e in examples {
                        t.push_str(&format!("   e.g. {e}\n"));
                    }
                    t
                }
                Step::Decided { label: Some(l), path } => format!("{} ({})\npath: {}\n", l.name(), l.code(), path.join(" > ")),
                Step::Decided { label: None, path } => format!("no micro label\npath: {}\n", path.join(" > ")),
            };
            Outcome::ok(&step, table)?
        }
    };
    emit(outcome, format, cli.timestamps)
}

fn emit(mut outcome: Outcome, format: Format, timestamps: bool) -> Result<bool> {
    let now = timestamps.then(|| {
        std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
    });
    let mut out = std::io::stdout().lock();
    match format {
        Format::Json => {
            if let (Some(t), Some(obj)) = (now, outcome.json.as_object_mut()) {
                obj.insert("generated_at_unix".into(), t.into());
            }
            serde_json::to_writer_pretty(&mut out, &outcome.json)?;
            writeln!(out)?;
        }
        Format::Table => {
            if let Some(t) = now {
                writeln!(out, "generated at unix time {t}\n")?;
            }
            out.write_all(outcome.table.as_bytes())?;
            if !outcome.table.ends_with('\n') {
                writeln!(out)?;
            }
        }
    }
    Ok(!outcome.failed)
}

enum Doc {
    Table(Fragment),
    Bundle(Bundle),
}

fn read_doc(path: &Path) -> Result<Doc> {
    let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let name = path.to_string_lossy();
    if name.ends_with(".json") {
        Ok(Doc::Bundle(parse_bundle(&bytes).with_context(|| name.to_string())?))
    } else {
        Ok(Doc::Table(parse_lat(&bytes).with_context(|| name.to_string())?))
    }
}

fn read_bundles(paths: &[PathBuf]) -> Result<Vec<Bundle>> {
    if paths.is_empty() {
        bail!("no bundle given");
    }
    paths
        .iter()
        .map(|p| {
            let bytes = std::fs::read(p).with_context(|| format!("cannot read {}", p.display()))?;
            ops::parse_bundles(&bytes).with_context(|| p.display().to_string())
        })
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().flatten().collect())
}

/// `a..b` (inclusive) or a single seed.
fn parse_seeds(spec: &str) -> Result<Vec<u64>> {
    let bad = || anyhow!("--seeds expects `a..b` or a number, got {spec:?}");
    match spec.split_once("..") {
        Some((a, b)) => {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if a > b {
                bail!("--seeds range {spec:?} is empty");
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![spec.trim().parse().map_err(|_| bad())?]),
    }
}

#[derive(Serialize)]
struct Checked {
    path: String,
    ok: bool,
    problems: Vec<String>,
}

fn structural_errors(f: &Fragment) -> Vec<LintFinding> {
    lint_structure(f).into_iter().filter(|x| x.severity == Severity::Error).collect()
}

fn validate(files: &[PathBuf]) -> Result<Outcome> {
    if files.is_empty() {
        bail!("no file given");
    }
    let mut checked = Vec::new();
    for f in files {
        let problems = match read_doc(f) {
            Err(e) => vec![format!("{e:#}")],
            Ok(Doc::Table(t)) => structural_errors(&t).iter().map(LintFinding::to_string).collect(),
            Ok(Doc::Bundle(b)) => {
                let mut p: Vec<String> = Vec::new();
                for l in &b.layers {
                    p.extend(structural_errors(&b.layer_fragment(l)).iter().map(|x| format!("{}: {x}", l.annotator_id)));
                }
                if let Some(g) = &b.gold {
                    p.extend(structural_errors(g).iter().map(|x| format!("gold: {x}")));
                }
                p
            }
        };
        checked.push(Checked { path: f.display().to_string(), ok: problems.is_empty(), problems });
    }
    let mut table = String::new();
    for c in &checked {
        table.push_str(&format!("{}  {}\n", if c.ok { "ok  " } else { "FAIL" }, c.path));
        for p in &c.problems {
            table.push_str(&format!("      {p}\n"));
        }
    }
    let failed = checked.iter().any(|c| !c.ok);
    Ok(Outcome { json: serde_json::to_value(&checked)?, table, failed })
}

fn lint(files: &[PathBuf], config: &labov_core::lint::LintConfig) -> Result<Outcome> {
    if files.is_empty() {
        bail!("no file given");
    }
    let mut fragments = Vec::new();
    for f in files {
        match read_doc(f)? {
            Doc::Table(t) => fragments.push(t),
            Doc::Bundle(b) => {
                fragments.extend(b.layers.iter().map(|l| b.layer_fragment(l)));
                fragments.extend(b.gold.clone());
            }
        }
    }
    let mut findings = Vec::new();
    for fr in &fragments {
        findings.extend(ops::lint(fr, config).findings);
    }
    let r = ops::LintReport { errors: labov_core::lint::error_count(&findings), findings };
    let table = if r.findings.is_empty() { "no findings\n".to_string() } else { report::findings(&r.findings) };
    Ok(Outcome { failed: r.errors > 0, json: serde_json::to_value(&r)?, table })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ResolutionEntry {
    field: VoteField,
    clause: ClauseId,
    resolution: String,
    resolvers: Vec<String>,
    #[serde(default)]
    note: String,
    #[serde(default)]
    at: String,
}

fn adjudicate(bundle: &Path, resolutions: Option<&Path>, gold: Option<&Path>) -> Result<Outcome> {
    let b = parse_bundle(&std::fs::read(bundle).with_context(|| format!("cannot read {}", bundle.display()))?)?;
    let mut adj: Adjudication = ops::adjudicate(&b)?;
    if let Some(r) = resolutions {
        let entries: Vec<ResolutionEntry> = serde_json::from_slice(&std::fs::read(r)?).with_context(|| r.display().to_string())?;
        for e in entries {
            adj.resolve(e.field, e.clause, &e.resolution, &e.resolvers, &e.note, &e.at)?;
        }
    }
    if let Some(path) = gold {
        let mut fragment = adj.build_gold(&b.raw_text)?;
        fragment.topic = b.topic;
        std::fs::write(path, serialize_lat(&fragment)?)?;
        let mut sidecar = path.as_os_str().to_owned();
        sidecar.push(".audit.json");
        std::fs::write(&sidecar, adj.audit_sidecar())?;
    }
    let table = report::adjudication(&adj);
    Outcome::ok(&adj, table)
}

fn convert(input: &Path, output: &Path, annotator: Option<&str>) -> Result<Outcome> {
    let out_name = output.to_string_lossy();
    let bytes = match (read_doc(input)?, out_name.ends_with(".json")) {
        (Doc::Table(t), true) => serialize_bundle(&Bundle::from_gold(&t)?)?,
        (Doc::Table(t), false) => serialize_lat(&t)?,
        (Doc::Bundle(b), true) => serialize_bundle(&b)?,
        (Doc::Bundle(b), false) => {
            let fragment = match annotator {
                Some(a) => b.layer(a).map(|l| b.layer_fragment(l)).ok_or_else(|| anyhow!("no layer for annotator {a:?}"))?,
                None => b.gold.clone().ok_or_else(|| anyhow!("bundle has no gold fragment; pass --annotator"))?,
            };
            serialize_lat(&fragment)?
        }
    };
    std::fs::write(output, &bytes).with_context(|| format!("cannot write {}", output.display()))?;
    #[derive(Serialize)]
    struct Written {
        output: String,
        bytes: usize,
    }
    let w = Written { output: output.display().to_string(), bytes: bytes.len() };
    let table = format!("wrote {} ({} bytes)\n", w.output, w.bytes);
    Outcome::ok(&w, table)
}
