//! lexscan command line: ingest UTF-8 text files, run segmenters and
//! extractors, emit JSONL annotation records; training subcommands for
//! the sentence and date-filter models.
//!
//! Exit codes: 0 success, 1 when any input could not be read (other
//! inputs are still processed), 2 on configuration or data errors.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use lexscan::dates::{self, DateFilterModel};
use lexscan::doc::sort_annotations;
use lexscan::entities;
use lexscan::legal;
use lexscan::lexicon::{Lexicon, LexiconFormat};
use lexscan::quantities;
use lexscan::segment::{self, HeadingRule, SentenceModel};
use lexscan::tokens::{collocations, CollocationScoring};
use lexscan::{Annotation, AnnotationKind, Document, Span};

#[derive(Parser)]
#[command(name = "lexscan", version, about = "Structured annotation for legal and regulatory text")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run extractors over text files and emit JSONL annotations
    Extract(ExtractArgs),
    /// Emit sentence/paragraph/section/page/title records
    Segment(SegmentArgs),
    /// Train a model and write it as JSON
    #[command(subcommand)]
    Train(TrainCommand),
    /// Rank corpus collocations and write a CSV table
    Collocations(CollocationsArgs),
}

#[derive(Args)]
struct ExtractArgs {
    /// Comma-separated extractor kinds (or "all")
    #[arg(long, value_delimiter = ',', default_value = "all")]
    kinds: Vec<String>,
    /// Locales enabled for gazetteer matching
    #[arg(long, value_delimiter = ',', default_value = "en")]
    locales: Vec<String>,
    /// Extra lexicon files (.csv or .json), merged over the bundled data
    #[arg(long)]
    lexicon: Vec<PathBuf>,
    /// Model overrides as kind=path (kinds: date, sentence)
    #[arg(long)]
    model: Vec<String>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for document-level parallelism
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Emit redacted document copies instead of JSONL (PII masking)
    #[arg(long)]
    redact: bool,
    /// Let the date grammar accept partial forms like "March 4" or "12/13"
    #[arg(long)]
    allow_partial_dates: bool,
    /// Input text files
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
}

#[derive(Args)]
struct SegmentArgs {
    #[arg(long)]
    sentences: bool,
    #[arg(long)]
    paragraphs: bool,
    #[arg(long)]
    sections: bool,
    #[arg(long)]
    pages: bool,
    #[arg(long)]
    titles: bool,
    /// Print only the count per input file
    #[arg(long)]
    count: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Sentence model override (JSON)
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
}

#[derive(Subcommand)]
enum TrainCommand {
    /// Learn sentence abbreviations from a corpus
    SentenceAbbrevs(TrainAbbrevArgs),
    /// Train the date filter from a labeled candidate CSV
    DateFilter(TrainDateArgs),
}

#[derive(Args)]
struct TrainAbbrevArgs {
    /// Abbreviation score threshold
    #[arg(long, default_value_t = 0.3)]
    threshold: f64,
    /// Where to write the model JSON
    #[arg(long, required = true)]
    out: PathBuf,
    /// Corpus files or directories of files
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
}

#[derive(Args)]
struct TrainDateArgs {
    /// Labeled CSV: text,context,window_start,window_end,label
    data: PathBuf,
    /// Where to write the model JSON
    #[arg(long, required = true)]
    out: PathBuf,
    #[arg(long, default_value_t = 400)]
    epochs: usize,
    #[arg(long, default_value_t = 0.5)]
    lr: f64,
}

#[derive(Args)]
struct CollocationsArgs {
    /// Gram size (2 or 3)
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Number of top grams to keep
    #[arg(long, default_value_t = 100)]
    top: usize,
    #[arg(long, value_enum, default_value_t = ScoringArg::Frequency)]
    scoring: ScoringArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScoringArg {
    Frequency,
    LogLikelihood,
}

const EXTRACT_KINDS: [(&str, AnnotationKind); 20] = [
    ("amount", AnnotationKind::Amount),
    ("money", AnnotationKind::Money),
    ("percent", AnnotationKind::Percent),
    ("ratio", AnnotationKind::Ratio),
    ("distance", AnnotationKind::Distance),
    ("duration", AnnotationKind::Duration),
    ("date", AnnotationKind::Date),
    ("citation", AnnotationKind::Citation),
    ("regulation", AnnotationKind::Regulation),
    ("court", AnnotationKind::Court),
    ("definition", AnnotationKind::Definition),
    ("condition", AnnotationKind::Condition),
    ("constraint", AnnotationKind::Constraint),
    ("copyright", AnnotationKind::Copyright),
    ("trademark", AnnotationKind::Trademark),
    ("company", AnnotationKind::Company),
    ("geoentity", AnnotationKind::Geoentity),
    ("address", AnnotationKind::Address),
    ("pii", AnnotationKind::Pii),
    ("url", AnnotationKind::Url),
];

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Extract(args) => cmd_extract(args),
        Command::Segment(args) => cmd_segment(args),
        Command::Train(TrainCommand::SentenceAbbrevs(args)) => cmd_train_abbrevs(args),
        Command::Train(TrainCommand::DateFilter(args)) => cmd_train_dates(args),
        Command::Collocations(args) => cmd_collocations(args),
    };
    ExitCode::from(code)
}

/// Data-directory override: when LEXSCAN_DATA is set and holds the named
/// file, it replaces the bundled copy.
fn data_override(rel: &str) -> Option<String> {
    let dir = std::env::var_os("LEXSCAN_DATA")?;
    let path = Path::new(&dir).join(rel);
    fs::read_to_string(path).ok()
}

fn load_bundle(extra: &[PathBuf], locales: &[String]) -> Result<Lexicon, String> {
    let defaults = [
        ("lexicons/courts.csv", lexscan::data::courts()),
        ("lexicons/reporters.csv", lexscan::data::reporters()),
        ("lexicons/geoentities.csv", lexscan::data::geoentities()),
        ("lexicons/company_suffixes.csv", lexscan::data::company_suffixes()),
        ("lexicons/street_suffixes.csv", lexscan::data::street_suffixes()),
        ("lexicons/state_codes.csv", lexscan::data::state_codes()),
    ];
    let mut bundle = Lexicon::empty();
    for (rel, bundled) in defaults {
        let lex = match data_override(rel) {
            Some(content) => {
                Lexicon::from_str(&content, LexiconFormat::Csv).map_err(|e| format!("LEXSCAN_DATA/{rel}: {e}"))?
            }
            None => bundled.clone(),
        };
        bundle = bundle.merge(&lex);
    }
    for path in extra {
        let format = match path.extension().and_then(|e| e.to_str()) {
            Some("json") => LexiconFormat::Json,
            _ => LexiconFormat::Csv,
        };
        let lex = Lexicon::load(path, format).map_err(|e| format!("{}: {e}", path.display()))?;
        bundle = bundle.merge(&lex);
    }
    Ok(bundle.with_locales(locales.iter().cloned()))
}

fn load_sentence_model(override_path: Option<&Path>) -> Result<SentenceModel, String> {
    if let Some(p) = override_path {
        let content = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
        return SentenceModel::from_json(&content).map_err(|e| format!("{}: {e}", p.display()));
    }
    if let Some(content) = data_override("sentence_model.json") {
        return SentenceModel::from_json(&content).map_err(|e| format!("LEXSCAN_DATA/sentence_model.json: {e}"));
    }
    Ok(SentenceModel::default_english().clone())
}

fn load_date_model(override_path: Option<&Path>) -> Result<DateFilterModel, String> {
    if let Some(p) = override_path {
        let content = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
        return DateFilterModel::from_json(&content).map_err(|e| format!("{}: {e}", p.display()));
    }
    if let Some(content) = data_override("models/date_filter.json") {
        return DateFilterModel::from_json(&content)
            .map_err(|e| format!("LEXSCAN_DATA/models/date_filter.json: {e}"));
    }
    Ok(DateFilterModel::default_shipped().clone())
}

fn parse_model_overrides(specs: &[String]) -> Result<(Option<PathBuf>, Option<PathBuf>), String> {
    let mut date = None;
    let mut sentence = None;
    for spec in specs {
        match spec.split_once('=') {
            Some(("date", p)) => date = Some(PathBuf::from(p)),
            Some(("sentence", p)) => sentence = Some(PathBuf::from(p)),
            _ => return Err(format!("--model expects date=PATH or sentence=PATH, got {spec:?}")),
        }
    }
    Ok((date, sentence))
}

fn write_output(out: Option<&Path>, content: &str) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, content).map_err(|e| format!("{}: {e}", p.display())),
        None => std::io::stdout().write_all(content.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn config_error(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    2
}

/// Read inputs as UTF-8 documents; unreadable files are reported and
/// skipped, flipping the exit code to 1.
fn read_documents(inputs: &[PathBuf]) -> (Vec<Document>, bool) {
    let mut docs = Vec::new();
    let mut had_failure = false;
    for path in inputs {
        let id = path.display().to_string();
        match fs::read(path) {
            Ok(bytes) => match Document::from_bytes(&id, &bytes, "en") {
                Ok(doc) => docs.push(doc),
                Err(e) => {
                    eprintln!("error: {id}: {e}");
                    had_failure = true;
                }
            },
            Err(e) => {
                eprintln!("error: {id}: {e}");
                had_failure = true;
            }
        }
    }
    (docs, had_failure)
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool");
    pool.install(f)
}

struct ExtractContext {
    kinds: BTreeSet<AnnotationKind>,
    bundle: Lexicon,
    date_model: DateFilterModel,
    allow_partial_dates: bool,
}

/// Extractors run in the fixed kind order; amounts exclude numbers
/// consumed by the more specific quantity extractors in the same run.
fn extract_document(doc: &Document, ctx: &ExtractContext) -> Vec<Annotation> {
    let mut anns: Vec<Annotation> = Vec::new();
    let mut consumed: Vec<Span> = Vec::new();
    let wants = |k: AnnotationKind| ctx.kinds.contains(&k);

    let mut specific: Vec<Annotation> = Vec::new();
    if wants(AnnotationKind::Money) {
        specific.extend(quantities::get_money(doc));
    }
    if wants(AnnotationKind::Percent) {
        specific.extend(quantities::get_percents(doc));
    }
    if wants(AnnotationKind::Ratio) {
        specific.extend(quantities::get_ratios(doc));
    }
    if wants(AnnotationKind::Distance) {
        specific.extend(quantities::get_distances(doc));
    }
    if wants(AnnotationKind::Duration) {
        specific.extend(quantities::get_durations(doc));
    }
    consumed.extend(specific.iter().map(|a| a.span));

    if wants(AnnotationKind::Amount) {
        anns.extend(quantities::get_amounts_filtered(doc, &consumed));
    }
    anns.extend(specific);

    if wants(AnnotationKind::Date) {
        anns.extend(dates::get_dates_with(doc, &ctx.date_model, ctx.allow_partial_dates));
    }
    if wants(AnnotationKind::Citation) {
        anns.extend(legal::get_citations(doc, &ctx.bundle));
    }
    if wants(AnnotationKind::Regulation) {
        anns.extend(legal::get_regulations(doc, &ctx.bundle));
    }
    if wants(AnnotationKind::Court) {
        anns.extend(legal::get_courts(doc, &ctx.bundle));
    }
    if wants(AnnotationKind::Definition) {
        anns.extend(legal::get_definitions(doc));
    }
    if wants(AnnotationKind::Condition) {
        anns.extend(legal::get_conditions(doc));
    }
    if wants(AnnotationKind::Constraint) {
        anns.extend(legal::get_constraints(doc));
    }
    if wants(AnnotationKind::Copyright) {
        anns.extend(legal::get_copyrights(doc));
    }
    if wants(AnnotationKind::Trademark) {
        anns.extend(legal::get_trademarks(doc));
    }
    if wants(AnnotationKind::Company) {
        anns.extend(entities::get_companies(doc, &ctx.bundle));
    }
    if wants(AnnotationKind::Geoentity) {
        anns.extend(entities::get_geoentities(doc, &ctx.bundle));
    }
    if wants(AnnotationKind::Address) {
        anns.extend(entities::get_addresses(doc, &ctx.bundle));
    }
    if wants(AnnotationKind::Pii) {
        anns.extend(entities::get_pii(doc));
    }
    if wants(AnnotationKind::Url) {
        anns.extend(entities::get_urls(doc));
    }

    sort_annotations(&mut anns);
    anns
}

fn cmd_extract(args: ExtractArgs) -> u8 {
    let mut kinds = BTreeSet::new();
    for k in &args.kinds {
        let k = k.trim();
        if k == "all" {
            kinds.extend(EXTRACT_KINDS.iter().map(|(_, kind)| *kind));
            continue;
        }
        match EXTRACT_KINDS.iter().find(|(name, _)| *name == k) {
            Some((_, kind)) => {
                kinds.insert(*kind);
            }
            None => {
                let supported: Vec<&str> = EXTRACT_KINDS.iter().map(|(n, _)| *n).collect();
                return config_error(&format!("unknown extractor kind {k:?}; supported: {}", supported.join(", ")));
            }
        }
    }

    let (date_override, _) = match parse_model_overrides(&args.model) {
        Ok(v) => v,
        Err(e) => return config_error(&e),
    };
    let bundle = match load_bundle(&args.lexicon, &args.locales) {
        Ok(b) => b,
        Err(e) => return config_error(&e),
    };
    let date_model = match load_date_model(date_override.as_deref()) {
        Ok(m) => m,
        Err(e) => return config_error(&e),
    };
    let ctx = ExtractContext { kinds, bundle, date_model, allow_partial_dates: args.allow_partial_dates };

    let (docs, had_failure) = read_documents(&args.inputs);
    let blocks: Vec<String> = with_pool(args.jobs, || {
        docs.par_iter()
            .map(|doc| {
                if args.redact {
                    let spans: Vec<Span> = entities::get_pii(doc).iter().map(|a| a.span).collect();
                    entities::redact_text(doc, &spans)
                } else {
                    let mut block = String::new();
                    for a in extract_document(doc, &ctx) {
                        block.push_str(&a.to_jsonl(doc.id()));
                        block.push('\n');
                    }
                    block
                }
            })
            .collect()
    });
    if write_output(args.out.as_deref(), &blocks.concat()).is_err() {
        return 1;
    }
    if had_failure {
        1
    } else {
        0
    }
}

fn cmd_segment(args: SegmentArgs) -> u8 {
    let model = match load_sentence_model(args.model.as_deref()) {
        Ok(m) => m,
        Err(e) => return config_error(&e),
    };
    let any = args.sentences || args.paragraphs || args.sections || args.pages || args.titles;
    let sentences = args.sentences || !any;

    let (docs, had_failure) = read_documents(&args.inputs);
    let rules = HeadingRule::defaults();
    let blocks: Vec<String> = with_pool(args.jobs, || {
        docs.par_iter()
            .map(|doc| {
                let mut anns: Vec<Annotation> = Vec::new();
                if sentences {
                    for (i, span) in segment::sentence_spans(doc, &model).iter().enumerate() {
                        anns.push(Annotation::at(
                            doc,
                            AnnotationKind::Sentence,
                            *span,
                            serde_json::json!({ "index": i }),
                        ));
                    }
                }
                if args.paragraphs {
                    for (i, span) in segment::paragraph_spans(doc).iter().enumerate() {
                        anns.push(Annotation::at(
                            doc,
                            AnnotationKind::Paragraph,
                            *span,
                            serde_json::json!({ "index": i }),
                        ));
                    }
                }
                if args.sections {
                    for (i, span) in segment::section_spans(doc, &rules).iter().enumerate() {
                        anns.push(Annotation::at(
                            doc,
                            AnnotationKind::Section,
                            *span,
                            serde_json::json!({ "index": i }),
                        ));
                    }
                }
                if args.pages {
                    for (i, span) in segment::page_spans(doc).iter().enumerate() {
                        anns.push(Annotation::at(doc, AnnotationKind::Page, *span, serde_json::json!({ "index": i })));
                    }
                }
                if args.titles {
                    anns.extend(segment::title_spans(doc, &rules));
                }
                if args.count {
                    return format!("{}\n", anns.len());
                }
                sort_annotations(&mut anns);
                let mut block = String::new();
                for a in anns {
                    block.push_str(&a.to_jsonl(doc.id()));
                    block.push('\n');
                }
                block
            })
            .collect()
    });
    if write_output(args.out.as_deref(), &blocks.concat()).is_err() {
        return 1;
    }
    if had_failure {
        1
    } else {
        0
    }
}

fn corpus_files(inputs: &[PathBuf]) -> Vec<PathBuf> {
    let mut files = Vec::new();
    for path in inputs {
        if path.is_dir() {
            let mut entries: Vec<PathBuf> = fs::read_dir(path)
                .map(|rd| rd.filter_map(|e| e.ok()).map(|e| e.path()).filter(|p| p.is_file()).collect())
                .unwrap_or_default();
            entries.sort();
            files.extend(entries);
        } else {
            files.push(path.clone());
        }
    }
    files
}

fn cmd_train_abbrevs(args: TrainAbbrevArgs) -> u8 {
    let files = corpus_files(&args.inputs);
    let (docs, had_failure) = read_documents(&files);
    if docs.is_empty() {
        return config_error("training corpus is empty");
    }
    let model = match segment::train_abbreviations(&docs, args.threshold) {
        Ok(m) => m,
        Err(e) => return config_error(&e.to_string()),
    };
    let seed = SentenceModel::default_english().abbreviations.len();
    println!(
        "scored {} documents; {} abbreviations ({} learned beyond the seed set)",
        docs.len(),
        model.abbreviations.len(),
        model.abbreviations.len().saturating_sub(seed),
    );
    if let Err(e) = fs::write(&args.out, model.to_json()) {
        return config_error(&format!("{}: {e}", args.out.display()));
    }
    if had_failure {
        1
    } else {
        0
    }
}

fn cmd_train_dates(args: TrainDateArgs) -> u8 {
    let content = match fs::read_to_string(&args.data) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", args.data.display());
            return 1;
        }
    };
    let rows = match dates::load_training_csv(&content) {
        Ok(r) => r,
        Err(e) => return config_error(&e.to_string()),
    };
    let model = match dates::train_date_filter(&rows, args.epochs, args.lr) {
        Ok(m) => m,
        Err(e) => return config_error(&e.to_string()),
    };
    let examples: Vec<(Vec<f64>, bool)> =
        rows.iter().map(|r| (dates::featurize_parts(&r.text, &r.context), r.label)).collect();
    let (loss, _, _) = dates::loss_and_gradient(&model.weights, model.bias, &examples);
    println!("{} candidates scored; final loss {loss:.6}", rows.len());
    if let Err(e) = fs::write(&args.out, model.to_json()) {
        return config_error(&format!("{}: {e}", args.out.display()));
    }
    0
}

fn cmd_collocations(args: CollocationsArgs) -> u8 {
    if !(args.n == 2 || args.n == 3) {
        return config_error("--n must be 2 or 3");
    }
    let files = corpus_files(&args.inputs);
    let (docs, had_failure) = read_documents(&files);
    if docs.is_empty() {
        return config_error("collocation corpus is empty");
    }
    let scoring = match args.scoring {
        ScoringArg::Frequency => CollocationScoring::Frequency,
        ScoringArg::LogLikelihood => CollocationScoring::LogLikelihood,
    };
    let table = match collocations(&docs, args.n, args.top, scoring) {
        Ok(t) => t,
        Err(e) => return config_error(&e.to_string()),
    };
    if write_output(args.out.as_deref(), &table.to_csv()).is_err() {
        return 1;
    }
    if had_failure {
        1
    } else {
        0
    }
}
