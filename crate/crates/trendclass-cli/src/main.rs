//! Pipeline front end. Every subcommand reads and writes files, with `-`
//! standing for stdin or stdout, so stages compose with shell pipes:
//!
//! ```text
//! trendclass synth --seed 1 | trendclass features | head
//! ```
//!
//! Tabular output is CSV; evaluation reports are JSON. Errors exit nonzero
//! after a single diagnostic line on stderr.

use std::collections::HashSet;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use trendclass::classifier::{
    committee_predict, load_model, save_model, train_one_vs_all, OneVsAllModel, RepresentationKind,
};
use trendclass::corpus::{load_corpus, save_corpus, Corpus, TrendLabel};
use trendclass::eval::{run_protocol, ProtocolOptions};
use trendclass::features::{extract_features, Feature, FEATURE_COUNT};
use trendclass::synth::{analyze_distributions, default_profiles, generate_synthetic_corpus};
use trendclass::text::{stopwords, top_terms};

#[derive(Parser)]
#[command(
    name = "trendclass",
    version,
    about = "Classify trending topics into news, ongoing events, memes, and commemoratives from their earliest tweets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a labeled synthetic corpus as JSON lines
    Synth(SynthArgs),
    /// Emit the social feature vector of every trend as CSV
    Features(IoArgs),
    /// Train one-vs-all linear models and save them as JSON
    Train(TrainArgs),
    /// Score trends with one saved model or a two-model committee
    Predict(PredictArgs),
    /// Run the repeated-split evaluation protocol and report JSON
    Evaluate(EvaluateArgs),
    /// Summarize per-class feature distributions as quartile CSV
    Analyze(AnalyzeArgs),
    /// List the most frequent terms of each class as CSV
    TopTerms(TopTermsArgs),
}

#[derive(Args)]
struct IoArgs {
    /// Input corpus (JSON lines), `-` for stdin
    #[arg(long = "in", value_name = "FILE", default_value = "-")]
    input: String,
    /// Output file, `-` for stdout
    #[arg(long = "out", value_name = "FILE", default_value = "-")]
    output: String,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    trends_per_class: usize,
    #[arg(long, default_value_t = 200)]
    tweets_per_trend: usize,
    /// Output file, `-` for stdout
    #[arg(long = "out", value_name = "FILE", default_value = "-")]
    output: String,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Rep {
    /// The fifteen standardized social features
    Social,
    /// Term counts over the training vocabulary
    Bow,
    /// Both models, forming a committee
    Both,
}

#[derive(Args)]
struct TrainArgs {
    /// Input corpus (JSON lines), `-` for stdin
    #[arg(long = "in", value_name = "FILE", default_value = "-")]
    input: String,
    #[arg(long, value_enum, default_value_t = Rep::Social)]
    rep: Rep,
    /// Soft-margin penalty
    #[arg(long = "C", default_value_t = 5.0)]
    c: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Extra stopword list files, one word per line, added to the built-ins
    #[arg(long = "stopwords", value_name = "FILE")]
    stopwords: Vec<PathBuf>,
    /// Model output file (the social model when `--rep both`)
    #[arg(long = "out", value_name = "FILE", default_value = "-")]
    output: String,
    /// Second model output (the bag-of-words model); requires `--rep both`
    #[arg(long = "out2", value_name = "FILE")]
    output2: Option<String>,
}

#[derive(Args)]
struct PredictArgs {
    /// Saved model file
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
    /// Optional second model; predictions then sum both margin sets
    #[arg(long, value_name = "FILE")]
    model2: Option<PathBuf>,
    /// Input corpus (JSON lines), `-` for stdin
    #[arg(long = "in", value_name = "FILE", default_value = "-")]
    input: String,
    /// Output file, `-` for stdout
    #[arg(long = "out", value_name = "FILE", default_value = "-")]
    output: String,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Input corpus (JSON lines), `-` for stdin
    #[arg(long = "in", value_name = "FILE", default_value = "-")]
    input: String,
    #[arg(long, value_enum, default_value_t = Rep::Social)]
    rep: Rep,
    /// Soft-margin penalty
    #[arg(long = "C", default_value_t = 5.0)]
    c: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 600)]
    train_size: usize,
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    /// Extra stopword list files, one word per line, added to the built-ins
    #[arg(long = "stopwords", value_name = "FILE")]
    stopwords: Vec<PathBuf>,
    /// Output file, `-` for stdout
    #[arg(long = "out", value_name = "FILE", default_value = "-")]
    output: String,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input corpus (JSON lines), `-` for stdin
    #[arg(long = "in", value_name = "FILE", default_value = "-")]
    input: String,
    /// List the K most frequent terms per class instead of feature quartiles
    #[arg(long = "top-terms", value_name = "K")]
    top_terms: Option<usize>,
    /// Extra stopword list files, one word per line, added to the built-ins
    #[arg(long = "stopwords", value_name = "FILE")]
    stopwords: Vec<PathBuf>,
    /// Output file, `-` for stdout
    #[arg(long = "out", value_name = "FILE", default_value = "-")]
    output: String,
}

#[derive(Args)]
struct TopTermsArgs {
    /// Input corpus (JSON lines), `-` for stdin
    #[arg(long = "in", value_name = "FILE", default_value = "-")]
    input: String,
    /// Terms per class
    #[arg(long, default_value_t = 15)]
    k: usize,
    /// Extra stopword list files, one word per line, added to the built-ins
    #[arg(long = "stopwords", value_name = "FILE")]
    stopwords: Vec<PathBuf>,
    /// Output file, `-` for stdout
    #[arg(long = "out", value_name = "FILE", default_value = "-")]
    output: String,
}

fn open_input(path: &str) -> Result<Box<dyn BufRead>> {
    if path == "-" {
        Ok(Box::new(BufReader::new(io::stdin())))
    } else {
        let file = File::open(path).with_context(|| format!("cannot open {path}"))?;
        Ok(Box::new(BufReader::new(file)))
    }
}

fn open_output(path: &str) -> Result<Box<dyn Write>> {
    if path == "-" {
        Ok(Box::new(BufWriter::new(io::stdout())))
    } else {
        let file = File::create(path).with_context(|| format!("cannot create {path}"))?;
        Ok(Box::new(BufWriter::new(file)))
    }
}

fn read_corpus(path: &str) -> Result<Corpus> {
    let reader = open_input(path)?;
    load_corpus(reader).with_context(|| format!("reading corpus from {path}"))
}

fn load_stopwords(paths: &[PathBuf]) -> Result<HashSet<String>> {
    let mut set = stopwords::defaults();
    for path in paths {
        let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
        stopwords::extend_from_reader(&mut set, BufReader::new(file))
            .with_context(|| format!("reading stopwords from {}", path.display()))?;
    }
    Ok(set)
}

fn read_model(path: &Path) -> Result<OneVsAllModel> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    load_model(BufReader::new(file)).with_context(|| format!("loading {}", path.display()))
}

fn representations(rep: Rep) -> Vec<RepresentationKind> {
    match rep {
        Rep::Social => vec![RepresentationKind::Social],
        Rep::Bow => vec![RepresentationKind::Bow],
        Rep::Both => vec![RepresentationKind::Social, RepresentationKind::Bow],
    }
}

fn run_synth(args: SynthArgs) -> Result<()> {
    let corpus = generate_synthetic_corpus(
        &default_profiles(),
        args.trends_per_class,
        args.tweets_per_trend,
        args.seed,
    )?;
    let writer = open_output(&args.output)?;
    save_corpus(&corpus, writer)?;
    Ok(())
}

fn run_features(args: IoArgs) -> Result<()> {
    let corpus = read_corpus(&args.input)?;
    let mut csv = csv::Writer::from_writer(open_output(&args.output)?);
    let mut header = vec!["topic".to_string(), "label".to_string()];
    header.extend((0..FEATURE_COUNT).map(|i| format!("f{i}")));
    csv.write_record(&header)?;
    for trend in corpus.trends() {
        let features = extract_features(trend)?;
        let mut record = vec![
            trend.topic().to_string(),
            trend
                .label()
                .map(|l| l.as_str().to_string())
                .unwrap_or_default(),
        ];
        record.extend(features.values().iter().map(|v| format!("{v:.6}")));
        csv.write_record(&record)?;
    }
    csv.flush()?;
    Ok(())
}

fn run_train(args: TrainArgs) -> Result<()> {
    match (args.rep, &args.output2) {
        (Rep::Both, None) => bail!("--rep both trains two models; add --out2 for the second"),
        (Rep::Social | Rep::Bow, Some(_)) => {
            bail!("--out2 only applies with --rep both")
        }
        _ => {}
    }
    let corpus = read_corpus(&args.input)?;
    let stop = load_stopwords(&args.stopwords)?;
    let outputs: Vec<&str> = match &args.output2 {
        Some(second) => vec![args.output.as_str(), second.as_str()],
        None => vec![args.output.as_str()],
    };
    for (rep, out) in representations(args.rep).into_iter().zip(outputs) {
        let model = train_one_vs_all(&corpus, rep, args.c, args.seed, &stop)?;
        save_model(&model, open_output(out)?)?;
    }
    Ok(())
}

fn run_predict(args: PredictArgs) -> Result<()> {
    let mut models = vec![read_model(&args.model)?];
    if let Some(path) = &args.model2 {
        models.push(read_model(path)?);
    }
    let corpus = read_corpus(&args.input)?;
    let mut csv = csv::Writer::from_writer(open_output(&args.output)?);
    let mut header = vec!["topic".to_string(), "predicted".to_string()];
    header.extend(TrendLabel::ALL.iter().map(|l| format!("margin_{l}")));
    csv.write_record(&header)?;
    for trend in corpus.trends() {
        let reports = models
            .iter()
            .map(|m| m.margins(trend))
            .collect::<Result<Vec<_>, _>>()?;
        let joint = committee_predict(&reports)?;
        let mut record = vec![trend.topic().to_string(), joint.predicted().to_string()];
        record.extend(joint.margins().iter().map(|m| format!("{m:.6}")));
        csv.write_record(&record)?;
    }
    csv.flush()?;
    Ok(())
}

fn run_evaluate(args: EvaluateArgs) -> Result<()> {
    let corpus = read_corpus(&args.input)?;
    let stop = load_stopwords(&args.stopwords)?;
    let options = ProtocolOptions {
        representations: representations(args.rep),
        c: args.c,
        seed: args.seed,
        train_size: args.train_size,
        repeats: args.repeats,
        stopwords: stop,
    };
    let report = run_protocol(&corpus, &options)?;
    let mut writer = open_output(&args.output)?;
    serde_json::to_writer_pretty(&mut writer, &report)?;
    writeln!(writer)?;
    writer.flush()?;
    Ok(())
}

fn run_analyze(args: AnalyzeArgs) -> Result<()> {
    let corpus = read_corpus(&args.input)?;
    if let Some(k) = args.top_terms {
        let stop = load_stopwords(&args.stopwords)?;
        return write_top_terms(&corpus, k, &stop, open_output(&args.output)?);
    }
    let report = analyze_distributions(&corpus)?;
    let mut csv = csv::Writer::from_writer(open_output(&args.output)?);
    csv.write_record(["class", "feature", "min", "q1", "median", "q3", "max"])?;
    for class in &report.classes {
        for (feature, summary) in Feature::ALL.iter().zip(&class.features) {
            csv.write_record([
                class.label.as_str(),
                feature.name(),
                &format!("{:.6}", summary.min),
                &format!("{:.6}", summary.q1),
                &format!("{:.6}", summary.median),
                &format!("{:.6}", summary.q3),
                &format!("{:.6}", summary.max),
            ])?;
        }
    }
    csv.flush()?;
    Ok(())
}

fn write_top_terms(
    corpus: &Corpus,
    k: usize,
    stop: &HashSet<String>,
    writer: Box<dyn Write>,
) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["class", "rank", "term", "count"])?;
    for class in TrendLabel::ALL {
        for (rank, (term, count)) in top_terms(corpus, class, k, stop).iter().enumerate() {
            csv.write_record([
                class.as_str(),
                &(rank + 1).to_string(),
                term,
                &count.to_string(),
            ])?;
        }
    }
    csv.flush()?;
    Ok(())
}

fn run_top_terms(args: TopTermsArgs) -> Result<()> {
    let corpus = read_corpus(&args.input)?;
    let stop = load_stopwords(&args.stopwords)?;
    write_top_terms(&corpus, args.k, &stop, open_output(&args.output)?)
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Synth(args) => run_synth(args),
        Command::Features(args) => run_features(args),
        Command::Train(args) => run_train(args),
        Command::Predict(args) => run_predict(args),
        Command::Evaluate(args) => run_evaluate(args),
        Command::Analyze(args) => run_analyze(args),
        Command::TopTerms(args) => run_top_terms(args),
    }
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
