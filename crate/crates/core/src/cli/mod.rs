//! The `dactx` command line.
//!
//! Every run setting can come from a TOML file given with `--config` and be
//! overridden by the matching flag. Configuration errors exit with status 2,
//! other failures with status 1.

mod manifest;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{LabelSource, RunConfig};
use crate::corpus::{
    load_corpus, write_segments, Corpus, CorpusFormat, LabelMapping, SpeakerFilter, TagsetVariant,
};
use crate::error::{Error, Result};
use crate::eval::{
    cascade_experiment, cross_validate, fit, influence_experiment, keyed_samples, make_folds,
    read_grid_csv, wilcoxon, write_grid_csv, write_label_accuracy_csv, write_markdown,
    write_summary_csv, DictionaryScope, ExperimentKind, ExperimentResult, Granularity, GridRow,
};
use crate::features::{
    write_sparse_dataset, FeatureDictionary, LabelDimensions, MarkupMode, PreparedCorpus,
};
use crate::svm::{write_dictionary, FeatureSettings, ModelBundle};
use crate::synth::{generate, SynthParams};

pub use manifest::write_manifest;

#[derive(Debug, Parser)]
#[command(
    name = "dactx",
    version,
    about = "Dialog act recognition with context features"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a corpus and print its label distribution.
    Parse(ParseArgs),
    /// Write the sparse feature vectors of a corpus.
    Featurize(FeaturizeArgs),
    /// Train a model on a whole corpus.
    Train(TrainArgs),
    /// Label a corpus with a trained model.
    Predict(PredictArgs),
    /// Cross-validate one context setting.
    Cv(RunArgs),
    /// Run the context influence or cascaded label experiment.
    Experiment(RunArgs),
    /// Wilcoxon signed-rank test between per-fold accuracies of two grids.
    Significance(SignificanceArgs),
    /// Write a synthetic Markov-chain corpus in segment dump format.
    Generate(GenerateArgs),
}

fn parse_format(s: &str) -> std::result::Result<CorpusFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_variant(s: &str) -> std::result::Result<TagsetVariant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_markup(s: &str) -> std::result::Result<MarkupMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_from_str<T: std::str::FromStr<Err = Error>>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct ParseArgs {
    pub path: PathBuf,
    #[arg(long, value_parser = parse_format, default_value = "swda")]
    pub format: CorpusFormat,
    #[arg(long, value_parser = parse_variant)]
    pub variant: Option<TagsetVariant>,
    /// `default` or a mapping file.
    #[arg(long)]
    pub mapping: Option<String>,
    /// Only count segments of this speaker.
    #[arg(long)]
    pub targets: Option<String>,
    /// Also write the parsed corpus as a segment dump.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

/// Settings shared by every command that loads a corpus and builds features.
#[derive(Debug, Args, Default)]
pub struct RunArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,

    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long, value_parser = parse_format)]
    pub format: Option<CorpusFormat>,
    #[arg(long, value_parser = parse_variant)]
    pub variant: Option<TagsetVariant>,
    #[arg(long)]
    pub mapping: Option<String>,
    #[arg(long, value_parser = parse_markup)]
    pub markup: Option<MarkupMode>,
    #[arg(long)]
    pub targets: Option<String>,

    #[arg(long)]
    pub max_n: Option<usize>,
    #[arg(long)]
    pub cumulative: Option<bool>,
    #[arg(long, value_parser = parse_from_str::<DictionaryScope>)]
    pub dictionary: Option<DictionaryScope>,

    #[arg(long)]
    pub cost: Option<f64>,
    #[arg(long)]
    pub stop_tol: Option<f64>,
    #[arg(long)]
    pub max_epochs: Option<usize>,
    #[arg(long)]
    pub bias: Option<f64>,

    /// none, untagged, tagged, labels or labels-all.
    #[arg(long)]
    pub context_mode: Option<String>,
    #[arg(long)]
    pub n_prev: Option<usize>,
    #[arg(long, value_parser = parse_from_str::<LabelSource>)]
    pub label_source: Option<LabelSource>,
    #[arg(long, value_parser = parse_from_str::<LabelDimensions>)]
    pub dimensions: Option<LabelDimensions>,

    #[arg(long, value_parser = parse_from_str::<ExperimentKind>)]
    pub kind: Option<ExperimentKind>,
    #[arg(long)]
    pub folds: Option<usize>,
    #[arg(long, value_parser = parse_from_str::<Granularity>)]
    pub granularity: Option<Granularity>,
    /// Comma-separated context modes to sweep.
    #[arg(long, value_delimiter = ',')]
    pub modes: Option<Vec<String>>,
    #[arg(long)]
    pub max_prev: Option<usize>,
}

impl RunArgs {
    /// The configuration file, if any, with every given flag applied on top.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($field:ident => $($target:tt)+) => {
                if let Some(v) = &self.$field {
                    $($target)+ = v.clone().into();
                }
            };
        }
        set!(seed => c.seed);
        set!(output => c.output);
        set!(jobs => c.jobs);
        set!(corpus => c.corpus.path);
        set!(format => c.corpus.format);
        set!(variant => c.corpus.variant);
        set!(mapping => c.corpus.mapping);
        set!(markup => c.corpus.markup);
        if let Some(t) = &self.targets {
            c.corpus.targets = SpeakerFilter::from(t.clone());
        }
        set!(max_n => c.features.max_n);
        set!(cumulative => c.features.cumulative);
        set!(dictionary => c.features.dictionary);
        set!(cost => c.svm.cost);
        set!(stop_tol => c.svm.stop_tol);
        set!(max_epochs => c.svm.max_epochs);
        set!(bias => c.svm.bias);
        set!(context_mode => c.context.mode);
        set!(n_prev => c.context.n_prev);
        set!(label_source => c.context.label_source);
        set!(dimensions => c.context.dimensions);
        set!(kind => c.experiment.kind);
        set!(folds => c.experiment.folds);
        set!(granularity => c.experiment.granularity);
        set!(modes => c.experiment.modes);
        set!(max_prev => c.experiment.max_prev);
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Args)]
pub struct FeaturizeArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Dataset file; its dictionary goes to `<out>.dict`. Stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Model file; the dictionary is written next to it as `<model>.dict`.
    #[arg(long)]
    pub model: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long)]
    pub model: PathBuf,
    /// Prediction table; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SignificanceArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    /// Cell of the first grid to compare, as `mode:n_prev`.
    #[arg(long)]
    pub row_a: Option<String>,
    /// Cell of the second grid; defaults to the cell given for the first.
    #[arg(long)]
    pub row_b: Option<String>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = SynthParams::default().n_dialogs)]
    pub dialogs: usize,
    #[arg(long, default_value_t = SynthParams::default().segments_per_dialog)]
    pub segments: usize,
    #[arg(long, default_value_t = SynthParams::default().cue_prob)]
    pub cue_prob: f64,
    #[arg(long, default_value_t = SynthParams::default().p_next)]
    pub p_next: f64,
}

/// Parses arguments, runs the command and returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                2
            } else {
                1
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Parse(a) => cmd_parse(a),
        Command::Featurize(a) => with_jobs(&a.run, |c| cmd_featurize(c, a.out.as_deref())),
        Command::Train(a) => with_jobs(&a.run, |c| cmd_train(c, &a.model)),
        Command::Predict(a) => with_jobs(&a.run, |c| cmd_predict(c, &a.model, a.out.as_deref())),
        Command::Cv(a) => with_jobs(a, cmd_cv),
        Command::Experiment(a) => with_jobs(a, cmd_experiment),
        Command::Significance(a) => cmd_significance(a),
        Command::Generate(a) => cmd_generate(a),
    }
}

fn with_jobs(args: &RunArgs, f: impl FnOnce(&RunConfig) -> Result<()> + Send) -> Result<()> {
    let config = args.resolve()?;
    match config.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {n} worker threads: {e}")))?
            .install(|| f(&config)),
        None => f(&config),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::file(dir, e))?;
    }
    Ok(BufWriter::new(
        File::create(path).map_err(|e| Error::file(path, e))?,
    ))
}

fn output_or_stdout(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load(config: &RunConfig) -> Result<Corpus> {
    let mapping = config.mapping()?;
    load_corpus(
        &config.corpus_path()?,
        config.corpus.format,
        config.variant(),
        mapping.as_ref(),
    )
}

fn cmd_parse(a: &ParseArgs) -> Result<()> {
    let variant = a.variant.unwrap_or(match a.format {
        CorpusFormat::Swda => TagsetVariant::Swda44,
        _ => TagsetVariant::Iso,
    });
    let mapping = match a.mapping.as_deref() {
        None => None,
        Some("default") => Some(LabelMapping::default_lego()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
            Some(LabelMapping::parse(&text, path)?)
        }
    };
    let corpus = load_corpus(&a.path, a.format, variant, mapping.as_ref())?;
    let filter = a
        .targets
        .clone()
        .map(SpeakerFilter::from)
        .unwrap_or_default();
    corpus.filter_segments(&filter)?;
    let dist = corpus.label_distribution_where(|s| filter.matches(&s.speaker));
    let mut out = BufWriter::new(io::stdout().lock());
    writeln!(out, "dialogs\t{}", corpus.dialogs.len())?;
    writeln!(
        out,
        "segments\t{}",
        dist.iter().map(|l| l.count).sum::<usize>()
    )?;
    writeln!(out, "variant\t{}", corpus.variant)?;
    writeln!(out, "labels\t{}", dist.len())?;
    writeln!(out)?;
    writeln!(out, "label\tcount\tpercent")?;
    for row in &dist {
        writeln!(out, "{}\t{}\t{:.2}", row.label, row.count, row.percent)?;
    }
    out.flush()?;
    if let Some(path) = &a.dump {
        let mut w = create(path)?;
        write_segments(&corpus, &mut w)?;
        w.flush().map_err(|e| Error::file(path, e))?;
    }
    Ok(())
}

fn target_segments(corpus: &Corpus, config: &RunConfig) -> Result<Vec<(usize, usize)>> {
    let targets = corpus.filter_segments(&config.corpus.targets)?;
    Ok(corpus
        .dialogs
        .iter()
        .enumerate()
        .flat_map(|(d, dialog)| (0..dialog.len()).map(move |s| (d, s)))
        .filter(|&(d, s)| targets.is_target(d, s))
        .collect())
}

fn require_manual(config: &RunConfig, what: &str) -> Result<()> {
    if config.context.label_source == LabelSource::Predicted && config.context_spec()?.uses_labels()
    {
        return Err(Error::Config(format!(
            "{what} uses manual labels for label context; predicted labels are available \
             in `predict` and in the cascade experiment"
        )));
    }
    Ok(())
}

fn cmd_featurize(config: &RunConfig, out: Option<&Path>) -> Result<()> {
    require_manual(config, "featurize")?;
    let corpus = load(config)?;
    let ctx = config.context_spec()?;
    let prepared = PreparedCorpus::new(&corpus, config.feature_config()?);
    let segments = target_segments(&corpus, config)?;
    let keyed = keyed_samples(&prepared, &segments, ctx, &prepared.manual_labels);
    let dict = FeatureDictionary::build(&keyed);
    let vectors: Vec<_> = keyed.iter().map(|k| dict.vectorize(k)).collect();
    let mut w = output_or_stdout(out)?;
    write_sparse_dataset(
        segments
            .iter()
            .zip(&vectors)
            .map(|(&(d, s), x)| (prepared.gold[d][s], corpus.dialogs[d].id.as_str(), x)),
        &mut w,
    )?;
    w.flush()?;
    if let Some(path) = out {
        let dict_path = crate::svm::dictionary_path(path);
        let mut w = create(&dict_path)?;
        let settings = FeatureSettings {
            features: config.feature_config()?,
            context: ctx,
            aux_dimensions: corpus.aux_dimensions.clone(),
        };
        write_dictionary(&dict, prepared.space(), &settings, &mut w)?;
    }
    Ok(())
}

fn cmd_train(config: &RunConfig, model_path: &Path) -> Result<()> {
    require_manual(config, "train")?;
    let corpus = load(config)?;
    let ctx = config.context_spec()?;
    let prepared = PreparedCorpus::new(&corpus, config.feature_config()?);
    let segments = target_segments(&corpus, config)?;
    let keyed = keyed_samples(&prepared, &segments, ctx, &prepared.manual_labels);
    let dict = FeatureDictionary::build(&keyed);
    let xs: Vec<_> = keyed.iter().map(|k| dict.vectorize(k)).collect();
    let (model, _) = fit(
        &prepared,
        &segments,
        &xs,
        dict.len(),
        &config.solver_params()?,
        &corpus.label_set,
    )?;
    let bundle = ModelBundle {
        model,
        dictionary: dict,
        featurizer: prepared.featurizer,
        settings: FeatureSettings {
            features: config.feature_config()?,
            context: ctx,
            aux_dimensions: corpus.aux_dimensions.clone(),
        },
    };
    bundle.save(model_path)?;
    eprintln!(
        "trained {} classes over {} features on {} segments",
        bundle.model.n_classes(),
        bundle.model.n_features,
        segments.len()
    );
    Ok(())
}

fn cmd_predict(config: &RunConfig, model_path: &Path, out: Option<&Path>) -> Result<()> {
    let bundle = ModelBundle::load(model_path)?;
    let corpus = load(config)?;
    let ctx = bundle.settings.context;
    let unknown: Vec<&str> = corpus
        .label_set
        .iter()
        .filter(|l| !bundle.model.labels.contains(l))
        .map(String::as_str)
        .collect();
    if !unknown.is_empty() {
        return Err(Error::Mismatch(format!(
            "corpus labels unknown to the model: {}",
            unknown.join(", ")
        )));
    }
    if matches!(
        ctx.mode(),
        crate::features::ContextMode::DaLabels(LabelDimensions::All)
    ) && corpus.aux_dimensions != bundle.settings.aux_dimensions
    {
        return Err(Error::Mismatch(format!(
            "model uses label dimensions [{}] but the corpus has [{}]",
            bundle.settings.aux_dimensions.join(", "),
            corpus.aux_dimensions.join(", ")
        )));
    }
    let prepared = PreparedCorpus::with_featurizer(&corpus, bundle.featurizer.clone());
    let label_ids: Vec<u32> = bundle
        .model
        .labels
        .iter()
        .map(|l| {
            prepared
                .space()
                .labels
                .get(l)
                .expect("model labels are interned")
        })
        .collect();
    let online = config.context.label_source == LabelSource::Predicted && ctx.uses_labels();
    let mut track = prepared.manual_labels.clone();
    let targets = corpus.filter_segments(&config.corpus.targets)?;

    let mut w = output_or_stdout(out)?;
    writeln!(w, "dialog_id\tindex\tspeaker\tgold\tpredicted")?;
    let (mut hits, mut total) = (0usize, 0usize);
    for (d, dialog) in corpus.dialogs.iter().enumerate() {
        for (s, seg) in dialog.segments.iter().enumerate() {
            let x = bundle
                .dictionary
                .vectorize(&prepared.sample(d, s, ctx, &track));
            let p = bundle.model.predict(&x)?;
            if online {
                track.labels[d][s][0] = label_ids[p];
            }
            if !targets.is_target(d, s) {
                continue;
            }
            let label = &bundle.model.labels[p];
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}",
                dialog.id, s, seg.speaker, seg.label, label
            )?;
            hits += usize::from(*label == seg.label);
            total += 1;
        }
    }
    w.flush()?;
    eprintln!(
        "accuracy\t{:.6}\t({hits}/{total})",
        hits as f64 / total as f64
    );
    Ok(())
}

fn cmd_cv(config: &RunConfig) -> Result<()> {
    require_manual(config, "cv")?;
    let corpus = load(config)?;
    let targets = corpus.filter_segments(&config.corpus.targets)?;
    let prepared = PreparedCorpus::new(&corpus, config.feature_config()?);
    let folds = make_folds(
        &corpus,
        &targets,
        config.experiment.folds,
        config.experiment.granularity,
        config.seed()?,
    )?;
    let ctx = config.context_spec()?;
    let cv = cross_validate(
        &prepared,
        &corpus.label_set,
        &folds,
        ctx,
        &prepared.manual_labels,
        &config.cv_settings()?,
    )?;
    let result = ExperimentResult {
        kind: ExperimentKind::Influence,
        rows: vec![GridRow {
            mode: ctx.mode().name().to_string(),
            n_prev: ctx.n_prev(),
            fold_accuracies: cv.fold_accuracies.clone(),
            mean: cv.mean_accuracy(),
            pooled: cv.pooled_accuracy(),
            vs_previous: None,
        }],
        label_accuracy: vec![],
    };
    let mut out = io::stdout().lock();
    for (f, acc) in cv.fold_accuracies.iter().enumerate() {
        writeln!(out, "fold {f}\t{acc:.6}")?;
    }
    writeln!(out, "mean\t{:.6}", cv.mean_accuracy())?;
    writeln!(out, "pooled\t{:.6}", cv.pooled_accuracy())?;
    if let Some(dir) = &config.output {
        write_csvs(dir, &result)?;
    }
    Ok(())
}

fn write_csvs(dir: &Path, result: &ExperimentResult) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::file(dir, e))?;
    let mut written = Vec::new();
    let mut emit = |name: &str, f: &dyn Fn(&mut dyn Write) -> Result<()>| -> Result<()> {
        let path = dir.join(name);
        let mut w = create(&path)?;
        f(&mut w)?;
        w.flush().map_err(|e| Error::file(&path, e))?;
        written.push(path);
        Ok(())
    };
    emit("grid.csv", &|w| write_grid_csv(result, w))?;
    emit("summary.csv", &|w| write_summary_csv(result, w))?;
    emit("table.md", &|w| write_markdown(result, w))?;
    if !result.label_accuracy.is_empty() {
        emit("label_accuracy.csv", &|w| {
            write_label_accuracy_csv(result, w)
        })?;
    }
    Ok(written)
}

fn cmd_experiment(config: &RunConfig) -> Result<()> {
    let dir = config.output.clone().ok_or_else(|| {
        Error::Config("the experiment needs an output directory (--output)".into())
    })?;
    let settings = config.experiment_settings()?;
    let corpus_path = config.corpus_path()?;
    let corpus = load(config)?;
    let targets = corpus.filter_segments(&config.corpus.targets)?;
    let prepared = PreparedCorpus::new(&corpus, config.feature_config()?);
    let result = match config.experiment.kind {
        ExperimentKind::Influence => {
            require_manual(config, "the influence experiment")?;
            influence_experiment(&corpus, &prepared, &targets, &settings)?
        }
        ExperimentKind::Cascade => cascade_experiment(&corpus, &prepared, &targets, &settings)?,
    };
    let mut written = write_csvs(&dir, &result)?;
    let config_path = dir.join("config.toml");
    std::fs::write(&config_path, config.to_toml()).map_err(|e| Error::file(&config_path, e))?;
    written.push(config_path);
    let command = format!("experiment {}", config.experiment.kind);
    write_manifest(&dir.join("manifest.toml"), &command, &corpus_path, &written)?;
    let mut out = io::stdout().lock();
    write_markdown(&result, &mut out)?;
    Ok(())
}

fn parse_cell(s: &str) -> Result<(String, usize)> {
    s.rsplit_once(':')
        .and_then(|(m, n)| n.parse().ok().map(|n| (m.to_string(), n)))
        .ok_or_else(|| Error::Config(format!("expected a cell as `mode:n_prev`, got `{s}`")))
}

fn cmd_significance(a: &SignificanceArgs) -> Result<()> {
    let open = |p: &Path| File::open(p).map_err(|e| Error::file(p, e));
    let grid_a = read_grid_csv(open(&a.a)?)?;
    let grid_b = read_grid_csv(open(&a.b)?)?;
    let pairs: Vec<((String, usize), (String, usize))> = match (&a.row_a, &a.row_b) {
        (None, None) => grid_a
            .keys()
            .filter(|k| grid_b.contains_key(*k))
            .map(|k| (k.clone(), k.clone()))
            .collect(),
        (Some(ra), rb) => {
            let ka = parse_cell(ra)?;
            let kb = rb
                .as_deref()
                .map(parse_cell)
                .transpose()?
                .unwrap_or_else(|| ka.clone());
            vec![(ka, kb)]
        }
        (None, Some(_)) => return Err(Error::Config("--row-b requires --row-a".into())),
    };
    if pairs.is_empty() {
        return Err(Error::InvalidInput("the two grids share no cell".into()));
    }
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "cell_a\tcell_b\tn\tw_plus\tw_minus\tp_value\tsignificant"
    )?;
    for (ka, kb) in pairs {
        let fetch = |g: &std::collections::BTreeMap<(String, usize), Vec<f64>>,
                     k: &(String, usize),
                     path: &Path| {
            g.get(k).cloned().ok_or_else(|| {
                Error::InvalidInput(format!("{} has no cell {}:{}", path.display(), k.0, k.1))
            })
        };
        let xa = fetch(&grid_a, &ka, &a.a)?;
        let xb = fetch(&grid_b, &kb, &a.b)?;
        let r = wilcoxon(&xa, &xb)?;
        writeln!(
            out,
            "{}:{}\t{}:{}\t{}\t{}\t{}\t{:.6}\t{}",
            ka.0,
            ka.1,
            kb.0,
            kb.1,
            r.n_eff,
            r.w_plus,
            r.w_minus,
            r.p_value,
            if r.significant() { "yes" } else { "no" }
        )?;
    }
    Ok(())
}

fn cmd_generate(a: &GenerateArgs) -> Result<()> {
    let params = SynthParams {
        n_dialogs: a.dialogs,
        segments_per_dialog: a.segments,
        cue_prob: a.cue_prob,
        p_next: a.p_next,
        seed: a.seed,
        ..SynthParams::default()
    };
    let corpus = generate(&params)?;
    let mut w = create(&a.out)?;
    write_segments(&corpus, &mut w)?;
    w.flush().map_err(|e| Error::file(&a.out, e))?;
    eprintln!(
        "wrote {} segments; Bayes accuracy {:.4} without context, {:.4} with the previous label",
        corpus.segment_count(),
        params.bayes_rate_without_context(),
        params.bayes_rate_with_previous_label()
    );
    Ok(())
}
