//! Command-line front end for the forecasting library.
//!
//! Thin veneer: every subcommand resolves its inputs, calls one library
//! entry point, and prints the result as JSON (default) or CSV.
//!
//! Exit codes: 0 success, 1 usage error, 2 fit/estimation or I/O error,
//! 3 reproduction-check failure (`reproduce --check`).

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use forecastkit::bench::{
    self, emit_diagram_data, run_experiment_on, DatasetDescriptor, EvaluationScale,
    ExperimentConfig, ModelSpec, TableSelector,
};
use forecastkit::diagnostics::{self, default_max_lag};
use forecastkit::error::ForecastError;
use forecastkit::metrics::{self, ForecastEvaluation};
use forecastkit::neural::{NetworkTopology, TrainingConfig};
use forecastkit::series::TimeSeries;
use forecastkit::stochastic::{
    self, box_jenkins_search, Criterion, SarimaOrder,
};
use forecastkit::svm::{self, RbfKernel, RollingMode, WindowConfig};
use forecastkit::transform::{TransformPipeline, TransformStep};
use serde_json::json;
use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "forecastkit",
    version,
    about = "Time-series modeling and forecasting toolkit",
    after_help = "Model grammar for --model:\n  \
        ar:<p>                          autoregression fitted by Yule-Walker\n  \
        sarima:<p>,<d>,<q>              conditional least squares\n  \
        sarima:<p>,<d>,<q>:<P>,<D>,<Q>:<s>  seasonal variant\n  \
        search                          automatic order search (fit/forecast only)\n  \
        fnn:<p>,<h>                     feed-forward net on p lags, h hidden nodes\n  \
        tlnn:<lag+lag+...>,<h>          net on hand-picked lags\n  \
        sann:<s>,<m>                    seasonal net, season length s, m hidden nodes\n  \
        svm:<sigma>,<gamma>,<n>         least-squares SVM on n-lag windows\n\n\
        Transforms for --transform: none | log10 | ln | div:<x> | rescale:<lo>,<hi>"
)]
struct Cli {
    /// External series file (one value per line, `#` comments allowed)
    #[arg(long, global = true)]
    data: Option<PathBuf>,

    /// Seed for seeded operations (neural training)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output format
    #[arg(long, global = true, value_enum)]
    out: Option<OutFormat>,

    /// Plain-text key=value configuration file; command-line flags win
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Sample autocorrelation function with a 95% confidence band
    Acf(CorrelogramArgs),
    /// Sample partial autocorrelation function with a 95% confidence band
    Pacf(CorrelogramArgs),
    /// Unit-root check (Dickey-Fuller test at the 5% level)
    Stationarity(SeriesArgs),
    /// Fit a model on a full series and print the fitted parameters
    Fit(FitArgs),
    /// Fit a model and forecast future values beyond the series end
    Forecast(ForecastArgs),
    /// Accuracy measures for a forecast file against an actuals file
    Evaluate(EvaluateArgs),
    /// Validation grid search over SVM hyper-parameters
    GridSearch(GridSearchArgs),
    /// Rerun published benchmark rows and compare against the printed values
    Reproduce(ReproduceArgs),
    /// Write the actual-vs-forecast pairs behind a forecast diagram to CSV
    EmitDiagram(EmitDiagramArgs),
}

#[derive(Args)]
struct SeriesArgs {
    /// Embedded dataset name (lynx, sunspot, airline, qsales, beer, deaths)
    #[arg(long)]
    dataset: Option<String>,

    /// Preprocessing applied before the operation
    #[arg(long)]
    transform: Option<String>,

    /// Season length to attach to an external series
    #[arg(long)]
    period: Option<usize>,
}

#[derive(Args)]
struct CorrelogramArgs {
    #[command(flatten)]
    series: SeriesArgs,

    /// Largest lag to compute (default: n/4)
    #[arg(long)]
    max_lag: Option<usize>,
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    series: SeriesArgs,

    /// Model to fit (see the grammar under --help)
    #[arg(long)]
    model: Option<String>,

    /// Learning rate for neural models
    #[arg(long)]
    learning_rate: Option<f64>,

    /// Training epochs for neural models
    #[arg(long)]
    epochs: Option<usize>,
}

#[derive(Args)]
struct ForecastArgs {
    #[command(flatten)]
    fit: FitArgs,

    /// Number of future values to forecast
    #[arg(long)]
    horizon: Option<usize>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// File of actual values (one per line)
    #[arg(long)]
    actual: PathBuf,

    /// File of forecast values (one per line)
    #[arg(long)]
    forecast: PathBuf,
}

#[derive(Args)]
struct GridSearchArgs {
    #[command(flatten)]
    series: SeriesArgs,

    /// Comma-separated kernel width candidates
    #[arg(long)]
    sigma: String,

    /// Comma-separated regularization candidates
    #[arg(long)]
    gamma: String,

    /// Comma-separated window length candidates
    #[arg(long, name = "n")]
    n: String,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Table to rerun: 7.2–7.7 or all
    #[arg(default_value = "all")]
    table: String,

    /// Exit nonzero (code 3) when any gated row misses its tolerance
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct EmitDiagramArgs {
    #[command(flatten)]
    fit: FitArgs,

    /// Destination CSV file
    #[arg(long)]
    path: PathBuf,

    /// Test-span length when using an external series (embedded datasets
    /// use their canonical train/test split)
    #[arg(long)]
    test: Option<usize>,
}

/// Errors split by exit-code class: usage problems exit 1, everything the
/// library reports exits with its own code (2 or 3).
enum CliError {
    Usage(String),
    App(ForecastError),
}

impl From<ForecastError> for CliError {
    fn from(e: ForecastError) -> Self {
        CliError::App(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::App(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

/// Key=value configuration file: `#` comments and blank lines are skipped;
/// values act as fallbacks for flags the command line leaves unset.
fn load_config(path: &Option<PathBuf>) -> CliResult<HashMap<String, String>> {
    let mut map = HashMap::new();
    let Some(path) = path else { return Ok(map) };
    let text = std::fs::read_to_string(path).map_err(ForecastError::from)?;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(usage(format!(
                "config line {}: expected key=value, got {line:?}",
                i + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

struct Settings {
    data: Option<PathBuf>,
    seed: u64,
    out: OutFormat,
    config: HashMap<String, String>,
}

impl Settings {
    fn from_cli(cli: &Cli) -> CliResult<Settings> {
        let config = load_config(&cli.config)?;
        let data = cli
            .data
            .clone()
            .or_else(|| config.get("data").map(PathBuf::from));
        let seed = match (&cli.seed, config.get("seed")) {
            (Some(s), _) => *s,
            (None, Some(raw)) => raw
                .parse()
                .map_err(|_| usage(format!("config seed must be an integer, got {raw:?}")))?,
            (None, None) => 0,
        };
        let out = match (&cli.out, config.get("out")) {
            (Some(o), _) => *o,
            (None, Some(raw)) => match raw.as_str() {
                "json" => OutFormat::Json,
                "csv" => OutFormat::Csv,
                other => {
                    return Err(usage(format!(
                        "config out must be json or csv, got {other:?}"
                    )))
                }
            },
            (None, None) => OutFormat::Json,
        };
        Ok(Settings {
            data,
            seed,
            out,
            config,
        })
    }

    /// Flag value falling back to the config file.
    fn fallback<'a>(&'a self, flag: &'a Option<String>, key: &str) -> Option<&'a str> {
        flag.as_deref()
            .or_else(|| self.config.get(key).map(String::as_str))
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let settings = Settings::from_cli(&cli)?;
    match &cli.command {
        Command::Acf(args) => correlogram(args, &settings, diagnostics::acf),
        Command::Pacf(args) => correlogram(args, &settings, diagnostics::pacf),
        Command::Stationarity(args) => stationarity(args, &settings),
        Command::Fit(args) => fit(args, &settings),
        Command::Forecast(args) => forecast(args, &settings),
        Command::Evaluate(args) => evaluate(args, &settings),
        Command::GridSearch(args) => grid_search(args, &settings),
        Command::Reproduce(args) => reproduce(args, &settings),
        Command::EmitDiagram(args) => emit_diagram(args, &settings),
    }
}

/// Load the series named by `--dataset` or the file named by `--data`, then
/// apply the requested preprocessing.
fn resolve_series(
    args: &SeriesArgs,
    settings: &Settings,
) -> CliResult<(TimeSeries, TransformPipeline)> {
    let dataset = settings.fallback(&args.dataset, "dataset").map(str::to_owned);
    let series = match (&settings.data, dataset) {
        (Some(_), Some(_)) => {
            return Err(usage("--data and --dataset are mutually exclusive"));
        }
        (Some(path), None) => {
            let series = TimeSeries::read_from_path(path)?;
            match args.period {
                Some(p) => series.with_period(p)?,
                None => series,
            }
        }
        (None, Some(name)) => bench::load_dataset(&name)?,
        (None, None) => {
            return Err(usage("a series is required: pass --dataset <name> or --data <file>"));
        }
    };
    let spec = settings
        .fallback(&args.transform, "transform")
        .unwrap_or("none");
    let mut pipeline = parse_transform(spec)?;
    let values = pipeline.apply(&series.values)?;
    let mut transformed = TimeSeries::new(series.label.clone(), values);
    if let Some(p) = series.period {
        transformed = transformed.with_period(p)?;
    }
    Ok((transformed, pipeline))
}

fn parse_transform(spec: &str) -> CliResult<TransformPipeline> {
    let mut pipeline = TransformPipeline::new();
    match spec {
        "none" => {}
        "log10" => pipeline.push(TransformStep::Log10),
        "ln" => pipeline.push(TransformStep::NaturalLog),
        other => {
            if let Some(x) = other.strip_prefix("div:") {
                let divisor: f64 = x
                    .parse()
                    .map_err(|_| usage(format!("div transform needs a number, got {x:?}")))?;
                pipeline.push(TransformStep::scale_divide(divisor));
            } else if let Some(range) = other.strip_prefix("rescale:") {
                let (lo, hi) = range
                    .split_once(',')
                    .ok_or_else(|| usage("rescale transform needs <lo>,<hi>"))?;
                let lo: f64 = lo
                    .parse()
                    .map_err(|_| usage(format!("rescale lower bound is not a number: {lo:?}")))?;
                let hi: f64 = hi
                    .parse()
                    .map_err(|_| usage(format!("rescale upper bound is not a number: {hi:?}")))?;
                pipeline.push(TransformStep::range_rescale(lo, hi));
            } else {
                return Err(usage(format!(
                    "unknown transform {spec:?} (expected none, log10, ln, div:<x>, rescale:<lo>,<hi>)"
                )));
            }
        }
    }
    Ok(pipeline)
}

/// Parsed `--model` argument.
enum CliModel {
    Spec(ModelSpec),
    Search,
}

fn parse_usize_list(s: &str, what: &str) -> CliResult<Vec<usize>> {
    s.split(|c| c == ',' || c == '+')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| usage(format!("{what}: {part:?} is not a nonnegative integer")))
        })
        .collect()
}

fn parse_f64_list(s: &str, what: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| usage(format!("{what}: {part:?} is not a number")))
        })
        .collect()
}

fn parse_model(spec: &str, training: TrainingConfig) -> CliResult<CliModel> {
    if spec == "search" {
        return Ok(CliModel::Search);
    }
    let (family, rest) = spec
        .split_once(':')
        .ok_or_else(|| usage(format!("model {spec:?} does not match the grammar (see --help)")))?;
    let model = match family {
        "ar" => {
            let p = rest
                .parse()
                .map_err(|_| usage(format!("ar order must be an integer, got {rest:?}")))?;
            ModelSpec::ArYuleWalker { p }
        }
        "sarima" => {
            let groups: Vec<&str> = rest.split(':').collect();
            let order = match groups.as_slice() {
                [non] => {
                    let v = parse_usize_list(non, "sarima order")?;
                    let [p, d, q] = v[..] else {
                        return Err(usage("sarima order needs exactly p,d,q"));
                    };
                    SarimaOrder::new(p, d, q)
                }
                [non, seas, s] => {
                    let v = parse_usize_list(non, "sarima order")?;
                    let w = parse_usize_list(seas, "seasonal order")?;
                    let s: usize = s
                        .parse()
                        .map_err(|_| usage(format!("season length must be an integer, got {s:?}")))?;
                    let ([p, d, q], [sp, sd, sq]) = (&v[..], &w[..]) else {
                        return Err(usage("seasonal sarima needs p,d,q:P,D,Q:s"));
                    };
                    SarimaOrder::seasonal(*p, *d, *q, *sp, *sd, *sq, s)
                }
                _ => return Err(usage("sarima expects p,d,q or p,d,q:P,D,Q:s")),
            };
            ModelSpec::SarimaCss { order }
        }
        "fnn" => {
            let v = parse_usize_list(rest, "fnn topology")?;
            let [p, h] = v[..] else {
                return Err(usage("fnn needs exactly p,h"));
            };
            ModelSpec::Neural {
                topology: NetworkTopology::Fnn { p, h },
                training,
            }
        }
        "tlnn" => {
            let (lags, h) = rest
                .rsplit_once(',')
                .ok_or_else(|| usage("tlnn needs <lag+lag+...>,<h>"))?;
            let lags = parse_usize_list(lags, "tlnn lags")?;
            let h = h
                .parse()
                .map_err(|_| usage(format!("tlnn hidden size must be an integer, got {h:?}")))?;
            ModelSpec::Neural {
                topology: NetworkTopology::Tlnn { lags, h },
                training,
            }
        }
        "sann" => {
            let v = parse_usize_list(rest, "sann topology")?;
            let [s, m] = v[..] else {
                return Err(usage("sann needs exactly s,m"));
            };
            ModelSpec::Neural {
                topology: NetworkTopology::Sann { s, m },
                training,
            }
        }
        "svm" => {
            let v = parse_f64_list(rest, "svm hyper-parameters")?;
            let [sigma, gamma, n] = v[..] else {
                return Err(usage("svm needs exactly sigma,gamma,n"));
            };
            if n.fract() != 0.0 || n < 1.0 {
                return Err(usage("svm window length n must be a positive integer"));
            }
            ModelSpec::Svm {
                sigma,
                gamma,
                n: n as usize,
            }
        }
        other => {
            return Err(usage(format!(
                "unknown model family {other:?} (expected ar, sarima, search, fnn, tlnn, sann, svm)"
            )))
        }
    };
    Ok(CliModel::Spec(model))
}

fn training_from(args: &FitArgs, settings: &Settings) -> TrainingConfig {
    let mut training = TrainingConfig {
        seed: settings.seed,
        ..TrainingConfig::default()
    };
    if let Some(lr) = args.learning_rate {
        training.learning_rate = lr;
    }
    if let Some(epochs) = args.epochs {
        training.epochs = epochs;
    }
    training
}

fn resolve_model(args: &FitArgs, settings: &Settings) -> CliResult<CliModel> {
    let spec = settings
        .fallback(&args.model, "model")
        .ok_or_else(|| usage("--model is required (see the grammar under --help)"))?;
    parse_model(spec, training_from(args, settings))
}

/// Candidate grid for the automatic order search: small nonseasonal orders,
/// plus common seasonal shapes when the series has a period.
fn default_search_grid(period: Option<usize>) -> Vec<SarimaOrder> {
    let mut grid = Vec::new();
    for d in 0..=1 {
        for p in 0..=3 {
            for q in 0..=3 {
                if p + q > 0 {
                    grid.push(SarimaOrder::new(p, d, q));
                }
            }
        }
    }
    if let Some(s) = period {
        for (sp, sq) in [(0, 1), (1, 0), (1, 1)] {
            grid.push(SarimaOrder::seasonal(0, 1, 1, sp, 1, sq, s));
            grid.push(SarimaOrder::seasonal(1, 1, 0, sp, 1, sq, s));
        }
    }
    grid
}

// A reader hanging up early (`forecastkit … | head`) is normal pipeline
// behavior, not a crash: stop writing and exit clean.
fn write_stdout(text: &str) {
    use std::io::Write;
    if let Err(err) = std::io::stdout().write_all(text.as_bytes()) {
        if err.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write output: {err}");
        std::process::exit(1);
    }
}

fn print_out(settings: &Settings, json: String, csv: String) {
    match settings.out {
        OutFormat::Json => write_stdout(&format!("{json}\n")),
        OutFormat::Csv => write_stdout(&csv),
    }
}

fn correlogram(
    args: &CorrelogramArgs,
    settings: &Settings,
    f: impl Fn(&[f64], usize) -> forecastkit::Result<diagnostics::CorrelogramResult>,
) -> CliResult<()> {
    let (series, _) = resolve_series(&args.series, settings)?;
    let max_lag = args.max_lag.unwrap_or_else(|| default_max_lag(series.len()));
    let result = f(&series.values, max_lag)?;
    let json = serde_json::to_string_pretty(&result).map_err(ForecastError::from)?;
    let csv = result.to_csv();
    print_out(settings, json, csv);
    Ok(())
}

fn stationarity(args: &SeriesArgs, settings: &Settings) -> CliResult<()> {
    let (series, _) = resolve_series(args, settings)?;
    let verdict = diagnostics::dickey_fuller(&series.values)?;
    let json = serde_json::to_string_pretty(&verdict).map_err(ForecastError::from)?;
    let csv = format!(
        "key,value\ntest_statistic,{:.6}\ncritical_value,{:.6}\nstationary,{}\nn_obs,{}\n",
        verdict.test_statistic, verdict.critical_value, verdict.stationary, verdict.n_obs
    );
    print_out(settings, json, csv);
    Ok(())
}

fn fit(args: &FitArgs, settings: &Settings) -> CliResult<()> {
    let (series, _) = resolve_series(&args.series, settings)?;
    let report = fit_report(args, settings, &series)?;
    let csv = json_to_kv_csv(&report);
    print_out(
        settings,
        serde_json::to_string_pretty(&report).map_err(ForecastError::from)?,
        csv,
    );
    Ok(())
}

/// Fit the requested model on the full (transformed) series and summarize it
/// as a JSON value.
fn fit_report(
    args: &FitArgs,
    settings: &Settings,
    series: &TimeSeries,
) -> CliResult<serde_json::Value> {
    Ok(match resolve_model(args, settings)? {
        CliModel::Search => {
            let outcome = box_jenkins_search(series, &default_search_grid(series.period), Criterion::Bic)?;
            json!({
                "family": "sarima",
                "selected": format!("{}", outcome.model.order),
                "model": serde_json::from_str::<serde_json::Value>(&outcome.model.to_json()?)
                    .map_err(ForecastError::from)?,
                "aic": outcome.score.aic,
                "bic": outcome.score.bic,
                "n_params": outcome.score.n_params,
                "residual_diagnostics_pass": outcome.diagnostics.pass,
            })
        }
        CliModel::Spec(ModelSpec::ArYuleWalker { p }) => {
            let model = stochastic::fit_ar_yule_walker(series, p)?;
            serde_json::from_str(&model.to_json()?).map_err(ForecastError::from)?
        }
        CliModel::Spec(ModelSpec::SarimaCss { order }) => {
            let model = stochastic::fit_css(series, order)?;
            serde_json::from_str(&model.to_json()?).map_err(ForecastError::from)?
        }
        CliModel::Spec(ModelSpec::Neural { topology, training }) => {
            let net = forecastkit::neural::train(&topology, series, &training)?;
            json!({
                "family": "neural",
                "topology": topology,
                "seed": training.seed,
                "epochs": training.epochs,
                "learning_rate": training.learning_rate,
                "initial_loss": net.loss_trace.first(),
                "final_loss": net.loss_trace.last(),
            })
        }
        CliModel::Spec(ModelSpec::Svm { sigma, gamma, n }) => {
            let config = WindowConfig::spanning(n, series.len())?;
            let (inputs, targets) = svm::embed(series, &config)?;
            let model = svm::fit_lssvm(&inputs, &targets, gamma, &RbfKernel::new(sigma)?)?;
            json!({
                "family": "svm",
                "sigma": sigma,
                "gamma": gamma,
                "n": n,
                "support_vectors": model.window_len(),
                "bias": model.b,
                "system_residual": model.system_residual()?,
            })
        }
    })
}

/// Flatten a JSON object into `key,value` CSV lines (arrays and nested
/// objects are JSON-encoded in place).
fn json_to_kv_csv(value: &serde_json::Value) -> String {
    let mut out = String::from("key,value\n");
    if let serde_json::Value::Object(map) = value {
        for (k, v) in map {
            let rendered = match v {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k},{}\n", csv_quote(&rendered)));
        }
    }
    out
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn forecast(args: &ForecastArgs, settings: &Settings) -> CliResult<()> {
    let horizon = match args.horizon {
        Some(h) => h,
        None => settings
            .config
            .get("horizon")
            .map(|raw| {
                raw.parse()
                    .map_err(|_| usage(format!("config horizon must be an integer, got {raw:?}")))
            })
            .transpose()?
            .ok_or_else(|| usage("--horizon is required"))?,
    };
    if horizon == 0 {
        return Err(usage("--horizon must be at least 1"));
    }
    let (series, pipeline) = resolve_series(&args.fit.series, settings)?;
    let transformed = match resolve_model(&args.fit, settings)? {
        CliModel::Search => {
            let outcome =
                box_jenkins_search(&series, &default_search_grid(series.period), Criterion::Bic)?;
            stochastic::forecast(&outcome.model, &series, horizon)?
        }
        CliModel::Spec(ModelSpec::ArYuleWalker { p }) => {
            let model = stochastic::fit_ar_yule_walker(&series, p)?;
            stochastic::forecast(&model, &series, horizon)?
        }
        CliModel::Spec(ModelSpec::SarimaCss { order }) => {
            let model = stochastic::fit_css(&series, order)?;
            stochastic::forecast(&model, &series, horizon)?
        }
        CliModel::Spec(ModelSpec::Neural { topology, training }) => {
            let net = forecastkit::neural::train(&topology, &series, &training)?;
            forecastkit::neural::forecast(&topology, &net.weights, &series, horizon)?
        }
        CliModel::Spec(ModelSpec::Svm { sigma, gamma, n }) => {
            let config = WindowConfig::spanning(n, series.len())?;
            svm::rolling_forecast(
                &series,
                &config,
                gamma,
                &RbfKernel::new(sigma)?,
                horizon,
                RollingMode::Recursive,
            )?
        }
    };
    let values = pipeline.invert(&transformed)?;
    let json = serde_json::to_string_pretty(&json!({ "horizon": horizon, "forecast": values }))
        .map_err(ForecastError::from)?;
    let mut csv = String::from("step,forecast\n");
    for (i, v) in values.iter().enumerate() {
        csv.push_str(&format!("{},{v:.6}\n", i + 1));
    }
    print_out(settings, json, csv);
    Ok(())
}

fn read_values(path: &PathBuf) -> CliResult<Vec<f64>> {
    Ok(TimeSeries::read_from_path(path)?.values)
}

fn metrics_csv(ev: &ForecastEvaluation) -> String {
    let opt = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
    let mut out = String::from("measure,value\n");
    out.push_str(&format!("n,{}\n", ev.n));
    out.push_str(&format!("mfe,{:.6}\n", ev.mfe));
    out.push_str(&format!("mae,{:.6}\n", ev.mae));
    out.push_str(&format!("mape,{}\n", opt(ev.mape)));
    out.push_str(&format!("mpe,{}\n", opt(ev.mpe)));
    out.push_str(&format!("mse,{:.6}\n", ev.mse));
    out.push_str(&format!("sse,{:.6}\n", ev.sse));
    out.push_str(&format!("smse,{:.6}\n", ev.smse));
    out.push_str(&format!("rmse,{:.6}\n", ev.rmse));
    out.push_str(&format!("nmse,{}\n", opt(ev.nmse)));
    out.push_str(&format!("theil_u,{}\n", opt(ev.theil_u)));
    out
}

fn evaluate(args: &EvaluateArgs, settings: &Settings) -> CliResult<()> {
    let actual = read_values(&args.actual)?;
    let forecast = read_values(&args.forecast)?;
    let ev = metrics::evaluate(&actual, &forecast)?;
    let json = serde_json::to_string_pretty(&ev).map_err(ForecastError::from)?;
    print_out(settings, json, metrics_csv(&ev));
    Ok(())
}

fn grid_search(args: &GridSearchArgs, settings: &Settings) -> CliResult<()> {
    let (series, _) = resolve_series(&args.series, settings)?;
    let sigma = parse_f64_list(&args.sigma, "--sigma")?;
    let gamma = parse_f64_list(&args.gamma, "--gamma")?;
    let n = parse_usize_list(&args.n, "--n")?;
    let result = svm::grid_search(&series, &sigma, &gamma, &n, 1)?;
    let json = serde_json::to_string_pretty(&result).map_err(ForecastError::from)?;
    let csv = format!(
        "sigma,gamma,n,window_size,validation_mse\n{},{},{},{},{:.6}\n",
        result.sigma, result.gamma, result.n, result.window_size, result.validation_mse
    );
    print_out(settings, json, csv);
    Ok(())
}

fn reproduce(args: &ReproduceArgs, settings: &Settings) -> CliResult<()> {
    let selector: TableSelector = args.table.parse()?;
    let report = bench::reproduce(selector)?;
    eprint!("{}", report.render_summary());
    print_out(settings, report.to_json()?, report.to_csv());
    if args.check {
        report.check()?;
    }
    Ok(())
}

fn emit_diagram(args: &EmitDiagramArgs, settings: &Settings) -> CliResult<()> {
    let model = match resolve_model(&args.fit, settings)? {
        CliModel::Spec(spec) => spec,
        CliModel::Search => {
            return Err(usage("emit-diagram needs a concrete model, not search"));
        }
    };
    let spec = settings
        .fallback(&args.fit.series.transform, "transform")
        .unwrap_or("none");
    let transform = parse_transform(spec)?;
    let dataset_flag = settings
        .fallback(&args.fit.series.dataset, "dataset")
        .map(str::to_owned);

    let (descriptor, series) = match (&settings.data, dataset_flag) {
        (Some(_), Some(_)) => {
            return Err(usage("--data and --dataset are mutually exclusive"));
        }
        (None, Some(name)) => (bench::descriptor(&name)?, bench::load_dataset(&name)?),
        (Some(path), None) => {
            let mut series = TimeSeries::read_from_path(path)?;
            if let Some(p) = args.fit.series.period {
                series = series.with_period(p)?;
            }
            let n_test = args
                .test
                .ok_or_else(|| usage("--test is required with an external series"))?;
            if n_test == 0 || n_test >= series.len() {
                return Err(usage("--test must leave at least one training value"));
            }
            let descriptor = DatasetDescriptor {
                name: series.label.clone(),
                length: series.len(),
                n_train: series.len() - n_test,
                n_test,
                period: series.period,
                source_citation: format!("external file {}", path.display()),
            };
            (descriptor, series)
        }
        (None, None) => {
            return Err(usage("a series is required: pass --dataset <name> or --data <file>"));
        }
    };

    let seeds = if model.is_neural() {
        vec![settings.seed]
    } else {
        vec![]
    };
    let config = ExperimentConfig {
        dataset: descriptor,
        model,
        transform,
        scale: EvaluationScale::Original,
        seeds,
    };
    let report = run_experiment_on(&config, &series)?;
    emit_diagram_data(&report, &args.path)?;
    write_stdout(&format!(
        "{}\n",
        json!({
            "path": args.path.display().to_string(),
            "rows": report.pairs.len(),
            "protocol": report.protocol,
        })
    ));
    Ok(())
}
