//! The `neurosld` command line.
//!
//! Exit codes: 0 proved / every test stage passed, 1 not proved / a test
//! stage failed, 2 usage or data error. JSON and CSV go to stdout,
//! diagnostics to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use neurosld_core::{
    educate, exceeds_shape, parse_literals, solve, validate_coverage, Activation, EducateError,
    EncodeError, EncodingConfig, Goal, GuidanceError, Layer, Mode, NetError, Network, Policy,
    RuleSet, SolveOptions, SyntaxError, Term, TrainingParams,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{ConfigError, Overrides, RunConfig};
use crate::kb::{load_rule_set, load_symbol_set, KbError};
use crate::model::{load_network, save_network, ModelError};
use crate::report::{compare_csv, education_json, losses_csv, solve_json, to_pretty, CompareRow};
use crate::schedule::{parse_schedule, ScheduleError};
use crate::trace::{write_traces, TraceEntry};

#[derive(Parser, Debug)]
#[command(name = "neurosld", version, about = "Neural-guided SLD resolution")]
struct Cli {
    #[command(flatten)]
    globals: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// TOML file with default settings; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Knowledge-base file (JSON lines).
    #[arg(long, global = true)]
    kb: Option<PathBuf>,
    /// Symbol-set file (JSON lines).
    #[arg(long, global = true)]
    symbols: Option<PathBuf>,
    /// Model file (versioned JSON).
    #[arg(long, global = true)]
    model: Option<PathBuf>,
    /// Children kept per node when encoding literals.
    #[arg(long, global = true)]
    breadth: Option<usize>,
    /// Tree levels kept when encoding literals.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Network output width; defaults to the largest rule ID.
    #[arg(long, global = true)]
    output_dim: Option<usize>,
    /// Training epochs per learn stage
    #[arg(long, global = true)]
    epochs: Option<usize>,
    /// SGD learning rate
    #[arg(long, global = true)]
    lr: Option<f64>,
    /// Seed for weight initialisation and shuffling
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Maximum resolution steps along one branch.
    #[arg(long, global = true)]
    depth_limit: Option<usize>,
    /// Maximum expanded nodes per search.
    #[arg(long, global = true)]
    node_budget: Option<u64>,
}

impl GlobalArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            kb: self.kb.clone(),
            symbols: self.symbols.clone(),
            model: self.model.clone(),
            breadth: self.breadth,
            depth: self.depth,
            output_dim: self.output_dim,
            epochs: self.epochs,
            lr: self.lr,
            seed: self.seed,
            depth_limit: self.depth_limit,
            node_budget: self.node_budget,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Resolve a goal and print the proof(s) as JSON.
    Solve {
        /// Goal literals in bracket syntax, e.g. "[bigger,X,Y]".
        #[arg(required = true)]
        literals: Vec<String>,
        #[arg(long, value_enum, default_value_t = PolicyArg::Static)]
        policy: PolicyArg,
        #[arg(long, value_enum, default_value_t = ModeArg::First)]
        mode: ModeArg,
        /// Also write the proof traces to this file.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Run an education schedule, training the model between stages.
    Educate {
        schedule: PathBuf,
        #[command(flatten)]
        init: InitArgs,
    },
    /// Compare static and guided search on every goal of a file.
    Compare { goals: PathBuf },
    /// Create a randomly initialised model sized for the symbol set.
    InitModel {
        #[command(flatten)]
        init: InitArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct InitArgs {
    /// Hidden layer widths, comma separated; empty for none.
    #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "16")]
    hidden: Vec<usize>,
    /// Hidden layer activation.
    #[arg(long, default_value = "tanh")]
    activation: String,
    /// Parameters are drawn uniformly from [-scale, scale].
    #[arg(long, default_value_t = 0.5)]
    scale: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum PolicyArg {
    Static,
    Exhaustive,
    Guided,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ModeArg {
    First,
    All,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Kb(#[from] KbError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error("goal: {0}")]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Guidance(#[from] GuidanceError),
    #[error(transparent)]
    Educate(#[from] EducateError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn required<'a>(value: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
    value
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("{flag} is required for this command")))
}

/// Parse `args` (including the program name), run the command, and return
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn load_config(globals: &GlobalArgs) -> Result<RunConfig, CliError> {
    let mut config = RunConfig::default();
    if let Some(path) = &globals.config {
        config = config.apply(&Overrides::from_file(path)?);
    }
    config = config.apply(&globals.overrides());
    config.validate()?;
    Ok(config)
}

fn parse_goal(literals: &[String]) -> Result<Goal, CliError> {
    let mut all = Vec::new();
    for text in literals {
        all.extend(parse_literals(text)?);
    }
    Ok(Goal::new(all))
}

fn encoding(config: &RunConfig, rules: &RuleSet) -> Result<EncodingConfig, CliError> {
    let symbols = load_symbol_set(required(&config.symbols, "--symbols")?)?;
    let missing = validate_coverage(rules, &symbols);
    if !missing.is_empty() {
        let names: Vec<&str> = missing.iter().map(|n| &**n).collect();
        return Err(CliError::Usage(format!(
            "rules use symbols missing from the symbol set: {}",
            names.join(", ")
        )));
    }
    let output_dim = config.output_dim.unwrap_or(rules.max_rule_id() as usize);
    Ok(EncodingConfig::new(
        config.depth,
        config.breadth,
        output_dim,
        symbols,
    )?)
}

/// Warn about literals that the encoding shape cuts short.
fn lint_shape<'a>(
    literals: impl IntoIterator<Item = &'a Term>,
    cfg: &EncodingConfig,
    err: &mut dyn Write,
) {
    let mut warned: Vec<&Term> = Vec::new();
    for t in literals {
        if exceeds_shape(t, cfg.depth(), cfg.breadth()) && !warned.contains(&t) {
            let _ = writeln!(
                err,
                "warning: {t} does not fit depth {} breadth {}; the network sees a truncated copy",
                cfg.depth(),
                cfg.breadth()
            );
            warned.push(t);
        }
    }
}

fn rule_literals(rules: &RuleSet) -> Vec<Term> {
    rules.rules().iter().flat_map(|r| r.literals()).collect()
}

fn solve_options(config: &RunConfig, mode: Mode) -> SolveOptions {
    let opts = SolveOptions::new(config.depth_limit).with_mode(mode);
    match config.node_budget {
        Some(b) => opts.with_budget(b),
        None => opts,
    }
}

fn build_network(cfg: &EncodingConfig, init: &InitArgs, seed: u64) -> Result<Network, CliError> {
    let activation: Activation = init.activation.parse()?;
    if activation == Activation::Softmax {
        return Err(CliError::Usage(
            "softmax is reserved for the output layer".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dims = vec![cfg.input_dim()];
    dims.extend(init.hidden.iter().copied());
    dims.push(cfg.output_dim());
    let last = dims.len() - 2;
    let layers = dims
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let (name, act) = if i == last {
                ("output".to_string(), Activation::Softmax)
            } else {
                (format!("hidden{}", i + 1), activation)
            };
            Layer::init(name, w[0], w[1], act, init.scale, &mut rng)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Network::new(layers)?)
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let config = load_config(&cli.globals)?;
    match cli.command {
        Command::Solve {
            literals,
            policy,
            mode,
            trace_out,
        } => cmd_solve(
            &config,
            &literals,
            policy,
            mode,
            trace_out.as_deref(),
            out,
            err,
        ),
        Command::Educate { schedule, init } => cmd_educate(&config, &schedule, &init, out, err),
        Command::Compare { goals } => cmd_compare(&config, &goals, out, err),
        Command::InitModel { init } => cmd_init_model(&config, &init, out),
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })
}

fn cmd_solve(
    config: &RunConfig,
    literals: &[String],
    policy: PolicyArg,
    mode: ModeArg,
    trace_out: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let rules = load_rule_set(required(&config.kb, "--kb")?)?;
    let goal = parse_goal(literals)?;
    let mode = match (policy, mode) {
        (PolicyArg::Exhaustive, _) | (_, ModeArg::All) => Mode::All,
        _ => Mode::First,
    };
    let opts = solve_options(config, mode);
    let guide;
    let policy = match policy {
        PolicyArg::Static => Policy::StaticOrder,
        PolicyArg::Exhaustive => Policy::Exhaustive,
        PolicyArg::Guided => {
            let cfg = encoding(config, &rules)?;
            let net = load_network(required(&config.model, "--model")?)?;
            lint_shape(
                goal.literals.iter().chain(&rule_literals(&rules)),
                &cfg,
                err,
            );
            guide = (net, cfg);
            Policy::Guided {
                net: &guide.0,
                cfg: &guide.1,
            }
        }
    };
    let report = solve(&goal, &rules, &policy, &opts)?;
    write_out(
        out,
        &to_pretty(&solve_json(&goal, policy.name(), mode, &report)),
    )?;
    if let Some(path) = trace_out {
        let entries: Vec<TraceEntry> = if report.proofs.is_empty() {
            vec![TraceEntry {
                goal: goal.clone(),
                status: report.status,
                records: Vec::new(),
            }]
        } else {
            report
                .proofs
                .iter()
                .map(|p| TraceEntry {
                    goal: goal.clone(),
                    status: p.status,
                    records: p.trace.clone(),
                })
                .collect()
        };
        std::fs::write(path, write_traces(&entries)).map_err(io_error(path))?;
    }
    Ok(if report.proved() { 0 } else { 1 })
}

/// `model.json` → `model.report.json`, `model.losses.csv`.
fn beside(model: &Path, suffix: &str) -> PathBuf {
    let stem = model
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "model".into());
    model.with_file_name(format!("{stem}.{suffix}"))
}

fn cmd_educate(
    config: &RunConfig,
    schedule_path: &Path,
    init: &InitArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let rules = load_rule_set(required(&config.kb, "--kb")?)?;
    let model_path = required(&config.model, "--model")?;
    let schedule =
        parse_schedule(&std::fs::read_to_string(schedule_path).map_err(io_error(schedule_path))?)?;
    let cfg = encoding(config, &rules)?;
    let stage_goals: Vec<Term> = schedule
        .stages()
        .iter()
        .flat_map(|s| s.goal.literals.clone())
        .collect();
    lint_shape(stage_goals.iter().chain(&rule_literals(&rules)), &cfg, err);

    let mut net = if model_path.exists() {
        load_network(model_path)?
    } else {
        let _ = writeln!(
            err,
            "{} not found; starting from a fresh network",
            model_path.display()
        );
        build_network(&cfg, init, config.seed)?
    };
    let params = TrainingParams::new(config.epochs, config.learning_rate, config.seed)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let report = educate(&schedule, &rules, &mut net, &cfg, &params)?;
    for (i, s) in report.stages.iter().enumerate() {
        let _ = writeln!(
            err,
            "stage {} {} {}: {} after {} expansions",
            i + 1,
            s.purpose.as_str(),
            s.goal,
            s.status.as_str(),
            s.stats.nodes_expanded
        );
    }

    save_network(&net, model_path)?;
    let json = to_pretty(&education_json(&report));
    let report_path = beside(model_path, "report.json");
    std::fs::write(&report_path, &json).map_err(io_error(&report_path))?;
    let csv_path = beside(model_path, "losses.csv");
    std::fs::write(&csv_path, losses_csv(&report)).map_err(io_error(&csv_path))?;
    write_out(out, &json)?;
    Ok(if report.tests_passed() { 0 } else { 1 })
}

fn cmd_compare(
    config: &RunConfig,
    goals_path: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let rules = load_rule_set(required(&config.kb, "--kb")?)?;
    let text = std::fs::read_to_string(goals_path).map_err(io_error(goals_path))?;
    let goals = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| Ok(Goal::new(parse_literals(l)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let cfg = encoding(config, &rules)?;
    let net = load_network(required(&config.model, "--model")?)?;
    lint_shape(
        goals
            .iter()
            .flat_map(|g| &g.literals)
            .chain(&rule_literals(&rules)),
        &cfg,
        err,
    );

    let opts = solve_options(config, Mode::First);
    let mut rows = Vec::new();
    for goal in &goals {
        for policy in [
            Policy::StaticOrder,
            Policy::Guided {
                net: &net,
                cfg: &cfg,
            },
        ] {
            let report = solve(goal, &rules, &policy, &opts)?;
            rows.push(CompareRow {
                goal: goal.to_string(),
                policy: policy.name().into(),
                status: report.status,
                nodes_expanded: report.stats.nodes_expanded,
                backtracks: report.stats.backtracks,
            });
        }
    }
    write_out(out, &compare_csv(&rows))?;
    Ok(0)
}

fn cmd_init_model(
    config: &RunConfig,
    init: &InitArgs,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let model_path = required(&config.model, "--model")?;
    let rules = match &config.kb {
        Some(path) => load_rule_set(path)?,
        None if config.output_dim.is_some() => {
            RuleSet::new(Vec::new()).expect("empty rule set is valid")
        }
        None => {
            return Err(CliError::Usage(
                "--kb or --output-dim is required for init-model".into(),
            ))
        }
    };
    let cfg = encoding(config, &rules)?;
    let net = build_network(&cfg, init, config.seed)?;
    save_network(&net, model_path)?;
    let summary = serde_json::json!({
        "model": model_path.display().to_string(),
        "input_dim": net.input_dim(),
        "output_dim": net.output_dim(),
        "hidden_layers": net.hidden_layers(),
        "deep": net.is_deep(),
        "parameters": net.parameter_count(),
    });
    write_out(out, &to_pretty(&summary))?;
    Ok(0)
}
