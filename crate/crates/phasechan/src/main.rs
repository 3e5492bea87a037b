use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use phasechan::config::ConfigFile;
use phasechan::figure::figure;
use phasechan::infotheory::{capacity_coherent, capacity_photon_number, CapacityParams, mutual_information};
use phasechan::oracle::q_by_monte_carlo;
use phasechan::output::{base_meta, Format, Meta};
use phasechan::receiver::{q_series, BinConvention, OutcomeDistribution, ReceiverKind};
use phasechan::scan::{ChannelSettings, NoiseKind, ScanSpec, SweepAxis};
use phasechan::AppError;
use phasechan_core::fock::choose_truncation;

#[derive(Parser)]
#[command(
    name = "phasechan",
    version,
    about = "Performance of M-ary phase-keyed coherent-state channels under phase diffusion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate mutual information at a single parameter point
    Mi(MiArgs),
    /// Evaluate the accumulated phase variance sigma(tau)
    Sigma(SigmaArgs),
    /// Evaluate the reference channel capacities
    Capacity(CapacityArgs),
    /// Emit the data table behind a reference figure grid
    Figure(FigureArgs),
    /// Run a parameter sweep
    Scan(ScanArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ReceiverArg {
    Canonical,
    #[value(name = "husimi-q")]
    HusimiQ,
}

impl From<ReceiverArg> for ReceiverKind {
    fn from(r: ReceiverArg) -> Self {
        match r {
            ReceiverArg::Canonical => ReceiverKind::Canonical,
            ReceiverArg::HusimiQ => ReceiverKind::HusimiQ,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum NoiseArg {
    Static,
    Ou,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Output file (stdout when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Args)]
struct NoiseOpts {
    /// Noise model
    #[arg(long, value_enum, default_value = "static")]
    noise: NoiseArg,
    /// Rescaled propagation time tau = Gamma t
    #[arg(long, default_value_t = 0.0)]
    tau: f64,
    /// OU coupling (dynamical phase noise factor)
    #[arg(long)]
    lambda: Option<f64>,
    /// OU environment correlation time
    #[arg(long)]
    tau_e: Option<f64>,
    /// OU rescaled detuning
    #[arg(long)]
    delta: Option<f64>,
}

impl NoiseOpts {
    fn kind(&self) -> Result<NoiseKind, AppError> {
        match self.noise {
            NoiseArg::Static => {
                if self.lambda.is_some() || self.tau_e.is_some() || self.delta.is_some() {
                    return Err(AppError::Usage(
                        "--lambda/--tau-e/--delta require --noise ou".into(),
                    ));
                }
                Ok(NoiseKind::Static)
            }
            NoiseArg::Ou => Ok(NoiseKind::OrnsteinUhlenbeck),
        }
    }
}

#[derive(Args)]
struct MiArgs {
    /// Alphabet size
    #[arg(long, default_value_t = 20)]
    n: usize,
    /// Mean photon number of the seed coherent state
    #[arg(long, default_value_t = 1.0)]
    nbar: f64,
    /// Receiver model
    #[arg(long, value_enum, default_value = "canonical")]
    receiver: ReceiverArg,
    #[command(flatten)]
    noise: NoiseOpts,
    /// Bin convention: "centered", "half", or an offset in radians
    #[arg(long, default_value = "centered")]
    bin_offset: String,
    /// Truncation tail-mass tolerance
    #[arg(long, default_value_t = 1e-12)]
    epsilon: f64,
    /// Cross-check against the sampling oracle with this many Monte Carlo draws
    #[arg(long)]
    samples: Option<u64>,
    /// RNG seed for the sampling oracle
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SigmaArgs {
    #[command(flatten)]
    noise: NoiseOpts,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct CapacityArgs {
    /// Mean photon number per channel use
    #[arg(long)]
    nbar: f64,
    /// Amplitude loss of the coherent comparison channel
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct FigureArgs {
    /// Figure name: fig2, fig3-upper, fig3-lower, fig4
    name: String,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ScanArgs {
    /// Flat key=value config file; flags override file values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Swept axis, `param=start:stop:count` or `param=value`; repeatable
    #[arg(long)]
    sweep: Vec<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    nbar: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long, value_enum)]
    noise: Option<NoiseArg>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    tau_e: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    bin_offset: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

fn parse_bin_convention(text: &str) -> Result<BinConvention, AppError> {
    match text {
        "centered" => Ok(BinConvention::Centered),
        "half" | "half-bin" => Ok(BinConvention::HalfBinOffset),
        other => other
            .parse::<f64>()
            .map(BinConvention::Offset)
            .map_err(|_| AppError::Usage(format!("bad --bin-offset '{other}'"))),
    }
}

fn emit<T: Serialize>(out: &OutputArgs, meta: &Meta, rows: &[T]) -> Result<(), AppError> {
    let format: Format = out.format.into();
    match &out.output {
        Some(path) => {
            let file = std::fs::File::create(path)?;
            format.write(meta, rows, std::io::BufWriter::new(file))?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            format.write(meta, rows, &mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct MiRow {
    n: usize,
    nbar: f64,
    receiver: &'static str,
    noise: &'static str,
    tau: f64,
    sigma: f64,
    bits: f64,
    mc_bits: Option<f64>,
    mc_max_dev: Option<f64>,
}

fn cmd_mi(args: MiArgs) -> Result<(), AppError> {
    let settings = ChannelSettings {
        n_symbols: args.n,
        nbar: args.nbar,
        noise: args.noise.kind()?,
        tau: args.noise.tau,
        lambda: args.noise.lambda.unwrap_or(1.0),
        tau_e: args.noise.tau_e.unwrap_or(1.0),
        delta: args.noise.delta.unwrap_or(0.0),
        convention: parse_bin_convention(&args.bin_offset)?,
        epsilon: args.epsilon,
        ..Default::default()
    };
    let kind: ReceiverKind = args.receiver.into();
    let sigma = settings.noise_model()?.sigma(settings.tau)?;
    let trunc = choose_truncation(settings.nbar, settings.epsilon)?;
    let q = q_series(kind, settings.nbar, settings.n_symbols, sigma, &trunc, settings.convention)?;
    let bits = mutual_information(&q)?.bits;
    let (mc_bits, mc_max_dev) = match args.samples {
        None => (None, None),
        Some(samples) => {
            let run = q_by_monte_carlo(
                kind,
                settings.nbar,
                settings.n_symbols,
                &settings.noise_model()?,
                settings.tau,
                settings.convention,
                &trunc,
                samples,
                args.seed,
            )?;
            let q_mc = OutcomeDistribution::new(
                run.estimate.clone(),
                kind,
                settings.nbar,
                sigma,
                settings.convention,
            )?;
            let dev = run
                .estimate
                .iter()
                .zip(q.probabilities())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            (Some(mutual_information(&q_mc)?.bits), Some(dev))
        }
    };
    let rows = [MiRow {
        n: settings.n_symbols,
        nbar: settings.nbar,
        receiver: kind.label(),
        noise: match settings.noise {
            NoiseKind::Static => "static",
            NoiseKind::OrnsteinUhlenbeck => "ou",
        },
        tau: settings.tau,
        sigma,
        bits,
        mc_bits,
        mc_max_dev,
    }];
    emit(&args.out, &settings.meta(), &rows)
}

#[derive(Serialize)]
struct SigmaRow {
    noise: &'static str,
    lambda: Option<f64>,
    tau_e: Option<f64>,
    delta: Option<f64>,
    tau: f64,
    sigma: f64,
}

fn cmd_sigma(args: SigmaArgs) -> Result<(), AppError> {
    let kind = args.noise.kind()?;
    let settings = ChannelSettings {
        noise: kind,
        tau: args.noise.tau,
        lambda: args.noise.lambda.unwrap_or(1.0),
        tau_e: args.noise.tau_e.unwrap_or(1.0),
        delta: args.noise.delta.unwrap_or(0.0),
        ..Default::default()
    };
    let sigma = settings.noise_model()?.sigma(settings.tau)?;
    let is_ou = kind == NoiseKind::OrnsteinUhlenbeck;
    let rows = [SigmaRow {
        noise: if is_ou { "ou" } else { "static" },
        lambda: is_ou.then_some(settings.lambda),
        tau_e: is_ou.then_some(settings.tau_e),
        delta: is_ou.then_some(settings.delta),
        tau: settings.tau,
        sigma,
    }];
    emit(&args.out, &base_meta(), &rows)
}

#[derive(Serialize)]
struct CapacityRow {
    nbar: f64,
    eta: f64,
    c_coh: f64,
    c_phn: f64,
}

fn cmd_capacity(args: CapacityArgs) -> Result<(), AppError> {
    let params = CapacityParams::new(args.eta, args.nbar)?;
    let rows = [CapacityRow {
        nbar: args.nbar,
        eta: args.eta,
        c_coh: capacity_coherent(&params),
        c_phn: capacity_photon_number(args.nbar)?,
    }];
    emit(&args.out, &base_meta(), &rows)
}

fn cmd_figure(args: FigureArgs) -> Result<(), AppError> {
    let (meta, rows) = figure(&args.name)?;
    emit(&args.out, &meta, &rows)
}

fn cmd_scan(args: ScanArgs) -> Result<(), AppError> {
    let config = match &args.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let defaults = ChannelSettings::default();

    let noise = match args.noise {
        Some(NoiseArg::Static) => NoiseKind::Static,
        Some(NoiseArg::Ou) => NoiseKind::OrnsteinUhlenbeck,
        None => match config.get("noise") {
            Some("static") | None => NoiseKind::Static,
            Some("ou") => NoiseKind::OrnsteinUhlenbeck,
            Some(other) => {
                return Err(AppError::Config(format!("unknown noise model '{other}'")))
            }
        },
    };
    let convention = match args.bin_offset.as_deref().or(config.get("bin-offset")) {
        Some(text) => parse_bin_convention(text)?,
        None => defaults.convention,
    };
    let base = ChannelSettings {
        n_symbols: args.n.or(config.get_parsed("n")?).unwrap_or(defaults.n_symbols),
        nbar: args.nbar.or(config.get_parsed("nbar")?).unwrap_or(defaults.nbar),
        eta: args.eta.or(config.get_parsed("eta")?).unwrap_or(defaults.eta),
        tau: args.tau.or(config.get_parsed("tau")?).unwrap_or(defaults.tau),
        noise,
        lambda: args.lambda.or(config.get_parsed("lambda")?).unwrap_or(defaults.lambda),
        tau_e: args.tau_e.or(config.get_parsed("tau-e")?).unwrap_or(defaults.tau_e),
        delta: args.delta.or(config.get_parsed("delta")?).unwrap_or(defaults.delta),
        convention,
        epsilon: args.epsilon.or(config.get_parsed("epsilon")?).unwrap_or(defaults.epsilon),
    };

    let sweep_texts: Vec<&str> = if args.sweep.is_empty() {
        config.sweeps().iter().map(String::as_str).collect()
    } else {
        args.sweep.iter().map(String::as_str).collect()
    };
    if sweep_texts.is_empty() {
        return Err(AppError::Usage(
            "scan needs at least one --sweep axis (or a sweep entry in the config)".into(),
        ));
    }
    let sweeps = sweep_texts
        .iter()
        .map(|t| SweepAxis::parse(t))
        .collect::<Result<Vec<_>, _>>()?;

    let spec = ScanSpec { base, sweeps };
    let rows = spec.run()?;
    emit(&args.out, &spec.meta(), &rows)
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Mi(args) => cmd_mi(args),
        Command::Sigma(args) => cmd_sigma(args),
        Command::Capacity(args) => cmd_capacity(args),
        Command::Figure(args) => cmd_figure(args),
        Command::Scan(args) => cmd_scan(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
