use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mixlab::harness::{
    configure_workers, exit_code, run_experiment, write_outputs, ConfigFile, Experiment, Format,
};
use mixlab::Result;

#[derive(Parser)]
#[command(name = "mixlab", version, about = "Mixing of one-dimensional particle systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dirichlet eigenvalues gamma_j for j = 1..N-1.
    Spectrum(Common),
    /// Exact d(t) and T_mix by uniformization.
    Exact(Common),
    /// One trajectory, observing the slowest-mode statistic.
    Simulate(Common),
    /// Coupling times of two starts.
    Couple(Common),
    /// Monte-Carlo upper and lower d(t) estimates.
    Dtv(Common),
    /// Mean site occupations from the packed-left start.
    Profile(Common),
    /// Half-crossing times against the theory value over several N.
    Cutoff(Common),
    /// Run an experiment described by a config file.
    Run { config: PathBuf },
}

#[derive(Args, Clone, Default)]
struct Common {
    /// ip, bip, ssep, asep, cf, acf or simplex.
    #[arg(long)]
    model: Option<String>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replicas: Option<u64>,
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// `start:end:points` or a comma list of times.
    #[arg(long, alias = "t-grid")]
    grid: Option<String>,
    #[arg(long)]
    eps: Option<f64>,
    /// Observation time for `simulate` and `profile`.
    #[arg(long)]
    time: Option<f64>,
    /// graphical or refined.
    #[arg(long)]
    mode: Option<String>,
    /// upper, lower or both.
    #[arg(long)]
    estimator: Option<String>,
    /// `bottom`, `top` or a state; `couple` takes `first;second`.
    #[arg(long)]
    init: Option<String>,
    /// Comma-separated list of N for `cutoff`.
    #[arg(long = "n-list", value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long = "stationary-samples")]
    stationary_samples: Option<u64>,
    /// Also write the event log of a simulation.
    #[arg(long)]
    dump: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
}

impl Common {
    fn to_config(&self, experiment: &str) -> ConfigFile {
        ConfigFile {
            experiment: experiment.to_string(),
            model: self.model.clone(),
            n: self.n,
            k: self.k,
            p: self.p,
            seed: self.seed,
            replicas: self.replicas,
            t_max: self.t_max,
            grid: self.grid.clone(),
            eps: self.eps,
            time: self.time,
            mode: self.mode.clone(),
            estimator: self.estimator.clone(),
            init: self.init.clone(),
            n_list: self.n_list.clone(),
            dump: Some(self.dump),
            bins: self.bins,
            stationary_samples: self.stationary_samples,
            out: None,
            format: Some(self.format.clone()),
        }
    }
}

fn run_command(name: &str, args: &Common) -> Result<()> {
    let format: Format = args.format.parse()?;
    let experiment = Experiment::from_config(&args.to_config(name))?;
    let files = experiment.execute(format)?;
    match &args.out {
        Some(dir) => {
            for path in write_outputs(dir, &files)? {
                eprintln!("wrote {}", path.display());
            }
        }
        None => {
            let (first, rest) = files.split_first().expect("at least one output");
            print!("{}", first.1);
            for (_, contents) in rest {
                eprint!("{contents}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_workers();
    let (name, args) = match &cli.command {
        Command::Run { config } => return ExitCode::from(run_experiment(config) as u8),
        Command::Spectrum(a) => ("spectrum", a),
        Command::Exact(a) => ("exact", a),
        Command::Simulate(a) => ("simulate", a),
        Command::Couple(a) => ("couple", a),
        Command::Dtv(a) => ("dtv", a),
        Command::Profile(a) => ("profile", a),
        Command::Cutoff(a) => ("cutoff", a),
    };
    match run_command(name, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
