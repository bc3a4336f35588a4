use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use helpercache::delivery::{build_schedule, write_trace};
use helpercache::partition::{
    bb_assign, brute_force_min_partitions, build_tables, flow_oracle, greedy_assign,
    parse_instance, partitions_from_assignment, write_instance, PartitionSet, ProfileSubnetwork,
};
use helpercache::sim::{
    build_network, emit_results, partition_profiles, run_sweep, trial_seed, Density,
    ExperimentConfig, Method, OutputFormat, PointConfig, SweepVar, DEFAULT_TRIALS,
};
use helpercache::topology::write_topology_dump;

#[derive(Parser)]
#[command(
    name = "helpercache",
    version,
    about = "Shared-cache multi-helper delivery simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo sum-DoF sweep over L or r.
    Simulate(SimulateArgs),
    /// Minimum partitioning of one subnetwork instance file.
    Partition(PartitionArgs),
    /// Dump the topology of one trial (or one profile's instance).
    Topology(TopologyArgs),
    /// Print the transmission trace of one trial.
    Trace(TraceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepArg {
    #[value(name = "L")]
    Profiles,
    #[value(name = "r")]
    Radius,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Bb,
    Greedy,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Bb,
    Greedy,
    Brute,
    Flow,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct DensityArgs {
    /// Users per unit area.
    #[arg(long)]
    density: Option<f64>,
    /// Users per unit area per profile; scaled by L at each point.
    #[arg(long = "density-per-profile", value_name = "U_OVER_L")]
    density_per_profile: Option<f64>,
}

impl DensityArgs {
    fn resolve(&self) -> Density {
        match (self.density, self.density_per_profile) {
            (Some(u), _) => Density::Absolute(u),
            (None, Some(u)) => Density::PerProfile(u),
            (None, None) => unreachable!("clap enforces one density flag"),
        }
    }
}

#[derive(Args)]
struct NetworkArgs {
    #[arg(long, default_value_t = 4, value_name = "E")]
    helpers: usize,
    #[arg(long, default_value_t = 10, value_name = "L")]
    profiles: usize,
    #[arg(long, default_value_t = 0.1, value_name = "G")]
    gamma: f64,
    #[arg(long, default_value_t = 1.2, value_name = "r")]
    radius: f64,
    #[arg(long = "user-radius", default_value_t = 2.7, value_name = "R_U")]
    user_radius: f64,
    #[command(flatten)]
    density: DensityArgs,
    #[arg(long, default_value_t = 1, value_name = "S")]
    seed: u64,
}

impl NetworkArgs {
    fn config(&self, sweep: SweepVar, values: Vec<f64>) -> ExperimentConfig {
        ExperimentConfig {
            helpers: self.helpers,
            profiles: self.profiles,
            gamma: self.gamma,
            radius: self.radius,
            user_radius: self.user_radius,
            density: self.density.resolve(),
            trials: DEFAULT_TRIALS,
            seed: self.seed,
            methods: Method::ALL.to_vec(),
            verify_decode: false,
            sweep,
            values,
        }
    }

    fn point(&self) -> Result<PointConfig> {
        Ok(self
            .config(SweepVar::Radius, vec![self.radius])
            .point(self.radius)?)
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    sweep: SweepArg,
    /// Comma-separated sweep values.
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    values: Vec<f64>,
    #[command(flatten)]
    network: NetworkArgs,
    #[arg(long, default_value_t = DEFAULT_TRIALS, value_name = "N")]
    trials: usize,
    #[arg(long, value_enum, default_value = "both")]
    method: MethodArg,
    /// Send every transmission and check decoding at every user.
    #[arg(long = "verify-decode")]
    verify_decode: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Include per-trial arrays in JSON output.
    #[arg(long = "per-trial")]
    per_trial: bool,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PartitionArgs {
    #[arg(long, value_name = "FILE")]
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "bb")]
    method: SolverArg,
    /// Helper count; defaults to the largest helper index in the file.
    #[arg(long, value_name = "E")]
    helpers: Option<usize>,
}

#[derive(Args)]
struct TopologyArgs {
    #[command(flatten)]
    network: NetworkArgs,
    /// Trial index whose network is dumped.
    #[arg(long, default_value_t = 0)]
    trial: usize,
    /// Write this profile's subnetwork as an instance file instead (1-based).
    #[arg(long = "instance-of", value_name = "PROFILE")]
    instance_of: Option<usize>,
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    network: NetworkArgs,
    #[arg(long, default_value_t = 0)]
    trial: usize,
    #[arg(long, value_enum, default_value = "bb")]
    method: MethodArg,
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let sweep = match args.sweep {
        SweepArg::Profiles => SweepVar::Profiles,
        SweepArg::Radius => SweepVar::Radius,
    };
    let mut config = args.network.config(sweep, args.values);
    config.trials = args.trials;
    config.verify_decode = args.verify_decode;
    config.methods = match args.method {
        MethodArg::Bb => vec![Method::Bb],
        MethodArg::Greedy => vec![Method::Greedy],
        MethodArg::Both => Method::ALL.to_vec(),
    };
    let format = match args.format {
        FormatArg::Csv => OutputFormat::Csv,
        FormatArg::Json => OutputFormat::Json,
    };
    let points = run_sweep(&config)?;
    emit_results(&points, format, args.per_trial, args.out.as_deref())?;
    Ok(())
}

fn solve(subnet: &ProfileSubnetwork, method: SolverArg) -> Result<(usize, Option<PartitionSet>)> {
    Ok(match method {
        SolverArg::Greedy => {
            let set = greedy_assign(subnet);
            (set.count(), Some(set))
        }
        SolverArg::Bb => {
            let tables = build_tables(subnet);
            let set = partitions_from_assignment(&tables, &bb_assign(&tables))?;
            (set.count(), Some(set))
        }
        SolverArg::Brute => (brute_force_min_partitions(subnet)?, None),
        SolverArg::Flow => (flow_oracle(subnet), None),
    })
}

fn partition(args: PartitionArgs) -> Result<()> {
    let text = fs::read_to_string(&args.instance)
        .with_context(|| format!("reading {}", args.instance.display()))?;
    let subnet = parse_instance(&text, args.helpers)?;
    let (count, set) = solve(&subnet, args.method)?;
    let mut out = io::stdout().lock();
    writeln!(out, "partitions: {count}")?;
    if let Some(set) = set {
        set.validate(&subnet)?;
        for p in &set.partitions {
            writeln!(out, "{p}")?;
        }
    }
    Ok(())
}

fn topology(args: TopologyArgs) -> Result<()> {
    let point = args.network.point()?;
    let net = build_network(&point, trial_seed(args.network.seed, args.trial))?;
    let mut out = io::stdout().lock();
    match args.instance_of {
        None => write_topology_dump(&mut out, &net.layout, &net.users, &net.connectivity)?,
        Some(p) => {
            if p == 0 || p > point.profiles {
                bail!("profile must be in 1..={}", point.profiles);
            }
            let members = &net.assignment.members[p - 1];
            let mut subnet =
                ProfileSubnetwork::from_connectivity(&net.connectivity, p - 1, members)?;
            // instance files number users from 1; 0 marks an idle helper
            subnet.users.iter_mut().for_each(|u| *u += 1);
            out.write_all(write_instance(&subnet).as_bytes())?;
        }
    }
    Ok(())
}

fn trace(args: TraceArgs) -> Result<()> {
    let point = args.network.point()?;
    let method = match args.method {
        MethodArg::Bb => Method::Bb,
        MethodArg::Greedy => Method::Greedy,
        MethodArg::Both => bail!("trace takes a single method"),
    };
    let net = build_network(&point, trial_seed(args.network.seed, args.trial))?;
    let sets = partition_profiles(&net.connectivity, &net.assignment, method)?;
    write_trace(&mut io::stdout().lock(), &build_schedule(&sets), point.t)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Partition(a) => partition(a),
        Command::Topology(a) => topology(a),
        Command::Trace(a) => trace(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
