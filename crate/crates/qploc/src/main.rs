use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qploc::ap::{load_ap, ApOptions};
use qploc::runtime::{Threaded, WallClock};
use qploc::{format, report, selftest};
use qploc_core::benders::Context;
use qploc_core::clock::Deadline;
use qploc_core::instance::{generate_set1, SetIConfig, Tightness, VariantKind};
use qploc_core::rlt::{gap_percent, lp_bound, RltConfig};
use qploc_core::{bnc, Instance, SolverParams};

#[derive(Parser)]
#[command(
    name = "qploc",
    version,
    about = "Exact solver for quadratic capacitated p-location with single assignments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance to optimality.
    Solve(SolveArgs),
    /// Write a generated large-scale instance.
    Gen(GenArgs),
    /// Linear relaxation bounds of the RLT family as CSV.
    RltBound(RltArgs),
    /// Compare the solver with brute force on random small instances.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Uhlpsa,
    Uphmpsa,
    Chlpsa,
    Cphmpsa,
}

impl VariantArg {
    fn kind(self) -> VariantKind {
        match self {
            VariantArg::Uhlpsa => VariantKind::Uhlpsa,
            VariantArg::Uphmpsa => VariantKind::Uphmpsa,
            VariantArg::Chlpsa => VariantKind::Chlpsa,
            VariantArg::Cphmpsa => VariantKind::Cphmpsa,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TightnessArg {
    Loose,
    Tight,
}

impl From<TightnessArg> for Tightness {
    fn from(t: TightnessArg) -> Self {
        match t {
            TightnessArg::Loose => Tightness::Loose,
            TightnessArg::Tight => Tightness::Tight,
        }
    }
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance file (text format, or raw AP data with --ap).
    path: PathBuf,
    /// Read `path` as a raw AP data file.
    #[arg(long)]
    ap: bool,
    /// Scale applied to AP distances.
    #[arg(long, default_value_t = 1.0, env = "QPLOC_AP_DIST_SCALE")]
    ap_dist_scale: f64,
    /// Scale applied to AP flows.
    #[arg(long, default_value_t = 1.0, env = "QPLOC_AP_FLOW_SCALE")]
    ap_flow_scale: f64,
    /// AP tail pairs list capacity before setup cost.
    #[arg(long)]
    ap_capacity_first: bool,
    /// Problem variant; overrides the file's.
    #[arg(long, value_enum, env = "QPLOC_VARIANT")]
    variant: Option<VariantArg>,
    /// Maximum number of open facilities.
    #[arg(long, env = "QPLOC_P")]
    p: Option<usize>,
}

impl InstanceArgs {
    fn load(&self) -> Result<Instance> {
        if self.ap {
            let opts = ApOptions {
                dist_scale: self.ap_dist_scale,
                flow_scale: self.ap_flow_scale,
                capacity_first: self.ap_capacity_first,
                ..ApOptions::default()
            };
            let data = load_ap(&self.path, &opts)
                .with_context(|| format!("reading {}", self.path.display()))?;
            let kind = self.variant.map_or(VariantKind::Uhlpsa, VariantArg::kind);
            return Ok(data.to_instance(kind, self.p, &opts)?);
        }
        let inst =
            format::load(&self.path).with_context(|| format!("reading {}", self.path.display()))?;
        Ok(match self.variant {
            Some(v) => inst.with_variant(v.kind(), self.p.unwrap_or(inst.raw_p()))?,
            None => match self.p {
                Some(p) => inst.with_variant(kind_of(&inst), p)?,
                None => inst,
            },
        })
    }
}

fn kind_of(inst: &Instance) -> VariantKind {
    VariantKind::ALL
        .into_iter()
        .find(|k| k.variant() == inst.variant())
        .unwrap_or(VariantKind::Cphmpsa)
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Wall-clock limit in seconds.
    #[arg(long, env = "QPLOC_TIME_LIMIT")]
    time_limit: Option<f64>,
    #[arg(long, env = "QPLOC_NODE_LIMIT")]
    node_limit: Option<usize>,
    /// Minimum violation for cuts at fractional points.
    #[arg(long, env = "QPLOC_EPS_CUT")]
    eps_cut: Option<f64>,
    /// Relative root improvement threshold in percent.
    #[arg(long, env = "QPLOC_KAPPA")]
    kappa: Option<f64>,
    /// Extra cuts at nodes whose depth is a multiple of this.
    #[arg(long, env = "QPLOC_GAMMA")]
    gamma: Option<usize>,
    /// Number of extra cut rounds at those nodes.
    #[arg(long, env = "QPLOC_UPSILON")]
    upsilon: Option<usize>,
    /// Stabilization weight of the previous separation point.
    #[arg(long, env = "QPLOC_PHI")]
    phi: Option<f64>,
    /// Separation threads (0 = all cores).
    #[arg(long, env = "QPLOC_THREADS", default_value_t = 1)]
    threads: usize,
    /// Recorded in the CSV row; the solver itself is deterministic.
    #[arg(long, env = "QPLOC_SEED", default_value_t = 0)]
    seed: u64,
    /// Append a CSV row (header written for new files).
    #[arg(long, env = "QPLOC_CSV")]
    csv: Option<PathBuf>,
    /// Write the root iteration log as CSV.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Disable elimination tests and partial enumeration.
    #[arg(long)]
    no_reduce: bool,
    /// Disable the matheuristic.
    #[arg(long)]
    no_heuristic: bool,
    /// Print the assignment.
    #[arg(long)]
    show_assignment: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(short, long)]
    n: usize,
    #[arg(long, default_value_t = 1, env = "QPLOC_SEED")]
    seed: u64,
    #[arg(long, value_enum, default_value = "loose")]
    setup: TightnessArg,
    #[arg(long, value_enum, default_value = "tight")]
    capacity: TightnessArg,
    #[arg(long, value_enum, default_value = "chlpsa")]
    variant: VariantArg,
    #[arg(long)]
    p: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RltArgs {
    /// Instance files in the text format.
    paths: Vec<PathBuf>,
    /// Relaxations to compute (default: all).
    #[arg(long, value_delimiter = ',')]
    configs: Vec<String>,
    /// Reference optimum for %gap; computed by the solver when absent.
    #[arg(long)]
    optimum: Option<f64>,
    /// Time limit for computing the reference optimum.
    #[arg(long, default_value_t = 600.0)]
    time_limit: f64,
    #[arg(long, env = "QPLOC_CSV")]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 80)]
    count: usize,
    #[arg(long, default_value_t = 1, env = "QPLOC_SEED")]
    seed: u64,
}

fn params_of(a: &SolveArgs) -> SolverParams {
    let mut p = SolverParams::default();
    if let Some(v) = a.time_limit {
        p.time_limit = v;
    }
    if let Some(v) = a.node_limit {
        p.node_limit = v;
    }
    if let Some(v) = a.eps_cut {
        p.eps_cut = v;
    }
    if let Some(v) = a.kappa {
        p.kappa = v / 100.0;
    }
    if let Some(v) = a.gamma {
        p.gamma = v;
    }
    if let Some(v) = a.upsilon {
        p.upsilon = v;
    }
    if let Some(v) = a.phi {
        p.phi = v;
    }
    p.threads = a.threads;
    if a.no_reduce {
        p.use_elimination = false;
        p.use_partial_enumeration = false;
    }
    if a.no_heuristic {
        p.use_matheuristic = false;
    }
    p
}

fn append_csv(path: &Path, header: &str, row: &str) -> Result<()> {
    let fresh = !path.exists() || std::fs::metadata(path)?.len() == 0;
    let mut f = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    if fresh {
        writeln!(f, "{header}")?;
    }
    writeln!(f, "{row}")?;
    Ok(())
}

fn solve_instance(inst: &Instance, params: &SolverParams) -> Result<bnc::SolveReport> {
    let clock = WallClock::new();
    let exec = Threaded::new(params.threads);
    let ctx = Context {
        deadline: Deadline::new(&clock, params.time_limit),
        exec: &exec,
    };
    Ok(bnc::solve(inst, params, &ctx)?)
}

fn run_solve(a: &SolveArgs) -> Result<()> {
    let inst = a.instance.load()?;
    let params = params_of(a);
    let rep = solve_instance(&inst, &params)?;
    let name = a.instance.path.display().to_string();
    print!("{}", report::human(&name, &rep));
    if a.show_assignment {
        print!("{}", report::assignment(&rep));
    }
    let variant = kind_of(&inst).name();
    if let Some(path) = &a.csv {
        let header = format!("{},seed", report::CSV_HEADER);
        let row = format!(
            "{},{}",
            report::csv_row(&name, variant, inst.p(), &rep),
            a.seed
        );
        append_csv(path, &header, &row)?;
    }
    if let Some(path) = &a.log {
        let mut text = String::from(qploc_core::benders::IterationLog::CSV_HEADER);
        text.push('\n');
        for l in &rep.log {
            text.push_str(&l.to_string());
            text.push('\n');
        }
        std::fs::write(path, text)?;
    }
    Ok(())
}

fn run_gen(a: &GenArgs) -> Result<()> {
    let mut cfg = SetIConfig::new(a.n, a.seed);
    cfg.setup = a.setup.into();
    cfg.capacity = a.capacity.into();
    let (inst, _) = generate_set1(&cfg)?;
    let kind = a.variant.kind();
    let inst = inst.with_variant(kind, a.p.unwrap_or(inst.n()))?;
    let text = format::to_string(&inst);
    match &a.output {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run_rlt(a: &RltArgs) -> Result<()> {
    let configs: Vec<RltConfig> = if a.configs.is_empty() {
        RltConfig::ALL.to_vec()
    } else {
        a.configs
            .iter()
            .map(|c| RltConfig::parse(c).with_context(|| format!("unknown relaxation `{c}`")))
            .collect::<Result<_>>()?
    };
    let mut out = String::from("instance,config,bound,%gap\n");
    for path in &a.paths {
        let inst = format::load(path).with_context(|| format!("reading {}", path.display()))?;
        let opt = match a.optimum {
            Some(v) => v,
            None => {
                let params = SolverParams {
                    time_limit: a.time_limit,
                    ..SolverParams::default()
                };
                let rep = solve_instance(&inst, &params)?;
                if rep.status != bnc::SolveStatus::Optimal {
                    eprintln!(
                        "warning: {} not solved to optimality; %gap uses the best value",
                        path.display()
                    );
                }
                rep.solution.total()
            }
        };
        for cfg in &configs {
            let bound = lp_bound(&inst, *cfg)?;
            out.push_str(&format!(
                "{},{},{:.6},{:.4}\n",
                path.display(),
                cfg.name(),
                bound,
                gap_percent(opt, bound)
            ));
        }
    }
    match &a.csv {
        Some(p) => std::fs::write(p, out)?,
        None => print!("{out}"),
    }
    Ok(())
}

fn run_selftest(a: &SelftestArgs) -> Result<bool> {
    let params = SolverParams::default();
    let mut failures = 0;
    let cases = selftest::cases(a.count, a.seed);
    for case in &cases {
        let r = selftest::solve_case(case, &params)?;
        let ok = r.matches();
        if !ok {
            failures += 1;
        }
        println!(
            "{} n={} p={} {} seed={} oracle={:.6} solver={:.6} {:.3}s",
            if ok { "ok  " } else { "FAIL" },
            case.n,
            case.p,
            case.kind.name(),
            case.seed,
            r.oracle,
            r.solver,
            r.seconds
        );
    }
    println!("{} of {} cases match", cases.len() - failures, cases.len());
    Ok(failures == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => run_solve(a).map(|_| true),
        Command::Gen(a) => run_gen(a).map(|_| true),
        Command::RltBound(a) => run_rlt(a).map(|_| true),
        Command::Selftest(a) => run_selftest(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
