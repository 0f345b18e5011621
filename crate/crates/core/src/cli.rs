//! `cliquenet` command line.
//!
//! Exit codes: 0 success, 1 verification failure or non-convergence,
//! 2 usage error, 3 I/O or file-format error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    diameter, network_diameter, predicted_diameter, random_configuration, semantic_digraph,
    verify, Mode, Property, VerifyOptions,
};
use crate::builder::{
    build_ct, extend_even, make_plan, project, to_synchroniser, PlanShape, ShapeTag,
};
use crate::engine::{find_limit, simulate, Classification};
use crate::error::Error;
use crate::io::{read_network, read_trajectory, write_network, write_trajectory, RunManifest};
use crate::network::{Configuration, NetworkSpec};
use crate::render::{flatten, render_dynamics_dot, render_pgm, FlattenOrder};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Format(_) => CliError::Io(e.to_string()),
            Error::Undetermined(_) | Error::NotConverged(_) => CliError::Failed(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "cliquenet", version, about = "Clique-tree automata networks for k-parity and k-synchronisation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Line,
    Star,
    Random,
    Explicit,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Parity,
    Sync,
}

#[derive(Subcommand)]
enum Command {
    /// Build a clique-tree network and write it as a network file.
    Build {
        #[arg(long)]
        k: usize,
        /// Number of (k+1)-cliques; n = 1 + k * cliques.
        #[arg(long)]
        cliques: usize,
        #[arg(long, value_enum, default_value = "line")]
        shape: ShapeArg,
        /// Seed for --shape random.
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated attach points for --shape explicit.
        #[arg(long, value_delimiter = ',')]
        attach: Vec<usize>,
        #[arg(long, value_enum, default_value = "parity")]
        variant: Variant,
        /// Project the alphabet down to this divisor of k.
        #[arg(long)]
        project_to: Option<usize>,
        /// Append an automaton computing x_source + 1 (synchronisers only).
        #[arg(long)]
        extend_even: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Run the parallel dynamics and write a trajectory file.
    Simulate {
        #[arg(long)]
        net: PathBuf,
        /// random:<seed> | single:<index> | file:<path> | literal configuration
        #[arg(long)]
        init: String,
        /// Step count or "auto" (diameter + k).
        #[arg(long, default_value = "auto")]
        steps: String,
        /// Step bound for limit detection on networks without a diameter.
        #[arg(long, default_value_t = 100_000)]
        max_steps: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Check a property exhaustively or on seeded samples.
    Verify {
        #[arg(long)]
        net: PathBuf,
        /// parity | sync | radius | plus1
        #[arg(long)]
        property: String,
        /// exhaustive | sample:<count>:<seed>
        #[arg(long, default_value = "exhaustive")]
        mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: available processors).
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Render a trajectory as a binary PGM space-time diagram.
    Render {
        #[arg(long)]
        trajectory: PathBuf,
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Summarise a network file.
    Info {
        #[arg(long)]
        net: PathBuf,
    },
    /// Print the interaction digraph (and optionally the dynamics) as Graphviz text.
    Dot {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        dynamics: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Entry point used by the binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_network(path: &Path) -> CliResult<NetworkSpec> {
    read_network(&read_text(path)?).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_manifest(
    path: Option<&PathBuf>,
    command: &str,
    seed: Option<u64>,
    inputs: &[&Path],
    outputs: &[&Path],
) -> CliResult<()> {
    let Some(path) = path else { return Ok(()) };
    let manifest = RunManifest {
        command: command.to_string(),
        seed,
        inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    write_bytes(path, manifest.to_json().as_bytes())
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Build {
            k,
            cliques,
            shape,
            seed,
            attach,
            variant,
            project_to,
            extend_even: extend,
            out,
            manifest,
        } => {
            let shape = match shape {
                ShapeArg::Line => PlanShape::Line,
                ShapeArg::Star => PlanShape::Star,
                ShapeArg::Random => PlanShape::Random(
                    seed.ok_or_else(|| CliError::Usage("--shape random needs --seed".into()))?,
                ),
                ShapeArg::Explicit => PlanShape::Explicit(attach),
            };
            let plan = make_plan(k, cliques, shape)?;
            let mut net = build_ct(&plan)?;
            if let Variant::Sync = variant {
                net = to_synchroniser(&net)?;
            }
            if let Some(target) = project_to {
                net = project(&net, target)?;
            }
            if let Some(source) = extend {
                net = extend_even(&net, source)?;
            }
            write_bytes(&out, write_network(&net).as_bytes())?;
            let d = diameter(&semantic_digraph(&net))?;
            println!("n: {}", net.n());
            println!("k: {}", net.k());
            println!("diameter: {d}");
            println!("predicted convergence: {d}");
            write_manifest(manifest.as_ref(), "build", seed, &[], &[&out])
        }
        Command::Simulate {
            net: net_path,
            init,
            steps,
            max_steps,
            out,
            manifest,
        } => {
            let net = load_network(&net_path)?;
            let (x0, seed) = parse_init(&init, &net)?;
            let diam = network_diameter(&net).ok();
            let steps = match steps.as_str() {
                "auto" => diam.ok_or_else(|| {
                    CliError::Usage("--steps auto needs a connected network".into())
                })? + net.k(),
                s => s
                    .parse()
                    .map_err(|_| CliError::Usage(format!("--steps must be an integer or auto, got {s:?}")))?,
            };
            let traj = simulate(&net, &x0, steps)?;
            write_bytes(&out, write_trajectory(&traj).as_bytes())?;
            write_manifest(manifest.as_ref(), "simulate", seed, &[&net_path], &[&out])?;
            let bound = match diam {
                Some(d) => d + net.k() + 1,
                None => max_steps,
            };
            let limit = find_limit(&net, &x0, bound)?;
            let class = match limit.classification {
                Classification::UniformFixedPoint(s) => format!("uniform fixed point {s}"),
                Classification::UniformCycle => "uniform cycle".to_string(),
                Classification::Other => "other".to_string(),
            };
            println!("states: {}", traj.states.len());
            println!("classification: {class}");
            println!("transient: {}", limit.transient_length);
            println!("cycle length: {}", limit.cycle_length);
            Ok(())
        }
        Command::Verify {
            net: net_path,
            property,
            mode,
            out,
            workers,
            manifest,
        } => {
            let net = load_network(&net_path)?;
            let property: Property = property.parse()?;
            let mode: Mode = mode.parse()?;
            let options = VerifyOptions::from_env();
            let mut pool = rayon::ThreadPoolBuilder::new();
            if let Some(w) = workers {
                pool = pool.num_threads(w);
            }
            let pool = pool
                .build()
                .map_err(|e| CliError::Usage(format!("worker pool: {e}")))?;
            let report = pool.install(|| verify(&net, property, mode, &options))?;
            let text = report.to_text();
            print!("{text}");
            if let Some(out) = &out {
                write_bytes(out, text.as_bytes())?;
            }
            let seed = match mode {
                Mode::Sampled { seed, .. } => Some(seed),
                Mode::Exhaustive => None,
            };
            let outputs: Vec<&Path> = out.iter().map(PathBuf::as_path).collect();
            write_manifest(manifest.as_ref(), "verify", seed, &[&net_path], &outputs)?;
            if report.pass {
                Ok(())
            } else {
                Err(CliError::Failed(format!("{property} check failed")))
            }
        }
        Command::Render {
            trajectory,
            net: net_path,
            out,
            manifest,
        } => {
            let net = load_network(&net_path)?;
            let traj = read_trajectory(&read_text(&trajectory)?)
                .map_err(|e| CliError::Io(format!("{}: {e}", trajectory.display())))?;
            if traj.n() != net.n() || traj.k != net.k() {
                return Err(CliError::Usage(format!(
                    "trajectory has k = {}, n = {} but network has k = {}, n = {}",
                    traj.k,
                    traj.n(),
                    net.k(),
                    net.n()
                )));
            }
            let order = match net.plan() {
                Some(plan) if plan.size() == net.n() => flatten(plan),
                _ => FlattenOrder::identity(net.n()),
            };
            let img = render_pgm(&traj, &order)?;
            write_bytes(&out, &img)?;
            println!("{}x{}", net.n(), traj.states.len());
            write_manifest(manifest.as_ref(), "render", None, &[&trajectory, &net_path], &[&out])
        }
        Command::Info { net: net_path } => {
            let net = load_network(&net_path)?;
            print!("{}", info_text(&net));
            Ok(())
        }
        Command::Dot {
            net: net_path,
            dynamics,
            out,
        } => {
            let net = load_network(&net_path)?;
            let dot = render_dynamics_dot(&net, dynamics)?;
            match out {
                Some(p) => write_bytes(&p, dot.as_bytes()),
                None => {
                    print!("{dot}");
                    Ok(())
                }
            }
        }
    }
}

fn parse_init(spec: &str, net: &NetworkSpec) -> CliResult<(Configuration, Option<u64>)> {
    let n = net.n();
    let k = net.k();
    if let Some(seed) = spec.strip_prefix("random:") {
        let seed: u64 = seed
            .parse()
            .map_err(|_| CliError::Usage(format!("bad seed in {spec:?}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok((random_configuration(&mut rng, n, k), Some(seed)));
    }
    if let Some(index) = spec.strip_prefix("single:") {
        let index: usize = index
            .parse()
            .map_err(|_| CliError::Usage(format!("bad index in {spec:?}")))?;
        return Ok((Configuration::single(n, index, 1)?, None));
    }
    let text = match spec.strip_prefix("file:") {
        Some(path) => {
            let body = read_text(Path::new(path))?;
            body.lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("")
                .to_string()
        }
        None => spec.to_string(),
    };
    let x = Configuration::parse(&text, k)?;
    x.validate(k, Some(n))?;
    Ok((x, None))
}

/// Multi-line summary printed by `cliquenet info`.
pub fn info_text(net: &NetworkSpec) -> String {
    let mut s = String::new();
    s.push_str(&format!("k: {}\nn: {}\n", net.k(), net.n()));
    let offsets = if net.all_offsets(0) {
        "all 0 (parity)".to_string()
    } else if net.all_offsets(1) {
        "all 1 (synchroniser)".to_string()
    } else {
        let nonzero = net.offsets().filter(|&o| o != 0).count();
        format!("mixed ({nonzero} nonzero)")
    };
    s.push_str(&format!("offsets: {offsets}\n"));
    if let Some(plan) = net.plan() {
        s.push_str(&format!(
            "plan: {}, {} cliques, clique size {}\n",
            plan.shape(),
            plan.cliques(),
            plan.k() + 1
        ));
    }
    let violations = net.ct_violations();
    if violations.is_empty() {
        s.push_str("invariants: OK\n");
    } else {
        s.push_str("invariants: FAIL\n");
        for v in &violations {
            s.push_str(&format!("  - {v}\n"));
        }
    }
    match network_diameter(net) {
        Ok(d) => s.push_str(&format!("diameter: {d}\n")),
        Err(e) => s.push_str(&format!("diameter: {e}\n")),
    }
    if let Some(plan) = net.plan() {
        if plan.shape() == ShapeTag::Line && plan.size() == net.n() {
            if let Ok(p) = predicted_diameter(plan.k(), net.n()) {
                s.push_str(&format!("predicted diameter: {p}\n"));
            }
        }
    }
    s
}
