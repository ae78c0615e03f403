use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use duality::acceptance::{run_suite_with, Options, Suite};
use duality::config::{ExperimentSpec, FamilyChoice, Grid, OutputFormat, Scenario};
use duality::io;
use duality_core::bsgen::{fourier, hadamard};
use duality_core::mesh::{block_paths, compile, evaluate, haar_random};

#[derive(Parser)]
#[command(name = "duality", version, about = "Multipath delayed-choice simulator: sweeps, acceptance suite, MZI meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its CSV/JSON/SVG artifacts.
    Run(RunArgs),
    /// Run the acceptance suite; exits with 2 if any criterion fails.
    Verify {
        #[arg(long, value_enum, default_value = "fast")]
        suite: Suite,
        /// Flip the sign of one eraser coefficient (the suite should fail).
        #[arg(long, hide = true)]
        mutate_eraser: bool,
    },
    /// Compile or evaluate MZI meshes.
    #[command(subcommand)]
    Mesh(MeshCommand),
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment file; flags given here override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    scenario: Option<Scenario>,
    #[arg(long)]
    d: Option<usize>,
    /// Comma-separated dimensions for the pearson scenario.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    family: Option<FamilyChoice>,
    /// `start:stop:step` or a single value; accepts `pi`, e.g. `0:2pi:pi/32`.
    #[arg(long)]
    alpha: Option<Grid>,
    #[arg(long)]
    delta: Option<Grid>,
    #[arg(long)]
    theta: Option<Grid>,
    /// Source-noise grid swept by the bell scenario.
    #[arg(long)]
    noise: Option<Grid>,
    #[arg(long)]
    source_noise: Option<f64>,
    #[arg(long)]
    leakage: Option<f64>,
    #[arg(long)]
    mean_total: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, value_enum, value_delimiter = ',')]
    format: Option<Vec<OutputFormat>>,
    /// Output directory [default: config file, then $DUALITY_OUT_DIR, then ./out].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum NamedUnitary {
    Hadamard,
    Fourier,
    Haar,
}

#[derive(Subcommand)]
enum MeshCommand {
    /// Decompose a unitary into a triangular mesh and write it as JSON.
    Compile {
        /// Unitary as `{"rows", "cols", "data": [[re, im], ...]}`.
        #[arg(long, conflicts_with = "kind")]
        unitary: Option<PathBuf>,
        /// Built-in unitary instead of a file.
        #[arg(long, value_enum, requires = "d")]
        kind: Option<NamedUnitary>,
        #[arg(long)]
        d: Option<usize>,
        /// Seed for `--kind haar`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Drop nodes that act as the identity.
        #[arg(long)]
        prune: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a mesh file to its transfer matrix.
    Eval {
        mesh: PathBuf,
        /// Uniform node visibility in (0, 1].
        #[arg(long)]
        visibility: Option<f64>,
        /// Comma-separated 0-based paths to block.
        #[arg(long, value_delimiter = ',')]
        block: Vec<usize>,
        #[arg(long, default_value_t = 0.0)]
        leakage: f64,
        /// Write the matrix here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn build_spec(args: RunArgs) -> anyhow::Result<ExperimentSpec> {
    let mut spec = match &args.config {
        Some(path) => ExperimentSpec::from_toml(&io::read_text(path)?)
            .with_context(|| format!("reading {}", path.display()))?,
        None => ExperimentSpec::default(),
    };
    macro_rules! set {
        ($($field:ident),*) => { $(if let Some(v) = args.$field { spec.$field = v; })* };
    }
    set!(scenario, d, dims, family, alpha, delta, theta, noise, source_noise, leakage, mean_total, seed, trials);
    if let Some(f) = args.format {
        spec.formats = f;
    }
    if let Some(out) = args.out {
        spec.output_dir = Some(out);
    }
    spec.validate()?;
    Ok(spec)
}

fn mesh_command(cmd: MeshCommand) -> anyhow::Result<()> {
    match cmd {
        MeshCommand::Compile {
            unitary,
            kind,
            d,
            seed,
            prune,
            out,
        } => {
            let u = match (unitary, kind, d) {
                (Some(path), _, _) => io::read_unitary(&path)?,
                (None, Some(NamedUnitary::Hadamard), Some(d)) => hadamard(d)?,
                (None, Some(NamedUnitary::Fourier), Some(d)) => fourier(d)?,
                (None, Some(NamedUnitary::Haar), Some(d)) => haar_random(d, seed)?,
                _ => bail!("give either --unitary FILE or --kind with --d"),
            };
            let mut mesh = compile(&u)?;
            if prune {
                mesh = mesh.prune();
            }
            io::write_mesh(&out, &mesh)?;
            eprintln!("{} nodes for d = {} → {}", mesh.nodes().len(), mesh.d(), out.display());
        }
        MeshCommand::Eval {
            mesh,
            visibility,
            block,
            leakage,
            out,
        } => {
            let mut m = io::read_mesh(&mesh)?;
            if let Some(v) = visibility {
                m = m.with_visibility(v)?;
            }
            if !block.is_empty() {
                let mut mask = vec![false; m.d()];
                for p in block {
                    if p >= m.d() {
                        bail!("path {p} is out of range for d = {}", m.d());
                    }
                    mask[p] = true;
                }
                m = block_paths(&m, &mask, leakage)?;
            }
            let t = evaluate(&m);
            match out {
                Some(path) => io::write_matrix(&path, &t)?,
                None => print!("{}", io::matrix_to_json(&t)),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage mistakes are validation errors; help and version are not.
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => build_spec(args).and_then(|spec| {
            for path in duality::scenario::run(&spec)? {
                println!("{}", path.display());
            }
            Ok(())
        }),
        Command::Verify { suite, mutate_eraser } => {
            let mut opts = Options::new(suite);
            if mutate_eraser {
                opts.eraser.upper[1] = -opts.eraser.upper[1];
            }
            let report = run_suite_with(&opts, |r| println!("{r}"));
            let failed = report.failures().count();
            println!(
                "{:?} suite: {} passed, {failed} failed in {:.2} s",
                report.suite,
                report.results.len() - failed,
                report.elapsed.as_secs_f64()
            );
            return if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(2) };
        }
        Command::Mesh(cmd) => mesh_command(cmd),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
