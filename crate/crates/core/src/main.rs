use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spinchem::cli::{self, EdgeValues, RunConfig};

#[derive(Parser)]
#[command(name = "spinchem", version, about = "Spin-model to electronic-structure encodings with certified bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Instance file (JSON)
    #[arg(long)]
    instance: PathBuf,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Gaussian exponent for interaction orbitals
    #[arg(long)]
    alpha: Option<f64>,
    /// Gaussian exponent for the onsite orbital
    #[arg(long)]
    beta: Option<f64>,
    /// Close-pair distance: float or JSON map {"i-j": value}
    #[arg(long, conflicts_with = "omega")]
    gamma: Option<EdgeValues>,
    /// Dimensionless separation alpha*gamma^2: float or JSON map
    #[arg(long)]
    omega: Option<EdgeValues>,
    /// Far-separation scale
    #[arg(long = "Gamma")]
    big_gamma: Option<f64>,
    /// Onsite repulsion
    #[arg(long)]
    u0: Option<f64>,
    /// Electron count
    #[arg(long)]
    eta: Option<usize>,
    /// Coupling-bound exponent
    #[arg(long)]
    p: Option<f64>,
    /// Precision exponent
    #[arg(long)]
    q: Option<f64>,
    /// Random seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sector dimension cap
    #[arg(long, default_value_t = spinchem::spectra::DEFAULT_DIM_CAP)]
    cap: usize,
    /// Independent-set size (np-gadget)
    #[arg(long)]
    k: Option<usize>,
}

impl CommonArgs {
    fn into_config(self) -> RunConfig {
        RunConfig {
            instance: self.instance,
            out: self.out,
            seed: self.seed,
            cap: self.cap,
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            omega: self.omega,
            big_gamma: self.big_gamma,
            u0: self.u0,
            eta: self.eta,
            p: self.p,
            q: self.q,
            k: self.k,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Encode a Heisenberg instance: Hubbard hoppings, orbital layout, tensors
    Reduce(CommonArgs),
    /// Rebuild all Hamiltonians from reduce outputs and evaluate every bound
    Verify(CommonArgs),
    /// Decide k-independent-set through the diagonal gadget Hamiltonian
    NpGadget(CommonArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Reduce(args) => {
            let config = args.into_config();
            match cli::cmd_reduce(&config) {
                Ok(artifacts) => {
                    println!("wrote {} files to {}", artifacts.files.len(), config.out.display());
                    for (i, j, w) in &artifacts.manifest.omega {
                        println!("edge ({i}, {j}): omega = {w:.12}");
                    }
                    cli::EXIT_OK
                }
                Err(e) => {
                    eprintln!("reduce failed: {e}");
                    cli::exit_code_for(&e)
                }
            }
        }
        Command::Verify(args) => {
            let config = args.into_config();
            match cli::cmd_verify(&config) {
                Ok(outcome) => {
                    print!("{}", cli::render_report_table(&outcome.reports));
                    outcome.exit_code
                }
                Err(e) => {
                    eprintln!("verify failed: {e}");
                    cli::exit_code_for(&e)
                }
            }
        }
        Command::NpGadget(args) => {
            let config = args.into_config();
            match cli::cmd_np_gadget(&config) {
                Ok(result) => {
                    println!(
                        "independent set of size {}: {} (ground energy {:.6e}, witness modes {:?})",
                        result.k, result.is_independent_set, result.energy, result.occupation
                    );
                    cli::EXIT_OK
                }
                Err(e) => {
                    eprintln!("np-gadget failed: {e}");
                    cli::exit_code_for(&e)
                }
            }
        }
    };
    ExitCode::from(code as u8)
}
