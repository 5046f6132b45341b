//! `clwe`: parameter inspection, modulus search, encryption and benchmarks.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use clwe_core::params::{find_pack, find_q_naive, find_q_quadratic};
use clwe_core::pke::Pke;
use clwe_core::selftest::{run_all, Config};
use clwe_core::{registry, wire, GaussianParams, ParamPack};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

#[derive(Parser)]
#[command(name = "clwe", version, about = "Learning with errors over cyclic division algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect and search parameter packs.
    Params {
        #[command(subcommand)]
        command: ParamsCommand,
    },
    /// Generate a key pair.
    Keygen {
        /// Pack file, or a registry label such as m512-d2-q12289.
        #[arg(long)]
        pack: String,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out_pk: PathBuf,
        #[arg(long)]
        out_sk: PathBuf,
    },
    /// Encrypt a packed bit message.
    Encrypt {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        msg: PathBuf,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Pack overriding the registry lookup by (m, d, q).
        #[arg(long)]
        pack: Option<String>,
        /// Evaluate every transposed product both ways and compare.
        #[arg(long)]
        cross_check: bool,
    },
    /// Decrypt a ciphertext to a packed bit message.
    Decrypt {
        #[arg(long)]
        sk: PathBuf,
        #[arg(long)]
        ct: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        pack: Option<String>,
    },
    /// Measure the decryption failure rate.
    FailureRate {
        #[arg(long)]
        pack: String,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Time naive and block multiplication against the baselines.
    Bench {
        #[arg(long)]
        pack: String,
        #[arg(long)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Run the invariant suite.
    Selftest {
        /// Acceptance-scale sizes instead of the quick smoke test.
        #[arg(long)]
        full: bool,
    },
}

#[derive(Subcommand)]
enum ParamsCommand {
    /// Print the registry.
    List {
        #[arg(long)]
        json: bool,
    },
    /// Check a pack file against the validation rules.
    Validate {
        file: PathBuf,
        /// Also require declared complete splitting.
        #[arg(long)]
        fast_path: bool,
    },
    /// Search for moduli that split completely.
    FindQ {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        qprime: u64,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        max: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Naive,
    Quadratic,
}

fn load_pack(source: &str) -> Result<ParamPack> {
    let path = Path::new(source);
    if path.exists() {
        return Ok(ParamPack::load(path)?);
    }
    registry()
        .into_iter()
        .find(|p| p.label() == source)
        .ok_or_else(|| anyhow!("{source}: no such file or registry label"))
}

fn instantiate(pack: &ParamPack) -> Result<Pke> {
    Ok(Pke::new(pack.instantiate()?))
}

/// The pack for a key or ciphertext file: `--pack` if given, otherwise the
/// registry entry matching its header.
fn pack_for(bytes: &[u8], file: &Path, over: Option<&str>) -> Result<ParamPack> {
    let h = wire::read_header(bytes).with_context(|| file.display().to_string())?;
    match over {
        Some(source) => load_pack(source),
        None => find_pack(h.m as u64, h.d as u64, h.q as u64).ok_or_else(|| {
            anyhow!(
                "{}: no registry pack for m={}, d={}, q={}; pass --pack",
                file.display(),
                h.m,
                h.d,
                h.q
            )
        }),
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn params(cmd: ParamsCommand) -> Result<()> {
    match cmd {
        ParamsCommand::List { json } => {
            let packs = registry();
            if json {
                println!("{}", serde_json::to_string_pretty(&packs)?);
            } else {
                println!("{:<18} {:>5} {:>5} {:>3} {:>6} {:>9} {:>4} {:<11} {:>6}", "label", "m", "n", "d", "N", "q", "t", "kind", "q'");
                for p in &packs {
                    let qp = p.provenance.q_prime.map_or("-".to_string(), |v| v.to_string());
                    let kind = format!("{:?}", p.provenance.construction).to_lowercase();
                    println!(
                        "{:<18} {:>5} {:>5} {:>3} {:>6} {:>9} {:>4} {:<11} {:>6}",
                        p.label(), p.m, p.n, p.d, p.total_dimension(), p.q, p.gamma_exponent, kind, qp
                    );
                }
            }
        }
        ParamsCommand::Validate { file, fast_path } => {
            let pack = ParamPack::load(&file)?;
            let violations = if fast_path { pack.validate_fast_path() } else { pack.validate() };
            if let Some(first) = violations.first() {
                let rest: Vec<String> = violations.iter().skip(1).map(ToString::to_string).collect();
                if rest.is_empty() {
                    bail!("{}: {first}", pack.label());
                }
                bail!("{}: {first}; also {}", pack.label(), rest.join("; "));
            }
            println!("{}: valid", pack.label());
        }
        ParamsCommand::FindQ { m, qprime, mode, max } => {
            let found = match mode {
                Mode::Naive => find_q_naive(m, qprime, max)?,
                Mode::Quadratic => find_q_quadratic(m, qprime, max)?,
            };
            for q in found {
                println!("{q}");
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Params { command } => params(command)?,
        Command::Keygen { pack, sigma, seed, out_pk, out_sk } => {
            let pack = load_pack(&pack)?;
            let pke = instantiate(&pack)?;
            let gp = GaussianParams::new(sigma)?;
            let (pk, sk) = pke.keygen(&gp, &mut ChaCha20Rng::seed_from_u64(seed));
            write(&out_pk, &wire::encode_public_key(pke.algebra(), &pk))?;
            write(&out_sk, &wire::encode_secret_key(pke.algebra(), &sk))?;
        }
        Command::Encrypt { pk, msg, sigma, seed, out, pack, cross_check } => {
            let bytes = read(&pk)?;
            let pke = instantiate(&pack_for(&bytes, &pk, pack.as_deref())?)?.with_cross_check(cross_check);
            let key = wire::decode_public_key(pke.algebra(), &bytes)?;
            let message = wire::decode_message(&read(&msg)?, pke.capacity())
                .with_context(|| msg.display().to_string())?;
            let gp = GaussianParams::new(sigma)?;
            let ct = pke.encrypt(&key, &message, &gp, &mut ChaCha20Rng::seed_from_u64(seed))?;
            write(&out, &wire::encode_ciphertext(pke.algebra(), &ct))?;
        }
        Command::Decrypt { sk, ct, out, pack } => {
            let sk_bytes = read(&sk)?;
            let pke = instantiate(&pack_for(&sk_bytes, &sk, pack.as_deref())?)?;
            let key = wire::decode_secret_key(pke.algebra(), &sk_bytes)?;
            let ciphertext = wire::decode_ciphertext(pke.algebra(), &read(&ct)?)
                .with_context(|| ct.display().to_string())?;
            let message = pke.decrypt(&key, &ciphertext)?;
            write(&out, &wire::encode_message(&message))?;
        }
        Command::FailureRate { pack, sigma, trials, seed } => {
            let pke = instantiate(&load_pack(&pack)?)?;
            let report = pke.failure_rate(&GaussianParams::new(sigma)?, trials, seed)?;
            println!("{}", serde_json::to_string(&report)?);
        }
        Command::Bench { pack, reps, seed, json } => {
            let pack = load_pack(&pack)?;
            let report = clwe_core::bench::bench_mul(&pack, reps, &mut ChaCha20Rng::seed_from_u64(seed))?;
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_table());
            }
        }
        Command::Selftest { full } => {
            let cfg = if full { Config::full() } else { Config::quick() };
            let checks = run_all(&cfg);
            for c in &checks {
                println!("{c}");
                if let Some(w) = &c.warning {
                    println!("    {w}");
                }
            }
            let hard: Vec<&str> = checks.iter().filter(|c| c.is_hard_failure()).map(|c| c.name).collect();
            if !hard.is_empty() {
                bail!("selftest failed: {}", hard.join(", "));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
