use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use entrolab::job::{run, Command, InputSpec, JobSpec, OutputMode, Params};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Verb {
    /// Validate the ring and the map
    Check,
    /// Decide whether the map is contracting
    Contracting,
    /// Length of R/phi^n(m)R
    Lambda,
    /// Lambda sequence and entropy upper bound
    Entropy,
    /// Kunz regularity test
    Kunz,
    /// Hilbert-Kunz ratios lambda(phi^n)/q^n
    Hk,
    /// Sampled flatness test
    Nagata,
    /// Image of the [ideal] section under phi^n
    Phi,
    /// Hilbert-Samuel function length(R/m^N)
    HilbertSamuel,
    /// Hilbert-Samuel regularity check
    Regularity,
}

impl From<Verb> for Command {
    fn from(v: Verb) -> Self {
        match v {
            Verb::Check => Command::Check,
            Verb::Contracting => Command::Contracting,
            Verb::Lambda => Command::Lambda,
            Verb::Entropy => Command::Entropy,
            Verb::Kunz => Command::Kunz,
            Verb::Hk => Command::Hk,
            Verb::Nagata => Command::Nagata,
            Verb::Phi => Command::Phi,
            Verb::HilbertSamuel => Command::HilbertSamuel,
            Verb::Regularity => Command::Regularity,
        }
    }
}

/// Length invariants and entropy of self-maps of local rings.
#[derive(Debug, Parser)]
#[command(name = "entrolab", version)]
struct Cli {
    #[arg(value_enum)]
    command: Verb,
    /// Job file with [ring], [map] and optionally [ideal] sections
    #[arg(long, value_name = "PATH")]
    input: PathBuf,
    /// Iterate used by lambda, nagata and phi
    #[arg(long)]
    n: Option<u32>,
    /// Sequence length for entropy, kunz and hk
    #[arg(long = "max-n")]
    max_n: Option<u32>,
    /// Largest N for hilbert-samuel, regularity and the kunz cross-check
    #[arg(long = "max-N")]
    max_big_n: Option<u32>,
    /// Hilbert-Kunz base: integer, a/b or decimal
    #[arg(long)]
    q: Option<String>,
    /// Number of sampled ideals for nagata
    #[arg(long)]
    samples: Option<usize>,
    /// Sampling seed for nagata
    #[arg(long)]
    seed: Option<u64>,
    /// Truncation cap for length computations
    #[arg(long)]
    cap: Option<u32>,
    /// Emit a single JSON document
    #[arg(long)]
    json: bool,
}

impl Cli {
    fn params(&self) -> Params {
        let d = Params::default();
        Params {
            n: self.n.unwrap_or(d.n),
            max_n: self.max_n.unwrap_or(d.max_n),
            max_big_n: self.max_big_n.unwrap_or(d.max_big_n),
            q: self.q.clone(),
            samples: self.samples.unwrap_or(d.samples),
            seed: self.seed.unwrap_or(d.seed),
            cap: self.cap.unwrap_or(d.cap),
        }
    }
}

fn main() -> ExitCode {
    // Exit code 2 is reserved for mathematical refusals; usage errors are input errors.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let src = match std::fs::read_to_string(&cli.input) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error[INPUT_ERROR]: cannot read {}: {e}", cli.input.display());
            return ExitCode::from(1);
        }
    };
    let input = match InputSpec::from_toml(&src) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("error[INPUT_ERROR]: {}: {e}", cli.input.display());
            return ExitCode::from(1);
        }
    };
    let job = JobSpec {
        input,
        command: cli.command.into(),
        params: cli.params(),
        output: if cli.json { OutputMode::Json } else { OutputMode::Text },
    };
    let doc = run(&job);
    match job.output {
        OutputMode::Json => print!("{}", doc.to_json()),
        OutputMode::Text => print!("{}", doc.text),
    }
    if let Some(msg) = doc.diagnostic() {
        eprintln!("{msg}");
    }
    ExitCode::from(doc.exit_code() as u8)
}
