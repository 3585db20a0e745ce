use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fracdec::{CountingStore, Elem, ProjectedMatrix};
use fracdec_harness::experiment::{corrupt_at, interleaved_decode, sidecar_json, stored};
use fracdec_harness::{corrupt, describe, run_experiment, summary_csv, HarnessError, Instance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "fracdec", version, about = "Fractional decoding of one-point AG codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Experiment configuration (JSON).
    #[arg(long)]
    config: PathBuf,
}

/// A received word, or a downloaded matrix.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct Received {
    /// Received word as a JSON array of element indices (or `corrupt` output), inline or @file.
    #[arg(long)]
    word: Option<String>,
    /// Downloaded m×n matrix as a JSON array of rows, or @file.
    #[arg(long)]
    projected: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print parameters, radii and bandwidth of an instance.
    Describe(ConfigArg),
    /// Encode a message (or a random one) into a codeword over the extension field.
    Encode {
        #[command(flatten)]
        config: ConfigArg,
        /// Message as a JSON array of extension-field indices, or @file.
        #[arg(long, conflicts_with = "seed")]
        message: Option<String>,
        /// Draw a random message from this seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the m×n matrix of base-field symbols a fractional decoder downloads.
    Project {
        #[command(flatten)]
        config: ConfigArg,
        /// Word as a JSON array, or `encode`/`corrupt` output; inline or @file.
        #[arg(long)]
        word: String,
    },
    /// Add random nonzero errors to a word.
    Corrupt {
        #[command(flatten)]
        config: ConfigArg,
        /// Codeword as a JSON array, or `encode` output; inline or @file.
        #[arg(long)]
        word: String,
        #[arg(long)]
        weight: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Corrupt exactly these positions (comma separated) instead of random ones.
        #[arg(long, value_delimiter = ',')]
        positions: Option<Vec<usize>>,
    },
    /// Download m·n base symbols and decode fractionally.
    DecodeFractional {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        received: Received,
    },
    /// Download m·n base symbols and decode collaboratively.
    DecodeInterleaved {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        received: Received,
        /// Locator excess; overrides the config.
        #[arg(long)]
        t_excess: Option<u32>,
    },
    /// Run the Monte Carlo sweep; writes CSV to --out and a JSON sidecar next to it.
    Experiment {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        out: PathBuf,
        /// Also write per-trial records (JSON lines, includes wall times).
        #[arg(long)]
        records: Option<PathBuf>,
    },
}

fn read_arg(value: &str) -> Result<String, HarnessError> {
    match value.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{path}: {e}"))),
        None => Ok(value.to_string()),
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(what: &str, value: &str) -> Result<T, HarnessError> {
    serde_json::from_str(&read_arg(value)?).map_err(|e| HarnessError::Invalid(format!("{what}: {e}")))
}

/// A word given either as a bare array or as the output of `encode`/`corrupt`.
#[derive(serde::Deserialize)]
#[serde(untagged)]
enum WordInput {
    Bare(Vec<Elem>),
    Corrupted { word: Vec<Elem> },
    Encoded { codeword: Vec<Elem> },
}

fn parse_word(value: &str) -> Result<Vec<Elem>, HarnessError> {
    Ok(match parse_json("word (array, or object with `word` or `codeword`)", value)? {
        WordInput::Bare(w) | WordInput::Corrupted { word: w } | WordInput::Encoded { codeword: w } => w,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), HarnessError> {
    std::fs::write(path, contents).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
}

/// `results.csv` gets `results.json`; a `.json` output gets `.sidecar.json`.
fn sidecar_path(out: &Path) -> PathBuf {
    let candidate = out.with_extension("json");
    if candidate == out {
        out.with_extension("sidecar.json")
    } else {
        candidate
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_json<T: Serialize>(value: &T) {
    emit(&(serde_json::to_string_pretty(value).expect("output serializes") + "\n"));
}

#[derive(Serialize)]
struct DecodeReport {
    codeword: Vec<Elem>,
    message: Vec<Elem>,
    corrected_columns: Vec<usize>,
    downloaded_symbols: Option<usize>,
}

fn download(
    instance: &Instance,
    received: &Received,
) -> Result<(ProjectedMatrix, Option<usize>), HarnessError> {
    let spec = &instance.spec;
    if let Some(word) = &received.word {
        let word = parse_word(word)?;
        let store = CountingStore::new(stored(spec, &word)?);
        let pi = spec.project_received(&store).map_err(|e| HarnessError::Invalid(e.to_string()))?;
        return Ok((pi, Some(store.total_reads())));
    }
    let pi: ProjectedMatrix = parse_json("projected", received.projected.as_deref().unwrap_or_default())?;
    spec.check_projected(&pi).map_err(|e| HarnessError::Invalid(e.to_string()))?;
    Ok((pi, None))
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Describe(c) => {
            let instance = Instance::load(&c.config)?;
            print_json(&describe(&instance.spec, instance.config.c));
        }
        Command::Encode { config, message, seed } => {
            let instance = Instance::load(&config.config)?;
            let spec = &instance.spec;
            let message: Vec<Elem> = match message {
                Some(m) => parse_json("message", &m)?,
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
                    let q = spec.tower().ext().order();
                    (0..spec.k()).map(|_| Elem(rng.gen_range(0..q))).collect()
                }
            };
            let codeword = spec.code().encode(&message).map_err(|e| HarnessError::Invalid(e.to_string()))?;
            print_json(&serde_json::json!({ "message": message, "codeword": codeword }));
        }
        Command::Project { config, word } => {
            let instance = Instance::load(&config.config)?;
            let word = parse_word(&word)?;
            let pi = instance.spec.project_word(&word).map_err(|e| HarnessError::Invalid(e.to_string()))?;
            emit(&(serde_json::to_string(&pi).expect("matrix serializes") + "\n"));
        }
        Command::Corrupt { config, word, weight, seed, positions } => {
            let instance = Instance::load(&config.config)?;
            let spec = &instance.spec;
            let mut word = parse_word(&word)?;
            stored(spec, &word)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let positions = match positions {
                Some(p) => {
                    if p.len() != weight {
                        return Err(HarnessError::Invalid("positions must list exactly `weight` entries".into()));
                    }
                    let mut sorted = p.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    if sorted.len() != p.len() {
                        return Err(HarnessError::Invalid("positions must be distinct".into()));
                    }
                    corrupt_at(spec.tower().ext(), &mut word, &sorted, &mut rng)?;
                    sorted
                }
                None => corrupt(spec.tower().ext(), &mut word, weight, &mut rng)?,
            };
            print_json(&serde_json::json!({ "word": word, "positions": positions }));
        }
        Command::DecodeFractional { config, received } => {
            let instance = Instance::load(&config.config)?;
            let (pi, downloaded) = download(&instance, &received)?;
            let d = instance.spec.fractional_decode(&pi).map_err(|e| HarnessError::Invalid(e.to_string()))?;
            print_json(&DecodeReport {
                codeword: d.codeword,
                message: d.message,
                corrected_columns: d.corrected_columns,
                downloaded_symbols: downloaded,
            });
        }
        Command::DecodeInterleaved { config, received, t_excess } => {
            let instance = Instance::load(&config.config)?;
            let (pi, downloaded) = download(&instance, &received)?;
            let t = t_excess.or(instance.config.t_excess);
            let d = interleaved_decode(&instance.spec, t, &pi).map_err(|e| HarnessError::Invalid(e.to_string()))?;
            print_json(&DecodeReport {
                codeword: d.codeword,
                message: d.message,
                corrected_columns: d.corrected_columns,
                downloaded_symbols: downloaded,
            });
        }
        Command::Experiment { config, out, records } => {
            let instance = Instance::load(&config.config)?;
            let result = run_experiment(&instance.spec, &instance.config);
            write_file(&out, &summary_csv(&result.rows)?)?;
            write_file(&sidecar_path(&out), &sidecar_json(&instance.config, &instance.spec, &result.rows))?;
            if let Some(path) = records {
                let lines: Vec<String> =
                    result.records.iter().map(|r| serde_json::to_string(r).expect("record serializes")).collect();
                write_file(&path, &(lines.join("\n") + "\n"))?;
            }
            emit(&summary_csv(&result.rows)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
