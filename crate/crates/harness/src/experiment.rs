//! Seeded Monte Carlo runs: encode, corrupt, download, decode, tally.

use std::time::Instant;

use fracdec::interleaved::{bound_report, max_locator_excess, BoundReport};
use fracdec::{
    collab_decode, sweep_locator_excess, CollabConfig, CountingStore, Elem, Field, FractionalDecoded,
    FractionalSpec, ProjectedMatrix, RadiusReport, StoredWord, SymbolStore,
};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{DecoderChoice, ErrorModel, ExperimentConfig};
use crate::HarnessError;

/// Adds uniformly random nonzero offsets at `weight` distinct random
/// positions; returns the positions, ascending.
pub fn corrupt(
    field: &Field,
    word: &mut [Elem],
    weight: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<usize>, HarnessError> {
    if weight > word.len() {
        return Err(HarnessError::Invalid(format!("weight {weight} exceeds length {}", word.len())));
    }
    let mut positions = sample(rng, word.len(), weight).into_vec();
    positions.sort_unstable();
    corrupt_at(field, word, &positions, rng)?;
    Ok(positions)
}

/// Adds uniformly random nonzero offsets at the given positions.
pub fn corrupt_at(
    field: &Field,
    word: &mut [Elem],
    positions: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<(), HarnessError> {
    for &i in positions {
        if i >= word.len() {
            return Err(HarnessError::Invalid(format!("position {i} out of range")));
        }
        let e = Elem(rng.gen_range(1..field.order()));
        word[i] = field.add(word[i], e);
    }
    Ok(())
}

/// Everything `describe` prints about an instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Description {
    pub base_order: u32,
    pub extension_order: u32,
    pub n: usize,
    pub k: usize,
    pub genus: u32,
    pub l: usize,
    pub m: usize,
    pub beta: u32,
    pub betas: Vec<u32>,
    pub radii: RadiusReport,
    pub parts: Vec<Vec<usize>>,
    pub annihilators: Vec<String>,
    pub information_set: Vec<usize>,
    pub max_locator_excess: Option<u32>,
    pub interleaved_bound: BoundReport,
}

pub fn describe(spec: &FractionalSpec, c: f64) -> Description {
    let radii = spec.radius_report().clone();
    let alpha = *radii.betas.iter().max().expect("at least one row");
    Description {
        base_order: spec.tower().base().order(),
        extension_order: spec.tower().ext().order(),
        n: spec.n(),
        k: spec.k(),
        genus: spec.genus(),
        l: spec.l(),
        m: spec.m(),
        beta: spec.code().beta(),
        betas: radii.betas.clone(),
        parts: spec.plan().parts().to_vec(),
        annihilators: spec.plan().annihilators().iter().map(ToString::to_string).collect(),
        information_set: spec.plan().information_set().indices().to_vec(),
        max_locator_excess: max_locator_excess(spec),
        interleaved_bound: bound_report(spec, alpha, c),
        radii,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decoder {
    Fractional,
    Interleaved,
    Baseline,
}

impl Decoder {
    pub fn name(self) -> &'static str {
        match self {
            Decoder::Fractional => "fractional",
            Decoder::Interleaved => "interleaved",
            Decoder::Baseline => "baseline",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    /// The transmitted codeword came back.
    Success,
    /// The decoder reported an error.
    Failure,
    /// The decoder returned a different codeword.
    Miscorrection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    /// ChaCha8 stream of this trial under the master seed.
    pub stream: u64,
    pub weight: usize,
    pub positions: Vec<usize>,
    pub decoder: Decoder,
    pub outcome: Outcome,
    pub downloaded_symbols: usize,
    pub wall_time_us: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub decoder: Decoder,
    pub weight: usize,
    pub trials: usize,
    pub successes: usize,
    pub failures: usize,
    pub miscorrections: usize,
    pub downloaded_symbols: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub rows: Vec<SummaryRow>,
    pub records: Vec<TrialRecord>,
}

/// The decoders a configuration asks for, in report order.
pub fn decoders(config: &ExperimentConfig) -> Vec<Decoder> {
    let mut out = match config.decoder {
        DecoderChoice::Fractional => vec![Decoder::Fractional],
        DecoderChoice::Interleaved => vec![Decoder::Interleaved],
        DecoderChoice::Both => vec![Decoder::Fractional, Decoder::Interleaved],
    };
    if config.baseline {
        out.push(Decoder::Baseline);
    }
    out
}

/// Trial `trial` at weight `weight` draws from stream `weight·2^32 + trial`;
/// shared positions for a weight come from stream `2^63 + weight`.
fn trial_stream(weight: usize, trial: usize) -> u64 {
    ((weight as u64) << 32) | trial as u64
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Collaborative decoding with a fixed locator excess, or a sweep over all
/// admissible ones.
pub fn interleaved_decode(
    spec: &FractionalSpec,
    t_excess: Option<u32>,
    pi: &ProjectedMatrix,
) -> Result<FractionalDecoded, fracdec::InterleavedError> {
    match t_excess {
        Some(t) => collab_decode(&CollabConfig::new(spec, t)?, spec, pi),
        None => {
            let top = max_locator_excess(spec).unwrap_or(0);
            sweep_locator_excess(spec, 0..=top, pi).map(|o| o.decoded)
        }
    }
}

fn run_decoder(
    spec: &FractionalSpec,
    config: &ExperimentConfig,
    decoder: Decoder,
    received: &[Elem],
) -> (Option<Vec<Elem>>, usize) {
    let store = CountingStore::new(StoredWord::new(spec.tower(), received).expect("received word is in the field"));
    let codeword = match decoder {
        Decoder::Fractional => spec.decode(&store).ok().map(|d| d.codeword),
        Decoder::Interleaved => spec
            .project_received(&store)
            .ok()
            .and_then(|pi| interleaved_decode(spec, config.t_excess, &pi).ok())
            .map(|d| d.codeword),
        Decoder::Baseline => spec.baseline_decode(&store).ok().map(|d| d.codeword),
    };
    (codeword, store.total_reads())
}

fn run_trial(
    spec: &FractionalSpec,
    config: &ExperimentConfig,
    weight: usize,
    trial: usize,
    shared: Option<&[usize]>,
) -> Vec<TrialRecord> {
    let stream = trial_stream(weight, trial);
    let mut rng = rng_for(config.seed, stream);
    let ext = spec.tower().ext();
    let message: Vec<Elem> = (0..spec.k()).map(|_| Elem(rng.gen_range(0..ext.order()))).collect();
    let sent = spec.code().encode(&message).expect("message is valid");
    let mut received = sent.clone();
    let positions = match shared {
        Some(p) => {
            corrupt_at(ext, &mut received, p, &mut rng).expect("positions in range");
            p.to_vec()
        }
        None => corrupt(ext, &mut received, weight, &mut rng).expect("weight validated"),
    };
    decoders(config)
        .into_iter()
        .map(|decoder| {
            let start = Instant::now();
            let (decoded, downloaded_symbols) = run_decoder(spec, config, decoder, &received);
            let outcome = match decoded {
                Some(c) if c == sent => Outcome::Success,
                Some(_) => Outcome::Miscorrection,
                None => Outcome::Failure,
            };
            TrialRecord {
                stream,
                weight,
                positions: positions.clone(),
                decoder,
                outcome,
                downloaded_symbols,
                wall_time_us: start.elapsed().as_micros() as u64,
            }
        })
        .collect()
}

/// Runs every trial in parallel; results depend only on the configuration.
pub fn run_experiment(spec: &FractionalSpec, config: &ExperimentConfig) -> ExperimentResult {
    let n = spec.n();
    let weights = config.errors.weights.min..=config.errors.weights.max;
    let mut records = Vec::new();
    for weight in weights {
        let shared = match config.errors.model {
            ErrorModel::Uniform => None,
            ErrorModel::CommonPositions => {
                let mut rng = rng_for(config.seed, (1 << 63) | weight as u64);
                let mut p = sample(&mut rng, n, weight).into_vec();
                p.sort_unstable();
                Some(p)
            }
        };
        let batch: Vec<Vec<TrialRecord>> = (0..config.trials)
            .into_par_iter()
            .map(|trial| run_trial(spec, config, weight, trial, shared.as_deref()))
            .collect();
        records.extend(batch.into_iter().flatten());
    }
    let full = spec.l() * n;
    let mut rows = Vec::new();
    for weight in config.errors.weights.min..=config.errors.weights.max {
        for decoder in decoders(config) {
            let mine: Vec<&TrialRecord> =
                records.iter().filter(|r| r.weight == weight && r.decoder == decoder).collect();
            let count = |o: Outcome| mine.iter().filter(|r| r.outcome == o).count();
            let downloaded = mine.iter().map(|r| r.downloaded_symbols).max().unwrap_or(0);
            rows.push(SummaryRow {
                decoder,
                weight,
                trials: mine.len(),
                successes: count(Outcome::Success),
                failures: count(Outcome::Failure),
                miscorrections: count(Outcome::Miscorrection),
                downloaded_symbols: downloaded,
                fraction: downloaded as f64 / full as f64,
            });
        }
    }
    ExperimentResult { rows, records }
}

/// The summary as CSV with a fixed column order.
pub fn summary_csv(rows: &[SummaryRow]) -> Result<String, HarnessError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "decoder",
        "weight",
        "trials",
        "successes",
        "failures",
        "miscorrections",
        "downloaded_symbols",
        "fraction",
    ])
    .map_err(|e| HarnessError::Io(e.to_string()))?;
    for r in rows {
        w.write_record([
            r.decoder.name().to_string(),
            r.weight.to_string(),
            r.trials.to_string(),
            r.successes.to_string(),
            r.failures.to_string(),
            r.miscorrections.to_string(),
            r.downloaded_symbols.to_string(),
            format!("{:.6}", r.fraction),
        ])
        .map_err(|e| HarnessError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// The JSON sidecar: configuration echo, instance description and summary.
pub fn sidecar_json(config: &ExperimentConfig, spec: &FractionalSpec, rows: &[SummaryRow]) -> String {
    let doc = serde_json::json!({
        "config": config,
        "instance": describe(spec, config.c),
        "summary": rows,
    });
    serde_json::to_string_pretty(&doc).expect("sidecar serializes")
}

/// A received word as a store, checked against the extension field.
pub fn stored<'a>(spec: &'a FractionalSpec, word: &'a [Elem]) -> Result<StoredWord<'a>, HarnessError> {
    let store = StoredWord::new(spec.tower(), word).map_err(|e| HarnessError::Invalid(e.to_string()))?;
    if store.len() != spec.n() {
        return Err(HarnessError::Invalid(format!("word has length {}, expected {}", store.len(), spec.n())));
    }
    Ok(store)
}
