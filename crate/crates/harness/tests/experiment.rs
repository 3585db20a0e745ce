mod common;

use common::{config, instance};
use fracdec::Elem;
use fracdec_harness::experiment::{corrupt_at, interleaved_decode, sidecar_json, Decoder};
use fracdec_harness::{corrupt, run_experiment, summary_csv, HarnessError, Instance, Outcome};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn corruption_has_exact_weight() {
    let inst = instance("hermitian_f81.json");
    let ext = inst.spec.tower().ext();
    let n = inst.spec.n();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let word: Vec<Elem> = (0..n).map(|_| Elem(rng.gen_range(0..81))).collect();
        let weight = rng.gen_range(0..=n);
        let mut noisy = word.clone();
        let positions = corrupt(ext, &mut noisy, weight, &mut rng).unwrap();
        let differ: Vec<usize> = (0..n).filter(|&i| noisy[i] != word[i]).collect();
        assert_eq!(differ, positions);
        assert_eq!(differ.len(), weight);
    }
}

#[test]
fn corruption_edge_weights() {
    let inst = instance("hermitian_f81.json");
    let ext = inst.spec.tower().ext();
    let word = vec![Elem(0); 27];
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut w = word.clone();
    assert!(corrupt(ext, &mut w, 0, &mut rng).unwrap().is_empty());
    assert_eq!(w, word);
    assert_eq!(corrupt(ext, &mut w, 27, &mut rng).unwrap().len(), 27);
    assert!(w.iter().all(|&e| e != Elem(0)));
    assert!(matches!(corrupt(ext, &mut w, 28, &mut rng), Err(HarnessError::Invalid(_))));
    assert!(corrupt_at(ext, &mut w, &[27], &mut rng).is_err());
}

#[test]
fn same_seed_same_summary() {
    let mut c = config("hermitian_f81.json");
    c.trials = 40;
    let inst = Instance::from_config(c.clone()).unwrap();
    let a = run_experiment(&inst.spec, &c);
    let b = run_experiment(&inst.spec, &c);
    assert_eq!(summary_csv(&a.rows).unwrap(), summary_csv(&b.rows).unwrap());
    assert_eq!(sidecar_json(&c, &inst.spec, &a.rows), sidecar_json(&c, &inst.spec, &b.rows));
    let positions = |r: &fracdec_harness::experiment::ExperimentResult| {
        r.records.iter().map(|t| (t.stream, t.decoder, t.positions.clone(), t.outcome)).collect::<Vec<_>>()
    };
    assert_eq!(positions(&a), positions(&b));
    c.seed += 1;
    let other = run_experiment(&inst.spec, &c);
    assert_ne!(positions(&a), positions(&other));
}

#[test]
fn f81_within_radius_always_succeeds() {
    let mut c = config("hermitian_f81.json");
    c.trials = 100;
    c.errors.weights.max = 4;
    let inst = Instance::from_config(c.clone()).unwrap();
    let result = run_experiment(&inst.spec, &c);
    assert_eq!(result.rows.len(), 5 * 3);
    for row in &result.rows {
        assert_eq!(row.successes, row.trials, "{row:?}");
        let expected = match row.decoder {
            Decoder::Fractional | Decoder::Interleaved => 27,
            Decoder::Baseline => 54,
        };
        assert_eq!(row.downloaded_symbols, expected);
    }
}

#[test]
fn outcomes_add_up() {
    let mut c = config("hermitian_f81.json");
    c.trials = 30;
    c.errors.weights = fracdec_harness::config::WeightRange { min: 5, max: 9 };
    let inst = Instance::from_config(c.clone()).unwrap();
    let result = run_experiment(&inst.spec, &c);
    for row in &result.rows {
        assert_eq!(row.successes + row.failures + row.miscorrections, row.trials);
    }
    assert_eq!(result.records.len(), 5 * 30 * 3);
    assert!(result.records.iter().any(|r| r.outcome != Outcome::Success));
}

#[test]
fn common_positions_share_error_support() {
    let mut c = config("hermitian_f729.json");
    c.trials = 5;
    c.errors.weights = fracdec_harness::config::WeightRange { min: 3, max: 3 };
    let inst = Instance::from_config(c.clone()).unwrap();
    let result = run_experiment(&inst.spec, &c);
    let first = &result.records[0].positions;
    assert_eq!(first.len(), 3);
    assert!(result.records.iter().all(|r| &r.positions == first));
}

#[test]
fn csv_layout() {
    let mut c = config("hermitian_f64.json");
    c.trials = 10;
    let inst = Instance::from_config(c.clone()).unwrap();
    let csv = summary_csv(&run_experiment(&inst.spec, &c).rows).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "decoder,weight,trials,successes,failures,miscorrections,downloaded_symbols,fraction"
    );
    assert!(lines.next().unwrap().starts_with("fractional,0,10,10,0,0,"));
}

#[test]
fn sweep_matches_fixed_excess() {
    let inst = instance("hermitian_f81.json");
    let spec = &inst.spec;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f: Vec<Elem> = (0..spec.k()).map(|_| Elem(rng.gen_range(0..81))).collect();
    let c = spec.code().encode(&f).unwrap();
    let mut w = c.clone();
    corrupt(spec.tower().ext(), &mut w, 5, &mut rng).unwrap();
    let pi = spec.project_word(&w).unwrap();
    let swept = interleaved_decode(spec, None, &pi);
    if let Ok(d) = &swept {
        assert_eq!(d.codeword, c);
    }
    if let Ok(d) = interleaved_decode(spec, Some(0), &pi) {
        assert_eq!(d.codeword, c);
        assert!(swept.is_ok());
    }
}
