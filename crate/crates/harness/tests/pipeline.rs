use std::fs;
use std::path::Path;

use chaostex_core::{ChaoticMap, DescriptorConfig};
use chaostex_harness::features::CACHE_DIR;
use chaostex_harness::synth::{generate, SynthSpec};
use chaostex_harness::{
    extract_dataset, ingest, run_experiment, EvalSettings, ExtractOptions, FeatureKind, IngestOptions, Protocol,
    TableMeta,
};

fn small_spec() -> SynthSpec {
    SynthSpec { per_class: 8, size: 24, seed: 5, ..SynthSpec::default() }
}

fn chaos_meta() -> TableMeta {
    TableMeta {
        kind: FeatureKind::Chaos,
        descriptor: DescriptorConfig::default().with_map(ChaoticMap::circle()).with_iterations(2),
    }
}

fn count_cache_entries(root: &Path) -> usize {
    let dir = root.join(CACHE_DIR);
    if !dir.exists() {
        return 0;
    }
    fs::read_dir(dir).unwrap().map(|d| fs::read_dir(d.unwrap().path()).unwrap().count()).sum()
}

#[test]
fn cached_and_fresh_features_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), &small_spec()).unwrap();
    let index = ingest(dir.path(), IngestOptions::default()).unwrap();
    let meta = chaos_meta();

    let fresh = extract_dataset(&index, &meta, ExtractOptions { use_cache: false }).unwrap();
    assert_eq!(count_cache_entries(dir.path()), 0);
    let first = extract_dataset(&index, &meta, ExtractOptions { use_cache: true }).unwrap();
    assert_eq!(count_cache_entries(dir.path()), 32);
    let cached = extract_dataset(&index, &meta, ExtractOptions { use_cache: true }).unwrap();

    for t in [&first, &cached] {
        assert_eq!(t.samples, fresh.samples);
        for (a, b) in t.values.iter().flatten().zip(fresh.values.iter().flatten()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
    // The cache directory must not show up as a class.
    assert_eq!(ingest(dir.path(), IngestOptions::default()).unwrap().classes.len(), 4);
}

#[test]
fn small_synthetic_run_separates_classes() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), &small_spec()).unwrap();
    let index = ingest(dir.path(), IngestOptions::default()).unwrap();
    let settings = EvalSettings { rounds: 3, seed: 11, ..EvalSettings::default() };
    let result = run_experiment(&index, &chaos_meta(), &settings, ExtractOptions::default()).unwrap();
    assert_eq!(result.accuracies.len(), 3);
    assert!(result.mean >= 0.9, "mean accuracy {}", result.mean);
    let tested: u64 = result.confusion.iter().flatten().sum();
    assert_eq!(tested, 3 * 4 * 4);
}

#[test]
fn grouped_layout_runs_one_round_per_group() {
    let flat = tempfile::tempdir().unwrap();
    generate(flat.path(), &small_spec()).unwrap();
    // Regroup each class into 4 sample folders of 2 images.
    let grouped = tempfile::tempdir().unwrap();
    for class in fs::read_dir(flat.path()).unwrap() {
        let class = class.unwrap().path();
        let label = class.file_name().unwrap().to_owned();
        let mut files: Vec<_> = fs::read_dir(&class).unwrap().map(|f| f.unwrap().path()).collect();
        files.sort();
        for (i, f) in files.iter().enumerate() {
            let target = grouped.path().join(&label).join(format!("sample{}", i / 2 + 1));
            fs::create_dir_all(&target).unwrap();
            fs::copy(f, target.join(f.file_name().unwrap())).unwrap();
        }
    }
    let index = ingest(grouped.path(), IngestOptions::default()).unwrap();
    let settings = EvalSettings { protocol: Protocol::GroupedOneTrain, ..EvalSettings::default() };
    let meta = TableMeta { kind: FeatureKind::Plain, descriptor: DescriptorConfig::default() };
    let result = run_experiment(&index, &meta, &settings, ExtractOptions { use_cache: false }).unwrap();
    assert_eq!(result.rounds.len(), 4);
    for r in &result.rounds {
        assert_eq!((r.train_size, r.test_size), (8, 24));
        let rows: Vec<u64> = r.confusion.iter().map(|row| row.iter().sum()).collect();
        assert_eq!(rows, [6, 6, 6, 6]);
    }
}
