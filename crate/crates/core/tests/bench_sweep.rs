use std::collections::HashSet;

use fusionbench::alloc::CountingAllocator;
use fusionbench::bench::{read_records, run_sweep, SweepOptions, SweepSpace, WeightPolicy};
use fusionbench::imgcore::{load_scene, save_scene, synth_scene, write_synthetic_dataset};
use fusionbench::{fuse, Error, FusionMethod, StackingMethod};

#[global_allocator]
static ALLOC: CountingAllocator = CountingAllocator;

fn small_space() -> SweepSpace {
    SweepSpace {
        methods: vec![FusionMethod::FastYuv],
        n_positive: vec![1, 2],
        stackings: StackingMethod::ALL.to_vec(),
        weight_policy: WeightPolicy::IncludeExclude,
    }
}

#[test]
fn two_scenes_give_24_records() {
    let tmp = tempfile::tempdir().unwrap();
    write_synthetic_dataset(tmp.path(), 2, 32, 24, &[-24, 0, 1, 2], 1).unwrap();
    let opts = SweepOptions { repeats: 1, csv: None };
    let (records, summary) = run_sweep(tmp.path(), &small_space(), &opts).unwrap();
    assert_eq!(records.len(), 24);
    assert_eq!(summary.measured, 24);
    assert!(records.iter().all(|r| r.runtime_s > 0.0 && r.peak_alloc_bytes > 0 && r.ms_ssim.is_finite()));
}

#[test]
fn records_match_direct_fusion() {
    let tmp = tempfile::tempdir().unwrap();
    write_synthetic_dataset(tmp.path(), 1, 32, 24, &[-24, 0, 1, 2], 2).unwrap();
    let space = SweepSpace {
        methods: FusionMethod::ALL.to_vec(),
        n_positive: vec![2],
        stackings: vec![StackingMethod::Median],
        weight_policy: WeightPolicy::FullOnly,
    };
    let (records, _) = run_sweep(tmp.path(), &space, &SweepOptions { repeats: 2, csv: None }).unwrap();
    let scene = load_scene(tmp.path().join("scene_000")).unwrap();
    let gt = scene.gt.unwrap();
    for r in records {
        let cfg = fusionbench::FusionConfig::new(r.method, r.weights, r.n_positive, r.stacking).unwrap();
        let direct = fuse(&scene.frames, &cfg).unwrap();
        let m = fusionbench::MetricReport::compute(&direct, &gt).unwrap();
        assert_eq!(r.psnr, fusionbench::bench::quantize(m.psnr));
        assert_eq!(r.ms_ssim, fusionbench::bench::quantize(m.ms_ssim));
    }
}

#[test]
fn infeasible_configs_are_skipped() {
    let tmp = tempfile::tempdir().unwrap();
    let (frames, gt) = synth_scene(32, 24, &[-24, 0, 1, 2], 5).unwrap();
    save_scene(tmp.path().join("short"), &frames, Some(&gt)).unwrap();
    let space = SweepSpace {
        methods: vec![FusionMethod::Mertens],
        n_positive: vec![3, 5],
        stackings: vec![StackingMethod::None],
        weight_policy: WeightPolicy::FullOnly,
    };
    let (records, summary) = run_sweep(tmp.path(), &space, &SweepOptions { repeats: 1, csv: None }).unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(summary.skipped, 1);
}

#[test]
fn resume_after_interruption() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("data");
    write_synthetic_dataset(&data, 2, 32, 24, &[-24, 0, 1, 2], 4).unwrap();
    let csv = tmp.path().join("runs.csv");
    let opts = SweepOptions {
        repeats: 1,
        csv: Some(csv.clone()),
    };
    run_sweep(&data, &small_space(), &opts).unwrap();
    // Simulate a crash: keep 10 full rows plus half of the next one.
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let mut cut = lines[..11].join("\n");
    cut.push('\n');
    cut.push_str(&lines[11][..lines[11].len() / 2]);
    std::fs::write(&csv, cut).unwrap();

    let (records, summary) = run_sweep(&data, &small_space(), &opts).unwrap();
    assert_eq!(summary.resumed, 10);
    assert_eq!(summary.measured, 14);
    assert_eq!(records.len(), 24);
    let back = read_records(&csv).unwrap();
    assert!(back.truncated.is_none());
    assert_eq!(back.records.len(), 24);
    let keys: HashSet<_> = back.records.iter().map(|r| r.key()).collect();
    assert_eq!(keys.len(), 24);
}

#[test]
fn empty_dataset_is_an_error() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::create_dir(tmp.path().join("not_a_scene")).unwrap();
    let err = run_sweep(tmp.path(), &small_space(), &SweepOptions { repeats: 1, csv: None }).unwrap_err();
    assert!(matches!(err, Error::EmptyDataset { .. }));
}
