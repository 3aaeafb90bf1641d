//! Sweep a slice of the configuration space over a small synthetic dataset
//! and print the grouped reports.
//!
//! ```bash
//! cargo run --release --example sweep_report
//! ```

use fusionbench::alloc::CountingAllocator;
use fusionbench::bench::{group_report, run_sweep, GroupBy, SweepOptions, SweepSpace};
use fusionbench::imgcore::write_synthetic_dataset;

#[global_allocator]
static ALLOC: CountingAllocator = CountingAllocator;

fn main() -> fusionbench::Result<()> {
    env_logger::init();
    let root = std::env::temp_dir().join("fusionbench-sweep");
    let data = root.join("data");
    write_synthetic_dataset(&data, 3, 160, 120, &[-24, 0, 1, 2, 3, 4], 2024)?;

    let space = SweepSpace::parse(
        "methods = mertens, fast-yuv, ssf-rgb, ssf-yuv\n\
         frames = 1, 3, 5\n\
         stackings = none, mean\n",
    )?;
    let csv = root.join("runs.csv");
    let _ = std::fs::remove_file(&csv);
    let opts = SweepOptions {
        repeats: 3,
        csv: Some(csv.clone()),
    };
    let (records, summary) = run_sweep(&data, &space, &opts)?;
    println!("{summary:?}");
    println!("records in {}\n", csv.display());

    for mode in [GroupBy::MethodWeights, GroupBy::FramesStacking] {
        println!("== {mode}");
        print!("{}", group_report(&records, mode)?.to_table());
        println!();
    }
    Ok(())
}
