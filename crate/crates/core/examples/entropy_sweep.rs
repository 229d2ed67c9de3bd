//! Sweep of kneading words and entropy over `a`, with the monotonicity
//! audit; writes CSV to stdout.
//!
//! cargo run --release --example entropy_sweep -- 2.0 400 > sweep.csv

use kneadlab::cli::write_sweep_csv;
use kneadlab::sweep::{entropy_curve, window_grid, SweepConfig, ViolationKind};

fn main() -> kneadlab::Result<()> {
    let mut args = std::env::args().skip(1);
    let r: f64 = args.next().map_or(2.0, |s| s.parse().expect("numeric r"));
    let count: usize = args.next().map_or(200, |s| s.parse().expect("point count"));

    let cfg = SweepConfig { with_laps: true, ..SweepConfig::default() };
    let report = entropy_curve(r, &window_grid(r, count), &cfg)?;
    write_sweep_csv(&report, 1.0, &mut std::io::stdout().lock()).expect("stdout");
    eprintln!(
        "{} points, {} word-order and {} entropy-order violations",
        report.records.len(),
        report.count(ViolationKind::WordOrder),
        report.count(ViolationKind::EntropyOrder)
    );
    Ok(())
}
