//! Simulated detection-time histogram around one step, in 324 ps bins.
//!
//! `cargo run --release --example detector_histogram -- [trials] [step]`

use cavitywalk::analysis::build_histogram;
use cavitywalk::cavity::{
    input_energy_for_total, line_bin_time, tapped_pulse_table, NetworkConfig,
};
use cavitywalk::detector::{simulate_trials, DetectorSpec};

fn main() -> cavitywalk::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials: u64 = args
        .next()
        .map_or(2_000_000, |s| s.parse().expect("trials"));
    let step: u32 = args.next().map_or(8, |s| s.parse().expect("step"));

    let cfg = NetworkConfig::apparatus(0.5)?;
    let det = DetectorSpec::default();
    let table = tapped_pulse_table(&cfg, 62, input_energy_for_total(&cfg, 62, 0.95)?)?;
    let events = simulate_trials(&table, &det, cfg.trial_period_ns(), trials, 1, None)?;
    println!("{} detections in {trials} trials", events.len());

    let hist = build_histogram(&events, 2 * det.tdc_bin)?;
    let lo = (line_bin_time(&cfg, step, 0)? * 1e3 - 3000.0) / hist.bin_width as f64;
    let hi = (line_bin_time(&cfg, step, step)? * 1e3 + 3000.0) / hist.bin_width as f64;
    let peak = hist.counts[lo as usize..hi as usize]
        .iter()
        .copied()
        .max()
        .unwrap_or(1)
        .max(1);
    for i in lo as usize..hi as usize {
        let c = hist.counts[i];
        let bar = "#".repeat((c * 60 / peak) as usize);
        println!("{:>10.3} ns {c:>7} {bar}", hist.bin_start(i) / 1e3);
    }
    Ok(())
}
