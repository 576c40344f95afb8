//! Smallest resolvable outcome probability at the last step.
//!
//! Adds probe pulses of known probability to empty step-62 positions and
//! counts how often each stands above background.
//!
//! `cargo run --release --example probability_floor -- [trials] [seeds]`

use cavitywalk::analysis::{analyze, AnalysisOptions, Histogram};
use cavitywalk::cavity::{input_energy_for_total, tapped_pulse_table, NetworkConfig, PulseTable};
use cavitywalk::detector::{simulate_tdc_counts, DetectorSpec};

fn main() -> cavitywalk::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials: u64 = args
        .next()
        .map_or(54_000_000, |s| s.parse().expect("trials"));
    let seeds: u64 = args.next().map_or(2, |s| s.parse().expect("seeds"));
    let steps = 62;
    // tail positions the balanced walk leaves below 1e-5
    let slots = [0u32, 1, 2, 3, 4, 5, 6, 57, 58, 59, 60, 61, 62];

    let cfg = NetworkConfig::apparatus(0.5)?;
    let det = DetectorSpec::default();
    let base = tapped_pulse_table(&cfg, steps, input_energy_for_total(&cfg, steps, 0.95)?)?;
    let step_total = base.step_total(steps);
    println!(
        "background {:e} per ns per trial, {trials} trials",
        det.background_rate
    );
    for p in [0.0005, 0.001, 0.002, 0.004] {
        let entries = base
            .entries()
            .iter()
            .cloned()
            .map(|mut e| {
                if e.step == steps && slots.contains(&e.position.k()) {
                    e.mean_photons += p * step_total;
                }
                e
            })
            .collect();
        let table = PulseTable::from_entries(entries)?;
        let (mut hits, mut n) = (0, 0);
        for seed in 0..seeds {
            let counts =
                simulate_tdc_counts(&table, &det, cfg.trial_period_ns(), trials, seed, None)?;
            let a = analyze(
                &Histogram::from_tdc_counts(det.tdc_bin, counts),
                &cfg,
                &AnalysisOptions {
                    steps,
                    trials,
                    window_halfwidth: 2000.0,
                    efficiency: det.efficiency,
                },
            )?;
            for r in a
                .peaks
                .rows
                .iter()
                .filter(|r| r.step == steps && slots.contains(&r.position.k()))
            {
                n += 1;
                hits += r.is_resolved() as u32;
            }
        }
        println!("P = {p:<7} resolved in {hits:>2}/{n} probes");
    }
    Ok(())
}
