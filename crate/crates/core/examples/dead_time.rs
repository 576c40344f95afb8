//! One detection per trial: raw counts against the compensated estimate.

use cavitywalk::analysis::compensate_dead_time;
use cavitywalk::cavity::{PulseEntry, PulseTable};
use cavitywalk::detector::{simulate_tdc_counts, DetectorSpec};
use cavitywalk::walk::LatticePosition;

fn main() -> cavitywalk::Result<()> {
    let trials = 1_000_000;
    let truth = [0.2, 0.2, 0.2, 0.2];
    let table = PulseTable::from_entries(
        truth
            .iter()
            .enumerate()
            .map(|(i, &mu)| PulseEntry {
                step: i as u32 + 1,
                position: LatticePosition::line(0),
                mean_photons: mu,
                time: 10.0 * (i as f64 + 1.0),
            })
            .collect(),
    )?;
    let det = DetectorSpec {
        background_rate: 0.0,
        ..DetectorSpec::default()
    };
    let counts = simulate_tdc_counts(&table, &det, 50.0, trials, 3, None)?;
    // one bucket per pulse
    let per_pulse: Vec<u64> = (0..truth.len())
        .map(|i| {
            let centre = (10_000.0 * (i as f64 + 1.0) / 162.0) as usize;
            counts[centre - 12..=centre + 12].iter().sum()
        })
        .collect();
    let comp = compensate_dead_time(&per_pulse, trials)?;
    println!("pulse   µ true   raw counts   naive µ   surviving   compensated µ");
    for (i, (c, raw)) in comp.iter().zip(&per_pulse).enumerate() {
        println!(
            "{:>5} {:>8} {raw:>12} {:>9.4} {:>11} {:>9.4} ± {:.4}",
            i + 1,
            truth[i],
            *raw as f64 / trials as f64,
            c.surviving,
            c.mean_photons,
            c.mean_photons_sigma
        );
    }
    Ok(())
}
