//! Arrival times, step limits and tap energies of the fiber network.

use cavitywalk::cavity::{
    line_bin_time, max_observable_steps, round_trip_transmission, tapped_pulse_table, NetworkConfig,
};

fn main() -> cavitywalk::Result<()> {
    let cfg = NetworkConfig::apparatus(0.5)?;
    let limits = max_observable_steps(&cfg);
    println!(
        "T₁ = {} ns, T₂ = {} ns, τ = {} ns, trial period {} ns",
        cfg.cavities[0].round_trip_time,
        cfg.cavities[1].round_trip_time,
        cfg.tau(),
        cfg.trial_period_ns()
    );
    println!(
        "observable steps: {} (repetition {}, overlap {})",
        limits.limit(),
        limits.repetition_limit,
        limits.overlap_limit
    );

    for c in 0..2 {
        let t = round_trip_transmission(cfg.effective_excess_loss_db(c), cfg.tap_reflectivity(c));
        println!("C{} round trip keeps {:.5} of the energy", c + 1, t.energy);
    }

    let table = tapped_pulse_table(&cfg, limits.limit(), 1.0)?;
    println!("\n  N   first bin (ns)  last bin (ns)  cluster centroid  energy at tap");
    for n in [1, 2, 3, 10, 30, 61, 62] {
        let first = line_bin_time(&cfg, n, 0)?;
        let last = line_bin_time(&cfg, n, n)?;
        let centroid: f64 = table
            .entries()
            .iter()
            .filter(|e| e.step == n)
            .map(|e| e.time * e.mean_photons)
            .sum::<f64>()
            / table.step_total(n);
        println!(
            "{n:>3} {first:>15.1} {last:>14.1} {centroid:>17.1} {:>14.3e}",
            table.step_total(n)
        );
    }
    let next = line_bin_time(&cfg, 63, 0)? - line_bin_time(&cfg, 62, 62)?;
    println!("\ngap between the step-62 and step-63 clusters: {next} ns");
    let spacing = (line_bin_time(&cfg, 62, 31)? - line_bin_time(&cfg, 2, 1)?) / 60.0;
    println!("mean cluster spacing of the walk centre {spacing:.1} ns");
    Ok(())
}
