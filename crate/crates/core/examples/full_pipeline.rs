//! Simulated experiment and inverse analysis for the three coin biases.
//!
//! `cargo run --release --example full_pipeline -- [trials]`

use cavitywalk::commands::{analyze_events, simulate_physical};
use cavitywalk::config::RunConfig;

fn main() -> cavitywalk::Result<()> {
    let trials: u64 = std::env::args()
        .nth(1)
        .map_or(5_000_000, |s| s.parse().expect("trials"));
    for eta in [0.2, 0.5, 0.8] {
        let mut cfg = RunConfig::default();
        cfg.network.eta_c = eta;
        cfg.run.trials = trials;
        let run = simulate_physical(&cfg)?;
        let analysis = analyze_events(&run.events, &cfg)?;
        println!(
            "η = {eta}: {} detections, {} in step {}",
            run.events.len(),
            run.final_step_events(cfg.run.window_halfwidth_ps),
            cfg.run.steps
        );
        for l in analysis.losses.iter().flatten() {
            println!(
                "  C{} loss {:.3} ± {:.3} dB from {} steps (χ²/dof {:.2})",
                l.cavity + 1,
                l.loss_db,
                l.sigma_db,
                l.points,
                l.reduced_chi2
            );
        }
        let f = &analysis.fidelity;
        let above = f.entries.iter().filter(|e| e.1 > 0.99).count();
        let (n, min) = f.min().unwrap_or((0, f64::NAN));
        println!(
            "  F > 0.99 at {above}/{} steps, minimum {min:.4} at step {n}",
            f.entries.len()
        );
        let sample: Vec<String> = [1, 10, 20, 30, 40, 50, 62]
            .iter()
            .filter_map(|&s| f.get(s).map(|v| format!("F{s}={v:.4}")))
            .collect();
        println!("  {}", sample.join(" "));
    }
    Ok(())
}
