//! Ideal coined walk on the line.
//!
//! `cargo run --example ideal_walk -- [eta] [steps]`

use cavitywalk::walk::{classical_walk, coin_from_bias, evolve, WalkState};

fn main() -> cavitywalk::Result<()> {
    let mut args = std::env::args().skip(1);
    let eta: f64 = args.next().map_or(0.5, |s| s.parse().expect("eta"));
    let steps: u32 = args.next().map_or(20, |s| s.parse().expect("steps"));

    let coin = coin_from_bias(eta)?;
    let quantum = evolve(&WalkState::initial(1), &coin, steps, None)?;
    let classical = classical_walk(&coin, 0, steps)?;
    let (q, c) = (quantum.last().unwrap(), classical.last().unwrap());

    println!("η = {eta}, N = {steps}");
    println!(
        "{:>4} {:>6} {:>10} {:>10}",
        "k", "x", "quantum", "classical"
    );
    for (pos, p) in q.iter() {
        let bar = "#".repeat((p * 200.0).round() as usize);
        println!(
            "{:>4} {:>6} {:>10.6} {:>10.6} {bar}",
            pos.k(),
            pos.symmetric_label(steps),
            p,
            c.get(pos)
        );
    }
    println!(
        "σ quantum {:.3} (σ/N {:.4})",
        q.std_k(),
        q.std_k() / steps as f64
    );
    println!(
        "σ classical {:.3} (σ/√N {:.4})",
        c.std_k(),
        c.std_k() / (steps as f64).sqrt()
    );
    Ok(())
}
