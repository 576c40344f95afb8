//! Walk on a 2-D lattice with four cavities joined by a Fourier multiport.

use cavitywalk::walk::{evolve, multiport_coin, CoinRule, WalkState};

fn main() -> cavitywalk::Result<()> {
    let steps = 12;
    let coin = multiport_coin(2, CoinRule::Fourier)?;
    println!(
        "transition probabilities |U|²:\n{:.3}",
        coin.transition_probabilities()
    );
    let d = evolve(&WalkState::initial(2), &coin, steps, None)?;
    let last = d.last().unwrap();

    // displacement grid: counts of cavities 1 and 2 relative to cavity 3
    let mut grid = vec![vec![0.0; steps as usize + 1]; steps as usize + 1];
    for (pos, p) in last.iter() {
        let c = pos.counts();
        grid[c[0] as usize][c[1] as usize] += p;
    }
    println!("P(n₁, n₂) after {steps} steps, summed over n₃:");
    for row in &grid {
        let line: String = row
            .iter()
            .map(|&p| match p {
                p if p > 0.05 => '#',
                p if p > 0.01 => '+',
                p if p > 1e-3 => '.',
                _ => ' ',
            })
            .collect();
        println!("|{line}|");
    }
    println!(
        "{} occupied positions, total {:.12}",
        last.iter().count(),
        last.total()
    );
    Ok(())
}
