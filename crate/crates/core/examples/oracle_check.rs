//! Step-by-step evolution against explicit enumeration of every cavity path.

use std::time::Instant;

use cavitywalk::walk::{
    brute_force_oracle, coin_from_bias, evolve, multiport_coin, CoinRule, WalkState,
};

fn main() -> cavitywalk::Result<()> {
    let mut cases = vec![];
    for eta in [0.2, 0.5, 0.8] {
        cases.push((format!("line, η = {eta}"), 1, coin_from_bias(eta)?));
    }
    cases.push((
        "2-D Fourier multiport".to_string(),
        2,
        multiport_coin(2, CoinRule::Fourier)?,
    ));

    for (name, dims, coin) in cases {
        let init = WalkState::initial(dims);
        let start = Instant::now();
        let fast = evolve(&init, &coin, 10, None)?;
        let t_fast = start.elapsed();
        let start = Instant::now();
        let mut worst: f64 = 0.0;
        for d in &fast {
            let slow = brute_force_oracle(&init, &coin, d.step())?;
            for (pos, _) in d.iter().chain(slow.iter()) {
                worst = worst.max((d.get(pos) - slow.get(pos)).abs());
            }
        }
        println!(
            "{name:24} max |ΔP| = {worst:.1e}   evolve {:?}, paths {:?}",
            t_fast,
            start.elapsed()
        );
    }
    Ok(())
}
