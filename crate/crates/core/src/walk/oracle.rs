use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::coin::CoinSpec;
use super::distribution::WalkDistribution;
use super::lattice::LatticePosition;
use super::state::WalkState;

/// Largest step count the path enumeration accepts.
pub const ORACLE_MAX_STEPS: u32 = 12;

/// Sums amplitudes over every cavity sequence of length `steps` explicitly.
///
/// Independent of [`super::step`]: each path contributes the product of coin
/// elements along its cavity sequence and lands at the position given by its
/// traversal counts. Paths with the same (position, final cavity) interfere.
pub fn brute_force_oracle(
    initial: &WalkState,
    coin: &CoinSpec,
    steps: u32,
) -> Result<WalkDistribution> {
    if steps > ORACLE_MAX_STEPS {
        return Err(Error::Refusal(format!(
            "path enumeration limited to {ORACLE_MAX_STEPS} steps, asked for {steps}"
        )));
    }
    if coin.dims() != initial.dims() {
        return Err(Error::Configuration(
            "coin and state dimensions differ".into(),
        ));
    }
    let n = coin.cavities();
    let paths = (n as u64).pow(steps);
    let mut sums: HashMap<(Vec<u32>, usize), Complex64> = HashMap::new();

    for (pos, amps) in initial.iter() {
        for (start, &a0) in amps.iter().enumerate() {
            if a0 == Complex64::new(0.0, 0.0) {
                continue;
            }
            for index in 0..paths {
                let mut code = index;
                let mut counts = pos.counts().to_vec();
                let mut amp = a0;
                let mut from = start;
                for _ in 0..steps {
                    let to = (code % n as u64) as usize;
                    code /= n as u64;
                    amp *= coin.element(to, from);
                    if to > 0 {
                        counts[to - 1] += 1;
                    }
                    from = to;
                }
                *sums.entry((counts, from)).or_default() += amp;
            }
        }
    }

    let weights = sums
        .into_iter()
        .map(|((counts, _), amp)| (LatticePosition::from_counts(counts), amp.norm_sqr()));
    WalkDistribution::from_weights(initial.step() + steps, weights)
}
