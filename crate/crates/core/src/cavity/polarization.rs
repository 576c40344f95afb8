use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::walk::{evolve, fidelity, LatticePosition, WalkDistribution, WalkState};

use super::network::{jones_unitarity_error, JonesMatrix, NetworkConfig, JONES_UNITARITY_TOL};

/// `exp(−i·angle/2 · n̂·σ)`, a rotation of the Stokes vector by `angle` about `axis`.
pub fn jones_rotation(axis: [f64; 3], angle: f64) -> Result<JonesMatrix> {
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if !(norm > 0.0) {
        return Err(Error::Domain("rotation axis must be non-zero".into()));
    }
    let [x, y, z] = axis.map(|a| a / norm);
    let (s, c) = (angle / 2.0).sin_cos();
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    // n·σ = [[z, x − iy], [x + iy, −z]]
    Ok(JonesMatrix::new(
        one * c - i * s * z,
        -i * s * Complex64::new(x, -y),
        -i * s * Complex64::new(x, y),
        one * c + i * s * z,
    ))
}

/// `max |[J₁, J₂]_ij|`.
pub fn commutator_norm(a: &JonesMatrix, b: &JonesMatrix) -> f64 {
    let comm = a * b - b * a;
    comm.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone)]
pub struct PolarizationStep {
    /// Position distribution with polarization traced out.
    pub distribution: WalkDistribution,
    /// Bhattacharyya overlap with the polarization-free walk at the same step.
    pub visibility: f64,
}

#[derive(Debug, Clone)]
pub struct PolarizationWalk {
    /// Largest commutator magnitude over all cavity pairs.
    pub commutator_norm: f64,
    pub steps: Vec<PolarizationStep>,
}

/// Walk with a polarization factor attached to every pulse.
///
/// Each pass through cavity `c` applies that cavity's Jones matrix (identity
/// when unset). The input pulse is horizontally polarized.
pub fn polarization_walk(cfg: &NetworkConfig, steps: u32) -> Result<PolarizationWalk> {
    let n = cfg.coin.cavities();
    if cfg.cavities.len() != n {
        return Err(Error::Validation("cavity count does not match coin".into()));
    }
    let jones: Vec<JonesMatrix> = cfg
        .cavities
        .iter()
        .map(|c| c.jones.unwrap_or_else(JonesMatrix::identity))
        .collect();
    for (c, j) in jones.iter().enumerate() {
        let err = jones_unitarity_error(j);
        if !(err <= JONES_UNITARITY_TOL) {
            return Err(Error::Validation(format!(
                "Jones matrix of cavity {c} not unitary (max |J†J - I| = {err:.3e})"
            )));
        }
    }
    let mut worst = 0.0f64;
    for a in 0..n {
        for b in a + 1..n {
            worst = worst.max(commutator_norm(&jones[a], &jones[b]));
        }
    }

    let scalar = evolve(
        &WalkState::initial(cfg.dims()),
        &cfg.coin,
        steps.max(1),
        None,
    )?;

    let zero = Complex64::new(0.0, 0.0);
    // amplitudes indexed [cavity * 2 + pol]
    let mut state: BTreeMap<LatticePosition, Vec<Complex64>> = BTreeMap::new();
    let mut start = vec![zero; 2 * n];
    start[0] = Complex64::new(1.0, 0.0);
    state.insert(LatticePosition::origin(cfg.dims()), start);

    let mut out = Vec::with_capacity(steps as usize);
    for s in 1..=steps {
        let mut next: BTreeMap<LatticePosition, Vec<Complex64>> = BTreeMap::new();
        for (pos, amps) in &state {
            for to in 0..n {
                let mut pol = [zero; 2];
                for from in 0..n {
                    let u = cfg.coin.element(to, from);
                    pol[0] += u * amps[2 * from];
                    pol[1] += u * amps[2 * from + 1];
                }
                let j = &jones[to];
                let rotated = [
                    j[(0, 0)] * pol[0] + j[(0, 1)] * pol[1],
                    j[(1, 0)] * pol[0] + j[(1, 1)] * pol[1],
                ];
                let slot = next
                    .entry(pos.shifted(to))
                    .or_insert_with(|| vec![zero; 2 * n]);
                slot[2 * to] += rotated[0];
                slot[2 * to + 1] += rotated[1];
            }
        }
        state = next;
        let distribution = WalkDistribution::from_weights(
            s,
            state
                .iter()
                .map(|(p, a)| (p.clone(), a.iter().map(|z| z.norm_sqr()).sum())),
        )?;
        let visibility = fidelity(&distribution, &scalar[s as usize - 1])?;
        out.push(PolarizationStep {
            distribution,
            visibility,
        });
    }
    Ok(PolarizationWalk {
        commutator_norm: worst,
        steps: out,
    })
}
