use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::coin::CoinSpec;
use super::distribution::WalkDistribution;
use super::lattice::LatticePosition;

/// Amplitudes of the walker over (position, cavity) after some number of steps.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    dims: usize,
    step: u32,
    amplitudes: BTreeMap<LatticePosition, Vec<Complex64>>,
    surviving_norm: f64,
}

impl WalkState {
    /// Walker at the origin with unit amplitude in `cavity`.
    pub fn localized(dims: usize, cavity: usize) -> Result<Self> {
        if dims == 0 || cavity >= 2 * dims {
            return Err(Error::Configuration(format!(
                "cavity {cavity} does not exist on a D={dims} network"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 2 * dims];
        amps[cavity] = Complex64::new(1.0, 0.0);
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(LatticePosition::origin(dims), amps);
        Ok(WalkState {
            dims,
            step: 0,
            amplitudes,
            surviving_norm: 1.0,
        })
    }

    /// The experiment's starting point: the pulse enters cavity 0 (C₁).
    pub fn initial(dims: usize) -> Self {
        Self::localized(dims, 0).expect("cavity 0 always exists")
    }

    /// Arbitrary starting state; the norm is taken as the surviving energy.
    pub fn from_amplitudes(
        dims: usize,
        step: u32,
        amplitudes: BTreeMap<LatticePosition, Vec<Complex64>>,
    ) -> Result<Self> {
        for (pos, amps) in &amplitudes {
            if amps.len() != 2 * dims || pos.counts().len() != 2 * dims - 1 {
                return Err(Error::Configuration(format!(
                    "amplitude entry at {pos} does not match D={dims}"
                )));
            }
            if !pos.fits_step(step) {
                return Err(Error::Domain(format!(
                    "position {pos} not reachable in {step} steps"
                )));
            }
        }
        let mut state = WalkState {
            dims,
            step,
            amplitudes,
            surviving_norm: 0.0,
        };
        state.surviving_norm = state.norm_sqr();
        Ok(state)
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn step(&self) -> u32 {
        self.step
    }

    pub fn surviving_norm(&self) -> f64 {
        self.surviving_norm
    }

    pub fn amplitude(&self, pos: &LatticePosition, cavity: usize) -> Complex64 {
        self.amplitudes
            .get(pos)
            .and_then(|a| a.get(cavity).copied())
            .unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePosition, &[Complex64])> {
        self.amplitudes.iter().map(|(p, a)| (p, a.as_slice()))
    }

    /// `Σ |a|²` over all positions and cavities.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes
            .values()
            .flat_map(|a| a.iter())
            .map(|z| z.norm_sqr())
            .sum()
    }

    /// Unnormalized energy per position, summed over cavities.
    pub fn position_energies(&self) -> BTreeMap<LatticePosition, f64> {
        self.amplitudes
            .iter()
            .map(|(p, a)| (p.clone(), a.iter().map(|z| z.norm_sqr()).sum()))
            .collect()
    }

    /// Unnormalized energy per position residing in one cavity.
    pub fn cavity_energies(&self, cavity: usize) -> BTreeMap<LatticePosition, f64> {
        self.amplitudes
            .iter()
            .map(|(p, a)| (p.clone(), a[cavity].norm_sqr()))
            .collect()
    }

    /// Position distribution, renormalized to the surviving energy.
    pub fn distribution(&self) -> Result<WalkDistribution> {
        WalkDistribution::from_weights(self.step, self.position_energies())
    }

    /// Position distribution of the part of the walker in `cavity`, renormalized.
    ///
    /// This is what a tap on that cavity measures.
    pub fn cavity_distribution(&self, cavity: usize) -> Result<WalkDistribution> {
        WalkDistribution::from_weights(self.step, self.cavity_energies(cavity))
    }
}

fn check_loss(loss: Option<&[f64]>, cavities: usize) -> Result<()> {
    if let Some(t) = loss {
        if t.len() != cavities {
            return Err(Error::Configuration(format!(
                "{} loss factors given for {cavities} cavities",
                t.len()
            )));
        }
        if let Some(bad) = t.iter().find(|&&x| !(x > 0.0 && x <= 1.0)) {
            return Err(Error::Domain(format!(
                "amplitude transmission {bad} outside (0, 1]"
            )));
        }
    }
    Ok(())
}

/// One round trip: coupler (coin), then a pass through each cavity (shift),
/// then per-cavity amplitude transmission if `loss` is given.
pub fn step(state: &WalkState, coin: &CoinSpec, loss: Option<&[f64]>) -> Result<WalkState> {
    if coin.dims() != state.dims {
        return Err(Error::Configuration(format!(
            "coin is for D={} but walk state is D={}",
            coin.dims(),
            state.dims
        )));
    }
    let n = coin.cavities();
    check_loss(loss, n)?;

    let zero = Complex64::new(0.0, 0.0);
    let mut next: BTreeMap<LatticePosition, Vec<Complex64>> = BTreeMap::new();
    for (pos, amps) in &state.amplitudes {
        for to in 0..n {
            let mut out = zero;
            for (from, &a) in amps.iter().enumerate() {
                out += coin.element(to, from) * a;
            }
            if let Some(t) = loss {
                out *= t[to];
            }
            next.entry(pos.shifted(to)).or_insert_with(|| vec![zero; n])[to] += out;
        }
    }
    let mut stepped = WalkState {
        dims: state.dims,
        step: state.step + 1,
        amplitudes: next,
        surviving_norm: state.surviving_norm,
    };
    if loss.is_some() {
        stepped.surviving_norm = stepped.norm_sqr();
    }
    Ok(stepped)
}

/// States after steps `1..=steps`.
pub fn trajectory(
    initial: &WalkState,
    coin: &CoinSpec,
    steps: u32,
    loss: Option<&[f64]>,
) -> Result<Vec<WalkState>> {
    let mut out = Vec::with_capacity(steps as usize);
    let mut current = initial.clone();
    for _ in 0..steps {
        current = step(&current, coin, loss)?;
        out.push(current.clone());
    }
    Ok(out)
}

/// Per-step normalized distributions for steps `1..=steps`.
pub fn evolve(
    initial: &WalkState,
    coin: &CoinSpec,
    steps: u32,
    loss: Option<&[f64]>,
) -> Result<Vec<WalkDistribution>> {
    if steps == 0 {
        return Err(Error::Domain("evolve needs at least one step".into()));
    }
    trajectory(initial, coin, steps, loss)?
        .iter()
        .map(WalkState::distribution)
        .collect()
}

/// Incoherent reference walk using `|U|²` as a Markov transition matrix.
pub fn classical_walk(
    coin: &CoinSpec,
    start_cavity: usize,
    steps: u32,
) -> Result<Vec<WalkDistribution>> {
    let n = coin.cavities();
    if start_cavity >= n {
        return Err(Error::Configuration(format!(
            "cavity {start_cavity} does not exist"
        )));
    }
    let trans = coin.transition_probabilities();
    let mut probs: BTreeMap<LatticePosition, Vec<f64>> = BTreeMap::new();
    let mut start = vec![0.0; n];
    start[start_cavity] = 1.0;
    probs.insert(LatticePosition::origin(coin.dims()), start);

    let mut out = Vec::with_capacity(steps as usize);
    for s in 1..=steps {
        let mut next: BTreeMap<LatticePosition, Vec<f64>> = BTreeMap::new();
        for (pos, p) in &probs {
            for to in 0..n {
                let w: f64 = (0..n).map(|from| trans[(to, from)] * p[from]).sum();
                next.entry(pos.shifted(to)).or_insert_with(|| vec![0.0; n])[to] += w;
            }
        }
        probs = next;
        out.push(WalkDistribution::from_weights(
            s,
            probs.iter().map(|(pos, p)| (pos.clone(), p.iter().sum())),
        )?);
    }
    Ok(out)
}
