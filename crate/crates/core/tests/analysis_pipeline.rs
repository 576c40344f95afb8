use proptest::prelude::*;

use cavitywalk::analysis::{
    analyze, estimate_round_trip_loss, ideal_output_distributions, integrate_peaks,
    AnalysisOptions, Histogram, PeakRow, PeakTable, PeakWindow,
};
use cavitywalk::cavity::{
    input_energy_for_total, tapped_pulse_table, NetworkConfig, PulseEntry, PulseTable,
};
use cavitywalk::detector::{simulate_tdc_counts, DetectorSpec};
use cavitywalk::walk::{fidelity, LatticePosition};
use cavitywalk::Error;

fn options(steps: u32, trials: u64) -> AnalysisOptions {
    AnalysisOptions {
        steps,
        trials,
        window_halfwidth: 2000.0,
        efficiency: 1.0,
    }
}

fn run(
    cfg: &NetworkConfig,
    det: &DetectorSpec,
    steps: u32,
    trials: u64,
    seed: u64,
) -> cavitywalk::analysis::Analysis {
    let input = input_energy_for_total(cfg, steps, 0.95).unwrap();
    let table = tapped_pulse_table(cfg, steps, input).unwrap();
    let counts =
        simulate_tdc_counts(&table, det, cfg.trial_period_ns(), trials, seed, None).unwrap();
    analyze(
        &Histogram::from_tdc_counts(det.tdc_bin, counts),
        cfg,
        &options(steps, trials),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn dead_time_compensation_inverts_the_detector(
        mus in prop::collection::vec(0.0f64..0.2, 2..6),
        seed in any::<u64>(),
    ) {
        let trials = 1_000_000;
        let entries: Vec<PulseEntry> = mus
            .iter()
            .enumerate()
            .map(|(i, &mu)| PulseEntry {
                step: i as u32 + 1,
                position: LatticePosition::line(0),
                mean_photons: mu,
                time: 20.0 * (i as f64 + 1.0),
            })
            .collect();
        let table = PulseTable::from_entries(entries).unwrap();
        let det = DetectorSpec { background_rate: 0.0, ..DetectorSpec::default() };
        let counts = simulate_tdc_counts(&table, &det, 150.0, trials, seed, None).unwrap();
        let hist = Histogram::from_tdc_counts(det.tdc_bin, counts);
        let windows: Vec<PeakWindow> = table
            .entries()
            .iter()
            .map(|e| PeakWindow {
                step: e.step,
                position: e.position.clone(),
                center: e.time * 1e3,
                first_bin: ((e.time * 1e3 - 2000.0) / 162.0).ceil() as usize,
                last_bin: ((e.time * 1e3 + 2000.0) / 162.0).floor() as usize,
            })
            .collect();
        let peaks = integrate_peaks(&hist, &windows, trials, 1.0).unwrap();
        for (row, mu) in peaks.rows.iter().zip(&mus) {
            // 4σ keeps the property's false-failure rate negligible over many cases
            prop_assert!((row.mu - mu).abs() <= 4.0 * row.sigma.max(1e-6), "{row:?} vs {mu}");
        }
    }
}

#[test]
fn background_subtraction_does_not_bias_energies() {
    let cfg = NetworkConfig::apparatus(0.5).unwrap();
    let clean = DetectorSpec {
        background_rate: 0.0,
        ..DetectorSpec::default()
    };
    let noisy = DetectorSpec::default();
    let a = run(&cfg, &clean, 30, 2_000_000, 17);
    let b = run(&cfg, &noisy, 30, 2_000_000, 18);
    let mut z = Vec::new();
    for (ra, rb) in a.peaks.rows.iter().zip(&b.peaks.rows) {
        assert_eq!((ra.step, &ra.position), (rb.step, &rb.position));
        let s = (ra.sigma.powi(2) + rb.sigma.powi(2)).sqrt();
        if ra.mu > 3.0 * ra.sigma {
            z.push((rb.mu - ra.mu) / s);
        }
    }
    let n = z.len() as f64;
    let mean = z.iter().sum::<f64>() / n;
    let rms = (z.iter().map(|x| x * x).sum::<f64>() / n).sqrt();
    assert!(n > 100.0);
    // independent runs: no systematic offset, scatter no larger than the quoted errors
    assert!(mean.abs() < 4.0 / n.sqrt(), "mean z {mean} over {n}");
    assert!(rms < 1.2, "rms z {rms}");
}

fn noiseless_peaks(cfg: &NetworkConfig, steps: u32, input: f64) -> PeakTable {
    let table = tapped_pulse_table(cfg, steps, input).unwrap();
    PeakTable {
        rows: table
            .entries()
            .iter()
            .filter(|e| e.step >= 1)
            .map(|e| PeakRow {
                step: e.step,
                position: e.position.clone(),
                raw_counts: 0,
                background: 0.0,
                mu: e.mean_photons,
                sigma: e.mean_photons * 0.01,
            })
            .collect(),
        ..PeakTable::default()
    }
}

#[test]
fn loss_fit_recovers_configured_losses_exactly_without_noise() {
    for eta in [0.2, 0.5, 0.8] {
        let cfg = NetworkConfig::apparatus(eta).unwrap();
        let peaks = noiseless_peaks(&cfg, 62, 1e3);
        for (c, want) in [(0, 0.50), (1, 0.47)] {
            let l = estimate_round_trip_loss(&peaks, &cfg, c).unwrap();
            assert!(
                (l.loss_db - want).abs() < 1e-9,
                "η {eta} cavity {c}: {}",
                l.loss_db
            );
        }
    }
}

#[test]
fn loss_fit_ignores_input_scaling() {
    let cfg = NetworkConfig::apparatus(0.5).unwrap();
    for c in 0..2 {
        let a = estimate_round_trip_loss(&noiseless_peaks(&cfg, 62, 1e3), &cfg, c).unwrap();
        let b = estimate_round_trip_loss(&noiseless_peaks(&cfg, 62, 37.0), &cfg, c).unwrap();
        assert!((a.loss_db - b.loss_db).abs() < 1e-12);
        assert!((a.slope - b.slope).abs() < 1e-12);
    }
}

#[test]
fn loss_fit_needs_points_above_the_noise() {
    let cfg = NetworkConfig::apparatus(0.5).unwrap();
    let mut peaks = noiseless_peaks(&cfg, 62, 1e3);
    for r in &mut peaks.rows {
        r.sigma = r.mu;
    }
    assert!(matches!(
        estimate_round_trip_loss(&peaks, &cfg, 1),
        Err(Error::Estimation(_))
    ));
}

#[test]
fn wrong_coin_is_detected() {
    let cfg = NetworkConfig::apparatus(0.5).unwrap();
    let a = run(&cfg, &DetectorSpec::default(), 40, 2_000_000, 4);
    let wrong = ideal_output_distributions(&NetworkConfig::apparatus(0.8).unwrap(), 40).unwrap();
    let last = a
        .normalized
        .distributions
        .iter()
        .find(|d| d.step() == 40)
        .unwrap();
    let f_wrong = fidelity(last, wrong.last().unwrap()).unwrap();
    let f_right = a.fidelity.get(40).unwrap();
    assert!(f_wrong < 0.9, "{f_wrong}");
    assert!(f_right > 0.97, "{f_right}");
}

#[test]
fn early_steps_match_theory_at_desk_scale() {
    let cfg = NetworkConfig::apparatus(0.5).unwrap();
    let a = run(&cfg, &DetectorSpec::default(), 62, 5_000_000, 99);
    for n in 1..=30 {
        let f = a.fidelity.get(n).unwrap();
        assert!(f > 0.99, "step {n}: {f}");
    }
}

#[test]
fn empty_histogram_drops_every_step() {
    let cfg = NetworkConfig::apparatus(0.5).unwrap();
    let bins = (cfg.trial_period_ns() * 1e3 / 162.0).ceil() as usize;
    let hist = Histogram::from_tdc_counts(162, vec![0; bins + 1]);
    let a = analyze(&hist, &cfg, &options(62, 1000)).unwrap();
    assert_eq!(a.normalized.dropped.len(), 62);
    assert!(a.fidelity.entries.is_empty());
    assert!(a.losses.iter().all(|l| l.is_err()));
    assert!(!a.warnings.is_empty());
}
