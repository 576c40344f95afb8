use crate::cavity::{bin_time, NetworkConfig};
use crate::error::{Error, Result};
use crate::walk::{positions_at_step, LatticePosition};

use super::deadtime::compensate_dead_time;
use super::histogram::Histogram;

/// Integration window of one output pulse, in histogram bins (inclusive).
#[derive(Debug, Clone, PartialEq)]
pub struct PeakWindow {
    pub step: u32,
    pub position: LatticePosition,
    /// ps
    pub center: f64,
    pub first_bin: usize,
    pub last_bin: usize,
}

impl PeakWindow {
    pub fn bins(&self) -> usize {
        self.last_bin + 1 - self.first_bin
    }
}

/// Windows for every `(N, position)` with `1 ≤ N ≤ steps`, in time order.
///
/// Windows are placed from the known timing of the network rather than found
/// by a peak search. A bin belongs to a window when its centre lies within
/// `window_halfwidth` ps of the nominal pulse time.
pub fn identify_peaks(
    hist: &Histogram,
    cfg: &NetworkConfig,
    steps: u32,
    window_halfwidth: f64,
) -> Result<Vec<PeakWindow>> {
    if !(window_halfwidth > 0.0) {
        return Err(Error::Domain("window half-width must be positive".into()));
    }
    let mut centers = Vec::new();
    for n in 1..=steps {
        for p in positions_at_step(cfg.dims(), n) {
            centers.push((bin_time(cfg, n, &p)? * 1e3, n, p));
        }
    }
    centers.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in centers.windows(2) {
        if w[1].0 - w[0].0 <= 2.0 * window_halfwidth {
            return Err(Error::Configuration(format!(
                "windows of ±{window_halfwidth} ps around ({}, {}) and ({}, {}) overlap; \
                 pulses are only {} ps apart",
                w[0].1,
                w[0].2,
                w[1].1,
                w[1].2,
                w[1].0 - w[0].0
            )));
        }
    }

    let width = hist.bin_width as f64;
    let origin = hist.origin as f64;
    let mut windows = Vec::with_capacity(centers.len());
    for (center, step, position) in centers {
        let lo = ((center - window_halfwidth - origin) / width - 0.5)
            .ceil()
            .max(0.0) as usize;
        let hi_f = ((center + window_halfwidth - origin) / width - 0.5).floor();
        if hi_f < lo as f64 {
            return Err(Error::Configuration(format!(
                "window ±{window_halfwidth} ps holds no {width} ps histogram bin"
            )));
        }
        let hi = hi_f as usize;
        if hi >= hist.counts.len() {
            return Err(Error::Configuration(format!(
                "pulse ({step}, {position}) at {center} ps lies beyond the histogram"
            )));
        }
        windows.push(PeakWindow {
            step,
            position,
            center,
            first_bin: lo,
            last_bin: hi,
        });
    }
    for w in windows.windows(2) {
        if w[1].first_bin <= w[0].last_bin {
            return Err(Error::Configuration(
                "integration windows share a histogram bin".into(),
            ));
        }
    }
    Ok(windows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakRow {
    pub step: u32,
    pub position: LatticePosition,
    pub raw_counts: u64,
    /// Expected background detections inside the window.
    pub background: f64,
    /// Background-subtracted, dead-time-compensated mean photons per trial.
    /// May be negative before clamping.
    pub mu: f64,
    pub sigma: f64,
}

/// One-sided false-alarm probability used to call a peak resolved.
pub const FALSE_ALARM_PROBABILITY: f64 = 1.35e-3;

/// Smallest count `c` with `P(Poisson(background) >= c) <= false_alarm`.
pub fn detection_threshold(background: f64, false_alarm: f64) -> u64 {
    let background = background.max(0.0);
    let mut pmf = (-background).exp();
    let mut cdf = 0.0;
    let mut c = 0u64;
    // tail(c) = 1 - cdf(c - 1)
    while 1.0 - cdf > false_alarm {
        cdf += pmf;
        c += 1;
        pmf *= background / c as f64;
        if c > 1_000_000 {
            break;
        }
    }
    c
}

impl PeakRow {
    /// Whether the raw counts stand above the expected background at
    /// [`FALSE_ALARM_PROBABILITY`].
    pub fn is_resolved(&self) -> bool {
        self.raw_counts >= detection_threshold(self.background, FALSE_ALARM_PROBABILITY)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PeakTable {
    pub rows: Vec<PeakRow>,
    /// Background mean photons per histogram bin.
    pub background_per_bin: f64,
    pub background_per_bin_sigma: f64,
    pub overflow: u64,
}

impl PeakTable {
    pub fn get(&self, step: u32, position: &LatticePosition) -> Option<&PeakRow> {
        self.rows
            .iter()
            .find(|r| r.step == step && &r.position == position)
    }

    pub fn steps(&self) -> Vec<u32> {
        let mut s: Vec<u32> = self.rows.iter().map(|r| r.step).collect();
        s.sort_unstable();
        s.dedup();
        s
    }
}

/// Sums each window, compensates dead time and subtracts the background.
///
/// The time axis is cut into alternating gap and window segments so that the
/// survival correction is exact segment by segment. The background level per
/// bin is the compensated mean over all gaps.
pub fn integrate_peaks(
    hist: &Histogram,
    windows: &[PeakWindow],
    trials: u64,
    efficiency: f64,
) -> Result<PeakTable> {
    if !(efficiency > 0.0 && efficiency <= 1.0) {
        return Err(Error::Validation(format!(
            "efficiency {efficiency} outside (0, 1]"
        )));
    }
    // (counts, bins, window index or None for a gap)
    let mut segments: Vec<(u64, usize, Option<usize>)> = Vec::new();
    let mut cursor = 0usize;
    let sum = |a: usize, b: usize| hist.counts[a..b].iter().sum::<u64>();
    for (i, w) in windows.iter().enumerate() {
        if w.first_bin > cursor {
            segments.push((sum(cursor, w.first_bin), w.first_bin - cursor, None));
        }
        segments.push((sum(w.first_bin, w.last_bin + 1), w.bins(), Some(i)));
        cursor = w.last_bin + 1;
    }
    if cursor < hist.counts.len() {
        segments.push((
            sum(cursor, hist.counts.len()),
            hist.counts.len() - cursor,
            None,
        ));
    }

    let counts: Vec<u64> = segments.iter().map(|s| s.0).collect();
    let comp = compensate_dead_time(&counts, trials)?;

    let (mut gap_mu, mut gap_var, mut gap_bins) = (0.0, 0.0, 0usize);
    for (seg, c) in segments.iter().zip(&comp) {
        if seg.2.is_none() {
            gap_mu += c.mean_photons;
            gap_var += c.mean_photons_sigma * c.mean_photons_sigma;
            gap_bins += seg.1;
        }
    }
    let (bg, bg_sigma) = if gap_bins > 0 {
        (gap_mu / gap_bins as f64, gap_var.sqrt() / gap_bins as f64)
    } else {
        log::warn!("no gaps between windows; background taken as zero");
        (0.0, 0.0)
    };

    let mut rows = Vec::with_capacity(windows.len());
    for (seg, c) in segments.iter().zip(&comp) {
        let Some(i) = seg.2 else { continue };
        let w = &windows[i];
        let bins = seg.1 as f64;
        let bg_mu = bg * bins;
        let mu = (c.mean_photons - bg_mu) / efficiency;
        let sigma = (c.mean_photons_sigma.powi(2) + (bins * bg_sigma).powi(2)).sqrt() / efficiency;
        rows.push(PeakRow {
            step: w.step,
            position: w.position.clone(),
            raw_counts: seg.0,
            background: c.surviving as f64 * -(-bg_mu).exp_m1(),
            mu,
            sigma,
        });
    }
    Ok(PeakTable {
        rows,
        background_per_bin: bg,
        background_per_bin_sigma: bg_sigma,
        overflow: hist.overflow,
    })
}
