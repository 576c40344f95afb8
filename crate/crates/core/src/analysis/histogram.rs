use crate::detector::EventStream;
use crate::error::{Error, Result};

/// Detection-time histogram over one trial window.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// ps
    pub bin_width: u32,
    /// ps
    pub origin: u64,
    pub counts: Vec<u64>,
    /// Detections at or beyond the end of the trial window.
    pub overflow: u64,
}

impl Histogram {
    /// Histogram from per-TDC-bin counts whose last element is the overflow.
    pub fn from_tdc_counts(tdc_bin: u32, mut counts: Vec<u64>) -> Self {
        let overflow = counts.pop().unwrap_or(0);
        Histogram {
            bin_width: tdc_bin,
            origin: 0,
            counts,
            overflow,
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.overflow
    }

    /// Start time (ps) of bin `i`.
    pub fn bin_start(&self, i: usize) -> f64 {
        self.origin as f64 + i as f64 * self.bin_width as f64
    }

    /// Merges bins by an integer `factor`.
    pub fn rebinned(&self, factor: u32) -> Result<Self> {
        if factor == 0 {
            return Err(Error::Domain("rebin factor must be positive".into()));
        }
        let counts = self
            .counts
            .chunks(factor as usize)
            .map(|c| c.iter().sum())
            .collect();
        Ok(Histogram {
            bin_width: self.bin_width * factor,
            origin: self.origin,
            counts,
            overflow: self.overflow,
        })
    }
}

/// Counts events per `bin_width` over one trial period.
pub fn build_histogram(events: &EventStream, bin_width: u32) -> Result<Histogram> {
    if bin_width == 0 || !bin_width.is_multiple_of(events.tdc_bin_ps) {
        return Err(Error::Domain(format!(
            "histogram bin {bin_width} ps is not a positive multiple of the {} ps TDC bin",
            events.tdc_bin_ps
        )));
    }
    let factor = (bin_width / events.tdc_bin_ps) as u64;
    let window_tdc = events.window_bins();
    let bins = window_tdc.div_ceil(factor) as usize;
    let mut counts = vec![0u64; bins];
    let mut overflow = 0;
    for r in &events.records {
        if r.detection_time >= window_tdc {
            overflow += 1;
        } else {
            counts[(r.detection_time / factor) as usize] += 1;
        }
    }
    if overflow > 0 {
        log::warn!("{overflow} detections fall beyond the trial window");
    }
    Ok(Histogram {
        bin_width,
        origin: 0,
        counts,
        overflow,
    })
}
