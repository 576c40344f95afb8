//! Monte-Carlo single-photon detector.
//!
//! Every trial draws photon and background candidates, smears photon times
//! with Gaussian jitter, quantizes onto the TDC grid and keeps only the first
//! candidate: the detector resets too slowly to fire twice in one trial.

use std::io::{BufRead, BufReader, BufWriter, Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;

use crate::cavity::PulseTable;
use crate::error::{Error, Result};

/// FWHM / σ of a Gaussian, `2√(2 ln 2)`.
pub const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949;

/// Trials per independently seeded substream.
pub const TRIALS_PER_CHUNK: u64 = 1 << 16;

pub const EVENT_HEADER_TAG: &str = "#cavitywalk-events v1";

#[derive(Debug, Clone, PartialEq)]
pub struct DetectorSpec {
    /// ps
    pub jitter_fwhm: f64,
    /// ps
    pub tdc_bin: u32,
    /// Background candidates per ns per trial, uniform over the trial.
    pub background_rate: f64,
    pub efficiency: f64,
}

/// Background rate used by default, per ns per trial.
///
/// Sets the smallest resolvable outcome probability at step 62 near 0.001 for
/// the balanced walk at 54×10⁶ trials (0.5 dark counts per second); see the
/// `probability_floor` example.
pub const DEFAULT_BACKGROUND_RATE: f64 = 5.0e-10;

impl Default for DetectorSpec {
    fn default() -> Self {
        DetectorSpec {
            jitter_fwhm: 300.0,
            tdc_bin: 162,
            background_rate: DEFAULT_BACKGROUND_RATE,
            efficiency: 1.0,
        }
    }
}

impl DetectorSpec {
    pub fn jitter_sigma_ps(&self) -> f64 {
        self.jitter_fwhm / FWHM_PER_SIGMA
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.jitter_fwhm >= 0.0) || !self.jitter_fwhm.is_finite() {
            return Err(Error::Validation(format!(
                "jitter FWHM {} ps must be non-negative",
                self.jitter_fwhm
            )));
        }
        if self.tdc_bin == 0 {
            return Err(Error::Validation("TDC bin must be positive".into()));
        }
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(Error::Validation(format!(
                "efficiency {} outside (0, 1]",
                self.efficiency
            )));
        }
        if !(self.background_rate >= 0.0) || !self.background_rate.is_finite() {
            return Err(Error::Validation(format!(
                "background rate {} must be non-negative",
                self.background_rate
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct EventRecord {
    pub trial_id: u64,
    /// TDC bin index.
    pub detection_time: u64,
}

/// Detections of a run, ordered by trial.
#[derive(Debug, Clone, PartialEq)]
pub struct EventStream {
    pub tdc_bin_ps: u32,
    pub trial_period_ns: f64,
    pub records: Vec<EventRecord>,
}

impl EventStream {
    pub fn empty(tdc_bin_ps: u32, trial_period_ns: f64) -> Self {
        EventStream {
            tdc_bin_ps,
            trial_period_ns,
            records: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Number of TDC bins covering one trial period.
    pub fn window_bins(&self) -> u64 {
        (self.trial_period_ns * 1e3 / self.tdc_bin_ps as f64).ceil() as u64
    }
}

/// Candidate sources of one trial, flattened for sampling.
struct Sampler {
    /// cumulative weights; last entry is the total rate
    cumulative: Vec<f64>,
    /// nominal times (ps) of the photon sources
    times: Vec<f64>,
    background_weight: f64,
    poisson: Option<Poisson<f64>>,
    sigma_ps: f64,
    window_ps: f64,
    tdc_ps: f64,
}

impl Sampler {
    fn new(table: &PulseTable, det: &DetectorSpec, trial_period_ns: f64) -> Result<Self> {
        det.validate()?;
        let total = table.total_mean_photons();
        if total >= 1.0 {
            return Err(Error::Validation(format!(
                "pulse table carries {total} mean photons per trial (must be < 1)"
            )));
        }
        if !(trial_period_ns > 0.0) {
            return Err(Error::Validation("trial period must be positive".into()));
        }
        let mut cumulative = Vec::new();
        let mut times = Vec::new();
        let mut acc = 0.0;
        for e in table.entries() {
            let w = e.mean_photons * det.efficiency;
            if w > 0.0 {
                acc += w;
                cumulative.push(acc);
                times.push(e.time * 1e3);
            }
        }
        let background_weight = det.background_rate * trial_period_ns;
        acc += background_weight;
        let poisson = if acc > 0.0 {
            Some(Poisson::new(acc).map_err(|e| Error::Validation(e.to_string()))?)
        } else {
            None
        };
        Ok(Sampler {
            cumulative,
            times,
            background_weight,
            poisson,
            sigma_ps: det.jitter_sigma_ps(),
            window_ps: trial_period_ns * 1e3,
            tdc_ps: det.tdc_bin as f64,
        })
    }

    /// Earliest detection of one trial, as a TDC index.
    fn trial<R: Rng>(&self, rng: &mut R) -> Option<u64> {
        let poisson = self.poisson.as_ref()?;
        let candidates = poisson.sample(rng) as u64;
        if candidates == 0 {
            return None;
        }
        let photon_weight = self.cumulative.last().copied().unwrap_or(0.0);
        let total = photon_weight + self.background_weight;
        let mut earliest = f64::INFINITY;
        for _ in 0..candidates {
            let u = rng.random::<f64>() * total;
            let t = if u < photon_weight {
                let i = self
                    .cumulative
                    .partition_point(|&c| c <= u)
                    .min(self.times.len() - 1);
                let jitter: f64 = if self.sigma_ps > 0.0 {
                    rng.sample::<f64, _>(StandardNormal) * self.sigma_ps
                } else {
                    0.0
                };
                self.times[i] + jitter
            } else {
                rng.random::<f64>() * self.window_ps
            };
            earliest = earliest.min(t);
        }
        Some((earliest.max(0.0) / self.tdc_ps).floor() as u64)
    }

    fn run_chunk(&self, seed: u64, chunk: u64, trials: u64, mut sink: impl FnMut(u64, u64)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk);
        let first = chunk * TRIALS_PER_CHUNK;
        let last = (first + TRIALS_PER_CHUNK).min(trials);
        for trial in first..last {
            if let Some(bin) = self.trial(&mut rng) {
                sink(trial, bin);
            }
        }
    }
}

fn chunks(trials: u64) -> u64 {
    trials.div_ceil(TRIALS_PER_CHUNK)
}

fn in_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Configuration(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// Simulates `trials` independent trials.
///
/// Trials are split into fixed-size chunks, each with its own ChaCha stream
/// derived from `seed`, so the output depends only on the inputs and not on
/// the number of worker threads (`None` uses the global rayon pool).
pub fn simulate_trials(
    table: &PulseTable,
    det: &DetectorSpec,
    trial_period_ns: f64,
    trials: u64,
    seed: u64,
    threads: Option<usize>,
) -> Result<EventStream> {
    let sampler = Sampler::new(table, det, trial_period_ns)?;
    let per_chunk: Vec<Vec<EventRecord>> = in_pool(threads, || {
        (0..chunks(trials))
            .into_par_iter()
            .map(|chunk| {
                let mut out = Vec::new();
                sampler.run_chunk(seed, chunk, trials, |trial_id, detection_time| {
                    out.push(EventRecord {
                        trial_id,
                        detection_time,
                    })
                });
                out
            })
            .collect()
    })?;
    Ok(EventStream {
        tdc_bin_ps: det.tdc_bin,
        trial_period_ns,
        records: per_chunk.into_iter().flatten().collect(),
    })
}

/// Same trials as [`simulate_trials`], accumulated straight into per-TDC-bin
/// counts (the last element collects detections beyond the trial period).
///
/// Avoids holding every record in memory for very long runs.
pub fn simulate_tdc_counts(
    table: &PulseTable,
    det: &DetectorSpec,
    trial_period_ns: f64,
    trials: u64,
    seed: u64,
    threads: Option<usize>,
) -> Result<Vec<u64>> {
    let sampler = Sampler::new(table, det, trial_period_ns)?;
    let bins = (trial_period_ns * 1e3 / det.tdc_bin as f64).ceil() as usize;
    in_pool(threads, || {
        (0..chunks(trials))
            .into_par_iter()
            .fold(
                || vec![0u64; bins + 1],
                |mut acc, chunk| {
                    sampler.run_chunk(seed, chunk, trials, |_, bin| {
                        acc[(bin as usize).min(bins)] += 1;
                    });
                    acc
                },
            )
            .reduce(
                || vec![0u64; bins + 1],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    })
}

/// Writes the event file format.
pub fn write_events<W: Write>(stream: &EventStream, sink: W) -> Result<()> {
    let mut w = BufWriter::new(sink);
    let ctx = |e| Error::io("writing event stream", e);
    writeln!(
        w,
        "{EVENT_HEADER_TAG} tdc_bin_ps={} trial_period_ns={}",
        stream.tdc_bin_ps, stream.trial_period_ns
    )
    .map_err(ctx)?;
    for r in &stream.records {
        writeln!(w, "{} {}", r.trial_id, r.detection_time).map_err(ctx)?;
    }
    w.flush().map_err(ctx)
}

pub fn read_events<R: Read>(source: R) -> Result<EventStream> {
    let reader = BufReader::new(source);
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or(Error::Parse {
            line: 1,
            message: "empty event file".into(),
        })?
        .map_err(|e| Error::io("reading event header", e))?;
    let rest = header.strip_prefix(EVENT_HEADER_TAG).ok_or(Error::Parse {
        line: 1,
        message: format!("expected header starting with '{EVENT_HEADER_TAG}'"),
    })?;
    let mut tdc_bin_ps = None;
    let mut trial_period_ns = None;
    for token in rest.split_whitespace() {
        let bad = |m: String| Error::Parse {
            line: 1,
            message: m,
        };
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| bad(format!("malformed header field '{token}'")))?;
        match key {
            "tdc_bin_ps" => {
                tdc_bin_ps = Some(
                    value
                        .parse::<u32>()
                        .map_err(|e| bad(format!("tdc_bin_ps: {e}")))?,
                )
            }
            "trial_period_ns" => {
                trial_period_ns = Some(
                    value
                        .parse::<f64>()
                        .map_err(|e| bad(format!("trial_period_ns: {e}")))?,
                )
            }
            _ => return Err(bad(format!("unknown header field '{key}'"))),
        }
    }
    let (Some(tdc_bin_ps), Some(trial_period_ns)) = (tdc_bin_ps, trial_period_ns) else {
        return Err(Error::Parse {
            line: 1,
            message: "header lacks tdc_bin_ps or trial_period_ns".into(),
        });
    };

    let mut records = Vec::new();
    let mut previous: Option<u64> = None;
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line.map_err(|e| Error::io(format!("reading event line {line_no}"), e))?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |m: &str| Error::Parse {
            line: line_no,
            message: m.to_string(),
        };
        let mut fields = line.split(' ');
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(bad("expected '<trial_id> <tdc_bin_index>'"));
        };
        let trial_id: u64 = a.parse().map_err(|_| bad("bad trial id"))?;
        let detection_time: u64 = b.parse().map_err(|_| bad("bad TDC index"))?;
        if previous.is_some_and(|p| trial_id <= p) {
            return Err(bad("trial ids must be strictly increasing"));
        }
        previous = Some(trial_id);
        records.push(EventRecord {
            trial_id,
            detection_time,
        });
    }
    Ok(EventStream {
        tdc_bin_ps,
        trial_period_ns,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavity::PulseEntry;
    use crate::walk::LatticePosition;

    fn single(mu: f64, time: f64) -> PulseTable {
        PulseTable::from_entries(vec![PulseEntry {
            step: 1,
            position: LatticePosition::line(1),
            mean_photons: mu,
            time,
        }])
        .unwrap()
    }

    fn quiet() -> DetectorSpec {
        DetectorSpec {
            background_rate: 0.0,
            ..DetectorSpec::default()
        }
    }

    #[test]
    fn dark_run_is_empty() {
        let s = simulate_trials(&single(0.0, 503.0), &quiet(), 33_000.0, 10_000, 1, None).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn noiseless_times_sit_on_grid() {
        let det = DetectorSpec {
            jitter_fwhm: 0.0,
            ..quiet()
        };
        let s = simulate_trials(&single(0.3, 511.0), &det, 33_000.0, 5_000, 9, None).unwrap();
        assert!(!s.is_empty());
        let expected = (511_000.0f64 / 162.0).floor() as u64;
        assert!(s.records.iter().all(|r| r.detection_time == expected));
    }

    #[test]
    fn at_most_one_record_per_trial() {
        let s = simulate_trials(
            &single(0.9, 700.0),
            &DetectorSpec::default(),
            33_000.0,
            50_000,
            3,
            None,
        )
        .unwrap();
        assert!(s.records.windows(2).all(|w| w[0].trial_id < w[1].trial_id));
    }

    #[test]
    fn rejects_bright_tables_and_bad_specs() {
        let table = PulseTable::default();
        let det = DetectorSpec {
            efficiency: 0.0,
            ..DetectorSpec::default()
        };
        assert!(simulate_trials(&table, &det, 33_000.0, 10, 0, None).is_err());
        let det = DetectorSpec {
            tdc_bin: 0,
            ..DetectorSpec::default()
        };
        assert!(simulate_trials(&table, &det, 33_000.0, 10, 0, None).is_err());
    }

    #[test]
    fn counts_agree_with_records() {
        let table = single(0.2, 1000.0);
        let det = DetectorSpec::default();
        let s = simulate_trials(&table, &det, 33_000.0, 200_000, 5, None).unwrap();
        let counts = simulate_tdc_counts(&table, &det, 33_000.0, 200_000, 5, None).unwrap();
        let mut from_records = vec![0u64; counts.len()];
        for r in &s.records {
            from_records[(r.detection_time as usize).min(counts.len() - 1)] += 1;
        }
        assert_eq!(counts, from_records);
    }

    #[test]
    fn header_only_file() {
        let mut buf = Vec::new();
        write_events(&EventStream::empty(162, 33_000.0), &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "#cavitywalk-events v1 tdc_bin_ps=162 trial_period_ns=33000\n"
        );
        assert!(read_events(buf.as_slice()).unwrap().is_empty());
    }

    #[test]
    fn three_records_round_trip() {
        let stream = EventStream {
            tdc_bin_ps: 162,
            trial_period_ns: 33_000.0,
            records: vec![
                EventRecord {
                    trial_id: 0,
                    detection_time: 3105,
                },
                EventRecord {
                    trial_id: 7,
                    detection_time: 3154,
                },
                EventRecord {
                    trial_id: 8,
                    detection_time: 12,
                },
            ],
        };
        let mut buf = Vec::new();
        write_events(&stream, &mut buf).unwrap();
        assert_eq!(String::from_utf8_lossy(&buf).lines().count(), 4);
        assert_eq!(read_events(buf.as_slice()).unwrap(), stream);
    }

    #[test]
    fn malformed_files() {
        assert!(read_events("".as_bytes()).is_err());
        assert!(read_events("#other v1\n".as_bytes()).is_err());
        let bad_order = "#cavitywalk-events v1 tdc_bin_ps=162 trial_period_ns=33000\n5 1\n5 2\n";
        assert!(matches!(
            read_events(bad_order.as_bytes()),
            Err(Error::Parse { line: 3, .. })
        ));
        let bad_fields = "#cavitywalk-events v1 tdc_bin_ps=162 trial_period_ns=33000\n1 2 3\n";
        assert!(read_events(bad_fields.as_bytes()).is_err());
    }
}
