//! Text report of per-pulse energies, distributions, losses and fidelities.
//!
//! ```text
//! #cavitywalk-report v1
//! #meta eta_c=0.5
//! #loss cavity=1 db=0.47 sigma_db=0.002 points=40 reduced_chi2=1.1
//! #columns N k raw_counts background mu sigma P
//! 2 0 0 0 0.25 0 0.25
//! #fidelity N F
//! 2 0.9999
//! ```
//!
//! Positions of multiport walks are written as comma-separated traversal
//! counts. Floats use the shortest representation that reads back exactly,
//! so a report is byte-for-byte reproducible.

use std::io::{BufRead, BufReader, Read, Write};

use crate::analysis::{fidelity_series, Analysis, FidelitySeries, LossEstimate};
use crate::error::{Error, Result};
use crate::walk::{LatticePosition, WalkDistribution};

pub const REPORT_HEADER: &str = "#cavitywalk-report v1";
const COLUMNS: &str = "#columns N k raw_counts background mu sigma P";
const FIDELITY: &str = "#fidelity N F";

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub step: u32,
    pub position: LatticePosition,
    pub raw_counts: u64,
    pub background: f64,
    pub mu: f64,
    pub sigma: f64,
    /// Normalized probability within the step.
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LossLine {
    pub cavity: usize,
    pub loss_db: f64,
    pub sigma_db: f64,
    pub points: usize,
    pub reduced_chi2: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    /// Free-form `key=value` metadata, kept in order.
    pub meta: Vec<(String, String)>,
    pub losses: Vec<LossLine>,
    pub rows: Vec<ReportRow>,
    pub fidelity: Vec<(u32, f64)>,
}

impl Report {
    /// Theory report: `mu` and `P` both carry the walk probability.
    pub fn from_distributions(dists: &[WalkDistribution]) -> Self {
        let rows = dists
            .iter()
            .flat_map(|d| {
                d.iter().map(move |(pos, p)| ReportRow {
                    step: d.step(),
                    position: pos.clone(),
                    raw_counts: 0,
                    background: 0.0,
                    mu: p,
                    sigma: 0.0,
                    probability: p,
                })
            })
            .collect();
        Report {
            rows,
            ..Report::default()
        }
    }

    pub fn from_analysis(analysis: &Analysis) -> Self {
        let rows = analysis
            .peaks
            .rows
            .iter()
            .map(|r| {
                let probability = analysis
                    .normalized
                    .distributions
                    .iter()
                    .find(|d| d.step() == r.step)
                    .map_or(0.0, |d| d.get(&r.position));
                ReportRow {
                    step: r.step,
                    position: r.position.clone(),
                    raw_counts: r.raw_counts,
                    background: r.background,
                    mu: r.mu,
                    sigma: r.sigma,
                    probability,
                }
            })
            .collect();
        let losses = analysis
            .losses
            .iter()
            .filter_map(|l| l.as_ref().ok())
            .map(LossLine::from)
            .collect();
        Report {
            meta: Vec::new(),
            losses,
            rows,
            fidelity: analysis.fidelity.entries.clone(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Per-step distributions from the `P` column. Steps whose probabilities
    /// are all zero are left out.
    pub fn distributions(&self) -> Result<Vec<WalkDistribution>> {
        let mut out: Vec<WalkDistribution> = Vec::new();
        let mut steps: Vec<u32> = self.rows.iter().map(|r| r.step).collect();
        steps.sort_unstable();
        steps.dedup();
        for step in steps {
            let rows: Vec<&ReportRow> = self.rows.iter().filter(|r| r.step == step).collect();
            if rows.iter().all(|r| r.probability == 0.0) {
                continue;
            }
            out.push(WalkDistribution::from_weights(
                step,
                rows.iter().map(|r| (r.position.clone(), r.probability)),
            )?);
        }
        Ok(out)
    }

    pub fn write<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = std::io::BufWriter::new(sink);
        let ctx = |e| Error::io("writing report", e);
        writeln!(w, "{REPORT_HEADER}").map_err(ctx)?;
        for (k, v) in &self.meta {
            writeln!(w, "#meta {k}={v}").map_err(ctx)?;
        }
        for l in &self.losses {
            writeln!(
                w,
                "#loss cavity={} db={} sigma_db={} points={} reduced_chi2={}",
                l.cavity, l.loss_db, l.sigma_db, l.points, l.reduced_chi2
            )
            .map_err(ctx)?;
        }
        writeln!(w, "{COLUMNS}").map_err(ctx)?;
        for r in &self.rows {
            writeln!(
                w,
                "{} {} {} {} {} {} {}",
                r.step, r.position, r.raw_counts, r.background, r.mu, r.sigma, r.probability
            )
            .map_err(ctx)?;
        }
        if !self.fidelity.is_empty() {
            writeln!(w, "{FIDELITY}").map_err(ctx)?;
            for (n, f) in &self.fidelity {
                writeln!(w, "{n} {f}").map_err(ctx)?;
            }
        }
        w.flush().map_err(ctx)
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("reports are ASCII")
    }

    pub fn read<R: Read>(source: R) -> Result<Self> {
        let mut lines = BufReader::new(source).lines().enumerate();
        let mut next = || -> Result<Option<(usize, String)>> {
            match lines.next() {
                None => Ok(None),
                Some((i, l)) => Ok(Some((
                    i + 1,
                    l.map_err(|e| Error::io("reading report", e))?,
                ))),
            }
        };
        match next()? {
            Some((_, l)) if l.trim_end() == REPORT_HEADER => {}
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("expected header {REPORT_HEADER:?}"),
                })
            }
        }
        let mut report = Report::default();
        let mut in_fidelity = false;
        while let Some((line, text)) = next()? {
            let text = text.trim();
            let bad = |message: String| Error::Parse { line, message };
            if text.is_empty() {
                continue;
            }
            if let Some(rest) = text.strip_prefix("#meta ") {
                let (k, v) = rest
                    .split_once('=')
                    .ok_or_else(|| bad(format!("malformed metadata {rest:?}")))?;
                report.meta.push((k.to_string(), v.to_string()));
            } else if let Some(rest) = text.strip_prefix("#loss ") {
                report.losses.push(parse_loss(rest).map_err(bad)?);
            } else if text == COLUMNS {
                in_fidelity = false;
            } else if text == FIDELITY {
                in_fidelity = true;
            } else if text.starts_with('#') {
                return Err(bad(format!("unknown directive {text:?}")));
            } else if in_fidelity {
                let f: Vec<&str> = text.split_whitespace().collect();
                if f.len() != 2 {
                    return Err(bad(format!("expected `N F`, got {text:?}")));
                }
                report
                    .fidelity
                    .push((num(f[0]).map_err(bad)?, num(f[1]).map_err(bad)?));
            } else {
                report.rows.push(parse_row(text).map_err(bad)?);
            }
        }
        Ok(report)
    }
}

impl From<&LossEstimate> for LossLine {
    fn from(l: &LossEstimate) -> Self {
        LossLine {
            cavity: l.cavity,
            loss_db: l.loss_db,
            sigma_db: l.sigma_db,
            points: l.points,
            reduced_chi2: l.reduced_chi2,
        }
    }
}

fn num<T: std::str::FromStr>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|_| format!("invalid number {s:?}"))
}

fn parse_row(text: &str) -> std::result::Result<ReportRow, String> {
    let f: Vec<&str> = text.split_whitespace().collect();
    if f.len() != 7 {
        return Err(format!("expected 7 columns, got {}", f.len()));
    }
    let counts = f[1]
        .split(',')
        .map(num::<u32>)
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(ReportRow {
        step: num(f[0])?,
        position: LatticePosition::from_counts(counts),
        raw_counts: num(f[2])?,
        background: num(f[3])?,
        mu: num(f[4])?,
        sigma: num(f[5])?,
        probability: num(f[6])?,
    })
}

fn parse_loss(text: &str) -> std::result::Result<LossLine, String> {
    let mut l = LossLine {
        cavity: 0,
        loss_db: 0.0,
        sigma_db: 0.0,
        points: 0,
        reduced_chi2: 0.0,
    };
    for kv in text.split_whitespace() {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| format!("malformed loss field {kv:?}"))?;
        match k {
            "cavity" => l.cavity = num(v)?,
            "db" => l.loss_db = num(v)?,
            "sigma_db" => l.sigma_db = num(v)?,
            "points" => l.points = num(v)?,
            "reduced_chi2" => l.reduced_chi2 = num(v)?,
            _ => return Err(format!("unknown loss field {k:?}")),
        }
    }
    Ok(l)
}

/// Per-step fidelity between the distributions of two reports.
pub fn compare_reports(a: &Report, b: &Report) -> Result<FidelitySeries> {
    fidelity_series(&a.distributions()?, &b.distributions()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::{coin_from_bias, evolve, WalkState};
    use proptest::prelude::*;

    fn ideal(eta: f64, steps: u32) -> Report {
        let coin = coin_from_bias(eta).unwrap();
        let dists = evolve(&WalkState::initial(1), &coin, steps, None).unwrap();
        Report::from_distributions(&dists)
    }

    #[test]
    fn balanced_two_steps() {
        let text = ideal(0.5, 2).to_text();
        assert!(text.contains("\n2 0 0 0 0.25 0 0.25\n"), "{text}");
        assert!(text.contains("\n2 1 0 0 0.5 0 0.5\n"), "{text}");
        assert!(text.contains("\n2 2 0 0 0.25 0 0.25\n"), "{text}");
    }

    #[test]
    fn compare_identical_and_mismatched() {
        let a = ideal(0.5, 10);
        let f = compare_reports(&a, &a).unwrap();
        assert_eq!(f.entries.len(), 10);
        assert!(f.entries.iter().all(|e| (e.1 - 1.0).abs() < 1e-12));
        let short = ideal(0.5, 8);
        assert!(matches!(
            compare_reports(&a, &short),
            Err(Error::Alignment(_))
        ));
    }

    #[test]
    fn bad_header() {
        assert!(matches!(
            Report::read("#something else\n".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn bad_row_reports_line() {
        let text = format!("{REPORT_HEADER}\n{COLUMNS}\n1 0 0 0 0.5 0\n");
        assert!(matches!(
            Report::read(text.as_bytes()),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    fn row() -> impl Strategy<Value = ReportRow> {
        (
            1u32..80,
            prop::collection::vec(0u32..80, 1..3),
            any::<u64>(),
            -1e3f64..1e3,
            -1.0f64..1.0,
            0.0f64..1.0,
            0.0f64..1.0,
        )
            .prop_map(|(step, counts, raw, bg, mu, sigma, p)| ReportRow {
                step,
                position: LatticePosition::from_counts(counts),
                raw_counts: raw,
                background: bg,
                mu,
                sigma,
                probability: p,
            })
    }

    proptest! {
        #[test]
        fn round_trip(
            rows in prop::collection::vec(row(), 0..20),
            fid in prop::collection::vec((1u32..80, 0.0f64..=1.0), 0..10),
            loss in prop::collection::vec((0usize..4, 0.0f64..2.0, 0.0f64..1.0, 0usize..100, 0.0f64..10.0), 0..3),
        ) {
            let report = Report {
                meta: vec![("eta_c".into(), "0.5".into()), ("seed".into(), "7".into())],
                losses: loss.into_iter().map(|(cavity, loss_db, sigma_db, points, reduced_chi2)| LossLine {
                    cavity, loss_db, sigma_db, points, reduced_chi2,
                }).collect(),
                rows,
                fidelity: fid,
            };
            let text = report.to_text();
            let back = Report::read(text.as_bytes()).unwrap();
            prop_assert_eq!(&back, &report);
            prop_assert_eq!(back.to_text(), text);
        }
    }
}
