//! Flat-file formats.
//!
//! * Vector files: CSV with header `re,im`, one row per antenna (or beam)
//!   index in ascending order.
//! * Path files: CSV with header `alpha_re,alpha_im,omega`, one row per path.
//! * Result files: CSV with header
//!   `snr_db,estimator,metric,value,trials,wall_time_ms,b`.
//! * Run manifests: the sweep config in `key = value` form preceded by `#`
//!   metadata lines, so a manifest can be fed back as a config.
//!
//! Floats are written with Rust's shortest round-trip formatting.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::channel::{ChannelModel, PathComponent};
use crate::error::{Error, Result};
use crate::sim::{SimConfig, SweepRecord};

pub const VECTOR_HEADER: &str = "re,im";
pub const PATHS_HEADER: &str = "alpha_re,alpha_im,omega";
pub const RESULTS_HEADER: &str = "snr_db,estimator,metric,value,trials,wall_time_ms,b";

fn parse_rows(text: &str, header: &str, width: usize) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim().replace(' ', "") == header => {}
        Some((i, h)) => {
            return Err(Error::Parse { line: i + 1, message: format!("expected header '{header}', got '{}'", h.trim()) })
        }
        None => return Err(Error::Parse { line: 1, message: format!("missing header '{header}'") }),
    }
    lines
        .map(|(i, l)| {
            let line = i + 1;
            let fields: Vec<&str> = l.split(',').map(str::trim).collect();
            if fields.len() != width {
                return Err(Error::Parse { line, message: format!("expected {width} fields, got {}", fields.len()) });
            }
            let values = fields
                .iter()
                .map(|f| {
                    let v: f64 = f.parse().map_err(|_| Error::Parse { line, message: format!("invalid number '{f}'") })?;
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(Error::Parse { line, message: format!("non-finite value '{f}'") })
                    }
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok((line, values))
        })
        .collect()
}

pub fn parse_vector_csv(text: &str) -> Result<Vec<Complex64>> {
    let rows = parse_rows(text, VECTOR_HEADER, 2)?;
    if rows.is_empty() {
        return Err(Error::Parse { line: 2, message: "vector file has no rows".into() });
    }
    Ok(rows.into_iter().map(|(_, v)| Complex64::new(v[0], v[1])).collect())
}

pub fn format_vector_csv(data: &[Complex64]) -> String {
    let mut out = String::with_capacity(24 * (data.len() + 1));
    out.push_str(VECTOR_HEADER);
    out.push('\n');
    for z in data {
        let _ = writeln!(out, "{},{}", z.re, z.im);
    }
    out
}

pub fn parse_paths_csv(text: &str, b: usize) -> Result<ChannelModel> {
    let rows = parse_rows(text, PATHS_HEADER, 3)?;
    if rows.is_empty() {
        return Err(Error::Parse { line: 2, message: "paths file has no rows".into() });
    }
    let paths = rows
        .into_iter()
        .map(|(line, v)| {
            PathComponent::new(Complex64::new(v[0], v[1]), v[2])
                .map_err(|e| Error::Parse { line, message: e.to_string() })
        })
        .collect::<Result<Vec<_>>>()?;
    ChannelModel::custom(b, paths)
}

pub fn format_paths_csv(model: &ChannelModel) -> String {
    let mut out = String::from(PATHS_HEADER);
    out.push('\n');
    for p in model.paths() {
        let _ = writeln!(out, "{},{},{}", p.alpha.re, p.alpha.im, p.omega);
    }
    out
}

pub fn format_results_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    for r in records {
        let snr = r.snr_db.map(|s| s.to_string()).unwrap_or_default();
        let wall = r.wall_time_ms.map(|w| w.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{snr},{},{},{},{},{wall},{}",
            r.estimator.name(),
            r.metric.name(),
            r.value,
            r.trial_count,
            r.b
        );
    }
    out
}

/// Everything needed to rerun a command exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub config: SimConfig,
    pub threads: usize,
    pub wall_time_ms: f64,
}

impl RunManifest {
    pub fn to_text(&self) -> String {
        format!(
            "# tool = beaches\n# version = {}\n# command = {}\n# master_seed = {}\n# threads = {}\n# wall_time_ms = {}\n{}",
            crate::VERSION,
            self.command,
            self.config.master_seed,
            self.threads,
            self.wall_time_ms,
            self.config.to_text()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{Estimator, Metric};
    use proptest::prelude::*;

    #[test]
    fn vector_parse_errors_carry_line_numbers() {
        assert!(matches!(parse_vector_csv("x,y\n1,2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_vector_csv("re,im\n1,2\n3\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_vector_csv("re,im\n1,2\n3,abc\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_vector_csv("re,im\nnan,0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_vector_csv("re,im\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_vector_csv(""), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn paths_file() {
        let m = parse_paths_csv("alpha_re,alpha_im,omega\n1,0,0\n", 4).unwrap();
        assert_eq!(m.paths().len(), 1);
        assert_eq!(parse_paths_csv(&format_paths_csv(&m), 4).unwrap(), m);
        assert!(matches!(parse_paths_csv("alpha_re,alpha_im,omega\n1,0,7\n", 4), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn results_layout() {
        let recs = vec![
            SweepRecord {
                snr_db: Some(-2.5),
                b: 32,
                estimator: Estimator::Beaches,
                metric: Metric::Mse,
                value: 0.125,
                trial_count: 10,
                wall_time_ms: None,
            },
            SweepRecord {
                snr_db: None,
                b: 1024,
                estimator: Estimator::Beaches,
                metric: Metric::RuntimeMs,
                value: 0.5,
                trial_count: 20,
                wall_time_ms: Some(12.0),
            },
        ];
        assert_eq!(
            format_results_csv(&recs),
            format!("{RESULTS_HEADER}\n-2.5,beaches,mse,0.125,10,,32\n,beaches,runtime_ms,0.5,20,12,1024\n")
        );
    }

    #[test]
    fn manifest_is_a_valid_config() {
        let m = RunManifest { command: "sweep --kind mse".into(), config: SimConfig::default(), threads: 3, wall_time_ms: 1.5 };
        assert_eq!(SimConfig::parse(&m.to_text()).unwrap(), m.config);
    }

    proptest! {
        #[test]
        fn vector_round_trip(v in prop::collection::vec((any::<f64>(), any::<f64>()), 1..50)) {
            let data: Vec<Complex64> = v.into_iter()
                .map(|(a, b)| Complex64::new(if a.is_finite() { a } else { 0.0 }, if b.is_finite() { b } else { 0.0 }))
                .collect();
            let back = parse_vector_csv(&format_vector_csv(&data)).unwrap();
            prop_assert_eq!(back, data);
        }
    }
}
