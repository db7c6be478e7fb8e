//! Parallel runs of the full pipeline over a range of conductors.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::classnum::conductor_precheck;
use crate::error::{Error, Result};
use crate::verdict::{euclidean_verdict, FieldInput, PipelineOptions, Verdict};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatchOptions {
    pub from: u64,
    pub to: u64,
    /// Worker threads; `0` lets the pool pick.
    pub jobs: usize,
    pub pipeline: PipelineOptions,
}

#[derive(Debug, Clone)]
pub struct BatchEntry {
    pub conductor: u64,
    pub verdict: &'static str,
    pub prime_q: Option<u64>,
    pub ideal: Option<String>,
    pub detail: String,
    pub certificate: Option<String>,
    pub wall: Duration,
}

/// Conductors in `[from, to]` that pass the class-number pre-check.
pub fn batch_candidates(from: u64, to: u64) -> Vec<u64> {
    (from..=to)
        .filter(|&f| conductor_precheck(f).passed())
        .collect()
}

fn run_one(f: u64, opts: &PipelineOptions) -> BatchEntry {
    let t = Instant::now();
    let mut e = BatchEntry {
        conductor: f,
        verdict: "error",
        prime_q: None,
        ideal: None,
        detail: String::new(),
        certificate: None,
        wall: Duration::ZERO,
    };
    match euclidean_verdict(&FieldInput::Conductor(f), opts) {
        Ok(v) => {
            e.verdict = v.label();
            match v {
                Verdict::Euclidean { certificate, .. } => {
                    e.prime_q = Some(certificate.prime_q);
                    e.ideal = Some(crate::parse::format_ideal(
                        &certificate.prime_q.into(),
                        &certificate.prime_ideal_second_generator,
                    ));
                    e.certificate = Some(certificate.to_json());
                }
                Verdict::NotClassNumberOne(r) => e.detail = r.verdict.to_string(),
                Verdict::Undecided { reason } => e.detail = reason,
                Verdict::Exhausted { q_max } => {
                    e.detail = format!("no admissible prime q <= {q_max}")
                }
            }
        }
        Err(err) => e.detail = err.to_string(),
    }
    e.wall = t.elapsed();
    e
}

/// Run the pipeline on every candidate conductor. Results are sorted by
/// conductor, so the output does not depend on scheduling.
pub fn run_batch(opts: &BatchOptions) -> Result<Vec<BatchEntry>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let fs = batch_candidates(opts.from, opts.to);
    let mut out: Vec<BatchEntry> =
        pool.install(|| fs.par_iter().map(|&f| run_one(f, &opts.pipeline)).collect());
    out.sort_by_key(|e| e.conductor);
    Ok(out)
}

fn dash(x: Option<String>) -> String {
    x.unwrap_or_else(|| "-".into())
}

/// Deterministic summary, one line per conductor. Wall times are kept out
/// of it, see [`timings_tsv`].
pub fn summary_tsv(entries: &[BatchEntry]) -> String {
    let mut s = String::from("# conductor\tverdict\tq\tideal\tdetail\n");
    for e in entries {
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}",
            e.conductor,
            e.verdict,
            dash(e.prime_q.map(|q| q.to_string())),
            dash(e.ideal.clone()),
            e.detail
        );
    }
    s
}

pub fn timings_tsv(entries: &[BatchEntry]) -> String {
    let mut s = String::from("# conductor\twall_ms\n");
    for e in entries {
        let _ = writeln!(s, "{}\t{:.3}", e.conductor, e.wall.as_secs_f64() * 1e3);
    }
    s
}

pub fn certificate_file_name(f: u64) -> String {
    format!("certificate_{f}.json")
}

/// Write `summary.tsv`, `timings.tsv` and one certificate per Euclidean
/// field into `dir`.
pub fn write_batch(entries: &[BatchEntry], dir: &Path) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("summary.tsv"), summary_tsv(entries))?;
    fs::write(dir.join("timings.tsv"), timings_tsv(entries))?;
    for e in entries {
        if let Some(c) = &e.certificate {
            fs::write(dir.join(certificate_file_name(e.conductor)), c)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_has_no_candidates() {
        assert!(batch_candidates(74, 78).is_empty());
        assert_eq!(batch_candidates(7, 20), vec![7, 9, 13, 19]);
    }

    #[test]
    fn small_batch_is_sorted() {
        let opts = BatchOptions {
            from: 60,
            to: 100,
            jobs: 3,
            pipeline: PipelineOptions::default(),
        };
        let out = run_batch(&opts).unwrap();
        let fs: Vec<u64> = out.iter().map(|e| e.conductor).collect();
        assert_eq!(fs, vec![61, 67, 73, 79, 97]);
        assert!(out.iter().all(|e| e.verdict == "euclidean"));
    }
}
