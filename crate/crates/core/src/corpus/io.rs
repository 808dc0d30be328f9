use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use log::{debug, warn};
use serde_json::Value;

use super::{validate_record, CorpusStore, IngestConfig, PaperRecord, RejectReason};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoadReport {
    /// Record lines seen, excluding the header and blank lines.
    pub lines: usize,
    pub accepted: usize,
    pub malformed: usize,
    pub rejections: Vec<(String, RejectReason)>,
}

pub fn load_corpus(path: &Path, config: &IngestConfig) -> Result<(CorpusStore, LoadReport)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_corpus(BufReader::new(file), config).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

/// Streams line-delimited records. Only accepted records are retained.
pub fn read_corpus<R: BufRead>(reader: R, config: &IngestConfig) -> Result<(CorpusStore, LoadReport)> {
    let mut report = LoadReport::default();
    let mut records = Vec::new();
    let mut ids = HashSet::new();
    let mut header_seen = false;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<corpus>", e))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if !header_seen {
            check_header(line)?;
            header_seen = true;
            continue;
        }
        report.lines += 1;
        let raw: PaperRecord = match serde_json::from_str(line) {
            Ok(r) => r,
            Err(e) => {
                debug!("line {}: malformed record: {e}", lineno + 1);
                report.malformed += 1;
                continue;
            }
        };
        let id = raw.id.clone();
        match validate_record(raw, config) {
            Ok(rec) => {
                if ids.insert(rec.id.clone()) {
                    records.push(rec);
                } else {
                    report.rejections.push((id, RejectReason::DuplicateId));
                }
            }
            Err(reason) => report.rejections.push((id, reason)),
        }
    }

    if report.malformed > 0 {
        warn!("{} of {} corpus lines malformed and skipped", report.malformed, report.lines);
    }
    if report.lines > 0 && report.malformed * 2 > report.lines {
        return Err(Error::CorpusQuality {
            malformed: report.malformed,
            total: report.lines,
        });
    }
    report.accepted = records.len();
    Ok((CorpusStore::from_records(records), report))
}

fn check_header(line: &str) -> Result<()> {
    let found = serde_json::from_str::<Value>(line)
        .ok()
        .and_then(|v| v.get("schema_version").cloned());
    match found {
        Some(v) if v.as_u64() == Some(SCHEMA_VERSION as u64) => Ok(()),
        Some(v) => Err(Error::SchemaVersion {
            expected: SCHEMA_VERSION,
            found: v.to_string(),
        }),
        None => Err(Error::SchemaVersion {
            expected: SCHEMA_VERSION,
            found: "no header".to_string(),
        }),
    }
}

/// Writes the canonical form: a header line, then one record per line in store order.
pub fn write_corpus<W: Write>(store: &CorpusStore, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{{\"schema_version\":{SCHEMA_VERSION}}}")?;
    write_records(store.papers(), &mut out)
}

pub(crate) fn write_records<W: Write>(papers: &[PaperRecord], mut out: W) -> std::io::Result<()> {
    for paper in papers {
        serde_json::to_writer(&mut out, paper)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_rejections<W: Write>(report: &LoadReport, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["paper_id", "reason"])?;
    for (id, reason) in &report.rejections {
        w.write_record([id.as_str(), reason.as_str()])?;
    }
    w.flush()?;
    Ok(())
}
