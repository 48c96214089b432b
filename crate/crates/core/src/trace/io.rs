use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{RunMeta, RunTrace};
use crate::bandit::StepRecord;
use crate::error::{Error, Result};

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum LineRef<'a> {
    Meta(&'a RunMeta),
    Step(&'a StepRecord),
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Line {
    Meta(RunMeta),
    Step(StepRecord),
}

/// Writes the trace as JSON Lines: the meta object, then one object per step.
pub fn serialize_trace<W: Write>(trace: &RunTrace, mut out: W) -> Result<()> {
    write_line(&mut out, &LineRef::Meta(&trace.meta))?;
    for rec in &trace.steps {
        write_line(&mut out, &LineRef::Step(rec))?;
    }
    out.flush()?;
    Ok(())
}

fn write_line<W: Write>(out: &mut W, line: &LineRef<'_>) -> Result<()> {
    serde_json::to_writer(&mut *out, line).map_err(std::io::Error::from)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn to_bytes(trace: &RunTrace) -> Vec<u8> {
    let mut buf = Vec::new();
    serialize_trace(trace, &mut buf).expect("writing to a Vec cannot fail");
    buf
}

/// Parses the line format without checking step invariants.
///
/// Used where a malformed trace must still be inspected (external validation).
pub fn parse_trace<R: Read>(input: R) -> Result<RunTrace> {
    let reader = BufReader::new(input);
    let mut meta = None;
    let mut steps = Vec::new();

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: Line = serde_json::from_str(&line)
            .map_err(|e| Error::Parse { line: lineno, message: e.to_string() })?;
        match (parsed, meta.is_some()) {
            (Line::Meta(m), false) if lineno == 1 => meta = Some(m),
            (Line::Meta(_), _) => {
                return Err(Error::Parse {
                    line: lineno,
                    message: "meta object must appear exactly once, on line 1".into(),
                })
            }
            (Line::Step(_), false) => {
                return Err(Error::Parse { line: lineno, message: "step before meta".into() })
            }
            (Line::Step(s), true) => steps.push(s),
        }
    }

    let meta = meta.ok_or(Error::Parse { line: 1, message: "missing meta line".into() })?;
    Ok(RunTrace { meta, steps })
}

/// Parses and validates a trace.
pub fn deserialize_trace<R: Read>(input: R) -> Result<RunTrace> {
    let trace = parse_trace(input)?;
    trace.check_invariants()?;
    Ok(trace)
}

pub fn read_trace_file(path: impl AsRef<Path>) -> Result<RunTrace> {
    deserialize_trace(fs::File::open(path)?)
}

pub fn write_trace_file(trace: &RunTrace, path: impl AsRef<Path>) -> Result<()> {
    let file = fs::File::create(path)?;
    serialize_trace(trace, std::io::BufWriter::new(file))
}
