use std::io::{BufRead, Write};

use super::PointConfiguration;
use crate::error::{Error, Result};

/// One JSON object `{chain, step, points}` per line.
pub fn write_jsonl<W: Write>(samples: &[PointConfiguration], mut out: W) -> Result<()> {
    for s in samples {
        serde_json::to_writer(&mut out, s)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads the format written by [`write_jsonl`]; blank lines are skipped.
pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<PointConfiguration>> {
    let mut out = Vec::new();
    for (k, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let c: PointConfiguration = serde_json::from_str(&line)
            .map_err(|e| Error::InvalidArgument(format!("line {}: {e}", k + 1)))?;
        out.push(c);
    }
    Ok(out)
}
