//! One decimal nanosecond duration per line, no header.
//!
//! The reader accepts LF and CRLF line endings (the original C collector
//! printed `\r\n`). The writer emits LF.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub fn read_timings<R: BufRead>(reader: R) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for (idx, line) in reader.split(b'\n').enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let text = line.strip_suffix(b"\r").unwrap_or(&line);
        if text.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                reason: "empty line".to_owned(),
            });
        }
        if !text.iter().all(u8::is_ascii_digit) {
            return Err(Error::Parse {
                line: line_no,
                reason: format!(
                    "expected a decimal integer, found {:?}",
                    String::from_utf8_lossy(text)
                ),
            });
        }
        // Digits-only ASCII, so this is valid UTF-8.
        let digits = std::str::from_utf8(text).expect("ascii digits");
        let value = digits.parse::<u64>().map_err(|e| Error::Parse {
            line: line_no,
            reason: format!("{digits}: {e}"),
        })?;
        out.push(value);
    }
    if out.is_empty() {
        return Err(Error::EmptySeries);
    }
    Ok(out)
}

pub fn write_timings<W: Write>(
    mut writer: W,
    durations: impl IntoIterator<Item = u64>,
) -> Result<()> {
    for d in durations {
        writeln!(writer, "{d}")?;
    }
    writer.flush()?;
    Ok(())
}
