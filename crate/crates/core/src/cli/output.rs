//! CSV schema, number formatting and atomic file output.

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use crate::analysis::{RowStatus, SweepRow};
use crate::closedform::ChannelQuantities;
use crate::{Error, Result};

pub const COLUMNS: [&str; 12] = [
    "a",
    "r",
    "omega",
    "alpha_sq",
    "encoding",
    "protocol",
    "fidelity",
    "mutual_info_bits",
    "conditional_entropy_bits",
    "capacity_bits",
    "coherent_info_bits",
    "status",
];

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `printf("%.12g")`: shortest of fixed and scientific notation, trailing
/// zeros removed.
pub fn format_real(x: f64) -> String {
    format_significant(x, SIGNIFICANT_DIGITS)
}

pub fn format_significant(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn record(row: &SweepRow) -> Vec<String> {
    let q = row.quantities.unwrap_or(ChannelQuantities {
        fidelity: f64::NAN,
        mutual_info_bits: f64::NAN,
        conditional_entropy_bits: f64::NAN,
        capacity_bits: f64::NAN,
        coherent_info_bits: f64::NAN,
        source_entropy_bits: f64::NAN,
    });
    let mut out: Vec<String> = [row.a, row.r, row.omega, row.alpha_sq]
        .iter()
        .map(|&x| format_real(x))
        .collect();
    out.push(row.encoding.to_string());
    out.push(row.protocol.to_string());
    out.extend(
        [
            q.fidelity,
            q.mutual_info_bits,
            q.conditional_entropy_bits,
            q.capacity_bits,
            q.coherent_info_bits,
        ]
        .iter()
        .map(|&x| format_real(x)),
    );
    out.push(row.status.to_string());
    out
}

fn csv_error(e: csv::Error) -> Error {
    Error::input(format!("csv: {e}"))
}

/// Writes the header once and one record per row, LF-terminated.
pub fn write_rows<W: Write>(sink: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink);
    w.write_record(COLUMNS).map_err(csv_error)?;
    for row in rows {
        w.write_record(record(row)).map_err(csv_error)?;
    }
    w.flush()
        .map_err(|e| Error::input(format!("write failed: {e}")))?;
    Ok(())
}

pub fn rows_to_string(rows: &[SweepRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_rows(&mut buf, rows)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

/// Writes `contents` next to `path` under a temporary name and renames it
/// into place, so a failed run never leaves a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn parse_real(field: &str, column: &str, line: u64) -> Result<f64> {
    field.trim().parse().map_err(|_| {
        Error::input(format!(
            "line {line}: bad number '{field}' in column {column}"
        ))
    })
}

/// Parses a CSV written by [`write_rows`]. Rows with a status other than
/// `ok` are kept as failed rows.
pub fn read_rows<R: Read>(source: R) -> Result<Vec<SweepRow>> {
    let mut reader = csv::Reader::from_reader(source);
    let headers = reader.headers().map_err(csv_error)?.clone();
    if headers.iter().collect::<Vec<_>>() != COLUMNS {
        return Err(Error::input(format!(
            "unexpected header '{}', expected '{}'",
            headers.iter().collect::<Vec<_>>().join(","),
            COLUMNS.join(",")
        )));
    }
    let mut rows = Vec::new();
    for (k, rec) in reader.records().enumerate() {
        let rec = rec.map_err(csv_error)?;
        let line = k as u64 + 2;
        let num = |c: usize| parse_real(&rec[c], COLUMNS[c], line);
        let status = match &rec[11] {
            "ok" => RowStatus::Ok,
            other => RowStatus::Failed(other.strip_prefix("error: ").unwrap_or(other).to_string()),
        };
        let quantities = (status == RowStatus::Ok)
            .then(|| -> Result<ChannelQuantities> {
                Ok(ChannelQuantities {
                    fidelity: num(6)?,
                    mutual_info_bits: num(7)?,
                    conditional_entropy_bits: num(8)?,
                    capacity_bits: num(9)?,
                    coherent_info_bits: num(10)?,
                    source_entropy_bits: f64::NAN,
                })
            })
            .transpose()?;
        rows.push(SweepRow {
            a: num(0)?,
            r: num(1)?,
            omega: num(2)?,
            alpha_sq: num(3)?,
            encoding: rec[4].parse()?,
            protocol: rec[5].parse()?,
            quantities,
            status,
        });
    }
    Ok(rows)
}

/// Creates `dir` if needed and writes `name` inside it atomically.
pub fn write_into(dir: &Path, name: &str, contents: &[u8]) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    write_atomic(&dir.join(name), contents)
}
